//! Clipping a graph to a closed disc, closing it off with circular arcs.

use std::f64::consts::{FRAC_PI_2, TAU};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::frame::{Frame, Incident, LinkShape};
use crate::geometry::{norm_angle_pos, point_segment_distance, Point2, SNAP_TOL};
use crate::graph::GeometricGraph;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum WindowError {
    #[error("window radius must be positive and finite, got {0}")]
    BadRadius(f64),
    #[error("link {0} is tangent to the window circle")]
    DegenerateTangency(usize),
    #[error("node {0} lies on the window circle")]
    VertexOnCircle(usize),
    #[error("two circle crossings coincide near angle {0}")]
    CoincidentCrossings(f64),
}

/// Closed disc of observation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Window {
    pub center: Point2,
    pub radius: f64,
}

impl Window {
    pub fn new(center: Point2, radius: f64) -> Result<Self, WindowError> {
        if !(radius > 0.0 && radius.is_finite()) || !center.is_finite() {
            return Err(WindowError::BadRadius(radius));
        }
        Ok(Window { center, radius })
    }

    pub fn centered(radius: f64) -> Result<Self, WindowError> {
        Window::new(Point2::new(0.0, 0.0), radius)
    }

    pub fn area(&self) -> f64 {
        std::f64::consts::PI * self.radius * self.radius
    }

    pub fn contains(&self, p: Point2) -> bool {
        p.dist(self.center) <= self.radius
    }

    fn tol(&self) -> f64 {
        SNAP_TOL * self.radius.max(1.0)
    }
}

/// A graph cut to a disc, with the circle added as arc links.
///
/// Links `0..segment_count` are edge-parts; the remaining links are arcs.
#[derive(Debug, Clone)]
pub struct WindowGraph {
    pub window: Window,
    nodes: Vec<Point2>,
    links: Vec<[usize; 2]>,
    shapes: Vec<LinkShape>,
    incidence: Vec<Vec<Incident>>,
    /// Window node index of each source node inside the disc.
    pub node_source: Vec<Option<usize>>,
    /// Source link of each edge-part.
    pub part_source: Vec<usize>,
    /// Crossing nodes ordered by angle about the center.
    pub boundary_nodes: Vec<usize>,
    /// Circle hits of each source link (0, 1 or 2).
    pub crossing_multiplicity: Vec<u8>,
    /// Synthetic node carrying the full-circle arc when nothing crosses the circle.
    pub anchor: Option<usize>,
    segment_count: usize,
}

impl WindowGraph {
    pub fn segment_count(&self) -> usize {
        self.segment_count
    }

    pub fn arcs(&self) -> std::ops::Range<usize> {
        self.segment_count..self.links.len()
    }

    /// The straight part of the window graph: interior nodes, crossings and edge-parts.
    pub fn interior(&self) -> GeometricGraph {
        let keep: Vec<usize> = (0..self.nodes.len()).filter(|&n| Some(n) != self.anchor).collect();
        let nodes = keep.iter().map(|&n| self.nodes[n]).collect();
        // The anchor is always the last node, so indices of the rest are unchanged.
        GeometricGraph::assemble(nodes, self.links[..self.segment_count].to_vec())
    }

    /// M∂: total number of circle hits.
    pub fn boundary_hits(&self) -> usize {
        self.crossing_multiplicity.iter().map(|&m| m as usize).sum()
    }
}

impl Frame for WindowGraph {
    fn node_count(&self) -> usize {
        self.nodes.len()
    }
    fn node(&self, n: usize) -> Point2 {
        self.nodes[n]
    }
    fn link_count(&self) -> usize {
        self.links.len()
    }
    fn link_ends(&self, l: usize) -> [usize; 2] {
        self.links[l]
    }
    fn incidence(&self, n: usize) -> &[Incident] {
        &self.incidence[n]
    }
    fn shape(&self, l: usize) -> LinkShape {
        self.shapes[l]
    }
    fn is_counted_link(&self, l: usize) -> bool {
        self.anchor.is_none() || l < self.segment_count
    }
    fn is_counted_node(&self, n: usize) -> bool {
        Some(n) != self.anchor
    }
}

/// Splits `g` at the circle of `w`, drops everything outside and adds boundary arcs.
pub fn clip_to_window(g: &GeometricGraph, w: &Window) -> Result<WindowGraph, WindowError> {
    let c = w.center;
    let r = w.radius;
    let tol = w.tol();
    for (i, &p) in g.nodes().iter().enumerate() {
        if (p.dist(c) - r).abs() <= tol {
            return Err(WindowError::VertexOnCircle(i));
        }
    }

    let mut nodes = Vec::new();
    let mut node_source = vec![None; g.node_count()];
    for (i, &p) in g.nodes().iter().enumerate() {
        if p.dist(c) < r {
            node_source[i] = Some(nodes.len());
            nodes.push(p);
        }
    }

    let mut links = Vec::new();
    let mut part_source = Vec::new();
    let mut crossing_multiplicity = vec![0u8; g.link_count()];
    let mut boundary: Vec<(f64, usize)> = Vec::new();
    for (l, &[ia, ib]) in g.links().iter().enumerate() {
        let (a, b) = (g.nodes()[ia], g.nodes()[ib]);
        let (dist, _) = point_segment_distance(c, a, b);
        if dist > r + tol {
            continue;
        }
        // Tangency: the closest point of the carrying line touches the circle inside the segment.
        let d = b - a;
        let foot = ((c - a).dot(d) / d.dot(d)).clamp(0.0, 1.0);
        if (dist - r).abs() <= tol && foot > 0.0 && foot < 1.0 {
            return Err(WindowError::DegenerateTangency(l));
        }
        let hits = circle_hits(a, b, c, r);
        crossing_multiplicity[l] = hits.len() as u8;
        let mut ends = [node_source[ia], node_source[ib]];
        let mut add_boundary = |t: f64, nodes: &mut Vec<Point2>| {
            let p = a.lerp(b, t);
            let id = nodes.len();
            nodes.push(p);
            boundary.push((norm_angle_pos((p - c).y.atan2((p - c).x)), id));
            id
        };
        match (ends[0].is_some(), ends[1].is_some(), hits.as_slice()) {
            (true, true, []) => {}
            (true, false, [t]) => ends[1] = Some(add_boundary(*t, &mut nodes)),
            (false, true, [t]) => ends[0] = Some(add_boundary(*t, &mut nodes)),
            (false, false, [t0, t1]) => {
                ends[0] = Some(add_boundary(*t0, &mut nodes));
                ends[1] = Some(add_boundary(*t1, &mut nodes));
            }
            (false, false, []) => continue,
            _ => return Err(WindowError::DegenerateTangency(l)),
        }
        links.push([ends[0].unwrap(), ends[1].unwrap()]);
        part_source.push(l);
    }
    let segment_count = links.len();
    let mut shapes = vec![LinkShape::Segment; segment_count];

    boundary.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)));
    let m = boundary.len();
    for i in 0..m {
        let next = if i + 1 < m { boundary[i + 1].0 } else { boundary[0].0 + TAU };
        if m > 1 && (next - boundary[i].0) * r <= tol {
            return Err(WindowError::CoincidentCrossings(boundary[i].0));
        }
    }
    let mut anchor = None;
    if m == 0 {
        let id = nodes.len();
        nodes.push(Point2::new(c.x + r, c.y));
        anchor = Some(id);
        links.push([id, id]);
        shapes.push(LinkShape::Arc { center: c, radius: r, start: 0.0, sweep: TAU });
    } else {
        for i in 0..m {
            let (start, a) = boundary[i];
            let (end, b) = if i + 1 < m { boundary[i + 1] } else { (boundary[0].0 + TAU, boundary[0].1) };
            let sweep = if m == 1 { TAU } else { end - start };
            links.push([a, b]);
            shapes.push(LinkShape::Arc { center: c, radius: r, start, sweep });
        }
    }

    let mut incidence: Vec<Vec<Incident>> = vec![Vec::new(); nodes.len()];
    for (l, (&[a, b], shape)) in links.iter().zip(&shapes).enumerate() {
        let (out_a, out_b) = match *shape {
            LinkShape::Segment => ((nodes[b] - nodes[a]).angle(), (nodes[a] - nodes[b]).angle()),
            LinkShape::Arc { start, sweep, .. } => {
                let s = sweep.signum();
                (norm_angle_pos(start + s * FRAC_PI_2), norm_angle_pos(start + sweep - s * FRAC_PI_2))
            }
        };
        incidence[a].push(Incident { dir: 2 * l, angle: out_a });
        incidence[b].push(Incident { dir: 2 * l + 1, angle: out_b });
    }
    for inc in &mut incidence {
        inc.sort_by(|p, q| p.angle.total_cmp(&q.angle).then(p.dir.cmp(&q.dir)));
    }

    Ok(WindowGraph {
        window: *w,
        nodes,
        links,
        shapes,
        incidence,
        node_source,
        part_source,
        boundary_nodes: boundary.into_iter().map(|(_, id)| id).collect(),
        crossing_multiplicity,
        anchor,
        segment_count,
    })
}

/// Parameters in (0, 1) where segment `a`–`b` meets the circle, ascending.
fn circle_hits(a: Point2, b: Point2, c: Point2, r: f64) -> Vec<f64> {
    let d = b - a;
    let f = a - c;
    let qa = d.dot(d);
    let qb = 2.0 * f.dot(d);
    let qc = f.dot(f) - r * r;
    let disc = qb * qb - 4.0 * qa * qc;
    if disc <= 0.0 {
        return Vec::new();
    }
    let sq = disc.sqrt();
    // Numerically stable roots.
    let q = -0.5 * (qb + qb.signum() * sq);
    let (mut t0, mut t1) = if q == 0.0 { (-sq / (2.0 * qa), sq / (2.0 * qa)) } else { (q / qa, qc / q) };
    if t0 > t1 {
        std::mem::swap(&mut t0, &mut t1);
    }
    [t0, t1].into_iter().filter(|&t| t > 0.0 && t < 1.0).collect()
}
