//! Straight-line planar graphs with angle-sorted incidence.

use std::collections::HashSet;
use std::fmt::Write as _;

use serde::Deserialize;
use thiserror::Error;

use crate::frame::Incident;
use crate::geometry::{point_segment_distance, segment_contact, BBox, Point2, SegmentContact, ANGLE_TOL, SNAP_TOL};
use crate::spatial::{overlapping_pairs, PointGrid};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GraphError {
    #[error("node {0} has a non-finite coordinate")]
    NonFiniteNode(usize),
    #[error("link {link} refers to missing node {node}")]
    BadIndex { link: usize, node: usize },
    #[error("nodes {0} and {1} coincide")]
    DuplicateNode(usize, usize),
    #[error("link {0} joins a node to itself")]
    LoopLink(usize),
    #[error("links {0} and {1} join the same pair of nodes")]
    DuplicateLink(usize, usize),
    #[error("interiors of links {0} and {1} intersect")]
    CrossingLinkInteriors(usize, usize),
    #[error("node {node} lies in the interior of link {link}")]
    NodeOnLinkInterior { node: usize, link: usize },
    #[error("malformed graph JSON: {0}")]
    Json(String),
}

/// A finite planar straight-line graph.
///
/// Directed link `2·l` runs from `links[l][0]` to `links[l][1]`; `2·l + 1` runs back.
#[derive(Debug, Clone, PartialEq)]
pub struct GeometricGraph {
    nodes: Vec<Point2>,
    links: Vec<[usize; 2]>,
    incidence: Vec<Vec<Incident>>,
}

impl GeometricGraph {
    pub fn empty() -> Self {
        GeometricGraph { nodes: Vec::new(), links: Vec::new(), incidence: Vec::new() }
    }

    pub fn nodes(&self) -> &[Point2] {
        &self.nodes
    }

    pub fn links(&self) -> &[[usize; 2]] {
        &self.links
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn link_count(&self) -> usize {
        self.links.len()
    }

    pub fn valency(&self, node: usize) -> usize {
        self.incidence[node].len()
    }

    /// Outgoing directed links at `node`, sorted by direction angle.
    pub fn incidence(&self, node: usize) -> &[Incident] {
        &self.incidence[node]
    }

    pub fn link_length(&self, link: usize) -> f64 {
        let [a, b] = self.links[link];
        self.nodes[a].dist(self.nodes[b])
    }

    pub fn total_length(&self) -> f64 {
        (0..self.links.len()).map(|l| self.link_length(l)).sum()
    }

    pub fn bbox(&self) -> BBox {
        BBox::of_points(self.nodes.iter().copied())
    }

    /// Builds the incidence structure without any geometric validation.
    ///
    /// Callers must already guarantee the graph invariants.
    pub(crate) fn assemble(nodes: Vec<Point2>, links: Vec<[usize; 2]>) -> Self {
        let mut incidence: Vec<Vec<Incident>> = vec![Vec::new(); nodes.len()];
        for (l, &[a, b]) in links.iter().enumerate() {
            incidence[a].push(Incident { dir: 2 * l, angle: (nodes[b] - nodes[a]).angle() });
            incidence[b].push(Incident { dir: 2 * l + 1, angle: (nodes[a] - nodes[b]).angle() });
        }
        for inc in &mut incidence {
            inc.sort_by(|p, q| p.angle.total_cmp(&q.angle).then(p.dir.cmp(&q.dir)));
        }
        GeometricGraph { nodes, links, incidence }
    }

    /// Same nodes, keeping only the links for which `keep` is true.
    pub fn retain_links(&self, mut keep: impl FnMut(usize) -> bool) -> Self {
        let links = (0..self.links.len()).filter(|&l| keep(l)).map(|l| self.links[l]).collect();
        GeometricGraph::assemble(self.nodes.clone(), links)
    }

    /// Serializes as `{"nodes":[[x,y],...],"links":[[i,j],...]}` with 17 significant digits.
    pub fn to_json(&self) -> String {
        let mut s = String::from("{\"nodes\":[");
        for (i, p) in self.nodes.iter().enumerate() {
            if i > 0 {
                s.push(',');
            }
            write!(s, "[{:.16e},{:.16e}]", p.x, p.y).unwrap();
        }
        s.push_str("],\"links\":[");
        for (i, [a, b]) in self.links.iter().enumerate() {
            if i > 0 {
                s.push(',');
            }
            write!(s, "[{a},{b}]").unwrap();
        }
        s.push_str("]}");
        s
    }

    pub fn from_json(text: &str) -> Result<Self, GraphError> {
        #[derive(Deserialize)]
        struct Raw {
            nodes: Vec<[f64; 2]>,
            links: Vec<[usize; 2]>,
        }
        let raw: Raw = serde_json::from_str(text).map_err(|e| GraphError::Json(e.to_string()))?;
        build_graph(raw.nodes.into_iter().map(Point2::from).collect(), raw.links)
    }
}

/// Validates nodes and links and returns the graph.
pub fn build_graph(nodes: Vec<Point2>, links: Vec<[usize; 2]>) -> Result<GeometricGraph, GraphError> {
    if let Some(i) = nodes.iter().position(|p| !p.is_finite()) {
        return Err(GraphError::NonFiniteNode(i));
    }
    for (l, &[a, b]) in links.iter().enumerate() {
        for n in [a, b] {
            if n >= nodes.len() {
                return Err(GraphError::BadIndex { link: l, node: n });
            }
        }
        if a == b {
            return Err(GraphError::LoopLink(l));
        }
    }
    check_distinct_nodes(&nodes)?;
    let mut seen = std::collections::HashMap::new();
    for (l, &[a, b]) in links.iter().enumerate() {
        let key = (a.min(b), a.max(b));
        if let Some(&first) = seen.get(&key) {
            return Err(GraphError::DuplicateLink(first, l));
        }
        seen.insert(key, l);
    }
    check_link_geometry(&nodes, &links)?;
    Ok(GeometricGraph::assemble(nodes, links))
}

fn check_distinct_nodes(nodes: &[Point2]) -> Result<(), GraphError> {
    let mut grid = PointGrid::new(SNAP_TOL * 4.0);
    for (i, &p) in nodes.iter().enumerate() {
        if let Some(&j) = grid.within(p, SNAP_TOL).first() {
            return Err(GraphError::DuplicateNode(j, i));
        }
        grid.insert(p);
    }
    Ok(())
}

fn check_link_geometry(nodes: &[Point2], links: &[[usize; 2]]) -> Result<(), GraphError> {
    // Links first, then nodes as degenerate boxes, so one sweep handles both checks.
    let mut boxes: Vec<BBox> =
        links.iter().map(|&[a, b]| BBox::of_points([nodes[a], nodes[b]])).collect();
    boxes.extend(nodes.iter().map(|&p| BBox::of_points([p])));
    let nl = links.len();
    let mut crossing = None;
    let mut on_interior = None;
    for (i, j) in overlapping_pairs(&boxes, SNAP_TOL) {
        match (i < nl, j < nl) {
            (true, true) => {
                if links_cross(nodes, links[i], links[j]) && crossing.is_none() {
                    crossing = Some((i, j));
                }
            }
            (true, false) => {
                let n = j - nl;
                let [a, b] = links[i];
                if n != a && n != b && on_interior.is_none() {
                    let (d, _) = point_segment_distance(nodes[n], nodes[a], nodes[b]);
                    if d <= SNAP_TOL {
                        on_interior = Some((n, i));
                    }
                }
            }
            _ => {}
        }
    }
    if let Some((i, j)) = crossing {
        return Err(GraphError::CrossingLinkInteriors(i, j));
    }
    if let Some((node, link)) = on_interior {
        return Err(GraphError::NodeOnLinkInterior { node, link });
    }
    Ok(())
}

fn links_cross(nodes: &[Point2], la: [usize; 2], lb: [usize; 2]) -> bool {
    let (a0, a1, b0, b1) = (nodes[la[0]], nodes[la[1]], nodes[lb[0]], nodes[lb[1]]);
    match segment_contact(a0, a1, b0, b1, SNAP_TOL) {
        SegmentContact::None => false,
        SegmentContact::Overlap { .. } => true,
        SegmentContact::Point { t, u } => {
            let la_len = a0.dist(a1);
            let lb_len = b0.dist(b1);
            let inside = |s: f64, len: f64| s * len > SNAP_TOL && (1.0 - s) * len > SNAP_TOL;
            // Endpoint-on-interior contacts are reported by the node check instead.
            inside(t, la_len) && inside(u, lb_len)
        }
    }
}

/// Angle-based classification of a node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct VertexClass {
    pub valency: usize,
    pub pi_angle_count: usize,
    pub is_pi: bool,
    pub is_double_pi: bool,
}

/// Counts gaps of π between cyclically consecutive emanating links.
pub fn classify_vertex(g: &GeometricGraph, node: usize) -> VertexClass {
    let inc = g.incidence(node);
    let k = inc.len();
    let mut count = 0;
    if k >= 2 {
        for i in 0..k {
            let a = inc[i].angle;
            let b = inc[(i + 1) % k].angle;
            let gap = if i + 1 == k { b + std::f64::consts::TAU - a } else { b - a };
            if (gap - std::f64::consts::PI).abs() < ANGLE_TOL {
                count += 1;
            }
        }
    }
    if k == 2 && count > 0 {
        count = 2;
    }
    VertexClass { valency: k, pi_angle_count: count, is_pi: count >= 1, is_double_pi: k == 2 && count == 2 }
}

/// Links of `g` as a set of sorted node pairs.
pub fn link_set(g: &GeometricGraph) -> HashSet<(usize, usize)> {
    g.links().iter().map(|&[a, b]| (a.min(b), a.max(b))).collect()
}
