//! Assembling face-circuits into open faces, and per-face metrics.

use std::collections::HashMap;
use std::f64::consts::TAU;

use serde::Serialize;
use thiserror::Error;

use crate::frame::{Frame, LinkShape};
use crate::geometry::{point_segment_distance, BBox, Point2, SNAP_TOL};
use crate::walk::{extract_circuits, FaceCircuit, WalkError};

/// Winding numbers farther than this from an integer signal a degenerate query.
const WINDING_TOL: f64 = 1e-6;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FaceError {
    #[error(transparent)]
    Walk(#[from] WalkError),
    #[error("containment of the point ({x}, {y}) is ambiguous")]
    AmbiguousContainment { x: f64, y: f64 },
    #[error("face starting at directed link {0}: Euler Entity from turning angles disagrees with hole count")]
    EulerMismatch(usize),
}

/// One open cell.
#[derive(Debug, Clone, PartialEq)]
pub struct Face {
    pub outer: FaceCircuit,
    pub holes: Vec<FaceCircuit>,
    pub isolated_nodes: Vec<usize>,
    pub chi: i64,
    pub edge_count: usize,
    pub vertex_count: usize,
    pub side_count: usize,
    pub corner_count: usize,
    pub area: f64,
    pub perimeter: f64,
}

/// Per-face record for JSON output.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FaceReport {
    pub chi: i64,
    #[serde(rename = "E")]
    pub e: usize,
    #[serde(rename = "V")]
    pub v: usize,
    #[serde(rename = "S")]
    pub s: usize,
    #[serde(rename = "C")]
    pub c: usize,
    pub area: f64,
    pub perimeter: f64,
    pub n_holes: usize,
    pub n_isolated: usize,
}

impl Face {
    pub fn report(&self) -> FaceReport {
        FaceReport {
            chi: self.chi,
            e: self.edge_count,
            v: self.vertex_count,
            s: self.side_count,
            c: self.corner_count,
            area: self.area,
            perimeter: self.perimeter,
            n_holes: self.holes.len(),
            n_isolated: self.isolated_nodes.len(),
        }
    }

    pub fn circuits(&self) -> impl Iterator<Item = &FaceCircuit> {
        std::iter::once(&self.outer).chain(&self.holes)
    }
}

/// Bounded faces plus whatever borders the unbounded region.
#[derive(Debug, Clone, PartialEq)]
pub struct FaceSet {
    /// Ordered by the smallest directed-link id of the outer circuit.
    pub faces: Vec<Face>,
    pub unbounded_holes: Vec<FaceCircuit>,
    pub unbounded_isolated: Vec<usize>,
}

impl FaceSet {
    pub fn euler_sum(&self) -> i64 {
        self.faces.iter().map(|f| f.chi).sum()
    }

    /// Number of connected pieces (including isolated nodes) bordering the unbounded region.
    pub fn unbounded_components(&self) -> usize {
        self.unbounded_holes.len() + self.unbounded_isolated.len()
    }

    pub fn all_circuits(&self) -> impl Iterator<Item = &FaceCircuit> {
        self.faces.iter().flat_map(|f| f.circuits()).chain(&self.unbounded_holes)
    }
}

/// Counts and measures of a face built from its circuits.
pub fn face_metrics<F: Frame + ?Sized>(
    g: &F,
    outer: FaceCircuit,
    holes: Vec<FaceCircuit>,
    isolated_nodes: Vec<usize>,
) -> Result<Face, FaceError> {
    let turning: f64 = outer.turning_sum + holes.iter().map(|h| h.turning_sum).sum::<f64>();
    let chi = (turning / TAU).round() as i64 - isolated_nodes.len() as i64;
    if chi != 1 - holes.len() as i64 - isolated_nodes.len() as i64 {
        return Err(FaceError::EulerMismatch(outer.start_id()));
    }
    let all = || std::iter::once(&outer).chain(holes.iter());
    let edge_count = all().map(|c| c.link_count).sum();
    let corner_count = all().map(|c| c.corner_count).sum();
    let counted_isolated = isolated_nodes.iter().filter(|&&n| g.is_counted_node(n)).count();
    let vertex_count = all().map(|c| c.node_count).sum::<usize>() + counted_isolated;
    let area = all().map(|c| c.signed_area(g)).sum();
    let perimeter = all().map(|c| c.length(g)).sum();
    Ok(Face {
        outer,
        holes,
        isolated_nodes,
        chi,
        edge_count,
        vertex_count,
        side_count: corner_count,
        corner_count,
        area,
        perimeter,
    })
}

struct Dsu(Vec<usize>);

impl Dsu {
    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

fn connected_components<F: Frame + ?Sized>(g: &F) -> Vec<usize> {
    let mut dsu = Dsu((0..g.node_count()).collect());
    for l in 0..g.link_count() {
        let [a, b] = g.link_ends(l);
        dsu.union(a, b);
    }
    (0..g.node_count()).map(|n| dsu.find(n)).collect()
}

/// Bounding box of a circuit, widened to the whole circle if it uses an arc.
pub fn circuit_bbox<F: Frame + ?Sized>(g: &F, c: &FaceCircuit) -> BBox {
    let mut b = BBox::of_points(c.visits(g).map(|n| g.node(n)));
    for d in &c.steps {
        if let LinkShape::Arc { center, radius, .. } = g.shape(d.link) {
            b.include(Point2::new(center.x - radius, center.y - radius));
            b.include(Point2::new(center.x + radius, center.y + radius));
        }
    }
    b
}

/// Winding number of `c` about `p`, or `None` when `p` is too close to call.
pub fn winding_number<F: Frame + ?Sized>(g: &F, c: &FaceCircuit, p: Point2) -> Option<i64> {
    for d in &c.steps {
        let near = match g.shape(d.link) {
            LinkShape::Segment => {
                let [a, b] = g.link_ends(d.link);
                point_segment_distance(p, g.node(a), g.node(b)).0 <= SNAP_TOL
            }
            LinkShape::Arc { center, radius, .. } => (p.dist(center) - radius).abs() <= SNAP_TOL * radius.max(1.0),
        };
        if near {
            return None;
        }
    }
    let w = c.steps.iter().map(|&d| g.winding_term(d, p)).sum::<f64>() / TAU;
    let r = w.round();
    ((w - r).abs() <= WINDING_TOL).then_some(r as i64)
}

/// Extracts circuits and assembles them into faces.
pub fn faces_of<F: Frame + ?Sized>(g: &F) -> Result<FaceSet, FaceError> {
    let circuits = extract_circuits(g)?;
    assemble_faces(g, circuits)
}

/// Groups circuits into faces: anticlockwise circuits seed faces, clockwise ones and
/// isolated nodes become holes of the innermost enclosing face of another component.
pub fn assemble_faces<F: Frame + ?Sized>(g: &F, circuits: Vec<FaceCircuit>) -> Result<FaceSet, FaceError> {
    let comp = connected_components(g);
    let mut outers = Vec::new();
    let mut holes = Vec::new();
    for c in circuits {
        if c.turning_sum > 0.0 {
            outers.push(c);
        } else {
            holes.push(c);
        }
    }
    let outer_comp: Vec<usize> = outers.iter().map(|c| comp[g.tail(c.steps[0])]).collect();
    let outer_area: Vec<f64> = outers.iter().map(|c| c.signed_area(g)).collect();
    let index = BoxIndex::new(outers.iter().map(|c| circuit_bbox(g, c)).collect());

    let enclosing = |p: Point2, own: usize| -> Result<Option<usize>, FaceError> {
        let mut best: Option<usize> = None;
        for i in index.query(p) {
            if outer_comp[i] == own {
                continue;
            }
            match winding_number(g, &outers[i], p) {
                None => return Err(FaceError::AmbiguousContainment { x: p.x, y: p.y }),
                Some(0) => {}
                Some(_) => {
                    if best.is_none_or(|b| outer_area[i] < outer_area[b]) {
                        best = Some(i);
                    }
                }
            }
        }
        Ok(best)
    };

    let mut face_holes: Vec<Vec<FaceCircuit>> = vec![Vec::new(); outers.len()];
    let mut face_isolated: Vec<Vec<usize>> = vec![Vec::new(); outers.len()];
    let mut unbounded_holes = Vec::new();
    let mut unbounded_isolated = Vec::new();
    for h in holes {
        let n = g.tail(h.steps[0]);
        match enclosing(g.node(n), comp[n])? {
            Some(i) => face_holes[i].push(h),
            None => unbounded_holes.push(h),
        }
    }
    for n in 0..g.node_count() {
        if g.incidence(n).is_empty() {
            match enclosing(g.node(n), comp[n])? {
                Some(i) => face_isolated[i].push(n),
                None => unbounded_isolated.push(n),
            }
        }
    }

    let mut faces = Vec::with_capacity(outers.len());
    for ((outer, hs), iso) in outers.into_iter().zip(face_holes).zip(face_isolated) {
        faces.push(face_metrics(g, outer, hs, iso)?);
    }
    Ok(FaceSet { faces, unbounded_holes, unbounded_isolated })
}

/// Uniform grid over boxes for point stabbing queries.
struct BoxIndex {
    boxes: Vec<BBox>,
    origin: Point2,
    cell: f64,
    buckets: HashMap<(i64, i64), Vec<usize>>,
}

impl BoxIndex {
    fn new(boxes: Vec<BBox>) -> Self {
        let mut all = BBox::empty();
        for b in &boxes {
            all.union(b);
        }
        let n = boxes.len().max(1) as f64;
        let span = all.width().max(all.height());
        let cell = if span.is_finite() && span > 0.0 { span / n.sqrt().max(1.0) } else { 1.0 };
        let origin = if all.min.is_finite() { all.min } else { Point2::default() };
        let mut idx = BoxIndex { boxes, origin, cell, buckets: HashMap::new() };
        for i in 0..idx.boxes.len() {
            let b = idx.boxes[i];
            let (x0, y0) = idx.key(b.min);
            let (x1, y1) = idx.key(b.max);
            for x in x0..=x1 {
                for y in y0..=y1 {
                    idx.buckets.entry((x, y)).or_default().push(i);
                }
            }
        }
        idx
    }

    fn key(&self, p: Point2) -> (i64, i64) {
        (((p.x - self.origin.x) / self.cell).floor() as i64, ((p.y - self.origin.y) / self.cell).floor() as i64)
    }

    fn query(&self, p: Point2) -> impl Iterator<Item = usize> + '_ {
        self.buckets
            .get(&self.key(p))
            .into_iter()
            .flatten()
            .copied()
            .filter(move |&i| self.boxes[i].contains(p, SNAP_TOL))
    }
}

/// Finds the bounded face containing a point.
pub struct FaceLocator<'a, F: Frame + ?Sized> {
    g: &'a F,
    faces: &'a [Face],
    index: BoxIndex,
}

impl<'a, F: Frame + ?Sized> FaceLocator<'a, F> {
    pub fn new(g: &'a F, faces: &'a [Face]) -> Self {
        let index = BoxIndex::new(faces.iter().map(|f| circuit_bbox(g, &f.outer)).collect());
        FaceLocator { g, faces, index }
    }

    /// `Ok(None)` for points in the unbounded region; `Err` when the point is on or near the frame.
    pub fn locate(&self, p: Point2) -> Result<Option<usize>, FaceError> {
        let mut best: Option<usize> = None;
        for i in self.index.query(p) {
            match winding_number(self.g, &self.faces[i].outer, p) {
                None => return Err(FaceError::AmbiguousContainment { x: p.x, y: p.y }),
                Some(0) => {}
                Some(_) => {
                    // The innermost outer boundary wins; its area includes its holes.
                    let area = |j: usize| self.faces[j].outer.signed_area(self.g);
                    if best.is_none_or(|b| area(i) < area(b)) {
                        best = Some(i);
                    }
                }
            }
        }
        if let Some(b) = best {
            for h in &self.faces[b].holes {
                if winding_number(self.g, h, p).is_none() {
                    return Err(FaceError::AmbiguousContainment { x: p.x, y: p.y });
                }
            }
            for &n in &self.faces[b].isolated_nodes {
                if self.g.node(n).dist(p) <= SNAP_TOL {
                    return Err(FaceError::AmbiguousContainment { x: p.x, y: p.y });
                }
            }
        }
        Ok(best)
    }
}

/// A maximal straight run of a circuit between two corners.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Side {
    pub length: f64,
    pub midpoint: Point2,
}

/// Sides of a circuit in walk order, starting after its first corner.
pub fn circuit_sides<F: Frame + ?Sized>(g: &F, c: &FaceCircuit) -> Vec<Side> {
    let n = c.steps.len();
    let Some(first) = c.turning_angles.iter().position(|&z| z != 0.0) else {
        return Vec::new();
    };
    let mut sides = Vec::new();
    let mut run: Vec<usize> = Vec::new();
    for k in 1..=n {
        let i = (first + k) % n;
        run.push(i);
        if c.turning_angles[i] != 0.0 {
            sides.push(side_of_run(g, c, &run));
            run.clear();
        }
    }
    sides
}

fn side_of_run<F: Frame + ?Sized>(g: &F, c: &FaceCircuit, run: &[usize]) -> Side {
    let lens: Vec<f64> = run.iter().map(|&i| g.link_length(c.steps[i].link)).collect();
    let length: f64 = lens.iter().sum();
    let mut remaining = 0.5 * length;
    for (&i, &len) in run.iter().zip(&lens) {
        if remaining <= len || i == *run.last().unwrap() {
            let d = c.steps[i];
            let t = if len > 0.0 { (remaining / len).clamp(0.0, 1.0) } else { 0.5 };
            let midpoint = match g.shape(d.link) {
                LinkShape::Segment => g.node(g.tail(d)).lerp(g.node(g.head(d)), t),
                LinkShape::Arc { center, radius, start, sweep } => {
                    let s = if d.forward { t } else { 1.0 - t };
                    Point2::from_polar(center, radius, start + s * sweep)
                }
            };
            return Side { length, midpoint };
        }
        remaining -= len;
    }
    unreachable!("run is non-empty")
}

/// Midpoint of the longest cell-side; near-ties go to the lexicographically smallest midpoint.
pub fn reference_point<F: Frame + ?Sized>(g: &F, face: &Face) -> Point2 {
    let sides: Vec<Side> = face.circuits().flat_map(|c| circuit_sides(g, c)).collect();
    let longest = sides.iter().map(|s| s.length).fold(0.0, f64::max);
    sides
        .iter()
        .filter(|s| s.length >= longest * (1.0 - 1e-9))
        .map(|s| s.midpoint)
        .min_by(|a, b| a.lex_cmp(*b))
        .expect("a face has at least one side")
}

/// For each node, the number of face-side interiors passing through it.
pub fn side_membership_pi_check<F: Frame + ?Sized>(g: &F, faces: &FaceSet) -> Vec<usize> {
    let mut count = vec![0; g.node_count()];
    for c in faces.all_circuits() {
        for (d, &z) in c.steps.iter().zip(&c.turning_angles) {
            if z == 0.0 {
                count[g.head(*d)] += 1;
            }
        }
    }
    count
}
