//! Counting functionals inside an observation region and the exact identities between them.

use std::f64::consts::PI;

use serde::Serialize;

use crate::faces::{reference_point, FaceSet};
use crate::frame::{Frame, LinkShape};
use crate::geometry::Point2;
use crate::graph::{classify_vertex, GeometricGraph};
use crate::window::WindowGraph;

/// Region over which counts were taken.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Domain {
    /// Closed disc.
    Disc { center: Point2, radius: f64 },
    /// Half-open period rectangle `[x0, x0 + w) × [y0, y0 + h)` of a periodic frame.
    Block { origin: Point2, width: f64, height: f64 },
}

impl Domain {
    pub fn area(&self) -> f64 {
        match *self {
            Domain::Disc { radius, .. } => PI * radius * radius,
            Domain::Block { width, height, .. } => width * height,
        }
    }

    pub fn contains(&self, p: Point2) -> bool {
        match *self {
            Domain::Disc { center, radius } => p.dist(center) <= radius,
            Domain::Block { origin, width, height } => {
                p.x >= origin.x && p.x < origin.x + width && p.y >= origin.y && p.y < origin.y + height
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WindowCounts {
    pub domain: Domain,
    /// Vertices in the region, indexed by valency.
    pub n_verts: Vec<u64>,
    /// π-vertices in the region, indexed by valency (index 2 holds the double-π vertices).
    pub n_pi_verts: Vec<u64>,
    pub n_edges: u64,
    pub n_edges_star: u64,
    pub n_cells: u64,
    pub ell: f64,
    pub m: u64,
    pub m_prime: u64,
    pub m_boundary: u64,
    pub m_boundary_1: u64,
    pub m_boundary_2: u64,
    pub n: u64,
    pub n_prime: u64,
    pub script_a: f64,
    pub script_l: f64,
    pub script_v: i64,
    pub script_e: i64,
    pub script_s: i64,
    pub script_c: i64,
    pub script_x: i64,
}

impl WindowCounts {
    pub fn total_verts(&self) -> u64 {
        self.n_verts.iter().sum()
    }

    /// Σ k·n_verts[k].
    pub fn valency_sum(&self) -> u64 {
        self.n_verts.iter().enumerate().map(|(k, &c)| k as u64 * c).sum()
    }

    pub fn verts(&self, k: usize) -> u64 {
        self.n_verts.get(k).copied().unwrap_or(0)
    }

    pub fn pi_verts(&self, k: usize) -> u64 {
        self.n_pi_verts.get(k).copied().unwrap_or(0)
    }

    /// Σ_{k≥3} n_pi_verts[k].
    pub fn pi_verts_high(&self) -> u64 {
        self.n_pi_verts.iter().skip(3).sum()
    }

    pub fn region_area(&self) -> f64 {
        self.domain.area()
    }
}

fn vertex_tallies(g: &GeometricGraph, mut inside: impl FnMut(Point2) -> bool) -> (Vec<u64>, Vec<u64>) {
    let mut n_verts = Vec::new();
    let mut n_pi = Vec::new();
    for v in 0..g.node_count() {
        if !inside(g.nodes()[v]) {
            continue;
        }
        let c = classify_vertex(g, v);
        if n_verts.len() <= c.valency {
            n_verts.resize(c.valency + 1, 0);
            n_pi.resize(c.valency + 1, 0);
        }
        n_verts[c.valency] += 1;
        if c.is_pi {
            n_pi[c.valency] += 1;
        }
    }
    (n_verts, n_pi)
}

fn edge_tallies(g: &GeometricGraph, mut inside: impl FnMut(Point2) -> bool) -> (u64, u64) {
    let mut mids = 0;
    let mut ends = 0;
    for &[a, b] in g.links() {
        let (pa, pb) = (g.nodes()[a], g.nodes()[b]);
        mids += u64::from(inside(pa.midpoint(pb)));
        ends += u64::from(inside(pa)) + u64::from(inside(pb));
    }
    (mids, ends)
}

fn cell_tally(g: &GeometricGraph, faces: &FaceSet, mut inside: impl FnMut(Point2) -> bool) -> u64 {
    faces.faces.iter().filter(|f| inside(reference_point(g, f))).count() as u64
}

/// Counts in the disc of `wg`.
///
/// `raw`/`raw_faces` are the unclipped graph and its faces (for vertex classes and cell
/// reference points); `wfaces` are the faces of the clipped graph, i.e. the cell-parts.
pub fn window_counts(raw: &GeometricGraph, raw_faces: &FaceSet, wg: &WindowGraph, wfaces: &FaceSet) -> WindowCounts {
    let w = wg.window;
    let domain = Domain::Disc { center: w.center, radius: w.radius };
    let inside = |p: Point2| domain.contains(p);
    let (n_verts, n_pi_verts) = vertex_tallies(raw, inside);
    let (n_edges, n_edges_star) = edge_tallies(raw, inside);
    let n_cells = cell_tally(raw, raw_faces, inside);

    let ell = (0..wg.segment_count()).map(|l| wg.link_length(l)).sum();
    let m = wg.segment_count() as u64;
    let m_boundary_1 = wg.crossing_multiplicity.iter().filter(|&&c| c == 1).count() as u64;
    let m_boundary_2 = wg.crossing_multiplicity.iter().filter(|&&c| c == 2).count() as u64;
    let touches_circle =
        |f: &crate::faces::Face| f.circuits().any(|c| c.steps.iter().any(|d| matches!(wg.shape(d.link), LinkShape::Arc { .. })));

    let faces = &wfaces.faces;
    WindowCounts {
        domain,
        n_verts,
        n_pi_verts,
        n_edges,
        n_edges_star,
        n_cells,
        ell,
        m,
        m_prime: m - m_boundary_1 - m_boundary_2,
        m_boundary: wg.boundary_hits() as u64,
        m_boundary_1,
        m_boundary_2,
        n: faces.len() as u64,
        n_prime: faces.iter().filter(|f| !touches_circle(f)).count() as u64,
        script_a: faces.iter().map(|f| f.area).sum(),
        script_l: faces.iter().map(|f| f.perimeter).sum(),
        script_v: faces.iter().map(|f| f.vertex_count as i64).sum(),
        script_e: faces.iter().map(|f| f.edge_count as i64).sum(),
        script_s: faces.iter().map(|f| f.side_count as i64).sum(),
        script_c: faces.iter().map(|f| f.corner_count as i64).sum(),
        script_x: wfaces.euler_sum(),
    }
}

/// Per-period counts of a periodic frame.
///
/// `g` must hold enough copies of the period that every cell with its reference point in
/// the block is complete. Every object is counted once via its representative point.
pub fn block_counts(g: &GeometricGraph, faces: &FaceSet, origin: Point2, width: f64, height: f64) -> WindowCounts {
    let domain = Domain::Block { origin, width, height };
    let inside = |p: Point2| domain.contains(p);
    let (n_verts, n_pi_verts) = vertex_tallies(g, inside);
    let (n_edges, n_edges_star) = edge_tallies(g, inside);
    let ell = g
        .links()
        .iter()
        .filter(|&&[a, b]| inside(g.nodes()[a].midpoint(g.nodes()[b])))
        .map(|&[a, b]| g.nodes()[a].dist(g.nodes()[b]))
        .sum();
    let cells: Vec<_> = faces.faces.iter().filter(|f| inside(reference_point(g, f))).collect();
    let n = cells.len() as u64;
    WindowCounts {
        domain,
        n_verts,
        n_pi_verts,
        n_edges,
        n_edges_star,
        n_cells: n,
        ell,
        m: n_edges,
        m_prime: n_edges,
        m_boundary: 0,
        m_boundary_1: 0,
        m_boundary_2: 0,
        n,
        n_prime: n,
        script_a: cells.iter().map(|f| f.area).sum(),
        script_l: cells.iter().map(|f| f.perimeter).sum(),
        script_v: cells.iter().map(|f| f.vertex_count as i64).sum(),
        script_e: cells.iter().map(|f| f.edge_count as i64).sum(),
        script_s: cells.iter().map(|f| f.side_count as i64).sum(),
        script_c: cells.iter().map(|f| f.corner_count as i64).sum(),
        script_x: cells.iter().map(|f| f.chi).sum(),
    }
}

/// One identity: both sides and whether they agree.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityCheck {
    pub name: &'static str,
    pub lhs: f64,
    pub rhs: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityReport {
    pub checks: Vec<IdentityCheck>,
}

impl IdentityReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> Vec<&IdentityCheck> {
        self.checks.iter().filter(|c| !c.pass).collect()
    }
}

/// Relative tolerance for the area and perimeter identities.
pub const MEASURE_TOL: f64 = 1e-6;

/// Checks the exact counting identities and the area/perimeter relations.
pub fn check_identities(wc: &WindowCounts) -> IdentityReport {
    let mut checks = Vec::new();
    let mut exact = |name, lhs: i64, rhs: i64| {
        checks.push(IdentityCheck { name, lhs: lhs as f64, rhs: rhs as f64, pass: lhs == rhs })
    };
    let ksum = wc.valency_sum() as i64;
    let n_total = wc.total_verts() as i64;
    let m = wc.m as i64;
    exact("eq4", wc.n_edges_star as i64, ksum);
    exact("boundary_hits", wc.m_boundary as i64, (wc.m_boundary_1 + 2 * wc.m_boundary_2) as i64);
    exact("edge_parts", m - wc.m_prime as i64, (wc.m_boundary_1 + wc.m_boundary_2) as i64);
    exact("eq19_E", wc.script_e, 4 * m - ksum);
    exact(
        "eq19_C",
        wc.script_c,
        wc.script_e - 2 * wc.pi_verts(2) as i64 - wc.pi_verts_high() as i64,
    );
    exact("eq19_V", wc.script_v, wc.script_e + wc.verts(0) as i64);
    exact("eq19_S", wc.script_s, wc.script_c);
    let (x_rhs, perimeter_extra) = match wc.domain {
        Domain::Disc { radius, .. } => (m - n_total + 1, 2.0 * PI * radius),
        Domain::Block { .. } => (m - n_total, 0.0),
    };
    exact("eq20", wc.script_x, x_rhs);
    let mut approx = |name, lhs: f64, rhs: f64| {
        let pass = (lhs - rhs).abs() <= MEASURE_TOL * rhs.abs().max(1.0);
        checks.push(IdentityCheck { name, lhs, rhs, pass })
    };
    approx("script_A", wc.script_a, wc.region_area());
    approx("script_L", wc.script_l, 2.0 * wc.ell + perimeter_extra);
    IdentityReport { checks }
}

/// Euler relation in its general form: returns `(n − ℓ + 𝒳, u)` where `u` counts the pieces of the
/// frame bordering the unbounded region. The two agree on every finite graph.
pub fn euler_identity<F: Frame + ?Sized>(g: &F, faces: &FaceSet) -> (i64, i64) {
    let counted_nodes = (0..g.node_count()).filter(|&n| g.is_counted_node(n)).count() as i64;
    let counted_links = (0..g.link_count()).filter(|&l| g.is_counted_link(l)).count() as i64;
    let lhs = counted_nodes - counted_links + faces.euler_sum();
    (lhs, faces.unbounded_components() as i64)
}
