//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap};
use std::f64::consts::{PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tessgraph::faces::{FaceLocator, FaceSet};
use tessgraph::{build_graph, GeometricGraph, Point2};

/// Small planar graph on integer lattice points of `[0, side]²`: links are added at random
/// and kept only when the graph stays valid and no two links at a node are nearly parallel; unused chosen points stay as isolated nodes.
pub fn random_lattice_graph(seed: u64, max_links: usize, side: i32) -> GeometricGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pts: BTreeSet<(i32, i32)> = BTreeSet::new();
    let want = rng.random_range(4..=14);
    while pts.len() < want {
        pts.insert((rng.random_range(0..=side), rng.random_range(0..=side)));
    }
    let nodes: Vec<Point2> = pts.iter().map(|&(x, y)| Point2::new(x as f64, y as f64)).collect();
    let mut links: Vec<[usize; 2]> = Vec::new();
    let target = rng.random_range(max_links / 2..=max_links);
    for _ in 0..200 {
        if links.len() >= target {
            break;
        }
        let a = rng.random_range(0..nodes.len());
        let b = rng.random_range(0..nodes.len());
        if a == b {
            continue;
        }
        links.push([a.min(b), a.max(b)]);
        if !angles_ok(&nodes, &links) || build_graph(nodes.clone(), links.clone()).is_err() {
            links.pop();
        }
    }
    build_graph(nodes, links).expect("kept links are valid")
}

fn orient(a: Point2, b: Point2, c: Point2) -> f64 {
    (b - a).cross(c - a)
}

/// Whether the open segments `pq` and `ab` cross.
fn crosses(p: Point2, q: Point2, a: Point2, b: Point2) -> bool {
    let d1 = orient(a, b, p);
    let d2 = orient(a, b, q);
    let d3 = orient(p, q, a);
    let d4 = orient(p, q, b);
    d1 * d2 < 0.0 && d3 * d4 < 0.0
}

struct Dsu(Vec<usize>);

impl Dsu {
    fn new(n: usize) -> Self {
        Dsu((0..n).collect())
    }
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }
    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        if a != b {
            self.0[a] = b;
        }
    }
}

/// One bounded region found by flood fill.
#[derive(Debug, Clone)]
pub struct RasterFace {
    pub pixels: Vec<Point2>,
    /// Graph components touching the region, the outer boundary included.
    pub adjacent_components: usize,
}

impl RasterFace {
    pub fn holes(&self) -> usize {
        self.adjacent_components - 1
    }
    pub fn chi(&self) -> i64 {
        2 - self.adjacent_components as i64
    }
}

const NEIGHBOURS: [(i64, i64); 8] = [(1, 0), (0, 1), (1, 1), (1, -1), (2, 1), (1, 2), (2, -1), (1, -2)];

/// Smallest angle allowed between two links sharing a node in random test graphs.
pub const MIN_LINK_ANGLE: f64 = 0.35;

fn angles_ok(nodes: &[Point2], links: &[[usize; 2]]) -> bool {
    let mut dirs: HashMap<usize, Vec<f64>> = HashMap::new();
    for &[a, b] in links {
        let d = nodes[b] - nodes[a];
        dirs.entry(a).or_default().push(d.y.atan2(d.x));
        dirs.entry(b).or_default().push((-d.y).atan2(-d.x));
    }
    dirs.values().all(|v| {
        v.iter().enumerate().all(|(i, &x)| {
            v[i + 1..].iter().all(|&y| {
                let gap = (x - y).rem_euclid(TAU);
                gap.min(TAU - gap) >= MIN_LINK_ANGLE
            })
        })
    })
}

/// Flood-fills a pixel grid over `[lo, hi]²`, letting neighbouring pixel centres connect
/// only when the segment between them crosses no link.
pub fn raster_faces(g: &GeometricGraph, lo: f64, hi: f64, step: f64) -> Vec<RasterFace> {
    // Unequal fractional offsets keep every sight line off the lattice nodes.
    let (ox, oy) = (0.0137 * step, 0.0291 * step);
    let n = ((hi - lo) / step).ceil() as usize;
    let centre = |i: usize, j: usize| Point2::new(lo + ox + i as f64 * step, lo + oy + j as f64 * step);
    let idx = |i: usize, j: usize| i * n + j;
    let links: Vec<(Point2, Point2)> = g.links().iter().map(|&[a, b]| (g.nodes()[a], g.nodes()[b])).collect();

    // Graph components by union-find over links.
    let mut gc = Dsu::new(g.node_count());
    for &[a, b] in g.links() {
        gc.union(a, b);
    }
    let link_comp: Vec<usize> = g.links().iter().map(|&[a, _]| gc.find(a)).collect();

    let mut px = Dsu::new(n * n);
    let mut blocked: Vec<(usize, usize)> = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let p = centre(i, j);
            // A straight sight line that crosses no link stays inside one face, so longer
            // neighbour offsets are sound and keep narrow corners from splitting into islands.
            for (di, dj) in NEIGHBOURS {
                let (ni, nj) = (i as i64 + di, j as i64 + dj);
                if ni < 0 || nj < 0 || ni >= n as i64 || nj >= n as i64 {
                    continue;
                }
                let (ni, nj) = (ni as usize, nj as usize);
                let q = centre(ni, nj);
                let mut open = true;
                for (l, &(a, b)) in links.iter().enumerate() {
                    if crosses(p, q, a, b) {
                        open = false;
                        blocked.push((idx(i, j), link_comp[l]));
                        blocked.push((idx(ni, nj), link_comp[l]));
                    }
                }
                if open {
                    px.union(idx(i, j), idx(ni, nj));
                }
            }
        }
    }
    let mut border = BTreeSet::new();
    for k in 0..n {
        for (i, j) in [(0, k), (n - 1, k), (k, 0), (k, n - 1)] {
            border.insert(px.find(idx(i, j)));
        }
    }
    let mut adjacency: HashMap<usize, BTreeSet<usize>> = HashMap::new();
    for (p, comp) in blocked {
        adjacency.entry(px.find(p)).or_default().insert(comp);
    }
    // Isolated nodes: the region seen from the node along a clear sight line.
    for v in 0..g.node_count() {
        if g.valency(v) != 0 {
            continue;
        }
        let node = g.nodes()[v];
        let ci = ((node.x - lo - ox) / step).round() as i64;
        let cj = ((node.y - lo - oy) / step).round() as i64;
        let mut seen = None;
        'search: for di in -2..=2 {
            for dj in -2..=2 {
                let (i, j) = (ci + di, cj + dj);
                if i < 0 || j < 0 || i >= n as i64 || j >= n as i64 {
                    continue;
                }
                let p = centre(i as usize, j as usize);
                if links.iter().all(|&(a, b)| !crosses(node, p, a, b)) {
                    seen = Some(px.find(idx(i as usize, j as usize)));
                    break 'search;
                }
            }
        }
        let region = seen.expect("an isolated node sees a nearby pixel");
        adjacency.entry(region).or_default().insert(gc.find(v));
    }

    let mut regions: HashMap<usize, Vec<Point2>> = HashMap::new();
    for i in 0..n {
        for j in 0..n {
            let r = px.find(idx(i, j));
            if !border.contains(&r) {
                regions.entry(r).or_default().push(centre(i, j));
            }
        }
    }
    let mut out: Vec<RasterFace> = regions
        .into_iter()
        .map(|(r, pixels)| RasterFace { pixels, adjacent_components: adjacency.get(&r).map_or(0, |s| s.len()) })
        .collect();
    out.sort_by(|a, b| a.pixels[0].lex_cmp(b.pixels[0]));
    out
}

/// Compares assembled faces against the raster oracle; returns a description of the first
/// disagreement.
pub fn compare_with_raster(g: &GeometricGraph, faces: &FaceSet, raster: &[RasterFace]) -> Result<(), String> {
    if faces.faces.len() != raster.len() {
        return Err(format!("face count {} vs raster {}", faces.faces.len(), raster.len()));
    }
    let locator = FaceLocator::new(g, &faces.faces);
    let mut used = vec![false; faces.faces.len()];
    for (k, rf) in raster.iter().enumerate() {
        let mut hit = None;
        for &p in &rf.pixels {
            let f = locator.locate(p).map_err(|e| e.to_string())?;
            match (hit, f) {
                (_, None) => return Err(format!("raster region {k} pixel {p:?} is outside every face")),
                (None, Some(f)) => hit = Some(f),
                (Some(h), Some(f)) if h != f => return Err(format!("raster region {k} spans faces {h} and {f}")),
                _ => {}
            }
        }
        let f = hit.expect("regions are non-empty");
        if std::mem::replace(&mut used[f], true) {
            return Err(format!("face {f} matched twice"));
        }
        let face = &faces.faces[f];
        let holes = face.holes.len() + face.isolated_nodes.len();
        if holes != rf.holes() || face.chi != rf.chi() {
            return Err(format!("face {f}: holes {holes} chi {} vs raster holes {} chi {}", face.chi, rf.holes(), rf.chi()));
        }
    }
    Ok(())
}

/// One closed boundary walk found by the naive tracer.
#[derive(Debug, Clone, PartialEq)]
pub struct NaiveCircuit {
    /// Directed links as `(tail, head)` node pairs.
    pub steps: Vec<(usize, usize)>,
    pub turning_sum: f64,
}

/// Traces every boundary walk straight from coordinates: at each head, leave along the
/// link reached first when sweeping clockwise from the way back.
pub fn naive_circuits(g: &GeometricGraph) -> Vec<NaiveCircuit> {
    let mut nbrs: Vec<Vec<usize>> = vec![Vec::new(); g.node_count()];
    for &[a, b] in g.links() {
        nbrs[a].push(b);
        nbrs[b].push(a);
    }
    let ang = |from: usize, to: usize| {
        let d = g.nodes()[to] - g.nodes()[from];
        d.y.atan2(d.x)
    };
    let mut done: BTreeSet<(usize, usize)> = BTreeSet::new();
    let mut out = Vec::new();
    let mut darts: Vec<(usize, usize)> = g.links().iter().flat_map(|&[a, b]| [(a, b), (b, a)]).collect();
    darts.sort();
    for start in darts {
        if done.contains(&start) {
            continue;
        }
        let mut steps = Vec::new();
        let mut sum = 0.0;
        let mut cur = start;
        loop {
            done.insert(cur);
            steps.push(cur);
            let (u, v) = cur;
            let back = ang(v, u);
            let mut best = (f64::INFINITY, u);
            for &w in &nbrs[v] {
                let mut gap = (back - ang(v, w)).rem_euclid(TAU);
                if gap == 0.0 {
                    gap = TAU;
                }
                if gap < best.0 {
                    best = (gap, w);
                }
            }
            sum += PI - best.0;
            cur = (v, best.1);
            if cur == start {
                break;
            }
        }
        out.push(NaiveCircuit { steps, turning_sum: sum });
    }
    out
}
