//! Dead-leaves (falling-leaf) frames built by time reversal.
//!
//! Leaves are placed from the top down: each new leaf lies beneath all earlier ones, so
//! only the parts of its outline outside every earlier leaf are visible.

use std::collections::HashMap;
use std::f64::consts::{PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::geometry::{BBox, Point2};
use crate::graph::GeometricGraph;
use crate::planarize::planarize;
use crate::window::Window;

use super::GeneratorError;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    Isotropic,
    /// Every leaf rotated by this angle (radians).
    Fixed(f64),
}

/// Rectangular leaves with uniformly distributed side lengths.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LeafConfig {
    pub width: [f64; 2],
    pub height: [f64; 2],
    pub orientation: Orientation,
    pub max_leaves: usize,
}

impl Default for LeafConfig {
    fn default() -> Self {
        LeafConfig { width: [0.5, 1.5], height: [0.5, 1.5], orientation: Orientation::Isotropic, max_leaves: 200_000 }
    }
}

impl LeafConfig {
    fn validate(&self) -> Result<(), GeneratorError> {
        for (name, [lo, hi]) in [("width", self.width), ("height", self.height)] {
            if !(lo > 0.0 && hi >= lo && hi.is_finite()) {
                return Err(GeneratorError::Config(format!("leaf {name} range must satisfy 0 < lo <= hi, got [{lo}, {hi}]")));
            }
        }
        if self.max_leaves == 0 {
            return Err(GeneratorError::Config("max_leaves must be positive".into()));
        }
        Ok(())
    }

    /// Longest possible leaf diagonal.
    pub fn max_diagonal(&self) -> f64 {
        self.width[1].hypot(self.height[1])
    }

    fn min_side(&self) -> f64 {
        self.width[0].min(self.height[0])
    }
}

/// Anticlockwise corners of one leaf.
type Leaf = [Point2; 4];

fn draw(lo_hi: [f64; 2], rng: &mut ChaCha8Rng) -> f64 {
    lo_hi[0] + (lo_hi[1] - lo_hi[0]) * rng.random::<f64>()
}

/// Parameter interval of `a + t(b − a)` strictly inside a convex anticlockwise polygon.
fn inside_interval(a: Point2, b: Point2, poly: &Leaf) -> Option<(f64, f64)> {
    let d = b - a;
    let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
    for i in 0..4 {
        let e0 = poly[i];
        let e = poly[(i + 1) % 4] - e0;
        // Inside means to the left of every edge: cross(e, x − e0) > 0.
        let num = e.cross(a - e0);
        let den = e.cross(d);
        if den == 0.0 {
            if num <= 0.0 {
                return None;
            }
        } else {
            let t = -num / den;
            if den > 0.0 {
                lo = lo.max(t);
            } else {
                hi = hi.min(t);
            }
        }
    }
    let lo = lo.max(0.0);
    let hi = hi.min(1.0);
    (lo < hi).then_some((lo, hi))
}

/// Parts of `[0, 1]` not covered by any interval.
fn uncovered(mut cover: Vec<(f64, f64)>) -> Vec<(f64, f64)> {
    cover.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut out = Vec::new();
    let mut at = 0.0;
    for (lo, hi) in cover {
        if lo > at {
            out.push((at, lo));
        }
        at = at.max(hi);
    }
    if at < 1.0 {
        out.push((at, 1.0));
    }
    out
}

fn point_in_leaf(p: Point2, leaf: &Leaf) -> bool {
    (0..4).all(|i| (leaf[(i + 1) % 4] - leaf[i]).cross(p - leaf[i]) > 0.0)
}

struct CellIndex {
    cell: f64,
    buckets: HashMap<(i64, i64), Vec<usize>>,
}

impl CellIndex {
    fn keys(&self, b: &BBox) -> impl Iterator<Item = (i64, i64)> {
        let k = |v: f64| (v / self.cell).floor() as i64;
        let (x0, x1, y0, y1) = (k(b.min.x), k(b.max.x), k(b.min.y), k(b.max.y));
        (x0..=x1).flat_map(move |x| (y0..=y1).map(move |y| (x, y)))
    }
}

/// Simulates leaves until the disc of radius `r + d` is covered (`d` the largest diagonal),
/// then planarizes the visible outline pieces.
pub fn falling_leaves(config: &LeafConfig, window: &Window, seed: u64) -> Result<GeometricGraph, GeneratorError> {
    config.validate()?;
    let d = config.max_diagonal();
    let c = window.center;
    let cover_r = window.radius + d;
    let drop_r = window.radius + 2.0 * d;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    // Coverage probes on a square lattice over the disc to be covered.
    let spacing = config.min_side() / 8.0;
    let steps = (cover_r / spacing).ceil() as i64;
    let mut probes: HashMap<(i64, i64), Point2> = HashMap::new();
    for i in -steps..=steps {
        for j in -steps..=steps {
            let p = Point2::new(c.x + i as f64 * spacing, c.y + j as f64 * spacing);
            if p.dist(c) <= cover_r {
                probes.insert((i, j), p);
            }
        }
    }

    let mut leaves: Vec<Leaf> = Vec::new();
    let mut index = CellIndex { cell: d, buckets: HashMap::new() };
    let mut visible = Vec::new();
    while !probes.is_empty() {
        if leaves.len() >= config.max_leaves {
            return Err(GeneratorError::CoverageTimeout { leaves: leaves.len(), uncovered: probes.len() });
        }
        let rad = drop_r * rng.random::<f64>().sqrt();
        let ang = TAU * rng.random::<f64>();
        let centre = Point2::from_polar(c, rad, ang);
        let w = draw(config.width, &mut rng);
        let h = draw(config.height, &mut rng);
        let rot = match config.orientation {
            Orientation::Isotropic => PI * rng.random::<f64>(),
            Orientation::Fixed(a) => a,
        };
        let (s, co) = rot.sin_cos();
        let ax = Point2::new(co, s) * (0.5 * w);
        let ay = Point2::new(-s, co) * (0.5 * h);
        let leaf: Leaf = [centre - ax - ay, centre + ax - ay, centre + ax + ay, centre - ax + ay];
        let bbox = BBox::of_points(leaf);

        let mut above: Vec<usize> = index.keys(&bbox).filter_map(|k| index.buckets.get(&k)).flatten().copied().collect();
        above.sort_unstable();
        above.dedup();
        above.retain(|&i| BBox::of_points(leaves[i]).overlaps(&bbox, 0.0));

        for k in 0..4 {
            let (a, b) = (leaf[k], leaf[(k + 1) % 4]);
            let cover: Vec<(f64, f64)> = above.iter().filter_map(|&i| inside_interval(a, b, &leaves[i])).collect();
            for (t0, t1) in uncovered(cover) {
                let (p, q) = (a.lerp(b, t0), a.lerp(b, t1));
                if p.dist(q) > 1e-7 {
                    visible.push([p, q]);
                }
            }
        }

        let step_key = |v: f64| ((v) / spacing).floor() as i64;
        let (ci, cj) = (step_key(bbox.min.x - c.x), step_key(bbox.min.y - c.y));
        let (di, dj) = (step_key(bbox.max.x - c.x) + 1, step_key(bbox.max.y - c.y) + 1);
        for i in ci..=di {
            for j in cj..=dj {
                if probes.get(&(i, j)).is_some_and(|&p| point_in_leaf(p, &leaf)) {
                    probes.remove(&(i, j));
                }
            }
        }
        let id = leaves.len();
        for k in index.keys(&bbox).collect::<Vec<_>>() {
            index.buckets.entry(k).or_default().push(id);
        }
        leaves.push(leaf);
    }
    Ok(planarize(&visible)?)
}
