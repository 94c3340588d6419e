//! Broad-phase helpers: box sweep and a hashed point grid.

use std::collections::HashMap;

use crate::geometry::{BBox, Point2};

/// Index pairs `(i, j)`, `i < j`, whose boxes overlap after inflating by `tol`.
///
/// Sort-and-sweep along x with a y filter. Output is sorted.
pub fn overlapping_pairs(boxes: &[BBox], tol: f64) -> Vec<(usize, usize)> {
    let mut order: Vec<usize> = (0..boxes.len()).collect();
    order.sort_by(|&a, &b| boxes[a].min.x.total_cmp(&boxes[b].min.x).then(a.cmp(&b)));
    let mut active: Vec<usize> = Vec::new();
    let mut out = Vec::new();
    for &i in &order {
        let bi = &boxes[i];
        active.retain(|&j| boxes[j].max.x + tol >= bi.min.x);
        for &j in &active {
            if boxes[j].overlaps(bi, tol) {
                out.push(if i < j { (i, j) } else { (j, i) });
            }
        }
        active.push(i);
    }
    out.sort_unstable();
    out
}

/// Uniform hash grid of points for radius queries.
#[derive(Debug, Clone)]
pub struct PointGrid {
    cell: f64,
    buckets: HashMap<(i64, i64), Vec<usize>>,
    points: Vec<Point2>,
}

impl PointGrid {
    pub fn new(cell: f64) -> Self {
        assert!(cell > 0.0);
        PointGrid { cell, buckets: HashMap::new(), points: Vec::new() }
    }

    fn key(&self, p: Point2) -> (i64, i64) {
        ((p.x / self.cell).floor() as i64, (p.y / self.cell).floor() as i64)
    }

    /// Stores `p` and returns its id.
    pub fn insert(&mut self, p: Point2) -> usize {
        let id = self.points.len();
        self.points.push(p);
        let k = self.key(p);
        self.buckets.entry(k).or_default().push(id);
        id
    }

    pub fn point(&self, id: usize) -> Point2 {
        self.points[id]
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Ids of stored points within `radius` of `p`, ascending.
    pub fn within(&self, p: Point2, radius: f64) -> Vec<usize> {
        let span = (radius / self.cell).ceil() as i64;
        let (kx, ky) = self.key(p);
        let mut out = Vec::new();
        for dx in -span..=span {
            for dy in -span..=span {
                if let Some(ids) = self.buckets.get(&(kx + dx, ky + dy)) {
                    out.extend(ids.iter().copied().filter(|&id| self.points[id].dist(p) <= radius));
                }
            }
        }
        out.sort_unstable();
        out
    }
}
