//! Turns a soup of segments into a planar straight-line graph.

use std::collections::HashSet;

use thiserror::Error;

use crate::geometry::{segment_contact, BBox, Point2, SegmentContact, MERGE_TOL, SNAP_TOL};
use crate::graph::{build_graph, GeometricGraph, GraphError};
use crate::spatial::{overlapping_pairs, PointGrid};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PlanarizeError {
    #[error("segment {0} has no length")]
    DegenerateSegment(usize),
    #[error("ambiguous geometry near ({x}, {y}): points {gap:e} apart")]
    ToleranceFailure { x: f64, y: f64, gap: f64 },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Merges nearby points, refusing anything in the ambiguity band.
struct Snapper {
    grid: PointGrid,
}

impl Snapper {
    fn id(&mut self, p: Point2) -> Result<usize, PlanarizeError> {
        let mut hit = None;
        for id in self.grid.within(p, MERGE_TOL) {
            let d = self.grid.point(id).dist(p);
            if d > SNAP_TOL {
                return Err(PlanarizeError::ToleranceFailure { x: p.x, y: p.y, gap: d });
            }
            hit.get_or_insert(id);
        }
        Ok(match hit {
            Some(id) => id,
            None => self.grid.insert(p),
        })
    }
}

/// Splits segments at every mutual contact and returns the resulting graph.
///
/// Collinear overlaps are merged; every input endpoint survives as a node.
pub fn planarize(segments: &[[Point2; 2]]) -> Result<GeometricGraph, PlanarizeError> {
    for (i, s) in segments.iter().enumerate() {
        if !(s[0].dist(s[1]) > SNAP_TOL) {
            return Err(PlanarizeError::DegenerateSegment(i));
        }
    }
    let mut cuts: Vec<Vec<(f64, Point2)>> =
        segments.iter().map(|s| vec![(0.0, s[0]), (1.0, s[1])]).collect();

    let boxes: Vec<BBox> = segments.iter().map(|s| BBox::of_points(*s)).collect();
    for (i, j) in overlapping_pairs(&boxes, MERGE_TOL) {
        let [a0, a1] = segments[i];
        let [b0, b1] = segments[j];
        match segment_contact(a0, a1, b0, b1, MERGE_TOL) {
            SegmentContact::None => {}
            SegmentContact::Point { t, u } => {
                let pa = at(a0, a1, t);
                let pb = at(b0, b1, u);
                let gap = pa.dist(pb);
                if gap > SNAP_TOL {
                    return Err(PlanarizeError::ToleranceFailure { x: pa.x, y: pa.y, gap });
                }
                // Prefer exact input endpoints over computed points.
                let p = if t == 0.0 || t == 1.0 { pa } else { pb };
                cuts[i].push((t, p));
                cuts[j].push((u, p));
            }
            SegmentContact::Overlap { t0, t1 } => {
                for t in [t0, t1] {
                    let p = nearest_endpoint(at(a0, a1, t), [a0, a1, b0, b1]);
                    cuts[i].push((param(a0, a1, p), p));
                    cuts[j].push((param(b0, b1, p), p));
                }
            }
        }
    }

    let mut snap = Snapper { grid: PointGrid::new(MERGE_TOL * 2.0) };
    // Endpoints first so they become the representatives.
    let mut ends = Vec::with_capacity(segments.len());
    for s in segments {
        ends.push([snap.id(s[0])?, snap.id(s[1])?]);
    }
    let mut links = Vec::new();
    let mut seen = HashSet::new();
    for (i, cut) in cuts.iter_mut().enumerate() {
        cut.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut ids = Vec::with_capacity(cut.len());
        for &(t, p) in cut.iter() {
            let id = if t == 0.0 && p == segments[i][0] {
                ends[i][0]
            } else if t == 1.0 && p == segments[i][1] {
                ends[i][1]
            } else {
                snap.id(p)?
            };
            if ids.last() != Some(&id) {
                ids.push(id);
            }
        }
        for w in ids.windows(2) {
            let key = (w[0].min(w[1]), w[0].max(w[1]));
            if w[0] != w[1] && seen.insert(key) {
                links.push([w[0], w[1]]);
            }
        }
    }
    let nodes = (0..snap.grid.len()).map(|id| snap.grid.point(id)).collect();
    Ok(build_graph(nodes, links)?)
}

fn at(a: Point2, b: Point2, t: f64) -> Point2 {
    if t == 0.0 {
        a
    } else if t == 1.0 {
        b
    } else {
        a.lerp(b, t)
    }
}

fn param(a: Point2, b: Point2, p: Point2) -> f64 {
    if p == a {
        return 0.0;
    }
    if p == b {
        return 1.0;
    }
    let d = b - a;
    ((p - a).dot(d) / d.dot(d)).clamp(0.0, 1.0)
}

fn nearest_endpoint(p: Point2, candidates: [Point2; 4]) -> Point2 {
    candidates.into_iter().min_by(|x, y| x.dist(p).total_cmp(&y.dist(p))).unwrap()
}
