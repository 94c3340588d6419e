//! Read-only view of a frame (nodes and links) that face extraction walks over.
//!
//! Straight graphs and clipped window graphs (which add circular arcs) share it.

use std::f64::consts::{PI, TAU};

use crate::geometry::{norm_angle_pos, Point2};
use crate::graph::GeometricGraph;

/// Outgoing directed link at a node together with its departure angle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Incident {
    pub dir: usize,
    pub angle: f64,
}

/// A link traversed in one direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
pub struct DirectedLink {
    pub link: usize,
    pub forward: bool,
}

impl DirectedLink {
    pub fn id(self) -> usize {
        2 * self.link + usize::from(!self.forward)
    }

    pub fn from_id(id: usize) -> Self {
        DirectedLink { link: id / 2, forward: id % 2 == 0 }
    }

    pub fn reversed(self) -> Self {
        DirectedLink { link: self.link, forward: !self.forward }
    }
}

/// Geometry of a link, oriented from its first to its second end.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LinkShape {
    Segment,
    /// Arc of the circle from angle `start` through signed angle `sweep`.
    Arc { center: Point2, radius: f64, start: f64, sweep: f64 },
}

pub trait Frame {
    fn node_count(&self) -> usize;
    fn node(&self, n: usize) -> Point2;
    fn link_count(&self) -> usize;
    fn link_ends(&self, l: usize) -> [usize; 2];
    /// Outgoing directed links sorted by departure angle in `[0, 2π)`.
    fn incidence(&self, n: usize) -> &[Incident];
    fn shape(&self, _l: usize) -> LinkShape {
        LinkShape::Segment
    }
    /// Whether a link contributes to edge/vertex/corner counts.
    fn is_counted_link(&self, _l: usize) -> bool {
        true
    }
    fn is_counted_node(&self, _n: usize) -> bool {
        true
    }

    fn tail(&self, d: DirectedLink) -> usize {
        let [a, b] = self.link_ends(d.link);
        if d.forward {
            a
        } else {
            b
        }
    }

    fn head(&self, d: DirectedLink) -> usize {
        let [a, b] = self.link_ends(d.link);
        if d.forward {
            b
        } else {
            a
        }
    }

    fn link_length(&self, l: usize) -> f64 {
        match self.shape(l) {
            LinkShape::Segment => {
                let [a, b] = self.link_ends(l);
                self.node(a).dist(self.node(b))
            }
            LinkShape::Arc { radius, sweep, .. } => radius * sweep.abs(),
        }
    }

    /// Heading change accumulated along the link itself (zero for segments).
    fn internal_turn(&self, d: DirectedLink) -> f64 {
        match self.shape(d.link) {
            LinkShape::Segment => 0.0,
            LinkShape::Arc { sweep, .. } => {
                if d.forward {
                    sweep
                } else {
                    -sweep
                }
            }
        }
    }

    /// Contribution of the traversal to the signed enclosed area.
    fn area_term(&self, d: DirectedLink) -> f64 {
        let term = match self.shape(d.link) {
            LinkShape::Segment => {
                let [a, b] = self.link_ends(d.link);
                self.node(a).cross(self.node(b)) * 0.5
            }
            LinkShape::Arc { center: c, radius: r, start, sweep } => {
                let end = start + sweep;
                0.5 * (r * r * sweep + r * (c.x * (end.sin() - start.sin()) - c.y * (end.cos() - start.cos())))
            }
        };
        if d.forward {
            term
        } else {
            -term
        }
    }

    /// Angle subtended at `p` by the traversal; summing over a circuit gives 2π·winding.
    fn winding_term(&self, d: DirectedLink, p: Point2) -> f64 {
        let a = self.node(self.tail(d)) - p;
        let b = self.node(self.head(d)) - p;
        match self.shape(d.link) {
            LinkShape::Arc { center, radius, sweep, .. } if p.dist(center) < radius => {
                // Seen from inside the circle the direction to the walker turns monotonically.
                let ccw = if self.tail(d) == self.head(d) { TAU } else { norm_angle_pos(b.angle() - a.angle()) };
                let ccw = if ccw == 0.0 && sweep.abs() > PI { TAU } else { ccw };
                if (sweep > 0.0) == d.forward {
                    ccw
                } else if ccw == TAU {
                    -TAU
                } else {
                    ccw - TAU
                }
            }
            // Outside the circle the arc and its chord are interchangeable.
            _ => a.cross(b).atan2(a.dot(b)),
        }
    }

    /// Midpoint of the link's geometry.
    fn link_midpoint(&self, l: usize) -> Point2 {
        match self.shape(l) {
            LinkShape::Segment => {
                let [a, b] = self.link_ends(l);
                self.node(a).midpoint(self.node(b))
            }
            LinkShape::Arc { center, radius, start, sweep } => Point2::from_polar(center, radius, start + 0.5 * sweep),
        }
    }
}

impl Frame for GeometricGraph {
    fn node_count(&self) -> usize {
        GeometricGraph::node_count(self)
    }
    fn node(&self, n: usize) -> Point2 {
        self.nodes()[n]
    }
    fn link_count(&self) -> usize {
        GeometricGraph::link_count(self)
    }
    fn link_ends(&self, l: usize) -> [usize; 2] {
        self.links()[l]
    }
    fn incidence(&self, n: usize) -> &[Incident] {
        GeometricGraph::incidence(self, n)
    }
}
