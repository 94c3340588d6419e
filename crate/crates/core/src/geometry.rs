//! Planar primitives shared by every other module.

use std::f64::consts::{PI, TAU};
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

/// Points closer than this are the same point.
pub const SNAP_TOL: f64 = 1e-9;
/// Candidate nodes closer than this but farther than [`SNAP_TOL`] are ambiguous.
pub const MERGE_TOL: f64 = 1e-8;
/// Tolerance for collinearity and for recognising gaps of exactly π.
pub const ANGLE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Point2 { x, y }
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn dot(self, o: Point2) -> f64 {
        self.x * o.x + self.y * o.y
    }

    pub fn cross(self, o: Point2) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn dist(self, o: Point2) -> f64 {
        (self - o).norm()
    }

    /// Direction angle in `[0, 2π)`.
    pub fn angle(self) -> f64 {
        norm_angle_pos(self.y.atan2(self.x))
    }

    pub fn lerp(self, o: Point2, t: f64) -> Point2 {
        Point2::new(self.x + (o.x - self.x) * t, self.y + (o.y - self.y) * t)
    }

    pub fn midpoint(self, o: Point2) -> Point2 {
        self.lerp(o, 0.5)
    }

    pub fn from_polar(center: Point2, radius: f64, angle: f64) -> Point2 {
        Point2::new(center.x + radius * angle.cos(), center.y + radius * angle.sin())
    }

    /// Lexicographic comparison (x, then y).
    pub fn lex_cmp(self, o: Point2) -> std::cmp::Ordering {
        self.x.total_cmp(&o.x).then(self.y.total_cmp(&o.y))
    }
}

impl Add for Point2 {
    type Output = Point2;
    fn add(self, o: Point2) -> Point2 {
        Point2::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point2 {
    type Output = Point2;
    fn sub(self, o: Point2) -> Point2 {
        Point2::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Point2 {
    type Output = Point2;
    fn mul(self, s: f64) -> Point2 {
        Point2::new(self.x * s, self.y * s)
    }
}

impl Neg for Point2 {
    type Output = Point2;
    fn neg(self) -> Point2 {
        Point2::new(-self.x, -self.y)
    }
}

impl From<[f64; 2]> for Point2 {
    fn from(p: [f64; 2]) -> Self {
        Point2::new(p[0], p[1])
    }
}

/// Maps an angle into `[0, 2π)`.
pub fn norm_angle_pos(a: f64) -> f64 {
    let r = a.rem_euclid(TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Maps an angle into `[-π, π)`.
pub fn norm_angle_signed(a: f64) -> f64 {
    let r = norm_angle_pos(a + PI) - PI;
    if r >= PI {
        r - TAU
    } else {
        r
    }
}

/// Distance from `p` to the closed segment `a`–`b`, and the clamped parameter of the foot.
pub fn point_segment_distance(p: Point2, a: Point2, b: Point2) -> (f64, f64) {
    let d = b - a;
    let len2 = d.dot(d);
    if len2 == 0.0 {
        return (p.dist(a), 0.0);
    }
    let t = ((p - a).dot(d) / len2).clamp(0.0, 1.0);
    (p.dist(a.lerp(b, t)), t)
}

/// How two closed segments meet.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SegmentContact {
    None,
    /// Single point, with the parameters along each segment.
    Point { t: f64, u: f64 },
    /// Collinear overlap of positive length, as parameter ranges along the first segment.
    Overlap { t0: f64, t1: f64 },
}

/// Intersects `a0`–`a1` with `b0`–`b1`. Endpoint contacts within `tol` are reported.
pub fn segment_contact(a0: Point2, a1: Point2, b0: Point2, b1: Point2, tol: f64) -> SegmentContact {
    let da = a1 - a0;
    let db = b1 - b0;
    let la = da.norm();
    let lb = db.norm();
    let denom = da.cross(db);
    let sin = denom / (la * lb);
    if sin.abs() > ANGLE_TOL {
        let w = b0 - a0;
        let t = w.cross(db) / denom;
        let u = w.cross(da) / denom;
        let ta = tol / la;
        let tb = tol / lb;
        if t >= -ta && t <= 1.0 + ta && u >= -tb && u <= 1.0 + tb {
            return SegmentContact::Point { t: t.clamp(0.0, 1.0), u: u.clamp(0.0, 1.0) };
        }
        return SegmentContact::None;
    }
    // Parallel: only collinear segments can touch.
    let off = (b0 - a0).cross(da) / la;
    if off.abs() > tol {
        return SegmentContact::None;
    }
    let tb0 = (b0 - a0).dot(da) / (la * la);
    let tb1 = (b1 - a0).dot(da) / (la * la);
    let (lo, hi) = if tb0 <= tb1 { (tb0, tb1) } else { (tb1, tb0) };
    let t0 = lo.max(0.0);
    let t1 = hi.min(1.0);
    let ta = tol / la;
    if t1 - t0 > ta {
        SegmentContact::Overlap { t0, t1 }
    } else if t1 - t0 >= -ta {
        let t = 0.5 * (t0 + t1);
        let p = a0.lerp(a1, t.clamp(0.0, 1.0));
        let u = (p - b0).dot(db) / (lb * lb);
        SegmentContact::Point { t: t.clamp(0.0, 1.0), u: u.clamp(0.0, 1.0) }
    } else {
        SegmentContact::None
    }
}

/// Signed area of a closed polygon (anticlockwise positive).
pub fn shoelace(points: &[Point2]) -> f64 {
    let n = points.len();
    (0..n).map(|i| points[i].cross(points[(i + 1) % n])).sum::<f64>() * 0.5
}

/// Axis-aligned bounding box.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BBox {
    pub min: Point2,
    pub max: Point2,
}

impl BBox {
    pub fn empty() -> Self {
        BBox {
            min: Point2::new(f64::INFINITY, f64::INFINITY),
            max: Point2::new(f64::NEG_INFINITY, f64::NEG_INFINITY),
        }
    }

    pub fn of_points(points: impl IntoIterator<Item = Point2>) -> Self {
        let mut b = BBox::empty();
        for p in points {
            b.include(p);
        }
        b
    }

    pub fn include(&mut self, p: Point2) {
        self.min.x = self.min.x.min(p.x);
        self.min.y = self.min.y.min(p.y);
        self.max.x = self.max.x.max(p.x);
        self.max.y = self.max.y.max(p.y);
    }

    pub fn union(&mut self, o: &BBox) {
        self.include(o.min);
        self.include(o.max);
    }

    pub fn contains(&self, p: Point2, tol: f64) -> bool {
        p.x >= self.min.x - tol && p.x <= self.max.x + tol && p.y >= self.min.y - tol && p.y <= self.max.y + tol
    }

    pub fn overlaps(&self, o: &BBox, tol: f64) -> bool {
        self.min.x <= o.max.x + tol
            && o.min.x <= self.max.x + tol
            && self.min.y <= o.max.y + tol
            && o.min.y <= self.max.y + tol
    }

    pub fn width(&self) -> f64 {
        self.max.x - self.min.x
    }

    pub fn height(&self) -> f64 {
        self.max.y - self.min.y
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn angle_normalisation_ranges() {
        assert_eq!(norm_angle_signed(PI), -PI);
        assert_eq!(norm_angle_signed(-PI), -PI);
        assert!((norm_angle_signed(3.0 * PI / 2.0) + PI / 2.0).abs() < 1e-15);
        assert_eq!(norm_angle_pos(-0.0), 0.0);
        assert!((norm_angle_pos(-PI / 2.0) - 1.5 * PI).abs() < 1e-15);
        assert!(norm_angle_pos(-1e-300) < TAU);
    }

    #[test]
    fn crossing_contact() {
        let c = segment_contact(
            Point2::new(0.0, 0.0),
            Point2::new(2.0, 2.0),
            Point2::new(0.0, 2.0),
            Point2::new(2.0, 0.0),
            SNAP_TOL,
        );
        match c {
            SegmentContact::Point { t, u } => {
                assert!((t - 0.5).abs() < 1e-15 && (u - 0.5).abs() < 1e-15)
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn collinear_overlap_and_touch() {
        let a0 = Point2::new(0.0, 0.0);
        let a1 = Point2::new(2.0, 0.0);
        match segment_contact(a0, a1, Point2::new(1.0, 0.0), Point2::new(3.0, 0.0), SNAP_TOL) {
            SegmentContact::Overlap { t0, t1 } => assert_eq!((t0, t1), (0.5, 1.0)),
            other => panic!("unexpected {other:?}"),
        }
        match segment_contact(a0, a1, Point2::new(2.0, 0.0), Point2::new(3.0, 0.0), SNAP_TOL) {
            SegmentContact::Point { t, u } => assert_eq!((t, u), (1.0, 0.0)),
            other => panic!("unexpected {other:?}"),
        }
        assert_eq!(
            segment_contact(a0, a1, Point2::new(0.0, 1.0), Point2::new(2.0, 1.0), SNAP_TOL),
            SegmentContact::None
        );
    }

    #[test]
    fn shoelace_orientation() {
        let sq = [
            Point2::new(0.0, 0.0),
            Point2::new(1.0, 0.0),
            Point2::new(1.0, 1.0),
            Point2::new(0.0, 1.0),
        ];
        assert_eq!(shoelace(&sq), 1.0);
        let mut rev = sq;
        rev.reverse();
        assert_eq!(shoelace(&rev), -1.0);
    }
}
