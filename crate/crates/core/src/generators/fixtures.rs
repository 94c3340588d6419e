//! Exact periodic fixtures: the hexagon lattices and the 2×1 six-cell tiling.

use std::collections::HashMap;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::counts::{block_counts, WindowCounts};
use crate::faces::{faces_of, Face, FaceLocator, FaceSet};
use crate::geometry::Point2;
use crate::graph::{build_graph, GeometricGraph};
use crate::planarize::planarize;

use super::GeneratorError;

/// A frame built from repeated copies of a rectangular period.
#[derive(Debug, Clone)]
pub struct PeriodicFixture {
    pub graph: GeometricGraph,
    /// Lower-left corner of a period block well inside the generated copies.
    pub block_origin: Point2,
    pub period: (f64, f64),
}

impl PeriodicFixture {
    pub fn faces(&self) -> Result<FaceSet, GeneratorError> {
        Ok(faces_of(&self.graph)?)
    }

    /// Per-period counts over the interior block.
    pub fn counts(&self, faces: &FaceSet) -> WindowCounts {
        block_counts(&self.graph, faces, self.block_origin, self.period.0, self.period.1)
    }

    /// Cells whose reference point lies in the block, in face order.
    pub fn block_cells<'a>(&self, faces: &'a FaceSet) -> Vec<&'a Face> {
        let wc_domain = crate::counts::Domain::Block {
            origin: self.block_origin,
            width: self.period.0,
            height: self.period.1,
        };
        faces
            .faces
            .iter()
            .filter(|f| wc_domain.contains(crate::faces::reference_point(&self.graph, f)))
            .collect()
    }

    /// Shifts `p` by whole periods so it lands in the block.
    pub fn wrap_into_block(&self, p: Point2) -> Point2 {
        let (w, h) = self.period;
        let o = self.block_origin;
        Point2::new(o.x + (p.x - o.x).rem_euclid(w), o.y + (p.y - o.y).rem_euclid(h))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HexagonVariant {
    /// A 0-valent node at each hexagon centre.
    PointHole,
    /// A short segment (two 1-valent nodes) at each hexagon centre.
    SegmentHole,
}

/// Regular pointy-top hexagons of unit side, `copies` rectangular supercells across and up.
///
/// Each supercell is √3 × 3 and holds two hexagons.
pub fn hexagon_fixture(variant: HexagonVariant, copies: usize, origin_offset: Point2) -> Result<PeriodicFixture, GeneratorError> {
    if copies < 3 {
        return Err(GeneratorError::Config("hexagon fixture needs at least 3 copies".into()));
    }
    let s = 1.0;
    let w = 3f64.sqrt() * s;
    let rows = 2 * copies;
    let mut segs = Vec::new();
    let mut centres = Vec::new();
    for j in 0..rows {
        for i in 0..copies {
            let shift = if j % 2 == 1 { 0.5 * w } else { 0.0 };
            let c = Point2::new(origin_offset.x + i as f64 * w + shift, origin_offset.y + 1.5 * s * j as f64);
            let corner = |k: usize| Point2::from_polar(c, s, PI / 6.0 + k as f64 * PI / 3.0);
            for k in 0..6 {
                segs.push([corner(k), corner((k + 1) % 6)]);
            }
            centres.push(c);
        }
    }
    let extra_nodes: Vec<Point2>;
    match variant {
        HexagonVariant::PointHole => extra_nodes = centres,
        HexagonVariant::SegmentHole => {
            extra_nodes = Vec::new();
            for c in &centres {
                segs.push([Point2::new(c.x - 0.2 * s, c.y + 0.1 * s), Point2::new(c.x + 0.2 * s, c.y - 0.05 * s)]);
            }
        }
    }
    let base = planarize(&segs)?;
    let graph = with_isolated_nodes(&base, &extra_nodes)?;
    let mid = (copies / 2) as f64;
    Ok(PeriodicFixture {
        graph,
        block_origin: Point2::new(origin_offset.x + mid * w + 0.1234 * s, origin_offset.y + 3.0 * s * mid + 0.0567 * s),
        period: (w, 3.0 * s),
    })
}

/// Adds 0-valent nodes to a graph.
pub fn with_isolated_nodes(g: &GeometricGraph, points: &[Point2]) -> Result<GeometricGraph, GeneratorError> {
    let mut nodes = g.nodes().to_vec();
    nodes.extend_from_slice(points);
    Ok(build_graph(nodes, g.links().to_vec())?)
}

/// The six cells of one 2×1 period, in a fixed order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SixCell {
    SmallRectangle,
    Heptagon,
    TriangleLow,
    TriangleHigh,
    HoledQuadrilateral,
    Octagon,
}

impl SixCell {
    pub const ALL: [SixCell; 6] = [
        SixCell::SmallRectangle,
        SixCell::Heptagon,
        SixCell::TriangleLow,
        SixCell::TriangleHigh,
        SixCell::HoledQuadrilateral,
        SixCell::Octagon,
    ];

    /// A point strictly inside this cell, in period coordinates.
    fn marker(self) -> Point2 {
        match self {
            SixCell::SmallRectangle => Point2::new(1.65, 0.45),
            SixCell::Heptagon => Point2::new(1.5, 0.8),
            SixCell::TriangleLow => Point2::new(0.27, 0.15),
            SixCell::TriangleHigh => Point2::new(0.46, 0.4),
            SixCell::HoledQuadrilateral => Point2::new(0.3, 0.6),
            SixCell::Octagon => Point2::new(0.9, 0.5),
        }
    }

    /// Union group under the rule pairing the triangles and the two rectangular outlines.
    pub fn group_a(self) -> usize {
        match self {
            SixCell::TriangleLow | SixCell::TriangleHigh => 0,
            SixCell::SmallRectangle | SixCell::HoledQuadrilateral => 1,
            SixCell::Heptagon => 2,
            SixCell::Octagon => 3,
        }
    }
}

/// Period polylines in period coordinates; each is a chain of segments.
fn six_cell_period() -> Vec<Vec<Point2>> {
    let t = 1.0 / 3.0;
    let tt = 2.0 / 3.0;
    let p = Point2::new;
    vec![
        // Three paths climbing from the line y = 0 to the line y = 1.
        vec![p(0.0, 0.0), p(t, 1.0)],
        vec![p(tt, 0.0), p(0.6, 0.5), p(t, 1.0)],
        vec![p(1.0, 0.0), p(1.2, 0.25), p(1.1, 0.5), p(1.2, 0.75), p(tt, 1.0)],
        // Holes.
        vec![p(0.2, 0.1), p(0.35, 0.1), p(0.27, 0.25), p(0.2, 0.1)],
        vec![p(0.4, 0.35), p(0.52, 0.35), p(0.45, 0.5), p(0.4, 0.35)],
        vec![p(1.5, 0.3), p(1.8, 0.3), p(1.8, 0.6), p(1.5, 0.6), p(1.5, 0.3)],
    ]
}

/// The 2×1 periodic tiling with six cells per period, together with its cell identities.
#[derive(Debug, Clone)]
pub struct SixCellFixture {
    pub periodic: PeriodicFixture,
}

/// Builds `copies × copies` periods of the six-cell tiling.
pub fn fig4a_fixture(copies: usize, origin_offset: Point2) -> Result<SixCellFixture, GeneratorError> {
    if copies < 3 {
        return Err(GeneratorError::Config("six-cell fixture needs at least 3 copies".into()));
    }
    let at = |i: usize, j: usize, q: Point2| {
        Point2::new(origin_offset.x + (2.0 * i as f64 + q.x), origin_offset.y + (j as f64 + q.y))
    };
    let line_stops = [0.0, 1.0 / 3.0, 2.0 / 3.0, 1.0];
    let mut segs = Vec::new();
    for j in 0..=copies {
        // Horizontal lines, cut at every vertex they carry.
        let mut xs: Vec<f64> = (0..copies).flat_map(|i| line_stops.iter().map(move |&x| (i, x))).map(|(i, x)| at(i, j, Point2::new(x, 0.0)).x).collect();
        xs.push(at(copies, j, Point2::new(0.0, 0.0)).x);
        let y = at(0, j, Point2::new(0.0, 0.0)).y;
        for w in xs.windows(2) {
            segs.push([Point2::new(w[0], y), Point2::new(w[1], y)]);
        }
        if j == copies {
            break;
        }
        for i in 0..copies {
            for chain in six_cell_period() {
                for w in chain.windows(2) {
                    segs.push([at(i, j, w[0]), at(i, j, w[1])]);
                }
            }
        }
    }
    let graph = planarize(&segs)?;
    let mid = copies / 2;
    Ok(SixCellFixture {
        periodic: PeriodicFixture {
            graph,
            block_origin: at(mid, mid, Point2::new(-0.05, -0.05)),
            period: (2.0, 1.0),
        },
    })
}

impl SixCellFixture {
    /// Identifies each cell counted in the block.
    pub fn classify(&self, faces: &FaceSet) -> Result<Vec<(SixCell, usize)>, GeneratorError> {
        let fx = &self.periodic;
        let locator = FaceLocator::new(&fx.graph, &faces.faces);
        let block: HashMap<*const Face, usize> =
            fx.block_cells(faces).into_iter().map(|f| (f as *const Face, 0)).collect();
        let mut out = Vec::new();
        let origin = fx.block_origin;
        let base = Point2::new(origin.x + 0.05, origin.y + 0.05);
        for cell in SixCell::ALL {
            let mut found = None;
            for di in -1i32..=1 {
                for dj in -1i32..=1 {
                    let m = cell.marker();
                    let q = Point2::new(base.x + m.x + 2.0 * di as f64, base.y + m.y + dj as f64);
                    if let Ok(Some(idx)) = locator.locate(q) {
                        if block.contains_key(&(&faces.faces[idx] as *const Face)) {
                            found = Some(idx);
                        }
                    }
                }
            }
            let idx = found.ok_or_else(|| GeneratorError::Config(format!("cell {cell:?} not found in block")))?;
            out.push((cell, idx));
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::estimate::{ExactMeans, Q};

    #[test]
    fn hexagon_point_variant_per_period() {
        let fx = hexagon_fixture(HexagonVariant::PointHole, 4, Point2::new(0.0, 0.0)).unwrap();
        let fs = fx.faces().unwrap();
        let wc = fx.counts(&fs);
        assert_eq!(wc.n_verts, vec![2, 0, 0, 4]);
        assert_eq!(wc.n, 2);
        let cells = fx.block_cells(&fs);
        for f in cells {
            assert_eq!((f.edge_count, f.vertex_count, f.chi), (6, 7, 0));
        }
        let ex = ExactMeans::from_counts(&wc).unwrap();
        assert_eq!(ex.theta, Q::from_integer(2));
        assert_eq!(ex.mu_chi, Q::from_integer(0));
    }

    #[test]
    fn hexagon_segment_variant_per_period() {
        let fx = hexagon_fixture(HexagonVariant::SegmentHole, 4, Point2::new(0.3, -0.2)).unwrap();
        let fs = fx.faces().unwrap();
        let wc = fx.counts(&fs);
        assert_eq!(wc.n_verts, vec![0, 4, 0, 4]);
        let ex = ExactMeans::from_counts(&wc).unwrap();
        assert_eq!(ex.theta, Q::from_integer(2));
        assert_eq!(ex.mu_chi, Q::from_integer(0));
    }

    #[test]
    fn six_cell_signatures() {
        let fx = fig4a_fixture(3, Point2::new(0.0, 0.0)).unwrap();
        let fs = fx.periodic.faces().unwrap();
        let cells = fx.classify(&fs).unwrap();
        let sig: Vec<(usize, usize, i64)> =
            cells.iter().map(|&(_, i)| (fs.faces[i].side_count, fs.faces[i].edge_count, fs.faces[i].chi)).collect();
        assert_eq!(sig, vec![(4, 4, 1), (11, 13, 0), (3, 3, 1), (3, 3, 1), (10, 11, -1), (8, 8, 1)]);
        let wc = fx.periodic.counts(&fs);
        assert_eq!(wc.total_verts(), 18);
        assert_eq!(wc.n, 6);
    }
}
