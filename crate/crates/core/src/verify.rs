//! Exact checks on the periodic fixtures.

use serde::Serialize;

use crate::estimate::{validate_formulas, ExactMeans, Q, EXACT_THETA_TOL};
use crate::experiment::{analyze_block, CheckSet, ExperimentError};
use crate::generators::{fig4a_fixture, hexagon_fixture, HexagonVariant};
use crate::geometry::Point2;
use crate::unions::{cell_union_stats, UnionStats};
use crate::window::Window;

/// Per-cell `(S, E, χ)` of the six-cell block, sorted.
pub const SIX_CELL_SIGNATURES: [(usize, usize, i64); 6] = [(3, 3, 1), (3, 3, 1), (4, 4, 1), (8, 8, 1), (10, 11, -1), (11, 13, 0)];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyItem {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

fn item(name: &'static str, pass: bool, detail: String) -> VerifyItem {
    VerifyItem { name, pass, detail }
}

fn q(n: i64, d: i64) -> Q {
    Q::new(n, d)
}

/// Union means must reproduce the valency formulas with the per-vertex θ and φ.
fn unions_satisfy_formulas(u: &UnionStats, ex: &ExactMeans) -> bool {
    let two = Q::from_integer(2);
    let k = two * u.mu_chi / (ex.theta - two);
    u.mu_e == k * ex.theta && u.mu_s == k * (ex.theta - ex.phi)
}

/// Runs the fixture suite; every item should pass.
pub fn verify_fixtures() -> Result<Vec<VerifyItem>, ExperimentError> {
    let mut out = Vec::new();
    let window = Window::new(Point2::new(0.0, 0.0), 1.5)?;
    let offset = Point2::new(-4.0 + 0.0123, -2.0 + 0.0371);

    let six = fig4a_fixture(4, offset)?;
    let fx = &six.periodic;
    let faces = fx.faces()?;
    let a = analyze_block(fx, &window, 0, CheckSet { eq13: false, recip_area: false, ..CheckSet::default() })?;
    out.push(item("six_cell_identities", a.identities_pass(), format!("euler {:?}", a.euler_raw)));

    let cells = six.classify(&faces)?;
    let mut sigs: Vec<(usize, usize, i64)> =
        cells.iter().map(|&(_, i)| (faces.faces[i].side_count, faces.faces[i].edge_count, faces.faces[i].chi)).collect();
    sigs.sort();
    let block_total = fx.block_cells(&faces).len();
    out.push(item(
        "six_cell_signatures",
        sigs == SIX_CELL_SIGNATURES && block_total == 6 && a.counts.total_verts() == 18,
        format!("cells {sigs:?}, {block_total} in block, {} vertices", a.counts.total_verts()),
    ));

    let ex = ExactMeans::from_counts(&a.counts)?;
    out.push(item(
        "six_cell_means",
        ex.theta == q(7, 3) && ex.phi == q(1, 6) && ex.mu_e == q(7, 1) && ex.mu_s == q(13, 2) && ex.mu_chi == q(1, 2),
        format!("theta {} phi {} mu_E {} mu_S {} mu_chi {}", ex.theta, ex.phi, ex.mu_e, ex.mu_s, ex.mu_chi),
    ));
    let res = ex.residuals();
    out.push(item(
        "six_cell_formulas",
        ["eq29", "eq30", "eq31"].iter().all(|k| res[k] == Some(Q::from_integer(0))),
        res.iter().map(|(k, v)| format!("{k}={}", v.map_or("undefined".to_string(), |q| q.to_string()))).collect::<Vec<_>>().join(" "),
    ));

    let members: Vec<_> = cells.iter().map(|&(_, i)| &faces.faces[i]).collect();
    let group_a: Vec<usize> = cells.iter().map(|&(c, _)| c.group_a()).collect();
    let ua = cell_union_stats(&members, &group_a);
    out.push(item(
        "unions_a",
        ua.mu_e == q(42, 4) && ua.mu_s == q(39, 4) && ua.mu_chi == q(3, 4) && unions_satisfy_formulas(&ua, &ex),
        format!("mu_E {} mu_S {} mu_chi {} unions {:?}", ua.mu_e, ua.mu_s, ua.mu_chi, ua.triples()),
    ));
    let group_b: Vec<usize> = members.iter().map(|f| (f.chi + 64) as usize).collect();
    let ub = cell_union_stats(&members, &group_b);
    out.push(item(
        "unions_b",
        ub.group_count() == 3
            && ub.mu_e == q(14, 1)
            && ub.mu_s == q(13, 1)
            && ub.mu_chi == q(1, 1)
            && unions_satisfy_formulas(&ub, &ex),
        format!("mu_E {} mu_S {} mu_chi {} unions {:?}", ub.mu_e, ub.mu_s, ub.mu_chi, ub.triples()),
    ));

    for (name, variant) in [("hexagon_point_hole", HexagonVariant::PointHole), ("hexagon_segment_hole", HexagonVariant::SegmentHole)] {
        let hex = hexagon_fixture(variant, 5, Point2::new(-4.33 + 0.0123, -7.5 + 0.0371))?;
        let a = analyze_block(&hex, &window, 0, CheckSet { eq13: false, recip_area: false, ..CheckSet::default() })?;
        let ex = ExactMeans::from_counts(&a.counts)?;
        let rr = validate_formulas(&a.estimators, EXACT_THETA_TOL);
        let pass = a.identities_pass()
            && ex.theta == Q::from_integer(2)
            && ex.mu_chi == Q::from_integer(0)
            && rr.skipped.contains(&"eq29")
            && rr.theta_two.as_ref().is_some_and(|t| t.consistent);
        out.push(item(name, pass, format!("theta {} mu_chi {} skipped {:?}", ex.theta, ex.mu_chi, rr.skipped)));
    }
    Ok(out)
}
