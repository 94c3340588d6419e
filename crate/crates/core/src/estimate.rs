//! Typical-vertex/edge/cell estimators and the mean-value formula residuals.

use std::collections::BTreeMap;
use std::f64::consts::TAU;

use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::counts::WindowCounts;
use crate::faces::{FaceLocator, FaceSet};
use crate::frame::Frame;
use crate::geometry::Point2;
use crate::window::Window;

/// θ closer to 2 than this counts as θ = 2 on exact fixtures.
pub const EXACT_THETA_TOL: f64 = 1e-12;
/// θ closer to 2 than this counts as θ = 2 on Monte Carlo runs.
pub const MC_THETA_TOL: f64 = 0.05;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EstimateError {
    #[error("empty window: {0}")]
    EmptyWindow(&'static str),
    #[error("sample points kept missing the faces ({0} attempts)")]
    NotTiled(usize),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EstimatorReport {
    pub alpha: f64,
    pub lambda_verts: f64,
    pub lambda_verts_k: BTreeMap<usize, f64>,
    pub lambda_pi_verts_k: BTreeMap<usize, f64>,
    pub lambda_edges: f64,
    pub lambda_cells: f64,
    pub theta: f64,
    pub phi: f64,
    pub xi: f64,
    pub nu: f64,
    #[serde(rename = "mu_A")]
    pub mu_a: f64,
    #[serde(rename = "mu_L")]
    pub mu_l: f64,
    pub mu_chi: f64,
    #[serde(rename = "mu_V")]
    pub mu_v: f64,
    #[serde(rename = "mu_E")]
    pub mu_e: f64,
    #[serde(rename = "mu_S")]
    pub mu_s: f64,
    /// Undefined (null) when every vertex is 2-valent.
    pub theta_star: Option<f64>,
    pub xi_star: Option<f64>,
    pub phi_star: Option<f64>,
    #[serde(rename = "mu_V_star")]
    pub mu_v_star: f64,
    #[serde(rename = "mu_C_star")]
    pub mu_c_star: f64,
    pub recip_area: Option<f64>,
    pub r: f64,
    pub seed: Option<u64>,
}

/// Ratio estimators from window counts.
pub fn estimate(wc: &WindowCounts, recip_area: Option<f64>, seed: Option<u64>) -> Result<EstimatorReport, EstimateError> {
    let n_total = wc.total_verts() as f64;
    if wc.n == 0 {
        return Err(EstimateError::EmptyWindow("no cell-parts"));
    }
    if n_total == 0.0 {
        return Err(EstimateError::EmptyWindow("no vertices"));
    }
    if wc.m == 0 {
        return Err(EstimateError::EmptyWindow("no edges"));
    }
    let area = wc.region_area();
    let cells = wc.n as f64;
    let n2 = wc.verts(2) as f64;
    let pi2 = wc.pi_verts(2) as f64;
    let pi_high = wc.pi_verts_high() as f64;
    let ksum = wc.valency_sum() as f64;
    let non2 = n_total - n2;
    let starred = |num: f64| (non2 > 0.0).then(|| num / non2);
    let per_area = |v: &[u64]| -> BTreeMap<usize, f64> {
        v.iter().enumerate().filter(|(_, &c)| c > 0).map(|(k, &c)| (k, c as f64 / area)).collect()
    };
    Ok(EstimatorReport {
        alpha: wc.ell / area,
        lambda_verts: n_total / area,
        lambda_verts_k: per_area(&wc.n_verts),
        lambda_pi_verts_k: per_area(&wc.n_pi_verts),
        lambda_edges: wc.n_edges as f64 / area,
        lambda_cells: wc.n_cells as f64 / area,
        theta: ksum / n_total,
        phi: (pi_high + 2.0 * pi2) / n_total,
        xi: wc.verts(0) as f64 / n_total,
        nu: wc.ell / wc.m as f64,
        mu_a: wc.script_a / cells,
        mu_l: wc.script_l / cells,
        mu_chi: wc.script_x as f64 / cells,
        mu_v: wc.script_v as f64 / cells,
        mu_e: wc.script_e as f64 / cells,
        mu_s: wc.script_s as f64 / cells,
        theta_star: starred(ksum - 2.0 * n2),
        xi_star: starred(wc.verts(0) as f64),
        phi_star: starred(pi_high),
        mu_v_star: (wc.script_v as f64 - 2.0 * n2) / cells,
        mu_c_star: (wc.script_c as f64 + 2.0 * pi2 - 2.0 * n2) / cells,
        recip_area,
        r: match wc.domain {
            crate::counts::Domain::Disc { radius, .. } => radius,
            crate::counts::Domain::Block { width, height, .. } => (width * height / std::f64::consts::PI).sqrt(),
        },
        seed,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Residual {
    pub lhs: f64,
    pub rhs: f64,
    /// |lhs − rhs| / |rhs|, or the absolute gap when rhs = 0.
    pub residual: f64,
}

impl Residual {
    fn new(lhs: f64, rhs: f64) -> Self {
        let gap = (lhs - rhs).abs();
        Residual { lhs, rhs, residual: if rhs == 0.0 { gap } else { gap / rhs.abs() } }
    }
}

/// Outcome of the θ = 2 branch, where the valency formulas degenerate.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThetaTwoCheck {
    pub theta: f64,
    pub mu_chi: f64,
    /// Whether μ_χ vanishes to the same tolerance that made θ count as 2.
    pub consistent: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResidualReport {
    pub residuals: BTreeMap<&'static str, Residual>,
    pub skipped: Vec<&'static str>,
    pub theta_two: Option<ThetaTwoCheck>,
}

/// Compares the estimators against the mean-value formulas.
pub fn validate_formulas(er: &EstimatorReport, theta_tol: f64) -> ResidualReport {
    let mut residuals = BTreeMap::new();
    let mut skipped = Vec::new();
    let mut theta_two = None;
    let th = er.theta;
    if (th - 2.0).abs() < theta_tol {
        skipped.extend(["eq29", "eq30", "eq31"]);
        theta_two = Some(ThetaTwoCheck { theta: th, mu_chi: er.mu_chi, consistent: er.mu_chi.abs() < theta_tol });
    } else {
        let k = 2.0 * er.mu_chi / (th - 2.0);
        residuals.insert("eq29", Residual::new(er.mu_e, k * th));
        residuals.insert("eq30", Residual::new(er.mu_s, k * (th - er.phi)));
        residuals.insert("eq31", Residual::new(er.mu_v, k * (th + er.xi)));
    }
    residuals.insert("eq18", Residual::new(er.lambda_edges, er.alpha / er.nu));
    residuals.insert("eq18_valency", Residual::new(2.0 * er.lambda_edges, er.lambda_verts * th));
    residuals.insert("sec13", Residual::new(er.lambda_edges, er.lambda_cells * er.mu_chi + er.lambda_verts));
    match er.recip_area {
        Some(ra) => {
            residuals.insert("eq26", Residual::new(er.mu_a * ra, 1.0));
        }
        None => skipped.push("eq26"),
    }
    match (er.theta_star, er.xi_star, er.phi_star) {
        (Some(ts), Some(xs), Some(ps)) if (ts - 2.0).abs() >= theta_tol => {
            let k = 2.0 * er.mu_chi / (ts - 2.0);
            residuals.insert("eq35", Residual::new(er.mu_v_star, k * (ts + xs)));
            residuals.insert("muCstar", Residual::new(er.mu_c_star, k * (ts - ps)));
        }
        _ => skipped.extend(["eq35", "muCstar"]),
    }
    ResidualReport { residuals, skipped, theta_two }
}

pub type Q = Ratio<i64>;

/// Exact rational versions of the count-only estimators.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactMeans {
    pub theta: Q,
    pub phi: Q,
    pub xi: Q,
    pub mu_chi: Q,
    pub mu_e: Q,
    pub mu_s: Q,
    pub mu_v: Q,
    pub mu_c: Q,
    pub theta_star: Option<Q>,
    pub xi_star: Option<Q>,
    pub phi_star: Option<Q>,
    pub mu_v_star: Q,
    pub mu_c_star: Q,
}

impl ExactMeans {
    pub fn from_counts(wc: &WindowCounts) -> Result<Self, EstimateError> {
        let n_total = wc.total_verts() as i64;
        let cells = wc.n as i64;
        if cells == 0 || n_total == 0 {
            return Err(EstimateError::EmptyWindow("no cells or vertices"));
        }
        let n2 = wc.verts(2) as i64;
        let pi2 = wc.pi_verts(2) as i64;
        let pi_high = wc.pi_verts_high() as i64;
        let ksum = wc.valency_sum() as i64;
        let non2 = n_total - n2;
        let starred = |num: i64| (non2 > 0).then(|| Q::new(num, non2));
        Ok(ExactMeans {
            theta: Q::new(ksum, n_total),
            phi: Q::new(pi_high + 2 * pi2, n_total),
            xi: Q::new(wc.verts(0) as i64, n_total),
            mu_chi: Q::new(wc.script_x, cells),
            mu_e: Q::new(wc.script_e, cells),
            mu_s: Q::new(wc.script_s, cells),
            mu_v: Q::new(wc.script_v, cells),
            mu_c: Q::new(wc.script_c, cells),
            theta_star: starred(ksum - 2 * n2),
            xi_star: starred(wc.verts(0) as i64),
            phi_star: starred(pi_high),
            mu_v_star: Q::new(wc.script_v - 2 * n2, cells),
            mu_c_star: Q::new(wc.script_c + 2 * pi2 - 2 * n2, cells),
        })
    }

    /// Exact differences `lhs − rhs` of the valency formulas; `None` where θ (or θ*) is 2.
    pub fn residuals(&self) -> BTreeMap<&'static str, Option<Q>> {
        let two = Q::from_integer(2);
        let mut out = BTreeMap::new();
        let base = (self.theta != two).then(|| two * self.mu_chi / (self.theta - two));
        out.insert("eq29", base.map(|k| self.mu_e - k * self.theta));
        out.insert("eq30", base.map(|k| self.mu_s - k * (self.theta - self.phi)));
        out.insert("eq31", base.map(|k| self.mu_v - k * (self.theta + self.xi)));
        let star = match (self.theta_star, self.xi_star, self.phi_star) {
            (Some(t), Some(x), Some(p)) if t != two => Some((two * self.mu_chi / (t - two), t, x, p)),
            _ => None,
        };
        out.insert("eq35", star.map(|(k, t, x, _)| self.mu_v_star - k * (t + x)));
        out.insert("muCstar", star.map(|(k, t, _, p)| self.mu_c_star - k * (t - p)));
        out
    }
}

/// Mean of 1/A over uniform points of the window, A being the area of the containing face.
///
/// Points on the frame or outside every face are redrawn.
pub fn reciprocal_area_estimate<F: Frame + ?Sized>(
    g: &F,
    faces: &FaceSet,
    window: &Window,
    sample_count: usize,
    seed: u64,
) -> Result<f64, EstimateError> {
    if sample_count == 0 {
        return Err(EstimateError::EmptyWindow("no samples requested"));
    }
    let locator = FaceLocator::new(g, &faces.faces);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let budget = 10 * sample_count + 100;
    let mut attempts = 0;
    let mut sum = 0.0;
    let mut taken = 0;
    while taken < sample_count {
        attempts += 1;
        if attempts > budget {
            return Err(EstimateError::NotTiled(attempts));
        }
        let rad = window.radius * rng.random::<f64>().sqrt();
        let ang = TAU * rng.random::<f64>();
        let p = Point2::from_polar(window.center, rad, ang);
        if let Ok(Some(i)) = locator.locate(p) {
            sum += 1.0 / faces.faces[i].area;
            taken += 1;
        }
    }
    Ok(sum / sample_count as f64)
}
