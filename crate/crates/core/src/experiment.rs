//! Analysis pipeline, seeded replications and parameter sweeps.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::counts::{check_identities, euler_identity, window_counts, IdentityReport, WindowCounts};
use crate::estimate::{
    estimate, reciprocal_area_estimate, validate_formulas, EstimateError, EstimatorReport, ExactMeans, ResidualReport,
    EXACT_THETA_TOL, MC_THETA_TOL,
};
use crate::faces::{faces_of, side_membership_pi_check, FaceError, FaceSet};
use crate::generators::{generate, GeneratorConfig, GeneratorError, Model, PeriodicFixture};
use crate::geometry::{point_segment_distance, Point2};
use crate::graph::{classify_vertex, GeometricGraph};
use crate::window::{clip_to_window, Window, WindowError};

/// Uniform points used for the reciprocal-area estimate.
pub const RECIP_AREA_SAMPLES: usize = 10_000;
/// Sub-disc radius and number of centres for the edge-part count check.
pub const SUB_WINDOW_RADIUS: f64 = 1.0;
pub const SUB_WINDOW_CENTRES: usize = 100;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExperimentError {
    #[error("bad experiment: {0}")]
    Config(String),
    #[error(transparent)]
    Generator(#[from] GeneratorError),
    #[error(transparent)]
    Window(#[from] WindowError),
    #[error(transparent)]
    Faces(#[from] FaceError),
    #[error(transparent)]
    Estimate(#[from] EstimateError),
}

/// Optional stages of an analysis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CheckSet {
    pub identities: bool,
    pub formulas: bool,
    pub eq13: bool,
    pub recip_area: bool,
}

impl Default for CheckSet {
    fn default() -> Self {
        CheckSet { identities: true, formulas: true, eq13: true, recip_area: true }
    }
}

impl CheckSet {
    pub const NAMES: [&'static str; 4] = ["identities", "formulas", "eq13", "recip-area"];

    pub fn none() -> Self {
        CheckSet { identities: false, formulas: false, eq13: false, recip_area: false }
    }

    /// Parses a comma-separated list such as `identities,eq13`; `all` enables everything.
    pub fn parse(list: &str) -> Result<Self, ExperimentError> {
        let mut out = CheckSet::none();
        for item in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            match item {
                "all" => out = CheckSet::default(),
                "identities" => out.identities = true,
                "formulas" => out.formulas = true,
                "eq13" => out.eq13 = true,
                "recip-area" | "recip_area" => out.recip_area = true,
                other => {
                    return Err(ExperimentError::Config(format!(
                        "unknown check {other:?}; expected one of {}",
                        CheckSet::NAMES.join(", ")
                    )))
                }
            }
        }
        Ok(out)
    }
}

/// A replicated analysis of one generator configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub config: GeneratorConfig,
    pub reps: usize,
    pub jobs: usize,
    pub checks: CheckSet,
}

impl ExperimentSpec {
    pub fn validate(&self) -> Result<(), ExperimentError> {
        if self.reps == 0 {
            return Err(ExperimentError::Config("reps must be at least 1".into()));
        }
        if !(self.config.r > 0.0 && self.config.r.is_finite()) {
            return Err(ExperimentError::Config(format!("r must be positive, got {}", self.config.r)));
        }
        Ok(())
    }

    /// Consecutive seeds starting at the configured one.
    pub fn seeds(&self) -> Vec<u64> {
        (0..self.reps as u64).map(|i| self.config.seed.wrapping_add(i)).collect()
    }
}

/// Empirical vs predicted mean edge-part count in small sub-discs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SubWindowCheck {
    pub radius: f64,
    pub centres: usize,
    pub observed: f64,
    pub predicted: f64,
    pub residual: f64,
}

/// Exact rational means of a periodic fixture, printed as `p/q`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExactSummary {
    pub means: BTreeMap<&'static str, String>,
    /// `lhs − rhs` per formula; null where the formula is undefined (θ = 2).
    pub residuals: BTreeMap<&'static str, Option<String>>,
}

impl ExactSummary {
    fn from_counts(wc: &WindowCounts) -> Result<Self, EstimateError> {
        let ex = ExactMeans::from_counts(wc)?;
        let opt = |q: Option<crate::estimate::Q>| q.map_or("null".to_string(), |q| q.to_string());
        let means = BTreeMap::from([
            ("theta", ex.theta.to_string()),
            ("phi", ex.phi.to_string()),
            ("xi", ex.xi.to_string()),
            ("mu_chi", ex.mu_chi.to_string()),
            ("mu_E", ex.mu_e.to_string()),
            ("mu_S", ex.mu_s.to_string()),
            ("mu_V", ex.mu_v.to_string()),
            ("mu_C", ex.mu_c.to_string()),
            ("theta_star", opt(ex.theta_star)),
            ("xi_star", opt(ex.xi_star)),
            ("phi_star", opt(ex.phi_star)),
            ("mu_V_star", ex.mu_v_star.to_string()),
            ("mu_C_star", ex.mu_c_star.to_string()),
        ]);
        let residuals = ex.residuals().into_iter().map(|(k, v)| (k, v.map(|q| q.to_string()))).collect();
        Ok(ExactSummary { means, residuals })
    }

    /// True when every defined exact residual is zero.
    pub fn all_zero(&self) -> bool {
        self.residuals.values().flatten().all(|s| s == "0")
    }
}

/// Everything computed for one frame.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Analysis {
    pub seed: Option<u64>,
    pub counts: WindowCounts,
    pub identities: Option<IdentityReport>,
    /// `(n − ℓ + 𝒳, u)` on the unclipped frame.
    pub euler_raw: (i64, i64),
    /// `(n − ℓ + 𝒳, u)` on the clipped window graph; absent for periodic blocks.
    pub euler_window: Option<(i64, i64)>,
    /// Nodes where angle-based and side-based π counts disagree.
    pub pi_mismatches: usize,
    pub estimators: EstimatorReport,
    pub residuals: Option<ResidualReport>,
    pub eq13: Option<SubWindowCheck>,
    pub exact: Option<ExactSummary>,
}

impl Analysis {
    /// Whether every exact identity held, including both Euler forms.
    pub fn identities_pass(&self) -> bool {
        self.identities.as_ref().is_none_or(|r| r.all_pass())
            && self.euler_raw.0 == self.euler_raw.1
            && self.euler_window.is_none_or(|(lhs, u)| lhs == u && lhs == 1)
            && self.pi_mismatches == 0
    }
}

fn pi_mismatches(g: &GeometricGraph, faces: &FaceSet) -> usize {
    let side = side_membership_pi_check(g, faces);
    (0..g.node_count()).filter(|&v| classify_vertex(g, v).pi_angle_count != side[v]).count()
}

/// Edge-parts in the open disc: each straight link meets a disc in at most one piece.
fn edge_parts_in_disc(g: &GeometricGraph, centre: Point2, radius: f64) -> usize {
    g.links()
        .iter()
        .filter(|&&[a, b]| point_segment_distance(centre, g.nodes()[a], g.nodes()[b]).0 < radius)
        .count()
}

/// Mean number of edge-parts in sub-discs of radius `y` against `2yα + ½πy²·Σkλ_k`.
pub fn sub_window_check(
    g: &GeometricGraph,
    window: &Window,
    er: &EstimatorReport,
    y: f64,
    centres: usize,
    seed: u64,
) -> SubWindowCheck {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(2);
    let spread = if window.radius > 2.0 * y { window.radius - y } else { window.radius };
    let mut total = 0usize;
    for _ in 0..centres {
        let rad = spread * rng.random::<f64>().sqrt();
        let ang = std::f64::consts::TAU * rng.random::<f64>();
        total += edge_parts_in_disc(g, Point2::from_polar(window.center, rad, ang), y);
    }
    let observed = total as f64 / centres.max(1) as f64;
    let valency_intensity: f64 = er.lambda_verts_k.iter().map(|(&k, &l)| k as f64 * l).sum();
    let predicted = 2.0 * y * er.alpha + 0.5 * std::f64::consts::PI * y * y * valency_intensity;
    let residual = if predicted == 0.0 { observed } else { (observed - predicted).abs() / predicted };
    SubWindowCheck { radius: y, centres, observed, predicted, residual }
}

/// Analyzes the disc of radius `r` about the origin.
pub fn analyze_disc(g: &GeometricGraph, r: f64, seed: u64, checks: CheckSet) -> Result<Analysis, ExperimentError> {
    let window = Window::centered(r)?;
    let raw_faces = faces_of(g)?;
    let wg = clip_to_window(g, &window)?;
    let wfaces = faces_of(&wg)?;
    let counts = window_counts(g, &raw_faces, &wg, &wfaces);
    let mut estimators = estimate(&counts, None, Some(seed))?;
    if checks.recip_area {
        estimators.recip_area = Some(reciprocal_area_estimate(g, &raw_faces, &window, RECIP_AREA_SAMPLES, seed)?);
    }
    let eq13 = checks
        .eq13
        .then(|| sub_window_check(g, &window, &estimators, SUB_WINDOW_RADIUS, SUB_WINDOW_CENTRES, seed));
    Ok(Analysis {
        seed: Some(seed),
        identities: checks.identities.then(|| check_identities(&counts)),
        euler_raw: euler_identity(g, &raw_faces),
        euler_window: Some(euler_identity(&wg, &wfaces)),
        pi_mismatches: pi_mismatches(g, &raw_faces),
        residuals: checks.formulas.then(|| validate_formulas(&estimators, MC_THETA_TOL)),
        estimators,
        eq13,
        exact: None,
        counts,
    })
}

/// Analyzes one period block of a periodic fixture, with exact rational means.
///
/// The reciprocal-area estimate samples the disc `window`, which the fixture must cover.
pub fn analyze_block(
    fx: &PeriodicFixture,
    window: &Window,
    seed: u64,
    checks: CheckSet,
) -> Result<Analysis, ExperimentError> {
    let faces = fx.faces()?;
    let counts = fx.counts(&faces);
    let mut estimators = estimate(&counts, None, Some(seed))?;
    if checks.recip_area {
        estimators.recip_area = Some(reciprocal_area_estimate(&fx.graph, &faces, window, RECIP_AREA_SAMPLES, seed)?);
    }
    Ok(Analysis {
        seed: Some(seed),
        identities: checks.identities.then(|| check_identities(&counts)),
        euler_raw: euler_identity(&fx.graph, &faces),
        euler_window: None,
        pi_mismatches: pi_mismatches(&fx.graph, &faces),
        residuals: checks.formulas.then(|| validate_formulas(&estimators, EXACT_THETA_TOL)),
        exact: Some(ExactSummary::from_counts(&counts)?),
        estimators,
        eq13: None,
        counts,
    })
}

/// Generates the configured frame and analyzes it: per period for fixtures, else in the disc.
pub fn run_one(cfg: &GeneratorConfig, checks: CheckSet) -> Result<Analysis, ExperimentError> {
    let generated = generate(cfg)?;
    match &generated.periodic {
        Some(fx) => analyze_block(fx, &cfg.window(), cfg.seed, checks),
        None => analyze_disc(&generated.graph, cfg.r, cfg.seed, checks),
    }
}

/// Mean and sample standard deviation (zero for a single value).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Moments {
    pub mean: f64,
    pub sd: f64,
    pub count: usize,
}

impl Moments {
    pub fn of(values: &[f64]) -> Option<Self> {
        if values.is_empty() {
            return None;
        }
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let sd = if values.len() > 1 {
            (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
        } else {
            0.0
        };
        Some(Moments { mean, sd, count: values.len() })
    }
}

/// One seed's outcome.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RepOutcome {
    pub seed: u64,
    pub analysis: Option<Analysis>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub reps: usize,
    pub failed: usize,
    pub identities_pass: bool,
    /// Plain mean and sample sd of each scalar estimator over successful seeds.
    pub estimators: BTreeMap<String, Moments>,
    /// Mean relative residual per formula over the seeds where it was evaluated.
    pub residuals: BTreeMap<String, Moments>,
    pub eq13: Option<Moments>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Replication {
    pub outcomes: Vec<RepOutcome>,
    pub summary: Summary,
}

fn scalar_fields(er: &EstimatorReport) -> Vec<(String, f64)> {
    let value = serde_json::to_value(er).expect("estimator report serializes");
    let mut out = Vec::new();
    if let serde_json::Value::Object(map) = value {
        for (k, v) in map {
            if k == "seed" {
                continue;
            }
            if let Some(x) = v.as_f64() {
                out.push((k, x));
            }
        }
    }
    out
}

/// Aggregates outcomes; they must already be in seed order.
pub fn summarize(outcomes: &[RepOutcome]) -> Summary {
    let ok: Vec<&Analysis> = outcomes.iter().filter_map(|o| o.analysis.as_ref()).collect();
    let mut est: BTreeMap<String, Vec<f64>> = BTreeMap::new();
    let mut res: BTreeMap<String, Vec<f64>> = BTreeMap::new();
    let mut eq13 = Vec::new();
    for a in &ok {
        for (k, v) in scalar_fields(&a.estimators) {
            est.entry(k).or_default().push(v);
        }
        if let Some(rr) = &a.residuals {
            for (k, r) in &rr.residuals {
                res.entry(k.to_string()).or_default().push(r.residual);
            }
        }
        if let Some(s) = &a.eq13 {
            eq13.push(s.residual);
        }
    }
    let moments = |m: BTreeMap<String, Vec<f64>>| m.into_iter().filter_map(|(k, v)| Some((k, Moments::of(&v)?))).collect();
    Summary {
        reps: outcomes.len(),
        failed: outcomes.len() - ok.len(),
        identities_pass: ok.iter().all(|a| a.identities_pass()),
        estimators: moments(est),
        residuals: moments(res),
        eq13: Moments::of(&eq13),
    }
}

fn pool(jobs: usize) -> Result<rayon::ThreadPool, ExperimentError> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| ExperimentError::Config(e.to_string()))
}

/// Runs `f` for every seed on a pool of `jobs` workers (0 = all cores); results come back
/// in seed order whatever the scheduling.
pub fn run_seeds<T: Send>(
    seeds: &[u64],
    jobs: usize,
    f: impl Fn(u64) -> T + Sync + Send,
) -> Result<Vec<(u64, T)>, ExperimentError> {
    let mut out: Vec<(u64, T)> = pool(jobs)?.install(|| seeds.par_iter().map(|&s| (s, f(s))).collect());
    out.sort_by_key(|(s, _)| *s);
    Ok(out)
}

/// Runs every replication of `spec` and aggregates them.
pub fn replicate(spec: &ExperimentSpec) -> Result<Replication, ExperimentError> {
    spec.validate()?;
    let outcomes: Vec<RepOutcome> = run_seeds(&spec.seeds(), spec.jobs, |seed| {
        let cfg = GeneratorConfig { seed, ..spec.config.clone() };
        run_one(&cfg, spec.checks)
    })?
    .into_iter()
    .map(|(seed, r)| match r {
        Ok(a) => RepOutcome { seed, analysis: Some(a), error: None },
        Err(e) => RepOutcome { seed, analysis: None, error: Some(e.to_string()) },
    })
    .collect();
    let summary = summarize(&outcomes);
    Ok(Replication { outcomes, summary })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepAxis {
    /// Deletion probability of the Poisson model.
    Q,
    /// Window radius.
    R,
}

/// A sweep over one parameter, every value run for `reps` consecutive seeds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub base: GeneratorConfig,
    pub axis: SweepAxis,
    pub values: Vec<f64>,
    #[serde(default = "one")]
    pub reps: usize,
    #[serde(default)]
    pub checks: CheckSet,
}

fn one() -> usize {
    1
}

impl SweepSpec {
    pub fn from_json(text: &str) -> Result<Self, ExperimentError> {
        let spec: SweepSpec = serde_json::from_str(text).map_err(|e| ExperimentError::Config(e.to_string()))?;
        if spec.values.is_empty() || spec.reps == 0 {
            return Err(ExperimentError::Config("sweep needs at least one value and one rep".into()));
        }
        if spec.axis == SweepAxis::Q && !matches!(spec.base.model, Model::PoissonDeleted(_)) {
            return Err(ExperimentError::Config("a q sweep needs the poisson_deleted model".into()));
        }
        Ok(spec)
    }

    /// Configuration for one grid point.
    pub fn config_at(&self, value: f64, seed: u64) -> GeneratorConfig {
        let mut cfg = GeneratorConfig { seed, ..self.base.clone() };
        match self.axis {
            SweepAxis::R => cfg.r = value,
            SweepAxis::Q => {
                if let Model::PoissonDeleted(p) = &mut cfg.model {
                    p.q = value;
                }
            }
        }
        cfg
    }
}

/// Columns of a sweep row, in CSV order.
pub const SWEEP_COLUMNS: [&str; 28] = [
    "axis",
    "value",
    "seed",
    "alpha",
    "lambda_verts",
    "lambda_edges",
    "lambda_cells",
    "theta",
    "phi",
    "xi",
    "nu",
    "mu_A",
    "mu_L",
    "mu_chi",
    "mu_V",
    "mu_E",
    "mu_S",
    "recip_area",
    "eq29",
    "eq30",
    "eq31",
    "eq18",
    "eq18_valency",
    "sec13",
    "eq26",
    "eq35",
    "muCstar",
    "error",
];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub axis: SweepAxis,
    pub value: f64,
    pub seed: u64,
    pub analysis: Option<Analysis>,
    pub error: Option<String>,
}

impl SweepRow {
    /// Cells matching [`SWEEP_COLUMNS`]; missing values are empty.
    pub fn record(&self) -> Vec<String> {
        let axis = match self.axis {
            SweepAxis::Q => "q",
            SweepAxis::R => "r",
        };
        let mut row = vec![axis.to_string(), self.value.to_string(), self.seed.to_string()];
        let fields: BTreeMap<String, f64> =
            self.analysis.as_ref().map(|a| scalar_fields(&a.estimators).into_iter().collect()).unwrap_or_default();
        for col in &SWEEP_COLUMNS[3..18] {
            row.push(fields.get(*col).map(f64::to_string).unwrap_or_default());
        }
        for col in &SWEEP_COLUMNS[18..27] {
            let r = self
                .analysis
                .as_ref()
                .and_then(|a| a.residuals.as_ref())
                .and_then(|rr| rr.residuals.get(*col))
                .map(|r| r.residual.to_string());
            row.push(r.unwrap_or_default());
        }
        let mut err = self.error.clone().unwrap_or_default();
        if err.is_empty() && self.analysis.as_ref().is_some_and(|a| !a.identities_pass()) {
            err = "identity check failed".into();
        }
        row.push(err);
        row
    }
}

/// Runs every (value, seed) pair; failures are kept as rows with an error message.
pub fn sweep(spec: &SweepSpec, jobs: usize) -> Result<Vec<SweepRow>, ExperimentError> {
    let seeds: Vec<u64> = (0..spec.reps as u64).map(|i| spec.base.seed.wrapping_add(i)).collect();
    let mut rows = Vec::new();
    for &value in &spec.values {
        for (seed, r) in run_seeds(&seeds, jobs, |seed| run_one(&spec.config_at(value, seed), spec.checks))? {
            let (analysis, error) = match r {
                Ok(a) => (Some(a), None),
                Err(e) => (None, Some(e.to_string())),
            };
            rows.push(SweepRow { axis: spec.axis, value, seed, analysis, error });
        }
    }
    Ok(rows)
}
