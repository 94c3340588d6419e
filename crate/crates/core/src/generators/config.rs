//! JSON generator configuration and dispatch.

use serde::{Deserialize, Serialize};

use crate::geometry::Point2;
use crate::graph::GeometricGraph;
use crate::window::Window;

use super::fixtures::{fig4a_fixture, hexagon_fixture, HexagonVariant, PeriodicFixture};
use super::leaves::{falling_leaves, LeafConfig};
use super::poisson::{delete_edge_interiors, poisson_lines};
use super::GeneratorError;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PoissonParams {
    /// Mean line length per unit area.
    pub intensity: f64,
    /// Probability of deleting each edge.
    pub q: f64,
    /// Extra radius beyond the window; defaults to ten mean line spacings.
    pub margin: Option<f64>,
}

impl Default for PoissonParams {
    fn default() -> Self {
        PoissonParams { intensity: 1.0, q: 0.0, margin: None }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FixtureParams {
    /// Periods along each axis; defaults to enough to hold the window.
    pub copies: Option<usize>,
    pub origin_offset: Option<[f64; 2]>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HexagonParams {
    pub variant: HexagonVariant,
    pub copies: Option<usize>,
    pub origin_offset: Option<[f64; 2]>,
}

impl Default for HexagonParams {
    fn default() -> Self {
        HexagonParams { variant: HexagonVariant::PointHole, copies: None, origin_offset: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", content = "params", rename_all = "snake_case")]
pub enum Model {
    PoissonDeleted(PoissonParams),
    FallingLeaves(LeafConfig),
    Hexagon(HexagonParams),
    Fig4a(FixtureParams),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorConfig {
    #[serde(flatten)]
    pub model: Model,
    pub seed: u64,
    /// Analysis radius; random frames are generated to cover this disc.
    pub r: f64,
}

impl GeneratorConfig {
    pub fn from_json(text: &str) -> Result<Self, GeneratorError> {
        let cfg: GeneratorConfig = serde_json::from_str(text).map_err(|e| GeneratorError::Config(e.to_string()))?;
        if !(cfg.r > 0.0 && cfg.r.is_finite()) {
            return Err(GeneratorError::Config(format!("r must be positive, got {}", cfg.r)));
        }
        Ok(cfg)
    }

    pub fn window(&self) -> Window {
        Window { center: Point2::new(0.0, 0.0), radius: self.r }
    }
}

/// A generated frame; periodic fixtures also carry their period block.
#[derive(Debug, Clone)]
pub struct Generated {
    pub graph: GeometricGraph,
    pub periodic: Option<PeriodicFixture>,
}

/// Offsets that keep fixture vertices off the window circle and block edges.
const FIXTURE_JITTER: Point2 = Point2::new(0.0123, 0.0371);

/// Runs the configured generator.
pub fn generate(cfg: &GeneratorConfig) -> Result<Generated, GeneratorError> {
    let window = Window::centered(cfg.r).map_err(|e| GeneratorError::Config(e.to_string()))?;
    match &cfg.model {
        Model::PoissonDeleted(p) => {
            if !(0.0..=1.0).contains(&p.q) {
                return Err(GeneratorError::Config(format!("q must be in [0, 1], got {}", p.q)));
            }
            let margin = p.margin.unwrap_or(if p.intensity > 0.0 { 10.0 / p.intensity } else { 0.0 });
            let lines = poisson_lines(p.intensity, &window, margin, cfg.seed)?;
            let graph = if p.q > 0.0 { delete_edge_interiors(&lines, p.q, cfg.seed)? } else { lines };
            Ok(Generated { graph, periodic: None })
        }
        Model::FallingLeaves(leaf) => Ok(Generated { graph: falling_leaves(leaf, &window, cfg.seed)?, periodic: None }),
        Model::Hexagon(h) => {
            let copies = h.copies.unwrap_or(((2.0 * cfg.r / 3f64.sqrt()).ceil() as usize + 3).max(3));
            let offset = h.origin_offset.map(Point2::from).unwrap_or(Point2::new(
                -(3f64.sqrt()) * copies as f64 / 2.0 + FIXTURE_JITTER.x,
                -1.5 * copies as f64 + FIXTURE_JITTER.y,
            ));
            let fx = hexagon_fixture(h.variant, copies, offset)?;
            Ok(Generated { graph: fx.graph.clone(), periodic: Some(fx) })
        }
        Model::Fig4a(f) => {
            let copies = f.copies.unwrap_or(((2.0 * cfg.r).ceil() as usize + 3).max(3));
            let offset = f.origin_offset.map(Point2::from).unwrap_or(Point2::new(
                -(copies as f64) + FIXTURE_JITTER.x,
                -(copies as f64) / 2.0 + FIXTURE_JITTER.y,
            ));
            let fx = fig4a_fixture(copies, offset)?;
            Ok(Generated { graph: fx.periodic.graph.clone(), periodic: Some(fx.periodic) })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_each_model() {
        let cfg = GeneratorConfig::from_json(r#"{"model":"poisson_deleted","seed":3,"r":5,"params":{"q":0.3}}"#).unwrap();
        assert_eq!(cfg.model, Model::PoissonDeleted(PoissonParams { q: 0.3, ..PoissonParams::default() }));
        let cfg = GeneratorConfig::from_json(r#"{"model":"falling_leaves","seed":1,"r":2,"params":{"width":[1,2]}}"#).unwrap();
        let Model::FallingLeaves(l) = cfg.model else { panic!() };
        assert_eq!(l.width, [1.0, 2.0]);
        let cfg = GeneratorConfig::from_json(r#"{"model":"hexagon","seed":0,"r":3,"params":{"variant":"segment_hole"}}"#).unwrap();
        assert!(matches!(cfg.model, Model::Hexagon(HexagonParams { variant: HexagonVariant::SegmentHole, .. })));
        let cfg = GeneratorConfig::from_json(r#"{"model":"fig4a","seed":0,"r":3,"params":{}}"#).unwrap();
        assert!(matches!(cfg.model, Model::Fig4a(_)));
    }

    #[test]
    fn rejects_bad_configs() {
        for text in [
            r#"{"model":"voronoi","seed":1,"r":2,"params":{}}"#,
            r#"{"model":"fig4a","seed":1,"r":-2,"params":{}}"#,
            r#"{"model":"poisson_deleted","seed":1,"r":2,"params":{"qq":1}}"#,
            r#"not json"#,
        ] {
            assert!(matches!(GeneratorConfig::from_json(text), Err(GeneratorError::Config(_))), "{text}");
        }
        let cfg = GeneratorConfig::from_json(r#"{"model":"poisson_deleted","seed":1,"r":2,"params":{"q":2}}"#).unwrap();
        assert!(generate(&cfg).is_err());
    }

    #[test]
    fn full_deletion_has_no_links() {
        let cfg = GeneratorConfig::from_json(r#"{"model":"poisson_deleted","seed":1,"r":4,"params":{"q":1}}"#).unwrap();
        let g = generate(&cfg).unwrap().graph;
        assert_eq!(g.link_count(), 0);
        assert!(g.node_count() > 0);
    }
}
