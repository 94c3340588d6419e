//! Random and exact frames.

mod config;
mod fixtures;
mod leaves;
mod poisson;

use thiserror::Error;

pub use config::{generate, GeneratorConfig, Generated, Model, PoissonParams, FixtureParams, HexagonParams};
pub use fixtures::{fig4a_fixture, hexagon_fixture, with_isolated_nodes, HexagonVariant, PeriodicFixture, SixCell, SixCellFixture};
pub use leaves::{falling_leaves, LeafConfig, Orientation};
pub use poisson::{delete_edge_interiors, poisson_lines};

use crate::faces::FaceError;
use crate::graph::GraphError;
use crate::planarize::PlanarizeError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeneratorError {
    #[error("bad generator configuration: {0}")]
    Config(String),
    #[error("window not covered after {leaves} leaves ({uncovered} probes still bare)")]
    CoverageTimeout { leaves: usize, uncovered: usize },
    #[error(transparent)]
    Planarize(#[from] PlanarizeError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Faces(#[from] FaceError),
}
