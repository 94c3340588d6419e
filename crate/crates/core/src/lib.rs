//! Planar tessellation frames: face extraction, Euler Entities and
//! mean-value statistics of the typical cell.

pub mod counts;
pub mod estimate;
pub mod experiment;
pub mod faces;
pub mod frame;
pub mod generators;
pub mod geometry;
pub mod graph;
pub mod planarize;
pub mod spatial;
pub mod svg;
pub mod unions;
pub mod verify;
pub mod walk;
pub mod window;

pub use frame::{DirectedLink, Frame, Incident, LinkShape};
pub use geometry::{BBox, Point2};
pub use graph::{build_graph, classify_vertex, GeometricGraph, GraphError, VertexClass};
pub use planarize::{planarize, PlanarizeError};
pub use window::{clip_to_window, Window, WindowError, WindowGraph};
