//! Exact fixed-parameter solvers and lossy kernels for Connected Vertex Cover
//! parameterized by the size of a modulator to a simple graph class.

pub mod bench;
pub mod chordal;
pub mod classify;
pub mod cluster_fpt;
pub mod enumerate;
pub mod error;
pub mod gadget;
pub mod generate;
pub mod graph;
pub mod instance;
pub mod io;
pub mod lossy;
pub mod modulator;
pub mod oracle;
pub mod solve;
pub mod split_fpt;
pub mod stats;
pub mod steiner;
pub mod verify;

pub use classify::{classify_graph, CliqueCover, SplitPartition};
pub use error::{CvcError, Result};
pub use graph::{components, contract_components, Graph, Vertex, VertexSet};
pub use instance::{Instance, ModulatorKind};
