//! Implicit vertex coloring for dynamic graphs.
//!
//! The graph is kept oriented with outdegree at most `d` ([`orientation`]).
//! Color queries are answered lazily ([`implicit_color`]): each query colors
//! a small set of nodes from a palette of `9d` colors, and the answers of all
//! queries between two updates form a proper coloring. [`partition`] splits
//! the vertex set into parts with disjoint palettes, [`oracle`] holds
//! brute-force checkers, and [`harness`] replays workload files.

pub mod degeneracy;
pub mod graph_store;
pub mod harness;
pub mod implicit_color;
pub mod oracle;
pub mod orientation;
pub mod partition;

pub use graph_store::{Arc, GraphError, NodeId, OrientedGraph};
pub use implicit_color::{
    ColorError, ColorParams, ColoringState, PolicyKind, QueryReport, RecursionPolicy,
};
pub use orientation::{Orientation, OrientationStrategy, Orienter, StrategyKind};
pub use partition::{PartitionConfig, PartitionedColorer, UpdateOp};
