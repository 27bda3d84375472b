//! Reeb graphs of piecewise-linear functions and the distances between them.
//!
//! * [`graph`]: the Reeb graph model, canonical form and isomorphism.
//! * [`complex`]: simplicial complexes with vertex values and their Reeb graphs.
//! * [`smoothing`]: the ε-smoothing operator and a level-band fiber oracle.
//! * [`metric`]: the path-height pseudo-metric on a Reeb graph.
//! * [`cosheaf`]: constructible cosheaves, shifts and interleaving decisions.
//! * [`persistence`]: extended persistence diagrams and bottleneck distance.
//! * [`distortion`]: functional distortion objectives and certified bounds.
//! * [`harness`]: random instances and the distance consistency report.

pub mod bounds;
pub mod complex;
pub mod cosheaf;
pub mod distortion;
pub mod error;
pub mod format;
pub mod graph;
pub mod harness;
pub mod metric;
pub mod persistence;
pub mod smoothing;
pub mod value;

mod union_find;

pub use bounds::BoundInterval;
pub use graph::{GraphPoint, ReebGraph};
pub use value::Value;
