//! Abstract proof graphs and the legibility of their linearizations.
//!
//! A proof is a DAG whose reference arcs record which steps are cited by
//! which, and whose remaining arcs record other dependencies such as the use
//! of a variable introduced earlier. A proof script fixes one topological
//! order of that DAG. This crate measures orders (`then` steps, labels,
//! premise distances), searches for the best one, implements the hardness
//! reductions behind those problems, and prints Mizar-style scripts for a
//! graph and an order.

pub mod codegen;
pub mod corpus;
pub mod error;
pub mod fixtures;
pub mod frontend;
pub mod graph;
pub mod metrics;
pub mod mil;
pub mod order;
pub mod par;
pub mod partition;
pub mod reductions;

pub use error::{Error, Result};
pub use graph::{Digraph, ProofArc, ProofGraph, Vertex};
pub use metrics::{LabelRule, LinearizationMetrics};
pub use order::TopoOrder;
pub use partition::PathPartition;
