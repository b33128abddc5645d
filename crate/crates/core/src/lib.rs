//! Evolutionary search for small graph-generating programs.
//!
//! A candidate is a pair of code trees (an outer loop body over nodes `i` and
//! an inner loop body over `j < i`) that build a graph by adding and removing
//! edges. Candidates are compiled to bytecode, executed on a small register
//! machine, and scored by how closely their output matches a reference set
//! of graphs.

pub mod code;
pub mod data;
pub mod evolution;
pub mod exec;
pub mod fitness;
pub mod graph;
pub mod metrics;
pub mod rng;

pub use code::{CodeError, CodeLimits, CodeTree, Individual, Instruction, Opcode};
pub use exec::{compile, run_individual, Program};
pub use graph::SparseGraph;
pub use rng::Prng;
