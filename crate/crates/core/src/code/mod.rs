//! Code trees: the mutable representation of candidate programs, their
//! canonical text form, and Python-like rendering.

pub mod fixtures;
mod instruction;
mod render;
mod text;
mod tree;

pub use instruction::{CodeLimits, Instruction, Opcode, OperandKind};
pub use render::{render_pseudocode, render_statement, render_tree, RegisterNames};
pub use text::{deserialize, serialize, HEADER};
pub use tree::{CodeNode, CodeTree, Individual, Link, NodeKind, NodeView, TraversedNode, TreeId};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CodeError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("{op}: operand {slot} out of range ({value})")]
    Operand {
        op: &'static str,
        slot: usize,
        value: String,
    },
    #[error("{op} is not allowed in the {tree} tree")]
    Placement { op: &'static str, tree: &'static str },
    #[error("{count} nodes exceed the cap of {cap}")]
    TooManyNodes { count: usize, cap: usize },
}
