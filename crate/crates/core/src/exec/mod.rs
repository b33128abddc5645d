//! Compilation of code trees to bytecode and the virtual machine that runs
//! it to build graphs.

mod compile;
mod interp;
mod vm;

pub use compile::{compile, compile_and_check, Program};
pub use interp::{interpret_chain, interpret_individual, interpret_into, interpret_tree};
pub use vm::{exec_instruction, run_individual, run_program, Memory, REG_AUX, REG_I, REG_J, REG_N};
