//! Direct tree-walking evaluation. Slower than the bytecode VM but has no
//! jump logic, so it serves as the reference the VM is checked against.

use super::vm::{exec_instruction, Memory, REG_I, REG_J};
use crate::code::{CodeLimits, CodeTree, Individual, Link, NodeKind, Opcode};
use crate::graph::SparseGraph;
use crate::rng::Prng;

/// Evaluates a chain of nodes. `CALL` runs `call` for `j` in `0..i` when
/// given and is ignored otherwise.
pub fn interpret_chain(link: &Link, mem: &mut Memory, call: Option<(&CodeTree, usize)>) {
    let mut cur = link;
    while let Some(node) = cur {
        match &node.kind {
            NodeKind::Statement(instr) if instr.op == Opcode::Call => {
                if let Some((call_tree, i)) = call {
                    for j in 0..i {
                        mem.ints[REG_J] = j as i64;
                        interpret_chain(&call_tree.head, mem, None);
                    }
                }
            }
            NodeKind::Statement(instr) => exec_instruction(instr, mem),
            NodeKind::If {
                cond,
                then_branch,
                else_branch,
            } => {
                if mem.bools[*cond as usize] {
                    interpret_chain(then_branch, mem, call);
                } else {
                    interpret_chain(else_branch, mem, call);
                }
            }
        }
        cur = &node.next;
    }
}

pub fn interpret_tree(tree: &CodeTree, mem: &mut Memory) {
    interpret_chain(&tree.head, mem, None);
}

/// Tree-walking counterpart of [`Memory::run`]: leaves the final registers,
/// node store and graph in `mem`.
pub fn interpret_into(mem: &mut Memory, ind: &Individual, n_nodes: usize, aux: &[i64], rng: &mut Prng) {
    std::mem::swap(&mut mem.rng, rng);
    mem.load_inputs(n_nodes, aux);
    for i in 0..n_nodes {
        mem.ints[REG_I] = i as i64;
        interpret_chain(&ind.main().head, mem, Some((ind.call(), i)));
    }
    std::mem::swap(&mut mem.rng, rng);
}

/// Same contract as [`super::run_individual`], evaluated on the trees.
pub fn interpret_individual(
    ind: &Individual,
    n_nodes: usize,
    aux: &[i64],
    rng: &mut Prng,
    limits: &CodeLimits,
) -> SparseGraph {
    let mut mem = Memory::new(limits);
    interpret_into(&mut mem, ind, n_nodes, aux, rng);
    mem.graph
}
