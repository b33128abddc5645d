//! Known programs used as golden references.
//!
//! The small ones are also built node by node so that parser and builder can
//! be checked against each other.

use super::{CodeLimits, CodeNode, CodeTree, Individual, Instruction, Link, Opcode};

pub const TRANSITION_TEXT: &str = include_str!("../../fixtures/transition.prog");
pub const GRID_WITH_WIDTH_TEXT: &str = include_str!("../../fixtures/grid_with_width.prog");
pub const LOBSTER_TEXT: &str = include_str!("../../fixtures/lobster.prog");
pub const PROTEIN_TEXT: &str = include_str!("../../fixtures/protein.prog");
pub const GRID_TEXT: &str = include_str!("../../fixtures/grid.prog");

fn st(op: Opcode, args: &[i32]) -> Box<CodeNode> {
    CodeNode::statement(Instruction::compact(op, args))
}

fn chain(nodes: Vec<Box<CodeNode>>) -> Link {
    let mut head = None;
    for mut node in nodes.into_iter().rev() {
        node.next = head;
        head = Some(node);
    }
    head
}

fn main_only(nodes: Vec<Box<CodeNode>>) -> Individual {
    Individual::new(CodeTree { head: chain(nodes) }, CodeTree::new())
}

/// Loop body with an empty if, a then/else if and a nested then-only if.
pub fn transition_tree() -> CodeTree {
    use Opcode::*;
    let else_branch = chain(vec![
        st(NeqImmI, &[1, 4, 0]),
        CodeNode::if_node(1, chain(vec![st(AddEdge, &[0, 1])]), None),
        st(ConstI, &[5, 4]),
    ]);
    let then_branch = chain(vec![st(AsgnI, &[6, 0]), st(AddEdge, &[1, 6])]);
    CodeTree {
        head: chain(vec![
            st(MinusI, &[5, 0, 1]),
            CodeNode::if_node(1, None, None),
            st(EqI, &[1, 5, 3]),
            CodeNode::if_node(1, then_branch, else_branch),
        ]),
    }
}

/// The transition tree placed in the call loop, as in [`TRANSITION_TEXT`].
pub fn transition() -> Individual {
    Individual::new(CodeTree::new(), transition_tree())
}

/// Grid program that reads the width from `int03`.
pub fn grid_with_width() -> Individual {
    use Opcode::*;
    main_only(vec![
        st(RemoveEdge, &[6, 10]),
        st(AddEdge, &[0, 6]),
        st(AsgnI, &[7, 0]),
        st(MinusI, &[9, 0, 3]),
        st(AddEdge, &[9, 0]),
        st(PlusI, &[10, 7, 6]),
        st(PlusI, &[6, 0, 5]),
    ])
}

pub fn lobster() -> Individual {
    use Opcode::*;
    main_only(vec![
        st(RndUnifI, &[5, 0]),
        st(DivImmI, &[8, 5, 2]),
        st(AddEdge, &[0, 8]),
    ])
}

pub fn protein() -> Individual {
    use Opcode::*;
    main_only(vec![st(FlipEdge, &[3, 0]), st(RndUnifI, &[3, 0])])
}

/// The long grid program found without the width input.
pub fn grid() -> Individual {
    super::deserialize(GRID_TEXT, &CodeLimits::default()).expect("grid fixture parses")
}
