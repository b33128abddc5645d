use std::fmt;

use crate::code::{CodeTree, Individual, Instruction, NodeView, Opcode};

/// Linear bytecode for one loop body. Only [`compile`] builds programs, so
/// every jump target is strictly ahead of its jump and at most `len()`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Program {
    code: Vec<Instruction>,
}

impl Program {
    pub fn instructions(&self) -> &[Instruction] {
        &self.code
    }

    pub fn len(&self) -> usize {
        self.code.len()
    }

    pub fn is_empty(&self) -> bool {
        self.code.is_empty()
    }

    pub fn call_count(&self) -> usize {
        self.code.iter().filter(|i| i.op == Opcode::Call).count()
    }
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for instr in &self.code {
            writeln!(f, "{instr}")?;
        }
        Ok(())
    }
}

/// Flattens a code tree into bytecode.
///
/// Nodes are visited in traversal order. An if-node becomes a conditional
/// jump (or an unconditional one when both branches are empty); the node
/// following the if is pushed on a target stack so each branch can jump to it
/// when it ends. A chain that ends without a `nextInBranch` pops its jump
/// target from that stack; the bottom entry stands for "end of program".
/// Branch ends always emit their jump even when it lands on the very next
/// instruction.
pub fn compile(tree: &CodeTree) -> Program {
    let nodes = tree.traverse();
    let mut start = vec![0usize; nodes.len()];
    // `None` means "one past the last instruction".
    let mut targets: Vec<Option<usize>> = vec![None];
    let mut patches: Vec<(usize, Option<usize>)> = Vec::new();
    let mut code: Vec<Instruction> = Vec::new();

    let pop = |targets: &mut Vec<Option<usize>>| targets.pop().expect("jump target stack underflow");

    for (idx, node) in nodes.iter().enumerate() {
        start[idx] = code.len();
        match node.view {
            NodeView::Root => {}
            NodeView::If { cond } => {
                let next = match node.next {
                    Some(n) => Some(n),
                    None => pop(&mut targets),
                };
                let cond = cond as i32;
                match (node.then_branch, node.else_branch) {
                    (Some(_), Some(else_head)) => {
                        targets.extend([next, next]);
                        patches.push((code.len(), Some(else_head)));
                        code.push(Instruction::compact(Opcode::JumpZ, &[cond, 0]));
                    }
                    (Some(_), None) => {
                        targets.push(next);
                        patches.push((code.len(), next));
                        code.push(Instruction::compact(Opcode::JumpZ, &[cond, 0]));
                    }
                    (None, Some(_)) => {
                        targets.push(next);
                        patches.push((code.len(), next));
                        code.push(Instruction::compact(Opcode::JumpNz, &[cond, 0]));
                    }
                    (None, None) => {
                        patches.push((code.len(), next));
                        code.push(Instruction::compact(Opcode::JumpAbs, &[0]));
                    }
                }
            }
            NodeView::Statement(instr) => {
                code.push(*instr);
                if node.next.is_none() {
                    let next = pop(&mut targets);
                    patches.push((code.len(), next));
                    code.push(Instruction::compact(Opcode::JumpAbs, &[0]));
                }
            }
        }
    }

    let end = code.len();
    for (at, target) in patches {
        let t = target.map_or(end, |node| start[node]) as i32;
        let jump = &mut code[at];
        match jump.op {
            Opcode::JumpAbs => jump.in1 = t,
            _ => jump.in2 = t,
        }
    }
    Program { code }
}

/// Compiled main and call programs of an individual, cached on it.
pub fn compile_and_check(ind: &Individual) -> &(Program, Program) {
    ind.compiled()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::{fixtures, CodeNode};

    fn i(op: Opcode, args: &[i32]) -> Instruction {
        Instruction::compact(op, args)
    }

    #[test]
    fn transition_tree_compiles_to_reference_listing() {
        use Opcode::*;
        let program = compile(&fixtures::transition_tree());
        let expected = vec![
            i(MinusI, &[5, 0, 1]),
            i(JumpAbs, &[2]),
            i(EqI, &[1, 5, 3]),
            i(JumpZ, &[1, 7]),
            i(AsgnI, &[6, 0]),
            i(AddEdge, &[1, 6]),
            i(JumpAbs, &[13]),
            i(NeqImmI, &[1, 4, 0]),
            i(JumpZ, &[1, 11]),
            i(AddEdge, &[0, 1]),
            i(JumpAbs, &[11]),
            i(ConstI, &[5, 4]),
            i(JumpAbs, &[13]),
        ];
        assert_eq!(program.instructions(), expected.as_slice());
        assert_eq!(
            program.to_string(),
            "MINUS_I(5, 0, 1)\nJUMP_ABS(2)\nEQ_I(1, 5, 3)\nJUMPZ(1, 7)\nASGN_I(6, 0)\n\
             ADD_EDGE(1, 6)\nJUMP_ABS(13)\nNEQ_IMM_I(1, 4, 0)\nJUMPZ(1, 11)\nADD_EDGE(0, 1)\n\
             JUMP_ABS(11)\nCONST_I(5, 4)\nJUMP_ABS(13)\n"
        );
    }

    #[test]
    fn empty_tree_compiles_to_nothing() {
        assert!(compile(&CodeTree::new()).is_empty());
    }

    #[test]
    fn single_statement_keeps_trailing_jump() {
        let tree = CodeTree::from_statements([i(Opcode::ConstI, &[4, 1])]);
        let program = compile(&tree);
        assert_eq!(
            program.instructions(),
            &[i(Opcode::ConstI, &[4, 1]), i(Opcode::JumpAbs, &[2])]
        );
    }

    #[test]
    fn else_only_if_uses_jumpnz() {
        let mut tree = CodeTree::new();
        tree.head = Some(CodeNode::if_node(
            3,
            None,
            Some(CodeNode::statement(i(Opcode::ConstI, &[4, 1]))),
        ));
        let program = compile(&tree);
        assert_eq!(
            program.instructions(),
            &[
                i(Opcode::JumpNz, &[3, 3]),
                i(Opcode::ConstI, &[4, 1]),
                i(Opcode::JumpAbs, &[3])
            ]
        );
    }

    #[test]
    fn jumps_always_move_forward() {
        for tree in [fixtures::transition_tree(), fixtures::grid().main().clone()] {
            let program = compile(&tree);
            for (pc, instr) in program.instructions().iter().enumerate() {
                let target = match instr.op {
                    Opcode::JumpAbs => instr.in1,
                    Opcode::JumpZ | Opcode::JumpNz => instr.in2,
                    _ => continue,
                } as usize;
                assert!(target > pc && target <= program.len());
            }
        }
    }

    #[test]
    fn compile_is_cached_and_deterministic() {
        let ind = fixtures::grid();
        let first = compile_and_check(&ind).clone();
        assert_eq!(&first, compile_and_check(&ind));
        assert_eq!(first.0, compile(ind.main()));
        let empty = crate::code::Individual::empty();
        let (m, c) = compile_and_check(&empty);
        assert!(m.is_empty() && c.is_empty());
    }
}
