//! Python-like rendering of individuals.
//!
//! The loop skeleton (`def main()`, `for i in range(N)`, `def call()`,
//! `for j in range(i)`) is fixed; only the loop bodies come from the trees.
//! An if-node with an empty then-branch prints `pass` in its place.

use std::fmt::Write;

use super::instruction::format_operand;
use super::{CodeTree, Individual, Instruction, NodeView, Opcode, OperandKind};

/// Register naming used while rendering.
#[derive(Clone, Copy, Debug)]
pub struct RegisterNames {
    /// Number of auxiliary inputs loaded after `N`.
    pub aux_count: usize,
    /// Use `i`, `j`, `N`, `W`, ... instead of `int00`..`int03`, ...
    pub aliases: bool,
}

impl RegisterNames {
    pub fn raw() -> Self {
        RegisterNames {
            aux_count: 0,
            aliases: false,
        }
    }

    pub fn aliased(aux_count: usize) -> Self {
        RegisterNames {
            aux_count,
            aliases: true,
        }
    }

    pub fn int(&self, idx: i32) -> String {
        if self.aliases {
            match idx {
                0 => return "i".into(),
                1 => return "j".into(),
                2 => return "N".into(),
                3 if self.aux_count >= 1 => return "W".into(),
                k if k > 3 && ((k - 3) as usize) < self.aux_count => {
                    return format!("aux{}", k - 3);
                }
                _ => {}
            }
        }
        format!("int{idx:02}")
    }

    pub fn operand(&self, instr: &Instruction, slot: usize) -> String {
        let v = instr.field(slot);
        match instr.op.signature()[slot] {
            OperandKind::Int => self.int(v),
            OperandKind::Bool => format!("bool{v:02}"),
            OperandKind::Float => format!("float{v:02}"),
            _ => format_operand(instr, slot),
        }
    }
}

/// One line of Python-like code for a statement.
pub fn render_statement(instr: &Instruction, names: &RegisterNames) -> String {
    use Opcode::*;
    let a = |slot| names.operand(instr, slot);
    let binary = |sym: &str| format!("{} = {} {} {}", a(0), a(1), sym, a(2));
    match instr.op {
        PlusI | PlusImmI => binary("+"),
        MinusI | MinusImmI => binary("-"),
        TimesI | TimesImmI => binary("*"),
        DivI | DivImmI => binary("//"),
        ModI | ModImmI => binary("%"),
        LtI | LtImmI | LtF | LtImmF => binary("<"),
        LteI | LteImmI | LteF | LteImmF => binary("<="),
        EqI | EqImmI | XnorB => binary("=="),
        GteI | GteImmI | GteF | GteImmF => binary(">="),
        GtI | GtImmI | GtF | GtImmF => binary(">"),
        NeqI | NeqImmI | XorB => binary("!="),
        NzeroI => format!("{} = {} != 0", a(0), a(1)),
        ZeroI => format!("{} = {} == 0", a(0), a(1)),
        AndB => binary("and"),
        OrB => binary("or"),
        NandB => format!("{} = not ({} and {})", a(0), a(1), a(2)),
        NorB => format!("{} = not ({} or {})", a(0), a(1), a(2)),
        NotB => format!("{} = not {}", a(0), a(1)),
        BToI => format!("{} = int({})", a(0), a(1)),
        RndUnifF => format!("{} = random()", a(0)),
        RndUnifI | RndUnifImmI => format!("{} = uniform({})", a(0), a(1)),
        AsgnI | AsgnF | AsgnB | ConstI | ConstF => format!("{} = {}", a(0), a(1)),
        AddEdge => format!("add_edge({}, {})", a(1), a(2)),
        RemoveEdge => format!("remove_edge({}, {})", a(1), a(2)),
        FlipEdge => format!("flip_edge({}, {})", a(1), a(2)),
        IsEdge => format!("{} = is_edge({}, {})", a(0), a(1), a(2)),
        StoreI => format!("node_store[{}] = {}", a(1), a(2)),
        LoadI => format!("{} = node_store[{}]", a(0), a(1)),
        Call => "call()".into(),
        JumpAbs | JumpRel | JumpZ | JumpNz => instr.to_string(),
    }
}

/// Renders one loop body, `indent` repeated per nesting level on top of
/// `base_depth` levels.
pub fn render_tree(tree: &CodeTree, names: &RegisterNames, indent: &str, base_depth: usize) -> String {
    let nodes = tree.traverse();
    let mut out = String::new();
    let pad = |depth: usize| indent.repeat(base_depth + depth);

    // `else:` lines are emitted when the traversal reaches the first node of
    // an else-branch, or right after the if-line when the branch would
    // otherwise be skipped (empty then-branch).
    let mut else_heads = vec![false; nodes.len()];
    for n in &nodes {
        if let Some(e) = n.else_branch {
            else_heads[e] = true;
        }
    }
    for (idx, node) in nodes.iter().enumerate() {
        if else_heads[idx] {
            let _ = writeln!(out, "{}else:", pad(node.depth - 1));
        }
        match node.view {
            NodeView::Root => {}
            NodeView::Statement(instr) => {
                let _ = writeln!(out, "{}{}", pad(node.depth), render_statement(instr, names));
            }
            NodeView::If { cond } => {
                let _ = writeln!(out, "{}if bool{cond:02}:", pad(node.depth));
                if node.then_branch.is_none() {
                    let _ = writeln!(out, "{}pass", pad(node.depth + 1));
                }
            }
        }
    }
    out
}

/// Full listing of an individual including the hard-coded loop lines.
pub fn render_pseudocode(ind: &Individual, aux_count: usize) -> String {
    let names = RegisterNames::aliased(aux_count);
    let mut out = String::new();
    out.push_str("def main():\n  for i in range(N):\n");
    out.push_str(&render_tree(ind.main(), &names, "  ", 2));
    out.push_str("def call():\n  for j in range(i):\n");
    out.push_str(&render_tree(ind.call(), &names, "  ", 2));
    out
}
