//! Canonical line-oriented program format.
//!
//! ```text
//! graphgen-program 1
//! main
//!   MINUS_I 5 0 1
//!   if 1
//!     ASGN_I 6 0
//!   else
//!     CONST_I 5 4
//!   end
//! call
//!   ADD_EDGE 0 1
//! ```
//!
//! One node per line. Statements are a mnemonic followed by the used operand
//! fields in `out in1 in2` order; float constants use the shortest text that
//! reads back to the same `f32`. An if-node is `if <bool register>`, its
//! then-branch, an optional `else` plus else-branch, and `end`. Indentation
//! is emitted for readability and ignored on input, as are blank lines and
//! lines starting with `#`.

use std::fmt::Write;

use super::instruction::format_operand;
use super::{CodeError, CodeLimits, CodeNode, CodeTree, Individual, Instruction, Link, NodeKind, Opcode, OperandKind};

pub const HEADER: &str = "graphgen-program 1";

pub fn serialize(ind: &Individual) -> String {
    let mut out = String::new();
    out.push_str(HEADER);
    out.push('\n');
    out.push_str("main\n");
    write_chain(&ind.main().head, 1, &mut out);
    out.push_str("call\n");
    write_chain(&ind.call().head, 1, &mut out);
    out
}

fn write_chain(link: &Link, depth: usize, out: &mut String) {
    let mut cur = link;
    while let Some(node) = cur {
        let pad = "  ".repeat(depth);
        match &node.kind {
            NodeKind::Statement(instr) => {
                let _ = write!(out, "{pad}{}", instr.op.mnemonic());
                for slot in instr.used_slots() {
                    let _ = write!(out, " {}", format_operand(instr, slot));
                }
                out.push('\n');
            }
            NodeKind::If {
                cond,
                then_branch,
                else_branch,
            } => {
                let _ = writeln!(out, "{pad}if {cond}");
                write_chain(then_branch, depth + 1, out);
                if else_branch.is_some() {
                    let _ = writeln!(out, "{pad}else");
                    write_chain(else_branch, depth + 1, out);
                }
                let _ = writeln!(out, "{pad}end");
            }
        }
        cur = &node.next;
    }
}

/// Parses and validates against `limits`.
pub fn deserialize(text: &str, limits: &CodeLimits) -> Result<Individual, CodeError> {
    let mut parser = Parser {
        lines: text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
            .collect(),
        pos: 0,
        nodes: 0,
        limits,
    };
    parser.expect_word(HEADER)?;
    parser.expect_word("main")?;
    let (main, end) = parser.block(true)?;
    if end != Terminator::CallHeader {
        return Err(parser.error_here("expected `call` section"));
    }
    let (call, end) = parser.block(false)?;
    if end != Terminator::Eof {
        return Err(parser.error_here("unexpected line after `call` section"));
    }
    let ind = Individual::new(CodeTree { head: main }, CodeTree { head: call });
    ind.validate(limits)?;
    Ok(ind)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Terminator {
    Else,
    End,
    CallHeader,
    Eof,
}

struct Parser<'a> {
    lines: Vec<(usize, &'a str)>,
    pos: usize,
    nodes: usize,
    limits: &'a CodeLimits,
}

impl<'a> Parser<'a> {
    fn error_at(line: usize, message: impl Into<String>) -> CodeError {
        CodeError::Parse {
            line,
            message: message.into(),
        }
    }

    fn error_here(&self, message: &str) -> CodeError {
        let line = self
            .lines
            .get(self.pos.saturating_sub(1))
            .map_or(0, |(n, _)| *n);
        Self::error_at(line, message)
    }

    fn expect_word(&mut self, word: &str) -> Result<(), CodeError> {
        match self.lines.get(self.pos) {
            Some((_, l)) if *l == word => {
                self.pos += 1;
                Ok(())
            }
            Some((n, l)) => Err(Self::error_at(*n, format!("expected `{word}`, found `{l}`"))),
            None => Err(Self::error_at(0, format!("expected `{word}`, found end of input"))),
        }
    }

    /// Reads nodes until a terminator line, which is consumed.
    fn block(&mut self, in_main: bool) -> Result<(Link, Terminator), CodeError> {
        let mut nodes: Vec<Box<CodeNode>> = Vec::new();
        let terminator = loop {
            let Some(&(line_no, line)) = self.lines.get(self.pos) else {
                break Terminator::Eof;
            };
            self.pos += 1;
            let mut words = line.split_whitespace();
            let head = words.next().unwrap_or_default();
            match head {
                "else" => break Terminator::Else,
                "end" => break Terminator::End,
                "call" if in_main && words.clone().next().is_none() => break Terminator::CallHeader,
                "if" => {
                    let cond = words
                        .next()
                        .and_then(|w| w.parse::<u32>().ok())
                        .ok_or_else(|| Self::error_at(line_no, "`if` needs a boolean register"))?;
                    if words.next().is_some() {
                        return Err(Self::error_at(line_no, "trailing text after `if`"));
                    }
                    self.count_node(line_no)?;
                    let (then_branch, end) = self.block(in_main)?;
                    let else_branch = match end {
                        Terminator::End => None,
                        Terminator::Else => {
                            let (e, end) = self.block(in_main)?;
                            if end != Terminator::End {
                                return Err(Self::error_at(line_no, "`if` is not closed by `end`"));
                            }
                            e
                        }
                        _ => return Err(Self::error_at(line_no, "`if` is not closed by `end`")),
                    };
                    nodes.push(CodeNode::if_node(cond, then_branch, else_branch));
                }
                mnemonic => {
                    let op = Opcode::from_mnemonic(mnemonic)
                        .ok_or_else(|| Self::error_at(line_no, format!("unknown opcode `{mnemonic}`")))?;
                    let instr = parse_operands(op, words.collect(), line_no)?;
                    self.count_node(line_no)?;
                    nodes.push(CodeNode::statement(instr));
                }
            }
        };
        let mut head: Link = None;
        for mut node in nodes.into_iter().rev() {
            node.next = head;
            head = Some(node);
        }
        Ok((head, terminator))
    }

    fn count_node(&mut self, line: usize) -> Result<(), CodeError> {
        self.nodes += 1;
        if self.nodes > self.limits.max_nodes {
            return Err(Self::error_at(
                line,
                format!("program exceeds the {}-node cap", self.limits.max_nodes),
            ));
        }
        Ok(())
    }
}

fn parse_operands(op: Opcode, words: Vec<&str>, line: usize) -> Result<Instruction, CodeError> {
    let sig = op.signature();
    let slots: Vec<usize> = (0..3).filter(|&s| sig[s] != OperandKind::None).collect();
    if words.len() != slots.len() {
        return Err(Parser::error_at(
            line,
            format!("{op} takes {} operands, found {}", slots.len(), words.len()),
        ));
    }
    let mut instr = Instruction::new(op, 0, 0, 0);
    for (&slot, word) in slots.iter().zip(words) {
        if sig[slot] == OperandKind::FloatImm {
            let v: f32 = word
                .parse()
                .map_err(|_| Parser::error_at(line, format!("bad float operand `{word}`")))?;
            instr.set_float_imm(slot, v);
        } else {
            *instr.field_mut(slot) = word
                .parse()
                .map_err(|_| Parser::error_at(line, format!("bad integer operand `{word}`")))?;
        }
    }
    Ok(instr)
}
