use std::sync::OnceLock;

use super::{CodeError, CodeLimits, Instruction, Opcode};
use crate::exec::Program;

pub type Link = Option<Box<CodeNode>>;

/// A non-root node of a code tree.
#[derive(Clone, Debug, PartialEq)]
pub struct CodeNode {
    pub kind: NodeKind,
    /// Next line at the same indentation level.
    pub next: Link,
}

#[derive(Clone, Debug, PartialEq)]
pub enum NodeKind {
    Statement(Instruction),
    If {
        /// Boolean register deciding the branch.
        cond: u32,
        then_branch: Link,
        else_branch: Link,
    },
}

impl CodeNode {
    pub fn statement(instr: Instruction) -> Box<CodeNode> {
        Box::new(CodeNode {
            kind: NodeKind::Statement(instr),
            next: None,
        })
    }

    pub fn if_node(cond: u32, then_branch: Link, else_branch: Link) -> Box<CodeNode> {
        Box::new(CodeNode {
            kind: NodeKind::If {
                cond,
                then_branch,
                else_branch,
            },
            next: None,
        })
    }
}

/// Body of one hard-coded loop. The tree itself plays the role of the root
/// node; `head` is the root's `nextInBranch` slot.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct CodeTree {
    pub head: Link,
}

/// What a traversed node is.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum NodeView<'a> {
    Root,
    Statement(&'a Instruction),
    If { cond: u32 },
}

/// One entry of [`CodeTree::traverse`]; child links are indices into the
/// traversal.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TraversedNode<'a> {
    pub view: NodeView<'a>,
    /// Nesting level; the root and its chain sit at 0.
    pub depth: usize,
    pub next: Option<usize>,
    pub then_branch: Option<usize>,
    pub else_branch: Option<usize>,
}

impl CodeTree {
    pub fn new() -> Self {
        CodeTree::default()
    }

    /// Builds a straight-line tree.
    pub fn from_statements<I: IntoIterator<Item = Instruction>>(instrs: I) -> Self {
        let mut tree = CodeTree::new();
        let items: Vec<Instruction> = instrs.into_iter().collect();
        for instr in items.into_iter().rev() {
            let mut node = CodeNode::statement(instr);
            node.next = tree.head.take();
            tree.head = Some(node);
        }
        tree
    }

    pub fn is_empty(&self) -> bool {
        self.head.is_none()
    }

    /// Depth-first order: current node, then-branch, else-branch, next.
    pub fn traverse(&self) -> Vec<TraversedNode<'_>> {
        fn visit<'a>(link: &'a Link, depth: usize, out: &mut Vec<TraversedNode<'a>>) -> Option<usize> {
            let node = link.as_deref()?;
            let idx = out.len();
            out.push(TraversedNode {
                view: NodeView::Root,
                depth,
                next: None,
                then_branch: None,
                else_branch: None,
            });
            let (view, then_branch, else_branch) = match &node.kind {
                NodeKind::Statement(instr) => (NodeView::Statement(instr), None, None),
                NodeKind::If {
                    cond,
                    then_branch,
                    else_branch,
                } => {
                    let t = visit(then_branch, depth + 1, out);
                    let e = visit(else_branch, depth + 1, out);
                    (NodeView::If { cond: *cond }, t, e)
                }
            };
            let next = visit(&node.next, depth, out);
            out[idx] = TraversedNode {
                view,
                depth,
                next,
                then_branch,
                else_branch,
            };
            Some(idx)
        }

        let mut out = vec![TraversedNode {
            view: NodeView::Root,
            depth: 0,
            next: None,
            then_branch: None,
            else_branch: None,
        }];
        out[0].next = visit(&self.head, 0, &mut out);
        out
    }

    /// Statement and if nodes, excluding the root.
    pub fn node_count(&self) -> usize {
        let mut count = 0;
        self.for_each_node(|_| count += 1);
        count
    }

    pub fn if_count(&self) -> usize {
        let mut count = 0;
        self.for_each_node(|k| {
            if matches!(k, NodeKind::If { .. }) {
                count += 1;
            }
        });
        count
    }

    /// Visits node kinds in traversal order.
    pub fn for_each_node<F: FnMut(&NodeKind)>(&self, mut f: F) {
        fn walk<F: FnMut(&NodeKind)>(link: &Link, f: &mut F) {
            let mut cur = link;
            while let Some(node) = cur {
                f(&node.kind);
                if let NodeKind::If {
                    then_branch,
                    else_branch,
                    ..
                } = &node.kind
                {
                    walk(then_branch, f);
                    walk(else_branch, f);
                }
                cur = &node.next;
            }
        }
        walk(&self.head, &mut f);
    }

    pub fn for_each_node_mut<F: FnMut(&mut NodeKind)>(&mut self, mut f: F) {
        fn walk<F: FnMut(&mut NodeKind)>(link: &mut Link, f: &mut F) {
            let mut cur = link;
            while let Some(node) = cur {
                f(&mut node.kind);
                if let NodeKind::If {
                    then_branch,
                    else_branch,
                    ..
                } = &mut node.kind
                {
                    walk(then_branch, f);
                    walk(else_branch, f);
                }
                cur = &mut node.next;
            }
        }
        walk(&mut self.head, &mut f);
    }

    /// Number of places a new node can be attached: every `nextInBranch`
    /// slot (root included) plus the then/else slots of every if-node.
    pub fn slot_count(&self) -> usize {
        1 + self.node_count() + 2 * self.if_count()
    }

    /// The `n`-th attachment slot in traversal order, occupied or not.
    pub fn slot_mut(&mut self, n: usize) -> Option<&mut Link> {
        fn find<'a>(link: &'a mut Link, n: &mut usize) -> Option<&'a mut Link> {
            if *n == 0 {
                return Some(link);
            }
            *n -= 1;
            let node = link.as_mut()?;
            if let NodeKind::If {
                then_branch,
                else_branch,
                ..
            } = &mut node.kind
            {
                if let Some(slot) = find(then_branch, n) {
                    return Some(slot);
                }
                if let Some(slot) = find(else_branch, n) {
                    return Some(slot);
                }
            }
            find(&mut node.next, n)
        }
        let mut n = n;
        find(&mut self.head, &mut n)
    }

    /// The slot holding the `n`-th non-root node in traversal order.
    fn node_link_mut(&mut self, n: usize) -> Option<&mut Link> {
        fn find<'a>(link: &'a mut Link, n: &mut usize) -> Option<&'a mut Link> {
            link.as_ref()?;
            if *n == 0 {
                return Some(link);
            }
            *n -= 1;
            let node = link.as_mut()?;
            if let NodeKind::If {
                then_branch,
                else_branch,
                ..
            } = &mut node.kind
            {
                if let Some(slot) = find(then_branch, n) {
                    return Some(slot);
                }
                if let Some(slot) = find(else_branch, n) {
                    return Some(slot);
                }
            }
            find(&mut node.next, n)
        }
        let mut n = n;
        find(&mut self.head, &mut n)
    }

    /// The `n`-th non-root node in traversal order.
    pub fn node_mut(&mut self, n: usize) -> Option<&mut CodeNode> {
        self.node_link_mut(n)?.as_deref_mut()
    }

    /// Places `node` in slot `slot`; the slot's previous occupant becomes the
    /// new node's `nextInBranch`. Returns `false` if the slot does not exist.
    pub fn insert(&mut self, slot: usize, mut node: Box<CodeNode>) -> bool {
        match self.slot_mut(slot) {
            Some(link) => {
                node.next = link.take();
                *link = Some(node);
                true
            }
            None => false,
        }
    }

    /// Removes the `n`-th node. Its `nextInBranch` takes its place; the
    /// branches of a removed if-node are discarded. Returns the number of
    /// nodes removed.
    pub fn remove(&mut self, n: usize) -> usize {
        let Some(link) = self.node_link_mut(n) else {
            return 0;
        };
        let mut node = link.take().expect("node link is occupied");
        *link = node.next.take();
        CodeTree { head: Some(node) }.node_count()
    }

    pub fn contains_opcode(&self, op: Opcode) -> bool {
        let mut found = false;
        self.for_each_node(|k| {
            if let NodeKind::Statement(i) = k {
                found |= i.op == op;
            }
        });
        found
    }

    /// Checks operand ranges and opcode placement.
    pub fn validate(&self, limits: &CodeLimits, in_main: bool) -> Result<(), CodeError> {
        let mut result = Ok(());
        self.for_each_node(|k| {
            if result.is_err() {
                return;
            }
            result = match k {
                NodeKind::Statement(instr) => {
                    if !instr.op.allowed_in(in_main) {
                        Err(CodeError::Placement {
                            op: instr.op.mnemonic(),
                            tree: if in_main { "main" } else { "call" },
                        })
                    } else {
                        instr.validate(limits)
                    }
                }
                NodeKind::If { cond, .. } => {
                    if (*cond as usize) < limits.bool_regs {
                        Ok(())
                    } else {
                        Err(CodeError::Operand {
                            op: "if",
                            slot: 0,
                            value: cond.to_string(),
                        })
                    }
                }
            };
        });
        result
    }
}

/// A candidate program: the bodies of the outer (`main`) and inner (`call`)
/// loops plus its most recent loss.
#[derive(Clone, Debug, Default)]
pub struct Individual {
    main: CodeTree,
    call: CodeTree,
    pub cached_loss: Option<f64>,
    compiled: OnceLock<(Program, Program)>,
}

impl PartialEq for Individual {
    fn eq(&self, other: &Self) -> bool {
        self.main == other.main && self.call == other.call
    }
}

/// Which loop body a tree belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TreeId {
    Main,
    Call,
}

impl Individual {
    pub fn new(main: CodeTree, call: CodeTree) -> Self {
        Individual {
            main,
            call,
            cached_loss: None,
            compiled: OnceLock::new(),
        }
    }

    /// Both loop bodies empty.
    pub fn empty() -> Self {
        Individual::default()
    }

    pub fn main(&self) -> &CodeTree {
        &self.main
    }

    pub fn call(&self) -> &CodeTree {
        &self.call
    }

    pub fn tree(&self, id: TreeId) -> &CodeTree {
        match id {
            TreeId::Main => &self.main,
            TreeId::Call => &self.call,
        }
    }

    /// Mutable access; drops the compiled cache and the cached loss.
    pub fn tree_mut(&mut self, id: TreeId) -> &mut CodeTree {
        self.compiled = OnceLock::new();
        self.cached_loss = None;
        match id {
            TreeId::Main => &mut self.main,
            TreeId::Call => &mut self.call,
        }
    }

    pub fn node_count(&self) -> usize {
        self.main.node_count() + self.call.node_count()
    }

    /// Compiles both trees once and caches the result.
    pub fn compiled(&self) -> &(Program, Program) {
        self.compiled
            .get_or_init(|| (crate::exec::compile(&self.main), crate::exec::compile(&self.call)))
    }

    pub fn validate(&self, limits: &CodeLimits) -> Result<(), CodeError> {
        self.main.validate(limits, true)?;
        self.call.validate(limits, false)?;
        let n = self.node_count();
        if n > limits.max_nodes {
            return Err(CodeError::TooManyNodes {
                count: n,
                cap: limits.max_nodes,
            });
        }
        Ok(())
    }
}
