use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::Rng;
use rand_distr::Normal;

use super::SearchConfig;
use crate::code::{CodeLimits, CodeNode, Individual, Instruction, NodeKind, NodeView, Opcode, OperandKind, TreeId};

/// Integer immediates of fresh statements are drawn from this range.
pub const INT_IMM_RANGE: std::ops::RangeInclusive<i32> = -8..=8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MutationKind {
    Insertion,
    Knockout,
    OpChange,
    ParamChange,
    Randomization,
    NoOp,
}

impl MutationKind {
    pub const ALL: [MutationKind; 6] = [
        MutationKind::Insertion,
        MutationKind::Knockout,
        MutationKind::OpChange,
        MutationKind::ParamChange,
        MutationKind::Randomization,
        MutationKind::NoOp,
    ];
}

const TREES: [TreeId; 2] = [TreeId::Main, TreeId::Call];

/// Applies one randomly chosen mutation per call. Built once per search.
#[derive(Clone, Debug)]
pub struct Mutator {
    kinds: WeightedIndex<f64>,
    limits: CodeLimits,
    if_insert_prob: f64,
    int_step: Option<Normal<f64>>,
    float_step: Option<Normal<f64>>,
    main_ops: Vec<Opcode>,
    call_ops: Vec<Opcode>,
}

fn step_distribution(std: f64) -> Option<Normal<f64>> {
    (std > 0.0).then(|| Normal::new(0.0, std).expect("finite deviation"))
}

impl Mutator {
    pub fn new(cfg: &SearchConfig) -> Self {
        Mutator {
            kinds: WeightedIndex::new(cfg.mutation_weights.as_array()).expect("validated mutation weights"),
            limits: cfg.limits(),
            if_insert_prob: cfg.if_insert_prob,
            int_step: step_distribution(cfg.int_step_std),
            float_step: step_distribution(cfg.float_step_std),
            main_ops: Opcode::statement_set(true),
            call_ops: Opcode::statement_set(false),
        }
    }

    fn ops(&self, tree: TreeId) -> &[Opcode] {
        match tree {
            TreeId::Main => &self.main_ops,
            TreeId::Call => &self.call_ops,
        }
    }

    pub fn sample_kind<R: Rng + ?Sized>(&self, rng: &mut R) -> MutationKind {
        MutationKind::ALL[self.kinds.sample(rng)]
    }

    /// Returns the child and the sampled kind. A kind whose preconditions do
    /// not hold leaves the child equal to the parent.
    pub fn mutate<R: Rng + ?Sized>(&self, ind: &Individual, rng: &mut R) -> (Individual, MutationKind) {
        let kind = self.sample_kind(rng);
        let mut child = ind.clone();
        self.apply(kind, &mut child, rng);
        (child, kind)
    }

    /// Applies `kind` in place. Returns `false` when it degraded to a no-op.
    pub fn apply<R: Rng + ?Sized>(&self, kind: MutationKind, ind: &mut Individual, rng: &mut R) -> bool {
        match kind {
            MutationKind::Insertion => self.insert(ind, rng),
            MutationKind::Knockout => knockout(ind, rng),
            MutationKind::OpChange => self.change_op(ind, rng),
            MutationKind::ParamChange => self.change_param(ind, rng),
            MutationKind::Randomization => self.randomize(ind, rng),
            MutationKind::NoOp => false,
        }
    }

    fn register<R: Rng + ?Sized>(&self, kind: OperandKind, rng: &mut R) -> i32 {
        rng.random_range(0..self.limits.register_count(kind)) as i32
    }

    /// A statement with an opcode drawn uniformly from those allowed in
    /// `tree` and uniformly drawn operands.
    pub fn random_statement<R: Rng + ?Sized>(&self, tree: TreeId, rng: &mut R) -> Instruction {
        let ops = self.ops(tree);
        let op = ops[rng.random_range(0..ops.len())];
        let mut instr = Instruction::new(op, 0, 0, 0);
        for (slot, kind) in op.signature().into_iter().enumerate() {
            match kind {
                OperandKind::Int | OperandKind::Bool | OperandKind::Float => {
                    *instr.field_mut(slot) = self.register(kind, rng);
                }
                OperandKind::IntImm => *instr.field_mut(slot) = rng.random_range(INT_IMM_RANGE),
                OperandKind::FloatImm => instr.set_float_imm(slot, rng.random::<f32>()),
                OperandKind::None | OperandKind::Target => {}
            }
        }
        instr
    }

    fn insert<R: Rng + ?Sized>(&self, ind: &mut Individual, rng: &mut R) -> bool {
        if ind.node_count() >= self.limits.max_nodes {
            return false;
        }
        let main_slots = ind.main().slot_count();
        let slot = rng.random_range(0..main_slots + ind.call().slot_count());
        let (tree, slot) = if slot < main_slots {
            (TreeId::Main, slot)
        } else {
            (TreeId::Call, slot - main_slots)
        };
        let node = if rng.random_bool(self.if_insert_prob) {
            CodeNode::if_node(self.register(OperandKind::Bool, rng) as u32, None, None)
        } else {
            CodeNode::statement(self.random_statement(tree, rng))
        };
        ind.tree_mut(tree).insert(slot, node)
    }

    fn change_op<R: Rng + ?Sized>(&self, ind: &mut Individual, rng: &mut R) -> bool {
        let statements: Vec<(TreeId, usize, Opcode)> = TREES
            .iter()
            .flat_map(|&t| {
                ind.tree(t)
                    .traverse()
                    .into_iter()
                    .skip(1)
                    .enumerate()
                    .filter_map(move |(k, n)| match n.view {
                        NodeView::Statement(instr) => Some((t, k, instr.op)),
                        _ => None,
                    })
                    .collect::<Vec<_>>()
            })
            .collect();
        if statements.is_empty() {
            return false;
        }
        let (tree, idx, op) = statements[rng.random_range(0..statements.len())];
        let sig = op.signature();
        let choices: Vec<Opcode> = self
            .ops(tree)
            .iter()
            .copied()
            .filter(|o| *o != op && o.signature() == sig)
            .collect();
        if choices.is_empty() {
            return false;
        }
        let new_op = choices[rng.random_range(0..choices.len())];
        match ind.tree_mut(tree).node_mut(idx).map(|n| &mut n.kind) {
            Some(NodeKind::Statement(instr)) => instr.op = new_op,
            _ => unreachable!("statement index from traversal"),
        }
        true
    }

    /// Rounded Gaussian step; a zero step is redrawn once.
    fn discrete_step<R: Rng + ?Sized>(&self, rng: &mut R) -> i64 {
        let Some(dist) = &self.int_step else { return 0 };
        let s = dist.sample(rng).round();
        let s = if s == 0.0 { dist.sample(rng).round() } else { s };
        s as i64
    }

    fn step_register<R: Rng + ?Sized>(&self, kind: OperandKind, old: i32, rng: &mut R) -> i32 {
        let max = self.limits.register_count(kind) as i64 - 1;
        (old as i64 + self.discrete_step(rng)).clamp(0, max) as i32
    }

    fn change_param<R: Rng + ?Sized>(&self, ind: &mut Individual, rng: &mut R) -> bool {
        let mut nodes: Vec<(TreeId, usize)> = Vec::new();
        for t in TREES {
            for (k, n) in ind.tree(t).traverse().into_iter().skip(1).enumerate() {
                let has_operand = match n.view {
                    NodeView::Statement(instr) => instr.op.arity() > 0,
                    _ => true,
                };
                if has_operand {
                    nodes.push((t, k));
                }
            }
        }
        if nodes.is_empty() {
            return false;
        }
        let (tree, idx) = nodes[rng.random_range(0..nodes.len())];
        let float_step = self.float_step;
        match &mut ind.tree_mut(tree).node_mut(idx).expect("node index from traversal").kind {
            NodeKind::If { cond, .. } => {
                *cond = self.step_register(OperandKind::Bool, *cond as i32, rng) as u32;
            }
            NodeKind::Statement(instr) => {
                let slots: Vec<usize> = instr.used_slots().collect();
                let slot = slots[rng.random_range(0..slots.len())];
                match instr.op.signature()[slot] {
                    OperandKind::FloatImm => {
                        let delta = float_step.map_or(0.0, |d| d.sample(rng));
                        let v = (instr.float_imm(slot) as f64 + delta) as f32;
                        instr.set_float_imm(slot, v);
                    }
                    OperandKind::IntImm => {
                        let v = instr.field(slot) as i64 + self.discrete_step(rng);
                        *instr.field_mut(slot) = v.clamp(i32::MIN as i64, i32::MAX as i64) as i32;
                    }
                    kind => {
                        let v = self.step_register(kind, instr.field(slot), rng);
                        *instr.field_mut(slot) = v;
                    }
                }
            }
        }
        true
    }

    /// Redraws every node's content while keeping the tree shapes.
    fn randomize<R: Rng + ?Sized>(&self, ind: &mut Individual, rng: &mut R) -> bool {
        if ind.node_count() == 0 {
            return false;
        }
        for t in TREES {
            ind.tree_mut(t).for_each_node_mut(|kind| match kind {
                NodeKind::Statement(instr) => *instr = self.random_statement(t, rng),
                NodeKind::If { cond, .. } => *cond = self.register(OperandKind::Bool, rng) as u32,
            });
        }
        true
    }
}

/// Removes one uniformly chosen node from either tree.
fn knockout<R: Rng + ?Sized>(ind: &mut Individual, rng: &mut R) -> bool {
    let main_nodes = ind.main().node_count();
    let total = ind.node_count();
    if total == 0 {
        return false;
    }
    let n = rng.random_range(0..total);
    let (tree, n) = if n < main_nodes {
        (TreeId::Main, n)
    } else {
        (TreeId::Call, n - main_nodes)
    };
    ind.tree_mut(tree).remove(n) > 0
}

/// One mutation of `ind` under `cfg`.
pub fn mutate<R: Rng + ?Sized>(ind: &Individual, cfg: &SearchConfig, rng: &mut R) -> Individual {
    Mutator::new(cfg).mutate(ind, rng).0
}
