use rand::Rng;

use super::Program;
use crate::code::{CodeLimits, Individual, Instruction, Opcode};
use crate::graph::SparseGraph;
use crate::rng::{self, Prng};

/// Register index holding the outer loop variable `i`.
pub const REG_I: usize = 0;
/// Register index holding the inner loop variable `j`.
pub const REG_J: usize = 1;
/// Register index holding the node count `N`.
pub const REG_N: usize = 2;
/// First register receiving auxiliary inputs.
pub const REG_AUX: usize = 3;

/// Execution state of one run.
#[derive(Clone, Debug)]
pub struct Memory {
    pub pc: usize,
    pub ints: Vec<i64>,
    pub bools: Vec<bool>,
    pub floats: Vec<f64>,
    /// Borrowed from the caller for the duration of a run.
    pub rng: Prng,
    /// One slot per graph node.
    pub node_store: Vec<i64>,
    pub graph: SparseGraph,
    /// Instructions executed since the last reset, jumps included.
    pub executed: u64,
}

impl Memory {
    pub fn new(limits: &CodeLimits) -> Self {
        assert!(limits.int_regs > REG_N, "need at least 3 integer registers");
        Memory {
            pc: 0,
            ints: vec![0; limits.int_regs],
            bools: vec![false; limits.bool_regs],
            floats: vec![0.0; limits.float_regs],
            rng: rng::seeded(0),
            node_store: Vec::new(),
            graph: SparseGraph::new(0),
            executed: 0,
        }
    }

    /// Zeroes every register, the node store and the graph. The generator is
    /// left alone.
    pub fn reset(&mut self, n_nodes: usize) {
        self.pc = 0;
        self.ints.fill(0);
        self.bools.fill(false);
        self.floats.fill(0.0);
        self.node_store.clear();
        self.node_store.resize(n_nodes, 0);
        self.graph.reset(n_nodes);
        self.executed = 0;
    }

    /// Resets and loads `N` and the auxiliary inputs. Aux values beyond the
    /// integer register file are dropped.
    pub fn load_inputs(&mut self, n_nodes: usize, aux: &[i64]) {
        self.reset(n_nodes);
        self.ints[REG_N] = n_nodes as i64;
        for (reg, &v) in self.ints[REG_AUX..].iter_mut().zip(aux) {
            *reg = v;
        }
    }

    /// Runs `ind` on `n_nodes` nodes. `rng` is moved in for the run and its
    /// advanced state handed back, so consecutive runs continue one stream.
    pub fn run(&mut self, ind: &Individual, n_nodes: usize, aux: &[i64], rng: &mut Prng) {
        let (main, call) = ind.compiled();
        self.run_programs(main, call, n_nodes, aux, rng);
    }

    pub fn run_programs(&mut self, main: &Program, call: &Program, n_nodes: usize, aux: &[i64], rng: &mut Prng) {
        std::mem::swap(&mut self.rng, rng);
        self.load_inputs(n_nodes, aux);
        for i in 0..n_nodes {
            self.ints[REG_I] = i as i64;
            run_program(main, Some((call, i)), self);
        }
        std::mem::swap(&mut self.rng, rng);
    }
}

/// Executes one non-`CALL` instruction and advances `pc`.
///
/// Dynamically invalid operations are skipped: division or modulo by zero,
/// random bounds `<= 0`, out-of-range node-store writes, and jumps that would
/// not move strictly forward. Out-of-range node-store reads yield 0; graph
/// operations follow [`SparseGraph`]'s bounds rules. Integer arithmetic wraps
/// and division truncates toward zero. `CALL` is a no-op here; the run loop
/// of the main program handles it.
pub fn exec_instruction(instr: &Instruction, mem: &mut Memory) {
    use Opcode::*;
    let o = instr.out as usize;
    let a = instr.in1 as usize;
    let b = instr.in2 as usize;
    let imm = instr.in2 as i64;
    let ints = &mut mem.ints;
    let bools = &mut mem.bools;
    let floats = &mut mem.floats;
    match instr.op {
        PlusI => ints[o] = ints[a].wrapping_add(ints[b]),
        MinusI => ints[o] = ints[a].wrapping_sub(ints[b]),
        TimesI => ints[o] = ints[a].wrapping_mul(ints[b]),
        DivI => {
            if ints[b] != 0 {
                ints[o] = ints[a].wrapping_div(ints[b]);
            }
        }
        ModI => {
            if ints[b] != 0 {
                ints[o] = ints[a].wrapping_rem(ints[b]);
            }
        }
        PlusImmI => ints[o] = ints[a].wrapping_add(imm),
        MinusImmI => ints[o] = ints[a].wrapping_sub(imm),
        TimesImmI => ints[o] = ints[a].wrapping_mul(imm),
        DivImmI => {
            if imm != 0 {
                ints[o] = ints[a].wrapping_div(imm);
            }
        }
        ModImmI => {
            if imm != 0 {
                ints[o] = ints[a].wrapping_rem(imm);
            }
        }
        LtI => bools[o] = ints[a] < ints[b],
        LteI => bools[o] = ints[a] <= ints[b],
        EqI => bools[o] = ints[a] == ints[b],
        GteI => bools[o] = ints[a] >= ints[b],
        GtI => bools[o] = ints[a] > ints[b],
        NeqI => bools[o] = ints[a] != ints[b],
        LtImmI => bools[o] = ints[a] < imm,
        LteImmI => bools[o] = ints[a] <= imm,
        EqImmI => bools[o] = ints[a] == imm,
        GteImmI => bools[o] = ints[a] >= imm,
        GtImmI => bools[o] = ints[a] > imm,
        NeqImmI => bools[o] = ints[a] != imm,
        NzeroI => bools[o] = ints[a] != 0,
        ZeroI => bools[o] = ints[a] == 0,
        LtF => bools[o] = floats[a] < floats[b],
        LteF => bools[o] = floats[a] <= floats[b],
        GteF => bools[o] = floats[a] >= floats[b],
        GtF => bools[o] = floats[a] > floats[b],
        LtImmF => bools[o] = floats[a] < instr.float_imm(2) as f64,
        LteImmF => bools[o] = floats[a] <= instr.float_imm(2) as f64,
        GteImmF => bools[o] = floats[a] >= instr.float_imm(2) as f64,
        GtImmF => bools[o] = floats[a] > instr.float_imm(2) as f64,
        AndB => bools[o] = bools[a] && bools[b],
        NandB => bools[o] = !(bools[a] && bools[b]),
        OrB => bools[o] = bools[a] || bools[b],
        NorB => bools[o] = !(bools[a] || bools[b]),
        XorB => bools[o] = bools[a] != bools[b],
        XnorB => bools[o] = bools[a] == bools[b],
        NotB => bools[o] = !bools[a],
        BToI => ints[o] = bools[a] as i64,
        RndUnifF => floats[o] = mem.rng.random::<f64>(),
        RndUnifI => {
            let bound = ints[a];
            if bound > 0 {
                ints[o] = mem.rng.random_range(0..bound);
            }
        }
        RndUnifImmI => {
            let bound = instr.in1 as i64;
            if bound > 0 {
                ints[o] = mem.rng.random_range(0..bound);
            }
        }
        AsgnI => ints[o] = ints[a],
        AsgnF => floats[o] = floats[a],
        AsgnB => bools[o] = bools[a],
        ConstI => ints[o] = instr.in1 as i64,
        ConstF => floats[o] = instr.float_imm(1) as f64,
        AddEdge => mem.graph.add_edge(ints[a], ints[b]),
        RemoveEdge => mem.graph.remove_edge(ints[a], ints[b]),
        FlipEdge => mem.graph.flip_edge(ints[a], ints[b]),
        IsEdge => bools[o] = mem.graph.is_edge(ints[a], ints[b]),
        StoreI => {
            let idx = ints[a];
            if idx >= 0 && (idx as usize) < mem.node_store.len() {
                mem.node_store[idx as usize] = ints[b];
            }
        }
        LoadI => {
            let idx = ints[a];
            ints[o] = if idx >= 0 && (idx as usize) < mem.node_store.len() {
                mem.node_store[idx as usize]
            } else {
                0
            };
        }
        JumpAbs => {
            let target = instr.in1;
            if target >= 0 && target as usize > mem.pc {
                mem.pc = target as usize;
                return;
            }
        }
        JumpRel => {
            let offset = instr.in1;
            if offset > 0 {
                mem.pc += offset as usize;
                return;
            }
        }
        JumpZ | JumpNz => {
            let fire = bools[a] == (instr.op == JumpNz);
            let target = instr.in2;
            if fire && target >= 0 && target as usize > mem.pc {
                mem.pc = target as usize;
                return;
            }
        }
        Call => {}
    }
    mem.pc += 1;
}

/// Runs a program from `pc = 0` to completion. When `call` is given, each
/// `CALL` saves `pc`, runs the call program for `j` in `0..i`, and resumes
/// after the `CALL`.
pub fn run_program(prog: &Program, call: Option<(&Program, usize)>, mem: &mut Memory) {
    let code = prog.instructions();
    mem.pc = 0;
    while let Some(instr) = code.get(mem.pc) {
        mem.executed += 1;
        match (instr.op, call) {
            (Opcode::Call, Some((call_prog, i))) => {
                let saved = mem.pc;
                for j in 0..i {
                    mem.ints[REG_J] = j as i64;
                    run_program(call_prog, None, mem);
                }
                mem.pc = saved + 1;
            }
            _ => exec_instruction(instr, mem),
        }
    }
}

/// Generates one graph. The generator state flows through `rng`.
pub fn run_individual(ind: &Individual, n_nodes: usize, aux: &[i64], rng: &mut Prng) -> SparseGraph {
    let mut mem = Memory::new(&CodeLimits::default());
    mem.run(ind, n_nodes, aux, rng);
    mem.graph
}
