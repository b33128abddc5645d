use std::fmt;

use super::CodeError;

/// How an operand field of an [`Instruction`] is interpreted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OperandKind {
    /// Field is unused and must hold 0.
    None,
    /// Address into the integer register file.
    Int,
    /// Address into the boolean register file.
    Bool,
    /// Address into the float register file.
    Float,
    /// Signed integer constant.
    IntImm,
    /// `f32` constant stored bitwise.
    FloatImm,
    /// Absolute instruction index (jumps only).
    Target,
}

impl OperandKind {
    pub fn is_register(self) -> bool {
        matches!(self, OperandKind::Int | OperandKind::Bool | OperandKind::Float)
    }
}

macro_rules! opcodes {
    ($($variant:ident = $mnemonic:literal : [$out:ident, $in1:ident, $in2:ident];)*) => {
        /// Operation codes understood by the VM.
        #[repr(u32)]
        #[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub enum Opcode {
            $($variant,)*
        }

        impl Opcode {
            pub const ALL: &'static [Opcode] = &[$(Opcode::$variant,)*];

            pub fn mnemonic(self) -> &'static str {
                match self {
                    $(Opcode::$variant => $mnemonic,)*
                }
            }

            /// Operand kinds of the `out`, `in1` and `in2` fields.
            pub fn signature(self) -> [OperandKind; 3] {
                match self {
                    $(Opcode::$variant => [OperandKind::$out, OperandKind::$in1, OperandKind::$in2],)*
                }
            }

            pub fn from_mnemonic(s: &str) -> Option<Opcode> {
                match s {
                    $($mnemonic => Some(Opcode::$variant),)*
                    _ => None,
                }
            }
        }
    };
}

opcodes! {
    PlusI = "PLUS_I": [Int, Int, Int];
    MinusI = "MINUS_I": [Int, Int, Int];
    TimesI = "TIMES_I": [Int, Int, Int];
    DivI = "DIV_I": [Int, Int, Int];
    ModI = "MOD_I": [Int, Int, Int];
    PlusImmI = "PLUS_IMM_I": [Int, Int, IntImm];
    MinusImmI = "MINUS_IMM_I": [Int, Int, IntImm];
    TimesImmI = "TIMES_IMM_I": [Int, Int, IntImm];
    DivImmI = "DIV_IMM_I": [Int, Int, IntImm];
    ModImmI = "MOD_IMM_I": [Int, Int, IntImm];
    LtI = "LT_I": [Bool, Int, Int];
    LteI = "LTE_I": [Bool, Int, Int];
    EqI = "EQ_I": [Bool, Int, Int];
    GteI = "GTE_I": [Bool, Int, Int];
    GtI = "GT_I": [Bool, Int, Int];
    NeqI = "NEQ_I": [Bool, Int, Int];
    LtImmI = "LT_IMM_I": [Bool, Int, IntImm];
    LteImmI = "LTE_IMM_I": [Bool, Int, IntImm];
    EqImmI = "EQ_IMM_I": [Bool, Int, IntImm];
    GteImmI = "GTE_IMM_I": [Bool, Int, IntImm];
    GtImmI = "GT_IMM_I": [Bool, Int, IntImm];
    NeqImmI = "NEQ_IMM_I": [Bool, Int, IntImm];
    NzeroI = "NZERO_I": [Bool, Int, None];
    ZeroI = "ZERO_I": [Bool, Int, None];
    LtF = "LT_F": [Bool, Float, Float];
    LteF = "LTE_F": [Bool, Float, Float];
    GteF = "GTE_F": [Bool, Float, Float];
    GtF = "GT_F": [Bool, Float, Float];
    LtImmF = "LT_IMM_F": [Bool, Float, FloatImm];
    LteImmF = "LTE_IMM_F": [Bool, Float, FloatImm];
    GteImmF = "GTE_IMM_F": [Bool, Float, FloatImm];
    GtImmF = "GT_IMM_F": [Bool, Float, FloatImm];
    AndB = "AND_B": [Bool, Bool, Bool];
    NandB = "NAND_B": [Bool, Bool, Bool];
    OrB = "OR_B": [Bool, Bool, Bool];
    NorB = "NOR_B": [Bool, Bool, Bool];
    XorB = "XOR_B": [Bool, Bool, Bool];
    XnorB = "XNOR_B": [Bool, Bool, Bool];
    NotB = "NOT_B": [Bool, Bool, None];
    BToI = "B_TO_I": [Int, Bool, None];
    RndUnifF = "RND_UNIF_F": [Float, None, None];
    RndUnifI = "RND_UNIF_I": [Int, Int, None];
    RndUnifImmI = "RND_UNIF_IMM_I": [Int, IntImm, None];
    AsgnI = "ASGN_I": [Int, Int, None];
    AsgnF = "ASGN_F": [Float, Float, None];
    AsgnB = "ASGN_B": [Bool, Bool, None];
    ConstI = "CONST_I": [Int, IntImm, None];
    ConstF = "CONST_F": [Float, FloatImm, None];
    AddEdge = "ADD_EDGE": [None, Int, Int];
    RemoveEdge = "REMOVE_EDGE": [None, Int, Int];
    FlipEdge = "FLIP_EDGE": [None, Int, Int];
    IsEdge = "IS_EDGE": [Bool, Int, Int];
    JumpAbs = "JUMP_ABS": [None, Target, None];
    JumpRel = "JUMP_REL": [None, IntImm, None];
    JumpZ = "JUMPZ": [None, Bool, Target];
    JumpNz = "JUMPNZ": [None, Bool, Target];
    Call = "CALL": [None, None, None];
    StoreI = "STORE_I": [None, Int, Int];
    LoadI = "LOAD_I": [Int, Int, None];
}

impl Opcode {
    pub fn is_jump(self) -> bool {
        matches!(
            self,
            Opcode::JumpAbs | Opcode::JumpRel | Opcode::JumpZ | Opcode::JumpNz
        )
    }

    /// Whether a statement node in the given tree may carry this opcode.
    /// Jumps exist only in compiled programs; `CALL` only in the main tree.
    pub fn allowed_in(self, in_main: bool) -> bool {
        !self.is_jump() && (in_main || self != Opcode::Call)
    }

    /// Opcodes a statement may carry in the main or call tree.
    pub fn statement_set(in_main: bool) -> Vec<Opcode> {
        Opcode::ALL
            .iter()
            .copied()
            .filter(|op| op.allowed_in(in_main))
            .collect()
    }

    /// Number of fields in use.
    pub fn arity(self) -> usize {
        self.signature()
            .iter()
            .filter(|k| **k != OperandKind::None)
            .count()
    }
}

impl fmt::Display for Opcode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.mnemonic())
    }
}

/// One op-code with one output and two input operand fields, each 32 bits.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Instruction {
    pub op: Opcode,
    pub out: i32,
    pub in1: i32,
    pub in2: i32,
}

impl Instruction {
    pub const fn new(op: Opcode, out: i32, in1: i32, in2: i32) -> Self {
        Instruction { op, out, in1, in2 }
    }

    /// Fills the used fields in `out, in1, in2` order, skipping unused ones.
    ///
    /// `MINUS_I(5, 0, 1)`, `ADD_EDGE(1, 6)` and `JUMPZ(1, 7)` read the same
    /// way as in a listing.
    pub fn compact(op: Opcode, args: &[i32]) -> Self {
        let mut fields = [0i32; 3];
        let mut it = args.iter();
        for (field, kind) in fields.iter_mut().zip(op.signature()) {
            if kind != OperandKind::None {
                *field = *it.next().expect("too few operands");
            }
        }
        assert!(it.next().is_none(), "too many operands for {op}");
        Instruction::new(op, fields[0], fields[1], fields[2])
    }

    pub fn field(&self, slot: usize) -> i32 {
        match slot {
            0 => self.out,
            1 => self.in1,
            _ => self.in2,
        }
    }

    pub fn field_mut(&mut self, slot: usize) -> &mut i32 {
        match slot {
            0 => &mut self.out,
            1 => &mut self.in1,
            _ => &mut self.in2,
        }
    }

    pub fn float_imm(&self, slot: usize) -> f32 {
        f32::from_bits(self.field(slot) as u32)
    }

    pub fn set_float_imm(&mut self, slot: usize, value: f32) {
        *self.field_mut(slot) = value.to_bits() as i32;
    }

    /// Indices (0..3) of the fields in use.
    pub fn used_slots(&self) -> impl Iterator<Item = usize> {
        let sig = self.op.signature();
        (0..3).filter(move |&s| sig[s] != OperandKind::None)
    }

    pub fn validate(&self, limits: &CodeLimits) -> Result<(), CodeError> {
        for (slot, kind) in self.op.signature().into_iter().enumerate() {
            let v = self.field(slot);
            let ok = match kind {
                OperandKind::None => v == 0,
                OperandKind::Int => (0..limits.int_regs as i64).contains(&(v as i64)),
                OperandKind::Bool => (0..limits.bool_regs as i64).contains(&(v as i64)),
                OperandKind::Float => (0..limits.float_regs as i64).contains(&(v as i64)),
                OperandKind::IntImm => true,
                OperandKind::FloatImm => self.float_imm(slot).is_finite(),
                OperandKind::Target => v >= 0,
            };
            if !ok {
                return Err(CodeError::Operand {
                    op: self.op.mnemonic(),
                    slot,
                    value: format_operand(self, slot),
                });
            }
        }
        Ok(())
    }
}

/// Text of one used operand: register index, integer or float constant.
pub(crate) fn format_operand(instr: &Instruction, slot: usize) -> String {
    match instr.op.signature()[slot] {
        OperandKind::FloatImm => format!("{:?}", instr.float_imm(slot)),
        _ => instr.field(slot).to_string(),
    }
}

/// Listing form, e.g. `MINUS_I(5, 0, 1)`.
impl fmt::Display for Instruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let args: Vec<String> = self
            .used_slots()
            .map(|s| format_operand(self, s))
            .collect();
        write!(f, "{}({})", self.op, args.join(", "))
    }
}

/// Register-file sizes and the node cap of an individual.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CodeLimits {
    pub int_regs: usize,
    pub bool_regs: usize,
    pub float_regs: usize,
    /// Maximum statement + if nodes across both trees.
    pub max_nodes: usize,
}

impl Default for CodeLimits {
    fn default() -> Self {
        CodeLimits {
            int_regs: 12,
            bool_regs: 8,
            float_regs: 8,
            max_nodes: 50,
        }
    }
}

impl CodeLimits {
    pub fn register_count(&self, kind: OperandKind) -> usize {
        match kind {
            OperandKind::Int => self.int_regs,
            OperandKind::Bool => self.bool_regs,
            OperandKind::Float => self.float_regs,
            _ => 0,
        }
    }
}
