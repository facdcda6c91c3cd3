//! Instruction encoding for the simulated subset: RV32I, the M extension,
//! RV32F, Zicsr, and the custom posit conversion instructions.
//!
//! Decoding is strict: a word decodes to an [`Instr`] only when re-encoding
//! that instruction reproduces the word exactly. Anything else is
//! [`Decoded::Illegal`].

mod asm;
mod disasm;

pub use asm::{assemble, assemble_line, AsmError, Program};
pub use disasm::disassemble;

use serde::{Deserialize, Serialize};

use crate::fp32::{CmpKind, FmaVariant, RoundingMode};
use crate::fpu::SgnjKind;
use crate::posit::Precision;

pub const OPCODE_OP_FP: u32 = 0x53;

pub const FUNCT5_FP_TO_POSIT: u32 = 0x10;
pub const FUNCT5_POSIT_TO_POSIT: u32 = 0x11;
pub const FUNCT5_POSIT_TO_FP: u32 = 0x12;
/// `rs2` field values selecting the posit precision.
pub const PREC_FIELD_P8: u32 = 0x00;
pub const PREC_FIELD_P16: u32 = 0x08;
/// es field value that selects the `pcsr`-held exponent size.
pub const ES_DYN: u8 = 7;

pub const CSR_FFLAGS: u16 = 0x001;
pub const CSR_FRM: u16 = 0x002;
pub const CSR_FCSR: u16 = 0x003;
pub const CSR_PCSR: u16 = 0x7C0;
pub const CSR_CYCLE: u16 = 0xC00;

/// Register index, 0..=31.
pub type Reg = u8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RegOp {
    Add,
    Sub,
    Sll,
    Slt,
    Sltu,
    Xor,
    Srl,
    Sra,
    Or,
    And,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ImmOp {
    Addi,
    Slti,
    Sltiu,
    Xori,
    Ori,
    Andi,
    Slli,
    Srli,
    Srai,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MulOp {
    Mul,
    Mulh,
    Mulhsu,
    Mulhu,
    Div,
    Divu,
    Rem,
    Remu,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BranchKind {
    Beq,
    Bne,
    Blt,
    Bge,
    Bltu,
    Bgeu,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LoadKind {
    Lb,
    Lh,
    Lw,
    Lbu,
    Lhu,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum StoreKind {
    Sb,
    Sh,
    Sw,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CsrKind {
    Rw,
    Rs,
    Rc,
    Rwi,
    Rsi,
    Rci,
}

impl CsrKind {
    pub fn is_imm(self) -> bool {
        matches!(self, CsrKind::Rwi | CsrKind::Rsi | CsrKind::Rci)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FpArith {
    Add,
    Sub,
    Mul,
    Div,
}

/// The `rm` field of an FP instruction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Rm {
    Static(RoundingMode),
    Dyn,
}

impl Rm {
    pub fn bits(self) -> u32 {
        match self {
            Rm::Static(m) => m.bits(),
            Rm::Dyn => 7,
        }
    }

    pub fn from_bits(b: u32) -> Option<Rm> {
        match b {
            7 => Some(Rm::Dyn),
            _ => RoundingMode::from_bits(b).map(Rm::Static),
        }
    }
}

/// The 3-bit es field of a custom conversion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EsField {
    /// 0..=6
    Static(u8),
    Dyn,
}

impl EsField {
    pub fn bits(self) -> u32 {
        match self {
            EsField::Static(es) => es as u32,
            EsField::Dyn => ES_DYN as u32,
        }
    }

    pub fn from_bits(b: u32) -> EsField {
        if b == ES_DYN as u32 {
            EsField::Dyn
        } else {
            EsField::Static(b as u8)
        }
    }
}

/// A custom conversion. The es field is applied as follows:
/// - `FpToPosit`: static es is the destination es; DYN reads pcsr slot 3.
/// - `PositToFp`: static es is the source es; DYN reads pcsr slot 0.
/// - `PositToPosit`: static es is the destination es and the source es
///   comes from pcsr slot 0; DYN reads slot 0 for the source and slot 3 for
///   the destination.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PositCvtSpec {
    FpToPosit { dst: Precision, es: EsField },
    PositToFp { src: Precision, es: EsField },
    PositToPosit { src: Precision, dst: Precision, es: EsField },
}

impl PositCvtSpec {
    pub fn es(self) -> EsField {
        match self {
            PositCvtSpec::FpToPosit { es, .. }
            | PositCvtSpec::PositToFp { es, .. }
            | PositCvtSpec::PositToPosit { es, .. } => es,
        }
    }

    pub fn funct5(self) -> u32 {
        match self {
            PositCvtSpec::FpToPosit { .. } => FUNCT5_FP_TO_POSIT,
            PositCvtSpec::PositToPosit { .. } => FUNCT5_POSIT_TO_POSIT,
            PositCvtSpec::PositToFp { .. } => FUNCT5_POSIT_TO_FP,
        }
    }

    /// Assembly mnemonic, `fcvt.<dst>.<src>`.
    pub fn mnemonic(self) -> String {
        let p = |x: Precision| format!("p{}", x.bits());
        match self {
            PositCvtSpec::FpToPosit { dst, .. } => format!("fcvt.{}.s", p(dst)),
            PositCvtSpec::PositToFp { src, .. } => format!("fcvt.s.{}", p(src)),
            PositCvtSpec::PositToPosit { src, dst, .. } => format!("fcvt.{}.{}", p(dst), p(src)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Instr {
    Lui { rd: Reg, imm20: u32 },
    Auipc { rd: Reg, imm20: u32 },
    Jal { rd: Reg, offset: i32 },
    Jalr { rd: Reg, rs1: Reg, offset: i32 },
    Branch { kind: BranchKind, rs1: Reg, rs2: Reg, offset: i32 },
    Load { kind: LoadKind, rd: Reg, rs1: Reg, offset: i32 },
    Store { kind: StoreKind, rs1: Reg, rs2: Reg, offset: i32 },
    IntImm { op: ImmOp, rd: Reg, rs1: Reg, imm: i32 },
    IntOp { op: RegOp, rd: Reg, rs1: Reg, rs2: Reg },
    Mul { op: MulOp, rd: Reg, rs1: Reg, rs2: Reg },
    Ecall,
    Ebreak,
    Csr { kind: CsrKind, rd: Reg, csr: u16, src: u8 },
    FLoad { rd: Reg, rs1: Reg, offset: i32 },
    FStore { rs1: Reg, rs2: Reg, offset: i32 },
    FpArith { op: FpArith, rd: Reg, rs1: Reg, rs2: Reg, rm: Rm },
    FpSqrt { rd: Reg, rs1: Reg, rm: Rm },
    FpFma { variant: FmaVariant, rd: Reg, rs1: Reg, rs2: Reg, rs3: Reg, rm: Rm },
    FpSgnj { kind: SgnjKind, rd: Reg, rs1: Reg, rs2: Reg },
    FpMinMax { max: bool, rd: Reg, rs1: Reg, rs2: Reg },
    FpCmp { kind: CmpKind, rd: Reg, rs1: Reg, rs2: Reg },
    FpClass { rd: Reg, rs1: Reg },
    /// `fmv.x.w`
    FpMvXW { rd: Reg, rs1: Reg },
    /// `fmv.w.x`
    FpMvWX { rd: Reg, rs1: Reg },
    /// `fcvt.w[u].s`
    FpCvtToInt { signed: bool, rd: Reg, rs1: Reg, rm: Rm },
    /// `fcvt.s.w[u]`
    FpCvtFromInt { signed: bool, rd: Reg, rs1: Reg, rm: Rm },
    PositCvt { spec: PositCvtSpec, rd: Reg, rs1: Reg },
}

/// Result of decoding a 32-bit word.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Decoded {
    Instr(Instr),
    Illegal(u32),
}

impl Decoded {
    pub fn ok(self) -> Option<Instr> {
        match self {
            Decoded::Instr(i) => Some(i),
            Decoded::Illegal(_) => None,
        }
    }
}

const OP_LUI: u32 = 0x37;
const OP_AUIPC: u32 = 0x17;
const OP_JAL: u32 = 0x6F;
const OP_JALR: u32 = 0x67;
const OP_BRANCH: u32 = 0x63;
const OP_LOAD: u32 = 0x03;
const OP_STORE: u32 = 0x23;
const OP_IMM: u32 = 0x13;
const OP_REG: u32 = 0x33;
const OP_SYSTEM: u32 = 0x73;
const OP_LOAD_FP: u32 = 0x07;
const OP_STORE_FP: u32 = 0x27;
const OP_FMADD: u32 = 0x43;
const OP_FMSUB: u32 = 0x47;
const OP_FNMSUB: u32 = 0x4B;
const OP_FNMADD: u32 = 0x4F;

fn r_type(funct7: u32, rs2: Reg, rs1: Reg, funct3: u32, rd: Reg, opcode: u32) -> u32 {
    (funct7 << 25)
        | ((rs2 as u32) << 20)
        | ((rs1 as u32) << 15)
        | (funct3 << 12)
        | ((rd as u32) << 7)
        | opcode
}

fn i_type(imm: i32, rs1: Reg, funct3: u32, rd: Reg, opcode: u32) -> u32 {
    (((imm as u32) & 0xFFF) << 20) | ((rs1 as u32) << 15) | (funct3 << 12) | ((rd as u32) << 7) | opcode
}

fn s_type(imm: i32, rs2: Reg, rs1: Reg, funct3: u32, opcode: u32) -> u32 {
    let imm = imm as u32;
    (((imm >> 5) & 0x7F) << 25)
        | ((rs2 as u32) << 20)
        | ((rs1 as u32) << 15)
        | (funct3 << 12)
        | ((imm & 0x1F) << 7)
        | opcode
}

fn b_type(offset: i32, rs2: Reg, rs1: Reg, funct3: u32) -> u32 {
    let o = offset as u32;
    (((o >> 12) & 1) << 31)
        | (((o >> 5) & 0x3F) << 25)
        | ((rs2 as u32) << 20)
        | ((rs1 as u32) << 15)
        | (funct3 << 12)
        | (((o >> 1) & 0xF) << 8)
        | (((o >> 11) & 1) << 7)
        | OP_BRANCH
}

fn j_type(offset: i32, rd: Reg) -> u32 {
    let o = offset as u32;
    (((o >> 20) & 1) << 31)
        | (((o >> 1) & 0x3FF) << 21)
        | (((o >> 11) & 1) << 20)
        | (((o >> 12) & 0xFF) << 12)
        | ((rd as u32) << 7)
        | OP_JAL
}

fn branch_funct3(k: BranchKind) -> u32 {
    match k {
        BranchKind::Beq => 0,
        BranchKind::Bne => 1,
        BranchKind::Blt => 4,
        BranchKind::Bge => 5,
        BranchKind::Bltu => 6,
        BranchKind::Bgeu => 7,
    }
}

fn load_funct3(k: LoadKind) -> u32 {
    match k {
        LoadKind::Lb => 0,
        LoadKind::Lh => 1,
        LoadKind::Lw => 2,
        LoadKind::Lbu => 4,
        LoadKind::Lhu => 5,
    }
}

fn store_funct3(k: StoreKind) -> u32 {
    match k {
        StoreKind::Sb => 0,
        StoreKind::Sh => 1,
        StoreKind::Sw => 2,
    }
}

fn csr_funct3(k: CsrKind) -> u32 {
    match k {
        CsrKind::Rw => 1,
        CsrKind::Rs => 2,
        CsrKind::Rc => 3,
        CsrKind::Rwi => 5,
        CsrKind::Rsi => 6,
        CsrKind::Rci => 7,
    }
}

fn reg_op_fields(op: RegOp) -> (u32, u32) {
    match op {
        RegOp::Add => (0x00, 0),
        RegOp::Sub => (0x20, 0),
        RegOp::Sll => (0x00, 1),
        RegOp::Slt => (0x00, 2),
        RegOp::Sltu => (0x00, 3),
        RegOp::Xor => (0x00, 4),
        RegOp::Srl => (0x00, 5),
        RegOp::Sra => (0x20, 5),
        RegOp::Or => (0x00, 6),
        RegOp::And => (0x00, 7),
    }
}

fn mul_funct3(op: MulOp) -> u32 {
    match op {
        MulOp::Mul => 0,
        MulOp::Mulh => 1,
        MulOp::Mulhsu => 2,
        MulOp::Mulhu => 3,
        MulOp::Div => 4,
        MulOp::Divu => 5,
        MulOp::Rem => 6,
        MulOp::Remu => 7,
    }
}

fn fma_opcode(v: FmaVariant) -> u32 {
    match v {
        FmaVariant::Madd => OP_FMADD,
        FmaVariant::Msub => OP_FMSUB,
        FmaVariant::Nmsub => OP_FNMSUB,
        FmaVariant::Nmadd => OP_FNMADD,
    }
}

fn sgnj_funct3(k: SgnjKind) -> u32 {
    match k {
        SgnjKind::Sgnj => 0,
        SgnjKind::Sgnjn => 1,
        SgnjKind::Sgnjx => 2,
    }
}

fn cmp_funct3(k: CmpKind) -> u32 {
    match k {
        CmpKind::Le => 0,
        CmpKind::Lt => 1,
        CmpKind::Eq => 2,
    }
}

fn prec_field(p: Precision) -> u32 {
    match p {
        Precision::P8 => PREC_FIELD_P8,
        Precision::P16 => PREC_FIELD_P16,
    }
}

/// Encodes an instruction. Field values must be in range (registers < 32,
/// immediates representable); out-of-range values are a contract violation.
pub fn encode_instr(i: &Instr) -> u32 {
    match *i {
        Instr::Lui { rd, imm20 } => (imm20 << 12) | ((rd as u32) << 7) | OP_LUI,
        Instr::Auipc { rd, imm20 } => (imm20 << 12) | ((rd as u32) << 7) | OP_AUIPC,
        Instr::Jal { rd, offset } => j_type(offset, rd),
        Instr::Jalr { rd, rs1, offset } => i_type(offset, rs1, 0, rd, OP_JALR),
        Instr::Branch {
            kind,
            rs1,
            rs2,
            offset,
        } => b_type(offset, rs2, rs1, branch_funct3(kind)),
        Instr::Load {
            kind,
            rd,
            rs1,
            offset,
        } => i_type(offset, rs1, load_funct3(kind), rd, OP_LOAD),
        Instr::Store {
            kind,
            rs1,
            rs2,
            offset,
        } => s_type(offset, rs2, rs1, store_funct3(kind), OP_STORE),
        Instr::IntImm { op, rd, rs1, imm } => {
            let (f3, imm) = match op {
                ImmOp::Addi => (0, imm),
                ImmOp::Slti => (2, imm),
                ImmOp::Sltiu => (3, imm),
                ImmOp::Xori => (4, imm),
                ImmOp::Ori => (6, imm),
                ImmOp::Andi => (7, imm),
                ImmOp::Slli => (1, imm & 0x1F),
                ImmOp::Srli => (5, imm & 0x1F),
                ImmOp::Srai => (5, (imm & 0x1F) | 0x400),
            };
            i_type(imm, rs1, f3, rd, OP_IMM)
        }
        Instr::IntOp { op, rd, rs1, rs2 } => {
            let (f7, f3) = reg_op_fields(op);
            r_type(f7, rs2, rs1, f3, rd, OP_REG)
        }
        Instr::Mul { op, rd, rs1, rs2 } => r_type(1, rs2, rs1, mul_funct3(op), rd, OP_REG),
        Instr::Ecall => OP_SYSTEM,
        Instr::Ebreak => (1 << 20) | OP_SYSTEM,
        Instr::Csr { kind, rd, csr, src } => {
            ((csr as u32) << 20)
                | ((src as u32 & 0x1F) << 15)
                | (csr_funct3(kind) << 12)
                | ((rd as u32) << 7)
                | OP_SYSTEM
        }
        Instr::FLoad { rd, rs1, offset } => i_type(offset, rs1, 2, rd, OP_LOAD_FP),
        Instr::FStore { rs1, rs2, offset } => s_type(offset, rs2, rs1, 2, OP_STORE_FP),
        Instr::FpArith {
            op,
            rd,
            rs1,
            rs2,
            rm,
        } => {
            let f7 = match op {
                FpArith::Add => 0x00,
                FpArith::Sub => 0x04,
                FpArith::Mul => 0x08,
                FpArith::Div => 0x0C,
            };
            r_type(f7, rs2, rs1, rm.bits(), rd, OPCODE_OP_FP)
        }
        Instr::FpSqrt { rd, rs1, rm } => r_type(0x2C, 0, rs1, rm.bits(), rd, OPCODE_OP_FP),
        Instr::FpFma {
            variant,
            rd,
            rs1,
            rs2,
            rs3,
            rm,
        } => ((rs3 as u32) << 27) | r_type(0, rs2, rs1, rm.bits(), rd, fma_opcode(variant)),
        Instr::FpSgnj { kind, rd, rs1, rs2 } => {
            r_type(0x10, rs2, rs1, sgnj_funct3(kind), rd, OPCODE_OP_FP)
        }
        Instr::FpMinMax { max, rd, rs1, rs2 } => {
            r_type(0x14, rs2, rs1, max as u32, rd, OPCODE_OP_FP)
        }
        Instr::FpCmp { kind, rd, rs1, rs2 } => {
            r_type(0x50, rs2, rs1, cmp_funct3(kind), rd, OPCODE_OP_FP)
        }
        Instr::FpClass { rd, rs1 } => r_type(0x70, 0, rs1, 1, rd, OPCODE_OP_FP),
        Instr::FpMvXW { rd, rs1 } => r_type(0x70, 0, rs1, 0, rd, OPCODE_OP_FP),
        Instr::FpMvWX { rd, rs1 } => r_type(0x78, 0, rs1, 0, rd, OPCODE_OP_FP),
        Instr::FpCvtToInt {
            signed,
            rd,
            rs1,
            rm,
        } => r_type(0x60, (!signed) as u8, rs1, rm.bits(), rd, OPCODE_OP_FP),
        Instr::FpCvtFromInt {
            signed,
            rd,
            rs1,
            rm,
        } => r_type(0x68, (!signed) as u8, rs1, rm.bits(), rd, OPCODE_OP_FP),
        Instr::PositCvt { spec, rd, rs1 } => {
            let (fmt_bits, rs2) = match spec {
                PositCvtSpec::FpToPosit { dst, .. } => (0, prec_field(dst)),
                PositCvtSpec::PositToFp { src, .. } => (0, prec_field(src)),
                PositCvtSpec::PositToPosit { src, dst, .. } => {
                    ((dst == Precision::P16) as u32, prec_field(src))
                }
            };
            (spec.funct5() << 27)
                | (fmt_bits << 25)
                | (rs2 << 20)
                | ((rs1 as u32) << 15)
                | (spec.es().bits() << 12)
                | ((rd as u32) << 7)
                | OPCODE_OP_FP
        }
    }
}

fn sext(v: u32, bits: u32) -> i32 {
    let s = 32 - bits;
    ((v << s) as i32) >> s
}

/// Decodes a word; never fails, returning [`Decoded::Illegal`] for words
/// outside the supported subset.
pub fn decode_instr(w: u32) -> Decoded {
    match decode_inner(w) {
        Some(i) if encode_instr(&i) == w => Decoded::Instr(i),
        _ => Decoded::Illegal(w),
    }
}

fn decode_inner(w: u32) -> Option<Instr> {
    let opcode = w & 0x7F;
    let rd = ((w >> 7) & 0x1F) as Reg;
    let funct3 = (w >> 12) & 7;
    let rs1 = ((w >> 15) & 0x1F) as Reg;
    let rs2 = ((w >> 20) & 0x1F) as Reg;
    let funct7 = w >> 25;
    let imm_i = sext(w >> 20, 12);
    let imm_s = sext(((w >> 25) << 5) | ((w >> 7) & 0x1F), 12);

    Some(match opcode {
        OP_LUI => Instr::Lui { rd, imm20: w >> 12 },
        OP_AUIPC => Instr::Auipc { rd, imm20: w >> 12 },
        OP_JAL => {
            let o = (((w >> 31) & 1) << 20)
                | (((w >> 21) & 0x3FF) << 1)
                | (((w >> 20) & 1) << 11)
                | (((w >> 12) & 0xFF) << 12);
            Instr::Jal {
                rd,
                offset: sext(o, 21),
            }
        }
        OP_JALR if funct3 == 0 => Instr::Jalr {
            rd,
            rs1,
            offset: imm_i,
        },
        OP_BRANCH => {
            let kind = match funct3 {
                0 => BranchKind::Beq,
                1 => BranchKind::Bne,
                4 => BranchKind::Blt,
                5 => BranchKind::Bge,
                6 => BranchKind::Bltu,
                7 => BranchKind::Bgeu,
                _ => return None,
            };
            let o = (((w >> 31) & 1) << 12)
                | (((w >> 25) & 0x3F) << 5)
                | (((w >> 8) & 0xF) << 1)
                | (((w >> 7) & 1) << 11);
            Instr::Branch {
                kind,
                rs1,
                rs2,
                offset: sext(o, 13),
            }
        }
        OP_LOAD => {
            let kind = match funct3 {
                0 => LoadKind::Lb,
                1 => LoadKind::Lh,
                2 => LoadKind::Lw,
                4 => LoadKind::Lbu,
                5 => LoadKind::Lhu,
                _ => return None,
            };
            Instr::Load {
                kind,
                rd,
                rs1,
                offset: imm_i,
            }
        }
        OP_STORE => {
            let kind = match funct3 {
                0 => StoreKind::Sb,
                1 => StoreKind::Sh,
                2 => StoreKind::Sw,
                _ => return None,
            };
            Instr::Store {
                kind,
                rs1,
                rs2,
                offset: imm_s,
            }
        }
        OP_IMM => {
            let (op, imm) = match funct3 {
                0 => (ImmOp::Addi, imm_i),
                2 => (ImmOp::Slti, imm_i),
                3 => (ImmOp::Sltiu, imm_i),
                4 => (ImmOp::Xori, imm_i),
                6 => (ImmOp::Ori, imm_i),
                7 => (ImmOp::Andi, imm_i),
                1 if funct7 == 0 => (ImmOp::Slli, rs2 as i32),
                5 if funct7 == 0 => (ImmOp::Srli, rs2 as i32),
                5 if funct7 == 0x20 => (ImmOp::Srai, rs2 as i32),
                _ => return None,
            };
            Instr::IntImm { op, rd, rs1, imm }
        }
        OP_REG if funct7 == 1 => {
            let op = [
                MulOp::Mul,
                MulOp::Mulh,
                MulOp::Mulhsu,
                MulOp::Mulhu,
                MulOp::Div,
                MulOp::Divu,
                MulOp::Rem,
                MulOp::Remu,
            ][funct3 as usize];
            Instr::Mul { op, rd, rs1, rs2 }
        }
        OP_REG => {
            let op = match (funct7, funct3) {
                (0x00, 0) => RegOp::Add,
                (0x20, 0) => RegOp::Sub,
                (0x00, 1) => RegOp::Sll,
                (0x00, 2) => RegOp::Slt,
                (0x00, 3) => RegOp::Sltu,
                (0x00, 4) => RegOp::Xor,
                (0x00, 5) => RegOp::Srl,
                (0x20, 5) => RegOp::Sra,
                (0x00, 6) => RegOp::Or,
                (0x00, 7) => RegOp::And,
                _ => return None,
            };
            Instr::IntOp { op, rd, rs1, rs2 }
        }
        OP_SYSTEM => match funct3 {
            0 => match w {
                0x0000_0073 => Instr::Ecall,
                0x0010_0073 => Instr::Ebreak,
                _ => return None,
            },
            4 => return None,
            _ => {
                let kind = match funct3 {
                    1 => CsrKind::Rw,
                    2 => CsrKind::Rs,
                    3 => CsrKind::Rc,
                    5 => CsrKind::Rwi,
                    6 => CsrKind::Rsi,
                    _ => CsrKind::Rci,
                };
                Instr::Csr {
                    kind,
                    rd,
                    csr: (w >> 20) as u16,
                    src: rs1,
                }
            }
        },
        OP_LOAD_FP if funct3 == 2 => Instr::FLoad {
            rd,
            rs1,
            offset: imm_i,
        },
        OP_STORE_FP if funct3 == 2 => Instr::FStore {
            rs1,
            rs2,
            offset: imm_s,
        },
        OP_FMADD | OP_FMSUB | OP_FNMSUB | OP_FNMADD => {
            let variant = match opcode {
                OP_FMADD => FmaVariant::Madd,
                OP_FMSUB => FmaVariant::Msub,
                OP_FNMSUB => FmaVariant::Nmsub,
                _ => FmaVariant::Nmadd,
            };
            Instr::FpFma {
                variant,
                rd,
                rs1,
                rs2,
                rs3: (w >> 27) as Reg,
                rm: Rm::from_bits(funct3)?,
            }
        }
        OPCODE_OP_FP => decode_op_fp(w, rd, funct3, rs1, rs2, funct7)?,
        _ => return None,
    })
}

fn decode_op_fp(w: u32, rd: Reg, funct3: u32, rs1: Reg, rs2: Reg, funct7: u32) -> Option<Instr> {
    let funct5 = w >> 27;
    let fmt_bits = (w >> 25) & 3;
    let rm = || Rm::from_bits(funct3);
    let prec = |field: Reg| match field as u32 {
        PREC_FIELD_P8 => Some(Precision::P8),
        PREC_FIELD_P16 => Some(Precision::P16),
        _ => None,
    };
    let es = EsField::from_bits(funct3);
    match funct5 {
        FUNCT5_FP_TO_POSIT if fmt_bits == 0 => {
            return Some(Instr::PositCvt {
                spec: PositCvtSpec::FpToPosit {
                    dst: prec(rs2)?,
                    es,
                },
                rd,
                rs1,
            })
        }
        FUNCT5_POSIT_TO_FP if fmt_bits == 0 => {
            return Some(Instr::PositCvt {
                spec: PositCvtSpec::PositToFp {
                    src: prec(rs2)?,
                    es,
                },
                rd,
                rs1,
            })
        }
        FUNCT5_POSIT_TO_POSIT if fmt_bits <= 1 => {
            let dst = if fmt_bits == 1 {
                Precision::P16
            } else {
                Precision::P8
            };
            return Some(Instr::PositCvt {
                spec: PositCvtSpec::PositToPosit {
                    src: prec(rs2)?,
                    dst,
                    es,
                },
                rd,
                rs1,
            });
        }
        _ => {}
    }
    Some(match funct7 {
        0x00 | 0x04 | 0x08 | 0x0C => Instr::FpArith {
            op: [FpArith::Add, FpArith::Sub, FpArith::Mul, FpArith::Div][(funct7 >> 2) as usize],
            rd,
            rs1,
            rs2,
            rm: rm()?,
        },
        0x2C if rs2 == 0 => Instr::FpSqrt { rd, rs1, rm: rm()? },
        0x10 => Instr::FpSgnj {
            kind: match funct3 {
                0 => SgnjKind::Sgnj,
                1 => SgnjKind::Sgnjn,
                2 => SgnjKind::Sgnjx,
                _ => return None,
            },
            rd,
            rs1,
            rs2,
        },
        0x14 if funct3 <= 1 => Instr::FpMinMax {
            max: funct3 == 1,
            rd,
            rs1,
            rs2,
        },
        0x50 => Instr::FpCmp {
            kind: match funct3 {
                0 => CmpKind::Le,
                1 => CmpKind::Lt,
                2 => CmpKind::Eq,
                _ => return None,
            },
            rd,
            rs1,
            rs2,
        },
        0x70 if rs2 == 0 && funct3 == 0 => Instr::FpMvXW { rd, rs1 },
        0x70 if rs2 == 0 && funct3 == 1 => Instr::FpClass { rd, rs1 },
        0x78 if rs2 == 0 && funct3 == 0 => Instr::FpMvWX { rd, rs1 },
        0x60 if rs2 <= 1 => Instr::FpCvtToInt {
            signed: rs2 == 0,
            rd,
            rs1,
            rm: rm()?,
        },
        0x68 if rs2 <= 1 => Instr::FpCvtFromInt {
            signed: rs2 == 0,
            rd,
            rs1,
            rm: rm()?,
        },
        _ => return None,
    })
}
