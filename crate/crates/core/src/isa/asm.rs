//! A small two-pass assembler: one instruction per line, `#` comments,
//! `name:` labels, `.word` literals and a handful of pseudo-instructions
//! (`nop`, `mv`, `li`, `j`, `ret`, `beqz`, `bnez`, `bgez`, `bltz`, `csrr`,
//! `csrw`, `csrwi`, `fmv.s`).

use std::collections::BTreeMap;

use thiserror::Error;

use super::disasm::csr_name;
use super::*;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {message}")]
pub struct AsmError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

/// Assembled words plus label byte offsets relative to the first word.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Program {
    pub words: Vec<u32>,
    pub labels: BTreeMap<String, u32>,
}

struct Operand<'a> {
    text: &'a str,
    col: usize,
}

struct Stmt<'a> {
    line: usize,
    col: usize,
    mnemonic: String,
    ops: Vec<Operand<'a>>,
}

impl Stmt<'_> {
    fn err(&self, col: usize, msg: impl Into<String>) -> AsmError {
        AsmError {
            line: self.line,
            column: col,
            message: msg.into(),
        }
    }

    fn expect_ops(&self, n: usize) -> Result<(), AsmError> {
        if self.ops.len() != n {
            return Err(self.err(
                self.col,
                format!("`{}` expects {n} operands, got {}", self.mnemonic, self.ops.len()),
            ));
        }
        Ok(())
    }

    /// Number of words this statement expands to.
    fn size(&self) -> u32 {
        if self.mnemonic == "li" && self.ops.len() == 2 {
            if let Ok(v) = parse_int(self.ops[1].text) {
                if !(-2048..=2047).contains(&v) {
                    return 2;
                }
            }
        }
        1
    }
}

fn parse_int(s: &str) -> Result<i64, String> {
    let t = s.trim();
    let (neg, body) = match t.strip_prefix('-') {
        Some(b) => (true, b),
        None => (false, t.strip_prefix('+').unwrap_or(t)),
    };
    let v = if let Some(h) = body.strip_prefix("0x").or_else(|| body.strip_prefix("0X")) {
        i64::from_str_radix(&h.replace('_', ""), 16)
    } else if let Some(b) = body.strip_prefix("0b") {
        i64::from_str_radix(&b.replace('_', ""), 2)
    } else {
        body.replace('_', "").parse::<i64>()
    }
    .map_err(|_| format!("invalid integer `{s}`"))?;
    Ok(if neg { -v } else { v })
}

const X_ABI: [&str; 32] = [
    "zero", "ra", "sp", "gp", "tp", "t0", "t1", "t2", "s0", "s1", "a0", "a1", "a2", "a3", "a4",
    "a5", "a6", "a7", "s2", "s3", "s4", "s5", "s6", "s7", "s8", "s9", "s10", "s11", "t3", "t4",
    "t5", "t6",
];

const F_ABI: [&str; 32] = [
    "ft0", "ft1", "ft2", "ft3", "ft4", "ft5", "ft6", "ft7", "fs0", "fs1", "fa0", "fa1", "fa2",
    "fa3", "fa4", "fa5", "fa6", "fa7", "fs2", "fs3", "fs4", "fs5", "fs6", "fs7", "fs8", "fs9",
    "fs10", "fs11", "ft8", "ft9", "ft10", "ft11",
];

fn numbered(s: &str, prefix: char) -> Option<Reg> {
    let n: u8 = s.strip_prefix(prefix)?.parse().ok()?;
    (n < 32).then_some(n)
}

fn xreg(s: &str) -> Option<Reg> {
    if s == "fp" {
        return Some(8);
    }
    numbered(s, 'x').or_else(|| X_ABI.iter().position(|&n| n == s).map(|i| i as Reg))
}

fn freg(s: &str) -> Option<Reg> {
    numbered(s, 'f').or_else(|| F_ABI.iter().position(|&n| n == s).map(|i| i as Reg))
}

struct Ctx<'a> {
    labels: &'a BTreeMap<String, u32>,
    pc: u32,
}

impl Stmt<'_> {
    fn x(&self, i: usize) -> Result<Reg, AsmError> {
        let o = &self.ops[i];
        xreg(o.text).ok_or_else(|| self.err(o.col, format!("expected integer register, got `{}`", o.text)))
    }

    fn f(&self, i: usize) -> Result<Reg, AsmError> {
        let o = &self.ops[i];
        freg(o.text).ok_or_else(|| self.err(o.col, format!("expected FP register, got `{}`", o.text)))
    }

    fn int(&self, i: usize, lo: i64, hi: i64) -> Result<i64, AsmError> {
        let o = &self.ops[i];
        let v = parse_int(o.text).map_err(|m| self.err(o.col, m))?;
        if v < lo || v > hi {
            return Err(self.err(o.col, format!("immediate {v} out of range {lo}..={hi}")));
        }
        Ok(v)
    }

    fn imm12(&self, i: usize) -> Result<i32, AsmError> {
        Ok(self.int(i, -2048, 2047)? as i32)
    }

    /// `offset(reg)`, with an optional offset.
    fn mem(&self, i: usize) -> Result<(i32, Reg), AsmError> {
        let o = &self.ops[i];
        let bad = || self.err(o.col, format!("expected `offset(register)`, got `{}`", o.text));
        let open = o.text.find('(').ok_or_else(bad)?;
        let inner = o.text[open + 1..].strip_suffix(')').ok_or_else(bad)?.trim();
        let base = xreg(inner).ok_or_else(bad)?;
        let off_text = o.text[..open].trim();
        let off = if off_text.is_empty() {
            0
        } else {
            parse_int(off_text).map_err(|m| self.err(o.col, m))?
        };
        if !(-2048..=2047).contains(&off) {
            return Err(self.err(o.col, format!("offset {off} out of range -2048..=2047")));
        }
        Ok((off as i32, base))
    }

    /// A numeric pc-relative offset or a label.
    fn target(&self, i: usize, ctx: &Ctx, bits: u32) -> Result<i32, AsmError> {
        let o = &self.ops[i];
        let off = match parse_int(o.text) {
            Ok(v) => v,
            Err(_) => match ctx.labels.get(o.text) {
                Some(&addr) => addr as i64 - ctx.pc as i64,
                None => return Err(self.err(o.col, format!("unknown label `{}`", o.text))),
            },
        };
        let lim = 1i64 << (bits - 1);
        if off % 2 != 0 || off < -lim || off >= lim {
            return Err(self.err(o.col, format!("branch offset {off} out of range or odd")));
        }
        Ok(off as i32)
    }

    fn rm(&self, i: usize) -> Result<Rm, AsmError> {
        if i >= self.ops.len() {
            return Ok(Rm::Dyn);
        }
        let o = &self.ops[i];
        let m = match o.text {
            "rne" => Rm::Static(RoundingMode::Rne),
            "rtz" => Rm::Static(RoundingMode::Rtz),
            "rdn" => Rm::Static(RoundingMode::Rdn),
            "rup" => Rm::Static(RoundingMode::Rup),
            "rmm" => Rm::Static(RoundingMode::Rmm),
            "dyn" => Rm::Dyn,
            other => return Err(self.err(o.col, format!("unknown rounding mode `{other}`"))),
        };
        Ok(m)
    }

    /// FP ops take an optional trailing rounding mode.
    fn expect_ops_rm(&self, n: usize) -> Result<Rm, AsmError> {
        if self.ops.len() != n && self.ops.len() != n + 1 {
            return Err(self.err(
                self.col,
                format!("`{}` expects {n} operands and an optional rounding mode", self.mnemonic),
            ));
        }
        self.rm(n)
    }

    fn csr(&self, i: usize) -> Result<u16, AsmError> {
        let o = &self.ops[i];
        for csr in [CSR_FFLAGS, CSR_FRM, CSR_FCSR, CSR_PCSR, CSR_CYCLE] {
            if csr_name(csr) == Some(o.text) {
                return Ok(csr);
            }
        }
        Ok(self.int(i, 0, 0xFFF)? as u16)
    }

    fn es(&self, i: usize) -> Result<EsField, AsmError> {
        let o = &self.ops[i];
        if o.text == "dyn" {
            return Ok(EsField::Dyn);
        }
        Ok(EsField::Static(self.int(i, 0, 6)? as u8))
    }
}

fn split_operands(s: &str, base_col: usize) -> Vec<Operand<'_>> {
    if s.trim().is_empty() {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut start = 0;
    for (i, c) in s.char_indices().chain(std::iter::once((s.len(), ','))) {
        if c == ',' {
            let raw = &s[start..i];
            let lead = raw.len() - raw.trim_start().len();
            out.push(Operand {
                text: raw.trim(),
                col: base_col + start + lead,
            });
            start = i + 1;
        }
    }
    out
}

enum Line<'a> {
    Stmt(Stmt<'a>),
    Word(u32),
}

type Parsed<'a> = (Vec<(u32, Line<'a>)>, BTreeMap<String, u32>);

fn parse_lines(text: &str) -> Result<Parsed<'_>, AsmError> {
    let mut items = Vec::new();
    let mut labels = BTreeMap::new();
    let mut pc = 0u32;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let code = raw.split('#').next().unwrap_or("");
        let mut rest = code;
        let mut offset = 0usize;
        // Leading labels.
        loop {
            let trimmed = rest.trim_start();
            let lead = rest.len() - trimmed.len();
            let Some(colon) = trimmed.find(':') else { break };
            let name = &trimmed[..colon];
            if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '.') {
                break;
            }
            if labels.insert(name.to_string(), pc).is_some() {
                return Err(AsmError {
                    line: line_no,
                    column: offset + lead + 1,
                    message: format!("duplicate label `{name}`"),
                });
            }
            offset += lead + colon + 1;
            rest = &trimmed[colon + 1..];
        }
        let trimmed = rest.trim_start();
        if trimmed.trim().is_empty() {
            continue;
        }
        let col = offset + (rest.len() - trimmed.len()) + 1;
        let (mnemonic, operands) = match trimmed.find(char::is_whitespace) {
            Some(sp) => (&trimmed[..sp], &trimmed[sp..]),
            None => (trimmed, ""),
        };
        let op_col = col + mnemonic.len();
        let stmt = Stmt {
            line: line_no,
            col,
            mnemonic: mnemonic.to_ascii_lowercase(),
            ops: split_operands(operands, op_col),
        };
        if stmt.mnemonic == ".word" {
            stmt.expect_ops(1)?;
            let v = stmt.int(0, i32::MIN as i64, u32::MAX as i64)?;
            items.push((pc, Line::Word(v as u32)));
            pc += 4;
            continue;
        }
        let size = stmt.size();
        items.push((pc, Line::Stmt(stmt)));
        pc += 4 * size;
    }
    Ok((items, labels))
}

/// Assembles a program whose first word sits at offset 0.
pub fn assemble(text: &str) -> Result<Program, AsmError> {
    let (items, labels) = parse_lines(text)?;
    let mut words = Vec::new();
    for (pc, item) in items {
        match item {
            Line::Word(w) => words.push(w),
            Line::Stmt(s) => {
                let ctx = Ctx {
                    labels: &labels,
                    pc,
                };
                for i in encode_stmt(&s, &ctx)? {
                    words.push(encode_instr(&i));
                }
            }
        }
    }
    Ok(Program { words, labels })
}

/// Assembles exactly one instruction (no labels; pseudo-instructions must
/// expand to a single word).
pub fn assemble_line(text: &str) -> Result<u32, AsmError> {
    let p = assemble(text)?;
    match p.words.as_slice() {
        [w] => Ok(*w),
        words => Err(AsmError {
            line: 1,
            column: 1,
            message: format!("expected one instruction, got {} words", words.len()),
        }),
    }
}

fn li_parts(v: i64) -> (u32, i32) {
    let v = v as i32;
    let lo = (v << 20) >> 20;
    let hi = ((v.wrapping_sub(lo)) as u32) >> 12;
    (hi, lo)
}

fn encode_stmt(s: &Stmt, ctx: &Ctx) -> Result<Vec<Instr>, AsmError> {
    let m = s.mnemonic.as_str();
    let one = |i: Instr| Ok(vec![i]);

    if let Some(kind) = match m {
        "beq" => Some(BranchKind::Beq),
        "bne" => Some(BranchKind::Bne),
        "blt" => Some(BranchKind::Blt),
        "bge" => Some(BranchKind::Bge),
        "bltu" => Some(BranchKind::Bltu),
        "bgeu" => Some(BranchKind::Bgeu),
        _ => None,
    } {
        s.expect_ops(3)?;
        return one(Instr::Branch {
            kind,
            rs1: s.x(0)?,
            rs2: s.x(1)?,
            offset: s.target(2, ctx, 13)?,
        });
    }
    if let Some(kind) = match m {
        "lb" => Some(LoadKind::Lb),
        "lh" => Some(LoadKind::Lh),
        "lw" => Some(LoadKind::Lw),
        "lbu" => Some(LoadKind::Lbu),
        "lhu" => Some(LoadKind::Lhu),
        _ => None,
    } {
        s.expect_ops(2)?;
        let (offset, rs1) = s.mem(1)?;
        return one(Instr::Load {
            kind,
            rd: s.x(0)?,
            rs1,
            offset,
        });
    }
    if let Some(kind) = match m {
        "sb" => Some(StoreKind::Sb),
        "sh" => Some(StoreKind::Sh),
        "sw" => Some(StoreKind::Sw),
        _ => None,
    } {
        s.expect_ops(2)?;
        let (offset, rs1) = s.mem(1)?;
        return one(Instr::Store {
            kind,
            rs1,
            rs2: s.x(0)?,
            offset,
        });
    }
    if let Some(op) = match m {
        "addi" => Some(ImmOp::Addi),
        "slti" => Some(ImmOp::Slti),
        "sltiu" => Some(ImmOp::Sltiu),
        "xori" => Some(ImmOp::Xori),
        "ori" => Some(ImmOp::Ori),
        "andi" => Some(ImmOp::Andi),
        "slli" => Some(ImmOp::Slli),
        "srli" => Some(ImmOp::Srli),
        "srai" => Some(ImmOp::Srai),
        _ => None,
    } {
        s.expect_ops(3)?;
        let imm = match op {
            ImmOp::Slli | ImmOp::Srli | ImmOp::Srai => s.int(2, 0, 31)? as i32,
            _ => s.imm12(2)?,
        };
        return one(Instr::IntImm {
            op,
            rd: s.x(0)?,
            rs1: s.x(1)?,
            imm,
        });
    }
    if let Some(op) = match m {
        "add" => Some(RegOp::Add),
        "sub" => Some(RegOp::Sub),
        "sll" => Some(RegOp::Sll),
        "slt" => Some(RegOp::Slt),
        "sltu" => Some(RegOp::Sltu),
        "xor" => Some(RegOp::Xor),
        "srl" => Some(RegOp::Srl),
        "sra" => Some(RegOp::Sra),
        "or" => Some(RegOp::Or),
        "and" => Some(RegOp::And),
        _ => None,
    } {
        s.expect_ops(3)?;
        return one(Instr::IntOp {
            op,
            rd: s.x(0)?,
            rs1: s.x(1)?,
            rs2: s.x(2)?,
        });
    }
    if let Some(op) = match m {
        "mul" => Some(MulOp::Mul),
        "mulh" => Some(MulOp::Mulh),
        "mulhsu" => Some(MulOp::Mulhsu),
        "mulhu" => Some(MulOp::Mulhu),
        "div" => Some(MulOp::Div),
        "divu" => Some(MulOp::Divu),
        "rem" => Some(MulOp::Rem),
        "remu" => Some(MulOp::Remu),
        _ => None,
    } {
        s.expect_ops(3)?;
        return one(Instr::Mul {
            op,
            rd: s.x(0)?,
            rs1: s.x(1)?,
            rs2: s.x(2)?,
        });
    }
    if let Some(kind) = match m {
        "csrrw" => Some(CsrKind::Rw),
        "csrrs" => Some(CsrKind::Rs),
        "csrrc" => Some(CsrKind::Rc),
        "csrrwi" => Some(CsrKind::Rwi),
        "csrrsi" => Some(CsrKind::Rsi),
        "csrrci" => Some(CsrKind::Rci),
        _ => None,
    } {
        s.expect_ops(3)?;
        let src = if kind.is_imm() {
            s.int(2, 0, 31)? as u8
        } else {
            s.x(2)?
        };
        return one(Instr::Csr {
            kind,
            rd: s.x(0)?,
            csr: s.csr(1)?,
            src,
        });
    }
    if let Some(op) = match m {
        "fadd.s" => Some(FpArith::Add),
        "fsub.s" => Some(FpArith::Sub),
        "fmul.s" => Some(FpArith::Mul),
        "fdiv.s" => Some(FpArith::Div),
        _ => None,
    } {
        let rm = s.expect_ops_rm(3)?;
        return one(Instr::FpArith {
            op,
            rd: s.f(0)?,
            rs1: s.f(1)?,
            rs2: s.f(2)?,
            rm,
        });
    }
    if let Some(variant) = match m {
        "fmadd.s" => Some(FmaVariant::Madd),
        "fmsub.s" => Some(FmaVariant::Msub),
        "fnmsub.s" => Some(FmaVariant::Nmsub),
        "fnmadd.s" => Some(FmaVariant::Nmadd),
        _ => None,
    } {
        let rm = s.expect_ops_rm(4)?;
        return one(Instr::FpFma {
            variant,
            rd: s.f(0)?,
            rs1: s.f(1)?,
            rs2: s.f(2)?,
            rs3: s.f(3)?,
            rm,
        });
    }
    if let Some(kind) = match m {
        "fsgnj.s" => Some(SgnjKind::Sgnj),
        "fsgnjn.s" => Some(SgnjKind::Sgnjn),
        "fsgnjx.s" => Some(SgnjKind::Sgnjx),
        _ => None,
    } {
        s.expect_ops(3)?;
        return one(Instr::FpSgnj {
            kind,
            rd: s.f(0)?,
            rs1: s.f(1)?,
            rs2: s.f(2)?,
        });
    }
    if let Some(kind) = match m {
        "feq.s" => Some(CmpKind::Eq),
        "flt.s" => Some(CmpKind::Lt),
        "fle.s" => Some(CmpKind::Le),
        _ => None,
    } {
        s.expect_ops(3)?;
        return one(Instr::FpCmp {
            kind,
            rd: s.x(0)?,
            rs1: s.f(1)?,
            rs2: s.f(2)?,
        });
    }
    if let Some(spec) = posit_cvt_spec(m) {
        s.expect_ops(3)?;
        let es = s.es(2)?;
        let spec = match spec {
            PositCvtSpec::FpToPosit { dst, .. } => PositCvtSpec::FpToPosit { dst, es },
            PositCvtSpec::PositToFp { src, .. } => PositCvtSpec::PositToFp { src, es },
            PositCvtSpec::PositToPosit { src, dst, .. } => PositCvtSpec::PositToPosit { src, dst, es },
        };
        return one(Instr::PositCvt {
            spec,
            rd: s.f(0)?,
            rs1: s.f(1)?,
        });
    }

    match m {
        "lui" | "auipc" => {
            s.expect_ops(2)?;
            let rd = s.x(0)?;
            let imm20 = s.int(1, 0, 0xF_FFFF)? as u32;
            one(if m == "lui" {
                Instr::Lui { rd, imm20 }
            } else {
                Instr::Auipc { rd, imm20 }
            })
        }
        "jal" => {
            let (rd, t) = match s.ops.len() {
                1 => (1, 0),
                2 => (s.x(0)?, 1),
                _ => return Err(s.err(s.col, "`jal` expects [rd,] target")),
            };
            one(Instr::Jal {
                rd,
                offset: s.target(t, ctx, 21)?,
            })
        }
        "j" => {
            s.expect_ops(1)?;
            one(Instr::Jal {
                rd: 0,
                offset: s.target(0, ctx, 21)?,
            })
        }
        "jalr" => {
            s.expect_ops(2)?;
            let (offset, rs1) = s.mem(1)?;
            one(Instr::Jalr {
                rd: s.x(0)?,
                rs1,
                offset,
            })
        }
        "ret" => {
            s.expect_ops(0)?;
            one(Instr::Jalr {
                rd: 0,
                rs1: 1,
                offset: 0,
            })
        }
        "beqz" | "bnez" | "bgez" | "bltz" => {
            s.expect_ops(2)?;
            let kind = match m {
                "beqz" => BranchKind::Beq,
                "bnez" => BranchKind::Bne,
                "bgez" => BranchKind::Bge,
                _ => BranchKind::Blt,
            };
            one(Instr::Branch {
                kind,
                rs1: s.x(0)?,
                rs2: 0,
                offset: s.target(1, ctx, 13)?,
            })
        }
        "ecall" => {
            s.expect_ops(0)?;
            one(Instr::Ecall)
        }
        "ebreak" => {
            s.expect_ops(0)?;
            one(Instr::Ebreak)
        }
        "nop" => {
            s.expect_ops(0)?;
            one(Instr::IntImm {
                op: ImmOp::Addi,
                rd: 0,
                rs1: 0,
                imm: 0,
            })
        }
        "mv" => {
            s.expect_ops(2)?;
            one(Instr::IntImm {
                op: ImmOp::Addi,
                rd: s.x(0)?,
                rs1: s.x(1)?,
                imm: 0,
            })
        }
        "li" => {
            s.expect_ops(2)?;
            let rd = s.x(0)?;
            let v = s.int(1, i32::MIN as i64, u32::MAX as i64)?;
            if (-2048..=2047).contains(&v) {
                return one(Instr::IntImm {
                    op: ImmOp::Addi,
                    rd,
                    rs1: 0,
                    imm: v as i32,
                });
            }
            let (hi, lo) = li_parts(v);
            Ok(vec![
                Instr::Lui { rd, imm20: hi },
                Instr::IntImm {
                    op: ImmOp::Addi,
                    rd,
                    rs1: rd,
                    imm: lo,
                },
            ])
        }
        "csrr" => {
            s.expect_ops(2)?;
            one(Instr::Csr {
                kind: CsrKind::Rs,
                rd: s.x(0)?,
                csr: s.csr(1)?,
                src: 0,
            })
        }
        "csrw" => {
            s.expect_ops(2)?;
            one(Instr::Csr {
                kind: CsrKind::Rw,
                rd: 0,
                csr: s.csr(0)?,
                src: s.x(1)?,
            })
        }
        "csrwi" => {
            s.expect_ops(2)?;
            one(Instr::Csr {
                kind: CsrKind::Rwi,
                rd: 0,
                csr: s.csr(0)?,
                src: s.int(1, 0, 31)? as u8,
            })
        }
        "flw" => {
            s.expect_ops(2)?;
            let (offset, rs1) = s.mem(1)?;
            one(Instr::FLoad {
                rd: s.f(0)?,
                rs1,
                offset,
            })
        }
        "fsw" => {
            s.expect_ops(2)?;
            let (offset, rs1) = s.mem(1)?;
            one(Instr::FStore {
                rs1,
                rs2: s.f(0)?,
                offset,
            })
        }
        "fsqrt.s" => {
            let rm = s.expect_ops_rm(2)?;
            one(Instr::FpSqrt {
                rd: s.f(0)?,
                rs1: s.f(1)?,
                rm,
            })
        }
        "fmin.s" | "fmax.s" => {
            s.expect_ops(3)?;
            one(Instr::FpMinMax {
                max: m == "fmax.s",
                rd: s.f(0)?,
                rs1: s.f(1)?,
                rs2: s.f(2)?,
            })
        }
        "fmv.s" => {
            s.expect_ops(2)?;
            let rs = s.f(1)?;
            one(Instr::FpSgnj {
                kind: SgnjKind::Sgnj,
                rd: s.f(0)?,
                rs1: rs,
                rs2: rs,
            })
        }
        "fclass.s" => {
            s.expect_ops(2)?;
            one(Instr::FpClass {
                rd: s.x(0)?,
                rs1: s.f(1)?,
            })
        }
        "fmv.x.w" => {
            s.expect_ops(2)?;
            one(Instr::FpMvXW {
                rd: s.x(0)?,
                rs1: s.f(1)?,
            })
        }
        "fmv.w.x" => {
            s.expect_ops(2)?;
            one(Instr::FpMvWX {
                rd: s.f(0)?,
                rs1: s.x(1)?,
            })
        }
        "fcvt.w.s" | "fcvt.wu.s" => {
            let rm = s.expect_ops_rm(2)?;
            one(Instr::FpCvtToInt {
                signed: m == "fcvt.w.s",
                rd: s.x(0)?,
                rs1: s.f(1)?,
                rm,
            })
        }
        "fcvt.s.w" | "fcvt.s.wu" => {
            let rm = s.expect_ops_rm(2)?;
            one(Instr::FpCvtFromInt {
                signed: m == "fcvt.s.w",
                rd: s.f(0)?,
                rs1: s.x(1)?,
                rm,
            })
        }
        _ => Err(s.err(s.col, format!("unknown instruction `{m}`"))),
    }
}

fn posit_cvt_spec(m: &str) -> Option<PositCvtSpec> {
    let es = EsField::Dyn;
    let prec = |t: &str| match t {
        "p8" => Some(Precision::P8),
        "p16" => Some(Precision::P16),
        _ => None,
    };
    let rest = m.strip_prefix("fcvt.")?;
    let (dst, src) = rest.split_once('.')?;
    match (dst, src) {
        ("s", s) => Some(PositCvtSpec::PositToFp { src: prec(s)?, es }),
        (d, "s") => Some(PositCvtSpec::FpToPosit { dst: prec(d)?, es }),
        (d, s) => Some(PositCvtSpec::PositToPosit {
            src: prec(s)?,
            dst: prec(d)?,
            es,
        }),
    }
}
