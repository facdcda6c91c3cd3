use super::*;

pub(super) fn csr_name(csr: u16) -> Option<&'static str> {
    Some(match csr {
        CSR_FFLAGS => "fflags",
        CSR_FRM => "frm",
        CSR_FCSR => "fcsr",
        CSR_PCSR => "pcsr",
        CSR_CYCLE => "cycle",
        _ => return None,
    })
}

fn csr_text(csr: u16) -> String {
    csr_name(csr).map_or_else(|| format!("{csr:#x}"), str::to_string)
}

fn rm_suffix(rm: Rm) -> String {
    match rm {
        Rm::Dyn => String::new(),
        Rm::Static(m) => format!(", {}", m.mnemonic()),
    }
}

pub(super) fn branch_mnemonic(k: BranchKind) -> &'static str {
    match k {
        BranchKind::Beq => "beq",
        BranchKind::Bne => "bne",
        BranchKind::Blt => "blt",
        BranchKind::Bge => "bge",
        BranchKind::Bltu => "bltu",
        BranchKind::Bgeu => "bgeu",
    }
}

pub(super) fn load_mnemonic(k: LoadKind) -> &'static str {
    match k {
        LoadKind::Lb => "lb",
        LoadKind::Lh => "lh",
        LoadKind::Lw => "lw",
        LoadKind::Lbu => "lbu",
        LoadKind::Lhu => "lhu",
    }
}

pub(super) fn store_mnemonic(k: StoreKind) -> &'static str {
    match k {
        StoreKind::Sb => "sb",
        StoreKind::Sh => "sh",
        StoreKind::Sw => "sw",
    }
}

pub(super) fn imm_mnemonic(op: ImmOp) -> &'static str {
    match op {
        ImmOp::Addi => "addi",
        ImmOp::Slti => "slti",
        ImmOp::Sltiu => "sltiu",
        ImmOp::Xori => "xori",
        ImmOp::Ori => "ori",
        ImmOp::Andi => "andi",
        ImmOp::Slli => "slli",
        ImmOp::Srli => "srli",
        ImmOp::Srai => "srai",
    }
}

pub(super) fn reg_mnemonic(op: RegOp) -> &'static str {
    match op {
        RegOp::Add => "add",
        RegOp::Sub => "sub",
        RegOp::Sll => "sll",
        RegOp::Slt => "slt",
        RegOp::Sltu => "sltu",
        RegOp::Xor => "xor",
        RegOp::Srl => "srl",
        RegOp::Sra => "sra",
        RegOp::Or => "or",
        RegOp::And => "and",
    }
}

pub(super) fn mul_mnemonic(op: MulOp) -> &'static str {
    match op {
        MulOp::Mul => "mul",
        MulOp::Mulh => "mulh",
        MulOp::Mulhsu => "mulhsu",
        MulOp::Mulhu => "mulhu",
        MulOp::Div => "div",
        MulOp::Divu => "divu",
        MulOp::Rem => "rem",
        MulOp::Remu => "remu",
    }
}

pub(super) fn csr_mnemonic(k: CsrKind) -> &'static str {
    match k {
        CsrKind::Rw => "csrrw",
        CsrKind::Rs => "csrrs",
        CsrKind::Rc => "csrrc",
        CsrKind::Rwi => "csrrwi",
        CsrKind::Rsi => "csrrsi",
        CsrKind::Rci => "csrrci",
    }
}

pub(super) fn fma_mnemonic(v: FmaVariant) -> &'static str {
    match v {
        FmaVariant::Madd => "fmadd.s",
        FmaVariant::Msub => "fmsub.s",
        FmaVariant::Nmsub => "fnmsub.s",
        FmaVariant::Nmadd => "fnmadd.s",
    }
}

pub(super) fn arith_mnemonic(op: FpArith) -> &'static str {
    match op {
        FpArith::Add => "fadd.s",
        FpArith::Sub => "fsub.s",
        FpArith::Mul => "fmul.s",
        FpArith::Div => "fdiv.s",
    }
}

/// Canonical assembly text for a word; illegal words print as `.word`.
pub fn disassemble(word: u32) -> String {
    match decode_instr(word) {
        Decoded::Illegal(w) => format!(".word {w:#010x}"),
        Decoded::Instr(i) => format_instr(&i),
    }
}

pub(super) fn format_instr(i: &Instr) -> String {
    match *i {
        Instr::Lui { rd, imm20 } => format!("lui x{rd}, {imm20:#x}"),
        Instr::Auipc { rd, imm20 } => format!("auipc x{rd}, {imm20:#x}"),
        Instr::Jal { rd, offset } => format!("jal x{rd}, {offset}"),
        Instr::Jalr { rd, rs1, offset } => format!("jalr x{rd}, {offset}(x{rs1})"),
        Instr::Branch {
            kind,
            rs1,
            rs2,
            offset,
        } => format!("{} x{rs1}, x{rs2}, {offset}", branch_mnemonic(kind)),
        Instr::Load {
            kind,
            rd,
            rs1,
            offset,
        } => format!("{} x{rd}, {offset}(x{rs1})", load_mnemonic(kind)),
        Instr::Store {
            kind,
            rs1,
            rs2,
            offset,
        } => format!("{} x{rs2}, {offset}(x{rs1})", store_mnemonic(kind)),
        Instr::IntImm { op, rd, rs1, imm } => format!("{} x{rd}, x{rs1}, {imm}", imm_mnemonic(op)),
        Instr::IntOp { op, rd, rs1, rs2 } => format!("{} x{rd}, x{rs1}, x{rs2}", reg_mnemonic(op)),
        Instr::Mul { op, rd, rs1, rs2 } => format!("{} x{rd}, x{rs1}, x{rs2}", mul_mnemonic(op)),
        Instr::Ecall => "ecall".into(),
        Instr::Ebreak => "ebreak".into(),
        Instr::Csr { kind, rd, csr, src } => {
            let src = if kind.is_imm() {
                src.to_string()
            } else {
                format!("x{src}")
            };
            format!("{} x{rd}, {}, {src}", csr_mnemonic(kind), csr_text(csr))
        }
        Instr::FLoad { rd, rs1, offset } => format!("flw f{rd}, {offset}(x{rs1})"),
        Instr::FStore { rs1, rs2, offset } => format!("fsw f{rs2}, {offset}(x{rs1})"),
        Instr::FpArith {
            op,
            rd,
            rs1,
            rs2,
            rm,
        } => format!("{} f{rd}, f{rs1}, f{rs2}{}", arith_mnemonic(op), rm_suffix(rm)),
        Instr::FpSqrt { rd, rs1, rm } => format!("fsqrt.s f{rd}, f{rs1}{}", rm_suffix(rm)),
        Instr::FpFma {
            variant,
            rd,
            rs1,
            rs2,
            rs3,
            rm,
        } => format!(
            "{} f{rd}, f{rs1}, f{rs2}, f{rs3}{}",
            fma_mnemonic(variant),
            rm_suffix(rm)
        ),
        Instr::FpSgnj { kind, rd, rs1, rs2 } => {
            let m = match kind {
                SgnjKind::Sgnj => "fsgnj.s",
                SgnjKind::Sgnjn => "fsgnjn.s",
                SgnjKind::Sgnjx => "fsgnjx.s",
            };
            format!("{m} f{rd}, f{rs1}, f{rs2}")
        }
        Instr::FpMinMax { max, rd, rs1, rs2 } => {
            let m = if max { "fmax.s" } else { "fmin.s" };
            format!("{m} f{rd}, f{rs1}, f{rs2}")
        }
        Instr::FpCmp { kind, rd, rs1, rs2 } => {
            let m = match kind {
                CmpKind::Eq => "feq.s",
                CmpKind::Lt => "flt.s",
                CmpKind::Le => "fle.s",
            };
            format!("{m} x{rd}, f{rs1}, f{rs2}")
        }
        Instr::FpClass { rd, rs1 } => format!("fclass.s x{rd}, f{rs1}"),
        Instr::FpMvXW { rd, rs1 } => format!("fmv.x.w x{rd}, f{rs1}"),
        Instr::FpMvWX { rd, rs1 } => format!("fmv.w.x f{rd}, x{rs1}"),
        Instr::FpCvtToInt {
            signed,
            rd,
            rs1,
            rm,
        } => {
            let m = if signed { "fcvt.w.s" } else { "fcvt.wu.s" };
            format!("{m} x{rd}, f{rs1}{}", rm_suffix(rm))
        }
        Instr::FpCvtFromInt {
            signed,
            rd,
            rs1,
            rm,
        } => {
            let m = if signed { "fcvt.s.w" } else { "fcvt.s.wu" };
            format!("{m} f{rd}, x{rs1}{}", rm_suffix(rm))
        }
        Instr::PositCvt { spec, rd, rs1 } => {
            let es = match spec.es() {
                EsField::Dyn => "dyn".to_string(),
                EsField::Static(e) => e.to_string(),
            };
            format!("{} f{rd}, f{rs1}, {es}", spec.mnemonic())
        }
    }
}
