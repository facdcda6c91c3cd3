use crate::fp32::RoundingMode;
use crate::fpu::{self, FpuOp, FpuRequest, PositConversion, RESULT_SLOT};
use crate::isa::*;
use crate::posit::{PositFormat, Precision};

use super::{CoreState, Trap, TrapKind};

fn trap(kind: TrapKind, pc: u32, value: u32) -> Trap {
    Trap { kind, pc, value }
}

/// Executes the instruction at `s.pc`; returns the fetched word.
pub(super) fn step(s: &mut CoreState) -> Result<u32, Trap> {
    let pc = s.pc;
    if !pc.is_multiple_of(4) {
        return Err(trap(TrapKind::MisalignedAccess, pc, pc));
    }
    let word = s
        .read(pc, 4)
        .ok_or_else(|| trap(TrapKind::MemOutOfBounds, pc, pc))?;
    let instr = decode_instr(word)
        .ok()
        .ok_or_else(|| trap(TrapKind::IllegalInstruction, pc, word))?;
    let illegal = || trap(TrapKind::IllegalInstruction, pc, word);
    let cost = s.cost;
    let mut next = pc.wrapping_add(4);
    let cycles: u32;

    match instr {
        Instr::Lui { rd, imm20 } => {
            s.set_x(rd as usize, imm20 << 12);
            cycles = cost.alu;
        }
        Instr::Auipc { rd, imm20 } => {
            s.set_x(rd as usize, pc.wrapping_add(imm20 << 12));
            cycles = cost.alu;
        }
        Instr::Jal { rd, offset } => {
            s.set_x(rd as usize, next);
            next = pc.wrapping_add(offset as u32);
            cycles = cost.jump;
        }
        Instr::Jalr { rd, rs1, offset } => {
            let target = s.x(rs1 as usize).wrapping_add(offset as u32) & !1;
            s.set_x(rd as usize, next);
            next = target;
            cycles = cost.jump;
        }
        Instr::Branch {
            kind,
            rs1,
            rs2,
            offset,
        } => {
            let (a, b) = (s.x(rs1 as usize), s.x(rs2 as usize));
            let taken = match kind {
                BranchKind::Beq => a == b,
                BranchKind::Bne => a != b,
                BranchKind::Blt => (a as i32) < (b as i32),
                BranchKind::Bge => (a as i32) >= (b as i32),
                BranchKind::Bltu => a < b,
                BranchKind::Bgeu => a >= b,
            };
            if taken {
                next = pc.wrapping_add(offset as u32);
                cycles = cost.branch_taken;
            } else {
                cycles = cost.branch_not_taken;
            }
        }
        Instr::Load {
            kind,
            rd,
            rs1,
            offset,
        } => {
            let addr = s.x(rs1 as usize).wrapping_add(offset as u32);
            let (len, signed) = match kind {
                LoadKind::Lb => (1, true),
                LoadKind::Lbu => (1, false),
                LoadKind::Lh => (2, true),
                LoadKind::Lhu => (2, false),
                LoadKind::Lw => (4, false),
            };
            let v = load(s, pc, addr, len)?;
            let v = if signed {
                let sh = 32 - 8 * len;
                (((v << sh) as i32) >> sh) as u32
            } else {
                v
            };
            s.set_x(rd as usize, v);
            cycles = cost.load_store;
        }
        Instr::Store {
            kind,
            rs1,
            rs2,
            offset,
        } => {
            let addr = s.x(rs1 as usize).wrapping_add(offset as u32);
            let len = match kind {
                StoreKind::Sb => 1,
                StoreKind::Sh => 2,
                StoreKind::Sw => 4,
            };
            store(s, pc, addr, len, s.x(rs2 as usize))?;
            cycles = cost.load_store;
        }
        Instr::IntImm { op, rd, rs1, imm } => {
            let a = s.x(rs1 as usize);
            let b = imm as u32;
            let v = match op {
                ImmOp::Addi => a.wrapping_add(b),
                ImmOp::Slti => ((a as i32) < imm) as u32,
                ImmOp::Sltiu => (a < b) as u32,
                ImmOp::Xori => a ^ b,
                ImmOp::Ori => a | b,
                ImmOp::Andi => a & b,
                ImmOp::Slli => a << (b & 31),
                ImmOp::Srli => a >> (b & 31),
                ImmOp::Srai => ((a as i32) >> (b & 31)) as u32,
            };
            s.set_x(rd as usize, v);
            cycles = cost.alu;
        }
        Instr::IntOp { op, rd, rs1, rs2 } => {
            let (a, b) = (s.x(rs1 as usize), s.x(rs2 as usize));
            let v = match op {
                RegOp::Add => a.wrapping_add(b),
                RegOp::Sub => a.wrapping_sub(b),
                RegOp::Sll => a << (b & 31),
                RegOp::Slt => ((a as i32) < (b as i32)) as u32,
                RegOp::Sltu => (a < b) as u32,
                RegOp::Xor => a ^ b,
                RegOp::Srl => a >> (b & 31),
                RegOp::Sra => ((a as i32) >> (b & 31)) as u32,
                RegOp::Or => a | b,
                RegOp::And => a & b,
            };
            s.set_x(rd as usize, v);
            cycles = cost.alu;
        }
        Instr::Mul { op, rd, rs1, rs2 } => {
            let (a, b) = (s.x(rs1 as usize), s.x(rs2 as usize));
            s.set_x(rd as usize, muldiv(op, a, b));
            cycles = cost.muldiv;
        }
        Instr::Ecall | Instr::Ebreak => {
            s.cycles += cost.ecall as u64;
            s.instret += 1;
            return Err(trap(TrapKind::EnvCall, pc, word));
        }
        Instr::Csr { kind, rd, csr, src } => {
            let operand = if kind.is_imm() {
                src as u32
            } else {
                s.x(src as usize)
            };
            // csrrs/csrrc with a zero operand are pure reads.
            let writes = match kind {
                CsrKind::Rw | CsrKind::Rwi => true,
                _ => src != 0,
            };
            let old = read_csr(s, csr).ok_or_else(illegal)?;
            if writes {
                let new = match kind {
                    CsrKind::Rw | CsrKind::Rwi => operand,
                    CsrKind::Rs | CsrKind::Rsi => old | operand,
                    CsrKind::Rc | CsrKind::Rci => old & !operand,
                };
                write_csr(s, csr, new).ok_or_else(illegal)?;
            }
            s.set_x(rd as usize, old);
            cycles = cost.csr;
        }
        Instr::FLoad { rd, rs1, offset } => {
            let addr = s.x(rs1 as usize).wrapping_add(offset as u32);
            s.f[rd as usize] = load(s, pc, addr, 4)?;
            cycles = cost.load_store;
        }
        Instr::FStore { rs1, rs2, offset } => {
            let addr = s.x(rs1 as usize).wrapping_add(offset as u32);
            store(s, pc, addr, 4, s.f[rs2 as usize])?;
            cycles = cost.load_store;
        }
        Instr::FpArith {
            op,
            rd,
            rs1,
            rs2,
            rm,
        } => {
            let op = match op {
                FpArith::Add => FpuOp::Add,
                FpArith::Sub => FpuOp::Sub,
                FpArith::Mul => FpuOp::Mul,
                FpArith::Div => FpuOp::Div,
            };
            let ops = [s.f[rs1 as usize], s.f[rs2 as usize]];
            cycles = fp(s, op, &ops, Some(rm), rd).ok_or_else(illegal)?;
        }
        Instr::FpSqrt { rd, rs1, rm } => {
            let ops = [s.f[rs1 as usize]];
            cycles = fp(s, FpuOp::Sqrt, &ops, Some(rm), rd).ok_or_else(illegal)?;
        }
        Instr::FpFma {
            variant,
            rd,
            rs1,
            rs2,
            rs3,
            rm,
        } => {
            let ops = [s.f[rs1 as usize], s.f[rs2 as usize], s.f[rs3 as usize]];
            cycles = fp(s, FpuOp::Fma(variant), &ops, Some(rm), rd).ok_or_else(illegal)?;
        }
        Instr::FpSgnj { kind, rd, rs1, rs2 } => {
            let ops = [s.f[rs1 as usize], s.f[rs2 as usize]];
            cycles = fp(s, FpuOp::Sgnj(kind), &ops, None, rd).ok_or_else(illegal)?;
        }
        Instr::FpMinMax { max, rd, rs1, rs2 } => {
            let op = if max { FpuOp::Max } else { FpuOp::Min };
            let ops = [s.f[rs1 as usize], s.f[rs2 as usize]];
            cycles = fp(s, op, &ops, None, rd).ok_or_else(illegal)?;
        }
        Instr::FpCmp { kind, rd, rs1, rs2 } => {
            let ops = [s.f[rs1 as usize], s.f[rs2 as usize]];
            cycles = fp(s, FpuOp::Cmp(kind), &ops, None, rd).ok_or_else(illegal)?;
        }
        Instr::FpClass { rd, rs1 } => {
            let ops = [s.f[rs1 as usize]];
            cycles = fp(s, FpuOp::Classify, &ops, None, rd).ok_or_else(illegal)?;
        }
        Instr::FpMvXW { rd, rs1 } => {
            let ops = [s.f[rs1 as usize]];
            cycles = fp(s, FpuOp::MvXW, &ops, None, rd).ok_or_else(illegal)?;
        }
        Instr::FpMvWX { rd, rs1 } => {
            let ops = [s.x(rs1 as usize)];
            cycles = fp(s, FpuOp::MvWX, &ops, None, rd).ok_or_else(illegal)?;
        }
        Instr::FpCvtToInt {
            signed,
            rd,
            rs1,
            rm,
        } => {
            let ops = [s.f[rs1 as usize]];
            cycles = fp(s, FpuOp::CvtToInt { signed }, &ops, Some(rm), rd).ok_or_else(illegal)?;
        }
        Instr::FpCvtFromInt {
            signed,
            rd,
            rs1,
            rm,
        } => {
            let ops = [s.x(rs1 as usize)];
            cycles = fp(s, FpuOp::CvtFromInt { signed }, &ops, Some(rm), rd).ok_or_else(illegal)?;
        }
        Instr::PositCvt { spec, rd, rs1 } => {
            let conv = posit_conversion(spec, s.csrs.pcsr());
            let ops = [s.f[rs1 as usize]];
            cycles = fp(s, FpuOp::PositCvt(conv), &ops, None, rd).ok_or_else(illegal)?;
        }
    }

    s.cycles += cycles as u64;
    s.pc = next;
    Ok(word)
}

fn load(s: &CoreState, pc: u32, addr: u32, len: u32) -> Result<u32, Trap> {
    if !addr.is_multiple_of(len) {
        return Err(trap(TrapKind::MisalignedAccess, pc, addr));
    }
    s.read(addr, len)
        .ok_or_else(|| trap(TrapKind::MemOutOfBounds, pc, addr))
}

fn store(s: &mut CoreState, pc: u32, addr: u32, len: u32, v: u32) -> Result<(), Trap> {
    if !addr.is_multiple_of(len) {
        return Err(trap(TrapKind::MisalignedAccess, pc, addr));
    }
    s.write(addr, len, v)
        .ok_or_else(|| trap(TrapKind::MemOutOfBounds, pc, addr))
}

fn muldiv(op: MulOp, a: u32, b: u32) -> u32 {
    let (sa, sb) = (a as i32, b as i32);
    match op {
        MulOp::Mul => a.wrapping_mul(b),
        MulOp::Mulh => ((sa as i64 * sb as i64) >> 32) as u32,
        MulOp::Mulhsu => ((sa as i64 * b as i64) >> 32) as u32,
        MulOp::Mulhu => ((a as u64 * b as u64) >> 32) as u32,
        MulOp::Div => match b {
            0 => u32::MAX,
            _ => sa.wrapping_div(sb) as u32,
        },
        MulOp::Divu => a.checked_div(b).unwrap_or(u32::MAX),
        MulOp::Rem => match b {
            0 => a,
            _ => sa.wrapping_rem(sb) as u32,
        },
        MulOp::Remu => a.checked_rem(b).unwrap_or(a),
    }
}

fn read_csr(s: &CoreState, csr: u16) -> Option<u32> {
    Some(match csr {
        CSR_FFLAGS => s.csrs.fflags,
        CSR_FRM => s.csrs.frm,
        CSR_FCSR => s.csrs.fcsr(),
        CSR_PCSR => s.csrs.pcsr,
        CSR_CYCLE => s.cycles as u32,
        _ => return None,
    })
}

/// Returns `None` for unknown or read-only CSRs.
fn write_csr(s: &mut CoreState, csr: u16, v: u32) -> Option<()> {
    match csr {
        CSR_FFLAGS => s.csrs.fflags = v & 0x1F,
        CSR_FRM => s.csrs.frm = v & 0x7,
        CSR_FCSR => {
            s.csrs.fflags = v & 0x1F;
            s.csrs.frm = (v >> 5) & 0x7;
        }
        CSR_PCSR => s.csrs.pcsr = v & fpu::Pcsr::MASK,
        _ => return None,
    }
    Some(())
}

/// Resolves static and DYN es fields against the current pcsr.
fn posit_conversion(spec: PositCvtSpec, pcsr: fpu::Pcsr) -> PositConversion {
    let fmt = |prec: Precision, es: u8| PositFormat::new(prec, es).expect("es fits in 3 bits");
    let src_es = pcsr.slots[0].es;
    let dst_es = pcsr.slots[RESULT_SLOT].es;
    match spec {
        PositCvtSpec::FpToPosit { dst, es } => PositConversion::FpToPosit {
            dst: fmt(dst, resolve(es, dst_es)),
        },
        PositCvtSpec::PositToFp { src, es } => PositConversion::PositToFp {
            src: fmt(src, resolve(es, src_es)),
        },
        PositCvtSpec::PositToPosit { src, dst, es } => PositConversion::PositToPosit {
            src: fmt(src, src_es),
            dst: fmt(dst, resolve(es, dst_es)),
        },
    }
}

fn resolve(es: EsField, dynamic: u8) -> u8 {
    match es {
        EsField::Static(e) => e,
        EsField::Dyn => dynamic,
    }
}

/// Dispatches to the FPU, writes the result and accrues flags. Returns the
/// latency, or `None` when an instruction's rounding mode is reserved.
/// Instructions without an rm field use `frm`, falling back to RNE.
fn fp(s: &mut CoreState, op: FpuOp, ops: &[u32], rm: Option<Rm>, rd: Reg) -> Option<u32> {
    let mode = match rm {
        Some(Rm::Static(m)) => m,
        Some(Rm::Dyn) => RoundingMode::from_bits(s.csrs.frm)?,
        None => RoundingMode::from_bits(s.csrs.frm).unwrap_or(RoundingMode::Rne),
    };
    let req = FpuRequest::new(op, ops, s.csrs.pcsr(), mode);
    let resp = fpu::execute_with(&req, &s.cost.fpu);
    if op.int_result() {
        s.set_x(rd as usize, resp.result);
    } else {
        s.f[rd as usize] = resp.result;
    }
    s.csrs.fflags |= resp.flags.bits();
    s.flops += op.flops();
    Some(resp.latency)
}
