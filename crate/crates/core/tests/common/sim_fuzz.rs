//! Random F-extension instruction sequences run on the simulator with
//! pcsr = 0 and replayed on a reference interpreter built from the
//! binary32 oracle.

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::Rng;
use unifpu::fp32::{CmpKind, FmaVariant, RoundingMode};
use unifpu::fpu::SgnjKind;
use unifpu::isa::{encode_instr, CsrKind, FpArith, Instr, Rm, CSR_FFLAGS, CSR_FRM};
use unifpu::sim::{load_words, TrapKind};

use super::fp_oracle as o;
use super::{f32_pattern, near, rng};

const NF: u8 = 8;
const SCRATCH: u32 = 0x800;
const BASE_REG: u8 = 8;

fn classify(a: u32) -> u32 {
    let neg = a >> 31 != 0;
    let exp = (a >> 23) & 0xFF;
    let frac = a & 0x7F_FFFF;
    let bit = match (exp, frac) {
        (0xFF, 0) => if neg { 0 } else { 7 },
        (0xFF, f) => if f & 0x40_0000 != 0 { 9 } else { 8 },
        (0, 0) => if neg { 3 } else { 4 },
        (0, _) => if neg { 2 } else { 5 },
        _ => if neg { 1 } else { 6 },
    };
    1 << bit
}

#[derive(Clone, PartialEq, Eq, Debug)]
struct RefState {
    x: [u32; 32],
    f: [u32; 32],
    fflags: u32,
    frm: u32,
    mem: HashMap<u32, u32>,
}

impl RefState {
    fn mode(&self, rm: Rm) -> o::Rm {
        match rm {
            Rm::Static(m) => m.bits(),
            Rm::Dyn => self.frm,
        }
    }

    fn set_x(&mut self, r: u8, v: u32) {
        if r != 0 {
            self.x[r as usize] = v;
        }
    }

    fn exec(&mut self, i: &Instr) {
        let f = self.f;
        let mut fl = 0u8;
        match *i {
            Instr::FpArith { op, rd, rs1, rs2, rm } => {
                let (a, b, m) = (f[rs1 as usize], f[rs2 as usize], self.mode(rm));
                let (r, g) = match op {
                    FpArith::Add => o::add(a, b, m),
                    FpArith::Sub => o::sub(a, b, m),
                    FpArith::Mul => o::mul(a, b, m),
                    FpArith::Div => o::div(a, b, m),
                };
                self.f[rd as usize] = r;
                fl = g;
            }
            Instr::FpSqrt { rd, rs1, rm } => {
                let (r, g) = o::sqrt(f[rs1 as usize], self.mode(rm));
                self.f[rd as usize] = r;
                fl = g;
            }
            Instr::FpFma { variant, rd, rs1, rs2, rs3, rm } => {
                let (np, nc) = match variant {
                    FmaVariant::Madd => (false, false),
                    FmaVariant::Msub => (false, true),
                    FmaVariant::Nmsub => (true, false),
                    FmaVariant::Nmadd => (true, true),
                };
                let (r, g) = o::fma(f[rs1 as usize], f[rs2 as usize], f[rs3 as usize], np, nc, self.mode(rm));
                self.f[rd as usize] = r;
                fl = g;
            }
            Instr::FpSgnj { kind, rd, rs1, rs2 } => {
                let (a, b) = (f[rs1 as usize], f[rs2 as usize]);
                let s = match kind {
                    SgnjKind::Sgnj => b,
                    SgnjKind::Sgnjn => !b,
                    SgnjKind::Sgnjx => a ^ b,
                };
                self.f[rd as usize] = (a & 0x7FFF_FFFF) | (s & 0x8000_0000);
            }
            Instr::FpMinMax { max, rd, rs1, rs2 } => {
                let (r, g) = o::min_max(f[rs1 as usize], f[rs2 as usize], max);
                self.f[rd as usize] = r;
                fl = g;
            }
            Instr::FpCmp { kind, rd, rs1, rs2 } => {
                let k = match kind {
                    CmpKind::Eq => 0,
                    CmpKind::Lt => 1,
                    CmpKind::Le => 2,
                };
                let (r, g) = o::compare(f[rs1 as usize], f[rs2 as usize], k);
                self.set_x(rd, r as u32);
                fl = g;
            }
            Instr::FpClass { rd, rs1 } => self.set_x(rd, classify(f[rs1 as usize])),
            Instr::FpMvXW { rd, rs1 } => self.set_x(rd, f[rs1 as usize]),
            Instr::FpMvWX { rd, rs1 } => self.f[rd as usize] = self.x[rs1 as usize],
            Instr::FpCvtToInt { signed, rd, rs1, rm } => {
                let (r, g) = o::to_int(f[rs1 as usize], self.mode(rm), signed);
                self.set_x(rd, r);
                fl = g;
            }
            Instr::FpCvtFromInt { signed, rd, rs1, rm } => {
                let (r, g) = o::from_int(self.x[rs1 as usize], self.mode(rm), signed);
                self.f[rd as usize] = r;
                fl = g;
            }
            Instr::FStore { rs1, rs2, offset } => {
                let addr = self.x[rs1 as usize].wrapping_add(offset as u32);
                self.mem.insert(addr, f[rs2 as usize]);
            }
            Instr::FLoad { rd, rs1, offset } => {
                let addr = self.x[rs1 as usize].wrapping_add(offset as u32);
                self.f[rd as usize] = self.mem.get(&addr).copied().unwrap_or(0);
            }
            Instr::Csr { kind: CsrKind::Rwi, rd, csr: CSR_FRM, src } => {
                self.set_x(rd, self.frm);
                self.frm = src as u32;
            }
            Instr::Csr { kind: CsrKind::Rs, rd, csr: CSR_FFLAGS, src: 0 } => {
                self.set_x(rd, self.fflags);
            }
            ref other => panic!("reference model does not cover {other:?}"),
        }
        self.fflags |= fl as u32;
    }
}

fn gen_instr(r: &mut impl Rng) -> Instr {
    let fr = |r: &mut dyn rand::RngCore| r.gen_range(0..NF);
    let xd = |r: &mut dyn rand::RngCore| r.gen_range(0..BASE_REG);
    let rm = |r: &mut dyn rand::RngCore| {
        if r.gen_bool(0.5) {
            Rm::Dyn
        } else {
            Rm::Static(*RoundingMode::ALL.choose(r).unwrap())
        }
    };
    match r.gen_range(0..17) {
        0..=3 => Instr::FpArith {
            op: *[FpArith::Add, FpArith::Sub, FpArith::Mul, FpArith::Div].choose(r).unwrap(),
            rd: fr(r),
            rs1: fr(r),
            rs2: fr(r),
            rm: rm(r),
        },
        4 => Instr::FpSqrt { rd: fr(r), rs1: fr(r), rm: rm(r) },
        5 | 6 => Instr::FpFma {
            variant: *[FmaVariant::Madd, FmaVariant::Msub, FmaVariant::Nmsub, FmaVariant::Nmadd]
                .choose(r)
                .unwrap(),
            rd: fr(r),
            rs1: fr(r),
            rs2: fr(r),
            rs3: fr(r),
            rm: rm(r),
        },
        7 => Instr::FpSgnj {
            kind: *[SgnjKind::Sgnj, SgnjKind::Sgnjn, SgnjKind::Sgnjx].choose(r).unwrap(),
            rd: fr(r),
            rs1: fr(r),
            rs2: fr(r),
        },
        8 => Instr::FpMinMax { max: r.gen(), rd: fr(r), rs1: fr(r), rs2: fr(r) },
        9 => Instr::FpCmp {
            kind: *[CmpKind::Eq, CmpKind::Lt, CmpKind::Le].choose(r).unwrap(),
            rd: xd(r),
            rs1: fr(r),
            rs2: fr(r),
        },
        10 => Instr::FpClass { rd: xd(r), rs1: fr(r) },
        11 => {
            if r.gen() {
                Instr::FpMvXW { rd: xd(r), rs1: fr(r) }
            } else {
                Instr::FpMvWX { rd: fr(r), rs1: xd(r) }
            }
        }
        12 => Instr::FpCvtToInt { signed: r.gen(), rd: xd(r), rs1: fr(r), rm: rm(r) },
        13 => Instr::FpCvtFromInt { signed: r.gen(), rd: fr(r), rs1: xd(r), rm: rm(r) },
        14 => {
            let offset = 4 * r.gen_range(0..4);
            if r.gen() {
                Instr::FStore { rs1: BASE_REG, rs2: fr(r), offset }
            } else {
                Instr::FLoad { rd: fr(r), rs1: BASE_REG, offset }
            }
        }
        15 => Instr::Csr {
            kind: CsrKind::Rwi,
            rd: xd(r),
            csr: CSR_FRM,
            src: r.gen_range(0..5),
        },
        _ => Instr::Csr { kind: CsrKind::Rs, rd: xd(r), csr: CSR_FFLAGS, src: 0 },
    }
}

/// Runs `n` sequences; returns (sequences, mismatching sequences, first
/// mismatch description).
pub fn run_sequences(n: u64, seed: u64) -> (u64, u64, Option<String>) {
    let mut r = rng(seed);
    let mut bad = 0;
    let mut first = None;
    for seq in 0..n {
        let len = r.gen_range(8..=32);
        let instrs: Vec<Instr> = (0..len).map(|_| gen_instr(&mut r)).collect();
        let mut words: Vec<u32> = instrs.iter().map(encode_instr).collect();
        words.push(0x0000_0073);

        let mut refs = RefState {
            x: [0; 32],
            f: [0; 32],
            fflags: 0,
            frm: r.gen_range(0..5),
            mem: HashMap::new(),
        };
        for i in 0..NF as usize {
            refs.f[i] = if i > 0 && r.gen_bool(0.3) {
                near(&mut r, refs.f[i - 1])
            } else {
                f32_pattern(&mut r)
            };
        }
        for i in 1..BASE_REG as usize {
            refs.x[i] = if r.gen() { r.gen_range(-300i32..300) as u32 } else { r.gen() };
        }
        refs.x[BASE_REG as usize] = SCRATCH;

        let mut sim = load_words(&words, 0, &[], 4096).unwrap();
        for i in 1..32 {
            sim.set_x(i, refs.x[i]);
        }
        sim.f = refs.f;
        sim.csrs.frm = refs.frm;

        for i in &instrs {
            refs.exec(i);
        }
        let out = sim.run(1_000_000);
        let clean = matches!(out.halt, unifpu::sim::HaltReason::Trap(t) if t.kind == TrapKind::EnvCall);
        let same = clean
            && sim.f == refs.f
            && sim.xregs()[..] == refs.x[..]
            && sim.csrs.fflags == refs.fflags
            && sim.csrs.frm == refs.frm;
        if !same {
            bad += 1;
            if first.is_none() {
                first = Some(format!(
                    "sequence {seq}: halt {:?}, fflags sim {:#x} ref {:#x}, program {:?}",
                    out.halt, sim.csrs.fflags, refs.fflags, instrs
                ));
            }
        }
    }
    (n, bad, first)
}
