//! Drives `unifpu::fp32` against the f64-based oracle.

use rand::Rng;
use unifpu::fp32::{
    fp_add, fp_cmp, fp_div, fp_fma, fp_max, fp_min, fp_mul, fp_sqrt, fp_sub, fp_to_int,
    int_to_fp, CmpKind, FmaVariant, Fp32Bits, RoundingMode,
};

use super::fp_oracle as o;
use super::{f32_pattern, near, rng};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Op {
    Add,
    Sub,
    Mul,
    Div,
    Sqrt,
    Fma(FmaVariant),
    ToInt { signed: bool },
    FromInt { signed: bool },
}

pub const ROUNDED_OPS: [Op; 13] = [
    Op::Add,
    Op::Sub,
    Op::Mul,
    Op::Div,
    Op::Sqrt,
    Op::Fma(FmaVariant::Madd),
    Op::Fma(FmaVariant::Msub),
    Op::Fma(FmaVariant::Nmsub),
    Op::Fma(FmaVariant::Nmadd),
    Op::ToInt { signed: true },
    Op::ToInt { signed: false },
    Op::FromInt { signed: true },
    Op::FromInt { signed: false },
];

/// Operand values used for the directed suites.
pub const DIRECTED: [u32; 30] = [
    0x0000_0000, 0x8000_0000, 0x0000_0001, 0x8000_0001, 0x0000_0002, 0x007F_FFFF,
    0x0080_0000, 0x0080_0001, 0x00FF_FFFF, 0x3F80_0000, 0xBF80_0000, 0x3F80_0001,
    0x3F7F_FFFF, 0x3FC0_0000, 0x4000_0000, 0x4040_0000, 0x3400_0000, 0x3380_0000,
    0x7F7F_FFFF, 0xFF7F_FFFF, 0x7F00_0000, 0x7F80_0000, 0xFF80_0000, 0x7FC0_0000,
    0x7F80_0001, 0xFFC1_2345, 0x4F00_0000, 0xCF00_0000, 0x4F80_0000, 0x2000_0000,
];

#[derive(Debug, Clone)]
pub struct Mismatch {
    pub op: Op,
    pub rm: RoundingMode,
    pub inputs: Vec<u32>,
    pub got: (u32, u32),
    pub want: (u32, u32),
}

#[derive(Debug, Clone, Default)]
pub struct Summary {
    pub cases: u64,
    pub mismatches: u64,
    pub first: Option<Mismatch>,
}

impl Summary {
    fn record(&mut self, op: Op, rm: RoundingMode, inputs: &[u32], got: (u32, u32), want: (u32, u32)) {
        self.cases += 1;
        if got != want {
            self.mismatches += 1;
            if self.first.is_none() {
                self.first = Some(Mismatch {
                    op,
                    rm,
                    inputs: inputs.to_vec(),
                    got,
                    want,
                });
            }
        }
    }
}

fn fma_signs(v: FmaVariant) -> (bool, bool) {
    match v {
        FmaVariant::Madd => (false, false),
        FmaVariant::Msub => (false, true),
        FmaVariant::Nmsub => (true, false),
        FmaVariant::Nmadd => (true, true),
    }
}

/// Runs one case, returning (implementation, oracle) as (bits, flags).
pub fn run_case(op: Op, rm: RoundingMode, x: &[u32]) -> ((u32, u32), (u32, u32)) {
    let r = rm.bits();
    let f = Fp32Bits;
    let (got, want): ((u32, u32), (u32, u8)) = match op {
        Op::Add => {
            let (v, fl) = fp_add(f(x[0]), f(x[1]), rm);
            ((v.0, fl.bits()), o::add(x[0], x[1], r))
        }
        Op::Sub => {
            let (v, fl) = fp_sub(f(x[0]), f(x[1]), rm);
            ((v.0, fl.bits()), o::sub(x[0], x[1], r))
        }
        Op::Mul => {
            let (v, fl) = fp_mul(f(x[0]), f(x[1]), rm);
            ((v.0, fl.bits()), o::mul(x[0], x[1], r))
        }
        Op::Div => {
            let (v, fl) = fp_div(f(x[0]), f(x[1]), rm);
            ((v.0, fl.bits()), o::div(x[0], x[1], r))
        }
        Op::Sqrt => {
            let (v, fl) = fp_sqrt(f(x[0]), rm);
            ((v.0, fl.bits()), o::sqrt(x[0], r))
        }
        Op::Fma(var) => {
            let (v, fl) = fp_fma(f(x[0]), f(x[1]), f(x[2]), rm, var);
            let (np, nc) = fma_signs(var);
            ((v.0, fl.bits()), o::fma(x[0], x[1], x[2], np, nc, r))
        }
        Op::ToInt { signed } => {
            let (v, fl) = fp_to_int(f(x[0]), rm, signed);
            ((v, fl.bits()), o::to_int(x[0], r, signed))
        }
        Op::FromInt { signed } => {
            let (v, fl) = int_to_fp(x[0], rm, signed);
            ((v.0, fl.bits()), o::from_int(x[0], r, signed))
        }
    };
    (got, (want.0, want.1 as u32))
}

fn arity(op: Op) -> usize {
    match op {
        Op::Add | Op::Sub | Op::Mul | Op::Div => 2,
        Op::Fma(_) => 3,
        _ => 1,
    }
}

fn random_inputs(op: Op, rng: &mut impl Rng) -> Vec<u32> {
    let a = f32_pattern(rng);
    match op {
        Op::FromInt { .. } => vec![match rng.gen_range(0..4) {
            0 => rng.gen_range(0u32..1 << 26),
            1 => rng.gen_range(0u32..1000).wrapping_sub(500),
            _ => rng.gen(),
        }],
        Op::Add | Op::Sub if rng.gen_range(0..4) == 0 => vec![a, near(rng, a)],
        Op::Fma(_) if rng.gen_range(0..4) == 0 => {
            // c close to -(a*b) forces deep cancellation
            let b = f32_pattern(rng);
            let p = (f32::from_bits(a) as f64 * f32::from_bits(b) as f64) as f32;
            let c = near(rng, p.to_bits());
            vec![a, b, c]
        }
        _ => {
            let mut v = vec![a];
            for _ in 1..arity(op) {
                v.push(f32_pattern(rng));
            }
            v
        }
    }
}

/// Directed cases: all pairs of `DIRECTED` (triples for fma, using a
/// reduced addend set), plus integer edge values for conversions.
fn directed_inputs(op: Op) -> Vec<Vec<u32>> {
    match op {
        Op::FromInt { .. } => [0u32, 1, 2, 3, 0x7FFF_FFFF, 0x8000_0000, 0xFFFF_FFFF, 0x0100_0001, 0x0100_0003, 0xFFFF_FF7F]
            .iter()
            .map(|&w| vec![w])
            .collect(),
        _ => match arity(op) {
            1 => DIRECTED.iter().map(|&a| vec![a]).collect(),
            2 => DIRECTED
                .iter()
                .flat_map(|&a| DIRECTED.iter().map(move |&b| vec![a, b]))
                .collect(),
            _ => DIRECTED
                .iter()
                .flat_map(|&a| {
                    DIRECTED.iter().flat_map(move |&b| {
                        DIRECTED.iter().step_by(3).map(move |&c| vec![a, b, c])
                    })
                })
                .collect(),
        },
    }
}

/// Checks one op under one rounding mode on `n` random plus the directed
/// cases.
pub fn check_op(op: Op, rm: RoundingMode, n: u64, seed: u64) -> Summary {
    let mut s = Summary::default();
    for x in directed_inputs(op) {
        let (got, want) = run_case(op, rm, &x);
        s.record(op, rm, &x, got, want);
    }
    let mut rng = rng(seed ^ (rm.bits() as u64) << 32);
    for _ in 0..n {
        let x = random_inputs(op, &mut rng);
        let (got, want) = run_case(op, rm, &x);
        s.record(op, rm, &x, got, want);
    }
    s
}

/// Comparisons and min/max carry no rounding mode.
pub fn check_unrounded(n: u64, seed: u64) -> Summary {
    let mut s = Summary::default();
    let mut rng = rng(seed);
    let pairs = DIRECTED
        .iter()
        .flat_map(|&a| DIRECTED.iter().map(move |&b| (a, b)))
        .collect::<Vec<_>>();
    let rand_pairs = (0..n).map(|_| {
        let a = f32_pattern(&mut rng);
        let b = if rng.gen() { near(&mut rng, a) } else { f32_pattern(&mut rng) };
        (a, b)
    });
    for (a, b) in pairs.into_iter().chain(rand_pairs.collect::<Vec<_>>()) {
        for (k, kind) in [CmpKind::Eq, CmpKind::Lt, CmpKind::Le].into_iter().enumerate() {
            let (r, fl) = fp_cmp(Fp32Bits(a), Fp32Bits(b), kind);
            let (wr, wf) = o::compare(a, b, k as u32);
            s.record(Op::Add, RoundingMode::Rne, &[a, b, 100 + k as u32], (r as u32, fl.bits()), (wr as u32, wf as u32));
        }
        for max in [false, true] {
            let (v, fl) = if max {
                fp_max(Fp32Bits(a), Fp32Bits(b))
            } else {
                fp_min(Fp32Bits(a), Fp32Bits(b))
            };
            let (wv, wf) = o::min_max(a, b, max);
            s.record(Op::Add, RoundingMode::Rne, &[a, b, 200 + max as u32], (v.0, fl.bits()), (wv, wf as u32));
        }
    }
    s
}
