//! Exhaustive and oracle-driven posit codec checks.

use rand::Rng;
use unifpu::fp32::{ExceptionFlags, Fp32Bits, RoundingMode};
use unifpu::posit::{
    decode_posit, encode_posit, exact_value, fp32_to_posit, posit_to_fp32, PositFormat,
    PositValue, Precision,
};

use super::posit_oracle::{f64_to_rational, NearestF64, NearestRational};
use super::{f32_pattern, rng};

pub fn fmt(prec: Precision, es: u8) -> PositFormat {
    PositFormat::new(prec, es).unwrap()
}

/// The formats covered by the exhaustive invariants.
pub fn exhaustive_formats() -> Vec<PositFormat> {
    let mut v: Vec<_> = (0..=7).map(|es| fmt(Precision::P8, es)).collect();
    v.extend((0..=2).map(|es| fmt(Precision::P16, es)));
    v
}

/// Round-trip, monotonicity, negation symmetry and (where promised) P2F
/// exactness. Returns the first failure description.
pub fn exhaustive_check(f: PositFormat) -> Result<u64, String> {
    let n = f.nbits();
    let mut checked = 0u64;
    let mut prev: Option<(u32, unifpu::posit::Dyadic)> = None;
    let p2f_exact = match f.prec {
        Precision::P8 => f.es <= 4,
        Precision::P16 => f.es <= 2,
    };
    // Walk patterns in two's-complement order starting just above NaR.
    for i in 1..(1u32 << n) {
        let bits = (i + f.nar_bits()) & f.prec.mask();
        let p = PositValue::from_low_bits(bits, f);
        let u = decode_posit(p);
        let back = encode_posit(&u, f.prec, f.es);
        if back != p {
            return Err(format!("{f}: round trip {bits:#x} -> {:#x}", back.bits()));
        }
        let v = exact_value(p).unwrap();
        if let Some((pb, pv)) = prev {
            if pv >= v {
                return Err(format!("{f}: not increasing at {pb:#x} -> {bits:#x}"));
            }
        }
        let neg = exact_value(p.negate()).unwrap();
        if neg.mant != v.mant || neg.exp != v.exp || (!v.is_zero() && neg.neg == v.neg) {
            return Err(format!("{f}: negation asymmetry at {bits:#x}"));
        }
        if p2f_exact {
            let (x, flags) = posit_to_fp32(p, RoundingMode::Rne);
            if !flags.is_empty() {
                return Err(format!("{f}: P2F of {bits:#x} raised {flags:?}"));
            }
            let (q, flags) = fp32_to_posit(x, f.prec, f.es);
            if q != p || !flags.is_empty() {
                return Err(format!("{f}: P2F/F2P round trip {bits:#x} -> {:#x}", q.bits()));
            }
        }
        prev = Some((bits, v));
        checked += 1;
    }
    let nar = decode_posit(f.nar());
    if encode_posit(&nar, f.prec, f.es) != f.nar() {
        return Err(format!("{f}: NaR round trip"));
    }
    Ok(checked + 1)
}

/// F2P on random binary32 inputs and on every f32-representable posit
/// midpoint (and its f32 neighbours) against the f64 nearest oracle.
/// Returns (cases, mismatches, first mismatch).
pub fn f2p_nearest_check(f: PositFormat, n: u64, seed: u64) -> (u64, u64, Option<String>) {
    let oracle = NearestF64::new(f);
    let mut cases = 0;
    let mut bad = 0;
    let mut first = None;
    let mut check = |x: u32| {
        let xf = f32::from_bits(x);
        let (got, flags) = fp32_to_posit(Fp32Bits(x), f.prec, f.es);
        let want = if xf.is_nan() || xf.is_infinite() {
            f.nar_bits()
        } else if xf == 0.0 {
            0
        } else {
            oracle.nearest(xf as f64)
        };
        let exact = xf.is_nan()
            || xf.is_infinite()
            || xf == 0.0
            || decode_posit(got).to_f64() == xf as f64;
        let flags_ok = flags == if exact { ExceptionFlags::empty() } else { ExceptionFlags::NX };
        cases += 1;
        if got.bits() != want || !flags_ok {
            bad += 1;
            if first.is_none() {
                first = Some(format!(
                    "{f}: input {x:#010x} got {:#x} {flags:?} want {want:#x}",
                    got.bits()
                ));
            }
        }
    };
    for mid in oracle.midpoints() {
        let m32 = mid as f32;
        if m32 as f64 == mid {
            let b = m32.to_bits();
            for x in [b, b - 1, b + 1, b | 0x8000_0000, (b - 1) | 0x8000_0000, (b + 1) | 0x8000_0000] {
                check(x);
            }
        }
    }
    let mut r = rng(seed);
    for _ in 0..n {
        // Mix full-range patterns with values near the posit's dynamic range.
        let x = if r.gen_range(0..2) == 0 {
            f32_pattern(&mut r)
        } else {
            let scale = f.max_scale() + 2;
            let e = r.gen_range(-scale..=scale);
            let e = (e + 127).clamp(1, 254) as u32;
            ((r.gen::<u32>() & 1) << 31) | (e << 23) | (r.gen::<u32>() & 0x7F_FFFF)
        };
        check(x);
    }
    (cases, bad, first)
}

/// Exact-rational F2P check for wide exponent sizes.
pub fn f2p_rational_check(f: PositFormat, n: u64, seed: u64) -> Result<u64, String> {
    let oracle = NearestRational::new(f);
    let mut r = rng(seed);
    for _ in 0..n {
        let x = f32_pattern(&mut r);
        let xf = f32::from_bits(x);
        if !xf.is_finite() || xf == 0.0 {
            continue;
        }
        let got = fp32_to_posit(Fp32Bits(x), f.prec, f.es).0.bits();
        let want = oracle.nearest(&f64_to_rational(xf as f64));
        if got != want {
            return Err(format!("{f}: input {x:#010x} got {got:#x} want {want:#x}"));
        }
    }
    Ok(n)
}

/// Round-trip and monotonicity on sampled patterns of a format too large
/// to sweep in a unit test.
pub fn sampled_round_trip(f: PositFormat, n: u64, seed: u64) -> Result<(), String> {
    let mut r = rng(seed);
    for _ in 0..n {
        let a = r.gen::<u32>() & f.prec.mask();
        let p = PositValue::from_low_bits(a, f);
        if encode_posit(&decode_posit(p), f.prec, f.es) != p {
            return Err(format!("{f}: round trip {a:#x}"));
        }
        let next = PositValue::from_low_bits(a.wrapping_add(1), f);
        if p.is_nar() || next.is_nar() {
            continue;
        }
        if exact_value(p).unwrap() >= exact_value(next).unwrap() {
            return Err(format!("{f}: not increasing at {a:#x}"));
        }
    }
    Ok(())
}
