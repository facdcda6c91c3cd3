use super::round::{pack_u64, sig_exp};
use super::{ExceptionFlags, Fp32Bits, FpResult, RoundingMode};

/// `fcvt.w[u].s`: rounds to an integer under `rm` and saturates.
///
/// NaN and positive overflow give the maximum, negative overflow the
/// minimum; both raise NV without NX. Returns the raw register word.
pub fn fp_to_int(a: Fp32Bits, rm: RoundingMode, signed: bool) -> (u32, ExceptionFlags) {
    let (max, min): (i64, i64) = if signed {
        (i32::MAX as i64, i32::MIN as i64)
    } else {
        (u32::MAX as i64, 0)
    };
    let saturate = |neg: bool| {
        let v = if neg { min } else { max };
        (v as u32, ExceptionFlags::NV)
    };
    if a.is_nan() {
        return saturate(false);
    }
    if a.is_inf() {
        return saturate(a.sign());
    }
    if a.is_zero() {
        return (0, ExceptionFlags::empty());
    }
    let neg = a.sign();
    let (m, e) = sig_exp(a);
    // |a| = m * 2^e with m < 2^24.
    let (mag, inexact) = if e >= 0 {
        if e > 40 {
            return saturate(neg);
        }
        ((m as i64) << e, false)
    } else {
        let shift = (-e) as u32;
        let (int, rest, half) = if shift >= 32 {
            // m < 2^24 so the integer part is zero; keep the comparison
            // against one half exact.
            (0u64, m as u64, None)
        } else {
            let int = (m >> shift) as u64;
            let rest = (m & ((1u32 << shift) - 1)) as u64;
            (int, rest, Some(1u64 << (shift - 1)))
        };
        let up = if rest == 0 {
            false
        } else {
            let (gt_half, eq_half) = match half {
                Some(h) => (rest > h, rest == h),
                None => (false, false),
            };
            match rm {
                RoundingMode::Rne => gt_half || (eq_half && int & 1 == 1),
                RoundingMode::Rmm => gt_half || eq_half,
                RoundingMode::Rtz => false,
                RoundingMode::Rdn => neg,
                RoundingMode::Rup => !neg,
            }
        };
        ((int + up as u64) as i64, rest != 0)
    };
    let value = if neg { -mag } else { mag };
    if value > max || value < min {
        return saturate(neg);
    }
    let flags = if inexact {
        ExceptionFlags::NX
    } else {
        ExceptionFlags::empty()
    };
    (value as u32, flags)
}

/// `fcvt.s.w[u]`: converts the register word as a signed or unsigned integer.
pub fn int_to_fp(word: u32, rm: RoundingMode, signed: bool) -> FpResult {
    let (neg, mag) = if signed && (word as i32) < 0 {
        (true, (word as i32).unsigned_abs())
    } else {
        (false, word)
    };
    if mag == 0 {
        return (Fp32Bits(0), ExceptionFlags::empty());
    }
    pack_u64(neg, mag as u64, 0, rm)
}
