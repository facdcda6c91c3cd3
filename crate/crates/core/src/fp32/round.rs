use super::{ExceptionFlags, Fp32Bits, FpResult, RoundingMode, CANONICAL_NAN};
use crate::unpacked::{RealClass, UnpackedReal};

const INF: u32 = 0x7F80_0000;
const MAX_FINITE: u32 = 0x7F7F_FFFF;

/// Unpacks a binary32 pattern. Subnormals come back normalized; any NaN is
/// reported as [`RealClass::NaR`].
pub fn unpack(f: Fp32Bits) -> UnpackedReal {
    let sign = f.sign();
    if f.is_nan() {
        return UnpackedReal::NAR;
    }
    if f.is_inf() {
        return UnpackedReal::inf(sign);
    }
    if f.is_zero() {
        return UnpackedReal::zero(sign);
    }
    let (mant, exp) = sig_exp(f);
    UnpackedReal::from_parts(sign, mant as u64, exp)
}

/// Integer significand and exponent with `|f| = mant * 2^exp`, for finite
/// nonzero `f`.
pub(super) fn sig_exp(f: Fp32Bits) -> (u32, i32) {
    let be = f.biased_exp();
    if be == 0 {
        (f.frac(), -149)
    } else {
        (f.frac() | 0x0080_0000, be as i32 - 150)
    }
}

/// Rounds `u` to binary32 under `rm`.
pub fn pack_unpacked(u: &UnpackedReal, rm: RoundingMode) -> FpResult {
    match u.class {
        RealClass::NaR => (Fp32Bits(CANONICAL_NAN), ExceptionFlags::empty()),
        RealClass::Inf => (Fp32Bits(INF | sign_bit(u.sign)), ExceptionFlags::empty()),
        RealClass::Zero => (Fp32Bits(sign_bit(u.sign)), ExceptionFlags::empty()),
        RealClass::Finite => {
            // scale is bounded well inside i32 for every producer here
            let sig = (u.sig >> 1) | (u.sig & 1) | u.sticky as u64;
            round_pack(u.sign, u.scale, sig, rm)
        }
    }
}

fn sign_bit(sign: bool) -> u32 {
    if sign {
        0x8000_0000
    } else {
        0
    }
}

/// Shifts right, OR-ing every discarded bit into bit 0.
pub(super) fn shr_jam64(x: u64, n: u32) -> u64 {
    if n == 0 {
        x
    } else if n >= 64 {
        (x != 0) as u64
    } else {
        (x >> n) | ((x & ((1u64 << n) - 1)) != 0) as u64
    }
}

pub(super) fn shr_jam128(x: u128, n: u32) -> u128 {
    if n == 0 {
        x
    } else if n >= 128 {
        (x != 0) as u128
    } else {
        (x >> n) | ((x & ((1u128 << n) - 1)) != 0) as u128
    }
}

/// Whether the discarded `rest` (out of `half * 2`) rounds the kept
/// magnitude (with low bit `lsb`) away from zero.
fn round_up(rm: RoundingMode, sign: bool, lsb: bool, rest: u64, half: u64) -> bool {
    if rest == 0 {
        return false;
    }
    match rm {
        RoundingMode::Rne => rest > half || (rest == half && lsb),
        RoundingMode::Rmm => rest >= half,
        RoundingMode::Rtz => false,
        RoundingMode::Rdn => sign,
        RoundingMode::Rup => !sign,
    }
}

/// Rounds a nonzero magnitude `sig * 2^(exp - 62)` to binary32.
///
/// `sig` must have bit 62 set (value in `[2^exp, 2^(exp+1))`); bit 0 may
/// carry a sticky bit jammed in by the caller.
pub(super) fn round_pack(sign: bool, exp: i32, sig: u64, rm: RoundingMode) -> FpResult {
    debug_assert!(sig >> 62 == 1, "unnormalized significand {sig:#x}");
    let mut flags = ExceptionFlags::empty();
    let sbit = sign_bit(sign);

    if exp > 127 {
        return overflow(sign, rm);
    }

    if exp >= -126 {
        // 24 kept bits, 39 discarded
        let rest = sig & ((1u64 << 39) - 1);
        let mut m = sig >> 39;
        if round_up(rm, sign, m & 1 == 1, rest, 1 << 38) {
            m += 1;
        }
        let mut e = exp;
        if m == 1 << 24 {
            m >>= 1;
            e += 1;
        }
        if e > 127 {
            return overflow(sign, rm);
        }
        if rest != 0 {
            flags |= ExceptionFlags::NX;
        }
        let bits = sbit | (((e + 127) as u32) << 23) | (m as u32 & 0x007F_FFFF);
        return (Fp32Bits(bits), flags);
    }

    // Subnormal range: the kept field sits at 2^-149 granularity.
    let drop = 39 + (-126 - exp) as u32;
    let (m, inexact) = if drop >= 64 {
        let up = round_up(rm, sign, false, 1, 2); // anything below half an ulp
        (up as u64, true)
    } else {
        let rest = sig & ((1u64 << drop) - 1);
        let mut m = sig >> drop;
        if round_up(rm, sign, m & 1 == 1, rest, 1 << (drop - 1)) {
            m += 1;
        }
        (m, rest != 0)
    };
    if inexact {
        flags |= ExceptionFlags::NX;
        // Tininess after rounding: would the value still be below 2^-126
        // with an unbounded exponent and 24-bit precision?
        let tiny = if exp == -127 {
            let rest = sig & ((1u64 << 39) - 1);
            let mut full = sig >> 39;
            if round_up(rm, sign, full & 1 == 1, rest, 1 << 38) {
                full += 1;
            }
            full < 1 << 24
        } else {
            true
        };
        if tiny {
            flags |= ExceptionFlags::UF;
        }
    }
    // m may have carried into the smallest normal, which the packing below
    // handles because exponent field 1 sits right above the fraction.
    (Fp32Bits(sbit | m as u32), flags)
}

fn overflow(sign: bool, rm: RoundingMode) -> FpResult {
    let to_inf = match rm {
        RoundingMode::Rne | RoundingMode::Rmm => true,
        RoundingMode::Rtz => false,
        RoundingMode::Rdn => sign,
        RoundingMode::Rup => !sign,
    };
    let mag = if to_inf { INF } else { MAX_FINITE };
    (
        Fp32Bits(mag | sign_bit(sign)),
        ExceptionFlags::OF | ExceptionFlags::NX,
    )
}

/// Normalizes a nonzero `mant * 2^exp` into the `round_pack` convention.
pub(super) fn pack_u64(sign: bool, mant: u64, exp: i32, rm: RoundingMode) -> FpResult {
    debug_assert!(mant != 0);
    let lz = mant.leading_zeros() as i32;
    // Put the leading one at bit 62.
    let (sig, e) = if lz >= 1 {
        (mant << (lz - 1), exp + 63 - lz)
    } else {
        (shr_jam64(mant, 1), exp + 63)
    };
    round_pack(sign, e, sig, rm)
}

/// As [`pack_u64`] for a 128-bit significand.
pub(super) fn pack_u128(sign: bool, mant: u128, exp: i32, rm: RoundingMode) -> FpResult {
    debug_assert!(mant != 0);
    let lz = mant.leading_zeros() as i32;
    let top = 127 - lz; // index of the leading one
    if top <= 62 {
        pack_u64(sign, mant as u64, exp, rm)
    } else {
        let shifted = shr_jam128(mant, (top - 62) as u32) as u64;
        round_pack(sign, exp + top, shifted, rm)
    }
}
