use std::cmp::Ordering;

use super::{PositFormat, PositValue, Precision};
use crate::fp32::{self, ExceptionFlags, Fp32Bits, RoundingMode};
use crate::unpacked::{RealClass, UnpackedReal};

/// Decodes a posit into sign, scale and significand.
///
/// The exponent size comes from the value's format at call time; when fewer
/// than `es` bits remain after the regime the missing low exponent bits read
/// as zero.
pub fn decode_posit(p: PositValue) -> UnpackedReal {
    let fmt = p.format();
    let n = fmt.nbits();
    let es = fmt.es as u32;
    if p.bits() == 0 {
        return UnpackedReal::zero(false);
    }
    if p.is_nar() {
        return UnpackedReal::NAR;
    }
    let sign = p.bits() & fmt.nar_bits() != 0;
    let mag = if sign { p.negate().bits() } else { p.bits() };

    // Left-align the body (everything after the sign bit) in 64 bits; the
    // vacated low bits are zero, which supplies the truncated exponent bits.
    let body = (mag as u64) << (64 - n + 1);
    let (run, k) = if body >> 63 == 1 {
        let run = body.leading_ones();
        (run, run as i32 - 1)
    } else {
        let run = body.leading_zeros();
        (run, -(run as i32))
    };
    let used = run + 1;
    let rest = if used >= 64 { 0 } else { body << used };
    let e = if es == 0 { 0 } else { (rest >> (64 - es)) as i32 };
    let frac = if es == 0 { rest } else { rest << es };

    UnpackedReal {
        class: RealClass::Finite,
        sign,
        scale: (k << es) + e,
        sig: (1u64 << 63) | (frac >> 1),
        sticky: false,
    }
}

/// Bit fields of a nonzero, non-NaR posit, read from the magnitude.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PositFields {
    pub sign: bool,
    /// Regime field width, including the terminating bit when present.
    pub regime_len: u32,
    pub k: i32,
    /// Exponent with any truncated low bits read as zero.
    pub exponent: u32,
    /// Exponent bits actually present in the pattern.
    pub exponent_len: u32,
    pub fraction: u64,
    pub fraction_len: u32,
}

pub fn posit_fields(p: PositValue) -> Option<PositFields> {
    if p.is_zero() || p.is_nar() {
        return None;
    }
    let fmt = p.format();
    let n = fmt.nbits();
    let es = fmt.es as u32;
    let sign = p.bits() & fmt.nar_bits() != 0;
    let mag = if sign { p.negate().bits() } else { p.bits() };
    let body = (mag as u64) << (64 - n + 1);
    let ones = body >> 63 == 1;
    let run = if ones { body.leading_ones() } else { body.leading_zeros() }.min(n - 1);
    let k = if ones { run as i32 - 1 } else { -(run as i32) };
    let regime_len = (run + 1).min(n - 1);
    let remaining = n - 1 - regime_len;
    let exponent_len = es.min(remaining);
    let fraction_len = remaining - exponent_len;
    let low = mag as u64 & ((1u64 << remaining) - 1);
    let present = low >> fraction_len;
    Some(PositFields {
        sign,
        regime_len,
        k,
        exponent: (present << (es - exponent_len)) as u32,
        exponent_len,
        fraction: low & ((1u64 << fraction_len) - 1),
        fraction_len,
    })
}

/// Encodes a value into `P(prec, es)`.
///
/// Finite values round to the nearest representable posit by value, ties to
/// the even pattern, and saturate at maxpos/minpos so that a nonzero input
/// never becomes zero or NaR. NaR and infinities map to NaR.
pub fn encode_posit(u: &UnpackedReal, prec: Precision, es: u8) -> PositValue {
    encode_with_exactness(u, PositFormat { prec, es }).0
}

/// Returns the encoded posit and whether the encoding was exact.
pub(crate) fn encode_with_exactness(u: &UnpackedReal, fmt: PositFormat) -> (PositValue, bool) {
    match u.class {
        RealClass::Zero => (fmt.zero(), true),
        RealClass::NaR | RealClass::Inf => (fmt.nar(), true),
        RealClass::Finite => {
            let (mag, exact) = encode_magnitude(u, fmt);
            let bits = if u.sign {
                mag.wrapping_neg() & fmt.prec.mask()
            } else {
                mag
            };
            (PositValue::from_low_bits(bits, fmt), exact)
        }
    }
}

/// Positive pattern for `|u|` plus an exactness bit.
fn encode_magnitude(u: &UnpackedReal, fmt: PositFormat) -> (u32, bool) {
    let n = fmt.nbits();
    let es = fmt.es as u32;
    let avail = n - 1;
    let max_k = n as i32 - 2;
    let k = u.scale >> es;
    let e = (u.scale & ((1 << es) - 1)) as u64;
    let frac = u.sig << 1; // drop the hidden bit
    let value_is_pow2 = frac == 0 && !u.sticky;

    if k >= max_k {
        let exact = k == max_k && e == 0 && value_is_pow2;
        return (fmt.maxpos_bits(), exact);
    }
    if k < -max_k {
        return (1, false);
    }

    let (regime, regime_len) = if k >= 0 {
        // k+1 ones then a terminating zero
        (((1u32 << (k + 1)) - 1) << 1, k as u32 + 2)
    } else {
        (1u32, (-k) as u32 + 1)
    };

    if regime_len + es <= avail {
        // The full exponent fits; rounding happens inside the fraction field
        // where the lattice is uniform, so bit-level round-to-nearest-even is
        // the same as nearest-by-value.
        let fb = avail - regime_len - es;
        let head = ((regime << es) | e as u32) << fb;
        let kept = if fb == 0 { 0 } else { (frac >> (64 - fb)) as u32 };
        let tail = if fb == 0 { frac } else { frac << fb };
        let guard = tail >> 63 == 1;
        let sticky = (tail << 1) != 0 || u.sticky;
        let mut mag = head | kept;
        if guard && (sticky || mag & 1 == 1) {
            mag += 1;
        }
        return (mag, !guard && !sticky);
    }

    // Exponent bits are cut off. Both neighbours are powers of two,
    // 2^lo and 2^(lo + gap), so compare against their arithmetic midpoint.
    let eb = avail - regime_len;
    let cut = es - eb;
    let low = (regime << eb) | (e >> cut) as u32;
    let lo_scale = u.scale & !((1i32 << cut) - 1);
    let gap = 1i32 << cut;
    let exact = u.scale == lo_scale && value_is_pow2;
    if u.scale < lo_scale + gap - 1 {
        return (low, exact);
    }
    // Here |u| lies in [2^(hi-1), 2^hi); the midpoint is
    // 2^(hi-1) * (1 + 2^-gap).
    let tshift = gap; // fraction bit index below the binary point
    let above = if tshift <= 64 {
        match frac.cmp(&(1u64 << (64 - tshift))) {
            Ordering::Greater => Some(true),
            Ordering::Less => Some(false),
            Ordering::Equal if u.sticky => Some(true),
            Ordering::Equal => None,
        }
    } else {
        // The midpoint sits below the significand's resolution.
        Some(frac != 0 || u.sticky)
    };
    let mag = match above {
        Some(true) => low + 1,
        Some(false) => low,
        None => {
            if low & 1 == 0 {
                low
            } else {
                low + 1
            }
        }
    };
    (mag, false)
}

/// P2F: posit to binary32 under `rm`.
///
/// Exact for every `P(8, es <= 4)` and `P(16, es <= 2)` value; larger
/// exponent sizes can exceed the binary32 range and follow IEEE overflow and
/// underflow rules. NaR becomes the canonical quiet NaN.
pub fn posit_to_fp32(p: PositValue, rm: RoundingMode) -> (Fp32Bits, ExceptionFlags) {
    fp32::pack_unpacked(&decode_posit(p), rm)
}

/// F2P: binary32 to posit. NaN and infinities become NaR, zeros become zero.
/// Raises NX when the posit rounds or saturates.
pub fn fp32_to_posit(f: Fp32Bits, prec: Precision, es: u8) -> (PositValue, ExceptionFlags) {
    let u = fp32::unpack(f);
    let (p, exact) = encode_with_exactness(&u, PositFormat { prec, es });
    let flags = if exact {
        ExceptionFlags::empty()
    } else {
        ExceptionFlags::NX
    };
    (p, flags)
}

/// Re-encodes a posit in another format; identity when the formats match.
pub fn posit_to_posit(p: PositValue, dst_prec: Precision, dst_es: u8) -> PositValue {
    if p.prec() == dst_prec && p.es() == dst_es {
        return p;
    }
    encode_posit(&decode_posit(p), dst_prec, dst_es)
}
