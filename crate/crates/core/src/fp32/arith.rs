use super::round::{pack_u128, pack_u64, shr_jam128, sig_exp};
use super::{ExceptionFlags, Fp32Bits, FpResult, RoundingMode, CANONICAL_NAN};

fn nan_result(a: Fp32Bits, b: Fp32Bits) -> FpResult {
    let flags = if a.is_snan() || b.is_snan() {
        ExceptionFlags::NV
    } else {
        ExceptionFlags::empty()
    };
    (Fp32Bits(CANONICAL_NAN), flags)
}

fn invalid() -> FpResult {
    (Fp32Bits(CANONICAL_NAN), ExceptionFlags::NV)
}

fn exact(bits: u32) -> FpResult {
    (Fp32Bits(bits), ExceptionFlags::empty())
}

fn zero_sum_sign(rm: RoundingMode) -> u32 {
    if rm == RoundingMode::Rdn {
        0x8000_0000
    } else {
        0
    }
}

pub fn fp_add(a: Fp32Bits, b: Fp32Bits, rm: RoundingMode) -> FpResult {
    add_signed(a, b, false, rm)
}

pub fn fp_sub(a: Fp32Bits, b: Fp32Bits, rm: RoundingMode) -> FpResult {
    add_signed(a, b, true, rm)
}

fn add_signed(a: Fp32Bits, b: Fp32Bits, negate_b: bool, rm: RoundingMode) -> FpResult {
    if a.is_nan() || b.is_nan() {
        return nan_result(a, b);
    }
    let b = if negate_b { -b } else { b };
    match (a.is_inf(), b.is_inf()) {
        (true, true) if a.sign() != b.sign() => return invalid(),
        (true, _) => return exact(a.0),
        (_, true) => return exact(b.0),
        _ => {}
    }
    if a.is_zero() && b.is_zero() {
        let bits = if a.sign() == b.sign() {
            a.0
        } else {
            zero_sum_sign(rm)
        };
        return exact(bits);
    }
    if a.is_zero() {
        return exact(b.0);
    }
    if b.is_zero() {
        return exact(a.0);
    }
    // Both finite and nonzero. Give the operand with the larger exponent
    // 36 guard bits and jam the other one into that window.
    let (ma, ea) = sig_exp(a);
    let (mb, eb) = sig_exp(b);
    let (hi_m, hi_e, hi_s, lo_m, lo_e, lo_s) = if ea >= eb {
        (ma, ea, a.sign(), mb, eb, b.sign())
    } else {
        (mb, eb, b.sign(), ma, ea, a.sign())
    };
    let base = hi_e - 36;
    let hi = (hi_m as u128) << 36;
    let lo = shr_jam128((lo_m as u128) << 36, (hi_e - lo_e) as u32);
    let (sum, sign) = if hi_s == lo_s {
        (hi + lo, hi_s)
    } else if hi >= lo {
        (hi - lo, hi_s)
    } else {
        (lo - hi, lo_s)
    };
    if sum == 0 {
        return exact(zero_sum_sign(rm));
    }
    pack_u128(sign, sum, base, rm)
}

pub fn fp_mul(a: Fp32Bits, b: Fp32Bits, rm: RoundingMode) -> FpResult {
    if a.is_nan() || b.is_nan() {
        return nan_result(a, b);
    }
    let sign = a.sign() != b.sign();
    let sbit = if sign { 0x8000_0000 } else { 0 };
    if a.is_inf() || b.is_inf() {
        if a.is_zero() || b.is_zero() {
            return invalid();
        }
        return exact(sbit | 0x7F80_0000);
    }
    if a.is_zero() || b.is_zero() {
        return exact(sbit);
    }
    let (ma, ea) = sig_exp(a);
    let (mb, eb) = sig_exp(b);
    pack_u64(sign, ma as u64 * mb as u64, ea + eb, rm)
}

pub fn fp_div(a: Fp32Bits, b: Fp32Bits, rm: RoundingMode) -> FpResult {
    if a.is_nan() || b.is_nan() {
        return nan_result(a, b);
    }
    let sign = a.sign() != b.sign();
    let sbit = if sign { 0x8000_0000 } else { 0 };
    match (a.is_inf(), b.is_inf()) {
        (true, true) => return invalid(),
        (true, false) => return exact(sbit | 0x7F80_0000),
        (false, true) => return exact(sbit),
        _ => {}
    }
    if b.is_zero() {
        if a.is_zero() {
            return invalid();
        }
        return (Fp32Bits(sbit | 0x7F80_0000), ExceptionFlags::DZ);
    }
    if a.is_zero() {
        return exact(sbit);
    }
    let (ma, ea) = sig_exp(a);
    let (mb, eb) = sig_exp(b);
    // Normalize both to 24-bit significands so the quotient keeps at least
    // 40 bits, then jam the remainder.
    let (ma, ea) = normalize24(ma, ea);
    let (mb, eb) = normalize24(mb, eb);
    let num = (ma as u64) << 40;
    let q = num / mb as u64;
    let r = num % mb as u64;
    let q = (q << 1) | (r != 0) as u64;
    pack_u64(sign, q, ea - eb - 41, rm)
}

fn normalize24(m: u32, e: i32) -> (u32, i32) {
    let shift = m.leading_zeros() as i32 - 8;
    (m << shift, e - shift)
}

pub fn fp_sqrt(a: Fp32Bits, rm: RoundingMode) -> FpResult {
    if a.is_nan() {
        return nan_result(a, a);
    }
    if a.is_zero() {
        return exact(a.0);
    }
    if a.sign() {
        return invalid();
    }
    if a.is_inf() {
        return exact(a.0);
    }
    let (m, e) = sig_exp(a);
    let (m, e) = normalize24(m, e);
    // Make the exponent even, then take an integer root with plenty of bits.
    let (m, e) = if e & 1 != 0 {
        ((m as u128) << 1, e - 1)
    } else {
        (m as u128, e)
    };
    let x = m << 80;
    let root = x.isqrt();
    let inexact = root * root != x;
    let root = ((root as u64) << 1) | inexact as u64;
    pack_u64(false, root, (e - 80) / 2 - 1, rm)
}

/// The four RISC-V fused multiply-add forms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum FmaVariant {
    /// `a*b + c`
    Madd,
    /// `a*b - c`
    Msub,
    /// `-(a*b) + c`
    Nmsub,
    /// `-(a*b) - c`
    Nmadd,
}

/// Fused multiply-add with a single rounding.
pub fn fp_fma(
    a: Fp32Bits,
    b: Fp32Bits,
    c: Fp32Bits,
    rm: RoundingMode,
    variant: FmaVariant,
) -> FpResult {
    let (neg_prod, neg_c) = match variant {
        FmaVariant::Madd => (false, false),
        FmaVariant::Msub => (false, true),
        FmaVariant::Nmsub => (true, false),
        FmaVariant::Nmadd => (true, true),
    };
    // inf * 0 is invalid even when the addend is a quiet NaN.
    let inf_times_zero = (a.is_inf() && b.is_zero()) || (a.is_zero() && b.is_inf());
    if a.is_nan() || b.is_nan() || c.is_nan() {
        let snan = a.is_snan() || b.is_snan() || c.is_snan();
        let flags = if snan || inf_times_zero {
            ExceptionFlags::NV
        } else {
            ExceptionFlags::empty()
        };
        return (Fp32Bits(CANONICAL_NAN), flags);
    }
    if inf_times_zero {
        return invalid();
    }
    let c = if neg_c { -c } else { c };
    let prod_sign = (a.sign() != b.sign()) != neg_prod;

    if a.is_inf() || b.is_inf() {
        if c.is_inf() && c.sign() != prod_sign {
            return invalid();
        }
        return exact(if prod_sign { 0xFF80_0000 } else { 0x7F80_0000 });
    }
    if c.is_inf() {
        return exact(c.0);
    }
    if a.is_zero() || b.is_zero() {
        if c.is_zero() {
            let bits = if prod_sign == c.sign() {
                c.0
            } else {
                zero_sum_sign(rm)
            };
            return exact(bits);
        }
        return exact(c.0);
    }

    let (ma, ea) = sig_exp(a);
    let (mb, eb) = sig_exp(b);
    let pm = ma as u128 * mb as u128;
    let pe = ea + eb;
    if c.is_zero() {
        return pack_u128(prod_sign, pm, pe, rm);
    }
    let (mc, ec) = sig_exp(c);
    // Left-align both terms so their leading ones sit at bit 125, then jam
    // the smaller one into place.
    let p_top = 127 - pm.leading_zeros() as i32;
    let c_top = 31 - mc.leading_zeros() as i32;
    let p_lead = pe + p_top;
    let c_lead = ec + c_top;
    let pv = pm << (125 - p_top);
    let cv = (mc as u128) << (125 - c_top);
    let (hi, hi_lead, hi_s, lo, lo_lead, lo_s) = if p_lead >= c_lead {
        (pv, p_lead, prod_sign, cv, c_lead, c.sign())
    } else {
        (cv, c_lead, c.sign(), pv, p_lead, prod_sign)
    };
    let lo = shr_jam128(lo, (hi_lead - lo_lead) as u32);
    let (sum, sign) = if hi_s == lo_s {
        (hi + lo, hi_s)
    } else if hi >= lo {
        (hi - lo, hi_s)
    } else {
        (lo - hi, lo_s)
    };
    if sum == 0 {
        return exact(zero_sum_sign(rm));
    }
    pack_u128(sign, sum, hi_lead - 125, rm)
}

#[cfg(test)]
mod tests {
    use super::*;

    const RNE: RoundingMode = RoundingMode::Rne;

    fn f(x: f32) -> Fp32Bits {
        Fp32Bits::from_f32(x)
    }

    #[test]
    fn add_basics() {
        assert_eq!(fp_add(f(1.0), f(1.0), RNE), (f(2.0), ExceptionFlags::empty()));
        let r = fp_add(f(1.0), f(2f32.powi(-24)), RNE);
        assert_eq!(r, (f(1.0), ExceptionFlags::NX));
        let r = fp_add(f(1.0), f(-1.0), RoundingMode::Rdn);
        assert_eq!(r.0 .0, 0x8000_0000);
        assert_eq!(fp_sub(f(1.0), f(1.0), RNE).0 .0, 0);
        let r = fp_add(f(f32::INFINITY), f(f32::NEG_INFINITY), RNE);
        assert_eq!(r, (Fp32Bits::NAN, ExceptionFlags::NV));
        assert_eq!(fp_add(f(-0.0), f(-0.0), RNE).0 .0, 0x8000_0000);
    }

    #[test]
    fn add_far_apart_and_cancellation() {
        let r = fp_add(f(1e30), f(1e-30), RoundingMode::Rup);
        assert_eq!(r.0 .0, f(1e30).0 + 1);
        let a = f(1.0 + 2f32.powi(-23));
        assert_eq!(fp_sub(a, f(1.0), RNE).0, f(2f32.powi(-23)));
        // subnormal difference
        let r = fp_sub(Fp32Bits(0x0080_0001), Fp32Bits(0x0080_0000), RNE);
        assert_eq!(r, (Fp32Bits(1), ExceptionFlags::empty()));
    }

    #[test]
    fn mul_div_sqrt() {
        let r = fp_mul(f(f32::INFINITY), f(0.0), RNE);
        assert_eq!(r, (Fp32Bits::NAN, ExceptionFlags::NV));
        assert_eq!(fp_mul(f(1.5), f(-2.0), RNE).0, f(-3.0));
        assert_eq!(fp_div(f(1.0), f(3.0), RNE).0, f(1.0 / 3.0));
        assert_eq!(fp_div(f(1.0), f(0.0), RNE), (f(f32::INFINITY), ExceptionFlags::DZ));
        assert_eq!(fp_div(f(0.0), f(0.0), RNE).1, ExceptionFlags::NV);
        assert_eq!(fp_sqrt(f(2.25), RNE), (f(1.5), ExceptionFlags::empty()));
        assert_eq!(fp_sqrt(f(2.0), RNE).0, f(2f32.sqrt()));
        assert_eq!(fp_sqrt(f(-0.0), RNE).0 .0, 0x8000_0000);
        assert_eq!(fp_sqrt(f(-1.0), RNE).1, ExceptionFlags::NV);
        assert_eq!(fp_sqrt(Fp32Bits(1), RNE).0, f((2f64.powi(-149)).sqrt() as f32));
    }

    #[test]
    fn fma_single_rounding() {
        assert_eq!(fp_fma(f(1.5), f(2.0), f(-3.0), RNE, FmaVariant::Madd).0 .0, 0);
        let nan = fp_fma(Fp32Bits::NAN, f(1.0), f(1.0), RNE, FmaVariant::Madd);
        assert_eq!(nan, (Fp32Bits::NAN, ExceptionFlags::empty()));
        let r = fp_fma(f(f32::INFINITY), f(0.0), Fp32Bits::NAN, RNE, FmaVariant::Madd);
        assert_eq!(r.1, ExceptionFlags::NV);
        // (1 + 2^-23)^2 - (1 + 2^-22) = 2^-46 exactly; the unfused route
        // loses it to rounding of the product.
        let x = f(1.0 + 2f32.powi(-23));
        let c = f(-(1.0 + 2f32.powi(-22)));
        let fused = fp_fma(x, x, c, RNE, FmaVariant::Madd).0;
        let (prod, _) = fp_mul(x, x, RNE);
        let unfused = fp_add(prod, c, RNE).0;
        assert_eq!(fused, f(2f32.powi(-46)));
        assert_eq!(unfused.0, 0);
    }

    #[test]
    fn fma_variants() {
        let (a, b, c) = (f(2.0), f(3.0), f(1.0));
        assert_eq!(fp_fma(a, b, c, RNE, FmaVariant::Madd).0, f(7.0));
        assert_eq!(fp_fma(a, b, c, RNE, FmaVariant::Msub).0, f(5.0));
        assert_eq!(fp_fma(a, b, c, RNE, FmaVariant::Nmsub).0, f(-5.0));
        assert_eq!(fp_fma(a, b, c, RNE, FmaVariant::Nmadd).0, f(-7.0));
    }
}
