use super::{ExceptionFlags, Fp32Bits, FpResult, CANONICAL_NAN};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum CmpKind {
    Eq,
    Lt,
    Le,
}

/// Maps a non-NaN pattern onto an integer with the same ordering, with both
/// zeros mapping to the same key.
fn order_key(f: Fp32Bits) -> i64 {
    if f.is_zero() {
        0
    } else if f.sign() {
        -((f.0 & 0x7FFF_FFFF) as i64)
    } else {
        f.0 as i64
    }
}

/// `feq`/`flt`/`fle`. Comparisons involving NaN are false; `feq` signals
/// only for signaling NaNs, the ordered comparisons for any NaN.
pub fn fp_cmp(a: Fp32Bits, b: Fp32Bits, kind: CmpKind) -> (bool, ExceptionFlags) {
    if a.is_nan() || b.is_nan() {
        let signal = match kind {
            CmpKind::Eq => a.is_snan() || b.is_snan(),
            CmpKind::Lt | CmpKind::Le => true,
        };
        let flags = if signal {
            ExceptionFlags::NV
        } else {
            ExceptionFlags::empty()
        };
        return (false, flags);
    }
    let (ka, kb) = (order_key(a), order_key(b));
    let r = match kind {
        CmpKind::Eq => ka == kb,
        CmpKind::Lt => ka < kb,
        CmpKind::Le => ka <= kb,
    };
    (r, ExceptionFlags::empty())
}

fn min_max(a: Fp32Bits, b: Fp32Bits, want_max: bool) -> FpResult {
    let flags = if a.is_snan() || b.is_snan() {
        ExceptionFlags::NV
    } else {
        ExceptionFlags::empty()
    };
    let r = match (a.is_nan(), b.is_nan()) {
        (true, true) => Fp32Bits(CANONICAL_NAN),
        (true, false) => b,
        (false, true) => a,
        _ => {
            // -0 orders below +0 here, unlike fp_cmp.
            let ka = a.0 as i32 ^ ((a.0 as i32 >> 31) as u32 >> 1) as i32;
            let kb = b.0 as i32 ^ ((b.0 as i32 >> 31) as u32 >> 1) as i32;
            if (ka < kb) == want_max {
                b
            } else {
                a
            }
        }
    };
    (r, flags)
}

/// RISC-V `fmin.s`: a single NaN operand yields the other operand.
pub fn fp_min(a: Fp32Bits, b: Fp32Bits) -> FpResult {
    min_max(a, b, false)
}

/// RISC-V `fmax.s`.
pub fn fp_max(a: Fp32Bits, b: Fp32Bits) -> FpResult {
    min_max(a, b, true)
}

/// RISC-V `fclass.s` ten-bit mask.
pub fn fp_classify(a: Fp32Bits) -> u32 {
    let neg = a.sign();
    let bit = if a.is_inf() {
        if neg {
            0
        } else {
            7
        }
    } else if a.is_nan() {
        if a.is_snan() {
            8
        } else {
            9
        }
    } else if a.is_zero() {
        if neg {
            3
        } else {
            4
        }
    } else if a.is_subnormal() {
        if neg {
            2
        } else {
            5
        }
    } else if neg {
        1
    } else {
        6
    };
    1 << bit
}
