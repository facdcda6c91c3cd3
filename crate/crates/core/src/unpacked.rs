//! Format-neutral real value used as the exchange currency between the
//! posit codecs and the binary32 core.

use serde::{Deserialize, Serialize};

/// Position of the implied leading one inside [`UnpackedReal::sig`].
pub const SIG_HIDDEN_BIT: u32 = 63;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RealClass {
    Zero,
    /// Posit NaR or any IEEE NaN.
    NaR,
    Inf,
    Finite,
}

/// A sign/scale/significand triple.
///
/// For finite values the magnitude is `sig / 2^63 * 2^scale`, with bit 63 of
/// `sig` always set, so the implied significand lies in `[1, 2)`. `sticky`
/// records that the true magnitude is strictly greater than that, by less
/// than one unit of bit 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct UnpackedReal {
    pub class: RealClass,
    pub sign: bool,
    pub scale: i32,
    pub sig: u64,
    pub sticky: bool,
}

impl UnpackedReal {
    pub const NAR: UnpackedReal = UnpackedReal {
        class: RealClass::NaR,
        sign: false,
        scale: 0,
        sig: 0,
        sticky: false,
    };

    pub const fn zero(sign: bool) -> Self {
        UnpackedReal {
            class: RealClass::Zero,
            sign,
            scale: 0,
            sig: 0,
            sticky: false,
        }
    }

    pub const fn inf(sign: bool) -> Self {
        UnpackedReal {
            class: RealClass::Inf,
            sign,
            scale: 0,
            sig: 0,
            sticky: false,
        }
    }

    /// Builds a finite value from an arbitrary non-zero integer significand,
    /// `magnitude = mant * 2^exp`. Returns zero for `mant == 0`.
    pub fn from_parts(sign: bool, mant: u64, exp: i32) -> Self {
        if mant == 0 {
            return Self::zero(sign);
        }
        let lz = mant.leading_zeros();
        UnpackedReal {
            class: RealClass::Finite,
            sign,
            scale: exp + (63 - lz as i32),
            sig: mant << lz,
            sticky: false,
        }
    }

    /// Exact conversion from a host double.
    pub fn from_f64(x: f64) -> Self {
        if x.is_nan() {
            return Self::NAR;
        }
        let sign = x.is_sign_negative();
        if x.is_infinite() {
            return Self::inf(sign);
        }
        let bits = x.to_bits();
        let biased = ((bits >> 52) & 0x7ff) as i32;
        let frac = bits & ((1u64 << 52) - 1);
        if biased == 0 {
            Self::from_parts(sign, frac, -1074)
        } else {
            Self::from_parts(sign, frac | (1u64 << 52), biased - 1075)
        }
    }

    pub fn is_finite_nonzero(&self) -> bool {
        self.class == RealClass::Finite
    }

    /// Approximate host value; saturates to infinity beyond the f64 range.
    pub fn to_f64(&self) -> f64 {
        let mag = match self.class {
            RealClass::Zero => 0.0,
            RealClass::NaR => return f64::NAN,
            RealClass::Inf => f64::INFINITY,
            RealClass::Finite => {
                // 53 leading bits are enough; the value is only used for
                // analytics and oracles that tolerate the f64 rounding.
                let top = (self.sig >> 11) as f64;
                let e = self.scale - 52;
                if e < -1022 {
                    // Exact scaling first, then a single rounding step.
                    top * pow2(e + 256) * pow2(-256)
                } else {
                    top * pow2(e)
                }
            }
        };
        if self.sign {
            -mag
        } else {
            mag
        }
    }

    pub fn negate(mut self) -> Self {
        if self.class != RealClass::NaR {
            self.sign = !self.sign;
        }
        self
    }
}

/// `2^e` as a double, with graceful over/underflow.
pub(crate) fn pow2(e: i32) -> f64 {
    if e > 1023 {
        f64::INFINITY
    } else if e >= -1022 {
        f64::from_bits(((e + 1023) as u64) << 52)
    } else if e >= -1074 {
        f64::from_bits(1u64 << (e + 1074))
    } else {
        // Split so the product underflows with a single rounding.
        pow2(e + 600) * pow2(-600)
    }
}
