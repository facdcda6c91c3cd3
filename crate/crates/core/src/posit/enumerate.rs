use std::cmp::Ordering;
use std::fmt;

use super::{decode_posit, PositFormat, PositValue};
use crate::unpacked::{pow2, RealClass};

/// An exact dyadic rational `±mant * 2^exp`.
///
/// Every posit value (and every binary32 value) is one of these, so this is
/// the exact-value currency of the enumeration oracle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Dyadic {
    pub neg: bool,
    pub mant: u64,
    pub exp: i32,
}

impl Dyadic {
    pub const ZERO: Dyadic = Dyadic {
        neg: false,
        mant: 0,
        exp: 0,
    };

    /// Canonical form: odd mantissa (or zero with exponent 0).
    pub fn new(neg: bool, mant: u64, exp: i32) -> Self {
        if mant == 0 {
            return Dyadic::ZERO;
        }
        let tz = mant.trailing_zeros();
        Dyadic {
            neg,
            mant: mant >> tz,
            exp: exp + tz as i32,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.mant == 0
    }

    /// Binary exponent of the leading bit; meaningless for zero.
    pub fn scale(&self) -> i32 {
        self.exp + 63 - self.mant.leading_zeros() as i32
    }

    pub fn to_f64(&self) -> f64 {
        let mag = self.mant as f64 * pow2(self.exp);
        if self.neg {
            -mag
        } else {
            mag
        }
    }

    fn cmp_magnitude(&self, other: &Self) -> Ordering {
        match (self.is_zero(), other.is_zero()) {
            (true, true) => return Ordering::Equal,
            (true, false) => return Ordering::Less,
            (false, true) => return Ordering::Greater,
            _ => {}
        }
        self.scale().cmp(&other.scale()).then_with(|| {
            let a = self.mant << self.mant.leading_zeros();
            let b = other.mant << other.mant.leading_zeros();
            a.cmp(&b)
        })
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let sa = self.neg && !self.is_zero();
        let sb = other.neg && !other.is_zero();
        match (sa, sb) {
            (false, true) => Ordering::Greater,
            (true, false) => Ordering::Less,
            (false, false) => self.cmp_magnitude(other),
            (true, true) => other.cmp_magnitude(self),
        }
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.neg && !self.is_zero() { "-" } else { "" };
        let width = 64 - self.mant.leading_zeros() as i32;
        if self.exp >= 0 && width + self.exp <= 127 {
            write!(f, "{sign}{}", (self.mant as u128) << self.exp)
        } else if self.exp < 0 {
            write!(f, "{sign}{}/2^{}", self.mant, -self.exp)
        } else {
            write!(f, "{sign}{}*2^{}", self.mant, self.exp)
        }
    }
}

/// One finite posit with its exact value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PositEntry {
    pub posit: PositValue,
    pub value: Dyadic,
}

/// Exact value of a finite posit; `None` for NaR.
pub fn exact_value(p: PositValue) -> Option<Dyadic> {
    let u = decode_posit(p);
    match u.class {
        RealClass::Zero => Some(Dyadic::ZERO),
        RealClass::Finite => Some(Dyadic::new(u.sign, u.sig, u.scale - 63)),
        RealClass::NaR | RealClass::Inf => None,
    }
}

/// Every non-NaR pattern of `fmt`, ordered as `n`-bit two's complement
/// integers (most negative first). The single NaR pattern is
/// `fmt.nar()`, so the list has `2^n - 1` entries.
pub fn enumerate_posits(fmt: PositFormat) -> Vec<PositEntry> {
    let n = fmt.nbits();
    let nar = fmt.nar_bits();
    (1..(1u32 << n))
        .map(|i| (i + nar) & fmt.prec.mask())
        .map(|bits| {
            let posit = PositValue::from_low_bits(bits, fmt);
            let value = exact_value(posit).expect("NaR excluded");
            PositEntry { posit, value }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::posit::Precision;

    #[test]
    fn dyadic_ordering() {
        let a = Dyadic::new(false, 3, -1); // 1.5
        let b = Dyadic::new(false, 1, 1); // 2
        let c = Dyadic::new(true, 1, 10);
        assert!(a < b);
        assert!(c < Dyadic::ZERO);
        assert!(Dyadic::new(true, 1, 0) > Dyadic::new(true, 3, 0));
        assert_eq!(Dyadic::new(false, 4, 0), Dyadic::new(false, 1, 2));
        assert_eq!(a.to_string(), "3/2^1");
    }

    #[test]
    fn p8_enumeration() {
        let fmt = PositFormat::new(Precision::P8, 0).unwrap();
        let all = enumerate_posits(fmt);
        assert_eq!(all.len() + 1, 256);
        assert_eq!(all[0].posit.bits(), 0x81);
        assert_eq!(all.last().unwrap().posit.bits(), 0x7F);
        let minpos = all.iter().find(|e| e.posit.bits() == 0x01).unwrap();
        assert_eq!(minpos.value, Dyadic::new(false, 1, -6));
        assert!(all.windows(2).all(|w| w[0].value < w[1].value));
    }

    #[test]
    fn p16e2_maxpos() {
        let fmt = PositFormat::new(Precision::P16, 2).unwrap();
        let all = enumerate_posits(fmt);
        let top = all.last().unwrap();
        assert_eq!(top.posit.bits(), 0x7FFF);
        assert_eq!(top.value, Dyadic::new(false, 1, 56));
    }
}
