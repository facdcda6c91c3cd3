//! Brute-force nearest-posit references.
//!
//! `NearestF64` works for formats whose values and midpoints are exact f64
//! numbers (P8 up to es = 4 and P16 up to es = 2 or so); `NearestRational`
//! uses exact rationals for the wide-exponent formats.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use unifpu::posit::{enumerate_posits, Dyadic, PositFormat};

/// Sorted positive posits as (value, pattern).
pub struct NearestF64 {
    pos: Vec<(f64, u32)>,
    mask: u32,
}

impl NearestF64 {
    pub fn new(fmt: PositFormat) -> Self {
        let mut pos = Vec::new();
        for e in enumerate_posits(fmt) {
            let v = e.value.to_f64();
            if v > 0.0 {
                assert!(e.value.mant < 1 << 53, "value must be exact in f64");
                assert!(v.is_finite() && v >= f64::MIN_POSITIVE);
                pos.push((v, e.posit.bits()));
            }
        }
        assert!(pos.windows(2).all(|w| w[0].0 < w[1].0));
        for w in pos.windows(2) {
            let mid = (w[0].0 + w[1].0) / 2.0;
            assert!(mid > w[0].0 && mid < w[1].0, "midpoint not exact");
            assert_eq!(mid - w[0].0, w[1].0 - mid, "midpoint not exact");
        }
        NearestF64 {
            pos,
            mask: fmt.prec.mask(),
        }
    }

    /// Consecutive positive midpoints.
    pub fn midpoints(&self) -> Vec<f64> {
        self.pos.windows(2).map(|w| (w[0].0 + w[1].0) / 2.0).collect()
    }

    /// Nearest pattern for a finite nonzero `x`, ties to the even pattern,
    /// saturating at minpos/maxpos.
    pub fn nearest(&self, x: f64) -> u32 {
        let (_, bits) = self.nearest_entry(x);
        if x < 0.0 {
            bits.wrapping_neg() & self.mask
        } else {
            bits
        }
    }

    /// Magnitude of the nearest posit to a finite nonzero `x`.
    pub fn nearest_magnitude(&self, x: f64) -> f64 {
        self.nearest_entry(x).0
    }

    fn nearest_entry(&self, x: f64) -> (f64, u32) {
        assert!(x.is_finite() && x != 0.0);
        let m = x.abs();
        match self.pos.binary_search_by(|p| p.0.partial_cmp(&m).unwrap()) {
            Ok(i) => self.pos[i],
            Err(0) => self.pos[0],
            Err(i) if i == self.pos.len() => self.pos[i - 1],
            Err(i) => {
                let (lo, hi) = (self.pos[i - 1], self.pos[i]);
                let mid = (lo.0 + hi.0) / 2.0;
                if m < mid {
                    lo
                } else if m > mid {
                    hi
                } else if lo.1 & 1 == 0 {
                    lo
                } else {
                    hi
                }
            }
        }
    }
}

pub fn dyadic_to_rational(d: Dyadic) -> BigRational {
    let mut r = BigRational::from_integer(BigInt::from(d.mant));
    let two = BigRational::from_integer(BigInt::from(2));
    let p = num_traits::pow(two, d.exp.unsigned_abs() as usize);
    if d.exp >= 0 {
        r *= p;
    } else {
        r /= p;
    }
    if d.neg {
        -r
    } else {
        r
    }
}

pub fn f64_to_rational(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite input")
}

/// Exact-rational nearest oracle for any format.
pub struct NearestRational {
    pos: Vec<(BigRational, u32)>,
    mask: u32,
}

impl NearestRational {
    pub fn new(fmt: PositFormat) -> Self {
        let pos: Vec<_> = enumerate_posits(fmt)
            .into_iter()
            .filter(|e| !e.value.neg && !e.value.is_zero())
            .map(|e| (dyadic_to_rational(e.value), e.posit.bits()))
            .collect();
        NearestRational {
            pos,
            mask: fmt.prec.mask(),
        }
    }

    pub fn nearest(&self, x: &BigRational) -> u32 {
        assert!(!x.is_zero());
        let m = x.abs();
        let bits = match self.pos.binary_search_by(|p| p.0.cmp(&m)) {
            Ok(i) => self.pos[i].1,
            Err(0) => self.pos[0].1,
            Err(i) if i == self.pos.len() => self.pos[i - 1].1,
            Err(i) => {
                let (lo, hi) = (&self.pos[i - 1], &self.pos[i]);
                let two = BigRational::one() + BigRational::one();
                let mid = (&lo.0 + &hi.0) / two;
                match m.cmp(&mid) {
                    std::cmp::Ordering::Less => lo.1,
                    std::cmp::Ordering::Greater => hi.1,
                    std::cmp::Ordering::Equal if lo.1 & 1 == 0 => lo.1,
                    std::cmp::Ordering::Equal => hi.1,
                }
            }
        };
        if x.is_negative() {
            bits.wrapping_neg() & self.mask
        } else {
            bits
        }
    }
}
