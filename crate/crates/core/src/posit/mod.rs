//! Posit codecs with runtime-selected precision and exponent size.
//!
//! Supported formats are `P(n, es)` with `n ∈ {8, 16}` and `es ∈ 0..=7`.
//! Decoding and encoding go through [`UnpackedReal`], which is also the
//! currency of the binary32 core, so posit <-> binary32 conversion is a
//! decode on one side followed by a rounding pack on the other.

mod accuracy;
mod codec;
mod enumerate;
pub mod verify;

pub use accuracy::{decimal_accuracy, decimal_accuracy_sweep, AccuracyFormat, DecimalAccuracy};
pub(crate) use codec::encode_with_exactness;
pub use codec::{
    decode_posit, encode_posit, fp32_to_posit, posit_fields, posit_to_fp32, posit_to_posit,
    PositFields,
};
pub use enumerate::{enumerate_posits, exact_value, Dyadic, PositEntry};

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest exponent size the 3-bit `pes` field can hold.
pub const MAX_ES: u8 = 7;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PositError {
    #[error("posit precision must be 8 or 16, got {0}")]
    BadPrecision(u32),
    #[error("posit exponent size must be in 0..=7, got {0}")]
    BadEs(u32),
    #[error("pattern {bits:#x} does not fit in {prec} bits")]
    BitsOutOfRange { bits: u32, prec: u32 },
    #[error("unrecognized posit format `{0}` (expected e.g. p8e0, p16e1)")]
    BadFormat(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Precision {
    P8,
    P16,
}

impl Precision {
    pub const fn bits(self) -> u32 {
        match self {
            Precision::P8 => 8,
            Precision::P16 => 16,
        }
    }

    pub const fn bytes(self) -> usize {
        (self.bits() / 8) as usize
    }

    pub const fn mask(self) -> u32 {
        (1u32 << self.bits()) - 1
    }

    pub fn from_bits(n: u32) -> Result<Self, PositError> {
        match n {
            8 => Ok(Precision::P8),
            16 => Ok(Precision::P16),
            other => Err(PositError::BadPrecision(other)),
        }
    }
}

/// A posit format `P(n, es)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PositFormat {
    pub prec: Precision,
    pub es: u8,
}

impl PositFormat {
    pub fn new(prec: Precision, es: u8) -> Result<Self, PositError> {
        if es > MAX_ES {
            return Err(PositError::BadEs(es as u32));
        }
        Ok(PositFormat { prec, es })
    }

    pub const fn nbits(self) -> u32 {
        self.prec.bits()
    }

    pub const fn nar_bits(self) -> u32 {
        1 << (self.nbits() - 1)
    }

    pub const fn maxpos_bits(self) -> u32 {
        self.nar_bits() - 1
    }

    /// Scale of maxpos: `(n - 2) * 2^es`. minpos is its negation.
    pub const fn max_scale(self) -> i32 {
        (self.nbits() as i32 - 2) << self.es
    }

    pub fn nar(self) -> PositValue {
        PositValue {
            bits: self.nar_bits(),
            fmt: self,
        }
    }

    pub fn zero(self) -> PositValue {
        PositValue { bits: 0, fmt: self }
    }

    pub fn value(self, bits: u32) -> Result<PositValue, PositError> {
        PositValue::new(bits, self.prec, self.es)
    }
}

impl fmt::Display for PositFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p{}e{}", self.nbits(), self.es)
    }
}

impl FromStr for PositFormat {
    type Err = PositError;

    /// Parses tokens of the form `p8e0` ... `p16e7`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || PositError::BadFormat(s.to_string());
        let rest = s.strip_prefix('p').ok_or_else(bad)?;
        let (n, es) = rest.split_once('e').ok_or_else(bad)?;
        let n: u32 = n.parse().map_err(|_| bad())?;
        let es: u32 = es.parse().map_err(|_| bad())?;
        if es > MAX_ES as u32 {
            return Err(PositError::BadEs(es));
        }
        PositFormat::new(Precision::from_bits(n)?, es as u8)
    }
}

/// An `n`-bit posit pattern tagged with its format.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PositValue {
    bits: u32,
    fmt: PositFormat,
}

impl PositValue {
    pub fn new(bits: u32, prec: Precision, es: u8) -> Result<Self, PositError> {
        let fmt = PositFormat::new(prec, es)?;
        if bits & !prec.mask() != 0 {
            return Err(PositError::BitsOutOfRange {
                bits,
                prec: prec.bits(),
            });
        }
        Ok(PositValue { bits, fmt })
    }

    /// Keeps the low `n` bits of `word`, as a register read does.
    pub fn from_low_bits(word: u32, fmt: PositFormat) -> Self {
        PositValue {
            bits: word & fmt.prec.mask(),
            fmt,
        }
    }

    pub const fn bits(self) -> u32 {
        self.bits
    }

    pub const fn format(self) -> PositFormat {
        self.fmt
    }

    pub const fn prec(self) -> Precision {
        self.fmt.prec
    }

    pub const fn es(self) -> u8 {
        self.fmt.es
    }

    pub fn is_nar(self) -> bool {
        self.bits == self.fmt.nar_bits()
    }

    pub fn is_zero(self) -> bool {
        self.bits == 0
    }

    /// Two's complement negation on `n` bits (fixes zero and NaR).
    pub fn negate(self) -> Self {
        PositValue {
            bits: self.bits.wrapping_neg() & self.fmt.prec.mask(),
            fmt: self.fmt,
        }
    }

    /// The pattern read as an `n`-bit two's complement integer; posit values
    /// are monotone in this ordering.
    pub fn as_signed(self) -> i32 {
        let shift = 32 - self.fmt.nbits();
        ((self.bits << shift) as i32) >> shift
    }
}
