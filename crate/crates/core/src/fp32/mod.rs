//! Software IEEE-754 binary32 arithmetic with RISC-V semantics.
//!
//! Every operation is a pure function returning its result together with
//! the exception flags it raised. Rounding is done in integer arithmetic for
//! all five RISC-V rounding modes; the host FPU is never consulted. Invalid
//! operations produce the canonical quiet NaN `0x7FC00000`, and tininess is
//! detected after rounding.

mod arith;
mod compare;
mod convert;
mod round;

pub use arith::{fp_add, fp_div, fp_fma, fp_mul, fp_sqrt, fp_sub, FmaVariant};
pub use compare::{fp_classify, fp_cmp, fp_max, fp_min, CmpKind};
pub use convert::{fp_to_int, int_to_fp};
pub use round::{pack_unpacked, unpack};

use std::fmt;
use std::ops::{BitOr, BitOrAssign};

use serde::{Deserialize, Serialize};

pub const CANONICAL_NAN: u32 = 0x7FC0_0000;

const SIGN_MASK: u32 = 0x8000_0000;
const EXP_MASK: u32 = 0x7F80_0000;
const FRAC_MASK: u32 = 0x007F_FFFF;
const QUIET_BIT: u32 = 0x0040_0000;

/// A binary32 bit pattern.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct Fp32Bits(pub u32);

impl Fp32Bits {
    pub const NAN: Fp32Bits = Fp32Bits(CANONICAL_NAN);

    pub fn from_f32(x: f32) -> Self {
        Fp32Bits(x.to_bits())
    }

    pub fn to_f32(self) -> f32 {
        f32::from_bits(self.0)
    }

    pub fn sign(self) -> bool {
        self.0 & SIGN_MASK != 0
    }

    pub fn biased_exp(self) -> u32 {
        (self.0 & EXP_MASK) >> 23
    }

    pub fn frac(self) -> u32 {
        self.0 & FRAC_MASK
    }

    pub fn is_nan(self) -> bool {
        self.0 & EXP_MASK == EXP_MASK && self.frac() != 0
    }

    pub fn is_snan(self) -> bool {
        self.is_nan() && self.0 & QUIET_BIT == 0
    }

    pub fn is_inf(self) -> bool {
        self.0 & !SIGN_MASK == EXP_MASK
    }

    pub fn is_zero(self) -> bool {
        self.0 & !SIGN_MASK == 0
    }

    pub fn is_subnormal(self) -> bool {
        self.biased_exp() == 0 && self.frac() != 0
    }

    pub fn abs(self) -> Self {
        Fp32Bits(self.0 & !SIGN_MASK)
    }
}

impl std::ops::Neg for Fp32Bits {
    type Output = Fp32Bits;

    fn neg(self) -> Self {
        Fp32Bits(self.0 ^ SIGN_MASK)
    }
}

impl fmt::Debug for Fp32Bits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Fp32Bits({:#010x} = {:e})", self.0, self.to_f32())
    }
}

/// RISC-V rounding modes, numbered as in the `rm` field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RoundingMode {
    Rne = 0,
    Rtz = 1,
    Rdn = 2,
    Rup = 3,
    Rmm = 4,
}

impl RoundingMode {
    pub const ALL: [RoundingMode; 5] = [
        RoundingMode::Rne,
        RoundingMode::Rtz,
        RoundingMode::Rdn,
        RoundingMode::Rup,
        RoundingMode::Rmm,
    ];

    /// Decodes a static `rm` encoding. 5, 6 and 7 (dynamic) return `None`.
    pub fn from_bits(bits: u32) -> Option<Self> {
        match bits {
            0 => Some(RoundingMode::Rne),
            1 => Some(RoundingMode::Rtz),
            2 => Some(RoundingMode::Rdn),
            3 => Some(RoundingMode::Rup),
            4 => Some(RoundingMode::Rmm),
            _ => None,
        }
    }

    pub fn bits(self) -> u32 {
        self as u32
    }

    pub fn mnemonic(self) -> &'static str {
        match self {
            RoundingMode::Rne => "rne",
            RoundingMode::Rtz => "rtz",
            RoundingMode::Rdn => "rdn",
            RoundingMode::Rup => "rup",
            RoundingMode::Rmm => "rmm",
        }
    }
}

/// Sticky IEEE exception flags, laid out as the RISC-V `fflags` CSR.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct ExceptionFlags(u8);

impl ExceptionFlags {
    pub const NX: ExceptionFlags = ExceptionFlags(1 << 0);
    pub const UF: ExceptionFlags = ExceptionFlags(1 << 1);
    pub const OF: ExceptionFlags = ExceptionFlags(1 << 2);
    pub const DZ: ExceptionFlags = ExceptionFlags(1 << 3);
    pub const NV: ExceptionFlags = ExceptionFlags(1 << 4);

    pub const fn empty() -> Self {
        ExceptionFlags(0)
    }

    pub const fn from_bits_truncate(bits: u32) -> Self {
        ExceptionFlags((bits & 0x1f) as u8)
    }

    pub const fn bits(self) -> u32 {
        self.0 as u32
    }

    pub const fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub const fn contains(self, other: ExceptionFlags) -> bool {
        self.0 & other.0 == other.0
    }
}

impl BitOr for ExceptionFlags {
    type Output = ExceptionFlags;

    fn bitor(self, rhs: Self) -> Self {
        ExceptionFlags(self.0 | rhs.0)
    }
}

impl BitOrAssign for ExceptionFlags {
    fn bitor_assign(&mut self, rhs: Self) {
        self.0 |= rhs.0;
    }
}

impl fmt::Debug for ExceptionFlags {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = [(4, "NV"), (3, "DZ"), (2, "OF"), (1, "UF"), (0, "NX")];
        let set: Vec<&str> = names
            .iter()
            .filter(|(bit, _)| self.0 & (1 << bit) != 0)
            .map(|(_, n)| *n)
            .collect();
        if set.is_empty() {
            write!(f, "{{}}")
        } else {
            write!(f, "{{{}}}", set.join("|"))
        }
    }
}

/// Result of an arithmetic operation.
pub type FpResult = (Fp32Bits, ExceptionFlags);
