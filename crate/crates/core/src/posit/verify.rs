//! Exhaustive self-checks over every pattern of a posit format.

use serde::Serialize;
use thiserror::Error;

use super::{decode_posit, encode_posit, fp32_to_posit, posit_to_fp32, Dyadic, PositFormat, PositValue, Precision};
use crate::fp32::RoundingMode;
use crate::unpacked::{RealClass, UnpackedReal};

/// The codec under test; swapping a function lets a harness confirm that
/// the checks catch a broken codec.
#[derive(Clone, Copy)]
pub struct Codec {
    pub decode: fn(PositValue) -> UnpackedReal,
    pub encode: fn(&UnpackedReal, Precision, u8) -> PositValue,
}

impl Default for Codec {
    fn default() -> Self {
        Codec {
            decode: decode_posit,
            encode: encode_posit,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("{fmt}: round trip of {bits:#x} gave {got:#x}")]
    RoundTrip { fmt: PositFormat, bits: u32, got: u32 },
    #[error("{fmt}: values not increasing from {prev:#x} to {bits:#x}")]
    NotMonotone { fmt: PositFormat, prev: u32, bits: u32 },
    #[error("{fmt}: {bits:#x} decoded as a non-finite value")]
    NotFinite { fmt: PositFormat, bits: u32 },
    #[error("{fmt}: posit-to-fp32 of {bits:#x} is not exact")]
    P2fInexact { fmt: PositFormat, bits: u32 },
    #[error("{fmt}: fp32 round trip of {bits:#x} gave {got:#x}")]
    P2fRoundTrip { fmt: PositFormat, bits: u32, got: u32 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct VerifySummary {
    pub format: PositFormat,
    pub patterns: u64,
    /// Whether every pattern was also required to convert to fp32 exactly.
    pub p2f_exact_checked: bool,
}

/// Formats whose every value is exactly representable in binary32.
pub fn p2f_is_exact(fmt: PositFormat) -> bool {
    match fmt.prec {
        Precision::P8 => fmt.es <= 4,
        Precision::P16 => fmt.es <= 2,
    }
}

fn exact(u: &UnpackedReal) -> Option<Dyadic> {
    match u.class {
        RealClass::Zero => Some(Dyadic::ZERO),
        RealClass::Finite => Some(Dyadic::new(u.sign, u.sig, u.scale - 63)),
        _ => None,
    }
}

/// Round trip, two's-complement monotonicity and NaR handling for every
/// pattern, plus binary32 exactness where [`p2f_is_exact`] holds.
pub fn exhaustive_verify(fmt: PositFormat) -> Result<VerifySummary, VerifyError> {
    exhaustive_verify_with(fmt, &Codec::default())
}

pub fn exhaustive_verify_with(fmt: PositFormat, codec: &Codec) -> Result<VerifySummary, VerifyError> {
    let n = fmt.nbits();
    let check_p2f = p2f_is_exact(fmt);
    let mut prev: Option<(u32, Dyadic)> = None;
    for i in 1..(1u32 << n) {
        let bits = (i + fmt.nar_bits()) & fmt.prec.mask();
        let p = PositValue::from_low_bits(bits, fmt);
        let u = (codec.decode)(p);
        let got = (codec.encode)(&u, fmt.prec, fmt.es);
        if got != p {
            return Err(VerifyError::RoundTrip {
                fmt,
                bits,
                got: got.bits(),
            });
        }
        let v = exact(&u).ok_or(VerifyError::NotFinite { fmt, bits })?;
        if let Some((pb, pv)) = prev {
            if pv >= v {
                return Err(VerifyError::NotMonotone { fmt, prev: pb, bits });
            }
        }
        if check_p2f {
            let (x, flags) = posit_to_fp32(p, RoundingMode::Rne);
            if !flags.is_empty() {
                return Err(VerifyError::P2fInexact { fmt, bits });
            }
            let (q, _) = fp32_to_posit(x, fmt.prec, fmt.es);
            if q != p {
                return Err(VerifyError::P2fRoundTrip {
                    fmt,
                    bits,
                    got: q.bits(),
                });
            }
        }
        prev = Some((bits, v));
    }
    let nar = (codec.encode)(&(codec.decode)(fmt.nar()), fmt.prec, fmt.es);
    if nar != fmt.nar() {
        return Err(VerifyError::RoundTrip {
            fmt,
            bits: fmt.nar_bits(),
            got: nar.bits(),
        });
    }
    Ok(VerifySummary {
        format: fmt,
        patterns: 1 << n,
        p2f_exact_checked: check_p2f,
    })
}
