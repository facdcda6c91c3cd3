//! Decimal accuracy analytics: how many correct decimal digits a format
//! keeps when a real sample is replaced by its nearest representable value.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{decode_posit, encode_posit, PositFormat};
use crate::unpacked::UnpackedReal;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AccuracyFormat {
    Posit(PositFormat),
    Binary16,
    Binary32,
}

impl AccuracyFormat {
    /// Nearest representable value (round to nearest, ties to even).
    /// Out-of-range binary formats produce 0 or infinity.
    pub fn nearest(self, x: f64) -> f64 {
        match self {
            AccuracyFormat::Posit(fmt) => {
                let p = encode_posit(&UnpackedReal::from_f64(x), fmt.prec, fmt.es);
                decode_posit(p).to_f64()
            }
            AccuracyFormat::Binary16 => half::f16::from_f64(x).to_f64(),
            AccuracyFormat::Binary32 => x as f32 as f64,
        }
    }
}

impl fmt::Display for AccuracyFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AccuracyFormat::Posit(p) => write!(f, "{p}"),
            AccuracyFormat::Binary16 => write!(f, "fp16"),
            AccuracyFormat::Binary32 => write!(f, "fp32"),
        }
    }
}

impl FromStr for AccuracyFormat {
    type Err = super::PositError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "fp16" => Ok(AccuracyFormat::Binary16),
            "fp32" => Ok(AccuracyFormat::Binary32),
            other => other.parse().map(AccuracyFormat::Posit),
        }
    }
}

/// One sample of a sweep. `accuracy` is `+inf` when the sample is exactly
/// representable and `-inf` when the format flushes it to zero or infinity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecimalAccuracy {
    pub x: f64,
    pub format: AccuracyFormat,
    pub nearest: f64,
    pub accuracy: f64,
}

impl DecimalAccuracy {
    pub fn is_exact(&self) -> bool {
        self.accuracy == f64::INFINITY
    }
}

/// `log10(1 / |log10(nearest / x)|)` for a positive sample `x`.
pub fn decimal_accuracy(x: f64, nearest: f64) -> f64 {
    if nearest == x {
        return f64::INFINITY;
    }
    if nearest == 0.0 || nearest.is_infinite() {
        return f64::NEG_INFINITY;
    }
    // log10(nearest/x) via ln_1p keeps precision when the ratio is near 1.
    let rel = (nearest - x) / x;
    let err = (rel.ln_1p() / std::f64::consts::LN_10).abs();
    -err.log10()
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SweepError {
    #[error("sweep range must satisfy 0 < x_min < x_max, got [{0}, {1}]")]
    BadRange(f64, f64),
    #[error("sweep needs at least 2 samples, got {0}")]
    TooFewSamples(usize),
}

/// Samples `[x_min, x_max]` on a log-uniform grid and reports the decimal
/// accuracy of `format` at each point.
pub fn decimal_accuracy_sweep(
    format: AccuracyFormat,
    x_min: f64,
    x_max: f64,
    samples: usize,
) -> Result<Vec<DecimalAccuracy>, SweepError> {
    if !(x_min > 0.0 && x_max > x_min && x_max.is_finite()) {
        return Err(SweepError::BadRange(x_min, x_max));
    }
    if samples < 2 {
        return Err(SweepError::TooFewSamples(samples));
    }
    let (lo, hi) = (x_min.ln(), x_max.ln());
    let step = (hi - lo) / (samples - 1) as f64;
    Ok((0..samples)
        .map(|i| {
            let x = if i == samples - 1 {
                x_max
            } else if i == 0 {
                x_min
            } else {
                (lo + step * i as f64).exp()
            };
            let nearest = format.nearest(x);
            DecimalAccuracy {
                x,
                format,
                nearest,
                accuracy: decimal_accuracy(x, nearest),
            }
        })
        .collect())
}
