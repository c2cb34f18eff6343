//! Quantizers mapping normalized residuals to bits.
//!
//! The SHA-512 quantizer only whitens: each 64-byte block is a deterministic
//! function of one Gray byte and its index, so the output carries no more
//! min-entropy than the Gray bytes it was derived from. Byte-level Shannon
//! entropy measured on its output will look close to 8 bits/byte regardless.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha512};

use crate::bitstream::BitStream;
use crate::error::{Error, Result};
use crate::residual::NormalizedSeries;

pub const DEFAULT_THRESHOLD: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "snake_case")]
pub enum QuantizerSpec {
    /// One bit per value: 1 iff `value >= tau`.
    Threshold { tau: f64 },
    /// Eight bits per value.
    Gray8,
    /// 512 bits per value: SHA-512 of the Gray byte and the value's index.
    Sha512,
}

impl Default for QuantizerSpec {
    fn default() -> Self {
        QuantizerSpec::Gray8
    }
}

impl QuantizerSpec {
    pub fn validate(&self) -> Result<()> {
        match *self {
            QuantizerSpec::Threshold { tau } if !(tau > 0.0 && tau < 1.0) => Err(
                Error::BadQuantizer(format!("threshold must lie in (0, 1), got {tau}")),
            ),
            _ => Ok(()),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            QuantizerSpec::Threshold { .. } => "threshold",
            QuantizerSpec::Gray8 => "gray8",
            QuantizerSpec::Sha512 => "sha512",
        }
    }

    pub fn bits_per_value(&self) -> usize {
        match self {
            QuantizerSpec::Threshold { .. } => 1,
            QuantizerSpec::Gray8 => 8,
            QuantizerSpec::Sha512 => 512,
        }
    }
}

pub fn quantize(n: &NormalizedSeries, spec: &QuantizerSpec) -> Result<BitStream> {
    spec.validate()?;
    match *spec {
        QuantizerSpec::Threshold { tau } => Ok(quantize_threshold(n, tau)),
        QuantizerSpec::Gray8 => quantize_gray(n),
        QuantizerSpec::Sha512 => quantize_sha512(n),
    }
}

pub fn quantize_threshold(n: &NormalizedSeries, tau: f64) -> BitStream {
    n.values().iter().map(|&v| v >= tau).collect()
}

/// Reflected binary code of `floor(v * 255)`.
pub fn gray8(v: f64) -> Result<u8> {
    if !(0.0..=1.0).contains(&v) {
        return Err(Error::OutOfRange(v));
    }
    let b = (v * 255.0).floor() as u8;
    Ok(gray_code(b))
}

#[inline]
pub fn gray_code(b: u8) -> u8 {
    b ^ (b >> 1)
}

fn gray_bytes(n: &NormalizedSeries) -> Result<Vec<u8>> {
    n.values().iter().map(|&v| gray8(v)).collect()
}

pub fn quantize_gray(n: &NormalizedSeries) -> Result<BitStream> {
    Ok(BitStream::from_bytes(gray_bytes(n)?))
}

pub fn quantize_sha512(n: &NormalizedSeries) -> Result<BitStream> {
    let codes = gray_bytes(n)?;
    let blocks: Vec<[u8; 64]> = codes
        .par_iter()
        .enumerate()
        .map(|(i, &code)| {
            let mut h = Sha512::new();
            h.update([code]);
            h.update((i as u64).to_be_bytes());
            h.finalize().into()
        })
        .collect();
    Ok(BitStream::from_bytes(blocks.concat()))
}
