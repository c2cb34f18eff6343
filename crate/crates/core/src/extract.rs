//! Randomness extractors.
//!
//! [`extract_shake256`] is the seeded extractor: the input is cut into fixed
//! blocks, each block is credited `k_per_bit * block_bits` bits of
//! min-entropy, and the Leftover Hash Lemma output length
//! `m = k - 2 log2(1/epsilon)` is taken from `SHAKE-256(seed || block)`.
//! SHAKE-256 is not a universal hash family; using it in that role is a
//! heuristic instantiation, and the statistical-distance bound only holds to
//! the extent that assumption does.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha3::digest::{ExtendableOutput, Update, XofReader};
use sha3::Shake256;

use crate::bitstream::BitStream;
use crate::error::{Error, Result};

pub const DEFAULT_WINDOW: usize = 4;
pub const DEFAULT_EPSILON: f64 = 1.0 / 4_294_967_296.0; // 2^-32
pub const DEFAULT_BLOCK_BITS: usize = 4096;
pub const DEFAULT_SEED_BYTES: usize = 32;
pub const MIN_SEED_BYTES: usize = 16;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "snake_case")]
pub enum ExtractorSpec {
    XorFold {
        window: usize,
    },
    VonNeumann,
    Shake256 {
        epsilon: f64,
        block_bits: usize,
        #[serde(with = "hex_bytes")]
        seed: Vec<u8>,
    },
}

mod hex_bytes {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(bytes: &[u8], s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&hex::encode(bytes))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<u8>, D::Error> {
        let s = String::deserialize(d)?;
        hex::decode(s).map_err(serde::de::Error::custom)
    }
}

impl ExtractorSpec {
    pub fn shake256(seed: Vec<u8>) -> Self {
        ExtractorSpec::Shake256 {
            epsilon: DEFAULT_EPSILON,
            block_bits: DEFAULT_BLOCK_BITS,
            seed,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ExtractorSpec::XorFold { .. } => "xor_fold",
            ExtractorSpec::VonNeumann => "von_neumann",
            ExtractorSpec::Shake256 { .. } => "shake256",
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            ExtractorSpec::XorFold { window } if *window < 2 => Err(Error::BadWindow(*window)),
            ExtractorSpec::XorFold { .. } | ExtractorSpec::VonNeumann => Ok(()),
            ExtractorSpec::Shake256 {
                epsilon,
                block_bits,
                seed,
            } => {
                if !(*epsilon > 0.0 && *epsilon < 1.0) {
                    return Err(Error::BadExtractor(format!(
                        "epsilon must lie in (0, 1), got {epsilon}"
                    )));
                }
                if *block_bits == 0 || block_bits % 8 != 0 {
                    return Err(Error::BadExtractor(format!(
                        "block size must be a positive multiple of 8 bits, got {block_bits}"
                    )));
                }
                if seed.is_empty() {
                    return Err(Error::EmptySeed);
                }
                if seed.len() < MIN_SEED_BYTES {
                    return Err(Error::BadExtractor(format!(
                        "seed must be at least {} bits, got {}",
                        MIN_SEED_BYTES * 8,
                        seed.len() * 8
                    )));
                }
                Ok(())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExtractionResult {
    #[serde(skip)]
    pub output: BitStream,
    pub output_bits: usize,
    /// Input bits that contributed to the output.
    pub input_bits_consumed: usize,
    /// Input bits dropped: partial windows, equal pairs, or skipped blocks.
    pub input_bits_discarded: usize,
    /// Min-entropy credited to one full block (Shake256 only).
    pub k_assumed: Option<f64>,
    /// Output bits per full block (Shake256 only).
    pub m_per_block: Option<usize>,
    pub blocks_used: usize,
    pub blocks_skipped: usize,
}

impl ExtractionResult {
    fn simple(output: BitStream, consumed: usize, discarded: usize) -> Self {
        Self {
            output_bits: output.len(),
            output,
            input_bits_consumed: consumed,
            input_bits_discarded: discarded,
            k_assumed: None,
            m_per_block: None,
            blocks_used: 0,
            blocks_skipped: 0,
        }
    }
}

/// Runs the extractor described by `spec`. `k_per_bit` is only read by
/// the SHAKE-256 extractor.
pub fn extract(b: &BitStream, spec: &ExtractorSpec, k_per_bit: Option<f64>) -> Result<ExtractionResult> {
    spec.validate()?;
    match spec {
        ExtractorSpec::XorFold { window } => {
            let out = extract_xor_fold(b, *window)?;
            let consumed = out.len() * window;
            Ok(ExtractionResult::simple(out, consumed, b.len() - consumed))
        }
        ExtractorSpec::VonNeumann => {
            let out = extract_von_neumann(b);
            let consumed = out.len() * 2;
            Ok(ExtractionResult::simple(out, consumed, b.len() - consumed))
        }
        ExtractorSpec::Shake256 { .. } => {
            let k = k_per_bit.ok_or_else(|| {
                Error::BadExtractor("shake256 needs a min-entropy estimate (k per bit)".into())
            })?;
            extract_shake256(b, spec, k)
        }
    }
}

/// XOR of each non-overlapping group of `window` bits. A trailing partial
/// group is dropped.
pub fn extract_xor_fold(b: &BitStream, window: usize) -> Result<BitStream> {
    if window < 2 {
        return Err(Error::BadWindow(window));
    }
    let groups = b.len() / window;
    let mut out = BitStream::with_capacity(groups);
    let mut bits = b.iter();
    for _ in 0..groups {
        let parity = bits.by_ref().take(window).fold(false, |acc, x| acc ^ x);
        out.push(parity);
    }
    Ok(out)
}

/// Von Neumann debiasing over non-overlapping pairs: `01 -> 0`, `10 -> 1`,
/// equal pairs dropped.
pub fn extract_von_neumann(b: &BitStream) -> BitStream {
    let mut out = BitStream::with_capacity(b.len() / 4);
    let mut bits = b.iter();
    while let (Some(x), Some(y)) = (bits.next(), bits.next()) {
        if x != y {
            out.push(x);
        }
    }
    out
}

/// Leftover Hash Lemma output length `floor(k - 2 log2(1/epsilon))`,
/// clamped at zero.
pub fn lhl_output_len(k: f64, epsilon: f64) -> usize {
    let m = k - 2.0 * (-epsilon.log2());
    // 1e-9 absorbs rounding in products like 0.8 * 4096
    let m = (m + 1e-9).floor();
    if m.is_nan() || m <= 0.0 {
        0
    } else {
        m as usize
    }
}

fn shake_block(seed: &[u8], block: &[u8], m: usize) -> BitStream {
    let mut h = Shake256::default();
    h.update(seed);
    h.update(block);
    let mut reader = h.finalize_xof();
    let mut buf = vec![0u8; m.div_ceil(8)];
    reader.read(&mut buf);
    BitStream::from_bytes_with_len(buf, m)
}

pub fn extract_shake256(b: &BitStream, spec: &ExtractorSpec, k_per_bit: f64) -> Result<ExtractionResult> {
    let ExtractorSpec::Shake256 {
        epsilon,
        block_bits,
        seed,
    } = spec
    else {
        return Err(Error::BadExtractor(format!(
            "expected a shake256 spec, got {}",
            spec.name()
        )));
    };
    spec.validate()?;
    if !(k_per_bit > 0.0 && k_per_bit <= 1.0) {
        return Err(Error::BadExtractor(format!(
            "k per bit must lie in (0, 1], got {k_per_bit}"
        )));
    }

    let n = *block_bits;
    let k_block = k_per_bit * n as f64;
    let m = lhl_output_len(k_block, *epsilon);
    if m == 0 {
        return Err(Error::BlockTooSmall {
            block_bits: n,
            k_per_bit,
            epsilon: *epsilon,
        });
    }

    // blocks start on byte boundaries since n is a multiple of 8
    let bytes = b.as_bytes();
    let full = b.len() / n;
    let tail_bits = b.len() % n;
    let tail_m = lhl_output_len(k_per_bit * tail_bits as f64, *epsilon);

    let mut pieces: Vec<BitStream> = bytes
        .par_chunks(n / 8)
        .take(full)
        .map(|block| shake_block(seed, block, m))
        .collect();
    if tail_m > 0 {
        pieces.push(shake_block(seed, &bytes[full * n / 8..], tail_m));
    }

    let mut output = BitStream::with_capacity(full * m + tail_m);
    for piece in &pieces {
        if piece.len() % 8 == 0 && output.len() % 8 == 0 {
            output.extend_from_bytes(piece.as_bytes());
        } else {
            output.extend(piece.iter());
        }
    }

    let (blocks_skipped, skipped_bits) = if tail_bits > 0 && tail_m == 0 {
        (1, tail_bits)
    } else {
        (0, 0)
    };
    Ok(ExtractionResult {
        output_bits: output.len(),
        output,
        input_bits_consumed: b.len() - skipped_bits,
        input_bits_discarded: skipped_bits,
        k_assumed: Some(k_block),
        m_per_block: Some(m),
        blocks_used: pieces.len(),
        blocks_skipped,
    })
}
