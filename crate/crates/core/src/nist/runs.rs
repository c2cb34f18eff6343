use super::special::{erfc, igamc};
use super::TestId;
use crate::bitstream::BitStream;
use crate::error::{Error, Result};

pub fn runs(b: &BitStream) -> Result<f64> {
    if b.len() < 2 {
        return Err(Error::InputTooShort {
            test: TestId::Runs.name().into(),
            required: 2,
            got: b.len(),
        });
    }
    let n = b.len() as f64;
    let pi = b.count_ones() as f64 / n;
    // frequency prerequisite; the test is not applicable and fails outright
    if (pi - 0.5).abs() >= 2.0 / n.sqrt() {
        return Ok(0.0);
    }
    let mut iter = b.iter();
    let mut prev = iter.next().unwrap_or(false);
    let mut v_obs = 1u64;
    for bit in iter {
        if bit != prev {
            v_obs += 1;
        }
        prev = bit;
    }
    let q = pi * (1.0 - pi);
    Ok(erfc((v_obs as f64 - 2.0 * n * q).abs() / (2.0 * (2.0 * n).sqrt() * q)))
}

struct LongestRunTable {
    block_len: usize,
    /// longest run mapped to the first class
    lowest: usize,
    probs: &'static [f64],
}

const TABLE_8: LongestRunTable = LongestRunTable {
    block_len: 8,
    lowest: 1,
    probs: &[0.2148, 0.3672, 0.2305, 0.2266],
};
const TABLE_128: LongestRunTable = LongestRunTable {
    block_len: 128,
    lowest: 4,
    probs: &[0.1174, 0.2430, 0.2493, 0.1752, 0.1027, 0.1124],
};
const TABLE_10K: LongestRunTable = LongestRunTable {
    block_len: 10_000,
    lowest: 10,
    probs: &[0.0882, 0.2092, 0.2483, 0.1933, 0.1208, 0.0675, 0.0727],
};

pub const LONGEST_RUN_MIN_BITS: usize = 128;

fn table_for(n: usize) -> &'static LongestRunTable {
    if n >= 750_000 {
        &TABLE_10K
    } else if n >= 6_272 {
        &TABLE_128
    } else {
        &TABLE_8
    }
}

/// Block length the longest-run test picks for an `n`-bit input.
pub fn longest_run_block_len(n: usize) -> usize {
    table_for(n).block_len
}

pub fn longest_run_of_ones(b: &BitStream) -> Result<f64> {
    if b.len() < LONGEST_RUN_MIN_BITS {
        return Err(Error::InputTooShort {
            test: TestId::LongestRun.name().into(),
            required: LONGEST_RUN_MIN_BITS,
            got: b.len(),
        });
    }
    let table = table_for(b.len());
    let k = table.probs.len();
    let blocks = b.len() / table.block_len;
    let mut nu = vec![0u64; k];
    let mut bits = b.iter();
    for _ in 0..blocks {
        let (mut best, mut run) = (0usize, 0usize);
        for bit in bits.by_ref().take(table.block_len) {
            run = if bit { run + 1 } else { 0 };
            best = best.max(run);
        }
        let class = best.clamp(table.lowest, table.lowest + k - 1) - table.lowest;
        nu[class] += 1;
    }
    let nf = blocks as f64;
    let chi2: f64 = nu
        .iter()
        .zip(table.probs)
        .map(|(&v, &p)| (v as f64 - nf * p).powi(2) / (nf * p))
        .sum();
    Ok(igamc((k - 1) as f64 / 2.0, chi2 / 2.0))
}
