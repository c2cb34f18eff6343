//! Monobit, block frequency, and cumulative sums.

use super::special::{erfc, igamc, normal_cdf};
use super::TestId;
use crate::bitstream::BitStream;
use crate::error::{Error, Result};

fn require(test: TestId, required: usize, b: &BitStream) -> Result<()> {
    if b.len() < required {
        return Err(Error::InputTooShort {
            test: test.name().into(),
            required,
            got: b.len(),
        });
    }
    Ok(())
}

pub fn frequency(b: &BitStream) -> Result<f64> {
    require(TestId::Frequency, 1, b)?;
    let n = b.len() as f64;
    let s = 2.0 * b.count_ones() as f64 - n;
    Ok(erfc(s.abs() / n.sqrt() / std::f64::consts::SQRT_2))
}

pub fn block_frequency(b: &BitStream, block_len: usize) -> Result<f64> {
    if block_len == 0 {
        return Err(Error::BadParams {
            test: TestId::BlockFrequency,
            reason: "block length must be positive".into(),
        });
    }
    require(TestId::BlockFrequency, block_len, b)?;
    let blocks = b.len() / block_len;
    let m = block_len as f64;
    let chi2: f64 = (0..blocks)
        .map(|i| {
            let ones = b.slice(i * block_len, (i + 1) * block_len).count_ones();
            let pi = ones as f64 / m - 0.5;
            pi * pi
        })
        .sum::<f64>()
        * 4.0
        * m;
    Ok(igamc(blocks as f64 / 2.0, chi2 / 2.0))
}

/// Forward and backward cumulative sums p-values, in that order.
pub fn cumulative_sums(b: &BitStream) -> Result<[f64; 2]> {
    require(TestId::CumulativeSums, 1, b)?;
    let n = b.len() as i64;
    let (mut s, mut max_fwd, mut min_fwd) = (0i64, 0i64, 0i64);
    for bit in b {
        s += if bit { 1 } else { -1 };
        max_fwd = max_fwd.max(s);
        min_fwd = min_fwd.min(s);
    }
    let z_fwd = max_fwd.max(-min_fwd);
    // backward partial sums are total - forward prefix sums
    let total = s;
    let (mut s, mut z_bwd) = (0i64, total.abs());
    for bit in b {
        s += if bit { 1 } else { -1 };
        z_bwd = z_bwd.max((total - s).abs());
    }
    Ok([cusum_p(n, z_fwd), cusum_p(n, z_bwd)])
}

// Integer divisions truncate toward zero, matching the reference code's
// summation bounds.
fn cusum_p(n: i64, z: i64) -> f64 {
    let sqrt_n = (n as f64).sqrt();
    let zf = z as f64;
    let upper = (n / z - 1) / 4;
    let mut sum1 = 0.0;
    for k in ((-n / z + 1) / 4)..=upper {
        let k = k as f64;
        sum1 += normal_cdf((4.0 * k + 1.0) * zf / sqrt_n) - normal_cdf((4.0 * k - 1.0) * zf / sqrt_n);
    }
    let mut sum2 = 0.0;
    for k in ((-n / z - 3) / 4)..=upper {
        let k = k as f64;
        sum2 += normal_cdf((4.0 * k + 3.0) * zf / sqrt_n) - normal_cdf((4.0 * k + 1.0) * zf / sqrt_n);
    }
    (1.0 - sum1 + sum2).clamp(0.0, 1.0)
}
