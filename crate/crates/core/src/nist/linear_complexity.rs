use super::special::igamc;
use super::TestId;
use crate::bitstream::BitStream;
use crate::error::{Error, Result};

const PROBS: [f64; 7] = [0.010417, 0.03125, 0.125, 0.5, 0.25, 0.0625, 0.020833];

/// Length of the shortest LFSR generating `s` (bits as 0/1 bytes).
pub fn berlekamp_massey(s: &[u8]) -> usize {
    let n = s.len();
    let mut c = vec![0u8; n + 1];
    let mut b = vec![0u8; n + 1];
    c[0] = 1;
    b[0] = 1;
    let mut len = 0usize;
    let mut last: isize = -1;
    for i in 0..n {
        let mut d = s[i];
        for j in 1..=len {
            d ^= c[j] & s[i - j];
        }
        if d == 0 {
            continue;
        }
        let prev = c.clone();
        let shift = (i as isize - last) as usize;
        for j in 0..=n - shift {
            c[j + shift] ^= b[j];
        }
        if 2 * len <= i {
            len = i + 1 - len;
            last = i as isize;
            b = prev;
        }
    }
    len
}

pub fn linear_complexity(b: &BitStream, block_len: usize) -> Result<f64> {
    if block_len < 2 {
        return Err(Error::BadParams {
            test: TestId::LinearComplexity,
            reason: format!("block length must be at least 2, got {block_len}"),
        });
    }
    let blocks = b.len() / block_len;
    if blocks == 0 {
        return Err(Error::InputTooShort {
            test: TestId::LinearComplexity.name().into(),
            required: block_len,
            got: b.len(),
        });
    }
    let m = block_len as f64;
    let sign = if block_len % 2 == 0 { 1.0 } else { -1.0 };
    let mean = m / 2.0 + (9.0 - sign) / 36.0 - (m / 3.0 + 2.0 / 9.0) / 2f64.powf(m);

    let bits = b.to_bit_vec();
    let mut nu = [0u64; 7];
    for block in bits.chunks_exact(block_len) {
        let l = berlekamp_massey(block) as f64;
        let t = sign * (l - mean) + 2.0 / 9.0;
        let class = if t <= -2.5 {
            0
        } else if t <= -1.5 {
            1
        } else if t <= -0.5 {
            2
        } else if t <= 0.5 {
            3
        } else if t <= 1.5 {
            4
        } else if t <= 2.5 {
            5
        } else {
            6
        };
        nu[class] += 1;
    }
    let nf = blocks as f64;
    let chi2: f64 = nu
        .iter()
        .zip(PROBS)
        .map(|(&v, p)| (v as f64 - nf * p).powi(2) / (nf * p))
        .sum();
    Ok(igamc(3.0, chi2 / 2.0))
}
