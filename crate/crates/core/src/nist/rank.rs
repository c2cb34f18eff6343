//! Binary matrix rank test over disjoint 32x32 matrices.

use super::TestId;
use crate::bitstream::BitStream;
use crate::error::{Error, Result};

pub const MATRIX_DIM: usize = 32;
const MATRIX_BITS: usize = MATRIX_DIM * MATRIX_DIM;
/// Fewer matrices than this make the chi-square approximation unreliable.
pub const MIN_MATRICES: usize = 38;
pub const RANK_MIN_BITS: usize = MIN_MATRICES * MATRIX_BITS;

/// Rank over GF(2) of a matrix given as row bitmasks (up to 64 columns).
/// The rows are reduced in place.
pub fn gf2_rank(rows: &mut [u64]) -> usize {
    let mut rank = 0;
    for col in (0..64).rev() {
        let mask = 1u64 << col;
        let Some(pivot) = (rank..rows.len()).find(|&r| rows[r] & mask != 0) else {
            continue;
        };
        rows.swap(rank, pivot);
        let pivot_row = rows[rank];
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && *row & mask != 0 {
                *row ^= pivot_row;
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

/// Probability that a uniformly random `rows x cols` binary matrix has
/// rank `r`.
pub fn rank_probability(r: usize, rows: usize, cols: usize) -> f64 {
    let (m, q) = (rows as i32, cols as i32);
    let r = r as i32;
    let mut prod = 1.0;
    for i in 0..r {
        prod *= (1.0 - 2f64.powi(i - q)) * (1.0 - 2f64.powi(i - m)) / (1.0 - 2f64.powi(i - r));
    }
    2f64.powi(r * (q + m - r) - m * q) * prod
}

pub fn binary_matrix_rank(b: &BitStream) -> Result<f64> {
    let matrices = b.len() / MATRIX_BITS;
    if matrices == 0 {
        return Err(Error::InputTooShort {
            test: TestId::Rank.name().into(),
            required: MATRIX_BITS,
            got: b.len(),
        });
    }
    let p_full = rank_probability(MATRIX_DIM, MATRIX_DIM, MATRIX_DIM);
    let p_minus_one = rank_probability(MATRIX_DIM - 1, MATRIX_DIM, MATRIX_DIM);
    let probs = [p_full, p_minus_one, 1.0 - p_full - p_minus_one];

    let mut counts = [0u64; 3];
    // each matrix is 128 bytes and starts byte-aligned
    for chunk in b.as_bytes().chunks_exact(MATRIX_BITS / 8).take(matrices) {
        let mut rows = [0u64; MATRIX_DIM];
        for (row, word) in rows.iter_mut().zip(chunk.chunks_exact(4)) {
            *row = u32::from_be_bytes([word[0], word[1], word[2], word[3]]) as u64;
        }
        let rank = gf2_rank(&mut rows);
        let class = match MATRIX_DIM - rank {
            0 => 0,
            1 => 1,
            _ => 2,
        };
        counts[class] += 1;
    }

    let n = matrices as f64;
    let chi2: f64 = counts
        .iter()
        .zip(probs)
        .map(|(&f, p)| (f as f64 - n * p).powi(2) / (n * p))
        .sum();
    Ok((-chi2 / 2.0).exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nist::test_vectors::*;

    #[test]
    fn reference_probabilities() {
        assert_close(rank_probability(32, 32, 32), 0.288_788_095_153_841_1);
        assert_close(rank_probability(31, 32, 32), 0.577_576_190_173_204_6);
        let total: f64 = (0..=4).map(|r| rank_probability(r, 4, 4)).sum();
        assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn small_ranks() {
        assert_eq!(gf2_rank(&mut [0, 0, 0]), 0);
        assert_eq!(gf2_rank(&mut [0b11, 0b11, 0b01]), 2);
        assert_eq!(gf2_rank(&mut [0b100, 0b010, 0b001]), 3);
        assert_eq!(gf2_rank(&mut [0b110, 0b011, 0b101]), 2);
    }

    #[test]
    fn counter_stream_vector() {
        assert_close(binary_matrix_rank(&counter_stream(100_000)).unwrap(), 0.449_290_901_157_303_3);
    }
}
