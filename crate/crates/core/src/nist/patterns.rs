//! Overlapping-pattern tests: approximate entropy and serial.
//!
//! Both count all `n` overlapping `m`-bit windows of the sequence with its
//! first `m - 1` bits appended, so every position starts a window.

use super::special::igamc;
use super::TestId;
use crate::bitstream::BitStream;
use crate::error::{Error, Result};

/// Counts of each `m`-bit pattern over the cyclic sequence.
pub fn cyclic_pattern_counts(b: &BitStream, m: usize) -> Vec<u64> {
    assert!(m < 32, "pattern length {m} too large");
    let n = b.len();
    if m == 0 {
        return vec![n as u64];
    }
    let bits = b.to_bit_vec();
    let mask = (1u32 << m) - 1;
    let mut counts = vec![0u64; 1 << m];
    let mut window = 0u32;
    for i in 0..m - 1 {
        window = (window << 1) | bits[i % n] as u32;
    }
    for i in 0..n {
        window = ((window << 1) | bits[(i + m - 1) % n] as u32) & mask;
        counts[window as usize] += 1;
    }
    counts
}

fn check_m(test: TestId, b: &BitStream, m: usize, min_m: usize) -> Result<()> {
    if m < min_m || m >= 25 {
        return Err(Error::BadParams {
            test,
            reason: format!("pattern length must lie in [{min_m}, 24], got {m}"),
        });
    }
    if b.len() < m + 1 {
        return Err(Error::InputTooShort {
            test: test.name().into(),
            required: m + 1,
            got: b.len(),
        });
    }
    Ok(())
}

pub fn approximate_entropy(b: &BitStream, m: usize) -> Result<f64> {
    check_m(TestId::ApproximateEntropy, b, m, 1)?;
    let n = b.len() as f64;
    let phi = |len: usize| -> f64 {
        cyclic_pattern_counts(b, len)
            .into_iter()
            .filter(|&c| c > 0)
            .map(|c| {
                let p = c as f64 / n;
                p * p.ln()
            })
            .sum()
    };
    let apen = phi(m) - phi(m + 1);
    let chi2 = 2.0 * n * (std::f64::consts::LN_2 - apen);
    Ok(igamc(2f64.powi(m as i32 - 1), chi2 / 2.0))
}

/// The two serial-test p-values (first and second differences of psi^2).
pub fn serial(b: &BitStream, m: usize) -> Result<[f64; 2]> {
    check_m(TestId::Serial, b, m, 2)?;
    let n = b.len() as f64;
    let psi = |len: usize| -> f64 {
        if len == 0 {
            return 0.0;
        }
        let sq: f64 = cyclic_pattern_counts(b, len)
            .into_iter()
            .map(|c| (c as f64) * (c as f64))
            .sum();
        2f64.powi(len as i32) / n * sq - n
    };
    let (p0, p1, p2) = (psi(m), psi(m - 1), psi(m - 2));
    let del1 = p0 - p1;
    let del2 = p0 - 2.0 * p1 + p2;
    Ok([
        igamc(2f64.powi(m as i32 - 2), del1 / 2.0),
        igamc(2f64.powi(m as i32 - 3), del2 / 2.0),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nist::test_vectors::*;

    #[test]
    fn cyclic_counts_wrap() {
        // windows of 0110 with wraparound: 01 11 10 00
        assert_eq!(cyclic_pattern_counts(&bs("0110"), 2), vec![1, 1, 1, 1]);
        assert_eq!(cyclic_pattern_counts(&bs("0110"), 3), vec![0, 1, 0, 1, 1, 0, 1, 0]);
        assert_eq!(cyclic_pattern_counts(&bs("0110"), 0), vec![4]);
    }

    #[test]
    fn approximate_entropy_vectors() {
        assert_close(approximate_entropy(&bs("0100110101"), 3).unwrap(), 0.261_961_104_881_665_4);
        assert_close(approximate_entropy(&bs(PI_100), 2).unwrap(), 0.235_300_745_858_979_48);
        assert_close(
            approximate_entropy(&counter_stream(100_000), 10).unwrap(),
            0.946_536_394_313_216_5,
        );
    }

    #[test]
    fn serial_vectors() {
        let [a, b] = serial(&bs("0011011101"), 3).unwrap();
        assert_close(a, 0.808_792_135_410_998_9);
        assert_close(b, 0.670_320_046_035_639_8);
        let [a, b] = serial(&bs(PI_100), 2).unwrap();
        assert_close(a, 0.256_660_776_953_556_05);
        assert_close(b, 0.689_156_516_779_355);
        let [a, b] = serial(&counter_stream(100_000), 14).unwrap();
        assert_close(a, 0.294_586_828_125_009_47);
        assert_close(b, 0.048_123_962_376_390_27);
    }

    #[test]
    fn bad_pattern_lengths() {
        assert!(matches!(serial(&bs(PI_100), 1), Err(Error::BadParams { .. })));
        assert!(matches!(approximate_entropy(&bs(PI_100), 0), Err(Error::BadParams { .. })));
        assert!(matches!(approximate_entropy(&bs("01"), 3), Err(Error::InputTooShort { .. })));
    }
}
