//! Discrete Fourier transform (spectral) test.

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use super::special::erfc;
use super::TestId;
use crate::bitstream::BitStream;
use crate::error::{Error, Result};

/// Magnitudes of the first `n / 2` DFT coefficients of the +-1 sequence.
pub fn dft_magnitudes(b: &BitStream) -> Vec<f64> {
    let n = b.len();
    let mut buf: Vec<Complex<f64>> = b
        .iter()
        .map(|bit| Complex::new(if bit { 1.0 } else { -1.0 }, 0.0))
        .collect();
    if n > 0 {
        FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    }
    buf.truncate(n / 2);
    buf.into_iter().map(|c| c.norm()).collect()
}

pub fn spectral(b: &BitStream) -> Result<f64> {
    if b.len() < 2 {
        return Err(Error::InputTooShort {
            test: TestId::Fft.name().into(),
            required: 2,
            got: b.len(),
        });
    }
    let n = b.len() as f64;
    let threshold = ((1.0f64 / 0.05).ln() * n).sqrt();
    let expected = 0.95 * n / 2.0;
    let below = dft_magnitudes(b).iter().filter(|&&m| m < threshold).count() as f64;
    let d = (below - expected) / (n * 0.95 * 0.05 / 4.0).sqrt();
    Ok(erfc(d.abs() / std::f64::consts::SQRT_2))
}
