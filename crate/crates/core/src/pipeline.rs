//! End-to-end generation: residuals -> normalized -> quantized -> extracted.

use serde::Serialize;

use crate::bitstream::BitStream;
use crate::entropy;
use crate::error::Result;
use crate::extract::{self, ExtractionResult, ExtractorSpec};
use crate::quantize::{self, QuantizerSpec};
use crate::residual::{self, ResidualSeries};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EntropySource {
    /// Supplied by the caller.
    Asserted,
    /// Plug-in min-entropy of the quantized bits.
    Measured,
}

#[derive(Debug, Clone)]
pub struct Generated {
    pub residual_count: usize,
    pub quantized: BitStream,
    pub k_per_bit: Option<f64>,
    pub k_source: Option<EntropySource>,
    pub extraction: Option<ExtractionResult>,
}

impl Generated {
    /// The stream the pipeline emits: extractor output when one ran,
    /// otherwise the quantized bits.
    pub fn output(&self) -> &BitStream {
        self.extraction
            .as_ref()
            .map(|e| &e.output)
            .unwrap_or(&self.quantized)
    }
}

/// Runs the pipeline. For SHAKE-256 extraction without `k_per_bit`, the
/// min-entropy of the quantized stream is measured and used for every block.
pub fn generate(
    series: &ResidualSeries,
    quantizer: &QuantizerSpec,
    extractor: Option<&ExtractorSpec>,
    k_per_bit: Option<f64>,
) -> Result<Generated> {
    quantizer.validate()?;
    if let Some(spec) = extractor {
        spec.validate()?;
    }
    let normalized = residual::normalize(series)?;
    let quantized = quantize::quantize(&normalized, quantizer)?;

    let needs_k = matches!(extractor, Some(ExtractorSpec::Shake256 { .. }));
    let (k_per_bit, k_source) = match (needs_k, k_per_bit) {
        (_, Some(k)) => (Some(k), Some(EntropySource::Asserted)),
        (true, None) => {
            let report = entropy::analyze(&quantized)?;
            (Some(report.min_entropy_bits_per_bit), Some(EntropySource::Measured))
        }
        (false, None) => (None, None),
    };

    let extraction = extractor
        .map(|spec| extract::extract(&quantized, spec, k_per_bit))
        .transpose()?;

    Ok(Generated {
        residual_count: series.len(),
        quantized,
        k_per_bit,
        k_source,
        extraction,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    fn series(values: &[f64]) -> ResidualSeries {
        let epochs = (0..values.len()).map(|i| 50_000.0 + i as f64).collect();
        ResidualSeries::new("J0000+0000", "synthetic", epochs, values.to_vec(), None).unwrap()
    }

    fn noisy(n: usize) -> ResidualSeries {
        // deterministic pseudo-noise from a multiplicative hash
        let values: Vec<f64> = (0..n as u64)
            .map(|i| (i.wrapping_mul(0x9E37_79B9_7F4A_7C15) >> 11) as f64 / (1u64 << 53) as f64 - 0.5)
            .collect();
        series(&values)
    }

    #[test]
    fn quantize_only() {
        let g = generate(&series(&[1.0, 2.0, 3.0]), &QuantizerSpec::Gray8, None, None).unwrap();
        assert_eq!(g.output().len(), 24);
        assert!(g.extraction.is_none());
        assert_eq!(g.k_source, None);
    }

    #[test]
    fn shake_measures_k_when_absent() {
        let s = noisy(2048);
        let spec = ExtractorSpec::shake256(vec![0x11; 32]);
        let g = generate(&s, &QuantizerSpec::Gray8, Some(&spec), None).unwrap();
        assert_eq!(g.k_source, Some(EntropySource::Measured));
        let k = g.k_per_bit.unwrap();
        assert!(k > 0.9, "{k}");
        let ex = g.extraction.as_ref().unwrap();
        assert_eq!(ex.m_per_block, Some(extract::lhl_output_len(k * 4096.0, extract::DEFAULT_EPSILON)));

        let g2 = generate(&s, &QuantizerSpec::Gray8, Some(&spec), Some(0.5)).unwrap();
        assert_eq!(g2.k_source, Some(EntropySource::Asserted));
        assert_eq!(g2.extraction.unwrap().m_per_block, Some(2048 - 64));
    }

    #[test]
    fn degenerate_input() {
        let err = generate(&series(&[4.2, 4.2, 4.2]), &QuantizerSpec::Gray8, None, None).unwrap_err();
        assert_eq!(err, Error::DegenerateSeries);
    }

    #[test]
    fn bad_extractor_checked_before_work() {
        let spec = ExtractorSpec::XorFold { window: 1 };
        let err = generate(&noisy(10), &QuantizerSpec::Gray8, Some(&spec), None).unwrap_err();
        assert_eq!(err, Error::BadWindow(1));
    }
}
