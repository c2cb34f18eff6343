//! Plug-in entropy measures over empirical symbol distributions.
//!
//! These evaluate the textbook definitions on observed frequencies, with no
//! smoothing and no confidence-interval correction, so they are surrogates
//! for the exact quantities of the underlying source.

use serde::Serialize;

use crate::bitstream::BitStream;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmpiricalDistribution {
    symbol_width: u8,
    counts: Vec<u64>,
    total: u64,
    dropped_bits: usize,
}

impl EmpiricalDistribution {
    /// Builds a distribution directly from symbol counts. `counts` must
    /// have `2^width` entries and a positive sum.
    pub fn from_counts(symbol_width: u8, counts: Vec<u64>) -> Result<Self> {
        check_width(symbol_width)?;
        assert_eq!(counts.len(), 1 << symbol_width, "count vector length");
        let total = counts.iter().sum();
        if total == 0 {
            return Err(Error::EmptyStream);
        }
        Ok(Self {
            symbol_width,
            counts,
            total,
            dropped_bits: 0,
        })
    }

    pub fn symbol_width(&self) -> u8 {
        self.symbol_width
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    /// Trailing bits that did not fill a whole symbol.
    pub fn dropped_bits(&self) -> usize {
        self.dropped_bits
    }

    pub fn probabilities(&self) -> impl Iterator<Item = f64> + '_ {
        let total = self.total as f64;
        self.counts.iter().map(move |&c| c as f64 / total)
    }

    /// Merges two histograms of the same width, e.g. from sharded input.
    pub fn merge(&self, other: &Self) -> Result<Self> {
        if self.symbol_width != other.symbol_width {
            return Err(Error::WidthMismatch(self.symbol_width, other.symbol_width));
        }
        Ok(Self {
            symbol_width: self.symbol_width,
            counts: self.counts.iter().zip(&other.counts).map(|(a, b)| a + b).collect(),
            total: self.total + other.total,
            dropped_bits: self.dropped_bits + other.dropped_bits,
        })
    }
}

fn check_width(width: u8) -> Result<()> {
    match width {
        1 | 8 => Ok(()),
        w => Err(Error::Numerical(format!("symbol width must be 1 or 8, got {w}"))),
    }
}

/// Counts 1-bit or 8-bit symbols. For width 8 a trailing partial byte is
/// dropped and reported via [`EmpiricalDistribution::dropped_bits`].
pub fn histogram(b: &BitStream, width: u8) -> Result<EmpiricalDistribution> {
    check_width(width)?;
    let (counts, dropped) = if width == 1 {
        let ones = b.count_ones() as u64;
        (vec![b.len() as u64 - ones, ones], 0)
    } else {
        let whole = b.len() / 8;
        let mut counts = vec![0u64; 256];
        for &byte in &b.as_bytes()[..whole] {
            counts[byte as usize] += 1;
        }
        (counts, b.len() % 8)
    };
    let total = counts.iter().sum();
    if total == 0 {
        return Err(Error::EmptyStream);
    }
    Ok(EmpiricalDistribution {
        symbol_width: width,
        counts,
        total,
        dropped_bits: dropped,
    })
}

/// Shannon entropy in bits per symbol.
pub fn shannon_entropy(d: &EmpiricalDistribution) -> f64 {
    let h: f64 = d
        .probabilities()
        .filter(|&p| p > 0.0)
        .map(|p| -p * p.log2())
        .sum();
    // a single-symbol distribution sums to -0.0
    h.max(0.0)
}

/// Min-entropy `-log2(max_u p_u)` in bits per symbol.
pub fn min_entropy(d: &EmpiricalDistribution) -> f64 {
    let max = d.counts.iter().copied().max().unwrap_or(0);
    let h = -(max as f64 / d.total as f64).log2();
    h.max(0.0)
}

pub fn is_k_source(d: &EmpiricalDistribution, k: f64) -> bool {
    min_entropy(d) >= k
}

/// Half the L1 distance between the two probability vectors.
pub fn statistical_distance(a: &EmpiricalDistribution, b: &EmpiricalDistribution) -> Result<f64> {
    if a.symbol_width != b.symbol_width {
        return Err(Error::WidthMismatch(a.symbol_width, b.symbol_width));
    }
    let l1: f64 = a
        .probabilities()
        .zip(b.probabilities())
        .map(|(p, q)| (p - q).abs())
        .sum();
    Ok((0.5 * l1).min(1.0))
}

pub fn eps_close(a: &EmpiricalDistribution, b: &EmpiricalDistribution, epsilon: f64) -> Result<bool> {
    Ok(statistical_distance(a, b)? <= epsilon)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntropyReport {
    /// `ent`-style byte entropy over the packed stream; `None` when the
    /// stream is shorter than one byte.
    pub shannon_bits_per_byte: Option<f64>,
    pub shannon_bits_per_bit: f64,
    pub min_entropy_bits_per_bit: f64,
    pub sample_bits: usize,
    pub ones: usize,
    pub dropped_bits: usize,
}

pub fn analyze(b: &BitStream) -> Result<EntropyReport> {
    let bits = histogram(b, 1)?;
    let (per_byte, dropped) = match histogram(b, 8) {
        Ok(bytes) => (Some(shannon_entropy(&bytes)), bytes.dropped_bits()),
        Err(Error::EmptyStream) => (None, b.len()),
        Err(e) => return Err(e),
    };
    Ok(EntropyReport {
        shannon_bits_per_byte: per_byte,
        shannon_bits_per_bit: shannon_entropy(&bits),
        min_entropy_bits_per_bit: min_entropy(&bits),
        sample_bits: b.len(),
        ones: bits.counts()[1] as usize,
        dropped_bits: dropped,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn bits(p1: u64, total: u64) -> EmpiricalDistribution {
        EmpiricalDistribution::from_counts(1, vec![total - p1, p1]).unwrap()
    }

    #[test]
    fn histogram_examples() {
        let d = histogram(&BitStream::from_ascii("0101").unwrap(), 1).unwrap();
        assert_eq!(d.counts(), &[2, 2]);

        let d = histogram(&BitStream::from_bytes(vec![0xFF]), 8).unwrap();
        assert_eq!(d.counts()[255], 1);
        assert_eq!(d.total(), 1);

        let d = histogram(&BitStream::from_ascii("101010101111").unwrap(), 8).unwrap();
        assert_eq!(d.total(), 1);
        assert_eq!(d.counts()[0xAA], 1);
        assert_eq!(d.dropped_bits(), 4);

        assert_eq!(histogram(&BitStream::new(), 1), Err(Error::EmptyStream));
        assert_eq!(
            histogram(&BitStream::from_ascii("101").unwrap(), 8),
            Err(Error::EmptyStream)
        );
    }

    #[test]
    fn shannon_examples() {
        let repeated = histogram(&BitStream::from_bytes(vec![0x3C; 100]), 8).unwrap();
        assert_eq!(shannon_entropy(&repeated), 0.0);
        assert!((shannon_entropy(&bits(5, 10)) - 1.0).abs() < 1e-15);
        let uniform = histogram(&BitStream::from_bytes((0..=255).collect()), 8).unwrap();
        assert!((shannon_entropy(&uniform) - 8.0).abs() < 1e-12);
    }

    #[test]
    fn min_entropy_examples() {
        assert_eq!(min_entropy(&bits(0, 10)), 0.0);
        assert_eq!(min_entropy(&bits(4, 8)), 1.0);
        // -log2(0.75)
        assert!((min_entropy(&bits(1, 4)) - 0.415_037_499_278_843_8).abs() < 1e-12);
    }

    #[test]
    fn k_source_examples() {
        assert!(is_k_source(&bits(5, 10), 0.9));
        assert!(!is_k_source(&bits(10, 10), 0.1));
        assert!(!is_k_source(&bits(3, 4), 0.5));
    }

    #[test]
    fn distance_examples() {
        let a = bits(3, 4);
        let u = bits(2, 4);
        assert_eq!(statistical_distance(&a, &a).unwrap(), 0.0);
        assert_eq!(statistical_distance(&bits(0, 4), &bits(4, 4)).unwrap(), 1.0);
        assert!((statistical_distance(&a, &u).unwrap() - 0.25).abs() < 1e-15);

        assert!(eps_close(&a, &a, 0.0).unwrap());
        assert!(!eps_close(&bits(0, 4), &bits(4, 4), 0.5).unwrap());
        assert!(eps_close(&a, &u, 0.25).unwrap());

        let bytes = histogram(&BitStream::from_bytes(vec![1]), 8).unwrap();
        assert_eq!(statistical_distance(&a, &bytes), Err(Error::WidthMismatch(1, 8)));
        assert_eq!(eps_close(&a, &bytes, 0.1), Err(Error::WidthMismatch(1, 8)));
    }

    #[test]
    fn merge_is_associative_sum() {
        let x = BitStream::from_bytes((0..200u8).collect());
        let whole = histogram(&x, 8).unwrap();
        let left = histogram(&x.slice(0, 800), 8).unwrap();
        let right = histogram(&x.slice(800, 1600), 8).unwrap();
        assert_eq!(left.merge(&right).unwrap(), whole);
    }

    #[test]
    fn report_handles_short_streams() {
        let r = analyze(&BitStream::from_ascii("0110").unwrap()).unwrap();
        assert_eq!(r.shannon_bits_per_byte, None);
        assert_eq!(r.min_entropy_bits_per_bit, 1.0);
        assert_eq!(r.dropped_bits, 4);
        assert_eq!(analyze(&BitStream::new()), Err(Error::EmptyStream));
    }

    fn dist_strategy() -> impl Strategy<Value = EmpiricalDistribution> {
        prop_oneof![
            proptest::collection::vec(0u64..50, 2).prop_filter_map("empty", |c| {
                EmpiricalDistribution::from_counts(1, c).ok()
            }),
            proptest::collection::vec(0u64..20, 256).prop_filter_map("empty", |c| {
                EmpiricalDistribution::from_counts(8, c).ok()
            }),
        ]
    }

    proptest! {
        #[test]
        fn entropy_ordering(d in dist_strategy()) {
            let hmin = min_entropy(&d);
            let h = shannon_entropy(&d);
            prop_assert!(hmin >= 0.0);
            prop_assert!(hmin <= h + 1e-12);
            prop_assert!(h <= d.symbol_width() as f64 + 1e-12);
        }

        #[test]
        fn distance_is_a_metric(
            a in proptest::collection::vec(0u64..30, 256),
            b in proptest::collection::vec(0u64..30, 256),
            c in proptest::collection::vec(0u64..30, 256),
        ) {
            let (Ok(a), Ok(b), Ok(c)) = (
                EmpiricalDistribution::from_counts(8, a),
                EmpiricalDistribution::from_counts(8, b),
                EmpiricalDistribution::from_counts(8, c),
            ) else { return Ok(()) };
            let ab = statistical_distance(&a, &b).unwrap();
            prop_assert_eq!(ab, statistical_distance(&b, &a).unwrap());
            prop_assert_eq!(statistical_distance(&a, &a).unwrap(), 0.0);
            let ac = statistical_distance(&a, &c).unwrap();
            let cb = statistical_distance(&c, &b).unwrap();
            prop_assert!(ab <= ac + cb + 1e-12);
            prop_assert!((0.0..=1.0).contains(&ab));
        }
    }
}
