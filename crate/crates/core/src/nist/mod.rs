//! Ten SP800-22 rev 1a statistical tests and a multi-stream battery.
//!
//! The per-test functions in the submodules only enforce what their
//! statistic needs to be defined. [`run_test`] additionally enforces the
//! recommended input sizes so a battery run never reports a p-value from a
//! regime where the reference distribution is not valid.

mod battery;
mod frequency;
mod linear_complexity;
mod patterns;
mod rank;
mod runs;
pub mod special;
mod spectral;

#[cfg(test)]
pub(crate) mod test_vectors;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bitstream::BitStream;
use crate::error::{Error, Result};

pub use battery::{proportion_threshold, run_battery, uniformity_p_value, BatteryEntry, NistBatteryResult};
pub use frequency::{block_frequency, cumulative_sums, frequency};
pub use linear_complexity::{berlekamp_massey, linear_complexity};
pub use patterns::{approximate_entropy, cyclic_pattern_counts, serial};
pub use rank::{binary_matrix_rank, gf2_rank, rank_probability, MATRIX_DIM, RANK_MIN_BITS};
pub use runs::{longest_run_block_len, longest_run_of_ones, runs, LONGEST_RUN_MIN_BITS};
pub use spectral::{dft_magnitudes, spectral};

pub const DEFAULT_ALPHA: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TestId {
    Frequency,
    BlockFrequency,
    CumulativeSums,
    Runs,
    LongestRun,
    Rank,
    #[serde(rename = "FFT")]
    Fft,
    ApproximateEntropy,
    Serial,
    LinearComplexity,
}

impl TestId {
    pub const ALL: [TestId; 10] = [
        TestId::Frequency,
        TestId::BlockFrequency,
        TestId::CumulativeSums,
        TestId::Runs,
        TestId::LongestRun,
        TestId::Rank,
        TestId::Fft,
        TestId::ApproximateEntropy,
        TestId::Serial,
        TestId::LinearComplexity,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            TestId::Frequency => "Frequency",
            TestId::BlockFrequency => "BlockFrequency",
            TestId::CumulativeSums => "CumulativeSums",
            TestId::Runs => "Runs",
            TestId::LongestRun => "LongestRun",
            TestId::Rank => "Rank",
            TestId::Fft => "FFT",
            TestId::ApproximateEntropy => "ApproximateEntropy",
            TestId::Serial => "Serial",
            TestId::LinearComplexity => "LinearComplexity",
        }
    }
}

impl fmt::Display for TestId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Tunable test parameters. Defaults are the rev 1a recommendations for
/// 100,000-bit streams; the rank test is fixed at 32x32 and the longest-run
/// block size is chosen from the input length.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TestParams {
    pub block_frequency_len: usize,
    pub approximate_entropy_m: usize,
    pub serial_m: usize,
    pub linear_complexity_len: usize,
    pub alpha: f64,
}

impl Default for TestParams {
    fn default() -> Self {
        Self {
            block_frequency_len: 128,
            approximate_entropy_m: 10,
            serial_m: 14,
            linear_complexity_len: 500,
            alpha: DEFAULT_ALPHA,
        }
    }
}

const FFT_MIN_BITS: usize = 1000;
const LINEAR_COMPLEXITY_MIN_BLOCKS: usize = 200;

impl TestParams {
    pub fn validate(&self) -> Result<()> {
        let bad = |test, reason: String| Err(Error::BadParams { test, reason });
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return bad(TestId::Frequency, format!("alpha must lie in (0, 1), got {}", self.alpha));
        }
        if self.block_frequency_len < 2 {
            return bad(TestId::BlockFrequency, "block length must be at least 2".into());
        }
        if !(1..=24).contains(&self.approximate_entropy_m) {
            return bad(TestId::ApproximateEntropy, "m must lie in [1, 24]".into());
        }
        if !(2..=24).contains(&self.serial_m) {
            return bad(TestId::Serial, "m must lie in [2, 24]".into());
        }
        if !(500..=5000).contains(&self.linear_complexity_len) {
            return bad(TestId::LinearComplexity, "block length must lie in [500, 5000]".into());
        }
        Ok(())
    }

    /// Smallest input length accepted by [`run_test`] for `test`.
    pub fn min_bits(&self, test: TestId) -> usize {
        match test {
            TestId::Frequency => 1,
            TestId::BlockFrequency => self.block_frequency_len,
            TestId::CumulativeSums => 1,
            TestId::Runs => 2,
            TestId::LongestRun => LONGEST_RUN_MIN_BITS,
            TestId::Rank => RANK_MIN_BITS,
            TestId::Fft => FFT_MIN_BITS,
            // m < floor(log2 n) - 5
            TestId::ApproximateEntropy => 1 << (self.approximate_entropy_m + 6),
            // m < log2 n - 2
            TestId::Serial => (1 << (self.serial_m + 2)) + 1,
            TestId::LinearComplexity => LINEAR_COMPLEXITY_MIN_BLOCKS * self.linear_complexity_len,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TestResult {
    pub test: TestId,
    pub p_values: Vec<f64>,
    pub pass: bool,
}

impl TestResult {
    fn new(test: TestId, p_values: Vec<f64>, alpha: f64) -> Result<Self> {
        if let Some(p) = p_values.iter().find(|p| !(0.0..=1.0).contains(*p)) {
            return Err(Error::Numerical(format!("{test} produced p-value {p}")));
        }
        let pass = p_values.iter().all(|&p| p >= alpha);
        Ok(Self { test, p_values, pass })
    }

    pub fn min_p(&self) -> f64 {
        self.p_values.iter().copied().fold(1.0, f64::min)
    }
}

pub fn run_test(test: TestId, b: &BitStream, params: &TestParams) -> Result<TestResult> {
    params.validate()?;
    let required = params.min_bits(test);
    if b.len() < required {
        return Err(Error::InputTooShort {
            test: test.name().into(),
            required,
            got: b.len(),
        });
    }
    let p_values = match test {
        TestId::Frequency => vec![frequency(b)?],
        TestId::BlockFrequency => vec![block_frequency(b, params.block_frequency_len)?],
        TestId::CumulativeSums => cumulative_sums(b)?.to_vec(),
        TestId::Runs => vec![runs(b)?],
        TestId::LongestRun => vec![longest_run_of_ones(b)?],
        TestId::Rank => vec![binary_matrix_rank(b)?],
        TestId::Fft => vec![spectral(b)?],
        TestId::ApproximateEntropy => vec![approximate_entropy(b, params.approximate_entropy_m)?],
        TestId::Serial => serial(b, params.serial_m)?.to_vec(),
        TestId::LinearComplexity => vec![linear_complexity(b, params.linear_complexity_len)?],
    };
    TestResult::new(test, p_values, params.alpha)
}
