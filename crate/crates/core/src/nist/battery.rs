use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use super::special::igamc;
use super::{run_test, TestId, TestParams, TestResult};
use crate::bitstream::BitStream;
use crate::error::{Error, Result};

/// Uniformity p-values below this fail a test regardless of proportion.
pub const UNIFORMITY_ALPHA: f64 = 0.0001;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BatteryEntry {
    pub test: TestId,
    /// Streams whose every p-value reached alpha.
    pub passed: usize,
    pub streams: usize,
    pub proportion: f64,
    /// Chi-square uniformity of the p-values over ten bins. For tests with
    /// several p-values per stream, the smallest per-variant value.
    pub uniformity_p: f64,
    pub pass: bool,
    /// `p_values[stream]` as returned by the test.
    pub p_values: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NistBatteryResult {
    pub streams: usize,
    pub stream_len: usize,
    pub alpha: f64,
    /// Minimum passing proportion from the `1 - alpha` confidence interval.
    pub min_proportion: f64,
    pub params: TestParams,
    pub tests: Vec<BatteryEntry>,
    pub all_pass: bool,
}

/// Lower end of `p +- 3 sqrt(p (1 - p) / s)` with `p = 1 - alpha`.
pub fn proportion_threshold(alpha: f64, streams: usize) -> f64 {
    let p = 1.0 - alpha;
    p - 3.0 * (p * (1.0 - p) / streams as f64).sqrt()
}

/// Chi-square test of the p-values against the uniform distribution on ten
/// equal bins.
pub fn uniformity_p_value(p_values: &[f64]) -> f64 {
    if p_values.is_empty() {
        return 0.0;
    }
    let mut bins = [0u64; 10];
    for &p in p_values {
        bins[((p * 10.0).floor() as usize).min(9)] += 1;
    }
    let expected = p_values.len() as f64 / 10.0;
    let chi2: f64 = bins
        .iter()
        .map(|&f| (f as f64 - expected).powi(2) / expected)
        .sum();
    igamc(4.5, chi2 / 2.0)
}

/// Splits `bits` into `streams` consecutive substreams of `stream_len` bits
/// and runs every test on each.
pub fn run_battery(
    bits: &BitStream,
    streams: usize,
    stream_len: usize,
    params: &TestParams,
) -> Result<NistBatteryResult> {
    params.validate()?;
    if streams == 0 || stream_len == 0 {
        return Err(Error::InputTooShort {
            test: "battery".into(),
            required: 1,
            got: 0,
        });
    }
    let required = streams.checked_mul(stream_len).unwrap_or(usize::MAX);
    if bits.len() < required {
        return Err(Error::InputTooShort {
            test: "battery".into(),
            required,
            got: bits.len(),
        });
    }

    let substreams: Vec<BitStream> = (0..streams)
        .map(|s| bits.slice(s * stream_len, (s + 1) * stream_len))
        .collect();
    let jobs: Vec<(usize, TestId)> = (0..streams)
        .flat_map(|s| TestId::ALL.into_iter().map(move |t| (s, t)))
        .collect();
    let results: Vec<TestResult> = jobs
        .par_iter()
        .map(|&(s, t)| run_test(t, &substreams[s], params))
        .collect::<Result<_>>()?;

    let min_proportion = proportion_threshold(params.alpha, streams);
    let tests: Vec<BatteryEntry> = TestId::ALL
        .iter()
        .enumerate()
        .map(|(ti, &test)| {
            let per_stream: Vec<&TestResult> = (0..streams)
                .map(|s| &results[s * TestId::ALL.len() + ti])
                .collect();
            let passed = per_stream.iter().filter(|r| r.pass).count();
            let variants = per_stream[0].p_values.len();
            let uniformity_p = (0..variants)
                .map(|v| {
                    let ps: Vec<f64> = per_stream.iter().map(|r| r.p_values[v]).collect();
                    uniformity_p_value(&ps)
                })
                .fold(1.0, f64::min);
            let proportion = passed as f64 / streams as f64;
            BatteryEntry {
                test,
                passed,
                streams,
                proportion,
                uniformity_p,
                pass: proportion >= min_proportion && uniformity_p >= UNIFORMITY_ALPHA,
                p_values: per_stream.iter().map(|r| r.p_values.clone()).collect(),
            }
        })
        .collect();

    Ok(NistBatteryResult {
        streams,
        stream_len,
        alpha: params.alpha,
        min_proportion,
        params: *params,
        all_pass: tests.iter().all(|t| t.pass),
        tests,
    })
}

impl NistBatteryResult {
    pub fn entry(&self, test: TestId) -> &BatteryEntry {
        self.tests
            .iter()
            .find(|e| e.test == test)
            .expect("battery covers every test")
    }

    /// Plain-text table: test, proportion, uniformity p-value, verdict.
    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{:<20} {:>10} {:>10} {:>5}", "NIST test", "Proportion", "P-value", "Pass");
        for e in &self.tests {
            let _ = writeln!(
                out,
                "{:<20} {:>10} {:>10.6} {:>5}",
                e.test.name(),
                format!("{}/{}", e.passed, e.streams),
                e.uniformity_p,
                if e.pass { "Y" } else { "N" }
            );
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nist::test_vectors::counter_stream;

    #[test]
    fn ten_stream_threshold() {
        let t = proportion_threshold(0.01, 10);
        assert!((t - 0.895_607_1).abs() < 1e-6, "{t}");
        // 9/10 passes, 8/10 does not
        assert!(0.9 >= t && 0.8 < t);
    }

    #[test]
    fn uniformity_of_perfect_spread() {
        let ps: Vec<f64> = (0..100).map(|i| (i as f64 + 0.5) / 100.0).collect();
        assert!((uniformity_p_value(&ps) - 1.0).abs() < 1e-12);
        // all in one bin: chi2 = 9 * s
        let clumped = vec![0.05; 10];
        let want = statrs::function::gamma::gamma_ur(4.5, 90.0 / 2.0);
        assert!((uniformity_p_value(&clumped) - want).abs() < 1e-12);
        assert_eq!(uniformity_p_value(&[1.0; 10]), uniformity_p_value(&[0.95; 10]));
    }

    #[test]
    fn too_short() {
        let b = counter_stream(1000);
        let err = run_battery(&b, 2, 600, &TestParams::default()).unwrap_err();
        assert_eq!(
            err,
            Error::InputTooShort {
                test: "battery".into(),
                required: 1200,
                got: 1000
            }
        );
    }

    #[test]
    fn table_layout() {
        let b = counter_stream(200_000);
        let r = run_battery(&b, 2, 100_000, &TestParams::default()).unwrap();
        let table = r.to_table();
        assert_eq!(table.lines().count(), 11);
        assert!(table.lines().nth(1).unwrap().starts_with("Frequency"));
        for e in &r.tests {
            assert!(e.passed <= e.streams);
            assert!((0.0..=1.0).contains(&e.uniformity_p));
        }
    }
}
