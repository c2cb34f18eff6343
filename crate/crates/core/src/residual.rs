//! Residual series ingest and min-max normalization.
//!
//! The interchange format is a small CSV:
//!
//! ```text
//! # pulsar_id: J0030+0451
//! # dataset: EPTA
//! mjd,residual_us[,uncertainty_us]
//! 55000.0,1.5
//! 55001.0,-0.5
//! ```
//!
//! Lines starting with `#` are comments; `pulsar_id` and `dataset` comments
//! populate the series metadata. Rows are stably sorted by epoch after
//! parsing, and the entropy pipeline consumes residuals in epoch order.

use std::fmt::Write as _;

use crate::error::{Error, Result};

pub const HEADER: &str = "mjd,residual_us";
pub const HEADER_WITH_UNCERTAINTY: &str = "mjd,residual_us,uncertainty_us";

#[derive(Debug, Clone, PartialEq)]
pub struct ResidualSeries {
    pub pulsar_id: String,
    pub dataset_tag: String,
    epochs: Vec<f64>,
    residuals: Vec<f64>,
    uncertainties: Option<Vec<f64>>,
}

impl ResidualSeries {
    /// Builds a series after checking lengths, finiteness, and epoch order.
    pub fn new(
        pulsar_id: impl Into<String>,
        dataset_tag: impl Into<String>,
        epochs: Vec<f64>,
        residuals: Vec<f64>,
        uncertainties: Option<Vec<f64>>,
    ) -> Result<Self> {
        let n = epochs.len();
        if residuals.len() != n || uncertainties.as_ref().is_some_and(|u| u.len() != n) {
            return Err(Error::MalformedRow {
                line: 0,
                reason: "column lengths differ".into(),
            });
        }
        if n < 2 {
            return Err(Error::TooShort { got: n });
        }
        let columns = [Some(&epochs), Some(&residuals), uncertainties.as_ref()];
        for col in columns.into_iter().flatten() {
            if let Some(i) = col.iter().position(|v| !v.is_finite()) {
                return Err(Error::NonFinite { line: i });
            }
        }
        if let Some(i) = epochs.windows(2).position(|w| w[1] < w[0]) {
            return Err(Error::UnsortedEpochs { index: i + 1 });
        }
        Ok(Self {
            pulsar_id: pulsar_id.into(),
            dataset_tag: dataset_tag.into(),
            epochs,
            residuals,
            uncertainties,
        })
    }

    pub fn len(&self) -> usize {
        self.epochs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.epochs.is_empty()
    }

    pub fn epochs(&self) -> &[f64] {
        &self.epochs
    }

    pub fn residuals(&self) -> &[f64] {
        &self.residuals
    }

    pub fn uncertainties(&self) -> Option<&[f64]> {
        self.uncertainties.as_deref()
    }

    /// Serializes back to the CSV interchange format. Floats are written in
    /// shortest round-trip form, so re-parsing is exact.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        if !self.pulsar_id.is_empty() {
            let _ = writeln!(out, "# pulsar_id: {}", self.pulsar_id);
        }
        if !self.dataset_tag.is_empty() {
            let _ = writeln!(out, "# dataset: {}", self.dataset_tag);
        }
        match &self.uncertainties {
            Some(unc) => {
                out.push_str(HEADER_WITH_UNCERTAINTY);
                out.push('\n');
                for ((e, r), u) in self.epochs.iter().zip(&self.residuals).zip(unc) {
                    let _ = writeln!(out, "{e:?},{r:?},{u:?}");
                }
            }
            None => {
                out.push_str(HEADER);
                out.push('\n');
                for (e, r) in self.epochs.iter().zip(&self.residuals) {
                    let _ = writeln!(out, "{e:?},{r:?}");
                }
            }
        }
        out
    }
}

fn parse_field(field: &str, line: usize, name: &str) -> Result<f64> {
    let v: f64 = field.trim().parse().map_err(|_| Error::MalformedRow {
        line,
        reason: format!("{name} field {field:?} is not a number"),
    })?;
    if !v.is_finite() {
        return Err(Error::NonFinite { line });
    }
    Ok(v)
}

/// Parses residual CSV bytes into a validated, epoch-sorted series.
pub fn parse_residual_csv(bytes: &[u8]) -> Result<ResidualSeries> {
    let text = std::str::from_utf8(bytes).map_err(|e| Error::MalformedRow {
        line: 0,
        reason: format!("input is not UTF-8: {e}"),
    })?;

    let mut pulsar_id = String::new();
    let mut dataset_tag = String::new();
    let mut with_uncertainty = None;
    let mut rows: Vec<(f64, f64, Option<f64>)> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            if let Some((key, value)) = comment.split_once(':') {
                match key.trim() {
                    "pulsar_id" => pulsar_id = value.trim().to_string(),
                    "dataset" | "dataset_tag" => dataset_tag = value.trim().to_string(),
                    _ => {}
                }
            }
            continue;
        }
        let Some(has_unc) = with_uncertainty else {
            let header: String = line.chars().filter(|c| !c.is_whitespace()).collect();
            with_uncertainty = Some(match header.as_str() {
                HEADER => false,
                HEADER_WITH_UNCERTAINTY => true,
                _ => {
                    return Err(Error::MalformedRow {
                        line: line_no,
                        reason: format!("expected header {HEADER:?} or {HEADER_WITH_UNCERTAINTY:?}"),
                    })
                }
            });
            continue;
        };

        let fields: Vec<&str> = line.split(',').collect();
        let expected = if has_unc { 3 } else { 2 };
        if fields.len() != expected {
            return Err(Error::MalformedRow {
                line: line_no,
                reason: format!("expected {expected} fields, found {}", fields.len()),
            });
        }
        let mjd = parse_field(fields[0], line_no, "mjd")?;
        let res = parse_field(fields[1], line_no, "residual_us")?;
        let unc = if has_unc {
            Some(parse_field(fields[2], line_no, "uncertainty_us")?)
        } else {
            None
        };
        rows.push((mjd, res, unc));
    }

    if with_uncertainty.is_none() {
        return Err(Error::MalformedRow {
            line: 0,
            reason: "missing header line".into(),
        });
    }
    if rows.len() < 2 {
        return Err(Error::TooShort { got: rows.len() });
    }

    // stable: same-epoch rows keep file order
    rows.sort_by(|a, b| a.0.total_cmp(&b.0));

    let epochs = rows.iter().map(|r| r.0).collect();
    let residuals = rows.iter().map(|r| r.1).collect();
    let uncertainties = if with_uncertainty == Some(true) {
        Some(rows.iter().map(|r| r.2.unwrap_or_default()).collect())
    } else {
        None
    };
    ResidualSeries::new(pulsar_id, dataset_tag, epochs, residuals, uncertainties)
}

/// Values in `[0, 1]`, one per residual, in epoch order.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalizedSeries {
    values: Vec<f64>,
    pub source_id: String,
}

impl NormalizedSeries {
    /// Wraps values already in `[0, 1]`. Unlike [`normalize`], this does not
    /// require both endpoints to be attained.
    pub fn from_values(values: Vec<f64>, source_id: impl Into<String>) -> Result<Self> {
        if let Some(&v) = values.iter().find(|v| !(0.0..=1.0).contains(*v)) {
            return Err(Error::OutOfRange(v));
        }
        Ok(Self {
            values,
            source_id: source_id.into(),
        })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Min-max scales the residuals to `[0, 1]`, preserving temporal order.
pub fn normalize(series: &ResidualSeries) -> Result<NormalizedSeries> {
    normalize_values(series.residuals(), &series.pulsar_id)
}

pub fn normalize_values(values: &[f64], source_id: &str) -> Result<NormalizedSeries> {
    let (min, max) = values
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        });
    if values.is_empty() || max <= min {
        return Err(Error::DegenerateSeries);
    }
    let range = max - min;
    let values = if range.is_finite() {
        values.iter().map(|&v| (v - min) / range).collect()
    } else {
        // range overflowed; halve everything first
        let (lo, r) = (min / 2.0, max / 2.0 - min / 2.0);
        values.iter().map(|&v| (v / 2.0 - lo) / r).collect()
    };
    Ok(NormalizedSeries {
        values,
        source_id: source_id.to_string(),
    })
}
