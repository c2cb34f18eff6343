//! Random bit generation from pulsar timing residuals.
//!
//! The pipeline is: parse a residual CSV ([`residual`]), min-max normalize,
//! quantize to bits ([`quantize`]), optionally run an extractor
//! ([`extract`]), then measure the result with plug-in entropy estimators
//! ([`entropy`]) and the SP800-22 battery ([`nist`]).

pub mod bitstream;
pub mod cli;
pub mod entropy;
pub mod error;
pub mod extract;
pub mod nist;
pub mod pipeline;
pub mod quantize;
pub mod residual;

pub use bitstream::BitStream;
pub use error::{Error, Result};
