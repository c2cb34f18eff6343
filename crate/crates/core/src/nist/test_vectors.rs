//! Shared fixtures for the test modules. Expected p-values in the sibling
//! modules were produced by `tests/oracle/sp800_22_oracle.py`.

use sha2::{Digest, Sha256};

use crate::bitstream::BitStream;

pub const PI_100: &str = "1100100100001111110110101010001000100001011010001100\
                          001000110100110001001100011001100010100010111000";

pub const LONGEST_128: &str = "11001100000101010110110001001100111000000000001001\
                               00110101010001000100111101011010000000110101111100\
                               1100111001101101100010110010";

pub fn bs(s: &str) -> BitStream {
    BitStream::from_ascii(s).expect("binary string")
}

/// SHA-256 of a 4-byte big-endian counter, concatenated.
pub fn counter_stream(bits: usize) -> BitStream {
    let mut bytes = Vec::with_capacity(bits.div_ceil(8) + 32);
    let mut i = 0u32;
    while bytes.len() * 8 < bits {
        bytes.extend_from_slice(&Sha256::digest(i.to_be_bytes()));
        i += 1;
    }
    BitStream::from_bytes_with_len(bytes, bits)
}

#[track_caller]
pub fn assert_close(got: f64, want: f64) {
    let tol = 1e-9 * want.abs().max(1e-3);
    assert!((got - want).abs() <= tol, "got {got}, want {want}");
}
