//! Packed binary sequences.
//!
//! Bits are stored MSB-first within each byte and any pad bits in the final
//! byte are kept at zero, so the raw byte buffer can be written to disk and
//! consumed by external test suites as-is.

use std::fmt;

#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct BitStream {
    bytes: Vec<u8>,
    bit_len: usize,
}

impl BitStream {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_capacity(bits: usize) -> Self {
        Self {
            bytes: Vec::with_capacity(bits.div_ceil(8)),
            bit_len: 0,
        }
    }

    /// Wraps whole bytes; `bit_len` becomes `8 * bytes.len()`.
    pub fn from_bytes(bytes: Vec<u8>) -> Self {
        let bit_len = bytes.len() * 8;
        Self { bytes, bit_len }
    }

    /// Wraps `bytes` keeping only the first `bit_len` bits. Trailing bits are
    /// cleared so the padding invariant holds.
    pub fn from_bytes_with_len(mut bytes: Vec<u8>, bit_len: usize) -> Self {
        assert!(
            bit_len <= bytes.len() * 8,
            "bit_len {bit_len} exceeds buffer of {} bytes",
            bytes.len()
        );
        bytes.truncate(bit_len.div_ceil(8));
        let rem = bit_len % 8;
        if rem != 0 {
            if let Some(last) = bytes.last_mut() {
                *last &= 0xFF << (8 - rem);
            }
        }
        Self { bytes, bit_len }
    }

    pub fn from_bits<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        let mut out = Self::new();
        out.extend(bits);
        out
    }

    /// Parses a string of `0`/`1` characters; whitespace is ignored.
    /// Returns `None` on any other character.
    pub fn from_ascii(s: &str) -> Option<Self> {
        let mut out = Self::new();
        for c in s.chars() {
            match c {
                '0' => out.push(false),
                '1' => out.push(true),
                c if c.is_whitespace() => {}
                _ => return None,
            }
        }
        Some(out)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.bit_len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.bit_len == 0
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.bytes
    }

    pub fn into_bytes(self) -> Vec<u8> {
        self.bytes
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.bit_len, "bit index {i} out of range {}", self.bit_len);
        (self.bytes[i / 8] >> (7 - i % 8)) & 1 == 1
    }

    #[inline]
    pub fn push(&mut self, bit: bool) {
        if self.bit_len % 8 == 0 {
            self.bytes.push(0);
        }
        if bit {
            let last = self.bytes.len() - 1;
            self.bytes[last] |= 0x80 >> (self.bit_len % 8);
        }
        self.bit_len += 1;
    }

    /// Appends a whole byte, MSB first.
    pub fn push_byte(&mut self, byte: u8) {
        if self.bit_len % 8 == 0 {
            self.bytes.push(byte);
            self.bit_len += 8;
        } else {
            for i in (0..8).rev() {
                self.push((byte >> i) & 1 == 1);
            }
        }
    }

    pub fn extend_from_bytes(&mut self, bytes: &[u8]) {
        if self.bit_len % 8 == 0 {
            self.bytes.extend_from_slice(bytes);
            self.bit_len += bytes.len() * 8;
        } else {
            bytes.iter().for_each(|&b| self.push_byte(b));
        }
    }

    pub fn iter(&self) -> Bits<'_> {
        Bits {
            stream: self,
            pos: 0,
        }
    }

    /// Bits `[start, end)` as a new stream.
    pub fn slice(&self, start: usize, end: usize) -> BitStream {
        assert!(start <= end && end <= self.bit_len);
        if start % 8 == 0 {
            let bytes = self.bytes[start / 8..end.div_ceil(8)].to_vec();
            return BitStream::from_bytes_with_len(bytes, end - start);
        }
        BitStream::from_bits((start..end).map(|i| self.get(i)))
    }

    pub fn count_ones(&self) -> usize {
        // pad bits are zero, so a byte-wise popcount is exact
        self.bytes.iter().map(|b| b.count_ones() as usize).sum()
    }

    /// Unpacks into one `u8` (0 or 1) per bit.
    pub fn to_bit_vec(&self) -> Vec<u8> {
        self.iter().map(u8::from).collect()
    }

    pub fn to_ascii(&self) -> String {
        self.iter().map(|b| if b { '1' } else { '0' }).collect()
    }
}

impl Extend<bool> for BitStream {
    fn extend<T: IntoIterator<Item = bool>>(&mut self, iter: T) {
        for bit in iter {
            self.push(bit);
        }
    }
}

impl FromIterator<bool> for BitStream {
    fn from_iter<T: IntoIterator<Item = bool>>(iter: T) -> Self {
        Self::from_bits(iter)
    }
}

impl fmt::Debug for BitStream {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.bit_len <= 64 {
            write!(f, "BitStream({})", self.to_ascii())
        } else {
            write!(f, "BitStream({} bits)", self.bit_len)
        }
    }
}

pub struct Bits<'a> {
    stream: &'a BitStream,
    pos: usize,
}

impl Iterator for Bits<'_> {
    type Item = bool;

    #[inline]
    fn next(&mut self) -> Option<bool> {
        if self.pos >= self.stream.bit_len {
            return None;
        }
        let bit = self.stream.get(self.pos);
        self.pos += 1;
        Some(bit)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let rest = self.stream.bit_len - self.pos;
        (rest, Some(rest))
    }
}

impl ExactSizeIterator for Bits<'_> {}

impl<'a> IntoIterator for &'a BitStream {
    type Item = bool;
    type IntoIter = Bits<'a>;

    fn into_iter(self) -> Bits<'a> {
        self.iter()
    }
}
