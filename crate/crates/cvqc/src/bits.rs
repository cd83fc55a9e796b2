//! Fixed-length bitstrings.
//!
//! Protocol messages (preimages, equation vectors, images, basis choices) are
//! bitstrings whose length is significant and rarely a multiple of eight.
//! [`Bits`] stores them packed, most-significant bit first, so that the byte
//! encoding of a bitstring is canonical: bit `i` lives at bit `7 - i % 8` of
//! byte `i / 8`, and trailing pad bits of the last byte are always zero.

use rand::Rng;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;

use crate::error::{Error, Result};

/// A packed bitstring of explicit length.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bits {
    len: usize,
    bytes: Vec<u8>,
}

impl Bits {
    /// The all-zero string of `len` bits.
    pub fn zero(len: usize) -> Self {
        Bits {
            len,
            bytes: vec![0u8; len.div_ceil(8)],
        }
    }

    /// Builds from individual bits, index 0 first.
    pub fn from_bools(bits: &[bool]) -> Self {
        let mut out = Bits::zero(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            out.set(i, b);
        }
        out
    }

    /// Interprets the low `len` bits of `value` as a bitstring, most
    /// significant of those bits first. `len` must be at most 64.
    pub fn from_u64(value: u64, len: usize) -> Self {
        assert!(len <= 64, "from_u64 supports at most 64 bits");
        let mut out = Bits::zero(len);
        for i in 0..len {
            out.set(i, (value >> (len - 1 - i)) & 1 == 1);
        }
        out
    }

    /// Uniformly random string of `len` bits.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, len: usize) -> Self {
        let mut out = Bits::zero(len);
        for i in 0..len {
            out.set(i, rng.gen::<bool>());
        }
        out
    }

    /// Uniformly random *nonzero* string of `len` bits (`len` must be > 0).
    pub fn random_nonzero<R: Rng + ?Sized>(rng: &mut R, len: usize) -> Self {
        assert!(len > 0, "a nonzero bitstring needs at least one bit");
        loop {
            let b = Self::random(rng, len);
            if !b.is_zero() {
                return b;
            }
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range for {} bits", self.len);
        (self.bytes[i / 8] >> (7 - i % 8)) & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit index {i} out of range for {} bits", self.len);
        let mask = 1u8 << (7 - i % 8);
        if value {
            self.bytes[i / 8] |= mask;
        } else {
            self.bytes[i / 8] &= !mask;
        }
    }

    /// Flips bit `i`.
    pub fn flip(&mut self, i: usize) {
        let v = self.get(i);
        self.set(i, !v);
    }

    pub fn is_zero(&self) -> bool {
        self.bytes.iter().all(|&b| b == 0)
    }

    /// Bitwise XOR; both operands must have equal length.
    pub fn xor(&self, other: &Bits) -> Bits {
        assert_eq!(self.len, other.len, "xor of unequal-length bitstrings");
        Bits {
            len: self.len,
            bytes: self
                .bytes
                .iter()
                .zip(&other.bytes)
                .map(|(a, b)| a ^ b)
                .collect(),
        }
    }

    /// Inner product modulo 2; both operands must have equal length.
    pub fn dot(&self, other: &Bits) -> bool {
        assert_eq!(self.len, other.len, "dot of unequal-length bitstrings");
        let mut acc = 0u8;
        for (a, b) in self.bytes.iter().zip(&other.bytes) {
            acc ^= a & b;
        }
        acc.count_ones() % 2 == 1
    }

    /// Concatenation.
    pub fn concat(&self, other: &Bits) -> Bits {
        let mut out = Bits::zero(self.len + other.len);
        for i in 0..self.len {
            out.set(i, self.get(i));
        }
        for i in 0..other.len {
            out.set(self.len + i, other.get(i));
        }
        out
    }

    /// The substring `[start, start + len)`.
    pub fn slice(&self, start: usize, len: usize) -> Bits {
        assert!(start + len <= self.len, "slice out of range");
        let mut out = Bits::zero(len);
        for i in 0..len {
            out.set(i, self.get(start + i));
        }
        out
    }

    /// Packed bytes, most-significant bit first, trailing pad bits zero.
    pub fn as_bytes(&self) -> &[u8] {
        &self.bytes
    }

    /// Reads the string as an unsigned integer, first bit most significant.
    /// Defined for at most 64 bits.
    pub fn to_u64(&self) -> u64 {
        assert!(self.len <= 64, "to_u64 supports at most 64 bits");
        let mut v = 0u64;
        for i in 0..self.len {
            v = (v << 1) | self.get(i) as u64;
        }
        v
    }

    /// Reconstructs from packed bytes produced by [`Bits::as_bytes`].
    pub fn from_bytes(len: usize, bytes: &[u8]) -> Result<Self> {
        if bytes.len() != len.div_ceil(8) {
            return Err(Error::Encoding(format!(
                "bitstring of {len} bits needs {} bytes, got {}",
                len.div_ceil(8),
                bytes.len()
            )));
        }
        let out = Bits {
            len,
            bytes: bytes.to_vec(),
        };
        // Reject nonzero pad bits so every bitstring has exactly one encoding.
        if len % 8 != 0 {
            let pad = out.bytes[len / 8] & ((1u8 << (8 - len % 8)) - 1);
            if pad != 0 {
                return Err(Error::Encoding("nonzero pad bits in bitstring".into()));
            }
        }
        Ok(out)
    }

    /// Compact text form `"<len>:<hex>"`, e.g. `"12:0ab0"`.
    pub fn to_text(&self) -> String {
        format!("{}:{}", self.len, hex::encode(&self.bytes))
    }

    /// Parses the form produced by [`Bits::to_text`].
    pub fn from_text(s: &str) -> Result<Self> {
        let (len, hx) = s
            .split_once(':')
            .ok_or_else(|| Error::Encoding(format!("bad bitstring literal {s:?}")))?;
        let len: usize = len
            .parse()
            .map_err(|_| Error::Encoding(format!("bad bitstring length in {s:?}")))?;
        let bytes = hex::decode(hx).map_err(|e| Error::Encoding(format!("bad hex: {e}")))?;
        Self::from_bytes(len, &bytes)
    }

    /// Iterator over the bits, index 0 first.
    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(|i| self.get(i))
    }
}

impl fmt::Debug for Bits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Bits({})", self.to_text())
    }
}

impl fmt::Display for Bits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.iter() {
            write!(f, "{}", b as u8)?;
        }
        Ok(())
    }
}

impl Serialize for Bits {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_text())
    }
}

impl<'de> Deserialize<'de> for Bits {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Bits::from_text(&s).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn pack_order_is_msb_first() {
        let b = Bits::from_bools(&[true, false, false, false, false, false, false, false, true]);
        assert_eq!(b.as_bytes(), &[0b1000_0000, 0b1000_0000]);
        assert_eq!(b.len(), 9);
        assert!(b.get(0));
        assert!(b.get(8));
        assert!(!b.get(1));
    }

    #[test]
    fn u64_round_trip() {
        let b = Bits::from_u64(0b1011, 4);
        assert_eq!(b.to_u64(), 0b1011);
        assert_eq!(format!("{b}"), "1011");
        assert_eq!(Bits::from_u64(0, 3).to_u64(), 0);
    }

    #[test]
    fn xor_dot_and_zero() {
        let a = Bits::from_u64(0b1100, 4);
        let b = Bits::from_u64(0b1010, 4);
        assert_eq!(a.xor(&b).to_u64(), 0b0110);
        // a.b = 1*1 + 1*0 + 0*1 + 0*0 = 1 mod 2.
        assert!(a.dot(&b));
        assert!(!a.dot(&a.clone()) == (a.to_u64().count_ones() % 2 == 0));
        assert!(Bits::zero(5).is_zero());
        assert!(!a.is_zero());
    }

    #[test]
    fn concat_and_slice() {
        let a = Bits::from_u64(0b101, 3);
        let b = Bits::from_u64(0b01, 2);
        let c = a.concat(&b);
        assert_eq!(c.len(), 5);
        assert_eq!(c.to_u64(), 0b10101);
        assert_eq!(c.slice(0, 3).to_u64(), 0b101);
        assert_eq!(c.slice(3, 2).to_u64(), 0b01);
    }

    #[test]
    fn text_round_trip_and_pad_rejection() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for len in [1usize, 3, 8, 9, 17, 64] {
            let b = Bits::random(&mut rng, len);
            let back = Bits::from_text(&b.to_text()).unwrap();
            assert_eq!(b, back);
        }
        // 3-bit string with a set pad bit must not parse.
        assert!(Bits::from_bytes(3, &[0b0001_0000]).is_err());
        assert!(Bits::from_bytes(3, &[0b0010_0000]).is_ok());
    }

    #[test]
    fn random_nonzero_never_zero() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..200 {
            assert!(!Bits::random_nonzero(&mut rng, 1).is_zero());
            assert!(!Bits::random_nonzero(&mut rng, 3).is_zero());
        }
    }

    #[test]
    fn serde_uses_text_form() {
        let b = Bits::from_u64(0b1011, 4);
        let js = serde_json::to_string(&b).unwrap();
        assert_eq!(js, "\"4:b0\"");
        let back: Bits = serde_json::from_str(&js).unwrap();
        assert_eq!(b, back);
    }
}
