//! Canonical binary encoding.
//!
//! Keys, transcripts, and hash inputs all reduce to one byte layout so that
//! digests are stable across runs and platforms: fixed-width integers are
//! big-endian, floats are the big-endian bytes of their IEEE-754 bit pattern,
//! and variable-length fields carry a `u32` length prefix. Encoders write a
//! short ASCII tag first; decoders check it, which doubles as a format
//! version gate.

use sha2::{Digest, Sha256};

use crate::bits::Bits;
use crate::error::{Error, Result};

/// Append-only canonical encoder.
#[derive(Default)]
pub struct Writer {
    buf: Vec<u8>,
}

impl Writer {
    pub fn new() -> Self {
        Self::default()
    }

    /// Starts a buffer with a format tag (written length-prefixed).
    pub fn tagged(tag: &str) -> Self {
        let mut w = Self::new();
        w.put_bytes(tag.as_bytes());
        w
    }

    pub fn put_u8(&mut self, v: u8) {
        self.buf.push(v);
    }

    pub fn put_bool(&mut self, v: bool) {
        self.buf.push(v as u8);
    }

    pub fn put_u32(&mut self, v: u32) {
        self.buf.extend_from_slice(&v.to_be_bytes());
    }

    pub fn put_u64(&mut self, v: u64) {
        self.buf.extend_from_slice(&v.to_be_bytes());
    }

    /// IEEE-754 bit pattern, big-endian. `-0.0` and `0.0` encode differently;
    /// callers that need those identified should normalize first.
    pub fn put_f64(&mut self, v: f64) {
        self.buf.extend_from_slice(&v.to_bits().to_be_bytes());
    }

    /// Length-prefixed byte field.
    pub fn put_bytes(&mut self, v: &[u8]) {
        self.put_u32(u32::try_from(v.len()).expect("field too long"));
        self.buf.extend_from_slice(v);
    }

    /// Bitstring: bit length then packed bytes.
    pub fn put_bits(&mut self, v: &Bits) {
        self.put_u32(u32::try_from(v.len()).expect("bitstring too long"));
        self.buf.extend_from_slice(v.as_bytes());
    }

    pub fn finish(self) -> Vec<u8> {
        self.buf
    }

    pub fn as_slice(&self) -> &[u8] {
        &self.buf
    }
}

/// Strict decoder over a canonical buffer; every read checks bounds and
/// [`Reader::done`] enforces full consumption.
pub struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    pub fn new(buf: &'a [u8]) -> Self {
        Reader { buf, pos: 0 }
    }

    /// Opens a tagged buffer, checking the tag.
    pub fn tagged(buf: &'a [u8], tag: &str) -> Result<Self> {
        let mut r = Self::new(buf);
        let got = r.get_bytes()?;
        if got != tag.as_bytes() {
            return Err(Error::Encoding(format!(
                "expected tag {tag:?}, found {:?}",
                String::from_utf8_lossy(&got)
            )));
        }
        Ok(r)
    }

    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        if self.buf.len() - self.pos < n {
            return Err(Error::Encoding("truncated buffer".into()));
        }
        let s = &self.buf[self.pos..self.pos + n];
        self.pos += n;
        Ok(s)
    }

    pub fn get_u8(&mut self) -> Result<u8> {
        Ok(self.take(1)?[0])
    }

    pub fn get_bool(&mut self) -> Result<bool> {
        match self.get_u8()? {
            0 => Ok(false),
            1 => Ok(true),
            b => Err(Error::Encoding(format!("bad bool byte {b}"))),
        }
    }

    pub fn get_u32(&mut self) -> Result<u32> {
        Ok(u32::from_be_bytes(self.take(4)?.try_into().unwrap()))
    }

    pub fn get_u64(&mut self) -> Result<u64> {
        Ok(u64::from_be_bytes(self.take(8)?.try_into().unwrap()))
    }

    pub fn get_f64(&mut self) -> Result<f64> {
        Ok(f64::from_bits(self.get_u64()?))
    }

    pub fn get_bytes(&mut self) -> Result<Vec<u8>> {
        let n = self.get_u32()? as usize;
        Ok(self.take(n)?.to_vec())
    }

    pub fn get_bits(&mut self) -> Result<Bits> {
        let len = self.get_u32()? as usize;
        let bytes = self.take(len.div_ceil(8))?;
        Bits::from_bytes(len, bytes)
    }

    /// Errors unless the buffer was consumed exactly.
    pub fn done(&self) -> Result<()> {
        if self.pos == self.buf.len() {
            Ok(())
        } else {
            Err(Error::Encoding(format!(
                "{} trailing bytes after decode",
                self.buf.len() - self.pos
            )))
        }
    }
}

/// SHA-256 of a byte buffer.
pub fn sha256(data: &[u8]) -> [u8; 32] {
    let mut h = Sha256::new();
    h.update(data);
    h.finalize().into()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let mut w = Writer::tagged("T-v1");
        w.put_u8(7);
        w.put_bool(true);
        w.put_u32(513);
        w.put_u64(1 << 40);
        w.put_f64(-0.25);
        w.put_bytes(b"abc");
        w.put_bits(&Bits::from_u64(0b101, 3));
        let buf = w.finish();

        let mut r = Reader::tagged(&buf, "T-v1").unwrap();
        assert_eq!(r.get_u8().unwrap(), 7);
        assert!(r.get_bool().unwrap());
        assert_eq!(r.get_u32().unwrap(), 513);
        assert_eq!(r.get_u64().unwrap(), 1 << 40);
        assert_eq!(r.get_f64().unwrap(), -0.25);
        assert_eq!(r.get_bytes().unwrap(), b"abc");
        assert_eq!(r.get_bits().unwrap().to_u64(), 0b101);
        r.done().unwrap();
    }

    #[test]
    fn tag_mismatch_and_truncation_fail() {
        let mut w = Writer::tagged("T-v1");
        w.put_u32(9);
        let buf = w.finish();
        assert!(Reader::tagged(&buf, "T-v2").is_err());

        let mut r = Reader::tagged(&buf[..buf.len() - 1], "T-v1").unwrap();
        assert!(r.get_u32().is_err());
    }

    #[test]
    fn trailing_bytes_detected() {
        let mut w = Writer::tagged("T-v1");
        w.put_u8(1);
        let mut buf = w.finish();
        buf.push(0);
        let mut r = Reader::tagged(&buf, "T-v1").unwrap();
        r.get_u8().unwrap();
        assert!(r.done().is_err());
    }

    #[test]
    fn sha256_known_vector() {
        // SHA-256 of the empty string, a fixed reference value.
        assert_eq!(
            hex::encode(sha256(b"")),
            "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855"
        );
    }
}
