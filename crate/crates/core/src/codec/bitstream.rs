//! MSB-first bit packing.

use crate::error::{Error, Result};

#[derive(Debug, Default, Clone)]
pub struct BitWriter {
    bytes: Vec<u8>,
    bit_len: usize,
}

impl BitWriter {
    pub fn new() -> Self {
        Self::default()
    }

    /// Appends the low `bits` bits of `value`, most significant first.
    pub fn write(&mut self, value: u64, bits: u32) {
        debug_assert!(bits <= 64);
        debug_assert!(bits == 64 || value >> bits == 0, "{value} does not fit in {bits} bits");
        for i in (0..bits).rev() {
            let bit = (value >> i) & 1;
            if self.bit_len % 8 == 0 {
                self.bytes.push(0);
            }
            if bit == 1 {
                let last = self.bytes.len() - 1;
                self.bytes[last] |= 0x80 >> (self.bit_len % 8);
            }
            self.bit_len += 1;
        }
    }

    pub fn write_f32(&mut self, v: f32) {
        self.write(v.to_bits() as u64, 32);
    }

    pub fn write_bytes(&mut self, bytes: &[u8]) {
        for &b in bytes {
            self.write(b as u64, 8);
        }
    }

    pub fn bit_len(&self) -> usize {
        self.bit_len
    }

    /// The packed bytes; the last byte is zero-padded.
    pub fn finish(self) -> Vec<u8> {
        self.bytes
    }
}

#[derive(Debug, Clone)]
pub struct BitReader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> BitReader<'a> {
    pub fn new(bytes: &'a [u8]) -> Self {
        Self { bytes, pos: 0 }
    }

    pub fn read(&mut self, bits: u32) -> Result<u64> {
        if self.remaining() < bits as usize {
            return Err(Error::TruncatedStream);
        }
        let mut v = 0u64;
        for _ in 0..bits {
            let byte = self.bytes[self.pos / 8];
            let bit = (byte >> (7 - self.pos % 8)) & 1;
            v = (v << 1) | bit as u64;
            self.pos += 1;
        }
        Ok(v)
    }

    pub fn read_f32(&mut self) -> Result<f32> {
        Ok(f32::from_bits(self.read(32)? as u32))
    }

    pub fn position(&self) -> usize {
        self.pos
    }

    pub fn remaining(&self) -> usize {
        self.bytes.len() * 8 - self.pos
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn msb_first_layout() {
        let mut w = BitWriter::new();
        w.write(0b101, 3);
        w.write(0b1, 1);
        w.write(0xF, 4);
        w.write(0b11, 2);
        assert_eq!(w.bit_len(), 10);
        assert_eq!(w.finish(), vec![0b1011_1111, 0b1100_0000]);
    }

    #[test]
    fn round_trip() {
        let fields: Vec<(u64, u32)> = vec![(5, 3), (0, 1), (65535, 16), (1, 64 - 1), (42, 6), (3, 2)];
        let mut w = BitWriter::new();
        for &(v, b) in &fields {
            w.write(v, b);
        }
        w.write_f32(-1.25);
        let bytes = w.finish();
        let mut r = BitReader::new(&bytes);
        for &(v, b) in &fields {
            assert_eq!(r.read(b).unwrap(), v);
        }
        assert_eq!(r.read_f32().unwrap(), -1.25);
        assert!(r.remaining() < 8);
        assert!(matches!(r.read(8), Err(Error::TruncatedStream)));
    }
}
