//! Ordered bit sequences.

use alloc::vec::Vec;
use core::ops::{BitXor, Index};

/// An ordered sequence of bits, indexed from 0.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct BitString {
    bits: Vec<bool>,
}

impl BitString {
    pub fn new() -> Self {
        Self { bits: Vec::new() }
    }

    pub fn with_capacity(capacity: usize) -> Self {
        Self {
            bits: Vec::with_capacity(capacity),
        }
    }

    pub fn zeros(len: usize) -> Self {
        Self {
            bits: alloc::vec![false; len],
        }
    }

    /// Builds a bit string from 0/1 values; any non-zero byte counts as 1.
    pub fn from_u8s(values: &[u8]) -> Self {
        values.iter().map(|&v| v != 0).collect()
    }

    /// Unpacks bytes most-significant bit first.
    pub fn from_bytes_msb_first(bytes: &[u8]) -> Self {
        bytes
            .iter()
            .flat_map(|&byte| (0..8).rev().map(move |k| (byte >> k) & 1 == 1))
            .collect()
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.bits.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    #[inline]
    pub fn get(&self, index: usize) -> Option<bool> {
        self.bits.get(index).copied()
    }

    #[inline]
    pub fn set(&mut self, index: usize, bit: bool) {
        self.bits[index] = bit;
    }

    #[inline]
    pub fn push(&mut self, bit: bool) {
        self.bits.push(bit);
    }

    pub fn extend_from(&mut self, other: &BitString) {
        self.bits.extend_from_slice(&other.bits);
    }

    pub fn as_slice(&self) -> &[bool] {
        &self.bits
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = bool> + '_ {
        self.bits.iter().copied()
    }

    pub fn slice(&self, start: usize, end: usize) -> BitString {
        Self {
            bits: self.bits[start..end].to_vec(),
        }
    }

    pub fn count_ones(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    /// Packs the bits most-significant bit first; the final byte is
    /// zero-padded.
    pub fn to_bytes_msb_first(&self) -> Vec<u8> {
        pack_msb_first(&self.bits)
    }

    pub fn to_u8s(&self) -> Vec<u8> {
        self.bits.iter().map(|&b| b as u8).collect()
    }
}

pub(crate) fn pack_msb_first(bits: &[bool]) -> Vec<u8> {
    let mut out = alloc::vec![0u8; bits.len().div_ceil(8)];
    for (i, &bit) in bits.iter().enumerate() {
        if bit {
            out[i / 8] |= 0x80 >> (i % 8);
        }
    }
    out
}

impl Index<usize> for BitString {
    type Output = bool;

    fn index(&self, index: usize) -> &bool {
        &self.bits[index]
    }
}

impl FromIterator<bool> for BitString {
    fn from_iter<I: IntoIterator<Item = bool>>(iter: I) -> Self {
        Self {
            bits: iter.into_iter().collect(),
        }
    }
}

impl From<Vec<bool>> for BitString {
    fn from(bits: Vec<bool>) -> Self {
        Self { bits }
    }
}

impl BitXor for &BitString {
    type Output = BitString;

    /// Panics if the lengths differ.
    fn bitxor(self, rhs: &BitString) -> BitString {
        assert_eq!(self.len(), rhs.len(), "xor of unequal-length bit strings");
        self.iter().zip(rhs.iter()).map(|(a, b)| a ^ b).collect()
    }
}

impl core::fmt::Display for BitString {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        for bit in self.iter() {
            f.write_str(if bit { "1" } else { "0" })?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn packing_is_msb_first_and_zero_padded() {
        let bits = BitString::from_u8s(&[1, 0, 1, 1, 0, 0, 0, 0, 1]);
        assert_eq!(bits.to_bytes_msb_first(), [0b1011_0000, 0b1000_0000]);
    }

    #[test]
    fn unpack_then_pack() {
        let bytes = [0xa5, 0x00, 0xff, 0x3c];
        assert_eq!(
            BitString::from_bytes_msb_first(&bytes).to_bytes_msb_first(),
            bytes
        );
    }

    #[test]
    fn xor_and_display() {
        let a = BitString::from_u8s(&[1, 1, 0, 0]);
        let b = BitString::from_u8s(&[1, 0, 1, 0]);
        assert_eq!((&a ^ &b).to_string(), "0110");
    }
}
