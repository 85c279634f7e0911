//! Keyed deterministic randomness.
//!
//! Every secret in the scheme is derived from a 256-bit seed through a
//! SHA-256 counter-mode stream: block `k` of the stream is
//! `SHA-256(seed || tag || k)` with `k` encoded as a 64-bit big-endian
//! integer. The tag separates the roles of the three seeds in a [`KeySet`].

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use sha2::{Digest, Sha256};

use crate::bits::BitString;
use crate::error::{Error, Result};

pub const MAX_TAG_LEN: usize = 16;

pub const SCRAMBLE_TAG: &[u8] = b"scramble";
pub const MATRIX_TAG: &[u8] = b"matrix";
pub const EMBED_TAG: &[u8] = b"embed";

/// A 256-bit seed.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Seed(pub [u8; 32]);

impl Seed {
    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&b| b == 0)
    }

    pub fn to_hex(&self) -> String {
        let mut s = String::with_capacity(64);
        for b in self.0 {
            let _ = fmt::Write::write_fmt(&mut s, format_args!("{b:02x}"));
        }
        s
    }

    pub fn from_hex(text: &str) -> Result<Self> {
        let text = text.trim();
        if text.len() != 64 || !text.is_ascii() {
            return Err(Error::InvalidParameter("seed must be 64 hex digits"));
        }
        let mut out = [0u8; 32];
        for (i, byte) in out.iter_mut().enumerate() {
            *byte = u8::from_str_radix(&text[2 * i..2 * i + 2], 16)
                .map_err(|_| Error::InvalidParameter("seed must be 64 hex digits"))?;
        }
        Ok(Seed(out))
    }
}

impl fmt::Debug for Seed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // Keep secrets out of debug output.
        f.write_str("Seed(..)")
    }
}

/// The three independent secrets of the scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct KeySet {
    /// Permutes the MSB bits before reference coding.
    pub scramble: Seed,
    /// Draws the GF(2) coding matrices.
    pub matrix: Seed,
    /// Draws the per-block watermark bit permutation.
    pub embed: Seed,
}

impl KeySet {
    pub fn new(scramble: Seed, matrix: Seed, embed: Seed) -> Self {
        Self {
            scramble,
            matrix,
            embed,
        }
    }

    /// Convenience constructor used by tests and examples: three seeds
    /// derived from one label. Not meant for real keys.
    pub fn from_label(label: &[u8]) -> Self {
        let derive = |role: &[u8]| {
            let mut h = Sha256::new();
            h.update(b"fragmark-keyset");
            h.update(role);
            h.update(label);
            let digest = h.finalize();
            let mut out = [0u8; 32];
            out.copy_from_slice(&digest);
            Seed(out)
        };
        Self::new(derive(SCRAMBLE_TAG), derive(MATRIX_TAG), derive(EMBED_TAG))
    }

    /// True if any of the seeds is all zero. Legal, but almost certainly a
    /// mistake.
    pub fn has_zero_seed(&self) -> bool {
        self.scramble.is_zero() || self.matrix.is_zero() || self.embed.is_zero()
    }

    pub fn scramble_stream(&self) -> KeyStream {
        KeyStream::with_tag(self.scramble, SCRAMBLE_TAG)
    }

    pub fn matrix_stream(&self) -> KeyStream {
        KeyStream::with_tag(self.matrix, MATRIX_TAG)
    }

    pub fn embed_stream(&self) -> KeyStream {
        KeyStream::with_tag(self.embed, EMBED_TAG)
    }
}

/// SHA-256 counter-mode byte stream.
///
/// Bit reads take bits most-significant first from the current byte and
/// pull a new byte once all eight are used. Byte and word reads always start
/// on a fresh byte, discarding any partly consumed one.
#[derive(Clone)]
pub struct KeyStream {
    seed: Seed,
    tag: [u8; MAX_TAG_LEN],
    tag_len: usize,
    counter: u64,
    block: [u8; 32],
    offset: usize,
    bit_byte: u8,
    bits_left: u8,
}

impl KeyStream {
    pub fn new(seed: Seed, tag: &[u8]) -> Result<Self> {
        if tag.len() > MAX_TAG_LEN {
            return Err(Error::TagTooLong(tag.len()));
        }
        let mut t = [0u8; MAX_TAG_LEN];
        t[..tag.len()].copy_from_slice(tag);
        Ok(Self {
            seed,
            tag: t,
            tag_len: tag.len(),
            counter: 0,
            block: [0; 32],
            offset: 32,
            bit_byte: 0,
            bits_left: 0,
        })
    }

    fn with_tag(seed: Seed, tag: &'static [u8]) -> Self {
        Self::new(seed, tag).expect("built-in tags are short")
    }

    fn refill(&mut self) {
        let mut h = Sha256::new();
        h.update(self.seed.0);
        h.update(&self.tag[..self.tag_len]);
        h.update(self.counter.to_be_bytes());
        self.block.copy_from_slice(&h.finalize());
        self.counter += 1;
        self.offset = 0;
    }

    pub fn next_byte(&mut self) -> u8 {
        self.bits_left = 0;
        self.raw_byte()
    }

    fn raw_byte(&mut self) -> u8 {
        if self.offset == 32 {
            self.refill();
        }
        let b = self.block[self.offset];
        self.offset += 1;
        b
    }

    pub fn fill(&mut self, out: &mut [u8]) {
        self.bits_left = 0;
        for b in out {
            *b = self.raw_byte();
        }
    }

    /// Next eight bytes, big-endian.
    pub fn next_u64(&mut self) -> u64 {
        let mut buf = [0u8; 8];
        self.fill(&mut buf);
        u64::from_be_bytes(buf)
    }

    pub fn next_bit(&mut self) -> bool {
        if self.bits_left == 0 {
            self.bit_byte = self.raw_byte();
            self.bits_left = 8;
        }
        self.bits_left -= 1;
        (self.bit_byte >> self.bits_left) & 1 == 1
    }

    /// Uniform draw from `0..bound` by rejection sampling on 64-bit reads.
    pub fn next_below(&mut self, bound: u64) -> u64 {
        assert!(bound > 0, "empty range");
        // 0..=zone holds a whole number of copies of 0..bound.
        let zone = u64::MAX - (u64::MAX % bound + 1) % bound;
        loop {
            let x = self.next_u64();
            if x <= zone {
                return x % bound;
            }
        }
    }
}

impl fmt::Debug for KeyStream {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("KeyStream")
            .field("tag", &&self.tag[..self.tag_len])
            .field("counter", &self.counter)
            .finish_non_exhaustive()
    }
}

/// Builds the keystream for `(seed, domain_tag)`.
pub fn derive_stream(seed: Seed, domain_tag: &[u8]) -> Result<KeyStream> {
    KeyStream::new(seed, domain_tag)
}

/// A bijection on `0..n`; `map[i]` is the image of `i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    map: Vec<usize>,
}

impl Permutation {
    pub fn new(map: Vec<usize>) -> Result<Self> {
        let mut seen = alloc::vec![false; map.len()];
        for &x in &map {
            if x >= map.len() || seen[x] {
                return Err(Error::InvalidParameter("not a permutation"));
            }
            seen[x] = true;
        }
        Ok(Self { map })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            map: (0..n).collect(),
        }
    }

    /// Fisher-Yates shuffle of the identity driven by `stream`.
    pub fn generate(stream: &mut KeyStream, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("permutation size must be positive"));
        }
        let mut map: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            let j = stream.next_below(i as u64 + 1) as usize;
            map.swap(i, j);
        }
        Ok(Self { map })
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.map.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    #[inline]
    pub fn map(&self) -> &[usize] {
        &self.map
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.map[i]
    }

    pub fn inverse(&self) -> Self {
        let mut inv = alloc::vec![0; self.map.len()];
        for (i, &x) in self.map.iter().enumerate() {
            inv[x] = i;
        }
        Self { map: inv }
    }

    /// `self ∘ other`: `i -> self[other[i]]`.
    pub fn compose(&self, other: &Permutation) -> Self {
        assert_eq!(self.len(), other.len(), "composing permutations of different sizes");
        Self {
            map: other.map.iter().map(|&i| self.map[i]).collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(i, &x)| i == x)
    }

    /// Moves bit `i` of `bits` to position `map[i]`.
    pub fn scatter(&self, bits: &BitString) -> BitString {
        let mut out = BitString::zeros(bits.len());
        for (i, bit) in bits.iter().enumerate() {
            out.set(self.map[i], bit);
        }
        out
    }

    /// Inverse of [`Permutation::scatter`]: output bit `i` is `bits[map[i]]`.
    pub fn gather(&self, bits: &BitString) -> BitString {
        self.map.iter().map(|&p| bits[p]).collect()
    }

    /// The permutation with lexicographic rank `rank` among all
    /// permutations of `0..n`. Panics if `rank >= n!` or `n > 20`.
    pub fn unrank(n: usize, mut rank: u64) -> Self {
        assert!(n <= 20, "ranks only cover n <= 20");
        let mut radices = [1u64; 21];
        for k in 1..=n {
            radices[k] = radices[k - 1] * k as u64;
        }
        assert!(n == 0 || rank < radices[n], "rank out of range");
        let mut pool: Vec<usize> = (0..n).collect();
        let mut map = Vec::with_capacity(n);
        for k in (0..n).rev() {
            let idx = (rank / radices[k]) as usize;
            rank %= radices[k];
            map.push(pool.remove(idx));
        }
        Self { map }
    }

    /// Advances to the next permutation in lexicographic order; returns
    /// false (leaving `self` unchanged) at the last one.
    pub fn advance(&mut self) -> bool {
        next_lexicographic(&mut self.map)
    }
}

pub(crate) fn next_lexicographic(a: &mut [usize]) -> bool {
    if a.len() < 2 {
        return false;
    }
    let mut i = a.len() - 1;
    while i > 0 && a[i - 1] >= a[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = a.len() - 1;
    while a[j] <= a[i - 1] {
        j -= 1;
    }
    a.swap(i - 1, j);
    a[i..].reverse();
    true
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, x) in self.map.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}")?;
        }
        Ok(())
    }
}

impl FromStr for Permutation {
    type Err = Error;

    /// Parses a comma-separated index map such as `2,0,1`.
    fn from_str(s: &str) -> Result<Self> {
        let map = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::InvalidParameter("permutation entries must be integers"))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(map)
    }
}

/// A dense `v x u` matrix over GF(2), rows packed into 64-bit words.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    words_per_row: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let words_per_row = cols.div_ceil(64);
        Self {
            rows,
            cols,
            words_per_row,
            data: alloc::vec![0; rows * words_per_row],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// Fills `rows * cols` entries row-major from the stream's bits.
    pub fn generate(stream: &mut KeyStream, rows: usize, cols: usize) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidParameter("matrix dimensions must be positive"));
        }
        let mut m = Self::zeros(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                if stream.next_bit() {
                    m.set(r, c, true);
                }
            }
        }
        Ok(m)
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        (self.data[r * self.words_per_row + c / 64] >> (c % 64)) & 1 == 1
    }

    pub fn set(&mut self, r: usize, c: usize, bit: bool) {
        let w = &mut self.data[r * self.words_per_row + c / 64];
        if bit {
            *w |= 1 << (c % 64);
        } else {
            *w &= !(1 << (c % 64));
        }
    }

    pub fn count_ones(&self) -> usize {
        self.data.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Packs a column vector into words in the same layout as a row.
    pub fn pack_vector(&self, x: &[bool]) -> Vec<u64> {
        let mut words = alloc::vec![0u64; self.words_per_row];
        for (c, &bit) in x.iter().enumerate() {
            if bit {
                words[c / 64] |= 1 << (c % 64);
            }
        }
        words
    }

    /// Appends `self * x` (mod 2) to `out`; `x` is a packed column vector.
    pub fn mul_packed_into(&self, x: &[u64], out: &mut BitString) {
        for row in self.data.chunks_exact(self.words_per_row) {
            let parity = row
                .iter()
                .zip(x)
                .fold(0u32, |acc, (a, b)| acc ^ (a & b).count_ones());
            out.push(parity & 1 == 1);
        }
    }

    pub fn mul_vec(&self, x: &[bool]) -> Result<BitString> {
        if x.len() != self.cols {
            return Err(Error::LengthMismatch {
                expected: self.cols,
                actual: x.len(),
            });
        }
        let mut out = BitString::with_capacity(self.rows);
        self.mul_packed_into(&self.pack_vector(x), &mut out);
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn seed(byte: u8) -> Seed {
        Seed([byte; 32])
    }

    #[test]
    fn tag_limit() {
        assert!(KeyStream::new(seed(1), &[0; 16]).is_ok());
        assert_eq!(
            KeyStream::new(seed(1), &[0; 17]).unwrap_err(),
            Error::TagTooLong(17)
        );
    }

    #[test]
    fn deterministic_stream() {
        let mut a = derive_stream(seed(7), b"perm").unwrap();
        let mut b = derive_stream(seed(7), b"perm").unwrap();
        let mut x = [0u8; 1024];
        let mut y = [0u8; 1024];
        a.fill(&mut x);
        b.fill(&mut y);
        assert_eq!(x, y);
    }

    #[test]
    fn bits_are_msb_first() {
        let mut a = derive_stream(seed(3), b"t").unwrap();
        let first = a.clone().next_byte();
        let bits: Vec<bool> = (0..8).map(|_| a.next_bit()).collect();
        let packed = crate::bits::pack_msb_first(&bits);
        assert_eq!(packed[0], first);
    }

    #[test]
    fn next_below_stays_in_range() {
        let mut s = derive_stream(seed(9), b"t").unwrap();
        for bound in 1..200u64 {
            assert!(s.next_below(bound) < bound);
        }
        assert_eq!(s.next_below(1), 0);
    }

    #[test]
    fn single_element_permutation() {
        let mut s = derive_stream(seed(1), b"perm").unwrap();
        assert!(Permutation::generate(&mut s, 1).unwrap().is_identity());
    }

    #[test]
    fn swap_is_self_inverse() {
        let p = Permutation::new(alloc::vec![1, 0]).unwrap();
        assert_eq!(p.inverse(), p);
        assert!(Permutation::identity(5).inverse().is_identity());
    }

    #[test]
    fn permutation_parse_and_print() {
        let p: Permutation = "2, 0,1".parse().unwrap();
        assert_eq!(p.map(), [2, 0, 1]);
        assert_eq!(p.to_string(), "2,0,1");
        assert!("0,0".parse::<Permutation>().is_err());
        assert!("0,x".parse::<Permutation>().is_err());
    }

    #[test]
    fn unrank_matches_successive_advance() {
        let mut p = Permutation::identity(5);
        let mut rank = 0u64;
        loop {
            assert_eq!(Permutation::unrank(5, rank), p);
            rank += 1;
            if !p.advance() {
                break;
            }
        }
        assert_eq!(rank, 120);
    }

    #[test]
    fn scatter_gather_inverse() {
        let p: Permutation = "3,1,0,2".parse().unwrap();
        let bits = BitString::from_u8s(&[1, 1, 0, 0]);
        let placed = p.scatter(&bits);
        assert_eq!(placed.to_string(), "0101");
        assert_eq!(p.gather(&placed), bits);
    }

    #[test]
    fn one_by_one_matrix_takes_first_bit() {
        let mut s = derive_stream(seed(0), b"matrix").unwrap();
        let first_bit = s.clone().next_byte() >> 7 == 1;
        let m = BitMatrix::generate(&mut s, 1, 1).unwrap();
        assert_eq!(m.get(0, 0), first_bit);
    }

    #[test]
    fn matrix_density() {
        let mut s = derive_stream(seed(42), b"matrix").unwrap();
        let m = BitMatrix::generate(&mut s, 8, 32).unwrap();
        // 256 fair coin flips: 0.40..0.60 is beyond 3 sigma (sigma = 8).
        let density = m.count_ones() as f64 / 256.0;
        assert!((0.40..=0.60).contains(&density), "density {density}");
        let mut s2 = derive_stream(seed(42), b"matrix").unwrap();
        assert_eq!(BitMatrix::generate(&mut s2, 8, 32).unwrap(), m);
    }

    #[test]
    fn identity_matrix_product() {
        let x = [true, false, true, true, false];
        assert_eq!(
            BitMatrix::identity(5).mul_vec(&x).unwrap(),
            BitString::from(x.to_vec())
        );
    }

    #[test]
    fn wide_matrix_product_matches_naive() {
        let mut s = derive_stream(seed(5), b"m").unwrap();
        let m = BitMatrix::generate(&mut s, 7, 150).unwrap();
        let x: Vec<bool> = (0..150).map(|_| s.next_bit()).collect();
        let fast = m.mul_vec(&x).unwrap();
        for r in 0..7 {
            let naive = (0..150).filter(|&c| m.get(r, c) && x[c]).count() % 2 == 1;
            assert_eq!(fast[r], naive);
        }
    }

    proptest! {
        #[test]
        fn generated_permutations_are_bijections(n in 1usize..300, s in any::<[u8; 32]>()) {
            let mut stream = derive_stream(Seed(s), b"perm").unwrap();
            let p = Permutation::generate(&mut stream, n).unwrap();
            let mut sorted = p.map().to_vec();
            sorted.sort_unstable();
            prop_assert_eq!(sorted, (0..n).collect::<Vec<_>>());
            prop_assert!(p.compose(&p.inverse()).is_identity());
            prop_assert_eq!(p.inverse().inverse(), p.clone());
            let mut again = derive_stream(Seed(s), b"perm").unwrap();
            prop_assert_eq!(Permutation::generate(&mut again, n).unwrap(), p);
        }
    }
}
