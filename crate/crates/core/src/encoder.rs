//! Watermark embedding.
//!
//! The pipeline runs in five stages:
//!
//! 1. the image is split into `b x b` blocks,
//! 2. the `m` MSB planes are read out and scrambled by a keyed permutation,
//! 3. the scrambled bits are cut into `u`-bit subsets and each subset is
//!    compressed to `v` reference bits by its own keyed GF(2) matrix,
//! 4. each block hashes its `m'` MSB planes together with its share of the
//!    reference bits into `La` authentication bits (no key involved),
//! 5. authentication and reference bits form a canonical vector of `l*b^2`
//!    bits which is permuted by a keyed permutation and written over the
//!    block's `l` LSB planes.

use alloc::vec::Vec;

use sha2::{Digest, Sha256};

use crate::bits::{pack_msb_first, BitString};
use crate::error::{Error, Result};
use crate::image::{gather_bits, GrayImage};
use crate::keystream::{BitMatrix, KeySet, KeyStream, Permutation};
use crate::params::{CheckedParams, SchemeParams, MAX_AUTH_BITS};

/// Reads the `m` MSB planes and scrambles them: `C[σ(j)] = M[j]`.
pub fn scramble_msb(img: &GrayImage, params: &CheckedParams, keys: &KeySet) -> Result<BitString> {
    let msb = img.extract_plane_bits(&params.reference_planes())?;
    let sigma = Permutation::generate(&mut keys.scramble_stream(), msb.len())?;
    Ok(sigma.scatter(&msb))
}

/// Codes the scrambled bits `C` into reference bits, `r_j = H_j c_j` for
/// consecutive `u`-bit subsets, with fresh matrices drawn from the matrix
/// stream in subset order.
pub fn encode_reference(c: &BitString, params: &CheckedParams, keys: &KeySet) -> Result<BitString> {
    let p = params.params();
    let expected = p.u * params.subsets();
    if c.len() != expected {
        return Err(Error::LengthMismatch {
            expected,
            actual: c.len(),
        });
    }
    encode_reference_with_stream(c, p.u, p.v, &mut keys.matrix_stream())
}

/// [`encode_reference`] with an explicit matrix stream.
pub fn encode_reference_with_stream(
    c: &BitString,
    u: usize,
    v: usize,
    stream: &mut KeyStream,
) -> Result<BitString> {
    encode_reference_with(c, u, v, |_| BitMatrix::generate(stream, v, u))
}

/// Reference coding with a caller-supplied matrix for each subset index.
pub fn encode_reference_with<F>(c: &BitString, u: usize, v: usize, mut matrix: F) -> Result<BitString>
where
    F: FnMut(usize) -> Result<BitMatrix>,
{
    if u == 0 || !c.len().is_multiple_of(u) {
        return Err(Error::LengthMismatch {
            expected: c.len().next_multiple_of(u.max(1)),
            actual: c.len(),
        });
    }
    let subsets = c.len() / u;
    let mut out = BitString::with_capacity(subsets * v);
    for (j, subset) in c.as_slice().chunks_exact(u).enumerate() {
        let h = matrix(j)?;
        if h.rows() != v || h.cols() != u {
            return Err(Error::InvalidParameter("coding matrix has the wrong shape"));
        }
        h.mul_packed_into(&h.pack_vector(subset), &mut out);
    }
    Ok(out)
}

/// Keyless authentication bits: the first `la` bits of
/// `SHA-256(pack(block_msb || block_ref))`, packed MSB-first with the last
/// byte zero-padded.
pub fn auth_bits(block_msb: &BitString, block_ref: &BitString, la: usize) -> Result<BitString> {
    if la == 0 || la > MAX_AUTH_BITS {
        return Err(Error::LaOutOfRange {
            la,
            max: MAX_AUTH_BITS,
        });
    }
    Ok(auth_from_slices(block_msb.as_slice(), block_ref.as_slice(), la))
}

/// [`auth_bits`] with input lengths checked against the scheme.
pub fn block_auth_bits(
    block_msb: &BitString,
    block_ref: &BitString,
    params: &CheckedParams,
) -> Result<BitString> {
    let p = params.params();
    let msb_len = params.m_prime() * p.b * p.b;
    if block_msb.len() != msb_len {
        return Err(Error::LengthMismatch {
            expected: msb_len,
            actual: block_msb.len(),
        });
    }
    if block_ref.len() != p.reference_bits_per_block() {
        return Err(Error::LengthMismatch {
            expected: p.reference_bits_per_block(),
            actual: block_ref.len(),
        });
    }
    auth_bits(block_msb, block_ref, p.la)
}

pub(crate) fn auth_from_slices(msb: &[bool], reference: &[bool], la: usize) -> BitString {
    let digest = hash_bits(msb, reference);
    (0..la).map(|i| (digest[i / 8] >> (7 - i % 8)) & 1 == 1).collect()
}

pub(crate) fn hash_bits(msb: &[bool], reference: &[bool]) -> [u8; 32] {
    let mut joined = Vec::with_capacity(msb.len() + reference.len());
    joined.extend_from_slice(msb);
    joined.extend_from_slice(reference);
    let mut out = [0u8; 32];
    out.copy_from_slice(&Sha256::digest(pack_msb_first(&joined)));
    out
}

/// Compares the first `la` digest bits with `expected`.
pub(crate) fn auth_matches(msb: &[bool], reference: &[bool], expected: &[bool]) -> bool {
    let digest = hash_bits(msb, reference);
    expected
        .iter()
        .enumerate()
        .all(|(i, &bit)| ((digest[i / 8] >> (7 - i % 8)) & 1 == 1) == bit)
}

/// The per-block embedding permutation `π` (shared by all blocks).
pub fn embedding_permutation(params: &CheckedParams, keys: &KeySet) -> Result<Permutation> {
    Permutation::generate(
        &mut keys.embed_stream(),
        params.params().watermark_bits_per_block(),
    )
}

/// Output of [`embed_detailed`].
#[derive(Debug, Clone)]
pub struct Embedded {
    pub image: GrayImage,
    /// Canonical (unpermuted) watermark vector per block: `La`
    /// authentication bits followed by the block's reference bits.
    pub canonical: Vec<BitString>,
    pub permutation: Permutation,
}

/// Embeds the self-authenticating watermark into `img`.
pub fn embed(img: &GrayImage, params: &SchemeParams, keys: &KeySet) -> Result<GrayImage> {
    Ok(embed_detailed(img, params, keys)?.image)
}

pub fn embed_detailed(img: &GrayImage, params: &SchemeParams, keys: &KeySet) -> Result<Embedded> {
    let checked = params.validate(img.width(), img.height())?;
    let p = checked.params();
    let grid = checked.grid();

    let c = scramble_msb(img, &checked, keys)?;
    let reference = encode_reference(&c, &checked, keys)?;
    let per_block = p.reference_bits_per_block();
    assert_eq!(
        reference.len(),
        per_block * grid.block_count(),
        "reference bits must exactly fill the blocks"
    );

    let pi = embedding_permutation(&checked, keys)?;
    let auth_planes = checked.auth_planes();
    let l = p.l;
    let mut lsb = BitString::zeros(l * img.len());
    let mut canonical = Vec::with_capacity(grid.block_count());
    for block in 0..grid.block_count() {
        let msb = gather_bits(img.pixels(), grid.pixel_indices_unchecked(block), &auth_planes);
        let chunk = &reference.as_slice()[block * per_block..(block + 1) * per_block];
        let mut vector = auth_from_slices(msb.as_slice(), chunk, p.la);
        for &bit in chunk {
            vector.push(bit);
        }
        let placed = pi.scatter(&vector);
        write_block_bits(&mut lsb, grid.pixel_indices_unchecked(block), l, &placed);
        canonical.push(vector);
    }
    let image = img.replace_plane_bits(&checked.watermark_planes(), &lsb)?;
    Ok(Embedded {
        image,
        canonical,
        permutation: pi,
    })
}

/// Stores a block's `l*b^2` embedded bits into an image-wide LSB bit string
/// (pixel-major, planes `l-1..0`).
pub(crate) fn write_block_bits(
    lsb: &mut BitString,
    pixels: impl Iterator<Item = usize>,
    l: usize,
    placed: &BitString,
) {
    for (k, p) in pixels.enumerate() {
        for j in 0..l {
            lsb.set(p * l + j, placed[k * l + j]);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::keystream::{derive_stream, Seed};

    fn test_image(w: usize, h: usize, salt: u8) -> GrayImage {
        let px = (0..w * h)
            .map(|i| (i as u32).wrapping_mul(2_654_435_761).rotate_left(salt as u32) as u8)
            .collect();
        GrayImage::new(w, h, px).unwrap()
    }

    #[test]
    fn one_pixel_scramble_is_identity() {
        let img = GrayImage::new(1, 1, alloc::vec![0b1000_0000]).unwrap();
        // m = 1, l = 2, b = 1, La = 1: v*N/u = 2N - N forces u = v = 1.
        let p = SchemeParams::new(1, 2, 1, 1, 1, 1).validate(1, 1).unwrap();
        let c = scramble_msb(&img, &p, &KeySet::from_label(b"x")).unwrap();
        assert_eq!(c.to_string(), "1");
    }

    #[test]
    fn scramble_roundtrip() {
        let img = test_image(8, 8, 3);
        let p = SchemeParams::preset(6, 2, 2).unwrap().validate(8, 8).unwrap();
        let keys = KeySet::from_label(b"k");
        let c = scramble_msb(&img, &p, &keys).unwrap();
        assert_eq!(c.len(), 6 * 64);
        let sigma = Permutation::generate(&mut keys.scramble_stream(), c.len()).unwrap();
        assert_eq!(sigma.gather(&c), img.extract_plane_bits(&[7, 6, 5, 4, 3, 2]).unwrap());
    }

    #[test]
    fn identity_matrices_copy_subsets() {
        let mut s = derive_stream(Seed([1; 32]), b"x").unwrap();
        let c: BitString = (0..48).map(|_| s.next_bit()).collect();
        let r = encode_reference_with(&c, 12, 12, |_| Ok(BitMatrix::identity(12))).unwrap();
        assert_eq!(r, c);
    }

    #[test]
    fn zero_subsets_code_to_zero() {
        let c = BitString::zeros(32 * 10);
        let mut s = derive_stream(Seed([9; 32]), b"matrix").unwrap();
        let r = encode_reference_with_stream(&c, 32, 8, &mut s).unwrap();
        assert_eq!(r, BitString::zeros(80));
    }

    #[test]
    fn reference_length_checked() {
        let p = SchemeParams::preset(6, 2, 2).unwrap().validate(8, 8).unwrap();
        assert!(matches!(
            encode_reference(&BitString::zeros(10), &p, &KeySet::default()),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn auth_bits_lengths_checked() {
        let p = SchemeParams::preset(6, 2, 2).unwrap().validate(8, 8).unwrap();
        assert!(block_auth_bits(&BitString::zeros(24), &BitString::zeros(6), &p).is_ok());
        assert!(block_auth_bits(&BitString::zeros(23), &BitString::zeros(6), &p).is_err());
        assert!(block_auth_bits(&BitString::zeros(24), &BitString::zeros(7), &p).is_err());
        assert!(auth_bits(&BitString::zeros(1), &BitString::zeros(1), 0).is_err());
        assert!(auth_bits(&BitString::zeros(1), &BitString::zeros(1), 257).is_err());
    }

    #[test]
    fn embed_keeps_msb_planes() {
        let img = test_image(16, 16, 5);
        let keys = KeySet::from_label(b"e");
        let p = SchemeParams::preset(6, 3, 2).unwrap();
        let out = embed(&img, &p, &keys).unwrap();
        for (a, b) in img.pixels().iter().zip(out.pixels()) {
            assert_eq!(a & 0xf8, b & 0xf8);
        }
        assert_eq!(embed(&img, &p, &keys).unwrap(), out);
    }

    #[test]
    fn embedded_bits_are_a_permutation_of_canonical() {
        let img = test_image(8, 8, 1);
        let keys = KeySet::from_label(b"m");
        let params = SchemeParams::preset(6, 2, 2).unwrap();
        let checked = params.validate(8, 8).unwrap();
        let e = embed_detailed(&img, &params, &keys).unwrap();
        let lsb = e.image.extract_plane_bits(&[1, 0]).unwrap();
        for block in 0..checked.grid().block_count() {
            let observed = gather_bits(
                &lsb.to_u8s(),
                checked.grid().pixel_indices_unchecked(block).flat_map(|p| [2 * p, 2 * p + 1]),
                &[0],
            );
            assert_eq!(observed.count_ones(), e.canonical[block].count_ones());
            assert_eq!(e.permutation.gather(&observed), e.canonical[block]);
        }
    }

    #[test]
    fn embed_rejects_bad_dimensions() {
        let img = test_image(7, 8, 0);
        assert!(embed(&img, &SchemeParams::preset(6, 2, 2).unwrap(), &KeySet::default()).is_err());
    }
}
