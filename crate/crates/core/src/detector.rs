//! Block-wise tamper detection.

use alloc::vec::Vec;

use crate::bits::BitString;
use crate::encoder::{auth_matches, embedding_permutation};
use crate::error::{Error, Result};
use crate::image::{gather_bits, GrayImage};
use crate::keystream::{KeySet, Permutation};
use crate::params::{CheckedParams, SchemeParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    Intact,
    Tampered,
}

/// Per-block verdicts, row-major over the block grid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DetectionMap {
    blocks_x: usize,
    blocks_y: usize,
    verdicts: Vec<Verdict>,
}

impl DetectionMap {
    pub fn new(blocks_x: usize, blocks_y: usize, verdicts: Vec<Verdict>) -> Result<Self> {
        if verdicts.len() != blocks_x * blocks_y {
            return Err(Error::LengthMismatch {
                expected: blocks_x * blocks_y,
                actual: verdicts.len(),
            });
        }
        Ok(Self {
            blocks_x,
            blocks_y,
            verdicts,
        })
    }

    pub fn blocks_x(&self) -> usize {
        self.blocks_x
    }

    pub fn blocks_y(&self) -> usize {
        self.blocks_y
    }

    pub fn len(&self) -> usize {
        self.verdicts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.verdicts.is_empty()
    }

    pub fn verdicts(&self) -> &[Verdict] {
        &self.verdicts
    }

    pub fn get(&self, bx: usize, by: usize) -> Verdict {
        self.verdicts[by * self.blocks_x + bx]
    }

    pub fn is_tampered(&self, block: usize) -> bool {
        self.verdicts[block] == Verdict::Tampered
    }

    pub fn tampered_count(&self) -> usize {
        self.verdicts
            .iter()
            .filter(|&&v| v == Verdict::Tampered)
            .count()
    }

    pub fn tampered_blocks(&self) -> impl Iterator<Item = usize> + '_ {
        self.verdicts
            .iter()
            .enumerate()
            .filter(|(_, &v)| v == Verdict::Tampered)
            .map(|(i, _)| i)
    }

    pub fn tampering_rate(&self) -> f64 {
        if self.verdicts.is_empty() {
            0.0
        } else {
            self.tampered_count() as f64 / self.verdicts.len() as f64
        }
    }
}

/// The `l*b^2` bits stored in a block's LSB planes, in embedded order.
pub(crate) fn embedded_block_bits(img: &GrayImage, params: &CheckedParams, block: usize) -> BitString {
    gather_bits(
        img.pixels(),
        params.grid().pixel_indices_unchecked(block),
        &params.watermark_planes(),
    )
}

/// The `m'*b^2` MSB-plane bits of a block that feed the hash.
pub(crate) fn block_auth_input(img: &GrayImage, params: &CheckedParams, block: usize) -> BitString {
    gather_bits(
        img.pixels(),
        params.grid().pixel_indices_unchecked(block),
        &params.auth_planes(),
    )
}

/// Splits a canonical vector into (authentication, reference) bits.
pub(crate) fn split_canonical(canonical: &BitString, la: usize) -> (BitString, BitString) {
    (
        canonical.slice(0, la),
        canonical.slice(la, canonical.len()),
    )
}

/// Reads a block's watermark and undoes the embedding permutation.
pub fn extract_block_watermark(
    img: &GrayImage,
    params: &SchemeParams,
    keys: &KeySet,
    block: usize,
) -> Result<(BitString, BitString)> {
    let checked = params.validate(img.width(), img.height())?;
    checked.grid().check_block(block)?;
    let pi = embedding_permutation(&checked, keys)?;
    let canonical = pi.gather(&embedded_block_bits(img, &checked, block));
    Ok(split_canonical(&canonical, params.la))
}

/// Checks every block of `img`.
pub fn detect(img: &GrayImage, params: &SchemeParams, keys: &KeySet) -> Result<DetectionMap> {
    let checked = params.validate(img.width(), img.height())?;
    let pi = embedding_permutation(&checked, keys)?;
    Ok(detect_with_permutation(img, &checked, &pi))
}

/// Detection under an explicit embedding permutation.
pub fn detect_with_permutation(img: &GrayImage, params: &CheckedParams, pi: &Permutation) -> DetectionMap {
    let grid = params.grid();
    let verdicts = (0..grid.block_count())
        .map(|block| {
            if block_verifies(img, params, pi, block) {
                Verdict::Intact
            } else {
                Verdict::Tampered
            }
        })
        .collect();
    DetectionMap {
        blocks_x: grid.blocks_x(),
        blocks_y: grid.blocks_y(),
        verdicts,
    }
}

pub(crate) fn block_verifies(img: &GrayImage, params: &CheckedParams, pi: &Permutation, block: usize) -> bool {
    let la = params.params().la;
    let canonical = pi.gather(&embedded_block_bits(img, params, block));
    let msb = block_auth_input(img, params, block);
    auth_matches(
        msb.as_slice(),
        &canonical.as_slice()[la..],
        &canonical.as_slice()[..la],
    )
}
