//! Self-embedding fragile image watermarking and its attacks.
//!
//! The crate is `no_std` (with `alloc`) and contains only the algorithmic
//! pieces: bit-plane access on 8-bit grayscale rasters, the keyed
//! generators, the embedding pipeline, block-wise tamper detection, and the
//! two attacks that defeat the scheme (block-aligned collage and recovery of
//! the per-block embedding permutation from authenticated images).
//!
//! File formats, the command-line front end and the multi-threaded
//! permutation search live in the `fragmark` crate.
#![cfg_attr(not(test), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod attacks;
pub mod bits;
pub mod detector;
pub mod encoder;
mod error;
pub mod image;
pub mod keystream;
pub mod params;

pub use crate::attacks::{
    collage, count_candidates, forge, CrackBudget, CrackResult, Cracker, RegionAssignment,
};
pub use crate::bits::BitString;
pub use crate::detector::{detect, extract_block_watermark, DetectionMap, Verdict};
pub use crate::encoder::{auth_bits, embed, encode_reference, scramble_msb};
pub use crate::error::{Error, Result};
pub use crate::image::{BlockGrid, GrayImage};
pub use crate::keystream::{BitMatrix, KeySet, KeyStream, Permutation, Seed};
pub use crate::params::{CheckedParams, EmbeddingMode, SchemeParams};
