//! Recovery of the per-block embedding permutation from two authenticated
//! images.
//!
//! The authentication hash takes no key, so anyone can recompute it once
//! the watermark bits are put back in canonical order. A candidate
//! permutation is tested by un-permuting a block's LSB bits, hashing the
//! block's MSB planes with the hypothesised reference bits, and comparing
//! the result against the hypothesised authentication bits. A wrong
//! candidate survives one block with probability about `2^-La`, so
//! screening block after block (then the second image) leaves only
//! candidates that act exactly like the real key.

use alloc::vec::Vec;

use num_bigint::BigUint;

use crate::detector::{block_auth_input, embedded_block_bits};
use crate::encoder::auth_matches;
use crate::error::{Error, Result};
use crate::image::GrayImage;
use crate::keystream::{next_lexicographic, Permutation};
use crate::params::{CheckedParams, SchemeParams};

/// Candidates per parallel work unit.
pub const WORK_UNIT: u64 = 4096;

/// Largest watermark size searched without opting in (8! candidates).
pub const MAX_SEARCH_ELEMENTS: usize = 8;

/// Largest watermark size searched at all (12! ≈ 4.8e8 candidates).
pub const LONG_SEARCH_ELEMENTS: usize = 12;

/// `(l*b^2)!`, the number of candidate permutations.
pub fn count_candidates(l: usize, b: usize) -> BigUint {
    (1..=(l * b * b) as u64).fold(BigUint::from(1u32), |acc, k| acc * k)
}

/// [`count_candidates`] when it fits in a `u64` (`l*b^2 <= 20`).
pub fn count_candidates_u64(l: usize, b: usize) -> Option<u64> {
    (1..=(l * b * b) as u64).try_fold(1u64, |acc, k| acc.checked_mul(k))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct CrackBudget {
    /// Allow searches over 9 to 12 watermark bits.
    pub allow_long: bool,
    /// Stop after this many candidates instead of enumerating all of them.
    pub candidate_limit: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrackResult {
    /// Candidates consistent with every observed block, in lexicographic
    /// order.
    pub survivors: Vec<Permutation>,
    pub tested_count: u64,
}

/// Block observations of both images, ready for candidate screening.
#[derive(Debug, Clone)]
pub struct Cracker {
    params: SchemeParams,
    elements: usize,
    msb_len: usize,
    total: u64,
    limit: u64,
    /// Per block: `elements` embedded bits then `msb_len` MSB bits.
    primary: Vec<bool>,
    secondary: Vec<bool>,
}

impl Cracker {
    pub fn new(
        img_a: &GrayImage,
        img_b: &GrayImage,
        params: &SchemeParams,
        budget: CrackBudget,
    ) -> Result<Self> {
        if img_a.width() != img_b.width() || img_a.height() != img_b.height() {
            return Err(Error::ParamsMismatch);
        }
        let checked = params.validate(img_a.width(), img_a.height())?;
        let elements = params.watermark_bits_per_block();
        let ceiling = if budget.allow_long {
            LONG_SEARCH_ELEMENTS
        } else {
            MAX_SEARCH_ELEMENTS
        };
        if elements > ceiling {
            return Err(Error::SearchTooLarge { elements });
        }
        let total = count_candidates_u64(params.l, params.b).expect("at most 12!");
        let limit = budget.candidate_limit.map_or(total, |c| c.min(total));
        Ok(Self {
            params: *params,
            elements,
            msb_len: checked.m_prime() * params.b * params.b,
            total,
            limit,
            primary: observe(img_a, &checked),
            secondary: observe(img_b, &checked),
        })
    }

    pub fn params(&self) -> &SchemeParams {
        &self.params
    }

    /// Size of the permutation domain, `l*b^2`.
    pub fn elements(&self) -> usize {
        self.elements
    }

    /// `(l*b^2)!`.
    pub fn total_candidates(&self) -> u64 {
        self.total
    }

    /// Candidates that will actually be enumerated under the budget.
    pub fn planned_candidates(&self) -> u64 {
        self.limit
    }

    /// Work units `(first_rank, count)` covering the planned candidates.
    pub fn work_units(&self, unit: u64) -> impl Iterator<Item = (u64, u64)> {
        let limit = self.limit;
        let unit = unit.max(1);
        (0..limit.div_ceil(unit)).map(move |k| {
            let start = k * unit;
            (start, unit.min(limit - start))
        })
    }

    /// True if `candidate` explains every observed block of both images.
    pub fn is_consistent(&self, candidate: &[usize]) -> bool {
        let stride = self.elements + self.msb_len;
        let mut canonical = alloc::vec![false; self.elements];
        [&self.primary, &self.secondary]
            .into_iter()
            .flat_map(|obs| obs.chunks_exact(stride))
            .all(|block| self.block_passes(candidate, block, &mut canonical))
    }

    fn block_passes(&self, candidate: &[usize], block: &[bool], canonical: &mut [bool]) -> bool {
        let (embedded, msb) = block.split_at(self.elements);
        for (slot, &pos) in canonical.iter_mut().zip(candidate) {
            *slot = embedded[pos];
        }
        let (auth, reference) = canonical.split_at(self.params.la);
        auth_matches(msb, reference, auth)
    }

    /// Screens `count` candidates starting at lexicographic rank `start`.
    /// Returns the survivors and the number of candidates examined.
    pub fn screen(&self, start: u64, count: u64) -> (Vec<Permutation>, u64) {
        let mut survivors = Vec::new();
        if count == 0 || start >= self.total {
            return (survivors, 0);
        }
        let mut current = Permutation::unrank(self.elements, start).map().to_vec();
        let mut tested = 0;
        loop {
            tested += 1;
            if self.is_consistent(&current) {
                survivors.push(Permutation::new(current.clone()).expect("enumerated permutation"));
            }
            if tested == count || !next_lexicographic(&mut current) {
                break;
            }
        }
        (survivors, tested)
    }

    /// Collects screened work units into a result with sorted survivors.
    pub fn finish(
        &self,
        parts: impl IntoIterator<Item = (Vec<Permutation>, u64)>,
    ) -> Result<CrackResult> {
        let mut survivors = Vec::new();
        let mut tested_count = 0;
        for (s, t) in parts {
            survivors.extend(s);
            tested_count += t;
        }
        survivors.sort_unstable();
        survivors.dedup();
        if survivors.is_empty() {
            return Err(Error::NoSurvivors);
        }
        Ok(CrackResult {
            survivors,
            tested_count,
        })
    }

    /// Runs the whole search on the current thread.
    pub fn run(&self) -> Result<CrackResult> {
        self.finish(
            self.work_units(WORK_UNIT)
                .map(|(start, count)| self.screen(start, count)),
        )
    }
}

fn observe(img: &GrayImage, params: &CheckedParams) -> Vec<bool> {
    let mut out = Vec::new();
    for block in 0..params.grid().block_count() {
        out.extend_from_slice(embedded_block_bits(img, params, block).as_slice());
        out.extend_from_slice(block_auth_input(img, params, block).as_slice());
    }
    out
}

/// Exhaustive single-threaded search for the embedding permutation.
pub fn crack_permutation(
    img_a: &GrayImage,
    img_b: &GrayImage,
    params: &SchemeParams,
    budget: CrackBudget,
) -> Result<CrackResult> {
    Cracker::new(img_a, img_b, params, budget)?.run()
}
