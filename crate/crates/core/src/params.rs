//! Scheme parameters and their validation against an image size.

use core::fmt;

use crate::error::{Error, Result};
use crate::image::{lsb_planes, msb_planes, BlockGrid};
use alloc::vec::Vec;

/// Upper bound on authentication bits: one SHA-256 digest.
pub const MAX_AUTH_BITS: usize = 256;

/// Default number of authentication bits per block.
pub const DEFAULT_AUTH_BITS: usize = 2;

/// Raw scheme parameters.
///
/// * `m` MSB planes feed reference-bit generation,
/// * `l` LSB planes carry the watermark,
/// * `b` is the block side,
/// * `la` authentication bits per block,
/// * `u`-bit subsets are coded down to `v` reference bits each.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SchemeParams {
    pub m: usize,
    pub l: usize,
    pub b: usize,
    pub la: usize,
    pub u: usize,
    pub v: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EmbeddingMode {
    /// `m + l <= 8`: the MSB and LSB plane sets are disjoint.
    OverlappingFree,
    /// `m + l > 8`: some reference planes are overwritten by the watermark.
    Overlapping,
}

impl fmt::Display for EmbeddingMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::OverlappingFree => "overlapping-free",
            Self::Overlapping => "overlapping",
        })
    }
}

impl SchemeParams {
    pub const fn new(m: usize, l: usize, b: usize, la: usize, u: usize, v: usize) -> Self {
        Self { m, l, b, la, u, v }
    }

    /// Built-in presets for modes (6,2) and (6,3) with b = 1 or 2.
    pub fn preset(m: usize, l: usize, b: usize) -> Option<Self> {
        match (m, l, b) {
            (6, 2, 2) => Some(Self::new(6, 2, 2, 2, 32, 8)),
            (6, 3, 2) => Some(Self::new(6, 3, 2, 2, 48, 20)),
            (6, 2, 1) => Some(Self::new(6, 2, 1, 1, 48, 8)),
            (6, 3, 1) => Some(Self::new(6, 3, 1, 1, 48, 16)),
            _ => None,
        }
    }

    /// Parameters for mode `(m, l)` and block side `b`. Presets win when no
    /// explicit `la` is requested; otherwise `(u, v)` is the smallest pair
    /// satisfying the capacity equation for the chosen `la`.
    pub fn for_mode(m: usize, l: usize, b: usize, la: Option<usize>) -> Result<Self> {
        if la.is_none() {
            if let Some(p) = Self::preset(m, l, b) {
                return Ok(p);
            }
        }
        if m == 0 || l == 0 || b == 0 {
            return Err(Error::InvalidParameter("m, l and b must be positive"));
        }
        let cells = b * b;
        let wm = l * cells;
        let la = la.unwrap_or(DEFAULT_AUTH_BITS.min(wm.saturating_sub(1)).max(1));
        if la == 0 || la >= wm {
            return Err(Error::LaOutOfRange {
                la,
                max: wm.saturating_sub(1),
            });
        }
        // v / u = (l b^2 - La) / (m b^2)
        let num = wm - la;
        let den = m * cells;
        let g = gcd(num, den);
        Ok(Self::new(m, l, b, la, den / g, num / g))
    }

    pub fn m_prime(&self) -> usize {
        self.m.min(8usize.saturating_sub(self.l))
    }

    pub fn mode(&self) -> EmbeddingMode {
        if self.m + self.l <= 8 {
            EmbeddingMode::OverlappingFree
        } else {
            EmbeddingMode::Overlapping
        }
    }

    #[inline]
    pub fn watermark_bits_per_block(&self) -> usize {
        self.l * self.b * self.b
    }

    #[inline]
    pub fn reference_bits_per_block(&self) -> usize {
        self.watermark_bits_per_block() - self.la
    }

    /// Checks every parameter constraint for an image of `width x height`.
    pub fn validate(&self, width: usize, height: usize) -> Result<CheckedParams> {
        let p = *self;
        if p.m == 0 || p.l == 0 || p.b == 0 || p.u == 0 || p.v == 0 {
            return Err(Error::InvalidParameter("all parameters must be positive"));
        }
        if p.m > 8 {
            return Err(Error::InvalidParameter("m must be at most 8"));
        }
        if p.l > 7 {
            return Err(Error::InvalidParameter(
                "l must be at most 7 so at least one MSB plane authenticates the block",
            ));
        }
        let grid = BlockGrid::new(width, height, p.b)?;
        let wm = p.watermark_bits_per_block();
        let la_max = (wm - 1).min(MAX_AUTH_BITS);
        if p.la == 0 || p.la > la_max {
            return Err(Error::LaOutOfRange {
                la: p.la,
                max: la_max,
            });
        }
        if p.v > p.u {
            return Err(Error::InvalidParameter(
                "v must not exceed u (reference coding compresses)",
            ));
        }
        let n = (width as u64) * (height as u64);
        let msb_bits = p.m as u64 * n;
        if !msb_bits.is_multiple_of(p.u as u64) {
            return Err(Error::DivisibilityError("u must divide m*N"));
        }
        let subsets = msb_bits / p.u as u64;
        let reference = p.v as u64 * subsets;
        let blocks = grid.block_count() as u64;
        let capacity = p.l as u64 * n - p.la as u64 * blocks;
        if reference != capacity {
            return Err(Error::ConstraintViolation {
                reference,
                capacity,
            });
        }
        Ok(CheckedParams {
            params: p,
            grid,
            subsets: subsets as usize,
        })
    }
}

impl fmt::Display for SchemeParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "m={},l={},b={},La={},u={},v={}",
            self.m, self.l, self.b, self.la, self.u, self.v
        )
    }
}

fn gcd(mut a: usize, mut b: usize) -> usize {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Parameters proven consistent with a particular image size.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CheckedParams {
    params: SchemeParams,
    grid: BlockGrid,
    subsets: usize,
}

impl CheckedParams {
    #[inline]
    pub fn params(&self) -> &SchemeParams {
        &self.params
    }

    #[inline]
    pub fn grid(&self) -> &BlockGrid {
        &self.grid
    }

    /// Number of `u`-bit subsets `S = m*N/u`.
    #[inline]
    pub fn subsets(&self) -> usize {
        self.subsets
    }

    pub fn pixel_count(&self) -> usize {
        self.grid.blocks_x() * self.grid.blocks_y() * self.grid.pixels_per_block()
    }

    pub fn reference_len(&self) -> usize {
        self.subsets * self.params.v
    }

    pub fn mode(&self) -> EmbeddingMode {
        self.params.mode()
    }

    pub fn m_prime(&self) -> usize {
        self.params.m_prime()
    }

    /// Planes `7 ..= 8-m` used for reference generation.
    pub fn reference_planes(&self) -> Vec<u8> {
        msb_planes(self.params.m)
    }

    /// Planes `7 ..= 8-m'` fed to the authentication hash.
    pub fn auth_planes(&self) -> Vec<u8> {
        msb_planes(self.m_prime())
    }

    /// Planes `l-1 ..= 0` carrying the watermark.
    pub fn watermark_planes(&self) -> Vec<u8> {
        lsb_planes(self.params.l)
    }
}
