//! Grayscale rasters, block partitioning and bit-plane access.
//!
//! Bit strings taken from an image follow one ordering everywhere in the
//! crate: pixels in raster order, and for each pixel the requested planes
//! in the order they were given. The bit for (pixel `p`, `k`-th plane) sits
//! at index `p * planes.len() + k`.

use alloc::vec::Vec;

use crate::bits::BitString;
use crate::error::{Error, Result};

/// An 8-bit grayscale image stored row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GrayImage {
    width: usize,
    height: usize,
    pixels: Vec<u8>,
}

impl GrayImage {
    pub fn new(width: usize, height: usize, pixels: Vec<u8>) -> Result<Self> {
        let expected = width
            .checked_mul(height)
            .ok_or(Error::InvalidParameter("image dimensions overflow"))?;
        if pixels.len() != expected {
            return Err(Error::PixelCount {
                width,
                height,
                expected,
                actual: pixels.len(),
            });
        }
        Ok(Self {
            width,
            height,
            pixels,
        })
    }

    pub fn filled(width: usize, height: usize, value: u8) -> Self {
        Self {
            width,
            height,
            pixels: alloc::vec![value; width * height],
        }
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.width
    }

    #[inline]
    pub fn height(&self) -> usize {
        self.height
    }

    /// Total pixel count `N`.
    #[inline]
    pub fn len(&self) -> usize {
        self.pixels.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.pixels.is_empty()
    }

    #[inline]
    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    #[inline]
    pub fn pixels_mut(&mut self) -> &mut [u8] {
        &mut self.pixels
    }

    pub fn into_pixels(self) -> Vec<u8> {
        self.pixels
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> u8 {
        self.pixels[y * self.width + x]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, value: u8) {
        self.pixels[y * self.width + x] = value;
    }

    pub fn same_dimensions(&self, other: &GrayImage) -> Result<()> {
        if self.width == other.width && self.height == other.height {
            Ok(())
        } else {
            Err(Error::DimensionMismatch(
                self.width,
                self.height,
                other.width,
                other.height,
            ))
        }
    }

    /// Reads the requested bit planes (7 = MSB) of every pixel.
    pub fn extract_plane_bits(&self, planes: &[u8]) -> Result<BitString> {
        check_planes(planes)?;
        let mut out = BitString::with_capacity(planes.len() * self.len());
        for &px in &self.pixels {
            for &plane in planes {
                out.push((px >> plane) & 1 == 1);
            }
        }
        Ok(out)
    }

    /// Returns a copy whose named planes are overwritten with `bits`, using
    /// the same ordering as [`GrayImage::extract_plane_bits`].
    pub fn replace_plane_bits(&self, planes: &[u8], bits: &BitString) -> Result<GrayImage> {
        check_planes(planes)?;
        let expected = planes.len() * self.len();
        if bits.len() != expected {
            return Err(Error::LengthMismatch {
                expected,
                actual: bits.len(),
            });
        }
        let mut out = self.clone();
        let mut it = bits.iter();
        for px in out.pixels.iter_mut() {
            for &plane in planes {
                let mask = 1u8 << plane;
                if it.next().unwrap_or(false) {
                    *px |= mask;
                } else {
                    *px &= !mask;
                }
            }
        }
        Ok(out)
    }

    /// Copies the pixels of `src` inside the half-open rectangle
    /// `[x0, x1) x [y0, y1)` into `self` at the same coordinates.
    pub fn copy_rect_from(
        &mut self,
        src: &GrayImage,
        x0: usize,
        y0: usize,
        x1: usize,
        y1: usize,
    ) -> Result<()> {
        self.same_dimensions(src)?;
        if x0 > x1 || y0 > y1 || x1 > self.width || y1 > self.height {
            return Err(Error::RectOutOfBounds);
        }
        for y in y0..y1 {
            let row = y * self.width;
            self.pixels[row + x0..row + x1].copy_from_slice(&src.pixels[row + x0..row + x1]);
        }
        Ok(())
    }
}

fn check_planes(planes: &[u8]) -> Result<()> {
    if planes.is_empty() {
        return Err(Error::InvalidPlaneSet);
    }
    let mut seen = 0u8;
    for &plane in planes {
        if plane > 7 {
            return Err(Error::InvalidPlaneIndex(plane));
        }
        if seen & (1 << plane) != 0 {
            return Err(Error::InvalidPlaneSet);
        }
        seen |= 1 << plane;
    }
    Ok(())
}

/// The `count` most significant planes, highest first: `7, 6, ..`.
pub fn msb_planes(count: usize) -> Vec<u8> {
    (0..count.min(8)).map(|k| 7 - k as u8).collect()
}

/// The `count` least significant planes, highest first: `count-1, .., 0`.
pub fn lsb_planes(count: usize) -> Vec<u8> {
    (0..count.min(8)).rev().map(|k| k as u8).collect()
}

/// Partition of an image into `b x b` blocks, enumerated row-major.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BlockGrid {
    width: usize,
    height: usize,
    block: usize,
}

impl BlockGrid {
    pub fn new(width: usize, height: usize, block: usize) -> Result<Self> {
        if block == 0 {
            return Err(Error::InvalidParameter("block side must be positive"));
        }
        if width == 0 || height == 0 {
            return Err(Error::InvalidParameter("image must be non-empty"));
        }
        if !width.is_multiple_of(block) || !height.is_multiple_of(block) {
            return Err(Error::DivisibilityError(
                "image width and height must be multiples of the block side",
            ));
        }
        Ok(Self {
            width,
            height,
            block,
        })
    }

    pub fn for_image(img: &GrayImage, block: usize) -> Result<Self> {
        Self::new(img.width(), img.height(), block)
    }

    #[inline]
    pub fn block_side(&self) -> usize {
        self.block
    }

    #[inline]
    pub fn blocks_x(&self) -> usize {
        self.width / self.block
    }

    #[inline]
    pub fn blocks_y(&self) -> usize {
        self.height / self.block
    }

    #[inline]
    pub fn block_count(&self) -> usize {
        self.blocks_x() * self.blocks_y()
    }

    #[inline]
    pub fn pixels_per_block(&self) -> usize {
        self.block * self.block
    }

    /// Raster indices of the pixels of `block_id`, row-major within the block.
    pub fn block_pixel_indices(&self, block_id: usize) -> Result<Vec<usize>> {
        self.check_block(block_id)?;
        Ok(self.pixel_indices_unchecked(block_id).collect())
    }

    pub(crate) fn check_block(&self, block_id: usize) -> Result<()> {
        if block_id < self.block_count() {
            Ok(())
        } else {
            Err(Error::BlockOutOfRange {
                block: block_id,
                count: self.block_count(),
            })
        }
    }

    pub(crate) fn pixel_indices_unchecked(
        &self,
        block_id: usize,
    ) -> impl Iterator<Item = usize> + '_ {
        let bx = block_id % self.blocks_x();
        let by = block_id / self.blocks_x();
        let origin = by * self.block * self.width + bx * self.block;
        (0..self.block).flat_map(move |dy| {
            let row = origin + dy * self.width;
            (0..self.block).map(move |dx| row + dx)
        })
    }

    /// Block containing pixel `(x, y)`.
    pub fn block_of(&self, x: usize, y: usize) -> usize {
        (y / self.block) * self.blocks_x() + x / self.block
    }
}

/// Reads `planes` of the given pixels into a bit string (pixel-major).
pub(crate) fn gather_bits(pixels: &[u8], indices: impl Iterator<Item = usize>, planes: &[u8]) -> BitString {
    let mut out = BitString::new();
    for p in indices {
        let px = pixels[p];
        for &plane in planes {
            out.push((px >> plane) & 1 == 1);
        }
    }
    out
}
