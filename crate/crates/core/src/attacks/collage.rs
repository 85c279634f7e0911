use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::image::{BlockGrid, GrayImage};

/// Which donor image supplies each block of a collage.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegionAssignment {
    blocks_x: usize,
    blocks_y: usize,
    sources: Vec<usize>,
}

impl RegionAssignment {
    pub fn new(blocks_x: usize, blocks_y: usize, sources: Vec<usize>) -> Result<Self> {
        if blocks_x == 0 || blocks_y == 0 || sources.is_empty() {
            return Err(Error::EmptyAssignment);
        }
        if sources.len() != blocks_x * blocks_y {
            return Err(Error::LengthMismatch {
                expected: blocks_x * blocks_y,
                actual: sources.len(),
            });
        }
        Ok(Self {
            blocks_x,
            blocks_y,
            sources,
        })
    }

    /// Every block from donor `source`.
    pub fn uniform(grid: &BlockGrid, source: usize) -> Self {
        Self {
            blocks_x: grid.blocks_x(),
            blocks_y: grid.blocks_y(),
            sources: alloc::vec![source; grid.block_count()],
        }
    }

    /// Four quarters split on block boundaries: donors 0 and 1 fill the top
    /// half (left, right), donors 2 and 3 the bottom half.
    pub fn quadrants(grid: &BlockGrid) -> Self {
        let (bx, by) = (grid.blocks_x(), grid.blocks_y());
        let sources = (0..by)
            .flat_map(|y| {
                (0..bx).map(move |x| usize::from(x >= bx / 2) + 2 * usize::from(y >= by / 2))
            })
            .collect();
        Self {
            blocks_x: bx,
            blocks_y: by,
            sources,
        }
    }

    pub fn blocks_x(&self) -> usize {
        self.blocks_x
    }

    pub fn blocks_y(&self) -> usize {
        self.blocks_y
    }

    pub fn source(&self, block: usize) -> usize {
        self.sources[block]
    }

    pub fn sources(&self) -> &[usize] {
        &self.sources
    }
}

/// Assembles a new image whose block `i` is copied verbatim (all eight
/// planes) from `donors[assign.source(i)]`.
pub fn collage(donors: &[GrayImage], assign: &RegionAssignment) -> Result<GrayImage> {
    let first = donors.first().ok_or(Error::EmptyAssignment)?;
    for d in &donors[1..] {
        first.same_dimensions(d)?;
    }
    if first.width() % assign.blocks_x != 0 || first.height() % assign.blocks_y != 0 {
        return Err(Error::DivisibilityError(
            "assignment grid does not tile the donor images",
        ));
    }
    let b = first.width() / assign.blocks_x;
    if first.height() / assign.blocks_y != b {
        return Err(Error::DivisibilityError("assignment blocks must be square"));
    }
    let grid = BlockGrid::new(first.width(), first.height(), b)?;
    if let Some(&bad) = assign.sources.iter().find(|&&s| s >= donors.len()) {
        return Err(Error::SourceOutOfRange {
            source_index: bad,
            donors: donors.len(),
        });
    }
    let mut out = first.clone();
    for block in 0..grid.block_count() {
        let donor = donors[assign.sources[block]].pixels();
        let px = out.pixels_mut();
        for p in grid.pixel_indices_unchecked(block) {
            px[p] = donor[p];
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn flat(v: u8) -> GrayImage {
        GrayImage::filled(8, 8, v)
    }

    #[test]
    fn identity_collage() {
        let a = GrayImage::new(8, 8, (0..64).collect()).unwrap();
        let grid = BlockGrid::for_image(&a, 2).unwrap();
        let out = collage(&[a.clone(), flat(9)], &RegionAssignment::uniform(&grid, 0)).unwrap();
        assert_eq!(out, a);
    }

    #[test]
    fn quadrant_layout() {
        let grid = BlockGrid::new(8, 8, 2).unwrap();
        let donors = [flat(0), flat(1), flat(2), flat(3)];
        let out = collage(&donors, &RegionAssignment::quadrants(&grid)).unwrap();
        assert_eq!(out.get(0, 0), 0);
        assert_eq!(out.get(7, 0), 1);
        assert_eq!(out.get(0, 7), 2);
        assert_eq!(out.get(4, 4), 3);
        assert_eq!(out.get(3, 3), 0);
    }

    #[test]
    fn errors() {
        let grid = BlockGrid::new(8, 8, 2).unwrap();
        assert_eq!(
            collage(&[], &RegionAssignment::uniform(&grid, 0)),
            Err(Error::EmptyAssignment)
        );
        assert!(matches!(
            collage(&[flat(0), GrayImage::filled(4, 8, 0)], &RegionAssignment::uniform(&grid, 0)),
            Err(Error::DimensionMismatch(..))
        ));
        assert!(matches!(
            collage(&[flat(0)], &RegionAssignment::uniform(&grid, 1)),
            Err(Error::SourceOutOfRange { .. })
        ));
        assert_eq!(
            RegionAssignment::new(0, 0, Vec::new()),
            Err(Error::EmptyAssignment)
        );
    }
}
