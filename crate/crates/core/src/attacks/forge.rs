use crate::detector::{block_auth_input, embedded_block_bits};
use crate::encoder::auth_from_slices;
use crate::error::{Error, Result};
use crate::image::GrayImage;
use crate::keystream::Permutation;
use crate::params::SchemeParams;

/// Replaces the content of `blocks` in an authenticated image with the
/// content of `new_content`, re-signing each block with the recovered
/// permutation `pi`.
///
/// The block's reference bits are kept as they were; only the keyless
/// authentication bits are recomputed over the new MSB planes.
pub fn forge(
    img_auth: &GrayImage,
    new_content: &GrayImage,
    blocks: &[usize],
    params: &SchemeParams,
    pi: &Permutation,
) -> Result<GrayImage> {
    img_auth.same_dimensions(new_content)?;
    let checked = params.validate(img_auth.width(), img_auth.height())?;
    let elements = params.watermark_bits_per_block();
    if pi.len() != elements {
        return Err(Error::PermutationSizeMismatch {
            expected: elements,
            actual: pi.len(),
        });
    }
    let grid = checked.grid();
    for &block in blocks {
        grid.check_block(block)?;
    }

    let msb_mask = (0xff00u16 >> params.m) as u8;
    let lsb_mask = (1u8 << params.l) - 1;
    let mut out = img_auth.clone();
    for &block in blocks {
        let canonical = pi.gather(&embedded_block_bits(img_auth, &checked, block));
        let reference = &canonical.as_slice()[params.la..];

        let px = out.pixels_mut();
        for p in grid.pixel_indices_unchecked(block) {
            px[p] = (new_content.pixels()[p] & msb_mask) | (px[p] & !msb_mask);
        }
        let msb = block_auth_input(&out, &checked, block);
        let mut vector = auth_from_slices(msb.as_slice(), reference, params.la);
        for &bit in reference {
            vector.push(bit);
        }
        let placed = pi.scatter(&vector);

        let px = out.pixels_mut();
        for (k, p) in grid.pixel_indices_unchecked(block).enumerate() {
            let mut low = 0u8;
            for j in 0..params.l {
                low = (low << 1) | u8::from(placed[k * params.l + j]);
            }
            px[p] = (px[p] & !lsb_mask) | low;
        }
    }
    Ok(out)
}
