#![allow(dead_code)]

use fragmark_core::GrayImage;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform noise image.
pub fn noise_image(width: usize, height: usize, seed: u64) -> GrayImage {
    let mut r = rng(seed);
    let px = (0..width * height).map(|_| r.random::<u8>()).collect();
    GrayImage::new(width, height, px).unwrap()
}

/// Smooth gradient with mild noise, closer to natural image statistics.
pub fn textured_image(width: usize, height: usize, seed: u64) -> GrayImage {
    let mut r = rng(seed);
    let (fx, fy) = (r.random_range(0.5..3.0f64), r.random_range(0.5..3.0f64));
    let phase = r.random_range(0.0..std::f64::consts::TAU);
    let mut px = Vec::with_capacity(width * height);
    for y in 0..height {
        for x in 0..width {
            let u = x as f64 / width as f64;
            let v = y as f64 / height as f64;
            let base = 128.0
                + 80.0 * (fx * std::f64::consts::TAU * u + phase).sin() * (fy * std::f64::consts::TAU * v).cos()
                + r.random_range(-12.0..12.0);
            px.push(base.clamp(0.0, 255.0) as u8);
        }
    }
    GrayImage::new(width, height, px).unwrap()
}

/// Binomial three-sigma half width for `trials` draws at rate `p`.
pub fn three_sigma(p: f64, trials: usize) -> f64 {
    3.0 * (p * (1.0 - p) / trials as f64).sqrt()
}
