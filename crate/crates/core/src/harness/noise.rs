use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::image::{BinaryImage, GrayImage};

/// Recorded in benchmark metadata so results can be tied to the generator.
pub const PRNG_IDENTITY: &str =
    "rand_chacha 0.3 ChaCha8Rng::seed_from_u64; one f64 in [0,1) per pixel, row-major";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseSpec {
    pub density: f64,
    pub seed: u64,
}

impl NoiseSpec {
    pub fn new(density: f64, seed: u64) -> Result<Self> {
        if !(0.0..=1.0).contains(&density) {
            return Err(Error::InvalidDensity(density));
        }
        Ok(Self { density, seed })
    }
}

/// Salt-and-pepper: a pixel with draw `u < d/2` becomes 0, `d/2 ≤ u < d` becomes `max`.
pub fn add_salt_pepper_gray(g: &GrayImage, spec: NoiseSpec, max: u32) -> Result<GrayImage> {
    let spec = NoiseSpec::new(spec.density, spec.seed)?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let half = spec.density / 2.0;
    Ok(g.map(|v| {
        let u: f64 = rng.gen();
        if u < half {
            0
        } else if u < spec.density {
            max
        } else {
            v
        }
    }))
}

pub fn add_salt_pepper_binary(f: &BinaryImage, spec: NoiseSpec) -> Result<BinaryImage> {
    add_salt_pepper_gray(f.as_gray(), spec, 1).map(BinaryImage::from_gray_unchecked)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::image::PixelGrid;

    fn gray() -> GrayImage {
        GrayImage::filled(PixelGrid::new(190, 190).unwrap(), 128)
    }

    #[test]
    fn zero_density_is_identity() {
        let g = gray();
        assert_eq!(add_salt_pepper_gray(&g, NoiseSpec::new(0.0, 1).unwrap(), 255).unwrap(), g);
    }

    #[test]
    fn full_density_splits_evenly() {
        let out = add_salt_pepper_gray(&gray(), NoiseSpec::new(1.0, 7).unwrap(), 255).unwrap();
        assert!(out.values().iter().all(|&v| v == 0 || v == 255));
        let n = out.values().len() as f64;
        let salt = out.values().iter().filter(|&&v| v == 255).count() as f64;
        let sigma = (n * 0.25).sqrt();
        assert!((salt - n / 2.0).abs() <= 3.0 * sigma, "salt count {salt}");
    }

    #[test]
    fn selected_fraction_within_binomial_bound() {
        for &d in &[0.1, 0.3, 0.7] {
            let out = add_salt_pepper_gray(&gray(), NoiseSpec::new(d, 11).unwrap(), 255).unwrap();
            let n = out.values().len() as f64;
            let changed = out.values().iter().filter(|&&v| v != 128).count() as f64;
            let sigma = (n * d * (1.0 - d)).sqrt();
            assert!((changed - n * d).abs() <= 4.0 * sigma);
        }
    }

    #[test]
    fn deterministic_and_validated() {
        let spec = NoiseSpec::new(0.4, 99).unwrap();
        assert_eq!(
            add_salt_pepper_gray(&gray(), spec, 255).unwrap(),
            add_salt_pepper_gray(&gray(), spec, 255).unwrap()
        );
        assert!(NoiseSpec::new(1.5, 0).is_err());
        assert!(NoiseSpec::new(-0.1, 0).is_err());
        let bad = NoiseSpec { density: f64::NAN, seed: 0 };
        assert!(add_salt_pepper_gray(&gray(), bad, 255).is_err());
    }

    #[test]
    fn binary_noise_stays_binary() {
        let f = BinaryImage::black(PixelGrid::new(20, 20).unwrap());
        let out = add_salt_pepper_binary(&f, NoiseSpec::new(0.5, 3).unwrap()).unwrap();
        assert!(out.values().iter().all(|&v| v <= 1));
        assert!(!out.is_all_black());
    }
}
