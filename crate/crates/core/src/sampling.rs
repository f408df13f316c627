//! Seeded random directions.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::algebra::HolVector;
use crate::linalg::{norm2, C64};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Standard complex Gaussian vector.
pub fn gaussian_vector(rng: &mut ChaCha8Rng, n: usize) -> Vec<C64> {
    (0..n)
        .map(|_| {
            let re: f64 = StandardNormal.sample(rng);
            let im: f64 = StandardNormal.sample(rng);
            C64::new(re, im)
        })
        .collect()
}

/// Uniformly distributed point of the unit sphere in `C^n`.
pub fn unit_vector(rng: &mut ChaCha8Rng, n: usize) -> HolVector {
    loop {
        let v = gaussian_vector(rng, n);
        let r = norm2(&v);
        if r > 1e-8 {
            return HolVector(v.into_iter().map(|z| z / r).collect());
        }
    }
}

pub fn unit_sphere(n: usize, count: usize, seed: u64) -> Vec<HolVector> {
    let mut r = rng(seed);
    (0..count).map(|_| unit_vector(&mut r, n)).collect()
}
