//! Seeded random streams for the timing grid.
//!
//! Every `(n, density, run)` cell draws from `ChaCha8Rng::seed_from_u64(seed)`
//! with its stream set to `cell_stream(n, density, run)`, so any cell can be
//! regenerated on its own.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

pub fn cell_stream(n: usize, density: f64, run: usize) -> u64 {
    splitmix64(splitmix64(splitmix64(n as u64) ^ density.to_bits()) ^ run as u64)
}

pub fn cell_rng(seed: u64, n: usize, density: f64, run: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(cell_stream(n, density, run));
    rng
}

/// Standard Gaussian vector with `round(density·n)` nonzeros on a uniformly
/// random support.
pub fn sparse_gaussian<R: Rng>(rng: &mut R, n: usize, density: f64) -> Vec<f64> {
    let k = ((density * n as f64).round() as usize).min(n);
    let mut z = vec![0.0; n];
    if k == n {
        z.iter_mut().for_each(|v| *v = StandardNormal.sample(rng));
    } else {
        for i in rand::seq::index::sample(rng, n, k) {
            z[i] = StandardNormal.sample(rng);
        }
    }
    z
}
