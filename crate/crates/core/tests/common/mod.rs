#![allow(dead_code)]

use owl_core::{ReducedInstance, WeightVector};
use rand::Rng;

/// Random reduced instance of length `n` with ties in `z` and repeated or
/// zero weights. `⟨z, w⟩ > ε` by construction.
pub fn reduced_instance<R: Rng>(rng: &mut R, n: usize) -> ReducedInstance {
    loop {
        let mut z: Vec<f64> = (0..n).map(|_| draw(rng, 0.3)).collect();
        let mut w: Vec<f64> = (0..n).map(|_| draw(rng, 0.4)).collect();
        z.sort_by(|a, b| b.total_cmp(a));
        w.sort_by(|a, b| b.total_cmp(a));
        if w[0] == 0.0 {
            continue;
        }
        let inner: f64 = z.iter().zip(&w).map(|(a, b)| a * b).sum();
        if inner <= 1e-6 {
            continue;
        }
        let eps = inner * rng.random_range(0.02..0.98);
        return ReducedInstance::new(z, WeightVector::new(w).unwrap(), eps).unwrap();
    }
}

/// Mostly continuous values; with probability `p_tie` a value from a small
/// grid (including zero) so that exact ties are common.
fn draw<R: Rng>(rng: &mut R, p_tie: f64) -> f64 {
    if rng.random_bool(p_tie) {
        [0.0, 0.5, 1.0, 2.0][rng.random_range(0..4)]
    } else {
        rng.random_range(0.0..5.0)
    }
}

/// Random vector with signs, zeros and repeated magnitudes.
pub fn ambient_vector<R: Rng>(rng: &mut R, n: usize) -> Vec<f64> {
    (0..n)
        .map(|_| {
            let m = draw(rng, 0.25);
            if rng.random_bool(0.5) {
                -m
            } else {
                m
            }
        })
        .collect()
}

pub fn weights<R: Rng>(rng: &mut R, n: usize) -> WeightVector {
    loop {
        let mut w: Vec<f64> = (0..n).map(|_| draw(rng, 0.3)).collect();
        w.sort_by(|a, b| b.total_cmp(a));
        if let Ok(w) = WeightVector::new(w) {
            return w;
        }
    }
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}
