//! OWL norm, its dual, and weight constructors.

use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::{Error, Result};

/// Nonincreasing, nonnegative, not identically zero weights.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightVector(Vec<f64>);

impl WeightVector {
    /// Validates `raw` and wraps it.
    pub fn new(raw: Vec<f64>) -> Result<Self> {
        validate(&raw)?;
        Ok(WeightVector(raw))
    }

    /// Constant weights `(c, …, c)` of length `n`.
    pub fn constant(c: f64, n: usize) -> Result<Self> {
        Self::new(alloc::vec![c; n])
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    /// Always false; kept for the usual `len`/`is_empty` pairing.
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

impl AsRef<[f64]> for WeightVector {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}

/// Checks the weight invariants without taking ownership.
pub fn validate_weights(raw: &[f64]) -> Result<()> {
    validate(raw)
}

fn validate(raw: &[f64]) -> Result<()> {
    if raw.is_empty() {
        return Err(Error::Empty);
    }
    if let Some(index) = raw.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite { index });
    }
    if let Some(index) = raw.windows(2).position(|p| p[0] < p[1]) {
        return Err(Error::NotSorted { index });
    }
    if let Some(index) = raw.iter().position(|&v| v < 0.0) {
        return Err(Error::Negative { index });
    }
    if raw[0] == 0.0 {
        return Err(Error::AllZero);
    }
    Ok(())
}

/// The closed ball `{x : Ω_w(x) ≤ ε}`.
#[derive(Debug, Clone, PartialEq)]
pub struct OwlBall {
    weights: WeightVector,
    radius: f64,
}

impl OwlBall {
    pub fn new(weights: WeightVector, radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::InvalidRadius);
        }
        Ok(OwlBall { weights, radius })
    }

    pub fn weights(&self) -> &WeightVector {
        &self.weights
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    pub fn contains(&self, x: &[f64]) -> Result<bool> {
        Ok(eval_owl_norm(x, &self.weights)? <= self.radius)
    }
}

/// OSCAR parameters; see [`oscar_weights`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscarParams {
    pub mu1: f64,
    pub mu2: f64,
    pub n: usize,
}

impl OscarParams {
    pub fn new(mu1: f64, mu2: f64, n: usize) -> Result<Self> {
        let ok = mu1.is_finite() && mu2.is_finite() && mu1 >= 0.0 && mu2 >= 0.0 && n >= 1;
        if !ok || mu1 + mu2 <= 0.0 {
            return Err(Error::InvalidOscarParams);
        }
        Ok(OscarParams { mu1, mu2, n })
    }
}

/// OSCAR weights `w_i = μ₁ + μ₂(n − i)` for `i = 1..n`.
///
/// With these weights `Ω_w(x) = μ₁‖x‖₁ + μ₂ Σ_{i<j} max(|x_i|, |x_j|)`.
pub fn oscar_weights(p: OscarParams) -> Result<WeightVector> {
    let OscarParams { mu1, mu2, n } = p;
    if !(mu1.is_finite() && mu2.is_finite() && mu1 >= 0.0 && mu2 >= 0.0) || n == 0 {
        return Err(Error::InvalidOscarParams);
    }
    let w = (1..=n).map(|i| mu1 + mu2 * (n - i) as f64).collect();
    WeightVector::new(w)
}

/// Magnitudes of `x` sorted nonincreasing.
pub(crate) fn sorted_magnitudes(x: &[f64]) -> Vec<f64> {
    let mut m: Vec<f64> = x.iter().map(|v| v.abs()).collect();
    m.sort_unstable_by(|a, b| b.total_cmp(a));
    m
}

/// Permutation sorting `|x|` nonincreasing, ties broken by original index.
pub(crate) fn magnitude_order(x: &[f64]) -> Vec<usize> {
    let mut keyed: Vec<(f64, usize)> = x.iter().map(|v| v.abs()).zip(0..).collect();
    keyed.sort_unstable_by(|a, b| match b.0.total_cmp(&a.0) {
        Ordering::Equal => a.1.cmp(&b.1),
        o => o,
    });
    keyed.into_iter().map(|(_, i)| i).collect()
}

fn check_dims(x: &[f64], w: &WeightVector) -> Result<()> {
    if x.len() != w.len() {
        return Err(Error::DimensionMismatch {
            expected: w.len(),
            found: x.len(),
        });
    }
    Ok(())
}

/// `Ω_w(x) = Σ w_i |x|_[i]`.
pub fn eval_owl_norm(x: &[f64], w: &WeightVector) -> Result<f64> {
    check_dims(x, w)?;
    Ok(sorted_magnitudes(x)
        .iter()
        .zip(w.as_slice())
        .map(|(m, wi)| m * wi)
        .sum())
}

/// Dual norm `max_j ‖x_(j)‖₁ / Σ_{i≤j} w_i`, where `x_(j)` holds the `j`
/// largest magnitudes of `x`.
pub fn eval_dual_norm(x: &[f64], w: &WeightVector) -> Result<f64> {
    check_dims(x, w)?;
    let mut best = 0.0f64;
    let (mut sx, mut sw) = (0.0, 0.0);
    for (m, wi) in sorted_magnitudes(x).iter().zip(w.as_slice()) {
        sx += m;
        sw += wi;
        // w_1 > 0, so every prefix sum is positive.
        best = best.max(sx / sw);
    }
    Ok(best)
}
