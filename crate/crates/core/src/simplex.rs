//! Euclidean projection onto the simplex `{x ≥ 0, Σx = κ}`.

use alloc::vec::Vec;

use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct SimplexProjection {
    pub x: Vec<f64>,
    /// Threshold `λ` with `x = max(z − λ, 0)`.
    pub threshold: f64,
    /// Number of positive entries, `K`.
    pub support: usize,
}

/// Projects `z` onto `{x ≥ 0, Σx = κ}`.
///
/// Works on any input order; a nonincreasing `z` skips the sort.
pub fn project_simplex(z: &[f64], kappa: f64) -> Result<SimplexProjection> {
    if !(kappa > 0.0 && kappa.is_finite()) {
        return Err(Error::InvalidRadius);
    }
    if z.is_empty() {
        return Err(Error::Empty);
    }
    if let Some(index) = z.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite { index });
    }
    let (threshold, support) = if z.windows(2).all(|p| p[0] >= p[1]) {
        sorted_threshold(z.iter().copied(), kappa)
    } else {
        let mut sorted = z.to_vec();
        sorted.sort_unstable_by(|a, b| b.total_cmp(a));
        sorted_threshold(sorted.into_iter(), kappa)
    };
    Ok(SimplexProjection {
        x: z.iter().map(|v| (v - threshold).max(0.0)).collect(),
        threshold,
        support,
    })
}

/// `λ = (Σ_{i≤K} z_i − κ)/K` with `K` the largest `k` such that
/// `(Σ_{i≤k} z_i − κ)/k < z_k`, for `z` given nonincreasing.
pub(crate) fn sorted_threshold(z: impl Iterator<Item = f64>, kappa: f64) -> (f64, usize) {
    let mut sum = 0.0;
    let (mut best, mut support) = (0.0, 0);
    for (k, v) in (1..).zip(z) {
        sum += v;
        let t = (sum - kappa) / k as f64;
        if t < v {
            best = t;
            support = k;
        }
    }
    (best, support)
}

/// Same as [`sorted_threshold`] over runs of equal values given as
/// `(value, count)` pairs in nonincreasing value order.
///
/// Within a run the test `(S − κ)/k < v` has the same outcome for every
/// `k`, so `K` is always a run end.
pub(crate) fn grouped_threshold(
    runs: impl Iterator<Item = (f64, usize)>,
    kappa: f64,
) -> (f64, usize) {
    let (mut sum, mut count) = (0.0, 0usize);
    let (mut best, mut support) = (0.0, 0);
    for (v, c) in runs {
        sum += v * c as f64;
        count += c;
        let t = (sum - kappa) / count as f64;
        if t < v {
            best = t;
            support = count;
        }
    }
    (best, support)
}
