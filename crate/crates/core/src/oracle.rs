//! Slow reference solvers for the reduced problem, for tests and
//! acceptance runs only.
//!
//! [`oracle_project_small`] enumerates every candidate optimal structure
//! and keeps the one that best satisfies the optimality conditions.
//! [`dykstra_project`] alternates projections onto the hyperplane and the
//! monotone nonnegative cone. Neither shares code with the group-merging
//! solver.

use alloc::vec::Vec;

use crate::kkt::{kkt_certificate, KktReport};
use crate::partition::IntervalPartition;
use crate::projection::ReducedInstance;
use crate::{Error, Result};

/// Largest `n` accepted by [`oracle_project_small`].
pub const MAX_ENUMERATION_N: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleMethod {
    ActiveSetEnumeration,
    Dykstra,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleSolution {
    pub x: Vec<f64>,
    pub lambda: f64,
    pub method: OracleMethod,
    pub certificate: KktReport,
}

/// A candidate: a partition of the positive prefix `0..len` and a zero
/// suffix.
#[derive(Debug, Clone, PartialEq)]
pub struct Candidate {
    pub prefix_len: usize,
    pub mask: u64,
    pub x: Vec<f64>,
    pub lambda: f64,
    pub residual: f64,
}

/// Every candidate in enumeration order: for each positive prefix length
/// `1..=n`, every interval partition of the prefix (cut masks ascending).
///
/// On a group `G` of the prefix, `x` takes the value `z̄_G − λw̄_G`; the
/// suffix is zero; `λ` makes `⟨w, x⟩ = ε`.
pub fn enumerate_candidates(inst: &ReducedInstance) -> Result<Vec<Candidate>> {
    let n = inst.len();
    if n > MAX_ENUMERATION_N {
        return Err(Error::TooLarge {
            n,
            max: MAX_ENUMERATION_N,
        });
    }
    let z = inst.z();
    let w = inst.weights().as_slice();
    let eps = inst.radius();
    let mut out = Vec::new();
    for len in 1..=n {
        for mask in 0..1u64 << (len - 1) {
            let part = IntervalPartition::from_cut_mask(len, mask)?;
            let (mut num, mut den) = (-eps, 0.0);
            let mut means = Vec::with_capacity(part.len());
            for g in part.groups() {
                let k = g.len() as f64;
                let sz: f64 = z[g.clone()].iter().sum();
                let sw: f64 = w[g.clone()].iter().sum();
                num += sz * sw / k;
                den += sw * sw / k;
                means.push((g, sz / k, sw / k));
            }
            if den <= 0.0 {
                // zero weight on the whole prefix: ⟨w, x⟩ = ε is unreachable
                continue;
            }
            let lambda = num / den;
            let mut x = alloc::vec![0.0; n];
            for (g, zm, wm) in means {
                let v = zm - lambda * wm;
                x[g].iter_mut().for_each(|xi| *xi = v);
            }
            let residual = kkt_certificate(z, w, eps, &x, lambda).max_residual();
            out.push(Candidate {
                prefix_len: len,
                mask,
                x,
                lambda,
                residual,
            });
        }
    }
    Ok(out)
}

/// Exact projection by exhaustive search over candidate structures.
///
/// Picks the candidate with the smallest optimality residual, ties going to
/// the first in enumeration order, and fails unless that residual is within
/// `1e-9` of zero relative to the data scale.
pub fn oracle_project_small(inst: &ReducedInstance) -> Result<OracleSolution> {
    let candidates = enumerate_candidates(inst)?;
    let best = candidates
        .into_iter()
        .reduce(|a, b| if b.residual < a.residual { b } else { a })
        .ok_or(Error::NoKktPoint {
            best_residual: f64::INFINITY,
        })?;
    if best.residual.is_nan() || best.residual > 1e-9 * scale(inst) {
        return Err(Error::NoKktPoint {
            best_residual: best.residual,
        });
    }
    let certificate = kkt_certificate(
        inst.z(),
        inst.weights().as_slice(),
        inst.radius(),
        &best.x,
        best.lambda,
    );
    Ok(OracleSolution {
        x: best.x,
        lambda: best.lambda,
        method: OracleMethod::ActiveSetEnumeration,
        certificate,
    })
}

fn scale(inst: &ReducedInstance) -> f64 {
    let zmax = inst.z().first().copied().unwrap_or(0.0);
    let wmax = inst.weights().as_slice()[0];
    1.0f64.max(zmax * wmax).max(inst.radius()).max(zmax)
}

/// Projection onto `{x₁ ≥ … ≥ x_n}` by pool-adjacent-violators.
pub fn pava_nonincreasing(y: &[f64]) -> Vec<f64> {
    // blocks of (sum, count), merged while a block mean exceeds its
    // predecessor's
    let mut sums: Vec<f64> = Vec::with_capacity(y.len());
    let mut counts: Vec<usize> = Vec::with_capacity(y.len());
    for &v in y {
        sums.push(v);
        counts.push(1);
        while sums.len() > 1 {
            let k = sums.len();
            let (s1, c1) = (sums[k - 2], counts[k - 2] as f64);
            let (s2, c2) = (sums[k - 1], counts[k - 1] as f64);
            if s2 / c2 > s1 / c1 {
                sums[k - 2] += sums[k - 1];
                counts[k - 2] += counts[k - 1];
                sums.pop();
                counts.pop();
            } else {
                break;
            }
        }
    }
    let mut out = Vec::with_capacity(y.len());
    for (s, c) in sums.into_iter().zip(counts) {
        out.extend(core::iter::repeat_n(s / c as f64, c));
    }
    out
}

/// Projection onto the monotone nonnegative cone `T`.
pub fn project_monotone_cone(y: &[f64]) -> Vec<f64> {
    let mut x = pava_nonincreasing(y);
    x.iter_mut().for_each(|v| *v = v.max(0.0));
    x
}

/// Dykstra's alternating projections between `{⟨w, x⟩ = ε}` and `T`.
///
/// Stops early once an iteration moves no coordinate by more than
/// `1e-16`. The multiplier in the result is the least-squares fit of the
/// stationarity condition and is only indicative.
pub fn dykstra_project(inst: &ReducedInstance, iters: usize) -> OracleSolution {
    dykstra_raw(inst.z(), inst.weights().as_slice(), inst.radius(), iters)
}

/// [`dykstra_project`] on raw data, without the `⟨z, w⟩ > ε` requirement.
pub fn dykstra_raw(z: &[f64], w: &[f64], eps: f64, iters: usize) -> OracleSolution {
    let n = z.len();
    let wsq: f64 = w.iter().map(|v| v * v).sum();

    let mut x = z.to_vec();
    let mut p = alloc::vec![0.0; n];
    let mut q = alloc::vec![0.0; n];
    let mut y = alloc::vec![0.0; n];
    let mut tmp = alloc::vec![0.0; n];
    for _ in 0..iters.max(1) {
        // hyperplane step
        for i in 0..n {
            tmp[i] = x[i] + p[i];
        }
        let shift = (eps - dot(w, &tmp)) / wsq;
        for i in 0..n {
            y[i] = tmp[i] + shift * w[i];
            p[i] = tmp[i] - y[i];
        }
        // cone step
        for i in 0..n {
            tmp[i] = y[i] + q[i];
        }
        let next = project_monotone_cone(&tmp);
        let mut moved = 0.0f64;
        for i in 0..n {
            q[i] = tmp[i] - next[i];
            moved = moved.max((next[i] - x[i]).abs());
        }
        x = next;
        if moved <= 1e-16 {
            break;
        }
    }
    // the iterate lies in T; pull it back onto the hyperplane along w
    // only for the report, never for x itself
    let lambda = (dot(z, w) - dot(&x, w)) / wsq;
    let certificate = kkt_certificate(z, w, eps, &x, lambda);
    OracleSolution {
        x,
        lambda,
        method: OracleMethod::Dykstra,
        certificate,
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
