//! Projection onto the OWL ball.
//!
//! [`project_owl_ball`] flips signs and sorts magnitudes so the problem
//! lives on the monotone cone `T = {x₁ ≥ … ≥ x_n ≥ 0}`, returns early when
//! the input is already inside the ball, and otherwise hands the sorted
//! vector to [`solve_reduced`]: projection onto `{⟨w, x⟩ = ε} ∩ T`.
//!
//! Each outer iteration of [`solve_reduced`] reads the smallest boundary
//! ratio `r` and the aggregates `I`, `N` of the current grouping, forms
//!
//! * `λ₁ = (I − ε) / N`
//! * `λ₀ = (I_¬last − ε) / N_¬last`, the same quantity with the last group
//!   left out,
//!
//! and then either finishes with a closed-form solution or merges groups
//! and repeats. Every merge lowers the group count, so at most `n`
//! iterations run.

use alloc::vec::Vec;
use core::fmt;

use crate::groups::{GroupPartition, GroupRecord};
use crate::norm::{magnitude_order, OwlBall, WeightVector};
use crate::simplex::grouped_threshold;
use crate::{Error, Result};

/// Which case of the loop fired.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    /// `⟨z, w⟩ ≤ ε`: the input is returned unchanged.
    Feasible,
    /// `r = ∞`, weights are constant: simplex projection.
    Simplex,
    /// `λ₁ > r`: merge every boundary with ratio `≤ λ₁`.
    MergeLambda1,
    /// `λ₁ ≤ r` and `z_n − λ₁w_n ≥ 0`: `x = z − λ₁w`.
    Interior,
    /// `z_n − λ₁w_n < 0` and `λ₀ > r`: merge every boundary with ratio `≤ λ₀`.
    MergeLambda0,
    /// `λ₀ ≤ r` and the first index with `z_k − λ₀w_k < 0` lies in the last
    /// group: `x = max(z − λ₀w, 0)`.
    Threshold,
    /// As for `Threshold`, but that first index lies in an earlier group:
    /// merge every group from there on.
    MergeSuffix,
}

impl Branch {
    pub fn is_merge(self) -> bool {
        matches!(
            self,
            Branch::MergeLambda1 | Branch::MergeLambda0 | Branch::MergeSuffix
        )
    }

    pub fn name(self) -> &'static str {
        match self {
            Branch::Feasible => "feasible",
            Branch::Simplex => "simplex",
            Branch::MergeLambda1 => "merge-λ₁",
            Branch::Interior => "interior",
            Branch::MergeLambda0 => "merge-λ₀",
            Branch::Threshold => "threshold",
            Branch::MergeSuffix => "merge-G₀",
        }
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Sorted nonnegative `z` with `⟨z, w⟩ > ε`.
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedInstance {
    z: Vec<f64>,
    weights: WeightVector,
    radius: f64,
}

impl ReducedInstance {
    pub fn new(z: Vec<f64>, weights: WeightVector, radius: f64) -> Result<Self> {
        check_reduced(&z, weights.as_slice(), radius)?;
        Ok(ReducedInstance { z, weights, radius })
    }

    pub fn z(&self) -> &[f64] {
        &self.z
    }

    pub fn weights(&self) -> &WeightVector {
        &self.weights
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn len(&self) -> usize {
        self.z.len()
    }

    pub fn is_empty(&self) -> bool {
        self.z.is_empty()
    }
}

fn check_reduced(z: &[f64], w: &[f64], radius: f64) -> Result<()> {
    if z.len() != w.len() {
        return Err(Error::DimensionMismatch {
            expected: w.len(),
            found: z.len(),
        });
    }
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::InvalidRadius);
    }
    if let Some(index) = z.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite { index });
    }
    if let Some(i) = z.windows(2).position(|p| p[0] < p[1]) {
        return Err(Error::NotMonotone { index: i + 1 });
    }
    if z.last().is_some_and(|&v| v < 0.0) {
        return Err(Error::NotMonotone { index: z.len() - 1 });
    }
    let inner: f64 = z.iter().zip(w).map(|(a, b)| a * b).sum();
    if inner <= radius {
        return Err(Error::AlreadyFeasible);
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProjectionResult {
    pub x_star: Vec<f64>,
    /// Multiplier of the hyperplane constraint: `λ₁` for `Interior`, `λ₀`
    /// for `Threshold`, and the simplex threshold divided by the (constant)
    /// weight for `Simplex`. Zero when the input was feasible.
    pub lambda_star: f64,
    pub outer_loops: usize,
    pub branch_trace: Vec<Branch>,
    /// The simplex threshold itself, when the `Simplex` branch finished.
    pub simplex_threshold: Option<f64>,
}

impl ProjectionResult {
    pub fn final_branch(&self) -> Branch {
        *self.branch_trace.last().expect("trace is never empty")
    }
}

/// State of one outer iteration, passed to the observer of
/// [`solve_reduced_observed`] before the chosen branch is applied.
#[derive(Debug, Clone, PartialEq)]
pub struct IterationRecord {
    /// 1-based.
    pub iteration: usize,
    pub groups: usize,
    pub ratio: f64,
    /// NaN when there is a single group.
    pub lambda0: f64,
    pub lambda1: f64,
    /// First index (zero-based) with `z_k − λ₀w_k < 0`; only computed on
    /// the `Threshold` and `MergeSuffix` branches.
    pub cut: Option<usize>,
    pub branch: Branch,
    pub simplex_threshold: Option<f64>,
}

/// Solves the reduced problem. See the module docs.
pub fn solve_reduced(inst: &ReducedInstance) -> Result<ProjectionResult> {
    solve_sorted(
        &inst.z,
        inst.weights.as_slice(),
        inst.radius,
        &mut |_, _| {},
    )
}

/// [`solve_reduced`] with a hook that sees every iteration.
pub fn solve_reduced_observed(
    inst: &ReducedInstance,
    mut observer: impl FnMut(&IterationRecord, &GroupPartition),
) -> Result<ProjectionResult> {
    solve_sorted(&inst.z, inst.weights.as_slice(), inst.radius, &mut observer)
}

type Observer<'a> = dyn FnMut(&IterationRecord, &GroupPartition) + 'a;

fn solve_sorted(
    z: &[f64],
    w: &[f64],
    eps: f64,
    observer: &mut Observer<'_>,
) -> Result<ProjectionResult> {
    let mut part = GroupPartition::build(z, w)?;
    let mut trace = Vec::new();

    for iteration in 1.. {
        let groups = part.group_count();
        let inner = part.inner_product();
        let norm_sq = part.weight_norm_sq();
        let (r, _) = part.min_ratio();
        let lambda1 = (inner - eps) / norm_sq;
        let last = part.last();
        let lambda0 = if groups > 1 {
            let len = last.len() as f64;
            let num = inner - last.sum_z * last.sum_w / len - eps;
            num / (norm_sq - last.sum_w * last.sum_w / len)
        } else {
            f64::NAN
        };
        let mut rec = IterationRecord {
            iteration,
            groups,
            ratio: r,
            lambda0,
            lambda1,
            cut: None,
            branch: Branch::Feasible,
            simplex_threshold: None,
        };
        let exhausted = |rec: &IterationRecord| Error::BranchExhaustion {
            iteration,
            groups,
            ratio: r,
            lambda0: rec.lambda0,
            lambda1: rec.lambda1,
        };

        if inner <= eps {
            trace.push(Branch::Feasible);
            observer(&rec, &part);
            let x = part.expand_with(GroupRecord::mean_z);
            return Ok(finish(x, 0.0, iteration, trace, None));
        }
        if !lambda1.is_finite() {
            return Err(exhausted(&rec));
        }

        if r == f64::INFINITY {
            // every group carries the same mean weight
            let w1 = part.first().mean_w();
            let runs = part.records().map(|g| (g.mean_z(), g.len()));
            let (t, _) = grouped_threshold(runs, eps / w1);
            rec.branch = Branch::Simplex;
            rec.simplex_threshold = Some(t);
            trace.push(Branch::Simplex);
            observer(&rec, &part);
            let x = part.expand_with(|g| (g.mean_z() - t).max(0.0));
            return Ok(finish(x, t / w1, iteration, trace, Some(t)));
        }

        if lambda1 > r {
            rec.branch = Branch::MergeLambda1;
            trace.push(rec.branch);
            observer(&rec, &part);
            part.merge_below_lambda(lambda1)?;
            continue;
        }

        if last.mean_z() - lambda1 * last.mean_w() >= 0.0 {
            rec.branch = Branch::Interior;
            trace.push(rec.branch);
            observer(&rec, &part);
            let x = part.expand_with(|g| g.mean_z() - lambda1 * g.mean_w());
            return Ok(finish(x, lambda1, iteration, trace, None));
        }

        if lambda0 > r {
            rec.branch = Branch::MergeLambda0;
            trace.push(rec.branch);
            observer(&rec, &part);
            part.merge_below_lambda(lambda0)?;
            continue;
        }
        if !lambda0.is_finite() {
            return Err(exhausted(&rec));
        }

        // λ₀ ≤ r makes z − λ₀w nonincreasing, so its negative entries form
        // a suffix; walk back over the trailing groups to find it.
        let below = |g: &GroupRecord| g.mean_z() - lambda0 * g.mean_w() < 0.0;
        if !below(last) {
            return Err(exhausted(&rec));
        }
        let mut first_neg = last;
        while let Some(p) = part.prev_of(first_neg).filter(|p| below(p)) {
            first_neg = p;
        }
        let cut = first_neg.min_index;
        rec.cut = Some(cut);

        if cut == last.min_index {
            rec.branch = Branch::Threshold;
            trace.push(rec.branch);
            observer(&rec, &part);
            let x = part.expand_with(|g| (g.mean_z() - lambda0 * g.mean_w()).max(0.0));
            return Ok(finish(x, lambda0, iteration, trace, None));
        }

        rec.branch = Branch::MergeSuffix;
        trace.push(rec.branch);
        observer(&rec, &part);
        part.merge_suffix(cut)?;
    }
    unreachable!("the loop only exits by returning")
}

fn finish(
    x_star: Vec<f64>,
    lambda_star: f64,
    outer_loops: usize,
    branch_trace: Vec<Branch>,
    simplex_threshold: Option<f64>,
) -> ProjectionResult {
    ProjectionResult {
        x_star,
        lambda_star,
        outer_loops,
        branch_trace,
        simplex_threshold,
    }
}

/// Sign flips and sorting permutation that carry `z` onto the monotone
/// cone.
#[derive(Debug, Clone, PartialEq)]
pub struct Preprocessing {
    /// `sign(z_i)` with `sign(0) = +1`, in original order.
    pub signs: Vec<f64>,
    /// `permutation[k]` is the original index of the k-th largest
    /// magnitude; ties keep original order.
    pub permutation: Vec<usize>,
}

impl Preprocessing {
    /// Returns the preprocessing together with the sorted magnitudes.
    pub fn new(z: &[f64]) -> (Self, Vec<f64>) {
        let signs = z
            .iter()
            .map(|&v| if v < 0.0 { -1.0 } else { 1.0 })
            .collect();
        let permutation = magnitude_order(z);
        let sorted = permutation.iter().map(|&i| z[i].abs()).collect();
        (Preprocessing { signs, permutation }, sorted)
    }

    /// Maps a solution on the cone back to the original coordinates.
    pub fn restore(&self, sorted: &[f64]) -> Vec<f64> {
        let mut out = alloc::vec![0.0; sorted.len()];
        for (&orig, &v) in self.permutation.iter().zip(sorted) {
            out[orig] = self.signs[orig] * v;
        }
        out
    }
}

/// Euclidean projection of `z` onto `ball`.
pub fn project_owl_ball(z: &[f64], ball: &OwlBall) -> Result<ProjectionResult> {
    project_with(z, ball.weights(), ball.radius(), &mut |_, _| {})
}

/// [`project_owl_ball`] with an observer on the reduced-problem loop.
pub fn project_owl_ball_observed(
    z: &[f64],
    ball: &OwlBall,
    mut observer: impl FnMut(&IterationRecord, &GroupPartition),
) -> Result<ProjectionResult> {
    project_with(z, ball.weights(), ball.radius(), &mut observer)
}

fn project_with(
    z: &[f64],
    w: &WeightVector,
    eps: f64,
    observer: &mut Observer<'_>,
) -> Result<ProjectionResult> {
    if z.len() != w.len() {
        return Err(Error::DimensionMismatch {
            expected: w.len(),
            found: z.len(),
        });
    }
    if let Some(index) = z.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite { index });
    }
    let (pre, sorted) = Preprocessing::new(z);
    let norm: f64 = sorted.iter().zip(w.as_slice()).map(|(a, b)| a * b).sum();
    if norm <= eps {
        return Ok(finish(
            z.to_vec(),
            0.0,
            0,
            alloc::vec![Branch::Feasible],
            None,
        ));
    }
    let mut res = solve_sorted(&sorted, w.as_slice(), eps, observer)?;
    res.x_star = pre.restore(&res.x_star);
    Ok(res)
}

/// `prox_{γΩ*}(z) = z − γ P_{B(w,1)}(z / γ)`, the proximal map of the dual
/// norm.
pub fn prox_dual_owl(z: &[f64], weights: &WeightVector, gamma: f64) -> Result<Vec<f64>> {
    if !(gamma > 0.0 && gamma.is_finite()) {
        return Err(Error::InvalidRadius);
    }
    let scaled: Vec<f64> = z.iter().map(|v| v / gamma).collect();
    let p = project_with(&scaled, weights, 1.0, &mut |_, _| {})?;
    Ok(z.iter()
        .zip(&p.x_star)
        .map(|(a, b)| a - gamma * b)
        .collect())
}
