//! Optimality certificate for the reduced problem.
//!
//! `x` solves `min ½‖x − z‖²` over `{⟨w, x⟩ = ε} ∩ T` iff there are
//! `λ > 0` and `v ≥ 0` with `x ∈ T`, `v_i (x_i − x_{i+1}) = 0`,
//! `v_n x_n = 0`, `x_i = z_i − λw_i + v_i − v_{i−1}` and `⟨x, w⟩ = ε`.
//! Given `λ`, the stationarity equation fixes `v` recursively, so only the
//! remaining conditions need checking.

use alloc::vec::Vec;

/// Largest violation of each optimality condition. All zero at an exact
/// solution.
#[derive(Debug, Clone, PartialEq)]
pub struct KktReport {
    /// Violation of `x₁ ≥ … ≥ x_n ≥ 0`.
    pub monotone: f64,
    /// `max |v_i (x_i − x_{i+1})|` together with `|v_n x_n|`.
    pub complementarity: f64,
    /// `max(0, −min v_i)`.
    pub dual_feasibility: f64,
    /// `|⟨x, w⟩ − ε|`.
    pub hyperplane: f64,
    /// `max(0, −λ)`.
    pub multiplier: f64,
    /// The reconstructed `v`.
    pub v: Vec<f64>,
}

impl KktReport {
    pub fn max_residual(&self) -> f64 {
        self.monotone
            .max(self.complementarity)
            .max(self.dual_feasibility)
            .max(self.hyperplane)
            .max(self.multiplier)
    }

    pub fn passes(&self, tol: f64) -> bool {
        self.max_residual() <= tol
    }
}

/// Residuals of the optimality conditions at `(x, λ)`.
///
/// All slices must have the same length.
pub fn kkt_certificate(z: &[f64], w: &[f64], eps: f64, x: &[f64], lambda: f64) -> KktReport {
    let n = z.len();
    assert!(w.len() == n && x.len() == n, "length mismatch");
    let mut v = Vec::with_capacity(n);
    let mut prev = 0.0;
    for i in 0..n {
        prev += x[i] - z[i] + lambda * w[i];
        v.push(prev);
    }

    let mut monotone = 0.0f64;
    let mut complementarity = 0.0f64;
    for i in 0..n {
        let gap = if i + 1 < n { x[i] - x[i + 1] } else { x[i] };
        monotone = monotone.max(-gap);
        complementarity = complementarity.max((v[i] * gap).abs());
    }
    let dual_feasibility = v.iter().fold(0.0f64, |m, &vi| m.max(-vi));
    let wx: f64 = x.iter().zip(w).map(|(a, b)| a * b).sum();
    KktReport {
        monotone,
        complementarity,
        dual_feasibility,
        hyperplane: (wx - eps).abs(),
        multiplier: (-lambda).max(0.0),
        v,
    }
}
