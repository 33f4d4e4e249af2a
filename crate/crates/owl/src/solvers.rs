//! First-order solvers for `min ½‖Ax − b‖²` over an OWL ball.

use std::time::Instant;

use owl_core::{eval_owl_norm, project_owl_ball, OwlBall};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dense::{dot, norm2, DenseMatrix};
use crate::error::{Error, Result};

/// Multiplier applied to the power-iteration estimate before it is used for
/// step sizes.
pub const NORM_SAFETY: f64 = 1.01;

const POWER_TOL: f64 = 1e-10;
const POWER_MAX_ITERS: usize = 1000;
const CG_TOL: f64 = 1e-10;

#[derive(Debug, Clone)]
pub struct RegressionProblem {
    a: DenseMatrix,
    b: Vec<f64>,
    ball: OwlBall,
}

impl RegressionProblem {
    pub fn new(a: DenseMatrix, b: Vec<f64>, ball: OwlBall) -> Result<Self> {
        if a.rows() != b.len() {
            return Err(owl_core::Error::DimensionMismatch {
                expected: a.rows(),
                found: b.len(),
            }
            .into());
        }
        if a.cols() != ball.dim() {
            return Err(owl_core::Error::DimensionMismatch {
                expected: a.cols(),
                found: ball.dim(),
            }
            .into());
        }
        Ok(RegressionProblem { a, b, ball })
    }

    pub fn matrix(&self) -> &DenseMatrix {
        &self.a
    }

    pub fn rhs(&self) -> &[f64] {
        &self.b
    }

    pub fn ball(&self) -> &OwlBall {
        &self.ball
    }

    pub fn dim(&self) -> usize {
        self.a.cols()
    }

    pub fn objective(&self, x: &[f64]) -> f64 {
        let mut r = vec![0.0; self.a.rows()];
        self.residual(x, &mut r);
        0.5 * dot(&r, &r)
    }

    /// `max(0, Ω_w(x) − ε)`.
    pub fn infeasibility(&self, x: &[f64]) -> f64 {
        let norm = eval_owl_norm(x, self.ball.weights()).unwrap_or(f64::INFINITY);
        (norm - self.ball.radius()).max(0.0)
    }

    fn residual(&self, x: &[f64], r: &mut [f64]) {
        self.a.mul_vec(x, r);
        for (ri, bi) in r.iter_mut().zip(&self.b) {
            *ri -= bi;
        }
    }

    fn gradient(&self, x: &[f64], r: &mut [f64], g: &mut [f64]) {
        self.residual(x, r);
        self.a.mul_t_vec(r, g);
    }

    fn project(&self, v: &[f64]) -> Result<Vec<f64>> {
        Ok(project_owl_ball(v, &self.ball)?.x_star)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceRow {
    pub iter: usize,
    pub objective: f64,
    pub elapsed_s: f64,
    pub feasibility: f64,
}

#[derive(Debug, Clone)]
pub struct SolverTrace {
    pub rows: Vec<TraceRow>,
    pub x: Vec<f64>,
    /// Spectral-norm estimate used for step sizing (0 for DRS).
    pub norm_estimate: f64,
    pub step: f64,
}

impl SolverTrace {
    pub fn final_objective(&self) -> f64 {
        self.rows.last().map_or(f64::NAN, |r| r.objective)
    }

    /// First iteration whose objective is at most `level`.
    pub fn first_reaching(&self, level: f64) -> Option<usize> {
        self.rows
            .iter()
            .find(|r| r.objective <= level)
            .map(|r| r.iter)
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("iter,objective,elapsed_s,feasibility\n");
        for r in &self.rows {
            s.push_str(&format!(
                "{},{:e},{:e},{:e}\n",
                r.iter, r.objective, r.elapsed_s, r.feasibility
            ));
        }
        s
    }
}

struct Recorder<'a> {
    problem: &'a RegressionProblem,
    start: Instant,
    rows: Vec<TraceRow>,
}

impl<'a> Recorder<'a> {
    fn new(problem: &'a RegressionProblem, start: Instant, iters: usize) -> Self {
        Recorder {
            problem,
            start,
            rows: Vec::with_capacity(iters + 1),
        }
    }

    fn record(&mut self, iter: usize, x: &[f64]) {
        let elapsed_s = self.start.elapsed().as_secs_f64();
        self.rows.push(TraceRow {
            iter,
            objective: self.problem.objective(x),
            elapsed_s,
            feasibility: self.problem.infeasibility(x),
        });
    }
}

/// Power iteration on `AᵀA`. Returns the raw estimate of `‖A‖₂`; multiply by
/// [`NORM_SAFETY`] for step sizing.
pub fn operator_norm(a: &DenseMatrix) -> f64 {
    let n = a.cols();
    if n == 0 || a.rows() == 0 {
        return 0.0;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x6f776c);
    let mut v: Vec<f64> = (0..n).map(|_| rng.random::<f64>() - 0.5).collect();
    let nv = norm2(&v);
    v.iter_mut().for_each(|x| *x /= nv);
    let mut av = vec![0.0; a.rows()];
    let mut w = vec![0.0; n];
    let mut prev = 0.0;
    for _ in 0..POWER_MAX_ITERS {
        a.mul_vec(&v, &mut av);
        a.mul_t_vec(&av, &mut w);
        let lam = norm2(&w);
        if lam == 0.0 {
            return 0.0;
        }
        for (vi, wi) in v.iter_mut().zip(&w) {
            *vi = wi / lam;
        }
        if (lam - prev).abs() <= POWER_TOL * lam {
            prev = lam;
            break;
        }
        prev = lam;
    }
    prev.sqrt()
}

/// Default FBS/FISTA step for a raw norm estimate.
pub fn default_step(norm_estimate: f64) -> f64 {
    let safe = NORM_SAFETY * norm_estimate;
    0.99 / (safe * safe)
}

fn check_step(step: f64, limit: f64) -> Result<()> {
    if !(step.is_finite() && step > 0.0) {
        return Err(Error::InvalidConfig(format!(
            "step must be positive, got {step}"
        )));
    }
    if step >= limit {
        return Err(Error::StepTooLarge { step, limit });
    }
    Ok(())
}

fn resolve_step(
    p: &RegressionProblem,
    step: Option<f64>,
    factor: f64,
    strict: bool,
) -> Result<(f64, f64)> {
    let est = operator_norm(&p.a);
    let limit = if est > 0.0 {
        factor / (est * est)
    } else {
        f64::INFINITY
    };
    let step = match step {
        Some(s) => s,
        None if est > 0.0 => default_step(est),
        None => 1.0,
    };
    if strict {
        check_step(step, limit)?;
    } else {
        check_step(step, limit * (1.0 + f64::EPSILON))?;
    }
    Ok((est, step))
}

/// Projected gradient: `x ← P(x − γ Aᵀ(Ax − b))`, from `x = 0`.
pub fn fbs_solve(p: &RegressionProblem, step: Option<f64>, iters: usize) -> Result<SolverTrace> {
    let start = Instant::now();
    let (est, step) = resolve_step(p, step, 2.0, true)?;
    let n = p.dim();
    let mut rec = Recorder::new(p, start, iters);
    let mut x = vec![0.0; n];
    let mut r = vec![0.0; p.a.rows()];
    let mut g = vec![0.0; n];
    rec.record(0, &x);
    for k in 1..=iters {
        p.gradient(&x, &mut r, &mut g);
        for (gi, xi) in g.iter_mut().zip(&x) {
            *gi = xi - step * *gi;
        }
        x = p.project(&g)?;
        rec.record(k, &x);
    }
    Ok(SolverTrace {
        rows: rec.rows,
        x,
        norm_estimate: est,
        step,
    })
}

/// `t_{k+1} = (1 + √(1 + 4t_k²)) / 2`.
pub fn fista_next_t(t: f64) -> f64 {
    (1.0 + (1.0 + 4.0 * t * t).sqrt()) / 2.0
}

/// Accelerated projected gradient with the standard momentum sequence,
/// `t₁ = 1`.
pub fn fista_solve(p: &RegressionProblem, step: Option<f64>, iters: usize) -> Result<SolverTrace> {
    let start = Instant::now();
    let (est, step) = resolve_step(p, step, 1.0, false)?;
    let n = p.dim();
    let mut rec = Recorder::new(p, start, iters);
    let mut x = vec![0.0; n];
    let mut y = x.clone();
    let mut t = 1.0;
    let mut r = vec![0.0; p.a.rows()];
    let mut g = vec![0.0; n];
    rec.record(0, &x);
    for k in 1..=iters {
        p.gradient(&y, &mut r, &mut g);
        for (gi, yi) in g.iter_mut().zip(&y) {
            *gi = yi - step * *gi;
        }
        let x_next = p.project(&g)?;
        let t_next = fista_next_t(t);
        let beta = (t - 1.0) / t_next;
        for ((yi, xn), xo) in y.iter_mut().zip(&x_next).zip(&x) {
            *yi = xn + beta * (xn - xo);
        }
        x = x_next;
        t = t_next;
        rec.record(k, &x);
    }
    Ok(SolverTrace {
        rows: rec.rows,
        x,
        norm_estimate: est,
        step,
    })
}

/// Conjugate gradient for `(I + γAᵀA) y = rhs`, warm-started from `y`.
struct ResolventSolver<'a> {
    a: &'a DenseMatrix,
    gamma: f64,
    max_iters: usize,
    r: Vec<f64>,
    d: Vec<f64>,
    q: Vec<f64>,
    tmp: Vec<f64>,
}

impl<'a> ResolventSolver<'a> {
    fn new(a: &'a DenseMatrix, gamma: f64) -> Self {
        let n = a.cols();
        ResolventSolver {
            a,
            gamma,
            max_iters: 10 * n.max(10),
            r: vec![0.0; n],
            d: vec![0.0; n],
            q: vec![0.0; n],
            tmp: vec![0.0; a.rows()],
        }
    }

    fn apply(&mut self, v: &[f64], out: &mut [f64]) {
        self.a.mul_vec(v, &mut self.tmp);
        self.a.mul_t_vec(&self.tmp, out);
        for (o, vi) in out.iter_mut().zip(v) {
            *o = vi + self.gamma * *o;
        }
    }

    fn solve(&mut self, rhs: &[f64], y: &mut [f64]) -> Result<()> {
        let rhs_norm = norm2(rhs);
        if rhs_norm == 0.0 {
            y.fill(0.0);
            return Ok(());
        }
        let mut q = std::mem::take(&mut self.q);
        self.apply(y, &mut q);
        for ((ri, bi), qi) in self.r.iter_mut().zip(rhs).zip(&q) {
            *ri = bi - qi;
        }
        self.d.copy_from_slice(&self.r);
        let mut rr = dot(&self.r, &self.r);
        let target = CG_TOL * rhs_norm;
        let mut it = 0;
        while rr.sqrt() > target {
            if it == self.max_iters {
                self.q = q;
                return Err(Error::CgDivergence {
                    iterations: it,
                    residual: rr.sqrt() / rhs_norm,
                });
            }
            let d = std::mem::take(&mut self.d);
            self.apply(&d, &mut q);
            self.d = d;
            let alpha = rr / dot(&self.d, &q);
            for ((yi, di), (ri, qi)) in y.iter_mut().zip(&self.d).zip(self.r.iter_mut().zip(&q)) {
                *yi += alpha * di;
                *ri -= alpha * qi;
            }
            let rr_next = dot(&self.r, &self.r);
            let beta = rr_next / rr;
            for (di, ri) in self.d.iter_mut().zip(&self.r) {
                *di = ri + beta * *di;
            }
            rr = rr_next;
            it += 1;
        }
        self.q = q;
        Ok(())
    }
}

/// How DRS applies `(I + γAᵀA)⁻¹`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum DrsResolvent {
    /// Factor once, then two triangular solves per iteration.
    #[default]
    Cholesky,
    /// Warm-started conjugate gradient to relative residual 1e-10.
    Cg,
}

enum Resolvent<'a> {
    Cholesky(nalgebra::Cholesky<f64, nalgebra::Dyn>),
    Cg(ResolventSolver<'a>),
}

impl<'a> Resolvent<'a> {
    fn new(a: &'a DenseMatrix, gamma: f64, kind: DrsResolvent) -> Result<Self> {
        match kind {
            DrsResolvent::Cg => Ok(Resolvent::Cg(ResolventSolver::new(a, gamma))),
            DrsResolvent::Cholesky => {
                let m = nalgebra::DMatrix::from_row_slice(a.rows(), a.cols(), a.data());
                let mut h = m.tr_mul(&m);
                h *= gamma;
                for i in 0..a.cols() {
                    h[(i, i)] += 1.0;
                }
                let chol = nalgebra::Cholesky::new(h).ok_or_else(|| {
                    Error::InvalidConfig("I + γAᵀA is not numerically positive definite".into())
                })?;
                Ok(Resolvent::Cholesky(chol))
            }
        }
    }

    fn solve(&mut self, rhs: &[f64], y: &mut [f64]) -> Result<()> {
        match self {
            Resolvent::Cg(cg) => cg.solve(rhs, y),
            Resolvent::Cholesky(chol) => {
                let mut v = nalgebra::DVector::from_column_slice(rhs);
                chol.solve_mut(&mut v);
                y.copy_from_slice(v.as_slice());
                Ok(())
            }
        }
    }
}

/// Douglas–Rachford on `f = ½‖Ax − b‖²` and the ball indicator:
///
/// `x = P(z)`, `y = (I + γAᵀA)⁻¹(2x − z + γAᵀb)`, `z ← z + y − x`.
///
/// The trace reports the feasible sequence `x`.
pub fn drs_solve(p: &RegressionProblem, gamma: Option<f64>, iters: usize) -> Result<SolverTrace> {
    drs_solve_with(p, gamma, iters, DrsResolvent::default())
}

pub fn drs_solve_with(
    p: &RegressionProblem,
    gamma: Option<f64>,
    iters: usize,
    resolvent: DrsResolvent,
) -> Result<SolverTrace> {
    let start = Instant::now();
    let gamma = gamma.unwrap_or(1.0);
    if !(gamma.is_finite() && gamma > 0.0) {
        return Err(Error::InvalidConfig(format!(
            "DRS penalty must be positive, got {gamma}"
        )));
    }
    let n = p.dim();
    let mut atb = vec![0.0; n];
    p.a.mul_t_vec(&p.b, &mut atb);
    atb.iter_mut().for_each(|v| *v *= gamma);
    let mut res = Resolvent::new(&p.a, gamma, resolvent)?;
    let mut rec = Recorder::new(p, start, iters);
    let mut z = vec![0.0; n];
    let mut x = vec![0.0; n];
    let mut y = vec![0.0; n];
    let mut rhs = vec![0.0; n];
    rec.record(0, &x);
    for k in 1..=iters {
        for ((ri, xi), (zi, ci)) in rhs.iter_mut().zip(&x).zip(z.iter().zip(&atb)) {
            *ri = 2.0 * xi - zi + ci;
        }
        res.solve(&rhs, &mut y)?;
        for ((zi, yi), xi) in z.iter_mut().zip(&y).zip(&x) {
            *zi += yi - xi;
        }
        x = p.project(&z)?;
        rec.record(k, &x);
    }
    Ok(SolverTrace {
        rows: rec.rows,
        x,
        norm_estimate: 0.0,
        step: gamma,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum SolverKind {
    Fbs,
    Fista,
    Drs,
}

impl SolverKind {
    pub fn run(
        self,
        p: &RegressionProblem,
        step: Option<f64>,
        iters: usize,
        resolvent: DrsResolvent,
    ) -> Result<SolverTrace> {
        match self {
            SolverKind::Fbs => fbs_solve(p, step, iters),
            SolverKind::Fista => fista_solve(p, step, iters),
            SolverKind::Drs => drs_solve_with(p, step, iters, resolvent),
        }
    }
}
