//! Synthetic clustered-regression instances.

use owl_core::{eval_owl_norm, oscar_weights, OscarParams, OwlBall, WeightVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::dense::DenseMatrix;
use crate::error::{Error, Result};
use crate::solvers::{DrsResolvent, RegressionProblem, SolverKind};

pub const BLOCK_UNIT: usize = 1000;
const AR_COEFF: f64 = 0.8;

/// `(length per unit of d, value)` runs making up `x_true`. The trailing zero
/// run is 200 so the total is exactly `1000d`.
const LAYOUT: [(usize, f64); 7] = [
    (150, 0.0),
    (50, 3.0),
    (250, 0.0),
    (50, -4.0),
    (250, 0.0),
    (50, 6.0),
    (200, 0.0),
];

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub seed: u64,
    pub d: usize,
    pub mu1: f64,
    pub mu2: f64,
    pub noise_variance: f64,
    pub solver: SolverKind,
    pub iters: usize,
    pub step: Option<f64>,
    pub resolvent: DrsResolvent,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            seed: 0,
            d: 1,
            mu1: 1e-3,
            mu2: 1e-5,
            noise_variance: 0.01,
            solver: SolverKind::Fista,
            iters: 2000,
            step: None,
            resolvent: DrsResolvent::Cholesky,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.d == 0 {
            return Err(Error::InvalidConfig("d must be at least 1".into()));
        }
        if !(self.noise_variance >= 0.0 && self.noise_variance.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "noise variance must be finite and nonnegative, got {}",
                self.noise_variance
            )));
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        BLOCK_UNIT * self.d
    }
}

#[derive(Debug, Clone)]
pub struct SyntheticData {
    pub a: DenseMatrix,
    pub b: Vec<f64>,
    pub x_true: Vec<f64>,
    pub noise: Vec<f64>,
    pub weights: WeightVector,
    pub radius: f64,
}

impl SyntheticData {
    /// `½‖ν‖²`, the objective at `x_true`.
    pub fn noise_energy(&self) -> f64 {
        0.5 * self.noise.iter().map(|v| v * v).sum::<f64>()
    }

    pub fn into_problem(self) -> Result<RegressionProblem> {
        let ball = OwlBall::new(self.weights, self.radius)?;
        RegressionProblem::new(self.a, self.b, ball)
    }
}

pub fn true_coefficients(d: usize) -> Vec<f64> {
    let mut x = Vec::with_capacity(BLOCK_UNIT * d);
    for (len, v) in LAYOUT {
        x.extend(std::iter::repeat_n(v, len * d));
    }
    x
}

/// Rows follow `a_j = 0.8 a_{j−1} + 0.6 g_j` with `a_0 = g_0`, so columns have
/// unit variance and correlation `0.8^|i−j|`. Columns are then centered and
/// scaled to unit sample standard deviation.
pub fn gen_synthetic(cfg: &ExperimentConfig) -> Result<SyntheticData> {
    cfg.validate()?;
    let n = cfg.dim();
    let m = n;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let innov = (1.0 - AR_COEFF * AR_COEFF).sqrt();

    let mut a = DenseMatrix::zeros(m, n)?;
    for i in 0..m {
        let row = a.row_mut(i);
        let mut prev: f64 = StandardNormal.sample(&mut rng);
        row[0] = prev;
        for v in row.iter_mut().skip(1) {
            let g: f64 = StandardNormal.sample(&mut rng);
            prev = AR_COEFF * prev + innov * g;
            *v = prev;
        }
    }
    standardize_columns(&mut a);

    let x_true = true_coefficients(cfg.d);
    let sd = cfg.noise_variance.sqrt();
    let noise: Vec<f64> = (0..m)
        .map(|_| {
            let g: f64 = StandardNormal.sample(&mut rng);
            sd * g
        })
        .collect();
    let mut b = vec![0.0; m];
    a.mul_vec(&x_true, &mut b);
    for (bi, ni) in b.iter_mut().zip(&noise) {
        *bi += ni;
    }

    let weights = oscar_weights(OscarParams::new(cfg.mu1, cfg.mu2, n)?)?;
    let radius = eval_owl_norm(&x_true, &weights)?;
    Ok(SyntheticData {
        a,
        b,
        x_true,
        noise,
        weights,
        radius,
    })
}

fn standardize_columns(a: &mut DenseMatrix) {
    let (m, n) = (a.rows(), a.cols());
    if m < 2 {
        return;
    }
    let mut mean = vec![0.0; n];
    for i in 0..m {
        for (s, v) in mean.iter_mut().zip(a.row(i)) {
            *s += v;
        }
    }
    mean.iter_mut().for_each(|s| *s /= m as f64);
    let mut ss = vec![0.0; n];
    for i in 0..m {
        for ((s, v), mu) in ss.iter_mut().zip(a.row(i)).zip(&mean) {
            *s += (v - mu) * (v - mu);
        }
    }
    let scale: Vec<f64> = ss
        .iter()
        .map(|s| {
            let sd = (s / (m - 1) as f64).sqrt();
            if sd > 0.0 {
                1.0 / sd
            } else {
                1.0
            }
        })
        .collect();
    for i in 0..m {
        for ((v, mu), sc) in a.row_mut(i).iter_mut().zip(&mean).zip(&scale) {
            *v = (*v - mu) * sc;
        }
    }
}
