//! Timing sweeps over vector length and density.

use std::time::Instant;

use owl_core::{eval_owl_norm, oscar_weights, project_owl_ball, OscarParams, OwlBall};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::rng::{cell_rng, sparse_gaussian};

pub const BENCH_MU1: f64 = 1e-3;
pub const BENCH_MU2: f64 = 1e-5;

#[derive(Debug, Clone, PartialEq)]
pub struct TimingGrid {
    pub lengths: Vec<usize>,
    pub densities: Vec<f64>,
    pub runs: usize,
    /// Radius as a fraction of `Ω_w(z)`, so every draw needs a real projection.
    pub radius_fraction: f64,
}

impl TimingGrid {
    pub fn new(lengths: Vec<usize>, densities: Vec<f64>, runs: usize) -> Self {
        TimingGrid {
            lengths,
            densities,
            runs,
            radius_fraction: 0.5,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.runs == 0 {
            return Err(Error::InvalidConfig("runs must be at least 1".into()));
        }
        if let Some(n) = self.lengths.iter().find(|n| **n == 0) {
            return Err(Error::InvalidConfig(format!("length {n} must be positive")));
        }
        if let Some(d) = self.densities.iter().find(|d| !(**d > 0.0 && **d <= 1.0)) {
            return Err(Error::InvalidConfig(format!(
                "density {d} is outside (0, 1]"
            )));
        }
        if !(self.radius_fraction > 0.0 && self.radius_fraction < 1.0) {
            return Err(Error::InvalidConfig(format!(
                "radius fraction {} is outside (0, 1)",
                self.radius_fraction
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CellTiming {
    pub n: usize,
    pub density: f64,
    pub samples: Vec<f64>,
}

impl CellTiming {
    pub fn mean(&self) -> f64 {
        self.samples.iter().sum::<f64>() / self.samples.len() as f64
    }

    /// Sample standard deviation; 0 for a single run.
    pub fn std(&self) -> f64 {
        let k = self.samples.len();
        if k < 2 {
            return 0.0;
        }
        let m = self.mean();
        (self.samples.iter().map(|s| (s - m) * (s - m)).sum::<f64>() / (k - 1) as f64).sqrt()
    }

    pub fn median(&self) -> f64 {
        let mut s = self.samples.clone();
        s.sort_by(f64::total_cmp);
        let k = s.len();
        if k % 2 == 1 {
            s[k / 2]
        } else {
            0.5 * (s[k / 2 - 1] + s[k / 2])
        }
    }
}

/// Times one grid cell. Vector generation and the radius computation are
/// outside the timed region.
pub fn time_cell(
    n: usize,
    density: f64,
    runs: usize,
    radius_fraction: f64,
    seed: u64,
) -> Result<CellTiming> {
    let w = oscar_weights(OscarParams::new(BENCH_MU1, BENCH_MU2, n)?)?;
    let mut samples = Vec::with_capacity(runs);
    for run in 0..runs {
        let z = sparse_gaussian(&mut cell_rng(seed, n, density, run), n, density);
        let norm = eval_owl_norm(&z, &w)?;
        let ball = OwlBall::new(w.clone(), (radius_fraction * norm).max(f64::MIN_POSITIVE))?;
        let t = Instant::now();
        let res = project_owl_ball(&z, &ball)?;
        samples.push(t.elapsed().as_secs_f64());
        drop(res);
    }
    Ok(CellTiming {
        n,
        density,
        samples,
    })
}

pub fn run_grid(grid: &TimingGrid, seed: u64, parallel: bool) -> Result<Vec<CellTiming>> {
    grid.validate()?;
    let cells: Vec<(usize, f64)> = grid
        .lengths
        .iter()
        .flat_map(|n| grid.densities.iter().map(move |d| (*n, *d)))
        .collect();
    let one = |&(n, d): &(usize, f64)| time_cell(n, d, grid.runs, grid.radius_fraction, seed);
    if parallel {
        cells.par_iter().map(one).collect()
    } else {
        cells.iter().map(one).collect()
    }
}

pub fn timings_csv(cells: &[CellTiming]) -> String {
    let mut s = String::from("n,density,mean_s,std_s\n");
    for c in cells {
        s.push_str(&format!(
            "{},{},{:e},{:e}\n",
            c.n,
            c.density,
            c.mean(),
            c.std()
        ));
    }
    s
}

/// Least-squares slope of `log y` against `log x`.
pub fn loglog_slope(x: &[f64], y: &[f64]) -> f64 {
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let k = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / k;
    let my = ly.iter().sum::<f64>() / k;
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn statistics() {
        let c = CellTiming {
            n: 1,
            density: 1.0,
            samples: vec![1.0, 3.0, 2.0, 10.0],
        };
        assert_eq!(c.mean(), 4.0);
        assert_eq!(c.median(), 2.5);
        assert!((c.std() - (50.0f64 / 3.0).sqrt()).abs() < 1e-12);
        let one = CellTiming {
            n: 1,
            density: 1.0,
            samples: vec![0.5],
        };
        assert_eq!(one.std(), 0.0);
    }

    #[test]
    fn slope() {
        let x = [1e4, 1e5, 1e6];
        let y: Vec<f64> = x.iter().map(|v| 3.0 * v * v).collect();
        assert!((loglog_slope(&x, &y) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn grid_validation() {
        assert!(TimingGrid::new(vec![10], vec![1.0], 0).validate().is_err());
        assert!(TimingGrid::new(vec![10], vec![0.0], 1).validate().is_err());
        assert!(TimingGrid::new(vec![0], vec![1.0], 1).validate().is_err());
        assert!(TimingGrid::new(vec![10], vec![0.5], 1).validate().is_ok());
    }
}
