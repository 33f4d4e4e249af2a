//! Subcommand bodies, kept out of `main` so tests can drive them directly.

use std::path::Path;

use owl_core::{eval_owl_norm, project_owl_ball, OwlBall};

use crate::bench::{run_grid, timings_csv, TimingGrid};
use crate::error::Result;
use crate::io::{format_vector, read_vector, write_text, write_vector, WeightSpec};
use crate::solvers::SolverTrace;
use crate::synthetic::{gen_synthetic, ExperimentConfig, SyntheticData};

/// Projects the vector in `input` and writes the result to `output`.
/// Returns the summary printed by the CLI.
pub fn cmd_project(input: &Path, weights: &WeightSpec, eps: f64, output: &Path) -> Result<String> {
    let z = read_vector(input)?;
    let w = weights.resolve(z.len())?;
    let ball = OwlBall::new(w, eps)?;
    let res = project_owl_ball(&z, &ball)?;
    write_vector(output, &res.x_star)?;
    let norm = eval_owl_norm(&res.x_star, ball.weights())?;
    let mut s = format!("norm: {norm:?}\n");
    if res.outer_loops == 0 {
        s.push_str("feasible: returned unchanged\n");
        return Ok(s);
    }
    let names: Vec<&str> = res.branch_trace.iter().map(|b| b.name()).collect();
    s.push_str(&format!("lambda: {:?}\n", res.lambda_star));
    s.push_str(&format!("outer loops: {}\n", res.outer_loops));
    s.push_str(&format!("branches: {}\n", names.join(", ")));
    Ok(s)
}

pub fn cmd_bench(grid: &TimingGrid, seed: u64, parallel: bool, out: &Path) -> Result<String> {
    let cells = run_grid(grid, seed, parallel)?;
    let csv = timings_csv(&cells);
    write_text(out, &csv)?;
    Ok(csv)
}

pub fn run_regress(cfg: &ExperimentConfig) -> Result<(SolverTrace, f64)> {
    let data = gen_synthetic(cfg)?;
    let energy = data.noise_energy();
    let problem = data.into_problem()?;
    let trace = cfg
        .solver
        .run(&problem, cfg.step, cfg.iters, cfg.resolvent)?;
    Ok((trace, energy))
}

pub fn cmd_regress(cfg: &ExperimentConfig, out: &Path) -> Result<String> {
    let (trace, energy) = run_regress(cfg)?;
    write_text(out, &trace.to_csv())?;
    Ok(format!(
        "final objective: {:e}\nnoise energy: {:e}\n",
        trace.final_objective(),
        energy
    ))
}

/// Writes `<prefix>A.txt` (row-major, one entry per line, with a shape
/// header), `<prefix>b.txt`, `<prefix>x_true.txt`, `<prefix>w.txt` and
/// `<prefix>eps.txt`.
pub fn cmd_gen(cfg: &ExperimentConfig, prefix: &str) -> Result<SyntheticData> {
    let data = gen_synthetic(cfg)?;
    let path = |name: &str| format!("{prefix}{name}");
    let a = &data.a;
    let header = format!("# rows {}\n# cols {}\n", a.rows(), a.cols());
    write_text(
        Path::new(&path("A.txt")),
        &(header + &format_vector(a.data())),
    )?;
    write_vector(Path::new(&path("b.txt")), &data.b)?;
    write_vector(Path::new(&path("x_true.txt")), &data.x_true)?;
    write_vector(Path::new(&path("w.txt")), data.weights.as_slice())?;
    write_vector(Path::new(&path("eps.txt")), &[data.radius])?;
    Ok(data)
}
