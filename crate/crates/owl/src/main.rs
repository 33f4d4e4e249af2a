use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use owl::bench::TimingGrid;
use owl::commands::{cmd_bench, cmd_gen, cmd_project, cmd_regress};
use owl::io::WeightSpec;
use owl::solvers::{DrsResolvent, SolverKind};
use owl::synthetic::ExperimentConfig;

#[derive(Parser)]
#[command(
    name = "owl",
    version,
    about = "Projection onto OWL norm balls, timing sweeps and regression runs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Project a vector onto {x : Ω_w(x) ≤ eps}.
    Project {
        #[arg(long)]
        input: PathBuf,
        /// A weight file or oscar:MU1,MU2
        #[arg(long)]
        weights: WeightSpec,
        #[arg(long)]
        eps: f64,
        #[arg(long)]
        output: PathBuf,
    },
    /// Time projections of random Gaussian vectors.
    Bench {
        #[arg(long, num_args = 1.., required = true)]
        lengths: Vec<usize>,
        #[arg(long, num_args = 1.., required = true)]
        densities: Vec<f64>,
        #[arg(long, default_value_t = 100)]
        runs: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        /// Radius as a fraction of the norm of each draw.
        #[arg(long, default_value_t = 0.5)]
        radius_fraction: f64,
        /// Time distinct cells concurrently.
        #[arg(long)]
        parallel: bool,
    },
    /// Solve the synthetic clustered regression problem.
    Regress {
        #[arg(long, default_value_t = 1)]
        d: usize,
        #[arg(long, value_enum, default_value_t = SolverKind::Fista)]
        solver: SolverKind,
        #[arg(long, default_value_t = 2000)]
        iters: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        /// Step size (FBS, FISTA) or penalty (DRS).
        #[arg(long)]
        step: Option<f64>,
        #[arg(long, default_value_t = 0.01)]
        noise_variance: f64,
        /// Linear solver for the DRS resolvent.
        #[arg(long, value_enum, default_value_t = DrsResolvent::Cholesky)]
        resolvent: DrsResolvent,
    },
    /// Write a synthetic regression instance to text files.
    Gen {
        #[arg(long, default_value_t = 1)]
        d: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out_prefix: String,
        #[arg(long, default_value_t = 0.01)]
        noise_variance: f64,
    },
}

fn run(cli: Cli) -> owl::Result<()> {
    owl::init_thread_pool()?;
    match cli.command {
        Command::Project {
            input,
            weights,
            eps,
            output,
        } => print!("{}", cmd_project(&input, &weights, eps, &output)?),
        Command::Bench {
            lengths,
            densities,
            runs,
            seed,
            out,
            radius_fraction,
            parallel,
        } => {
            let mut grid = TimingGrid::new(lengths, densities, runs);
            grid.radius_fraction = radius_fraction;
            print!("{}", cmd_bench(&grid, seed, parallel, &out)?);
        }
        Command::Regress {
            d,
            solver,
            iters,
            seed,
            out,
            step,
            noise_variance,
            resolvent,
        } => {
            let cfg = ExperimentConfig {
                seed,
                d,
                noise_variance,
                solver,
                iters,
                step,
                resolvent,
                ..ExperimentConfig::default()
            };
            print!("{}", cmd_regress(&cfg, &out)?);
        }
        Command::Gen {
            d,
            seed,
            out_prefix,
            noise_variance,
        } => {
            let cfg = ExperimentConfig {
                seed,
                d,
                noise_variance,
                ..ExperimentConfig::default()
            };
            let data = cmd_gen(&cfg, &out_prefix)?;
            println!("n: {}\neps: {:?}", data.x_true.len(), data.radius);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
