//! Tools around [`owl_core`]: a dense least-squares setting with FBS, FISTA
//! and Douglas–Rachford solvers, synthetic data, timing sweeps, vector file IO
//! and the `owl` command line.

pub mod bench;
pub mod commands;
pub mod dense;
mod error;
pub mod io;
pub mod rng;
pub mod solvers;
pub mod synthetic;

pub use error::{Error, Result};
pub use owl_core;

/// Caps the global rayon pool at `OWL_THREADS` when it is set.
pub fn init_thread_pool() -> Result<()> {
    let Ok(raw) = std::env::var("OWL_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw.trim().parse().ok().filter(|t| *t > 0).ok_or_else(|| {
        Error::InvalidConfig(format!(
            "OWL_THREADS must be a positive integer, got {raw:?}"
        ))
    })?;
    // A pool that is already running (tests, repeated calls) is left as is.
    let _ = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global();
    Ok(())
}
