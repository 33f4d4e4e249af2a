//! Exact Euclidean projection onto the ordered weighted ℓ1 (OWL) norm ball.
//!
//! The OWL norm of `x` with nonincreasing nonnegative weights `w` is
//! `Σ w_i |x|_[i]`, where `|x|_[i]` is the i-th largest magnitude. It covers
//! ℓ1 (constant weights), ℓ∞ (`w = (1, 0, …, 0)`) and OSCAR
//! (`w_i = μ₁ + μ₂(n − i)`).
//!
//! [`project_owl_ball`] reduces the problem to the monotone cone by a sign
//! flip and a sort, then runs a finite group-merging loop over a
//! [`GroupPartition`] that terminates after at most `n` outer iterations in
//! `O(n log n)` total time.
//!
//! The crate is `no_std` and needs only `alloc`.
//!
//! ```
//! use owl_core::{project_owl_ball, OwlBall, WeightVector};
//!
//! let w = WeightVector::new(vec![5.0, 4.0, 3.0, 1.0, 1.0]).unwrap();
//! let ball = OwlBall::new(w, 1.0).unwrap();
//! let res = project_owl_ball(&[3.0, 2.0, 1.0, -1.0, 2.0], &ball).unwrap();
//! for (x, s) in res.x_star.iter().zip([1.0, 1.0, 1.0, -1.0, 1.0]) {
//!     assert!((x - s / 14.0).abs() < 1e-12);
//! }
//! ```

#![no_std]
#![warn(missing_debug_implementations)]

extern crate alloc;
#[cfg(test)]
extern crate std;

mod error;
pub mod groups;
pub mod kkt;
pub mod norm;
pub mod oracle;
pub mod partition;
pub mod projection;
pub mod simplex;

pub use error::Error;
pub use groups::{GroupPartition, GroupRecord};
pub use kkt::{kkt_certificate, KktReport};
pub use norm::{
    eval_dual_norm, eval_owl_norm, oscar_weights, validate_weights, OscarParams, OwlBall,
    WeightVector,
};
pub use partition::{averaged_vector, refines, IntervalPartition};
pub use projection::{
    project_owl_ball, project_owl_ball_observed, prox_dual_owl, solve_reduced,
    solve_reduced_observed, Branch, IterationRecord, Preprocessing, ProjectionResult,
    ReducedInstance,
};
pub use simplex::{project_simplex, SimplexProjection};

/// Shorthand for results carrying this crate's [`Error`].
pub type Result<T> = core::result::Result<T, Error>;
