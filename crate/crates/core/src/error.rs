use core::fmt;

/// Everything that can go wrong in this crate.
///
/// Index fields are zero-based positions into the offending sequence.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A sequence that must be nonempty was empty.
    Empty,
    /// Weights increase between `index` and `index + 1`.
    NotSorted { index: usize },
    /// A weight at `index` is negative.
    Negative { index: usize },
    /// Every weight is zero.
    AllZero,
    /// A value at `index` is NaN or infinite.
    NonFinite { index: usize },
    /// Two sequences that must have equal length do not.
    DimensionMismatch { expected: usize, found: usize },
    /// A radius (ball radius, simplex mass, prox parameter) is not a
    /// positive finite number.
    InvalidRadius,
    /// OSCAR parameters are negative, non-finite, or both zero, or `n = 0`.
    InvalidOscarParams,
    /// A vector expected to be nonincreasing and nonnegative is not;
    /// `index` is the first offending position.
    NotMonotone { index: usize },
    /// The reduced instance already satisfies `⟨z, w⟩ ≤ ε`; its projection
    /// is `z` itself.
    AlreadyFeasible,
    /// A list of intervals does not tile `0..n`.
    InvalidPartition,
    /// Two partitions are over index sets of different sizes.
    SizeMismatch { left: usize, right: usize },
    /// A suffix cut does not start at the first index of a group.
    InvalidCut { index: usize },
    /// A merge step found nothing to merge. Only reachable through
    /// floating-point breakdown inside the projection loop.
    NoMergeOccurred,
    /// No branch of the case analysis applied. Carries the loop state.
    BranchExhaustion {
        iteration: usize,
        groups: usize,
        ratio: f64,
        lambda0: f64,
        lambda1: f64,
    },
    /// The brute-force oracle found no candidate satisfying the optimality
    /// conditions; `best_residual` is the smallest residual seen.
    NoKktPoint { best_residual: f64 },
    /// The enumeration oracle was asked for an instance that is too large.
    TooLarge { n: usize, max: usize },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Empty => write!(f, "sequence is empty"),
            Error::NotSorted { index } => write!(
                f,
                "weights are not nonincreasing: entry {} is smaller than entry {}",
                index,
                index + 1
            ),
            Error::Negative { index } => write!(f, "weight {} is negative", index),
            Error::AllZero => write!(f, "weights are all zero"),
            Error::NonFinite { index } => write!(f, "entry {} is not finite", index),
            Error::DimensionMismatch { expected, found } => {
                write!(
                    f,
                    "dimension mismatch: expected {}, found {}",
                    expected, found
                )
            }
            Error::InvalidRadius => write!(f, "radius must be positive and finite"),
            Error::InvalidOscarParams => write!(
                f,
                "OSCAR parameters must be nonnegative, finite, not both zero, with n >= 1"
            ),
            Error::NotMonotone { index } => write!(
                f,
                "vector is not nonincreasing and nonnegative at entry {}",
                index
            ),
            Error::AlreadyFeasible => write!(f, "instance already lies inside the ball"),
            Error::InvalidPartition => write!(f, "intervals do not tile the index range"),
            Error::SizeMismatch { left, right } => {
                write!(f, "partitions cover {} and {} indices", left, right)
            }
            Error::InvalidCut { index } => {
                write!(f, "index {} is not the first index of a group", index)
            }
            Error::NoMergeOccurred => write!(f, "merge step did not merge any groups"),
            Error::BranchExhaustion {
                iteration,
                groups,
                ratio,
                lambda0,
                lambda1,
            } => write!(
                f,
                "no branch applied at iteration {} (groups={}, r={:e}, lambda0={:e}, lambda1={:e})",
                iteration, groups, ratio, lambda0, lambda1
            ),
            Error::NoKktPoint { best_residual } => write!(
                f,
                "no candidate satisfies the optimality conditions (best residual {:e})",
                best_residual
            ),
            Error::TooLarge { n, max } => {
                write!(f, "instance of size {} exceeds the limit of {}", n, max)
            }
        }
    }
}

impl core::error::Error for Error {}
