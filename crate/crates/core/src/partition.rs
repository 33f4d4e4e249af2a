//! Partitions of `0..n` into contiguous intervals, the refinement order on
//! them, and group averaging.
//!
//! Indices are zero-based throughout.

use alloc::vec::Vec;
use core::ops::Range;

use crate::{Error, Result};

/// A partition of `0..n` into contiguous, ordered intervals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntervalPartition {
    /// First index of each group, strictly increasing, `starts[0] == 0`.
    starts: Vec<usize>,
    n: usize,
}

impl IntervalPartition {
    /// Builds a partition from half-open ranges, which must tile `0..n`
    /// in order.
    pub fn from_ranges(ranges: &[Range<usize>]) -> Result<Self> {
        let mut starts = Vec::with_capacity(ranges.len());
        let mut next = 0;
        for r in ranges {
            if r.start != next || r.end <= r.start {
                return Err(Error::InvalidPartition);
            }
            starts.push(r.start);
            next = r.end;
        }
        if starts.is_empty() {
            return Err(Error::InvalidPartition);
        }
        Ok(IntervalPartition { starts, n: next })
    }

    /// Builds a partition from group lengths.
    pub fn from_sizes(sizes: &[usize]) -> Result<Self> {
        let mut ranges = Vec::with_capacity(sizes.len());
        let mut at = 0;
        for &s in sizes {
            ranges.push(at..at + s);
            at += s;
        }
        Self::from_ranges(&ranges)
    }

    /// Bit `i` of `mask` set means a boundary between `i` and `i + 1`.
    /// Every `mask < 2^(n-1)` gives a distinct partition of `0..n`.
    pub fn from_cut_mask(n: usize, mask: u64) -> Result<Self> {
        if n == 0 || (n <= 64 && n > 1 && mask >> (n - 1) != 0) || (n == 1 && mask != 0) {
            return Err(Error::InvalidPartition);
        }
        let mut starts = alloc::vec![0];
        starts.extend((0..n - 1).filter(|&i| mask >> i & 1 == 1).map(|i| i + 1));
        Ok(IntervalPartition { starts, n })
    }

    pub fn singletons(n: usize) -> Self {
        IntervalPartition {
            starts: (0..n).collect(),
            n,
        }
    }

    pub fn whole(n: usize) -> Self {
        IntervalPartition {
            starts: alloc::vec![0],
            n,
        }
    }

    /// Maximal runs of nondecreasing components: a new group starts at
    /// `i + 1` exactly when `z[i] > z[i + 1]`.
    ///
    /// For a nonincreasing `z` these are the maximal runs of equal values.
    pub fn of_vector(z: &[f64]) -> Self {
        let mut starts = alloc::vec![0];
        starts.extend(
            (0..z.len().saturating_sub(1))
                .filter(|&i| z[i] > z[i + 1])
                .map(|i| i + 1),
        );
        IntervalPartition { starts, n: z.len() }
    }

    /// Number of indices covered.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of groups.
    pub fn len(&self) -> usize {
        self.starts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.starts.is_empty()
    }

    pub fn groups(&self) -> impl Iterator<Item = Range<usize>> + '_ {
        self.starts
            .iter()
            .zip(self.starts.iter().skip(1).chain(core::iter::once(&self.n)))
            .map(|(&a, &b)| a..b)
    }

    pub fn starts(&self) -> &[usize] {
        &self.starts
    }

    /// Whether `i` and `i + 1` belong to the same group.
    pub fn joins(&self, i: usize) -> bool {
        i + 1 < self.n && self.starts.binary_search(&(i + 1)).is_err()
    }
}

/// `a ≼ b`: every group of `a` lies inside some group of `b`.
///
/// Decided by adjacent pairs: whenever `a` keeps `i` and `i + 1` together,
/// `b` must as well. That is `O(|a| + |b|)`.
pub fn refines(a: &IntervalPartition, b: &IntervalPartition) -> Result<bool> {
    if a.n != b.n {
        return Err(Error::SizeMismatch {
            left: a.n,
            right: b.n,
        });
    }
    // every boundary of b must also be a boundary of a
    let mut ai = a.starts.iter().peekable();
    for s in &b.starts {
        while ai.next_if(|&&x| x < *s).is_some() {}
        if ai.peek() != Some(&s) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Replaces each coordinate of `z` by the mean of its group.
pub fn averaged_vector(z: &[f64], part: &IntervalPartition) -> Result<Vec<f64>> {
    if part.n != z.len() {
        return Err(Error::InvalidPartition);
    }
    let mut out = Vec::with_capacity(z.len());
    for g in part.groups() {
        let len = g.len();
        let mean = z[g].iter().sum::<f64>() / len as f64;
        out.extend(core::iter::repeat_n(mean, len));
    }
    Ok(out)
}
