//! Group container driving the projection loop.
//!
//! A [`GroupPartition`] holds one [`GroupRecord`] per group of an interval
//! partition of `0..n`, together with the running aggregates
//! `I = ⟨z_G, w_G⟩` and `N = ‖w_G‖²` of the group-averaged working vectors.
//! Records are reachable through two views that share record identity:
//!
//! * by first index: records live in a slab slot equal to their
//!   `min_index`, linked to their neighbours, so neighbour navigation and
//!   lookup by first index are `O(1)`;
//! * by boundary ratio: a `BTreeSet` keyed by `(ratio, min_index)`, giving
//!   the minimum ratio in `O(log g)`.
//!
//! Merging only ever joins a group with its right neighbour, and the merged
//! group keeps the left slot, so slot ids stay valid keys in both views.
//! After construction, group membership changes only through explicit
//! merges; coordinate values are never compared to regroup.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::partition::IntervalPartition;
use crate::{Error, Result};

const NIL: usize = usize::MAX;

/// Total order over `f64` for use as a set key.
#[derive(Debug, Clone, Copy)]
struct Key(f64);

impl PartialEq for Key {
    fn eq(&self, other: &Self) -> bool {
        self.0.total_cmp(&other.0) == Ordering::Equal
    }
}
impl Eq for Key {}
impl PartialOrd for Key {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Key {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

/// One group: its boundary ratio, index range and coordinate sums.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupRecord {
    /// `(z̄_G − z̄_next) / (w̄_G − w̄_next)` for the group to the right, or
    /// `+∞` for the last group and whenever the weight means coincide.
    pub boundary_ratio: f64,
    pub min_index: usize,
    /// Inclusive.
    pub max_index: usize,
    pub sum_z: f64,
    pub sum_w: f64,
    prev: usize,
    next: usize,
    alive: bool,
}

impl GroupRecord {
    pub fn len(&self) -> usize {
        self.max_index + 1 - self.min_index
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn mean_z(&self) -> f64 {
        self.sum_z / self.len() as f64
    }

    pub fn mean_w(&self) -> f64 {
        self.sum_w / self.len() as f64
    }

    /// This group's share of `⟨z_G, w_G⟩`.
    fn inner(&self) -> f64 {
        self.sum_z * self.sum_w / self.len() as f64
    }

    /// This group's share of `‖w_G‖²`.
    fn weight_sq(&self) -> f64 {
        self.sum_w * self.sum_w / self.len() as f64
    }
}

/// Difference quotient of group means, with `0/0 = ∞`.
///
/// Weight means are nonincreasing across groups, so a nonpositive
/// denominator only occurs when two neighbours share the same mean weight.
fn ratio(left: &GroupRecord, right: &GroupRecord) -> f64 {
    let dw = left.mean_w() - right.mean_w();
    if dw > 0.0 {
        (left.mean_z() - right.mean_z()) / dw
    } else {
        f64::INFINITY
    }
}

#[derive(Debug, Clone)]
pub struct GroupPartition {
    slots: Vec<GroupRecord>,
    by_ratio: BTreeSet<(Key, usize)>,
    inner: f64,
    weight_norm_sq: f64,
    groups: usize,
    tail: usize,
}

impl GroupPartition {
    /// Groups `z` into maximal runs of equal values and averages `w` over
    /// them.
    ///
    /// `z` must be nonincreasing and nonnegative. `w` may be raw or already
    /// averaged; only its group sums are kept.
    pub fn build(z: &[f64], w: &[f64]) -> Result<Self> {
        if z.len() != w.len() {
            return Err(Error::DimensionMismatch {
                expected: w.len(),
                found: z.len(),
            });
        }
        if z.is_empty() {
            return Err(Error::Empty);
        }
        if let Some(index) = z.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        if let Some(i) = z.windows(2).position(|p| p[0] < p[1]) {
            return Err(Error::NotMonotone { index: i + 1 });
        }
        if z[z.len() - 1] < 0.0 {
            return Err(Error::NotMonotone { index: z.len() - 1 });
        }
        let part = IntervalPartition::of_vector(z);
        Ok(Self::from_partition(z, w, &part))
    }

    /// Sums `z` and `w` over the given groups. No ordering checks.
    pub(crate) fn from_partition(z: &[f64], w: &[f64], part: &IntervalPartition) -> Self {
        let n = z.len();
        let empty = GroupRecord {
            boundary_ratio: f64::INFINITY,
            min_index: 0,
            max_index: 0,
            sum_z: 0.0,
            sum_w: 0.0,
            prev: NIL,
            next: NIL,
            alive: false,
        };
        let mut slots = alloc::vec![empty; n];
        let mut prev = NIL;
        for g in part.groups() {
            let s = g.start;
            slots[s] = GroupRecord {
                boundary_ratio: f64::INFINITY,
                min_index: s,
                max_index: g.end - 1,
                sum_z: z[g.clone()].iter().sum(),
                sum_w: w[g].iter().sum(),
                prev,
                next: NIL,
                alive: true,
            };
            if prev != NIL {
                slots[prev].next = s;
            }
            prev = s;
        }
        let tail = prev;

        let mut keys = Vec::with_capacity(part.len());
        let (mut inner, mut weight_norm_sq) = (0.0, 0.0);
        let mut at = 0;
        while at != NIL {
            let next = slots[at].next;
            if next != NIL {
                slots[at].boundary_ratio = ratio(&slots[at], &slots[next]);
            }
            inner += slots[at].inner();
            weight_norm_sq += slots[at].weight_sq();
            keys.push((Key(slots[at].boundary_ratio), at));
            at = next;
        }
        GroupPartition {
            slots,
            by_ratio: keys.into_iter().collect(),
            inner,
            weight_norm_sq,
            groups: part.len(),
            tail,
        }
    }

    /// Total number of indices.
    pub fn n(&self) -> usize {
        self.slots.len()
    }

    pub fn group_count(&self) -> usize {
        self.groups
    }

    /// Maintained `⟨z_G, w_G⟩`.
    pub fn inner_product(&self) -> f64 {
        self.inner
    }

    /// Maintained `‖w_G‖²`.
    pub fn weight_norm_sq(&self) -> f64 {
        self.weight_norm_sq
    }

    pub fn first(&self) -> &GroupRecord {
        &self.slots[0]
    }

    pub fn last(&self) -> &GroupRecord {
        &self.slots[self.tail]
    }

    /// The group whose first index is `min_index`, if any.
    pub fn group_at(&self, min_index: usize) -> Option<&GroupRecord> {
        self.slots
            .get(min_index)
            .filter(|r| r.alive && r.min_index == min_index)
    }

    pub fn next_of(&self, rec: &GroupRecord) -> Option<&GroupRecord> {
        (rec.next != NIL).then(|| &self.slots[rec.next])
    }

    pub fn prev_of(&self, rec: &GroupRecord) -> Option<&GroupRecord> {
        (rec.prev != NIL).then(|| &self.slots[rec.prev])
    }

    /// Records in index order.
    pub fn records(&self) -> impl Iterator<Item = &GroupRecord> + '_ {
        let mut at = 0;
        core::iter::from_fn(move || {
            if at == NIL {
                return None;
            }
            let rec = &self.slots[at];
            at = rec.next;
            Some(rec)
        })
    }

    /// Smallest boundary ratio and the `min_index` of the group owning it.
    /// `+∞` when there is a single group.
    pub fn min_ratio(&self) -> (f64, usize) {
        let (Key(r), id) = *self.by_ratio.first().expect("partition is never empty");
        (r, id)
    }

    /// Coalesces every boundary whose stored ratio is `≤ lambda`.
    ///
    /// Runs of consecutive qualifying boundaries collapse into one group.
    /// Ratios are the ones stored before the call: boundaries created by the
    /// merges themselves are not re-examined, so the result is the grouping
    /// of `z − λw` taken over the current groups. Returns the number of
    /// boundaries removed; `O(k log g)` for `k` of them.
    pub fn merge_below_lambda(&mut self, lambda: f64) -> Result<usize> {
        let mut cut = Vec::new();
        while let Some(&(Key(r), id)) = self.by_ratio.first() {
            if r <= lambda && r != f64::INFINITY {
                self.by_ratio.pop_first();
                cut.push(id);
            } else {
                break;
            }
        }
        if cut.is_empty() {
            return Err(Error::NoMergeOccurred);
        }
        // Right to left, so each absorbed neighbour is already a full run.
        cut.sort_unstable_by(|a, b| b.cmp(a));
        for &id in &cut {
            let next = self.slots[id].next;
            self.absorb_next(id, next);
        }
        for &id in &cut {
            if self.slots[id].alive {
                self.refresh_ratio(id);
                let prev = self.slots[id].prev;
                if prev != NIL {
                    self.refresh_ratio(prev);
                }
            }
        }
        Ok(cut.len())
    }

    /// Merges every group starting at or after `cut` into one.
    ///
    /// `cut` must be the first index of a group other than the last one.
    pub fn merge_suffix(&mut self, cut: usize) -> Result<usize> {
        if self.group_at(cut).is_none() {
            return Err(Error::InvalidCut { index: cut });
        }
        if cut == self.tail {
            return Err(Error::NoMergeOccurred);
        }
        let mut merged = 0;
        while self.slots[cut].next != NIL {
            let next = self.slots[cut].next;
            self.absorb_next(cut, next);
            merged += 1;
        }
        self.refresh_ratio(cut);
        let prev = self.slots[cut].prev;
        if prev != NIL {
            self.refresh_ratio(prev);
        }
        Ok(merged)
    }

    /// Folds `next` into `id` and drops `next` from the ratio view. Leaves
    /// `id`'s ratio stale; callers refresh it.
    fn absorb_next(&mut self, id: usize, next: usize) {
        debug_assert!(next != NIL && self.slots[id].next == next);
        let right = self.slots[next].clone();
        self.by_ratio.remove(&(Key(right.boundary_ratio), next));
        self.slots[next].alive = false;

        let left = &self.slots[id];
        self.inner -= left.inner() + right.inner();
        self.weight_norm_sq -= left.weight_sq() + right.weight_sq();

        let left = &mut self.slots[id];
        left.max_index = right.max_index;
        left.sum_z += right.sum_z;
        left.sum_w += right.sum_w;
        left.next = right.next;
        self.inner += left.inner();
        self.weight_norm_sq += left.weight_sq();

        if right.next != NIL {
            self.slots[right.next].prev = id;
        } else {
            self.tail = id;
        }
        self.groups -= 1;
    }

    /// Recomputes `id`'s ratio against its current right neighbour and
    /// re-keys it in the ratio view.
    fn refresh_ratio(&mut self, id: usize) {
        let old = self.slots[id].boundary_ratio;
        self.by_ratio.remove(&(Key(old), id));
        let next = self.slots[id].next;
        let r = if next == NIL {
            f64::INFINITY
        } else {
            ratio(&self.slots[id], &self.slots[next])
        };
        self.slots[id].boundary_ratio = r;
        self.by_ratio.insert((Key(r), id));
    }

    /// The current grouping as an [`IntervalPartition`].
    pub fn partition(&self) -> IntervalPartition {
        let sizes: Vec<usize> = self.records().map(GroupRecord::len).collect();
        IntervalPartition::from_sizes(&sizes).expect("records tile 0..n")
    }

    /// Expands the group means into full-length `(z_G, w_G)`.
    pub fn expand(&self) -> (Vec<f64>, Vec<f64>) {
        let mut z = Vec::with_capacity(self.n());
        let mut w = Vec::with_capacity(self.n());
        for rec in self.records() {
            z.extend(core::iter::repeat_n(rec.mean_z(), rec.len()));
            w.extend(core::iter::repeat_n(rec.mean_w(), rec.len()));
        }
        (z, w)
    }

    /// Writes `f(record)` into every index of each group.
    pub fn expand_with(&self, mut f: impl FnMut(&GroupRecord) -> f64) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.n());
        for rec in self.records() {
            let v = f(rec);
            out.extend(core::iter::repeat_n(v, rec.len()));
        }
        out
    }

    /// `(⟨z_G, w_G⟩, ‖w_G‖²)` recomputed from the group sums.
    pub fn recompute_aggregates(&self) -> (f64, f64) {
        self.records()
            .fold((0.0, 0.0), |(i, n), r| (i + r.inner(), n + r.weight_sq()))
    }

    /// Number of entries in the ratio view; equals `group_count` when the
    /// container is consistent.
    pub fn ratio_view_len(&self) -> usize {
        self.by_ratio.len()
    }

    /// Stored ratio of each group next to the ratio recomputed from the
    /// current sums.
    pub fn ratio_pairs(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.records().map(move |r| {
            let fresh = self.next_of(r).map_or(f64::INFINITY, |nx| ratio(r, nx));
            (r.boundary_ratio, fresh)
        })
    }
}
