//! The scheduling matroid of a job set.
//!
//! Ground set: the time slots. A slot set `I` is independent when the jobs
//! still fit into the remaining slots `T \ I`. Every job is split into unit
//! jobs over its interval and fitting becomes a bipartite matching of unit
//! jobs into free slots. This module materializes slots and is meant for
//! small instances only.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::model::{merge_ranges, Job, Slot, SlotRange};

/// Largest total processing time accepted by [`SchedulingMatroid::new`].
pub const MAX_UNITS: u64 = 64;
/// Largest number of materialized slots.
pub const MAX_SLOTS: u64 = 4096;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchedulingMatroid {
    unit_jobs: Vec<SlotRange>,
    ground_set_length: Slot,
    /// Slots inside some job interval, ascending.
    reachable: Vec<Slot>,
}

impl SchedulingMatroid {
    /// Fails with [`Error::InfeasibleJobSet`] when the empty set is not
    /// independent, since the structure is then not a matroid.
    pub fn new(jobs: &[Job], ground_set_length: Slot) -> Result<Self> {
        let units: u128 = jobs.iter().map(|j| j.processing.max(0) as u128).sum();
        if units > MAX_UNITS as u128 {
            return Err(Error::MatroidTooLarge {
                required: units,
                cap: MAX_UNITS,
            });
        }
        let whole = SlotRange::new(1, ground_set_length);
        let intervals = merge_ranges(jobs.iter().map(|j| j.interval().intersect(&whole)).collect());
        let slots: u128 = intervals.iter().map(|r| r.len() as u128).sum();
        if slots > MAX_SLOTS as u128 {
            return Err(Error::MatroidTooLarge {
                required: slots,
                cap: MAX_SLOTS,
            });
        }
        let reachable = intervals.iter().flat_map(|r| r.lo..=r.hi).collect();
        let unit_jobs = jobs
            .iter()
            .flat_map(|j| core::iter::repeat(j.interval()).take(j.processing.max(0) as usize))
            .collect();
        let m = SchedulingMatroid {
            unit_jobs,
            ground_set_length,
            reachable,
        };
        if !m.is_independent(&BTreeSet::new()) {
            return Err(Error::InfeasibleJobSet);
        }
        Ok(m)
    }

    pub fn ground_set_length(&self) -> Slot {
        self.ground_set_length
    }

    pub fn unit_jobs(&self) -> &[SlotRange] {
        &self.unit_jobs
    }

    pub fn is_independent(&self, slots: &BTreeSet<Slot>) -> bool {
        self.matching_avoiding(slots) == self.unit_jobs.len()
    }

    /// Size of a largest independent subset of `slots`: every slot of the set
    /// counts except those the jobs cannot avoid.
    pub fn rank(&self, slots: &BTreeSet<Slot>) -> usize {
        let forced = self.unit_jobs.len() - self.matching_avoiding(slots);
        slots.len() - forced
    }

    /// Some `x` in `larger \ smaller` keeping `smaller + x` independent.
    pub fn exchange_witness(&self, smaller: &BTreeSet<Slot>, larger: &BTreeSet<Slot>) -> Result<Slot> {
        let mut probe = smaller.clone();
        for &x in larger.difference(smaller) {
            probe.insert(x);
            if self.is_independent(&probe) {
                return Ok(x);
            }
            probe.remove(&x);
        }
        Err(Error::NoWitness)
    }

    /// A maximum independent subset of `slots`, grown greedily in ascending order.
    pub fn max_independent_subset(&self, slots: &BTreeSet<Slot>) -> BTreeSet<Slot> {
        let mut out = BTreeSet::new();
        for &x in slots {
            out.insert(x);
            if !self.is_independent(&out) {
                out.remove(&x);
            }
        }
        out
    }

    /// The matroid obtained by occupying every slot of `frozen` with a rigid
    /// unit job. Requires `frozen` to be independent.
    pub fn freeze(&self, frozen: &BTreeSet<Slot>) -> Result<Self> {
        let jobs: Vec<Job> = self
            .unit_jobs
            .iter()
            .map(|r| Job::new(r.lo, r.hi, 1))
            .chain(frozen.iter().map(|&t| Job::new(t, t, 1)))
            .collect();
        SchedulingMatroid::new(&jobs, self.ground_set_length)
    }

    /// Maximum number of unit jobs matched into reachable slots outside `blocked`.
    fn matching_avoiding(&self, blocked: &BTreeSet<Slot>) -> usize {
        let free: Vec<bool> = self.reachable.iter().map(|t| !blocked.contains(t)).collect();
        let mut owner: Vec<Option<usize>> = vec![None; self.reachable.len()];
        let mut matched = 0;
        for u in 0..self.unit_jobs.len() {
            let mut seen = vec![false; self.reachable.len()];
            if self.augment(u, &free, &mut owner, &mut seen) {
                matched += 1;
            }
        }
        matched
    }

    fn augment(&self, u: usize, free: &[bool], owner: &mut [Option<usize>], seen: &mut [bool]) -> bool {
        let iv = self.unit_jobs[u];
        let first = self.reachable.partition_point(|&t| t < iv.lo);
        for k in first..self.reachable.len() {
            if self.reachable[k] > iv.hi {
                break;
            }
            if !free[k] || seen[k] {
                continue;
            }
            seen[k] = true;
            let take = match owner[k] {
                None => true,
                Some(v) => self.augment(v, free, owner, seen),
            };
            if take {
                owner[k] = Some(u);
                return true;
            }
        }
        false
    }
}

/// All slots covered by `ranges`.
pub fn slots_of(ranges: &[SlotRange]) -> BTreeSet<Slot> {
    ranges.iter().flat_map(|r| r.lo..=r.hi).collect()
}
