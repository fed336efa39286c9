//! Event-driven preemptive priority scheduling. Time advances from one release
//! or completion to the next, never slot by slot, so the cost depends on the
//! number of jobs only.

use alloc::collections::BinaryHeap;
use alloc::vec::Vec;
use core::cmp::Reverse;

use crate::error::{Error, Result};
use crate::model::Job;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct SweepJob {
    pub release: i128,
    pub deadline: i128,
    pub remaining: i128,
}

impl SweepJob {
    pub fn from_job(job: &Job) -> Self {
        SweepJob {
            release: job.release as i128,
            deadline: job.deadline as i128,
            remaining: job.processing as i128,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Run {
    pub lo: i128,
    pub hi: i128,
    pub job: usize,
}

/// Ranks for the earliest-deadline-first order: `rank[j]` is the position of
/// job `j`, ties by index.
pub(crate) fn deadline_order(jobs: &[Job]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..jobs.len()).collect();
    order.sort_by_key(|&j| (jobs[j].deadline, j));
    order
}

/// Descending release times, ties by index.
pub(crate) fn reverse_release_order(jobs: &[Job]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..jobs.len()).collect();
    order.sort_by_key(|&j| (Reverse(jobs[j].release), j));
    order
}

pub(crate) fn ranks(order: &[usize], n: usize) -> Vec<usize> {
    let mut rank = alloc::vec![usize::MAX; n];
    for (pos, &j) in order.iter().enumerate() {
        rank[j] = pos;
    }
    rank
}

/// Non-idling preemptive schedule over `[from, to]`: at every slot the
/// available unfinished job with the smallest rank runs. Remaining work is
/// updated in place. Fails if some job with a deadline inside the window is
/// left unfinished.
pub(crate) fn forward(jobs: &mut [SweepJob], rank: &[usize], from: i128, to: i128) -> Result<Vec<Run>> {
    let eff_release = |j: &SweepJob| j.release.max(from);
    let mut pending: Vec<usize> = (0..jobs.len()).filter(|&j| jobs[j].remaining > 0).collect();
    pending.sort_by_key(|&j| (eff_release(&jobs[j]), j));

    let mut runs: Vec<Run> = Vec::new();
    let mut heap: BinaryHeap<Reverse<(usize, usize)>> = BinaryHeap::new();
    let mut next = 0;
    let mut cur = from;
    while cur <= to {
        while next < pending.len() && eff_release(&jobs[pending[next]]) <= cur {
            let j = pending[next];
            heap.push(Reverse((rank[j], j)));
            next += 1;
        }
        let Some(&Reverse((_, j))) = heap.peek() else {
            match pending.get(next) {
                Some(&j) => {
                    cur = eff_release(&jobs[j]);
                    continue;
                }
                None => break,
            }
        };
        let job = &mut jobs[j];
        if job.deadline < cur {
            return Err(Error::InfeasibleJobSet);
        }
        let mut end = to.min(cur + job.remaining - 1).min(job.deadline);
        if let Some(&k) = pending.get(next) {
            end = end.min(eff_release(&jobs[k]) - 1);
        }
        let job = &mut jobs[j];
        job.remaining -= end - cur + 1;
        if job.remaining == 0 {
            heap.pop();
        }
        match runs.last_mut() {
            Some(last) if last.job == j && last.hi + 1 == cur => last.hi = end,
            _ => runs.push(Run { lo: cur, hi: end, job: j }),
        }
        cur = end + 1;
    }
    if jobs.iter().any(|j| j.remaining > 0 && j.deadline <= to) {
        return Err(Error::InfeasibleJobSet);
    }
    Ok(runs)
}

/// Mirror image of [`forward`]: sweeps from `to` down to `from`, so the rank
/// order acts on deadlines of the reversed timeline (release times).
pub(crate) fn backward(jobs: &mut [SweepJob], rank: &[usize], from: i128, to: i128) -> Result<Vec<Run>> {
    let mut mirrored: Vec<SweepJob> = jobs
        .iter()
        .map(|j| SweepJob {
            release: -j.deadline,
            deadline: -j.release,
            remaining: j.remaining,
        })
        .collect();
    let runs = forward(&mut mirrored, rank, -to, -from)?;
    for (j, m) in jobs.iter_mut().zip(&mirrored) {
        j.remaining = m.remaining;
    }
    Ok(runs
        .into_iter()
        .rev()
        .map(|r| Run {
            lo: -r.hi,
            hi: -r.lo,
            job: r.job,
        })
        .collect())
}
