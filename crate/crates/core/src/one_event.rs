//! Exact placement of a single event.
//!
//! For one agent the best agreement as a function of the event start is
//! piecewise linear. The earliest-deadline-first schedule cuts the timeline
//! into segments each run by one job (or idle). While the start moves inside
//! such a segment, the bidirectional EDF schedule changes only the pivot job
//! running there, so every other job can be frozen into rigid blocks and the
//! agreement has a closed form in overlap functions. Gluing the per-segment
//! pieces gives the whole curve; summing curves over agents and scanning the
//! breakpoints gives the optimal start.

use alloc::vec::Vec;

use crate::edf::{self, Run, SweepJob};
use crate::error::{Error, Result};
use crate::model::{merge_ranges, subtract_ranges, Agent, Instance, Job, JobRun, JobSchedule, Slot, SlotRange};
use crate::pwl::{overlap_ramps, PiecewiseLinearFn};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EdfSegment {
    pub range: SlotRange,
    /// Job run by the EDF schedule throughout the segment, `None` when idle.
    pub job: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdfPartition {
    /// Jobs by ascending deadline, ties by index.
    pub order: Vec<usize>,
    pub segments: Vec<EdfSegment>,
}

pub fn edf_order(jobs: &[Job]) -> Vec<usize> {
    edf::deadline_order(jobs)
}

pub fn reverse_release_order(jobs: &[Job]) -> Vec<usize> {
    edf::reverse_release_order(jobs)
}

fn to_runs(runs: Vec<Run>) -> impl Iterator<Item = JobRun> {
    runs.into_iter().map(|r| JobRun {
        job: r.job,
        range: SlotRange::new(r.lo as Slot, r.hi as Slot),
    })
}

pub fn edf_partition(jobs: &[Job], timeline_length: Slot) -> Result<EdfPartition> {
    let order = edf_order(jobs);
    let rank = edf::ranks(&order, jobs.len());
    let mut sweep: Vec<SweepJob> = jobs.iter().map(SweepJob::from_job).collect();
    let runs = edf::forward(&mut sweep, &rank, 1, timeline_length as i128)?;
    if sweep.iter().any(|j| j.remaining > 0) {
        return Err(Error::InfeasibleJobSet);
    }
    let mut segments = Vec::with_capacity(2 * runs.len() + 1);
    let mut cur: Slot = 1;
    for run in to_runs(runs) {
        if run.range.lo > cur {
            segments.push(EdfSegment {
                range: SlotRange::new(cur, run.range.lo - 1),
                job: None,
            });
        }
        segments.push(EdfSegment {
            range: run.range,
            job: Some(run.job),
        });
        cur = run.range.hi.saturating_add(1);
    }
    if cur <= timeline_length && segments.last().is_none_or(|s| s.range.hi < timeline_length) {
        segments.push(EdfSegment {
            range: SlotRange::new(cur, timeline_length),
            job: None,
        });
    }
    Ok(EdfPartition { order, segments })
}

/// Optimal job schedule for an event starting at `event_start`: forward EDF
/// by `pi` over the slots before the start, then a backward sweep from the
/// timeline end down to the start by `pi_bar` with `pivot` demoted to the
/// lowest priority. `pi` must list jobs by ascending deadline and `pi_bar` by
/// descending release.
pub fn bi_edf_schedule(
    event_start: Slot,
    jobs: &[Job],
    timeline_length: Slot,
    pi: &[usize],
    pi_bar: &[usize],
    pivot: Option<usize>,
) -> Result<JobSchedule> {
    if let Some(p) = pivot {
        if !jobs[p].interval().contains(event_start) {
            return Err(Error::InvalidPivot { job: p, slot: event_start });
        }
    }
    let mut sweep: Vec<SweepJob> = jobs.iter().map(SweepJob::from_job).collect();
    let start = event_start as i128;

    let forward_rank = edf::ranks(pi, jobs.len());
    let mut runs = edf::forward(&mut sweep, &forward_rank, 1, start - 1)?;

    let mut backward_order: Vec<usize> = pi_bar.iter().copied().filter(|&j| Some(j) != pivot).collect();
    backward_order.extend(pivot);
    let backward_rank = edf::ranks(&backward_order, jobs.len());
    runs.extend(edf::backward(&mut sweep, &backward_rank, start, timeline_length as i128)?);

    if sweep.iter().any(|j| j.remaining > 0) {
        return Err(Error::InfeasibleJobSet);
    }
    Ok(JobSchedule::from_runs(to_runs(runs).collect()))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlexibleJob {
    /// Pairwise disjoint, sorted.
    pub intervals: Vec<SlotRange>,
    pub processing: i64,
}

/// One agent, one event, one flexible multi-interval job and rigid blocks,
/// with all intervals pairwise disjoint. `window` is the range of event starts
/// the instance stands for.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoreInstance {
    pub event_length: i64,
    pub flexible: Option<FlexibleJob>,
    pub rigid: Vec<SlotRange>,
    pub window: SlotRange,
}

impl CoreInstance {
    /// Freezes every job except `pivot` at its slots in `schedule`; the pivot
    /// keeps its interval minus the frozen slots.
    pub fn from_schedule(
        jobs: &[Job],
        schedule: &JobSchedule,
        pivot: Option<usize>,
        event_length: i64,
        window: SlotRange,
    ) -> Self {
        let rigid = merge_ranges(
            schedule
                .runs()
                .iter()
                .filter(|r| Some(r.job) != pivot)
                .map(|r| r.range)
                .collect(),
        );
        let flexible = pivot.map(|p| FlexibleJob {
            intervals: subtract_ranges(jobs[p].interval(), &rigid),
            processing: jobs[p].processing,
        });
        CoreInstance {
            event_length,
            flexible,
            rigid,
            window,
        }
    }

    pub fn is_valid(&self) -> bool {
        let mut all: Vec<SlotRange> = self.rigid.clone();
        if let Some(f) = &self.flexible {
            let room: i64 = f.intervals.iter().map(SlotRange::len).sum();
            if f.processing > room {
                return false;
            }
            all.extend(f.intervals.iter().copied());
        }
        all.sort();
        all.windows(2).all(|w| w[0].hi < w[1].lo)
    }
}

/// `l - sum over rigid blocks of overlap - max(p - (room - overlap with flexible intervals), 0)`
/// on the core instance's window.
pub fn core_agreement_fn(core: &CoreInstance) -> PiecewiseLinearFn {
    let l = core.event_length;
    let rigid_ramps: Vec<(i128, i64)> = core.rigid.iter().flat_map(|r| overlap_ramps(*r, l)).collect();
    let busy = PiecewiseLinearFn::from_ramps(core.window, 0, &rigid_ramps);
    let free = busy.map_linear(-1, l);
    let Some(flex) = &core.flexible else {
        return free;
    };
    let room: i64 = flex.intervals.iter().map(SlotRange::len).sum();
    let flex_ramps: Vec<(i128, i64)> = flex.intervals.iter().flat_map(|r| overlap_ramps(*r, l)).collect();
    let forced = PiecewiseLinearFn::from_ramps(core.window, flex.processing - room, &flex_ramps).clamp_nonnegative();
    free.sub(&forced).expect("same window")
}

/// The agent's best agreement for every start in `[1, timeline_length - event_length + 1]`.
pub fn agent_agreement_curve(agent: &Agent, event_length: i64, timeline_length: Slot) -> Result<PiecewiseLinearFn> {
    jobs_agreement_curve(&agent.jobs, event_length, timeline_length)
}

pub fn jobs_agreement_curve(jobs: &[Job], event_length: i64, timeline_length: Slot) -> Result<PiecewiseLinearFn> {
    let domain = placement_domain(event_length, timeline_length)?;
    let partition = edf_partition(jobs, timeline_length)?;
    let pi_bar = reverse_release_order(jobs);
    let mut pieces = Vec::with_capacity(partition.segments.len());
    for seg in &partition.segments {
        if seg.range.lo > domain.hi {
            break;
        }
        let window = seg.range.intersect(&domain);
        let schedule = bi_edf_schedule(window.lo, jobs, timeline_length, &partition.order, &pi_bar, seg.job)?;
        let core = CoreInstance::from_schedule(jobs, &schedule, seg.job, event_length, window);
        debug_assert!(core.is_valid());
        pieces.push(core_agreement_fn(&core));
    }
    Ok(PiecewiseLinearFn::glue(pieces).expect("domain is nonempty"))
}

fn placement_domain(event_length: i64, timeline_length: Slot) -> Result<SlotRange> {
    if event_length < 1 || event_length > timeline_length {
        return Err(Error::NoValidPlacement {
            length: event_length,
            timeline: timeline_length,
        });
    }
    Ok(SlotRange::new(1, timeline_length - event_length + 1))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OneEventSolution {
    pub start: Slot,
    pub value: i64,
    /// Sum of all agents' curves.
    pub curve: PiecewiseLinearFn,
}

/// Optimal start for the only event of `instance`; ties go to the smallest start.
pub fn best_placement(instance: &Instance) -> Result<(Slot, i64)> {
    if instance.events.len() != 1 {
        return Err(Error::OneEventRequired {
            events: instance.events.len(),
        });
    }
    let sol = solve_one_event(
        instance.agents.iter().map(|a| a.jobs.as_slice()),
        instance.events[0].length,
        instance.timeline_length,
    )?;
    Ok((sol.start, sol.value))
}

/// Sums the agreement curves of the given job sets and maximizes over the
/// breakpoints of the sum, which include the domain endpoints.
pub fn solve_one_event<'a>(
    job_sets: impl IntoIterator<Item = &'a [Job]>,
    event_length: i64,
    timeline_length: Slot,
) -> Result<OneEventSolution> {
    let domain = placement_domain(event_length, timeline_length)?;
    let mut curve = PiecewiseLinearFn::constant(domain, 0);
    for jobs in job_sets {
        let c = jobs_agreement_curve(jobs, event_length, timeline_length)?;
        curve = curve.add(&c).expect("curves share the placement domain");
    }
    let (start, value) = curve.argmax();
    Ok(OneEventSolution { start, value, curve })
}
