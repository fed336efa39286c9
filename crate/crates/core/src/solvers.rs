//! End-to-end solvers.
//!
//! Both solvers run the group-constrained greedy of [`crate::smgc`] with one
//! group per event, whose elements are the event's start slots, over the
//! total agreement. [`greedy_poly_t`] finds each group's best start by trying
//! every slot; [`solve_general`] asks [`good_posn`] instead, which freezes the
//! agreement slots of the current partial schedule as rigid jobs and solves
//! the remaining one-event problem exactly, so it never walks the timeline.

use alloc::vec::Vec;
use core::cell::Cell;

use crate::error::{Error, Result};
use crate::flow::{max_agreement, total_agreement};
use crate::model::{eliminate_overlap, EventSchedule, Instance, Job, Slot};
use crate::one_event::solve_one_event;
use crate::smgc::{greedy, MarginalOracle, Memoized, SetFunction};

/// A candidate placement: `(event index, start slot)`.
pub type Element = (usize, Slot);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolveOptions {
    /// Remove overlaps between placed events at the end when the events fit
    /// side by side.
    pub shift: bool,
    /// Most placement evaluations [`greedy_poly_t`] may perform.
    pub enumeration_cap: u64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            shift: true,
            enumeration_cap: 1_000_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Round {
    pub event: usize,
    pub start: Slot,
    pub marginal: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveReport {
    pub schedule: EventSchedule,
    pub total: i64,
    pub rounds: Vec<Round>,
    /// Single-agent min-cost flow computations.
    pub flow_calls: u64,
    /// Oracle proposals requested by the greedy.
    pub oracle_calls: u64,
    /// Distinct partial schedules whose total agreement was computed.
    pub objective_evaluations: u64,
    /// Start slots tried one by one.
    pub slot_evaluations: u64,
}

/// Total agreement of a selection, counting flow computations.
struct Agreement<'a> {
    instance: &'a Instance,
    flow_calls: Cell<u64>,
    failure: Cell<Option<Error>>,
}

impl<'a> Agreement<'a> {
    fn new(instance: &'a Instance) -> Self {
        Agreement {
            instance,
            flow_calls: Cell::new(0),
            failure: Cell::new(None),
        }
    }

    fn fail(&self, e: Error) -> i64 {
        let prev = self.failure.take();
        self.failure.set(prev.or(Some(e)));
        i64::MIN / 4
    }
}

impl SetFunction<Element> for Agreement<'_> {
    fn value(&self, selection: &[Element]) -> i64 {
        let schedule = match self.instance.schedule(selection) {
            Ok(s) => s,
            Err(e) => return self.fail(e),
        };
        self.flow_calls.set(self.flow_calls.get() + self.instance.agents.len() as u64);
        match total_agreement(self.instance, &schedule) {
            Ok(v) => v,
            Err(e) => self.fail(e),
        }
    }
}

struct Enumerate<'a, 'f> {
    instance: &'a Instance,
    f: &'f Memoized<Element, Agreement<'a>>,
    slot_evaluations: u64,
}

impl MarginalOracle<Element> for Enumerate<'_, '_> {
    fn group_count(&self) -> usize {
        self.instance.events.len()
    }

    fn group_of(&self, element: &Element) -> Option<usize> {
        (element.0 < self.instance.events.len()).then_some(element.0)
    }

    fn propose(&mut self, selection: &[Element], group: usize) -> Result<Element> {
        let length = self.instance.events[group].length;
        let last = self.instance.last_start(length).ok_or(Error::NoValidPlacement {
            length,
            timeline: self.instance.timeline_length,
        })?;
        let mut probe = selection.to_vec();
        let mut best = (i64::MIN, 1);
        for t in 1..=last {
            self.slot_evaluations += 1;
            probe.push((group, t));
            let v = self.f.value(&probe);
            probe.pop();
            if v > best.0 {
                best = (v, t);
            }
        }
        Ok((group, best.1))
    }
}

struct GoodPosn<'a> {
    instance: &'a Instance,
    flow_calls: u64,
    /// Frozen job sets for the selection they were built from.
    frozen: Option<(Vec<Element>, Vec<Vec<Job>>)>,
}

impl MarginalOracle<Element> for GoodPosn<'_> {
    fn group_count(&self) -> usize {
        self.instance.events.len()
    }

    fn group_of(&self, element: &Element) -> Option<usize> {
        (element.0 < self.instance.events.len()).then_some(element.0)
    }

    fn propose(&mut self, selection: &[Element], group: usize) -> Result<Element> {
        if self.frozen.as_ref().map_or(true, |(s, _)| s != selection) {
            let partial = self.instance.schedule(selection)?;
            let jobs = frozen_job_sets(self.instance, &partial)?;
            self.flow_calls += self.instance.agents.len() as u64;
            self.frozen = Some((selection.to_vec(), jobs));
        }
        let (_, jobs) = self.frozen.as_ref().expect("built above");
        let start = best_start(jobs, self.instance.events[group].length, self.instance.timeline_length)?;
        Ok((group, start))
    }
}

/// Every agent's jobs plus one rigid job per agreement run of an optimal job
/// schedule under `partial`.
fn frozen_job_sets(instance: &Instance, partial: &EventSchedule) -> Result<Vec<Vec<Job>>> {
    instance
        .agents
        .iter()
        .map(|agent| {
            let result = max_agreement(agent, partial, instance.timeline_length)?;
            let mut jobs = agent.jobs.clone();
            jobs.extend(result.agreement_runs().into_iter().map(|r| Job::rigid(r.run)));
            Ok(jobs)
        })
        .collect()
}

fn best_start(job_sets: &[Vec<Job>], length: i64, timeline_length: Slot) -> Result<Slot> {
    Ok(solve_one_event(job_sets.iter().map(Vec::as_slice), length, timeline_length)?.start)
}

/// A start for `event` maximizing the total agreement gained on top of
/// `partial`; ties go to the smallest start.
pub fn good_posn(instance: &Instance, partial: &EventSchedule, event: usize) -> Result<Slot> {
    let length = instance.events.get(event).ok_or(Error::UnknownEvent { event })?.length;
    if partial.get(event).is_some() {
        return Err(Error::DuplicatePlacement { event });
    }
    let jobs = frozen_job_sets(instance, partial)?;
    best_start(&jobs, length, instance.timeline_length)
}

/// The greedy that tries every start slot of every unplaced event in every
/// round. Refuses timelines whose enumeration exceeds the cap.
pub fn greedy_poly_t(instance: &Instance, options: &SolveOptions) -> Result<SolveReport> {
    check_events_fit(instance)?;
    let required = enumeration_bound(instance);
    if required > options.enumeration_cap as u128 {
        return Err(Error::TimelineTooLarge {
            required,
            cap: options.enumeration_cap,
        });
    }
    let f = Memoized::new(Agreement::new(instance));
    let mut oracle = Enumerate {
        instance,
        f: &f,
        slot_evaluations: 0,
    };
    let outcome = greedy(&f, &mut oracle, instance.events.len())?;
    let slot_evaluations = oracle.slot_evaluations;
    finish(instance, options, &f, outcome, 0, slot_evaluations)
}

/// The general framework: placements come from [`good_posn`], so the running
/// time depends on the number of jobs and events, not on the timeline length.
pub fn solve_general(instance: &Instance, options: &SolveOptions) -> Result<SolveReport> {
    check_events_fit(instance)?;
    let f = Memoized::new(Agreement::new(instance));
    let mut oracle = GoodPosn {
        instance,
        flow_calls: 0,
        frozen: None,
    };
    let outcome = greedy(&f, &mut oracle, instance.events.len())?;
    let extra_flows = oracle.flow_calls;
    finish(instance, options, &f, outcome, extra_flows, 0)
}

fn check_events_fit(instance: &Instance) -> Result<()> {
    for e in &instance.events {
        instance.last_start(e.length).ok_or(Error::NoValidPlacement {
            length: e.length,
            timeline: instance.timeline_length,
        })?;
    }
    Ok(())
}

/// Placement evaluations of the enumeration greedy in the worst removal order:
/// events with few starts leave first, so the `i`-th largest start count is
/// paid in `i + 1` rounds.
fn enumeration_bound(instance: &Instance) -> u128 {
    let mut starts: Vec<u128> = instance
        .events
        .iter()
        .map(|e| (instance.timeline_length - e.length + 1) as u128)
        .collect();
    starts.sort_unstable_by(|a, b| b.cmp(a));
    starts.iter().enumerate().map(|(i, &s)| s * (i as u128 + 1)).sum()
}

fn finish(
    instance: &Instance,
    options: &SolveOptions,
    f: &Memoized<Element, Agreement<'_>>,
    outcome: crate::smgc::GreedyOutcome<Element>,
    extra_flows: u64,
    slot_evaluations: u64,
) -> Result<SolveReport> {
    if let Some(e) = f.inner().failure.take() {
        return Err(e);
    }
    let mut schedule = instance.schedule(&outcome.selection)?;
    if options.shift && instance.total_event_length() <= instance.timeline_length as i128 {
        schedule = eliminate_overlap(instance, &schedule)?;
    }
    let total = total_agreement(instance, &schedule)?;
    let rounds = outcome
        .rounds
        .iter()
        .map(|r| Round {
            event: r.element.0,
            start: r.element.1,
            marginal: r.marginal,
        })
        .collect();
    Ok(SolveReport {
        schedule,
        total,
        rounds,
        flow_calls: f.inner().flow_calls.get() + extra_flows + instance.agents.len() as u64,
        oracle_calls: outcome.oracle_calls,
        objective_evaluations: f.evaluations(),
        slot_evaluations,
    })
}
