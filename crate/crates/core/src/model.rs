//! Instances, event and job schedules, validation and overlap elimination.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::edf::{self, SweepJob};
use crate::error::{Error, Result};

/// A 1-based slot index; slot `t` is the unit `[t, t + 1)`.
pub type Slot = i64;

/// Inclusive run of slots `{lo, ..., hi}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SlotRange {
    pub lo: Slot,
    pub hi: Slot,
}

impl SlotRange {
    pub const fn new(lo: Slot, hi: Slot) -> Self {
        SlotRange { lo, hi }
    }

    pub fn is_empty(&self) -> bool {
        self.hi < self.lo
    }

    pub fn len(&self) -> i64 {
        if self.is_empty() {
            0
        } else {
            self.hi - self.lo + 1
        }
    }

    pub fn contains(&self, t: Slot) -> bool {
        self.lo <= t && t <= self.hi
    }

    pub fn contains_range(&self, other: &SlotRange) -> bool {
        other.is_empty() || (self.lo <= other.lo && other.hi <= self.hi)
    }

    pub fn intersect(&self, other: &SlotRange) -> SlotRange {
        SlotRange::new(self.lo.max(other.lo), self.hi.min(other.hi))
    }

    pub fn overlap_len(&self, other: &SlotRange) -> i64 {
        self.intersect(other).len()
    }
}

impl fmt::Display for SlotRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

/// Sorts and merges overlapping or touching ranges; empty ranges are dropped.
pub fn merge_ranges(mut ranges: Vec<SlotRange>) -> Vec<SlotRange> {
    ranges.retain(|r| !r.is_empty());
    ranges.sort();
    let mut out: Vec<SlotRange> = Vec::with_capacity(ranges.len());
    for r in ranges {
        match out.last_mut() {
            Some(last) if r.lo <= last.hi.saturating_add(1) => last.hi = last.hi.max(r.hi),
            _ => out.push(r),
        }
    }
    out
}

/// Total number of slots shared by two sorted, disjoint range lists.
pub fn intersection_len(a: &[SlotRange], b: &[SlotRange]) -> i64 {
    let (mut i, mut j, mut total) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        total += a[i].overlap_len(&b[j]);
        if a[i].hi < b[j].hi {
            i += 1;
        } else {
            j += 1;
        }
    }
    total
}

/// `base` minus the union of `holes`; both sorted, holes disjoint.
pub fn subtract_ranges(base: SlotRange, holes: &[SlotRange]) -> Vec<SlotRange> {
    let mut out = Vec::new();
    let mut cur = base.lo;
    for h in holes {
        if h.hi < cur || h.is_empty() {
            continue;
        }
        if h.lo > base.hi {
            break;
        }
        if h.lo > cur {
            out.push(SlotRange::new(cur, h.lo - 1));
        }
        if h.hi >= base.hi {
            return out;
        }
        cur = h.hi + 1;
    }
    if cur <= base.hi {
        out.push(SlotRange::new(cur, base.hi));
    }
    out
}

/// A preemptible job with inclusive interval `[release, deadline]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Job {
    pub release: Slot,
    pub deadline: Slot,
    pub processing: i64,
}

impl Job {
    pub const fn new(release: Slot, deadline: Slot, processing: i64) -> Self {
        Job {
            release,
            deadline,
            processing,
        }
    }

    /// A job that must occupy every slot of `range`.
    pub fn rigid(range: SlotRange) -> Self {
        Job::new(range.lo, range.hi, range.len())
    }

    pub fn interval(&self) -> SlotRange {
        SlotRange::new(self.release, self.deadline)
    }

    pub fn is_rigid(&self) -> bool {
        self.processing == self.interval().len()
    }

    pub fn is_unit(&self) -> bool {
        self.processing == 1
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Agent {
    pub id: String,
    pub jobs: Vec<Job>,
}

impl Agent {
    pub fn new(id: impl Into<String>, jobs: Vec<Job>) -> Self {
        Agent { id: id.into(), jobs }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Event {
    pub id: String,
    pub length: i64,
}

impl Event {
    pub fn new(id: impl Into<String>, length: i64) -> Self {
        Event {
            id: id.into(),
            length,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub timeline_length: Slot,
    pub events: Vec<Event>,
    pub agents: Vec<Agent>,
}

impl Instance {
    pub fn new(timeline_length: Slot, events: Vec<Event>, agents: Vec<Agent>) -> Self {
        Instance {
            timeline_length,
            events,
            agents,
        }
    }

    /// Last valid start slot for an event of `length`, or `None` if it does not fit.
    pub fn last_start(&self, length: i64) -> Option<Slot> {
        (length >= 1 && length <= self.timeline_length).then(|| self.timeline_length - length + 1)
    }

    pub fn placement(&self, event: usize, start: Slot) -> Result<Placement> {
        let length = self
            .events
            .get(event)
            .ok_or(Error::UnknownEvent { event })?
            .length;
        match self.last_start(length) {
            Some(last) if (1..=last).contains(&start) => Ok(Placement { event, start, length }),
            _ => Err(Error::PlacementOutOfBounds { event, start }),
        }
    }

    /// Builds a schedule from `(event index, start)` pairs.
    pub fn schedule(&self, pairs: &[(usize, Slot)]) -> Result<EventSchedule> {
        let mut schedule = EventSchedule::new();
        for &(event, start) in pairs {
            schedule.insert(self.placement(event, start)?)?;
        }
        Ok(schedule)
    }

    pub fn total_event_length(&self) -> i128 {
        self.events.iter().map(|e| e.length as i128).sum()
    }

    pub fn validate(&self) -> ValidationReport {
        validate(self)
    }
}

/// Event `event` (index into [`Instance::events`]) occupying `{start, ..., start + length - 1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Placement {
    pub event: usize,
    pub start: Slot,
    pub length: i64,
}

impl Placement {
    pub fn span(&self) -> SlotRange {
        SlotRange::new(self.start, self.start + self.length - 1)
    }
}

/// A partial or complete event schedule; at most one placement per event.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct EventSchedule {
    placements: Vec<Placement>,
}

impl EventSchedule {
    pub fn new() -> Self {
        EventSchedule::default()
    }

    pub fn insert(&mut self, placement: Placement) -> Result<()> {
        if self.get(placement.event).is_some() {
            return Err(Error::DuplicatePlacement { event: placement.event });
        }
        let at = self.placements.partition_point(|p| p.event < placement.event);
        self.placements.insert(at, placement);
        Ok(())
    }

    pub fn with(mut self, placement: Placement) -> Result<Self> {
        self.insert(placement)?;
        Ok(self)
    }

    pub fn get(&self, event: usize) -> Option<&Placement> {
        self.placements.iter().find(|p| p.event == event)
    }

    /// Placements ordered by event index.
    pub fn placements(&self) -> &[Placement] {
        &self.placements
    }

    pub fn len(&self) -> usize {
        self.placements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.placements.is_empty()
    }

    pub fn is_complete(&self, event_count: usize) -> bool {
        self.placements.len() == event_count && self.placements.iter().enumerate().all(|(i, p)| p.event == i)
    }

    /// The union of all event occupancies, merged and sorted.
    pub fn covered(&self) -> Vec<SlotRange> {
        merge_ranges(self.placements.iter().map(Placement::span).collect())
    }

    pub fn covered_len(&self) -> i64 {
        self.covered().iter().map(SlotRange::len).sum()
    }

    pub fn is_disjoint(&self) -> bool {
        let mut spans: Vec<SlotRange> = self.placements.iter().map(Placement::span).collect();
        spans.sort();
        spans.windows(2).all(|w| w[0].hi < w[1].lo)
    }

    pub fn union(&self, other: &EventSchedule) -> Result<EventSchedule> {
        let mut out = self.clone();
        for p in &other.placements {
            match out.get(p.event) {
                Some(q) if q == p => {}
                _ => out.insert(*p)?,
            }
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct JobRun {
    pub job: usize,
    pub range: SlotRange,
}

/// One agent's job schedule as maximal runs of slots, sorted by start.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct JobSchedule {
    runs: Vec<JobRun>,
}

impl JobSchedule {
    pub fn from_runs(mut runs: Vec<JobRun>) -> Self {
        runs.retain(|r| !r.range.is_empty());
        runs.sort_by_key(|r| (r.range.lo, r.job));
        let mut merged: Vec<JobRun> = Vec::with_capacity(runs.len());
        for r in runs {
            match merged.last_mut() {
                Some(last) if last.job == r.job && last.range.hi + 1 == r.range.lo => last.range.hi = r.range.hi,
                _ => merged.push(r),
            }
        }
        JobSchedule { runs: merged }
    }

    pub fn runs(&self) -> &[JobRun] {
        &self.runs
    }

    pub fn runs_of(&self, job: usize) -> impl Iterator<Item = SlotRange> + '_ {
        self.runs.iter().filter(move |r| r.job == job).map(|r| r.range)
    }

    pub fn units_of(&self, job: usize) -> i64 {
        self.runs_of(job).map(|r| r.len()).sum()
    }

    pub fn job_at(&self, t: Slot) -> Option<usize> {
        let i = self.runs.partition_point(|r| r.range.hi < t);
        self.runs.get(i).filter(|r| r.range.contains(t)).map(|r| r.job)
    }

    pub fn busy(&self) -> Vec<SlotRange> {
        merge_ranges(self.runs.iter().map(|r| r.range).collect())
    }

    /// Each job gets exactly its processing time inside its interval and no
    /// slot carries two jobs.
    pub fn is_feasible_for(&self, jobs: &[Job]) -> bool {
        if self.runs.windows(2).any(|w| w[0].range.hi >= w[1].range.lo) {
            return false;
        }
        if self.runs.iter().any(|r| r.job >= jobs.len() || !jobs[r.job].interval().contains_range(&r.range)) {
            return false;
        }
        jobs.iter().enumerate().all(|(j, job)| self.units_of(j) == job.processing)
    }

    /// Slots covered by `schedule` and left free by this job schedule.
    pub fn agreement(&self, schedule: &EventSchedule) -> i64 {
        let covered = schedule.covered();
        let total: i64 = covered.iter().map(SlotRange::len).sum();
        total - intersection_len(&covered, &self.busy())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    TimelineNotPositive,
    EventLength { event: usize },
    DuplicateEventId { id: String },
    DuplicateAgentId { id: String },
    ReleaseAfterDeadline { agent: usize, job: usize },
    JobOutsideTimeline { agent: usize, job: usize },
    ProcessingNotPositive { agent: usize, job: usize },
    ProcessingExceedsInterval { agent: usize, job: usize },
    InfeasibleJobSet { agent: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::TimelineNotPositive => write!(f, "timeline_length: must be positive"),
            Violation::EventLength { event } => write!(f, "events[{event}]: length must lie in [1, timeline_length]"),
            Violation::DuplicateEventId { id } => write!(f, "events: duplicate id {id:?}"),
            Violation::DuplicateAgentId { id } => write!(f, "agents: duplicate id {id:?}"),
            Violation::ReleaseAfterDeadline { agent, job } => {
                write!(f, "agents[{agent}].jobs[{job}]: release after deadline")
            }
            Violation::JobOutsideTimeline { agent, job } => {
                write!(f, "agents[{agent}].jobs[{job}]: interval outside timeline")
            }
            Violation::ProcessingNotPositive { agent, job } => {
                write!(f, "agents[{agent}].jobs[{job}]: processing must be positive")
            }
            Violation::ProcessingExceedsInterval { agent, job } => {
                write!(f, "agents[{agent}].jobs[{job}]: processing exceeds interval")
            }
            Violation::InfeasibleJobSet { agent } => write!(f, "agents[{agent}]: job set infeasible"),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in &self.violations {
            writeln!(f, "{v}")?;
        }
        Ok(())
    }
}

pub fn validate(instance: &Instance) -> ValidationReport {
    let mut violations = Vec::new();
    let horizon = instance.timeline_length;
    if horizon < 1 {
        violations.push(Violation::TimelineNotPositive);
    }
    let mut seen = BTreeSet::new();
    for (i, e) in instance.events.iter().enumerate() {
        if e.length < 1 || e.length > horizon {
            violations.push(Violation::EventLength { event: i });
        }
        if !seen.insert(e.id.as_str()) {
            violations.push(Violation::DuplicateEventId { id: e.id.clone() });
        }
    }
    let mut seen = BTreeSet::new();
    for (a, agent) in instance.agents.iter().enumerate() {
        if !seen.insert(agent.id.as_str()) {
            violations.push(Violation::DuplicateAgentId { id: agent.id.clone() });
        }
        let before = violations.len();
        for (j, job) in agent.jobs.iter().enumerate() {
            if job.release > job.deadline {
                violations.push(Violation::ReleaseAfterDeadline { agent: a, job: j });
                continue;
            }
            if job.release < 1 || job.deadline > horizon {
                violations.push(Violation::JobOutsideTimeline { agent: a, job: j });
            }
            if job.processing < 1 {
                violations.push(Violation::ProcessingNotPositive { agent: a, job: j });
            } else if job.processing > job.interval().len() {
                violations.push(Violation::ProcessingExceedsInterval { agent: a, job: j });
            }
        }
        if violations.len() == before && !edf_feasible(&agent.jobs, horizon) {
            violations.push(Violation::InfeasibleJobSet { agent: a });
        }
    }
    ValidationReport { violations }
}

/// Whether `jobs` admit a preemptive schedule inside `[1, timeline_length]`,
/// decided by an earliest-deadline-first sweep.
pub fn edf_feasible(jobs: &[Job], timeline_length: Slot) -> bool {
    let rank = edf::ranks(&edf::deadline_order(jobs), jobs.len());
    let mut sweep: Vec<SweepJob> = jobs.iter().map(SweepJob::from_job).collect();
    edf::forward(&mut sweep, &rank, 1, timeline_length as i128).is_ok() && sweep.iter().all(|j| j.remaining == 0)
}

/// Rearranges `schedule` so that no two events share a slot. Events are taken
/// by start (ties by event index); an event overlapping its predecessor is
/// delayed to start right after it. Events pushed past the timeline end are
/// then compacted leftwards, each moving only as far as needed. The union of
/// covered slots only grows, so no agent loses agreement.
pub fn eliminate_overlap(instance: &Instance, schedule: &EventSchedule) -> Result<EventSchedule> {
    let total: i128 = schedule.placements().iter().map(|p| p.length as i128).sum();
    if total > instance.timeline_length as i128 {
        return Err(Error::TotalEventLengthExceedsTimeline {
            total,
            timeline: instance.timeline_length,
        });
    }
    let mut order: Vec<Placement> = schedule.placements().to_vec();
    order.sort_by_key(|p| (p.start, p.event));

    let mut starts: Vec<i128> = Vec::with_capacity(order.len());
    let mut cursor: i128 = i128::MIN;
    for p in &order {
        let s = (p.start as i128).max(cursor);
        starts.push(s);
        cursor = s + p.length as i128;
    }
    let mut limit = instance.timeline_length as i128;
    for (p, s) in order.iter().zip(starts.iter_mut()).rev() {
        let end = (*s + p.length as i128 - 1).min(limit);
        *s = end - p.length as i128 + 1;
        limit = *s - 1;
    }

    let mut out = EventSchedule::new();
    for (p, s) in order.iter().zip(starts) {
        out.insert(Placement {
            event: p.event,
            start: s as Slot,
            length: p.length,
        })?;
    }
    Ok(out)
}
