//! Exact agreement of a partial event schedule for one agent.
//!
//! The timeline is cut at every job and event endpoint into segments; every
//! job interval and every event span is a union of whole segments, so slots
//! inside a segment are interchangeable. Jobs send their processing through
//! the segments they may use into the sink, paying one unit per slot of an
//! event-covered segment. A min-cost max-flow then minimizes the number of
//! covered slots spent on jobs, and the agreement is the covered length minus
//! that cost.

use alloc::collections::BinaryHeap;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Reverse;

use crate::error::{Error, Result};
use crate::model::{intersection_len, Agent, EventSchedule, Instance, Job, JobRun, JobSchedule, Slot, SlotRange};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Segment {
    pub range: SlotRange,
    pub event_covered: bool,
}

impl Segment {
    pub fn capacity(&self) -> i64 {
        self.range.len()
    }
}

/// Timeline cut at job and event endpoints.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SegmentDecomposition {
    /// First slot of every segment, ascending.
    pub breakpoints: Vec<Slot>,
    pub segments: Vec<Segment>,
}

pub fn decompose(jobs: &[Job], schedule: &EventSchedule, timeline_length: Slot) -> SegmentDecomposition {
    let mut cuts: Vec<Slot> = vec![1];
    let mut add = |r: SlotRange| {
        cuts.push(r.lo);
        if r.hi < timeline_length {
            cuts.push(r.hi + 1);
        }
    };
    jobs.iter().for_each(|j| add(j.interval()));
    schedule.placements().iter().for_each(|p| add(p.span()));
    cuts.retain(|&c| (1..=timeline_length).contains(&c));
    cuts.sort_unstable();
    cuts.dedup();

    let covered = schedule.covered();
    let segments = cuts
        .iter()
        .enumerate()
        .map(|(i, &lo)| {
            let hi = cuts.get(i + 1).map_or(timeline_length, |&next| next - 1);
            let range = SlotRange::new(lo, hi);
            let event_covered = intersection_len(&covered, &[range]) == range.len();
            Segment { range, event_covered }
        })
        .collect();
    SegmentDecomposition {
        breakpoints: cuts,
        segments,
    }
}

/// Optimal job allocation for one agent under a partial event schedule.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AgreementResult {
    pub agreement: i64,
    pub decomposition: SegmentDecomposition,
    /// Per segment, `(job index, units)` with nonzero units, by job index.
    pub allocation: Vec<Vec<(usize, i64)>>,
    /// Number of covered slots spent on jobs.
    pub min_cost: i64,
}

/// A segment's agreement slots gathered into one run at the segment's right end.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AgreementRun {
    pub segment: SlotRange,
    pub run: SlotRange,
}

impl AgreementResult {
    /// Units packed left within every segment, agreement slots to the right.
    pub fn agreement_runs(&self) -> Vec<AgreementRun> {
        self.decomposition
            .segments
            .iter()
            .zip(&self.allocation)
            .filter(|(seg, _)| seg.event_covered)
            .filter_map(|(seg, alloc)| {
                let busy: i64 = alloc.iter().map(|&(_, u)| u).sum();
                let free = seg.capacity() - busy;
                (free > 0).then(|| AgreementRun {
                    segment: seg.range,
                    run: SlotRange::new(seg.range.hi - free + 1, seg.range.hi),
                })
            })
            .collect()
    }

    /// A concrete job schedule realizing the allocation (jobs packed from the
    /// left of each segment in index order).
    pub fn job_schedule(&self) -> JobSchedule {
        let mut runs = Vec::new();
        for (seg, alloc) in self.decomposition.segments.iter().zip(&self.allocation) {
            let mut cur = seg.range.lo;
            for &(job, units) in alloc {
                runs.push(JobRun {
                    job,
                    range: SlotRange::new(cur, cur + units - 1),
                });
                cur += units;
            }
        }
        JobSchedule::from_runs(runs)
    }
}

pub fn max_agreement(agent: &Agent, schedule: &EventSchedule, timeline_length: Slot) -> Result<AgreementResult> {
    max_agreement_for_jobs(&agent.jobs, schedule, timeline_length)
}

pub fn max_agreement_for_jobs(jobs: &[Job], schedule: &EventSchedule, timeline_length: Slot) -> Result<AgreementResult> {
    let decomposition = decompose(jobs, schedule, timeline_length);
    let segs = &decomposition.segments;
    let n = jobs.len();
    let source = 0;
    let sink = n + segs.len() + 1;
    let mut net = Network::new(sink + 1);

    let mut assign_arcs: Vec<(usize, usize, usize)> = Vec::new();
    for (j, job) in jobs.iter().enumerate() {
        net.add_arc(source, 1 + j, job.processing, 0);
        let iv = job.interval();
        let first = segs.partition_point(|s| s.range.hi < iv.lo);
        for (k, seg) in segs.iter().enumerate().skip(first) {
            if seg.range.lo > iv.hi {
                break;
            }
            debug_assert!(iv.contains_range(&seg.range));
            let arc = net.add_arc(1 + j, 1 + n + k, job.processing.min(seg.capacity()), 0);
            assign_arcs.push((j, k, arc));
        }
    }
    for (k, seg) in segs.iter().enumerate() {
        net.add_arc(1 + n + k, sink, seg.capacity(), i64::from(seg.event_covered));
    }

    let (flow, cost) = net.min_cost_max_flow(source, sink);
    let demand: i128 = jobs.iter().map(|j| j.processing as i128).sum();
    if flow != demand {
        return Err(Error::InfeasibleJobSet);
    }

    let mut allocation = vec![Vec::new(); segs.len()];
    for (j, k, arc) in assign_arcs {
        let units = net.flow_on(arc);
        if units > 0 {
            allocation[k].push((j, units));
        }
    }
    let covered: i64 = segs.iter().filter(|s| s.event_covered).map(Segment::capacity).sum();
    let min_cost = cost as i64;
    Ok(AgreementResult {
        agreement: covered - min_cost,
        decomposition,
        allocation,
        min_cost,
    })
}

pub fn total_agreement(instance: &Instance, schedule: &EventSchedule) -> Result<i64> {
    instance
        .agents
        .iter()
        .map(|a| max_agreement(a, schedule, instance.timeline_length).map(|r| r.agreement))
        .sum()
}

pub fn agreement_segments(agent: &Agent, schedule: &EventSchedule, timeline_length: Slot) -> Result<Vec<AgreementRun>> {
    Ok(max_agreement(agent, schedule, timeline_length)?.agreement_runs())
}

struct Arc {
    to: usize,
    cap: i64,
    cost: i64,
}

/// Residual network for successive shortest paths. Arc `2k` is the forward
/// arc, `2k + 1` its reverse.
struct Network {
    arcs: Vec<Arc>,
    adj: Vec<Vec<usize>>,
    initial_cap: Vec<i64>,
}

impl Network {
    fn new(vertices: usize) -> Self {
        Network {
            arcs: Vec::new(),
            adj: vec![Vec::new(); vertices],
            initial_cap: Vec::new(),
        }
    }

    fn add_arc(&mut self, from: usize, to: usize, cap: i64, cost: i64) -> usize {
        let id = self.arcs.len();
        self.adj[from].push(id);
        self.arcs.push(Arc { to, cap, cost });
        self.adj[to].push(id + 1);
        self.arcs.push(Arc { to: from, cap: 0, cost: -cost });
        self.initial_cap.push(cap);
        id
    }

    fn flow_on(&self, arc: usize) -> i64 {
        self.initial_cap[arc / 2] - self.arcs[arc].cap
    }

    /// Dijkstra on reduced costs with Johnson potentials; costs start
    /// nonnegative so zero potentials are valid. Ties go to the lower vertex.
    fn min_cost_max_flow(&mut self, s: usize, t: usize) -> (i128, i128) {
        let n = self.adj.len();
        let mut potential = vec![0i64; n];
        let (mut flow, mut cost) = (0i128, 0i128);
        loop {
            let mut dist = vec![i64::MAX; n];
            let mut via = vec![usize::MAX; n];
            let mut heap = BinaryHeap::new();
            dist[s] = 0;
            heap.push(Reverse((0i64, s)));
            while let Some(Reverse((d, u))) = heap.pop() {
                if d > dist[u] {
                    continue;
                }
                for &a in &self.adj[u] {
                    let arc = &self.arcs[a];
                    if arc.cap == 0 {
                        continue;
                    }
                    let nd = d + arc.cost + potential[u] - potential[arc.to];
                    if nd < dist[arc.to] {
                        dist[arc.to] = nd;
                        via[arc.to] = a;
                        heap.push(Reverse((nd, arc.to)));
                    }
                }
            }
            if dist[t] == i64::MAX {
                break;
            }
            for v in 0..n {
                if dist[v] != i64::MAX {
                    potential[v] += dist[v];
                }
            }
            let mut push = i64::MAX;
            let mut v = t;
            while v != s {
                let a = via[v];
                push = push.min(self.arcs[a].cap);
                v = self.arcs[a ^ 1].to;
            }
            let mut v = t;
            while v != s {
                let a = via[v];
                self.arcs[a].cap -= push;
                self.arcs[a ^ 1].cap += push;
                cost += push as i128 * self.arcs[a].cost as i128;
                v = self.arcs[a ^ 1].to;
            }
            flow += push as i128;
        }
        (flow, cost)
    }
}
