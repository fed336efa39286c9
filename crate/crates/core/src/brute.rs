//! Exhaustive oracles for small instances.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::flow::total_agreement;
use crate::model::{Agent, EventSchedule, Instance, Slot};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleBudget {
    /// Longest timeline [`brute_agreement`] walks slot by slot.
    pub max_timeline: Slot,
    /// Most distinct `(slot, remaining work)` states [`brute_agreement`] may visit.
    pub max_job_states: u64,
    /// Most partial schedules [`brute_optimum`] may evaluate.
    pub max_search_nodes: u64,
    /// Most complete placements [`enumerate_optimum`] may evaluate.
    pub max_placements: u64,
}

impl Default for OracleBudget {
    fn default() -> Self {
        OracleBudget {
            max_timeline: 14,
            max_job_states: 2_000_000,
            max_search_nodes: 2_000_000,
            max_placements: 200_000,
        }
    }
}

/// Best agreement of `agent` over all feasible slot-by-slot job assignments.
pub fn brute_agreement(agent: &Agent, schedule: &EventSchedule, timeline_length: Slot) -> Result<i64> {
    brute_agreement_with(agent, schedule, timeline_length, &OracleBudget::default())
}

pub fn brute_agreement_with(
    agent: &Agent,
    schedule: &EventSchedule,
    timeline_length: Slot,
    budget: &OracleBudget,
) -> Result<i64> {
    if timeline_length > budget.max_timeline {
        return Err(Error::BudgetExceeded {
            what: "slot-by-slot agreement",
            required: timeline_length.max(0) as u128,
            cap: budget.max_timeline as u64,
        });
    }
    let states = agent
        .jobs
        .iter()
        .fold(timeline_length.max(1) as u128, |acc, j| acc.saturating_mul(j.processing.max(0) as u128 + 1));
    if states > budget.max_job_states as u128 {
        return Err(Error::BudgetExceeded {
            what: "slot-by-slot agreement",
            required: states,
            cap: budget.max_job_states,
        });
    }
    let covered: Vec<bool> = (1..=timeline_length)
        .map(|t| schedule.placements().iter().any(|p| p.span().contains(t)))
        .collect();
    let mut search = Search {
        agent,
        covered: &covered,
        memo: BTreeMap::new(),
    };
    let remaining: Vec<i64> = agent.jobs.iter().map(|j| j.processing).collect();
    search.best(1, remaining).ok_or(Error::InfeasibleJobSet)
}

struct Search<'a> {
    agent: &'a Agent,
    covered: &'a [bool],
    memo: BTreeMap<(Slot, Vec<i64>), Option<i64>>,
}

impl Search<'_> {
    /// Best agreement from slot `t` on, or `None` if the remaining work cannot finish.
    fn best(&mut self, t: Slot, remaining: Vec<i64>) -> Option<i64> {
        let jobs = &self.agent.jobs;
        if jobs.iter().zip(&remaining).any(|(j, &r)| r > 0 && j.deadline < t) {
            return None;
        }
        if t as usize > self.covered.len() {
            return remaining.iter().all(|&r| r == 0).then_some(0);
        }
        if let Some(&v) = self.memo.get(&(t, remaining.clone())) {
            return v;
        }
        let gain = i64::from(self.covered[t as usize - 1]);
        let mut best = self.best(t + 1, remaining.clone()).map(|v| v + gain);
        for (k, job) in jobs.iter().enumerate() {
            if remaining[k] > 0 && job.interval().contains(t) {
                let mut next = remaining.clone();
                next[k] -= 1;
                if let Some(v) = self.best(t + 1, next) {
                    best = best.max(Some(v));
                }
            }
        }
        self.memo.insert((t, remaining), best);
        best
    }
}

/// A complete schedule of maximum total agreement.
///
/// Depth-first search over the start slots of every event, longest events
/// first. Events of equal length are interchangeable, so their starts are
/// taken in nondecreasing order. A branch is cut when its agreement plus the
/// agent count times the remaining event length cannot beat the best
/// complete schedule found so far. The budget limits the number of partial
/// schedules evaluated.
pub fn brute_optimum(instance: &Instance) -> Result<(EventSchedule, i64)> {
    brute_optimum_with(instance, &OracleBudget::default())
}

pub fn brute_optimum_with(instance: &Instance, budget: &OracleBudget) -> Result<(EventSchedule, i64)> {
    let last = last_starts(instance)?;
    let mut order: Vec<usize> = (0..instance.events.len()).collect();
    order.sort_by_key(|&e| (core::cmp::Reverse(instance.events[e].length), e));
    if let Some(&first) = order.first() {
        let children = last[first] as u64;
        if children > budget.max_search_nodes {
            return Err(Error::BudgetExceeded {
                what: "placement search",
                required: children as u128,
                cap: budget.max_search_nodes,
            });
        }
    }
    let mut suffix = vec![0i64; order.len() + 1];
    for k in (0..order.len()).rev() {
        suffix[k] = suffix[k + 1] + instance.events[order[k]].length;
    }
    let mut search = OptimumSearch {
        instance,
        budget,
        order,
        last,
        suffix,
        nodes: 0,
        best: None,
    };
    let root = total_agreement(instance, &EventSchedule::new())?;
    search.descend(0, &mut Vec::new(), root)?;
    let (pairs, value) = search.best.expect("the search reaches a complete schedule");
    Ok((instance.schedule(&pairs)?, value))
}

/// Evaluates every combination of start slots; ties go to the
/// lexicographically first combination in event order. The budget limits
/// the number of combinations.
pub fn enumerate_optimum(instance: &Instance, budget: &OracleBudget) -> Result<(EventSchedule, i64)> {
    let last = last_starts(instance)?;
    let required = last.iter().fold(1u128, |acc, &l| acc.saturating_mul(l as u128));
    if required > budget.max_placements as u128 {
        return Err(Error::BudgetExceeded {
            what: "placement enumeration",
            required,
            cap: budget.max_placements,
        });
    }
    let mut starts: Vec<Slot> = vec![1; last.len()];
    let mut best: Option<(EventSchedule, i64)> = None;
    loop {
        let pairs: Vec<(usize, Slot)> = starts.iter().copied().enumerate().collect();
        let schedule = instance.schedule(&pairs)?;
        let value = total_agreement(instance, &schedule)?;
        if best.as_ref().map_or(true, |(_, b)| value > *b) {
            best = Some((schedule, value));
        }
        let Some(i) = (0..starts.len()).rev().find(|&i| starts[i] < last[i]) else {
            break;
        };
        starts[i] += 1;
        starts[i + 1..].iter_mut().for_each(|s| *s = 1);
    }
    Ok(best.expect("at least one combination"))
}

fn last_starts(instance: &Instance) -> Result<Vec<Slot>> {
    instance
        .events
        .iter()
        .map(|e| {
            instance.last_start(e.length).ok_or(Error::NoValidPlacement {
                length: e.length,
                timeline: instance.timeline_length,
            })
        })
        .collect()
}

struct OptimumSearch<'a> {
    instance: &'a Instance,
    budget: &'a OracleBudget,
    /// Events in placement order.
    order: Vec<usize>,
    last: Vec<Slot>,
    /// `suffix[k]`: total length of the events placed at depth `k` and later.
    suffix: Vec<i64>,
    nodes: u64,
    best: Option<(Vec<(usize, Slot)>, i64)>,
}

impl OptimumSearch<'_> {
    fn descend(&mut self, depth: usize, pairs: &mut Vec<(usize, Slot)>, value: i64) -> Result<()> {
        if depth == self.order.len() {
            if self.best.as_ref().map_or(true, |(_, b)| value > *b) {
                self.best = Some((pairs.clone(), value));
            }
            return Ok(());
        }
        let event = self.order[depth];
        let length = self.instance.events[event].length;
        let first = match pairs.last() {
            Some(&(prev, t)) if self.instance.events[prev].length == length => t,
            _ => 1,
        };
        let agents = self.instance.agents.len() as i64;
        let rest = agents * self.suffix[depth + 1];
        let mut children = Vec::new();
        for t in first..=self.last[event] {
            self.nodes += 1;
            if self.nodes > self.budget.max_search_nodes {
                return Err(Error::BudgetExceeded {
                    what: "placement search",
                    required: self.nodes as u128,
                    cap: self.budget.max_search_nodes,
                });
            }
            pairs.push((event, t));
            let v = total_agreement(self.instance, &self.instance.schedule(pairs)?)?;
            pairs.pop();
            children.push((v, t));
        }
        children.sort_by_key(|&(v, t)| (core::cmp::Reverse(v), t));
        for (v, t) in children {
            if self.best.as_ref().is_some_and(|(_, b)| v + rest <= *b) {
                break;
            }
            pairs.push((event, t));
            self.descend(depth + 1, pairs, v)?;
            pairs.pop();
        }
        Ok(())
    }
}
