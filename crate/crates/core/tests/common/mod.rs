#![allow(dead_code)]

use std::collections::BTreeSet;

use psba_core::flow::{max_agreement_for_jobs, total_agreement};
use psba_core::generators::{gen_random, FlexibilityMix, GenSpec};
use psba_core::model::{EventSchedule, Instance, Job, Placement, Slot};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub struct Shape {
    pub max_timeline: Slot,
    pub max_agents: usize,
    pub max_jobs: usize,
    pub events: (usize, usize),
    pub max_event_length: i64,
}

pub fn random_instance(rng: &mut ChaCha8Rng, shape: &Shape) -> Instance {
    let timeline_length = rng.gen_range(1..=shape.max_timeline);
    let spec = GenSpec {
        seed: rng.gen(),
        agents: rng.gen_range(1..=shape.max_agents),
        events: rng.gen_range(shape.events.0..=shape.events.1),
        timeline_length,
        jobs_per_agent: (0, shape.max_jobs),
        event_length: (1, shape.max_event_length.min(timeline_length)),
        mix: FlexibilityMix {
            rigid: rng.gen_range(0..3),
            unit: rng.gen_range(0..3),
            general: rng.gen_range(1..4),
        },
    };
    gen_random(&spec).expect("consistent spec")
}

/// Places a random subset of the events at random starts.
pub fn random_partial(rng: &mut ChaCha8Rng, instance: &Instance) -> EventSchedule {
    let mut s = EventSchedule::new();
    for (e, event) in instance.events.iter().enumerate() {
        if rng.gen_bool(0.7) {
            let last = instance.timeline_length - event.length + 1;
            s.insert(instance.placement(e, rng.gen_range(1..=last)).unwrap()).unwrap();
        }
    }
    s
}

pub fn random_complete(rng: &mut ChaCha8Rng, instance: &Instance) -> EventSchedule {
    let pairs: Vec<(usize, Slot)> = instance
        .events
        .iter()
        .enumerate()
        .map(|(e, ev)| (e, rng.gen_range(1..=instance.timeline_length - ev.length + 1)))
        .collect();
    instance.schedule(&pairs).unwrap()
}

/// Total agreement after adding `event` at every valid start, in start order.
pub fn values_per_start(instance: &Instance, partial: &EventSchedule, event: usize) -> Vec<i64> {
    let last = instance.timeline_length - instance.events[event].length + 1;
    (1..=last)
        .map(|t| {
            let s = partial.clone().with(instance.placement(event, t).unwrap()).unwrap();
            total_agreement(instance, &s).unwrap()
        })
        .collect()
}

/// Agreement of an arbitrary collection of slot ranges, given as placements
/// of distinct virtual events.
pub fn agreement_of_ranges(instance: &Instance, ranges: &[(Slot, i64)]) -> i64 {
    let mut s = EventSchedule::new();
    for (k, &(start, length)) in ranges.iter().enumerate() {
        s.insert(Placement { event: k, start, length }).unwrap();
    }
    instance
        .agents
        .iter()
        .map(|a| max_agreement_for_jobs(&a.jobs, &s, instance.timeline_length).unwrap().agreement)
        .sum()
}

pub fn slots(ranges: &[(Slot, i64)]) -> BTreeSet<Slot> {
    ranges.iter().flat_map(|&(s, l)| s..s + l).collect()
}

/// Random feasible job set with total processing at most `max_units`.
pub fn random_small_jobs(rng: &mut ChaCha8Rng, timeline_length: Slot, max_units: i64) -> Vec<Job> {
    loop {
        let count = rng.gen_range(0..=4);
        let mut jobs = Vec::new();
        let mut units = 0;
        for _ in 0..count {
            let r = rng.gen_range(1..=timeline_length);
            let d = rng.gen_range(r..=timeline_length);
            let p = rng.gen_range(1..=(d - r + 1).min(3));
            if units + p > max_units {
                break;
            }
            units += p;
            jobs.push(Job::new(r, d, p));
        }
        if psba_core::model::edf_feasible(&jobs, timeline_length) {
            return jobs;
        }
    }
}

pub fn random_subset<T: Clone>(rng: &mut ChaCha8Rng, items: &[T]) -> Vec<T> {
    items.iter().filter(|_| rng.gen_bool(0.5)).cloned().collect()
}

pub fn shuffled<T: Clone>(rng: &mut ChaCha8Rng, items: &[T]) -> Vec<T> {
    let mut v = items.to_vec();
    v.shuffle(rng);
    v
}

/// Whether the numbers split into two parts of equal sum (subset-sum table).
pub fn has_equal_partition(numbers: &[u64]) -> bool {
    let sum: u64 = numbers.iter().sum();
    if sum % 2 == 1 {
        return false;
    }
    let half = (sum / 2) as usize;
    let mut reach = vec![false; half + 1];
    reach[0] = true;
    for &x in numbers {
        for v in (x as usize..=half).rev() {
            reach[v] |= reach[v - x as usize];
        }
    }
    reach[half]
}

/// Every multiset of positive integers with the given sum, as nonincreasing lists.
pub fn multisets_with_sum(sum: u64) -> Vec<Vec<u64>> {
    fn go(rest: u64, max: u64, prefix: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if rest == 0 {
            out.push(prefix.clone());
            return;
        }
        for x in (1..=rest.min(max)).rev() {
            prefix.push(x);
            go(rest - x, x, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(sum, sum, &mut Vec::new(), &mut out);
    out
}
