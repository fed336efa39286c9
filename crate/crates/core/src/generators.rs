//! Reproducible instance families.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec::Vec;

use rand::distributions::{Distribution, WeightedIndex};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::model::{Agent, Event, Instance, Job, Slot};

/// Relative weights of the job kinds drawn by [`gen_random`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FlexibilityMix {
    pub rigid: u32,
    pub unit: u32,
    pub general: u32,
}

impl Default for FlexibilityMix {
    fn default() -> Self {
        FlexibilityMix {
            rigid: 1,
            unit: 1,
            general: 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenSpec {
    pub seed: u64,
    pub agents: usize,
    pub events: usize,
    pub timeline_length: Slot,
    /// Inclusive range of job counts per agent.
    pub jobs_per_agent: (usize, usize),
    /// Inclusive range of event lengths.
    pub event_length: (i64, i64),
    pub mix: FlexibilityMix,
}

impl Default for GenSpec {
    fn default() -> Self {
        GenSpec {
            seed: 0,
            agents: 3,
            events: 2,
            timeline_length: 12,
            jobs_per_agent: (0, 4),
            event_length: (1, 4),
            mix: FlexibilityMix::default(),
        }
    }
}

/// A random instance, identical for identical specs.
///
/// Every agent first receives disjoint home blocks, one per job, drawn from
/// distinct chunks of the timeline. Each job is then relaxed around its home
/// block, so processing every job exactly on its home slots stays feasible.
/// Work is proportional to the number of jobs and events, not to the
/// timeline length. Agents get fewer jobs than requested only when the
/// timeline is shorter than the job count.
pub fn gen_random(spec: &GenSpec) -> Result<Instance> {
    let t = spec.timeline_length;
    if t < 1 {
        return Err(Error::GenerationFailed {
            reason: "timeline length must be positive",
        });
    }
    let (lmin, lmax) = spec.event_length;
    if lmin < 1 || lmin > lmax || lmin > t {
        return Err(Error::GenerationFailed {
            reason: "event length range is empty or does not fit the timeline",
        });
    }
    let (jmin, jmax) = spec.jobs_per_agent;
    if jmin > jmax {
        return Err(Error::GenerationFailed {
            reason: "job count range is empty",
        });
    }
    let kinds = WeightedIndex::new([spec.mix.rigid, spec.mix.unit, spec.mix.general]).map_err(|_| {
        Error::GenerationFailed {
            reason: "flexibility mix has no positive weight",
        }
    })?;

    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let events = (0..spec.events)
        .map(|i| Event::new(format!("e{}", i + 1), rng.gen_range(lmin..=lmax.min(t))))
        .collect();
    let agents = (0..spec.agents)
        .map(|i| {
            let k = rng.gen_range(jmin..=jmax).min(t as usize);
            Agent::new(format!("a{}", i + 1), random_jobs(&mut rng, k, t, &kinds))
        })
        .collect();
    let instance = Instance::new(t, events, agents);
    if !instance.validate().is_valid() {
        return Err(Error::GenerationFailed {
            reason: "generated instance failed validation",
        });
    }
    Ok(instance)
}

fn random_jobs(rng: &mut ChaCha8Rng, k: usize, t: Slot, kinds: &WeightedIndex<u32>) -> Vec<Job> {
    if k == 0 {
        return Vec::new();
    }
    let mut starts = BTreeSet::new();
    starts.insert(1);
    while starts.len() < k {
        starts.insert(rng.gen_range(1..=t));
    }
    let starts: Vec<Slot> = starts.into_iter().collect();
    let mut jobs = Vec::with_capacity(k);
    for (i, &lo) in starts.iter().enumerate() {
        let hi = starts.get(i + 1).map_or(t, |&next| next - 1);
        let width = hi - lo + 1;
        let a = rng.gen_range(lo..=hi);
        let b = rng.gen_range(a..=hi);
        let job = match kinds.sample(rng) {
            0 => Job::new(a, b, b - a + 1),
            kind => {
                let processing = if kind == 1 { 1 } else { b - a + 1 };
                let (home_lo, home_hi) = if kind == 1 { (a, a) } else { (a, b) };
                let release = rng.gen_range((home_lo - width).max(1)..=home_lo);
                let deadline = rng.gen_range(home_hi..=(home_hi.saturating_add(width)).min(t));
                Job::new(release, deadline, processing)
            }
        };
        jobs.push(job);
    }
    jobs
}

/// The partition family: one agent with rigid jobs on `1..=Q` and
/// `2Q+1..=3Q` on a timeline of `4Q` slots, where `2Q` is the multiset sum,
/// and one event per number. The free slots form two runs of `Q` slots, so
/// the optimum is `2Q` exactly when the numbers split into two halves of
/// equal sum.
pub fn gen_partition(multiset: &[u64]) -> Result<Instance> {
    if multiset.is_empty() || multiset.contains(&0) {
        return Err(Error::GenerationFailed {
            reason: "multiset must be nonempty with positive entries",
        });
    }
    let sum = multiset.iter().try_fold(0u64, |acc, &s| acc.checked_add(s)).ok_or(Error::GenerationFailed {
        reason: "multiset sum overflows",
    })?;
    if sum % 2 == 1 {
        return Err(Error::OddSum { sum });
    }
    let q = sum / 2;
    if q > (i64::MAX / 4) as u64 {
        return Err(Error::GenerationFailed {
            reason: "multiset sum too large for the timeline",
        });
    }
    let q = q as i64;
    let events = multiset
        .iter()
        .enumerate()
        .map(|(i, &s)| Event::new(format!("e{}", i + 1), s as i64))
        .collect();
    let agent = Agent::new("a1", [Job::new(1, q, q), Job::new(2 * q + 1, 3 * q, q)].into());
    Ok(Instance::new(4 * q, events, [agent].into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_per_seed() {
        let spec = GenSpec {
            seed: 7,
            ..GenSpec::default()
        };
        assert_eq!(gen_random(&spec), gen_random(&spec));
        let other = GenSpec { seed: 8, ..spec.clone() };
        assert_ne!(gen_random(&spec), gen_random(&other));
    }

    #[test]
    fn all_rigid_mix() {
        let spec = GenSpec {
            seed: 3,
            agents: 5,
            jobs_per_agent: (2, 4),
            mix: FlexibilityMix {
                rigid: 1,
                unit: 0,
                general: 0,
            },
            ..GenSpec::default()
        };
        let inst = gen_random(&spec).unwrap();
        assert!(inst.agents.iter().flat_map(|a| &a.jobs).all(Job::is_rigid));
    }

    #[test]
    fn huge_timeline_is_cheap() {
        let spec = GenSpec {
            seed: 1,
            agents: 20,
            events: 10,
            timeline_length: 1_000_000_000,
            jobs_per_agent: (15, 15),
            event_length: (1, 1_000_000),
            mix: FlexibilityMix::default(),
        };
        let inst = gen_random(&spec).unwrap();
        assert!(inst.agents.iter().all(|a| a.jobs.len() == 15));
    }

    #[test]
    fn inconsistent_specs() {
        let bad = GenSpec {
            event_length: (5, 2),
            ..GenSpec::default()
        };
        assert!(matches!(gen_random(&bad), Err(Error::GenerationFailed { .. })));
        let bad = GenSpec {
            mix: FlexibilityMix {
                rigid: 0,
                unit: 0,
                general: 0,
            },
            ..GenSpec::default()
        };
        assert!(matches!(gen_random(&bad), Err(Error::GenerationFailed { .. })));
    }

    #[test]
    fn partition_layout() {
        let inst = gen_partition(&[1, 1, 2]).unwrap();
        assert_eq!(inst.timeline_length, 8);
        assert_eq!(inst.agents[0].jobs, [Job::new(1, 2, 2), Job::new(5, 6, 2)]);
        assert_eq!(inst.events.iter().map(|e| e.length).collect::<Vec<_>>(), [1, 1, 2]);
        assert_eq!(gen_partition(&[1, 2]), Err(Error::OddSum { sum: 3 }));
        assert_eq!(gen_partition(&[1, 1, 1]), Err(Error::OddSum { sum: 3 }));
        assert!(matches!(gen_partition(&[]), Err(Error::GenerationFailed { .. })));
    }
}
