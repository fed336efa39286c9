//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits with a
//! nonzero status if any criterion fails.

mod common;

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::*;
use psba_core::brute::{brute_agreement, brute_optimum};
use psba_core::flow::{max_agreement, total_agreement};
use psba_core::generators::{gen_partition, gen_random, FlexibilityMix, GenSpec};
use psba_core::matroid::{slots_of, SchedulingMatroid};
use psba_core::model::{Agent, Event, EventSchedule, Instance, Job, Slot, SlotRange};
use psba_core::one_event::{best_placement, bi_edf_schedule, edf_partition, reverse_release_order, solve_one_event};
use psba_core::solvers::{greedy_poly_t, solve_general, SolveOptions};
use rand::Rng;

type Outcome = Result<String, String>;

fn check(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn two_agents() -> Instance {
    Instance::new(
        11,
        vec![Event::new("e1", 2), Event::new("e2", 3)],
        vec![
            Agent::new("1", vec![Job::new(1, 3, 2), Job::new(2, 7, 3)]),
            Agent::new("2", vec![Job::new(7, 11, 3), Job::new(5, 8, 2)]),
        ],
    )
}

fn golden_instance() -> Outcome {
    let inst = two_agents();
    let (_, opt) = brute_optimum(&inst).map_err(|e| e.to_string())?;
    check(opt == 9, || format!("brute optimum {opt}, expected 9"))?;
    let s = inst.schedule(&[(0, 3), (1, 8)]).unwrap();
    let per_agent: Vec<i64> = inst
        .agents
        .iter()
        .map(|a| max_agreement(a, &s, 11).unwrap().agreement)
        .collect();
    check(per_agent == [5, 4], || format!("per-agent agreement {per_agent:?}, expected [5, 4]"))?;
    Ok("optimum 9, per-agent 5 and 4".into())
}

fn flow_matches_brute_force() -> Outcome {
    let shape = Shape {
        max_timeline: 12,
        max_agents: 3,
        max_jobs: 4,
        events: (0, 3),
        max_event_length: 5,
    };
    let (mut comparisons, mut nonzero, mut constrained) = (0, 0, 0);
    for seed in 0..600 {
        let mut r = rng(seed);
        let inst = random_instance(&mut r, &shape);
        let s = random_partial(&mut r, &inst);
        for a in &inst.agents {
            let flow = max_agreement(a, &s, inst.timeline_length).unwrap().agreement;
            let brute = brute_agreement(a, &s, inst.timeline_length).unwrap();
            check(flow == brute, || format!("seed {seed}: flow {flow} != brute {brute}"))?;
            comparisons += 1;
            nonzero += usize::from(brute > 0);
            constrained += usize::from(brute < s.covered_len());
        }
    }
    Ok(format!(
        "600 instances, {comparisons} agent comparisons ({nonzero} positive, {constrained} below the covered length)"
    ))
}

fn one_event_exactness() -> Outcome {
    let shape = Shape {
        max_timeline: 30,
        max_agents: 3,
        max_jobs: 5,
        events: (1, 1),
        max_event_length: 10,
    };
    let mut points = 0;
    for seed in 0..600 {
        let mut r = rng(1_000 + seed);
        let inst = random_instance(&mut r, &shape);
        let oracle = values_per_start(&inst, &EventSchedule::new(), 0);
        let best = *oracle.iter().max().unwrap();
        let (t, value) = best_placement(&inst).unwrap();
        check(value == best, || format!("seed {seed}: best_placement {value}, oracle max {best}"))?;
        check(oracle[(t - 1) as usize] == best, || format!("seed {seed}: start {t} does not attain {best}"))?;
        let sol = solve_one_event(
            inst.agents.iter().map(|a| a.jobs.as_slice()),
            inst.events[0].length,
            inst.timeline_length,
        )
        .unwrap();
        for (i, &v) in oracle.iter().enumerate() {
            let t = i as Slot + 1;
            let c = sol.curve.eval(t);
            check(c == Some(v), || format!("seed {seed}: curve({t}) = {c:?}, oracle {v}"))?;
            points += 1;
        }
    }
    Ok(format!("600 instances, {points} curve points"))
}

fn approximation_bound() -> Outcome {
    let shape = Shape {
        max_timeline: 12,
        max_agents: 3,
        max_jobs: 4,
        events: (1, 3),
        max_event_length: 5,
    };
    let opts = SolveOptions::default();
    let mut worst = f64::INFINITY;
    for seed in 0..320 {
        let mut r = rng(2_000 + seed);
        let inst = random_instance(&mut r, &shape);
        let (_, opt) = brute_optimum(&inst).unwrap();
        for (name, report) in [("greedy_poly_t", greedy_poly_t(&inst, &opts)), ("solve_general", solve_general(&inst, &opts))] {
            let total = report.map_err(|e| format!("seed {seed}: {name}: {e}"))?.total;
            check(2 * total >= opt, || format!("seed {seed}: {name} total {total} < OPT {opt} / 2"))?;
            check(total <= opt, || format!("seed {seed}: {name} total {total} exceeds OPT {opt}"))?;
            if opt > 0 {
                worst = worst.min(total as f64 / opt as f64);
            }
        }
    }
    Ok(format!("320 instances, worst ratio {worst:.3}"))
}

fn submodularity() -> Outcome {
    let shape = Shape {
        max_timeline: 12,
        max_agents: 3,
        max_jobs: 4,
        events: (0, 0),
        max_event_length: 1,
    };
    for trial in 0..1_200 {
        let mut r = rng(3_000 + trial);
        let inst = random_instance(&mut r, &shape);
        let t = inst.timeline_length;
        let ground: Vec<(Slot, i64)> = (0..6)
            .map(|_| {
                let l = r.gen_range(1..=t.min(5));
                (r.gen_range(1..=t - l + 1), l)
            })
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let s = random_subset(&mut r, &ground);
        let h = random_subset(&mut r, &ground);
        let union: Vec<_> = s.iter().chain(&h).copied().collect::<BTreeSet<_>>().into_iter().collect();
        let inter: Vec<_> = s.iter().filter(|x| h.contains(x)).copied().collect();
        let lhs = agreement_of_ranges(&inst, &s) + agreement_of_ranges(&inst, &h);
        let rhs = agreement_of_ranges(&inst, &union) + agreement_of_ranges(&inst, &inter);
        check(lhs >= rhs, || format!("trial {trial}: {lhs} < {rhs}"))?;
    }
    Ok("1200 triples, no violation".into())
}

fn matroid_axioms() -> Outcome {
    let mut exchanges = 0;
    for trial in 0..1_200 {
        let mut r = rng(4_000 + trial);
        let t = r.gen_range(1..=10);
        let jobs = random_small_jobs(&mut r, t, 8);
        let m = SchedulingMatroid::new(&jobs, t).unwrap();
        let all: Vec<Slot> = (1..=t).collect();
        let a = m.max_independent_subset(&shuffled(&mut r, &all).into_iter().take(r.gen_range(0..=t as usize)).collect());
        let b = m.max_independent_subset(&all.iter().copied().filter(|_| r.gen_bool(0.7)).collect());
        check(m.is_independent(&BTreeSet::new()), || format!("trial {trial}: empty set dependent"))?;
        let items: Vec<Slot> = a.iter().copied().collect();
        for mask in 0u32..(1 << items.len()) {
            let sub: BTreeSet<Slot> = items.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &x)| x).collect();
            check(m.is_independent(&sub), || format!("trial {trial}: subset {sub:?} of independent {a:?} is dependent"))?;
        }
        let (small, large) = if a.len() < b.len() { (&a, &b) } else { (&b, &a) };
        if small.len() < large.len() {
            let x = m
                .exchange_witness(small, large)
                .map_err(|e| format!("trial {trial}: {e} for {small:?} / {large:?}"))?;
            let mut grown = small.clone();
            grown.insert(x);
            check(large.contains(&x) && !small.contains(&x) && m.is_independent(&grown), || {
                format!("trial {trial}: bad witness {x}")
            })?;
            exchanges += 1;
        }
    }
    for trial in 0..250 {
        let mut r = rng(5_000 + trial);
        let t = r.gen_range(2..=10);
        let jobs = random_small_jobs(&mut r, t, 8);
        let m = SchedulingMatroid::new(&jobs, t).unwrap();
        let span = |r: &mut rand_chacha::ChaCha8Rng| {
            let l = r.gen_range(1..=t.min(4));
            let s = r.gen_range(1..=t - l + 1);
            SlotRange::new(s, s + l - 1)
        };
        let st_s = slots_of(&[span(&mut r), span(&mut r)]);
        let st_h = slots_of(&[span(&mut r), span(&mut r)]);
        let f = m.max_independent_subset(&st_s);
        let b = m.freeze(&f).unwrap().max_independent_subset(&st_h);
        let union: BTreeSet<Slot> = st_s.union(&st_h).copied().collect();
        let rank = m.rank(&union);
        check(rank == f.len() + b.len(), || {
            format!("trial {trial}: rank {rank} != |F| {} + |B| {}", f.len(), b.len())
        })?;
    }
    Ok(format!("1200 axiom trials ({exchanges} exchanges), 250 stability trials"))
}

fn hardness_family() -> Outcome {
    let opts = SolveOptions::default();
    let (mut yes, mut no) = (0, 0);
    for sum in (2..=12).step_by(2) {
        for multiset in multisets_with_sum(sum) {
            let q = (sum / 2) as i64;
            let inst = gen_partition(&multiset).unwrap();
            let (_, opt) = brute_optimum(&inst).map_err(|e| format!("{multiset:?}: {e}"))?;
            let partition = has_equal_partition(&multiset);
            check((opt == 2 * q) == partition, || {
                format!("{multiset:?}: optimum {opt}, equal partition {partition}")
            })?;
            if partition {
                yes += 1;
                for (name, report) in [("greedy_poly_t", greedy_poly_t(&inst, &opts)), ("solve_general", solve_general(&inst, &opts))] {
                    let total = report.map_err(|e| format!("{multiset:?}: {name}: {e}"))?.total;
                    check(total >= q, || format!("{multiset:?}: {name} total {total} < Q {q}"))?;
                }
            } else {
                no += 1;
            }
        }
    }
    Ok(format!("{yes} partitionable and {no} non-partitionable multisets"))
}

fn scale() -> Outcome {
    let spec = GenSpec {
        seed: 2024,
        agents: 20,
        events: 10,
        timeline_length: 1_000_000_000,
        jobs_per_agent: (15, 15),
        event_length: (1, 50_000_000),
        mix: FlexibilityMix::default(),
    };
    let inst = gen_random(&spec).unwrap();
    let clock = Instant::now();
    let report = solve_general(&inst, &SolveOptions::default()).map_err(|e| e.to_string())?;
    let elapsed = clock.elapsed();
    check(report.slot_evaluations == 0, || format!("{} slot evaluations", report.slot_evaluations))?;
    check(elapsed < Duration::from_secs(5), || format!("took {elapsed:?}"))?;
    check(report.schedule.is_complete(10), || "incomplete schedule".into())?;
    let recomputed = total_agreement(&inst, &report.schedule).unwrap();
    check(recomputed == report.total, || format!("total {} != recomputed {recomputed}", report.total))?;
    Ok(format!("total {} in {:.3} s, 0 slot evaluations", report.total, elapsed.as_secs_f64()))
}

fn bi_edf_optimality() -> Outcome {
    let shape = Shape {
        max_timeline: 14,
        max_agents: 1,
        max_jobs: 5,
        events: (1, 1),
        max_event_length: 6,
    };
    for trial in 0..600 {
        let mut r = rng(6_000 + trial);
        let inst = random_instance(&mut r, &shape);
        let agent = &inst.agents[0];
        let horizon = inst.timeline_length;
        let l = inst.events[0].length;
        let t = r.gen_range(1..=horizon - l + 1);
        let partition = edf_partition(&agent.jobs, horizon).unwrap();
        let pivot = partition.segments.iter().find(|s| s.range.contains(t)).unwrap().job;
        let pi_bar = reverse_release_order(&agent.jobs);
        let js = bi_edf_schedule(t, &agent.jobs, horizon, &partition.order, &pi_bar, pivot).unwrap();
        check(js.is_feasible_for(&agent.jobs), || format!("trial {trial}: infeasible bi-EDF schedule"))?;
        let s = inst.schedule(&[(0, t)]).unwrap();
        let got = js.agreement(&s);
        let best = brute_agreement(agent, &s, horizon).unwrap();
        check(got == best, || format!("trial {trial}: bi-EDF agreement {got}, optimum {best}"))?;
    }
    let mut stability = 0;
    let mut trial = 0;
    while stability < 250 {
        trial += 1;
        let mut r = rng(7_000 + trial);
        let inst = random_instance(&mut r, &shape);
        let jobs = &inst.agents[0].jobs;
        let horizon = inst.timeline_length;
        let partition = edf_partition(jobs, horizon).unwrap();
        let owned: Vec<_> = partition.segments.iter().filter(|s| s.job.is_some()).collect();
        if owned.is_empty() {
            continue;
        }
        let seg = owned[r.gen_range(0..owned.len())];
        let t1 = r.gen_range(seg.range.lo..=seg.range.hi);
        let t2 = r.gen_range(seg.range.lo..=seg.range.hi);
        let pi_bar = reverse_release_order(jobs);
        let a = bi_edf_schedule(t1, jobs, horizon, &partition.order, &pi_bar, seg.job).unwrap();
        let b = bi_edf_schedule(t2, jobs, horizon, &partition.order, &pi_bar, seg.job).unwrap();
        let differing: Vec<usize> = (0..jobs.len())
            .filter(|&j| a.runs_of(j).collect::<Vec<_>>() != b.runs_of(j).collect::<Vec<_>>())
            .collect();
        check(differing.iter().all(|&j| Some(j) == seg.job), || {
            format!("trial {trial}: starts {t1} and {t2} change jobs {differing:?}")
        })?;
        stability += 1;
    }
    Ok("600 placements optimal, 250 segment pairs stable".into())
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome, Duration); 9] = [
        ("golden instance", golden_instance, Duration::from_secs(1)),
        ("flow oracle equivalence", flow_matches_brute_force, Duration::from_secs(30)),
        ("one-event exactness", one_event_exactness, Duration::from_secs(60)),
        ("approximation bound", approximation_bound, Duration::from_secs(120)),
        ("submodularity", submodularity, Duration::from_secs(120)),
        ("matroid axioms and stability", matroid_axioms, Duration::from_secs(120)),
        ("partition family", hardness_family, Duration::from_secs(120)),
        ("timeline of 10^9 slots", scale, Duration::from_secs(5)),
        ("bidirectional EDF optimality", bi_edf_optimality, Duration::from_secs(120)),
    ];
    let mut failed = 0;
    for (i, (name, run, limit)) in criteria.into_iter().enumerate() {
        let clock = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        let elapsed = clock.elapsed();
        let outcome = outcome.and_then(|detail| {
            if elapsed < limit {
                Ok(detail)
            } else {
                Err(format!("{detail}; took {elapsed:?}, limit {limit:?}"))
            }
        });
        match outcome {
            Ok(detail) => println!("PASS {}. {name}: {detail} ({:.2} s)", i + 1, elapsed.as_secs_f64()),
            Err(detail) => {
                failed += 1;
                println!("FAIL {}. {name}: {detail} ({:.2} s)", i + 1, elapsed.as_secs_f64());
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
