//! Greedy maximization of a monotone submodular function when the ground set
//! is split into groups and at most one element per group may be chosen.
//!
//! The groups are never enumerated here. A [`MarginalOracle`] proposes one
//! element of a group for the current selection; the greedy keeps, in every
//! round, the proposal with the largest realized marginal. With an oracle
//! whose proposals are within a factor `alpha` of the best marginal in their
//! group, the result is within `1 / (alpha + 1)` of the optimum.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::cell::{Cell, RefCell};

use crate::error::{Error, Result};

/// A set function on selections given as element slices (order irrelevant).
pub trait SetFunction<E> {
    fn value(&self, selection: &[E]) -> i64;
}

impl<E, F: Fn(&[E]) -> i64> SetFunction<E> for F {
    fn value(&self, selection: &[E]) -> i64 {
        self(selection)
    }
}

/// Caches values by the sorted selection and counts queries and misses.
pub struct Memoized<E, F> {
    inner: F,
    cache: RefCell<BTreeMap<Vec<E>, i64>>,
    queries: Cell<u64>,
    evaluations: Cell<u64>,
}

impl<E: Clone + Ord, F: SetFunction<E>> Memoized<E, F> {
    pub fn new(inner: F) -> Self {
        Memoized {
            inner,
            cache: RefCell::new(BTreeMap::new()),
            queries: Cell::new(0),
            evaluations: Cell::new(0),
        }
    }

    pub fn inner(&self) -> &F {
        &self.inner
    }

    pub fn queries(&self) -> u64 {
        self.queries.get()
    }

    /// Number of calls that reached the wrapped function.
    pub fn evaluations(&self) -> u64 {
        self.evaluations.get()
    }
}

impl<E: Clone + Ord, F: SetFunction<E>> SetFunction<E> for Memoized<E, F> {
    fn value(&self, selection: &[E]) -> i64 {
        self.queries.set(self.queries.get() + 1);
        let mut key = selection.to_vec();
        key.sort();
        if let Some(&v) = self.cache.borrow().get(&key) {
            return v;
        }
        self.evaluations.set(self.evaluations.get() + 1);
        let v = self.inner.value(&key);
        self.cache.borrow_mut().insert(key, v);
        v
    }
}

/// Proposes an element of a group given the current selection.
pub trait MarginalOracle<E> {
    fn group_count(&self) -> usize;
    fn group_of(&self, element: &E) -> Option<usize>;
    fn propose(&mut self, selection: &[E], group: usize) -> Result<E>;
}

/// Explicitly listed groups.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupedGround<E> {
    pub groups: Vec<Vec<E>>,
}

impl<E: PartialEq> GroupedGround<E> {
    pub fn group_of(&self, element: &E) -> Option<usize> {
        self.groups.iter().position(|g| g.contains(element))
    }
}

/// Scans a listed group for the largest marginal; ties go to the earlier element.
pub struct ExactOracle<'a, E, F> {
    pub ground: &'a GroupedGround<E>,
    pub f: &'a F,
}

impl<E: Clone + PartialEq, F: SetFunction<E>> MarginalOracle<E> for ExactOracle<'_, E, F> {
    fn group_count(&self) -> usize {
        self.ground.groups.len()
    }

    fn group_of(&self, element: &E) -> Option<usize> {
        self.ground.group_of(element)
    }

    fn propose(&mut self, selection: &[E], group: usize) -> Result<E> {
        let mut probe = selection.to_vec();
        let mut best: Option<(i64, &E)> = None;
        for e in &self.ground.groups[group] {
            probe.push(e.clone());
            let v = self.f.value(&probe);
            probe.pop();
            if best.map_or(true, |(b, _)| v > b) {
                best = Some((v, e));
            }
        }
        best.map(|(_, e)| e.clone()).ok_or(Error::OracleContractViolation { group })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GreedyRound<E> {
    pub group: usize,
    pub element: E,
    pub marginal: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GreedyOutcome<E> {
    pub selection: Vec<E>,
    pub value: i64,
    pub rounds: Vec<GreedyRound<E>>,
    pub oracle_calls: u64,
}

/// Runs `min(k, group count)` rounds. Each round asks the oracle once per
/// untouched group and commits the proposal with the largest marginal, the
/// lowest group index winning ties. Zero marginals are committed as well.
pub fn greedy<E, F, O>(f: &F, oracle: &mut O, k: usize) -> Result<GreedyOutcome<E>>
where
    E: Clone,
    F: SetFunction<E>,
    O: MarginalOracle<E>,
{
    let groups = oracle.group_count();
    let mut used = vec![false; groups];
    let mut selection: Vec<E> = Vec::new();
    let mut value = f.value(&selection);
    let mut rounds = Vec::new();
    let mut oracle_calls = 0;
    for _ in 0..k.min(groups) {
        let mut best: Option<(i64, usize, E)> = None;
        for g in (0..groups).filter(|&g| !used[g]) {
            oracle_calls += 1;
            let e = oracle.propose(&selection, g)?;
            if oracle.group_of(&e) != Some(g) {
                return Err(Error::OracleContractViolation { group: g });
            }
            selection.push(e);
            let v = f.value(&selection);
            let e = selection.pop().expect("just pushed");
            if best.as_ref().map_or(true, |(b, _, _)| v > *b) {
                best = Some((v, g, e));
            }
        }
        let (v, g, e) = best.expect("an untouched group remains");
        used[g] = true;
        rounds.push(GreedyRound {
            group: g,
            element: e.clone(),
            marginal: v - value,
        });
        selection.push(e);
        value = v;
    }
    Ok(GreedyOutcome {
        selection,
        value,
        rounds,
        oracle_calls,
    })
}
