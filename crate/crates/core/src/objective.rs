//! The submodular-oracle abstraction and solution bookkeeping.
//!
//! An [`Objective`] is an immutable set function `f : 2^V -> R`. All solver
//! work flows through either an [`Oracle`] (a counting wrapper used for
//! one-off evaluations) or an [`Evaluator`] (per-engine incremental state
//! that makes repeated marginal-gain queries cheap). One oracle call is one
//! evaluation of `f` — or one cached gain computation standing in for it —
//! and is the cost unit for engine efficiency.

use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering};

use crate::error::{Error, Result};
use crate::set::{ElementId, ElementSet, GroundSet};

/// Absolute tolerance for "equal objective values" throughout the crate.
/// Log-determinant objectives accumulate rounding, so exact comparison is
/// out; anything tighter than this is treated as equal.
pub const VALUE_TOL: f64 = 1e-9;

/// An immutable set function over a ground set.
///
/// Implementations must be deterministic per instance and safe to evaluate
/// concurrently. `value(&empty)` is always computed, never assumed zero.
pub trait Objective: Send + Sync {
    fn ground(&self) -> &GroundSet;

    /// Evaluate `f(S)` from scratch.
    fn value(&self, s: &ElementSet) -> f64;

    /// Claimed monotone: `f(A) <= f(B)` for `A ⊆ B`.
    fn monotone(&self) -> bool;

    /// Claimed nonnegative: `f(A) >= 0` for all `A`.
    fn nonnegative(&self) -> bool;

    /// Incremental evaluator. The default recomputes from a cached `f(S)`;
    /// objectives with cheaper marginal structure override this.
    fn evaluator(&self) -> Box<dyn Evaluator + '_> {
        Box::new(NaiveEvaluator::new(self))
    }

    /// Machine-local view of the objective restricted to `block`, for
    /// protocols that evaluate locally (e.g. cut functions scored on the
    /// induced subgraph of a partition). `None` when the objective has no
    /// meaningful local restriction.
    fn local_restriction(&self, _block: &[ElementId]) -> Option<Box<dyn Objective>> {
        None
    }

    fn n(&self) -> usize {
        self.ground().len()
    }
}

/// Counting wrapper: every evaluation routed through it bumps an atomic
/// counter, so accounting stays exact under concurrent use.
pub struct Oracle<'a> {
    f: &'a dyn Objective,
    calls: AtomicU64,
}

impl<'a> Oracle<'a> {
    pub fn new(f: &'a dyn Objective) -> Self {
        Oracle {
            f,
            calls: AtomicU64::new(0),
        }
    }

    pub fn objective(&self) -> &'a dyn Objective {
        self.f
    }

    /// `f(S)`, counted.
    pub fn eval(&self, s: &ElementSet) -> f64 {
        self.calls.fetch_add(1, Ordering::Relaxed);
        self.f.value(s)
    }

    /// `f(S ∪ {e}) − f(S)`, counted as the evaluations performed.
    /// Errors if `e` is already in `S`.
    pub fn marginal_gain(&self, s: &ElementSet, e: ElementId) -> Result<f64> {
        if s.contains(e) {
            return Err(Error::AlreadySelected(e));
        }
        let base = self.eval(s);
        let mut extended = s.clone();
        extended.insert(e);
        Ok(self.eval(&extended) - base)
    }

    pub fn calls(&self) -> u64 {
        self.calls.load(Ordering::Relaxed)
    }
}

/// Incremental gain/accept interface used by every engine.
///
/// The evaluator owns the working set `S` and a cached `f(S)`. `gain` and
/// each underlying fresh evaluation count as one oracle call.
pub trait Evaluator {
    /// Cached `f(S)` for the current working set.
    fn value(&self) -> f64;

    fn selection(&self) -> &ElementSet;

    /// Marginal gain `f(S ∪ {e}) − f(S)`; does not modify `S`.
    fn gain(&mut self, e: ElementId) -> f64;

    /// Commit `e` into `S` and update the cached value.
    fn accept(&mut self, e: ElementId);

    /// Oracle calls performed so far (including the initial `f(∅)`).
    fn calls(&self) -> u64;
}

/// Fallback evaluator: one fresh evaluation per gain query, with `f(S)`
/// cached so a gain costs a single call.
pub struct NaiveEvaluator<'a, F: Objective + ?Sized> {
    f: &'a F,
    set: ElementSet,
    value: f64,
    calls: u64,
    round_gains: HashMap<ElementId, f64>,
}

impl<'a, F: Objective + ?Sized> NaiveEvaluator<'a, F> {
    pub fn new(f: &'a F) -> Self {
        let set = ElementSet::new();
        let value = f.value(&set);
        NaiveEvaluator {
            f,
            set,
            value,
            calls: 1,
            round_gains: HashMap::new(),
        }
    }
}

impl<F: Objective + ?Sized> Evaluator for NaiveEvaluator<'_, F> {
    fn value(&self) -> f64 {
        self.value
    }

    fn selection(&self) -> &ElementSet {
        &self.set
    }

    fn gain(&mut self, e: ElementId) -> f64 {
        debug_assert!(!self.set.contains(e));
        self.set.insert(e);
        let extended = self.f.value(&self.set);
        self.set.remove(e);
        self.calls += 1;
        let g = extended - self.value;
        self.round_gains.insert(e, g);
        g
    }

    fn accept(&mut self, e: ElementId) {
        let g = match self.round_gains.get(&e) {
            Some(&g) => g,
            None => self.gain(e),
        };
        self.set.insert(e);
        self.value += g;
        self.round_gains.clear();
    }

    fn calls(&self) -> u64 {
        self.calls
    }
}

/// An ordered selection with its objective value and accounting trail.
#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    /// Selected elements in acceptance order; pairwise distinct.
    pub elements: Vec<ElementId>,
    /// Objective value of the selected set.
    pub value: f64,
    /// Oracle calls spent producing this solution.
    pub oracle_calls: u64,
    /// Label of the producing algorithm.
    pub provenance: String,
}

impl Solution {
    pub fn empty(f: &dyn Objective, provenance: &str) -> Self {
        let set = ElementSet::new();
        Solution {
            elements: Vec::new(),
            value: f.value(&set),
            oracle_calls: 1,
            provenance: provenance.to_string(),
        }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn element_set(&self) -> ElementSet {
        ElementSet::from_slice(&self.elements)
    }

    /// First `k` accepted elements, re-evaluated under `f`.
    pub fn truncated(&self, k: usize, f: &dyn Objective) -> Solution {
        if self.elements.len() <= k {
            return self.clone();
        }
        let elements: Vec<ElementId> = self.elements[..k].to_vec();
        let value = f.value(&ElementSet::from_slice(&elements));
        Solution {
            elements,
            value,
            oracle_calls: self.oracle_calls + 1,
            provenance: self.provenance.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::objectives::Modular;

    #[test]
    fn oracle_counts_every_eval() {
        let f = Modular::new(vec![1.0, 2.0, 3.0]);
        let oracle = Oracle::new(&f);
        let s = ElementSet::from_slice(&[0]);
        oracle.eval(&s);
        let g = oracle.marginal_gain(&s, 2).unwrap();
        assert_eq!(g, 3.0);
        assert_eq!(oracle.calls(), 3);
    }

    #[test]
    fn marginal_gain_rejects_member() {
        let f = Modular::new(vec![1.0, 2.0]);
        let oracle = Oracle::new(&f);
        let s = ElementSet::from_slice(&[1]);
        assert!(matches!(
            oracle.marginal_gain(&s, 1),
            Err(Error::AlreadySelected(1))
        ));
    }

    #[test]
    fn naive_evaluator_tracks_value() {
        let f = Modular::new(vec![5.0, 1.0, 3.0]);
        let mut ev = f.evaluator();
        assert_eq!(ev.value(), 0.0);
        assert_eq!(ev.gain(0), 5.0);
        ev.accept(0);
        assert_eq!(ev.value(), 5.0);
        assert_eq!(ev.gain(2), 3.0);
        ev.accept(2);
        assert_eq!(ev.value(), 8.0);
        // f(emptyset) + one gain eval per query
        assert_eq!(ev.calls(), 3);
    }
}
