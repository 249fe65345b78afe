//! The single-machine solver family: standard greedy, lazy greedy,
//! constrained greedy, cost-benefit greedy for knapsacks, and the
//! randomized greedy for non-monotone objectives.
//!
//! Tie-breaking is globally fixed to the smallest element id. That makes
//! every deterministic engine reproducible and lets the lazy variant be
//! checked for bit-identical output against the standard one.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use rand::Rng as _;

use crate::constraints::{Cardinality, Constraint, Knapsack};
use crate::error::{Error, Result};
use crate::objective::{Objective, Solution};
use crate::rng::Rng;
use crate::set::{ElementId, ElementSet};

/// Approximation factors claimed by the shipped engines, used only by the
/// bound checkers.
pub mod tau {
    /// Greedy under a cardinality constraint (monotone objectives).
    pub const CARDINALITY_GREEDY: f64 = 1.0 - 1.0 / std::f64::consts::E;
    /// Greedy until stuck under a single matroid (monotone objectives).
    pub const SINGLE_MATROID_GREEDY: f64 = 0.5;
    /// Greedy until stuck under a p-system (monotone objectives).
    pub fn p_system_greedy(p: usize) -> f64 {
        1.0 / (p as f64 + 1.0)
    }
    /// Better-of-two rule (plain and benefit/cost greedy) under a knapsack.
    pub fn knapsack_max_rule() -> f64 {
        1.0 - 1.0 / std::f64::consts::E.sqrt()
    }
    /// Randomized greedy on nonnegative non-monotone objectives.
    pub const RANDOM_GREEDY_NONMONOTONE: f64 = 1.0 / std::f64::consts::E;
}

fn finish(
    f: &dyn Objective,
    elements: Vec<ElementId>,
    evaluator_calls: u64,
    provenance: &str,
) -> Solution {
    // one direct evaluation pins the reported value to the element set
    let value = f.value(&ElementSet::from_slice(&elements));
    Solution {
        elements,
        value,
        oracle_calls: evaluator_calls + 1,
        provenance: provenance.to_string(),
    }
}

fn check_budget(constraint: &dyn Constraint, budget: usize) -> Result<()> {
    if budget > constraint.rho() {
        return Err(Error::InvalidParameter(format!(
            "budget {budget} exceeds the constraint capacity {}",
            constraint.rho()
        )));
    }
    Ok(())
}

/// Standard greedy: repeatedly add the feasible element of maximum marginal
/// gain (smallest id on ties) until `budget` elements are selected or no
/// feasible candidate remains. Monotone objectives fill the budget through
/// zero gains; non-monotone ones stop at the first all-negative round.
pub fn greedy(
    f: &dyn Objective,
    constraint: &dyn Constraint,
    candidates: &[ElementId],
    budget: usize,
) -> Result<Solution> {
    check_budget(constraint, budget)?;
    let mut ev = f.evaluator();
    let mut chosen: Vec<ElementId> = Vec::new();
    let monotone = f.monotone();
    while chosen.len() < budget {
        let mut best: Option<(f64, ElementId)> = None;
        for &e in candidates {
            if ev.selection().contains(e) || !constraint.can_extend(ev.selection(), e) {
                continue;
            }
            let g = ev.gain(e);
            if best.is_none_or(|(bg, be)| beats(g, e, bg, be)) {
                best = Some((g, e));
            }
        }
        match best {
            None => break,
            Some((g, e)) => {
                if g < 0.0 && !monotone {
                    break;
                }
                ev.accept(e);
                chosen.push(e);
            }
        }
    }
    let calls = ev.calls();
    drop(ev);
    Ok(finish(f, chosen, calls, "greedy"))
}

/// (gain, id) dominance: larger gain wins, ties go to the smaller id. Uses
/// the same total order on f64 as the lazy heap so the two engines can
/// never disagree.
#[inline]
pub(crate) fn beats(gain: f64, id: ElementId, best_gain: f64, best_id: ElementId) -> bool {
    match gain.total_cmp(&best_gain) {
        Ordering::Greater => true,
        Ordering::Equal => id < best_id,
        Ordering::Less => false,
    }
}

#[derive(Debug)]
struct LazyEntry {
    gain: f64,
    id: ElementId,
    /// Iteration at which this gain was computed; stale bounds remain valid
    /// upper bounds under submodularity.
    stamp: usize,
}

impl PartialEq for LazyEntry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for LazyEntry {}
impl PartialOrd for LazyEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for LazyEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        // max-heap: larger gain first, then smaller id
        self.gain
            .total_cmp(&other.gain)
            .then_with(|| other.id.cmp(&self.id))
    }
}

/// Lazy greedy: identical selections to [`greedy`] (same tie-breaking) with
/// at most as many oracle calls. Requires a submodular objective so that
/// cached gains are valid upper bounds.
pub fn lazy_greedy(
    f: &dyn Objective,
    constraint: &dyn Constraint,
    candidates: &[ElementId],
    budget: usize,
) -> Result<Solution> {
    check_budget(constraint, budget)?;
    let mut ev = f.evaluator();
    let mut chosen: Vec<ElementId> = Vec::new();
    let monotone = f.monotone();

    let mut heap = BinaryHeap::with_capacity(candidates.len());
    for &e in candidates {
        if constraint.can_extend(ev.selection(), e) {
            let gain = ev.gain(e);
            heap.push(LazyEntry { gain, id: e, stamp: 0 });
        }
    }

    let mut iteration = 0usize;
    while chosen.len() < budget {
        let Some(top) = heap.pop() else { break };
        if ev.selection().contains(top.id) || !constraint.can_extend(ev.selection(), top.id) {
            // hereditary constraints never re-admit a rejected element
            continue;
        }
        if top.stamp == iteration {
            if top.gain < 0.0 && !monotone {
                break;
            }
            ev.accept(top.id);
            chosen.push(top.id);
            iteration += 1;
        } else {
            let gain = ev.gain(top.id);
            heap.push(LazyEntry {
                gain,
                id: top.id,
                stamp: iteration,
            });
        }
    }
    let calls = ev.calls();
    drop(ev);
    Ok(finish(f, chosen, calls, "lazy_greedy"))
}

/// Greedy restricted to feasible extensions, running until no element can
/// be added. The workhorse for matroid and p-system constraints.
pub fn constrained_greedy(
    f: &dyn Objective,
    constraint: &dyn Constraint,
    candidates: &[ElementId],
) -> Result<Solution> {
    let mut sol = greedy(f, constraint, candidates, constraint.rho())?;
    sol.provenance = "constrained_greedy".to_string();
    Ok(sol)
}

/// Better-of-two knapsack rule: run plain greedy by gain over the still
/// affordable elements, run benefit/cost greedy likewise, return the more
/// valuable solution. An unaffordable budget yields an empty solution.
pub fn cost_benefit_greedy(
    f: &dyn Objective,
    knapsack: &Knapsack,
    candidates: &[ElementId],
) -> Result<Solution> {
    let by_gain = knapsack_pass(f, knapsack, candidates, false);
    let by_ratio = knapsack_pass(f, knapsack, candidates, true);
    let mut sol = if by_ratio.value > by_gain.value {
        by_ratio
    } else {
        by_gain
    };
    sol.provenance = "cost_benefit_greedy".to_string();
    Ok(sol)
}

fn knapsack_pass(
    f: &dyn Objective,
    knapsack: &Knapsack,
    candidates: &[ElementId],
    by_ratio: bool,
) -> Solution {
    let mut ev = f.evaluator();
    let mut chosen: Vec<ElementId> = Vec::new();
    let monotone = f.monotone();
    loop {
        let mut best: Option<(f64, f64, ElementId)> = None; // (score, gain, id)
        for &e in candidates {
            if ev.selection().contains(e) || !knapsack.can_extend(ev.selection(), e) {
                continue;
            }
            let gain = ev.gain(e);
            let score = if by_ratio {
                gain / knapsack.scalarized_cost(e)
            } else {
                gain
            };
            if best.is_none_or(|(bs, _, be)| beats(score, e, bs, be)) {
                best = Some((score, gain, e));
            }
        }
        match best {
            None => break,
            Some((_, gain, e)) => {
                if gain < 0.0 && !monotone {
                    break;
                }
                ev.accept(e);
                chosen.push(e);
            }
        }
    }
    let calls = ev.calls();
    drop(ev);
    finish(f, chosen, calls, "knapsack_pass")
}

/// Randomized greedy for nonnegative (possibly non-monotone) objectives.
///
/// Each of the `rho` rounds ranks the feasible candidates with positive
/// marginal gain, keeps the top `rho` of them padded with zero-gain dummy
/// slots, and admits one uniformly at random; drawing a dummy leaves the
/// solution unchanged that round.
pub fn random_greedy(
    f: &dyn Objective,
    constraint: &dyn Constraint,
    candidates: &[ElementId],
    rng: &mut Rng,
) -> Solution {
    let rounds = constraint.rho();
    let mut ev = f.evaluator();
    let mut chosen: Vec<ElementId> = Vec::new();
    for _ in 0..rounds {
        let mut ranked: Vec<(f64, ElementId)> = Vec::new();
        for &e in candidates {
            if ev.selection().contains(e) || !constraint.can_extend(ev.selection(), e) {
                continue;
            }
            let g = ev.gain(e);
            if g > 0.0 {
                ranked.push((g, e));
            }
        }
        ranked.sort_by(|a, b| b.0.total_cmp(&a.0).then_with(|| a.1.cmp(&b.1)));
        ranked.truncate(rounds);
        // indices >= ranked.len() are the dummy slots
        let pick = rng.random_range(0..rounds);
        if pick < ranked.len() {
            let (_, e) = ranked[pick];
            ev.accept(e);
            chosen.push(e);
        }
    }
    let calls = ev.calls();
    drop(ev);
    finish(f, chosen, calls, "random_greedy")
}

/// Engine selection keyword, as it appears in configs and on the CLI.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EngineKind {
    Greedy,
    Lazy,
    CostBenefit,
    RandomGreedy,
    Constrained,
}

impl EngineKind {
    pub fn name(&self) -> &'static str {
        match self {
            EngineKind::Greedy => "greedy",
            EngineKind::Lazy => "lazy",
            EngineKind::CostBenefit => "costbenefit",
            EngineKind::RandomGreedy => "randomgreedy",
            EngineKind::Constrained => "constrained",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "greedy" => Ok(EngineKind::Greedy),
            "lazy" => Ok(EngineKind::Lazy),
            "costbenefit" => Ok(EngineKind::CostBenefit),
            "randomgreedy" => Ok(EngineKind::RandomGreedy),
            "constrained" => Ok(EngineKind::Constrained),
            other => Err(Error::UnknownKind(format!("engine {other:?}"))),
        }
    }

    /// Whether two runs with the same inputs can differ (i.e. the engine
    /// consumes randomness).
    pub fn randomized(&self) -> bool {
        matches!(self, EngineKind::RandomGreedy)
    }

    /// Run the engine over the candidate pool, filling the constraint.
    pub fn solve(
        &self,
        f: &dyn Objective,
        constraint: &dyn Constraint,
        candidates: &[ElementId],
        rng: &mut Rng,
    ) -> Result<Solution> {
        match self {
            EngineKind::Greedy => greedy(f, constraint, candidates, constraint.rho()),
            EngineKind::Lazy => lazy_greedy(f, constraint, candidates, constraint.rho()),
            EngineKind::Constrained => constrained_greedy(f, constraint, candidates),
            EngineKind::CostBenefit => {
                let knapsack = constraint.as_knapsack().ok_or_else(|| {
                    Error::InvalidParameter(
                        "the costbenefit engine needs a knapsack constraint".into(),
                    )
                })?;
                cost_benefit_greedy(f, knapsack, candidates)
            }
            EngineKind::RandomGreedy => Ok(random_greedy(f, constraint, candidates, rng)),
        }
    }
}

/// Greedy under a plain cardinality budget; the most common entry point.
pub fn greedy_cardinality(f: &dyn Objective, candidates: &[ElementId], k: usize) -> Result<Solution> {
    let c = Cardinality::new(k.max(1))?;
    if k == 0 {
        return Ok(Solution::empty(f, "greedy"));
    }
    greedy(f, &c, candidates, k)
}

/// Lazy greedy under a plain cardinality budget.
pub fn lazy_greedy_cardinality(
    f: &dyn Objective,
    candidates: &[ElementId],
    k: usize,
) -> Result<Solution> {
    let c = Cardinality::new(k.max(1))?;
    if k == 0 {
        return Ok(Solution::empty(f, "lazy_greedy"));
    }
    lazy_greedy(f, &c, candidates, k)
}
