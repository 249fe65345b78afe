//! Feasibility oracles for the supported constraint classes, each exposing
//! the capacity bound `rho` (the size of the largest feasible set) used by
//! the distributed bounds.

use crate::error::{Error, Result};
use crate::rng::Rng;
use crate::set::{ElementId, ElementSet};
use rand::seq::SliceRandom;
use rand::Rng as _;

/// An independence/feasibility oracle. All shipped implementations are
/// hereditary: every subset of a feasible set is feasible, and
/// `can_extend(S, e)` agrees with `is_feasible(S + e)`.
pub trait Constraint: Send + Sync {
    fn is_feasible(&self, s: &ElementSet) -> bool;

    fn can_extend(&self, s: &ElementSet, e: ElementId) -> bool;

    /// Upper bound on the size of any feasible set.
    fn rho(&self) -> usize;

    /// Some(k) when the constraint is exactly `|S| <= k`.
    fn cardinality_limit(&self) -> Option<usize> {
        None
    }

    /// Downcast hook for the knapsack-specific engine.
    fn as_knapsack(&self) -> Option<&Knapsack> {
        None
    }
}

/// `|S| <= k`.
#[derive(Debug, Clone)]
pub struct Cardinality {
    k: usize,
}

impl Cardinality {
    pub fn new(k: usize) -> Result<Self> {
        if k < 1 {
            return Err(Error::InvalidParameter("cardinality bound must be >= 1".into()));
        }
        Ok(Cardinality { k })
    }

    pub fn k(&self) -> usize {
        self.k
    }
}

impl Constraint for Cardinality {
    fn is_feasible(&self, s: &ElementSet) -> bool {
        s.len() <= self.k
    }

    fn can_extend(&self, s: &ElementSet, _e: ElementId) -> bool {
        s.len() < self.k
    }

    fn rho(&self) -> usize {
        self.k
    }

    fn cardinality_limit(&self) -> Option<usize> {
        Some(self.k)
    }
}

/// No constraint beyond the ground set itself.
#[derive(Debug, Clone)]
pub struct Unconstrained {
    n: usize,
}

impl Unconstrained {
    pub fn new(n: usize) -> Self {
        Unconstrained { n }
    }
}

impl Constraint for Unconstrained {
    fn is_feasible(&self, _s: &ElementSet) -> bool {
        true
    }

    fn can_extend(&self, _s: &ElementSet, _e: ElementId) -> bool {
        true
    }

    fn rho(&self) -> usize {
        self.n
    }
}

/// At most `capacities[b]` elements from each block `b` of a partition of
/// the ground set.
#[derive(Debug, Clone)]
pub struct PartitionMatroid {
    block_of: Vec<usize>,
    capacities: Vec<usize>,
    rank: usize,
}

impl PartitionMatroid {
    /// `block_of[e]` assigns element `e` to a block; blocks are therefore
    /// disjoint and covering by construction.
    pub fn new(block_of: Vec<usize>, capacities: Vec<usize>) -> Result<Self> {
        let blocks = capacities.len();
        if blocks == 0 {
            return Err(Error::InvalidParameter("partition matroid needs >= 1 block".into()));
        }
        if let Some(&bad) = block_of.iter().find(|&&b| b >= blocks) {
            return Err(Error::InvalidParameter(format!(
                "element assigned to block {bad}, but only {blocks} capacities given"
            )));
        }
        let mut sizes = vec![0usize; blocks];
        for &b in &block_of {
            sizes[b] += 1;
        }
        let rank = sizes
            .iter()
            .zip(&capacities)
            .map(|(&sz, &cap)| sz.min(cap))
            .sum();
        Ok(PartitionMatroid {
            block_of,
            capacities,
            rank,
        })
    }

    fn counts(&self, s: &ElementSet) -> Vec<usize> {
        let mut c = vec![0usize; self.capacities.len()];
        for e in s.iter() {
            c[self.block_of[e as usize]] += 1;
        }
        c
    }
}

impl Constraint for PartitionMatroid {
    fn is_feasible(&self, s: &ElementSet) -> bool {
        let counts = self.counts(s);
        counts.iter().zip(&self.capacities).all(|(&c, &cap)| c <= cap)
    }

    fn can_extend(&self, s: &ElementSet, e: ElementId) -> bool {
        let mut counts = self.counts(s);
        counts[self.block_of[e as usize]] += 1;
        counts.iter().zip(&self.capacities).all(|(&c, &cap)| c <= cap)
    }

    fn rho(&self) -> usize {
        self.rank
    }
}

/// A matroid given only through its independence oracle. Construction
/// spot-checks heredity and augmentation on random independent sets and
/// computes the rank as the size of a greedily built maximal independent
/// set (exact for matroids, where all maximal independent sets are bases).
pub struct MatroidOracle {
    oracle: Box<dyn Fn(&ElementSet) -> bool + Send + Sync>,
    n: usize,
    rank: usize,
}

impl MatroidOracle {
    pub fn new(
        n: usize,
        oracle: Box<dyn Fn(&ElementSet) -> bool + Send + Sync>,
        spot_check_rng: &mut Rng,
    ) -> Result<Self> {
        if !oracle(&ElementSet::new()) {
            return Err(Error::MatroidProperty("the empty set must be independent".into()));
        }
        let mut rank_set = ElementSet::new();
        for e in 0..n as ElementId {
            rank_set.insert(e);
            if !oracle(&rank_set) {
                rank_set.remove(e);
            }
        }
        let rank = rank_set.len();
        spot_check(n, &oracle, spot_check_rng)?;
        Ok(MatroidOracle {
            oracle,
            n,
            rank,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }
}

fn random_independent(
    n: usize,
    oracle: &(dyn Fn(&ElementSet) -> bool + Send + Sync),
    rng: &mut Rng,
) -> ElementSet {
    let mut order: Vec<ElementId> = (0..n as ElementId).collect();
    order.shuffle(rng);
    let mut s = ElementSet::new();
    for e in order {
        if rng.random::<f64>() < 0.5 {
            s.insert(e);
            if !oracle(&s) {
                s.remove(e);
            }
        }
    }
    s
}

fn spot_check(
    n: usize,
    oracle: &(dyn Fn(&ElementSet) -> bool + Send + Sync),
    rng: &mut Rng,
) -> Result<()> {
    for _ in 0..50 {
        // heredity: random subsets of an independent set stay independent
        let s = random_independent(n, oracle, rng);
        let mut sub = ElementSet::new();
        for e in s.iter() {
            if rng.random::<f64>() < 0.5 {
                sub.insert(e);
            }
        }
        if !oracle(&sub) {
            return Err(Error::MatroidProperty(format!(
                "heredity violated: {:?} independent but subset {:?} is not",
                s.as_sorted_slice(),
                sub.as_sorted_slice()
            )));
        }

        // augmentation: a strictly larger independent set must offer an
        // element that extends the smaller one
        let t = random_independent(n, oracle, rng);
        let (small, large) = if s.len() < t.len() { (&s, &t) } else { (&t, &s) };
        if small.len() < large.len() {
            let mut extended = false;
            for e in large.iter() {
                if small.contains(e) {
                    continue;
                }
                let mut probe = small.clone();
                probe.insert(e);
                if oracle(&probe) {
                    extended = true;
                    break;
                }
            }
            if !extended {
                return Err(Error::MatroidProperty(format!(
                    "augmentation violated between {:?} and {:?}",
                    small.as_sorted_slice(),
                    large.as_sorted_slice()
                )));
            }
        }
    }
    Ok(())
}

impl Constraint for MatroidOracle {
    fn is_feasible(&self, s: &ElementSet) -> bool {
        (self.oracle)(s)
    }

    fn can_extend(&self, s: &ElementSet, e: ElementId) -> bool {
        if s.contains(e) {
            return false;
        }
        let mut probe = s.clone();
        probe.insert(e);
        (self.oracle)(&probe)
    }

    fn rho(&self) -> usize {
        self.rank
    }
}

/// A p-system declared through a generic independence oracle plus the
/// user-supplied order `p` and capacity bound. No constructive family
/// beyond matroid intersections is assumed.
pub struct PSystemOracle {
    oracle: Box<dyn Fn(&ElementSet) -> bool + Send + Sync>,
    p: usize,
    rho: usize,
}

impl PSystemOracle {
    pub fn new(
        oracle: Box<dyn Fn(&ElementSet) -> bool + Send + Sync>,
        p: usize,
        rho: usize,
    ) -> Result<Self> {
        if p == 0 {
            return Err(Error::InvalidParameter("p-system order must be >= 1".into()));
        }
        if !oracle(&ElementSet::new()) {
            return Err(Error::MatroidProperty("the empty set must be independent".into()));
        }
        Ok(PSystemOracle { oracle, p, rho })
    }

    pub fn p(&self) -> usize {
        self.p
    }
}

impl Constraint for PSystemOracle {
    fn is_feasible(&self, s: &ElementSet) -> bool {
        (self.oracle)(s)
    }

    fn can_extend(&self, s: &ElementSet, e: ElementId) -> bool {
        if s.contains(e) {
            return false;
        }
        let mut probe = s.clone();
        probe.insert(e);
        (self.oracle)(&probe)
    }

    fn rho(&self) -> usize {
        self.rho
    }
}

/// Conjunction of constraints; feasible sets are independent in every
/// member. The stored capacity is the minimum of the members' bounds — an
/// upper bound, which is all the distributed analysis needs.
pub struct Intersection {
    parts: Vec<Box<dyn Constraint>>,
}

impl Intersection {
    pub fn new(parts: Vec<Box<dyn Constraint>>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::InvalidParameter(
                "intersection needs at least one constraint".into(),
            ));
        }
        Ok(Intersection { parts })
    }
}

impl Constraint for Intersection {
    fn is_feasible(&self, s: &ElementSet) -> bool {
        self.parts.iter().all(|c| c.is_feasible(s))
    }

    fn can_extend(&self, s: &ElementSet, e: ElementId) -> bool {
        self.parts.iter().all(|c| c.can_extend(s, e))
    }

    fn rho(&self) -> usize {
        self.parts.iter().map(|c| c.rho()).min().unwrap_or(0)
    }
}

/// Budget constraint: per-element cost vectors must sum to at most the
/// (possibly multi-dimensional) budget, componentwise.
#[derive(Debug, Clone)]
pub struct Knapsack {
    costs: Vec<Vec<f64>>,
    budget: Vec<f64>,
    rho: usize,
}

impl Knapsack {
    pub fn new(costs: Vec<Vec<f64>>, budget: Vec<f64>) -> Result<Self> {
        let dims = budget.len();
        if dims == 0 {
            return Err(Error::InvalidParameter("knapsack needs >= 1 budget dimension".into()));
        }
        if costs.is_empty() {
            return Err(Error::InvalidParameter("knapsack needs >= 1 element".into()));
        }
        for (e, c) in costs.iter().enumerate() {
            if c.len() != dims {
                return Err(Error::InvalidParameter(format!(
                    "element {e} has {} cost components, budget has {dims}",
                    c.len()
                )));
            }
            if c.iter().any(|&x| !x.is_finite() || x <= 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "element {e} has a nonpositive or non-finite cost"
                )));
            }
        }
        // capacity over the cheapest element, per dimension; the tightest
        // dimension bounds every feasible set's size
        let rho = (0..dims)
            .map(|j| {
                let min_cost = costs.iter().map(|c| c[j]).fold(f64::INFINITY, f64::min);
                (budget[j] / min_cost).ceil().max(0.0) as usize
            })
            .min()
            .unwrap_or(0);
        Ok(Knapsack { costs, budget, rho })
    }

    /// One-dimensional convenience form.
    pub fn scalar(costs: Vec<f64>, budget: f64) -> Result<Self> {
        Knapsack::new(costs.into_iter().map(|c| vec![c]).collect(), vec![budget])
    }

    pub fn cost(&self, e: ElementId) -> &[f64] {
        &self.costs[e as usize]
    }

    pub fn budget(&self) -> &[f64] {
        &self.budget
    }

    pub fn spent(&self, s: &ElementSet) -> Vec<f64> {
        let mut total = vec![0.0; self.budget.len()];
        for e in s.iter() {
            for (t, c) in total.iter_mut().zip(&self.costs[e as usize]) {
                *t += c;
            }
        }
        total
    }

    /// Budget-normalized scalar cost, used as the denominator of the
    /// benefit/cost rule in the multi-dimensional case.
    pub fn scalarized_cost(&self, e: ElementId) -> f64 {
        self.costs[e as usize]
            .iter()
            .zip(&self.budget)
            .map(|(c, b)| c / b)
            .sum()
    }
}

impl Constraint for Knapsack {
    fn is_feasible(&self, s: &ElementSet) -> bool {
        self.spent(s)
            .iter()
            .zip(&self.budget)
            .all(|(&sp, &b)| sp <= b + 1e-12)
    }

    fn can_extend(&self, s: &ElementSet, e: ElementId) -> bool {
        if s.contains(e) {
            return false;
        }
        self.spent(s)
            .iter()
            .zip(&self.costs[e as usize])
            .zip(&self.budget)
            .all(|((&sp, &c), &b)| sp + c <= b + 1e-12)
    }

    fn rho(&self) -> usize {
        self.rho
    }

    fn as_knapsack(&self) -> Option<&Knapsack> {
        Some(self)
    }
}

/// Uniform matroid of rank `k`, i.e. the cardinality constraint expressed
/// through the generic oracle interface.
pub fn uniform_matroid(n: usize, k: usize, rng: &mut Rng) -> Result<MatroidOracle> {
    MatroidOracle::new(n, Box::new(move |s: &ElementSet| s.len() <= k), rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng;

    #[test]
    fn cardinality_boundary() {
        let c = Cardinality::new(2).unwrap();
        assert!(c.is_feasible(&ElementSet::from_slice(&[0, 1])));
        assert!(!c.is_feasible(&ElementSet::from_slice(&[0, 1, 2])));
        assert_eq!(c.rho(), 2);
        assert!(Cardinality::new(0).is_err());
    }

    #[test]
    fn partition_matroid_two_blocks() {
        // elements 0,1 in block 0; element 2 in block 1; capacity 1 each
        let m = PartitionMatroid::new(vec![0, 0, 1], vec![1, 1]).unwrap();
        assert!(m.is_feasible(&ElementSet::from_slice(&[0, 2])));
        assert!(!m.is_feasible(&ElementSet::from_slice(&[0, 1])));
        assert_eq!(m.rho(), 2); // sum of min(cap, block size)
    }

    #[test]
    fn partition_matroid_rank_counts_small_blocks() {
        let m = PartitionMatroid::new(vec![0, 1, 1, 1], vec![3, 2]).unwrap();
        // block 0 has 1 element (cap 3), block 1 has 3 (cap 2)
        assert_eq!(m.rho(), 3);
    }

    #[test]
    fn uniform_matroid_matches_cardinality() {
        let mut rng = rng::root(1);
        let m = uniform_matroid(6, 3, &mut rng).unwrap();
        assert_eq!(m.rho(), 3);
        assert!(m.is_feasible(&ElementSet::from_slice(&[0, 2, 4])));
        assert!(!m.is_feasible(&ElementSet::from_slice(&[0, 1, 2, 3])));
    }

    #[test]
    fn oracle_spot_check_rejects_non_hereditary() {
        let mut rng = rng::root(2);
        // "independent iff contains element 0 or empty" is not hereditary:
        // {0,1} is independent but {1} is not
        let bad = MatroidOracle::new(
            4,
            Box::new(|s: &ElementSet| s.is_empty() || s.contains(0)),
            &mut rng,
        );
        assert!(bad.is_err());
    }

    #[test]
    fn intersection_encodes_bipartite_matching() {
        // edges of K_{2,2}: (left, right) for edge ids 0..4
        // edge e connects left e/2 with right e%2
        let left = PartitionMatroid::new(vec![0, 0, 1, 1], vec![1, 1]).unwrap();
        let right = PartitionMatroid::new(vec![0, 1, 0, 1], vec![1, 1]).unwrap();
        let both = Intersection::new(vec![Box::new(left), Box::new(right)]).unwrap();
        // {0, 3} is a perfect matching; {0, 1} shares left node 0
        assert!(both.is_feasible(&ElementSet::from_slice(&[0, 3])));
        assert!(!both.is_feasible(&ElementSet::from_slice(&[0, 1])));
        assert_eq!(both.rho(), 2);
    }

    #[test]
    fn intersection_rejects_empty_list() {
        assert!(Intersection::new(vec![]).is_err());
    }

    #[test]
    fn knapsack_capacity_bound_from_formula() {
        let k = Knapsack::scalar(vec![3.0, 4.0, 5.0], 10.0).unwrap();
        assert_eq!(k.rho(), 4); // ceil(10 / 3)
    }

    #[test]
    fn knapsack_componentwise_budget() {
        let k = Knapsack::new(vec![vec![2.0, 2.0], vec![2.0, 2.0]], vec![3.0, 5.0]).unwrap();
        assert!(k.is_feasible(&ElementSet::from_slice(&[0])));
        // dimension 0: 4 > 3
        assert!(!k.is_feasible(&ElementSet::from_slice(&[0, 1])));
        assert!(!k.can_extend(&ElementSet::from_slice(&[0]), 1));
    }

    #[test]
    fn knapsack_rejects_nonpositive_costs() {
        assert!(Knapsack::scalar(vec![1.0, 0.0], 5.0).is_err());
        assert!(Knapsack::scalar(vec![1.0, -2.0], 5.0).is_err());
    }

    #[test]
    fn unit_cost_knapsack_equals_cardinality() {
        let k = Knapsack::scalar(vec![1.0; 6], 3.0).unwrap();
        let c = Cardinality::new(3).unwrap();
        for mask in 0u64..64 {
            let s = ElementSet::from_mask(mask);
            assert_eq!(k.is_feasible(&s), c.is_feasible(&s));
        }
    }

    #[test]
    fn heredity_and_extension_agree_on_random_sets() {
        use proptest::prelude::*;
        let mut runner = proptest::test_runner::TestRunner::deterministic();
        let k = Knapsack::scalar(vec![1.5, 2.0, 0.5, 3.0, 1.0], 4.0).unwrap();
        let pm = PartitionMatroid::new(vec![0, 0, 1, 1, 2], vec![1, 2, 1]).unwrap();
        let strat = proptest::collection::vec(0u32..5, 0..5);
        runner
            .run(&(strat, 0u32..5), |(ids, e)| {
                let s = ElementSet::from_slice(&ids);
                for c in [&k as &dyn Constraint, &pm as &dyn Constraint] {
                    if !s.contains(e) {
                        let mut ext = s.clone();
                        ext.insert(e);
                        prop_assert_eq!(c.can_extend(&s, e), c.is_feasible(&ext));
                    }
                    // heredity: drop one element from a feasible set
                    if c.is_feasible(&s) {
                        for drop in s.iter().collect::<Vec<_>>() {
                            let mut sub = s.clone();
                            sub.remove(drop);
                            prop_assert!(c.is_feasible(&sub));
                        }
                    }
                }
                Ok(())
            })
            .unwrap();
    }
}
