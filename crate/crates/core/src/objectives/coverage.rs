use crate::data::SetSystemDataset;
use crate::objective::{Evaluator, Objective};
use crate::set::{ElementId, ElementSet, GroundSet, PayloadKind};

/// Weighted-free max coverage: `f(S) = |union of the candidate sets in S|`.
/// Monotone submodular.
#[derive(Debug, Clone)]
pub struct Coverage {
    sets: Vec<Vec<u32>>,
    universe: usize,
    ground: GroundSet,
}

impl Coverage {
    pub fn new(mut sets: Vec<Vec<u32>>) -> Self {
        assert!(!sets.is_empty(), "coverage needs at least one candidate set");
        // candidate sets are sets: drop duplicate items so incremental
        // gains count each item once
        for s in &mut sets {
            s.sort_unstable();
            s.dedup();
        }
        let universe = sets
            .iter()
            .flat_map(|s| s.iter())
            .max()
            .map(|&m| m as usize + 1)
            .unwrap_or(0);
        let ground = GroundSet::new(sets.len(), PayloadKind::SetSystem);
        Coverage {
            sets,
            universe,
            ground,
        }
    }

    pub fn from_dataset(ss: &SetSystemDataset) -> Self {
        Coverage::new(ss.sets().to_vec())
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn candidate_set(&self, e: ElementId) -> &[u32] {
        &self.sets[e as usize]
    }
}

impl Objective for Coverage {
    fn ground(&self) -> &GroundSet {
        &self.ground
    }

    fn value(&self, s: &ElementSet) -> f64 {
        let mut covered = vec![0u64; self.universe.div_ceil(64)];
        let mut count = 0u64;
        for e in s.iter() {
            for &item in &self.sets[e as usize] {
                let (w, b) = (item as usize / 64, item as usize % 64);
                if covered[w] & (1 << b) == 0 {
                    covered[w] |= 1 << b;
                    count += 1;
                }
            }
        }
        count as f64
    }

    fn monotone(&self) -> bool {
        true
    }

    fn nonnegative(&self) -> bool {
        true
    }

    fn evaluator(&self) -> Box<dyn Evaluator + '_> {
        Box::new(CoverageEvaluator {
            f: self,
            covered: vec![0u64; self.universe.div_ceil(64)],
            count: 0,
            set: ElementSet::new(),
            calls: 1, // the f(empty) evaluation is trivially known
        })
    }
}

/// Incremental coverage state: a gain query only touches the candidate set
/// of the queried element.
struct CoverageEvaluator<'a> {
    f: &'a Coverage,
    covered: Vec<u64>,
    count: u64,
    set: ElementSet,
    calls: u64,
}

impl Evaluator for CoverageEvaluator<'_> {
    fn value(&self) -> f64 {
        self.count as f64
    }

    fn selection(&self) -> &ElementSet {
        &self.set
    }

    fn gain(&mut self, e: ElementId) -> f64 {
        self.calls += 1;
        let mut new = 0u64;
        for &item in &self.f.sets[e as usize] {
            let (w, b) = (item as usize / 64, item as usize % 64);
            if self.covered[w] & (1 << b) == 0 {
                new += 1;
            }
        }
        new as f64
    }

    fn accept(&mut self, e: ElementId) {
        for &item in &self.f.sets[e as usize] {
            let (w, b) = (item as usize / 64, item as usize % 64);
            if self.covered[w] & (1 << b) == 0 {
                self.covered[w] |= 1 << b;
                self.count += 1;
            }
        }
        self.set.insert(e);
    }

    fn calls(&self) -> u64 {
        self.calls
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn union_count() {
        let f = Coverage::new(vec![vec![1, 2], vec![2, 3]]);
        assert_eq!(f.value(&ElementSet::new()), 0.0);
        assert_eq!(f.value(&ElementSet::from_slice(&[0, 1])), 3.0);
    }

    #[test]
    fn duplicate_sets_are_idempotent() {
        let f = Coverage::new(vec![vec![4, 5], vec![4, 5]]);
        assert_eq!(f.value(&ElementSet::from_slice(&[0, 1])), 2.0);
    }

    #[test]
    fn evaluator_matches_direct_value() {
        let f = Coverage::new(vec![vec![0, 1], vec![1, 2], vec![5], vec![2]]);
        let mut ev = f.evaluator();
        assert_eq!(ev.gain(0), 2.0);
        ev.accept(0);
        assert_eq!(ev.gain(1), 1.0);
        ev.accept(1);
        assert_eq!(ev.value(), f.value(ev.selection()));
    }

    #[test]
    fn disjoint_sets_cover_additively() {
        let f = Coverage::new(vec![vec![0], vec![1], vec![2]]);
        assert_eq!(f.value(&ElementSet::from_slice(&[0, 1, 2])), 3.0);
    }
}
