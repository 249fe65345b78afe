//! Exhaustive structural checks for small instances.
//!
//! These enumerate every pair `A ⊆ B ⊆ V` (and every extension element) from
//! a table of all 2^n values, so they are gated to n <= 12.

use crate::error::{Error, Result};
use crate::objective::{Objective, VALUE_TOL};
use crate::set::{ElementId, ElementSet};

/// Largest ground set the exhaustive checks accept.
pub const EXHAUSTIVE_LIMIT: usize = 12;

/// A violation of diminishing returns: `gain(A, e) < gain(B, e)` for
/// `A ⊆ B`, `e ∉ B`.
#[derive(Debug, Clone)]
pub struct SubmodularityWitness {
    pub a: ElementSet,
    pub b: ElementSet,
    pub element: ElementId,
    pub gain_a: f64,
    pub gain_b: f64,
}

/// A violation of monotonicity: `f(A) > f(B)` for `A ⊆ B`.
#[derive(Debug, Clone)]
pub struct MonotonicityWitness {
    pub a: ElementSet,
    pub b: ElementSet,
    pub value_a: f64,
    pub value_b: f64,
}

fn value_table(f: &dyn Objective) -> Result<Vec<f64>> {
    let n = f.n();
    if n > EXHAUSTIVE_LIMIT {
        return Err(Error::TooLargeForExhaustive {
            n,
            limit: EXHAUSTIVE_LIMIT,
        });
    }
    Ok((0u64..1 << n)
        .map(|mask| f.value(&ElementSet::from_mask(mask)))
        .collect())
}

/// Ascending enumeration of the submasks of `b`, including 0 and `b`.
fn for_each_submask(b: u64, mut visit: impl FnMut(u64) -> bool) {
    let mut s = 0u64;
    loop {
        if visit(s) {
            return;
        }
        if s == b {
            return;
        }
        s = s.wrapping_sub(b) & b;
    }
}

/// Check `gain(A, e) >= gain(B, e) - tol` for every `A ⊆ B ⊆ V`, `e ∉ B`.
/// Returns the first violation found, or `None` if the function is
/// submodular on this instance.
pub fn verify_submodular(f: &dyn Objective) -> Result<Option<SubmodularityWitness>> {
    let n = f.n();
    let table = value_table(f)?;
    let mut witness = None;
    for b in 0u64..1 << n {
        for_each_submask(b, |a| {
            if a == b {
                return false;
            }
            for e in 0..n as u32 {
                let bit = 1u64 << e;
                if b & bit != 0 {
                    continue;
                }
                let gain_a = table[(a | bit) as usize] - table[a as usize];
                let gain_b = table[(b | bit) as usize] - table[b as usize];
                if gain_a < gain_b - VALUE_TOL {
                    witness = Some(SubmodularityWitness {
                        a: ElementSet::from_mask(a),
                        b: ElementSet::from_mask(b),
                        element: e,
                        gain_a,
                        gain_b,
                    });
                    return true;
                }
            }
            false
        });
        if witness.is_some() {
            break;
        }
    }
    Ok(witness)
}

/// Check `f(A) <= f(B) + tol` for every `A ⊆ B ⊆ V`. Returns the first
/// violation found, or `None` if the function is monotone on this instance.
pub fn verify_monotone(f: &dyn Objective) -> Result<Option<MonotonicityWitness>> {
    let n = f.n();
    let table = value_table(f)?;
    let mut witness = None;
    for b in 0u64..1 << n {
        for_each_submask(b, |a| {
            if a != b && table[a as usize] > table[b as usize] + VALUE_TOL {
                witness = Some(MonotonicityWitness {
                    a: ElementSet::from_mask(a),
                    b: ElementSet::from_mask(b),
                    value_a: table[a as usize],
                    value_b: table[b as usize],
                });
                return true;
            }
            false
        });
        if witness.is_some() {
            break;
        }
    }
    Ok(witness)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::objectives::{Coverage, GraphCut, Modular};
    use crate::set::{GroundSet, PayloadKind};

    /// f(S) = |S|^2: supermodular, so the check must fail with the
    /// canonical witness (A = {}, B = {0}, e = 1).
    struct SizeSquared(GroundSet);

    impl Objective for SizeSquared {
        fn ground(&self) -> &GroundSet {
            &self.0
        }
        fn value(&self, s: &ElementSet) -> f64 {
            (s.len() * s.len()) as f64
        }
        fn monotone(&self) -> bool {
            true
        }
        fn nonnegative(&self) -> bool {
            true
        }
    }

    #[test]
    fn coverage_is_submodular_and_monotone() {
        let f = Coverage::new(vec![vec![0, 1], vec![1, 2], vec![3], vec![2]]);
        assert!(verify_submodular(&f).unwrap().is_none());
        assert!(verify_monotone(&f).unwrap().is_none());
    }

    #[test]
    fn size_squared_fails_with_expected_witness() {
        let f = SizeSquared(GroundSet::new(3, PayloadKind::Abstract));
        let w = verify_submodular(&f).unwrap().expect("must fail");
        assert!(w.a.is_empty());
        assert_eq!(w.b.as_sorted_slice(), &[0]);
        assert_eq!(w.element, 1);
    }

    #[test]
    fn cut_on_triangle_is_submodular() {
        // directed 3-cycle with unit weights
        let f = GraphCut::new(3, &[(0, 1, 1.0), (1, 2, 1.0), (2, 0, 1.0)]).unwrap();
        assert!(verify_submodular(&f).unwrap().is_none());
    }

    #[test]
    fn bidirectional_pair_is_not_monotone() {
        let f = GraphCut::new(2, &[(0, 1, 1.0), (1, 0, 1.0)]).unwrap();
        let w = verify_monotone(&f).unwrap().expect("cut is not monotone");
        assert!(w.value_a > w.value_b);
        assert_eq!(w.a.as_sorted_slice(), &[0]);
        assert_eq!(w.b.as_sorted_slice(), &[0, 1]);
    }

    #[test]
    fn refuses_large_ground_sets() {
        let f = Modular::new(vec![1.0; 13]);
        assert!(matches!(
            verify_submodular(&f),
            Err(Error::TooLargeForExhaustive { n: 13, .. })
        ));
    }
}
