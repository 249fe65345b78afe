use crate::objective::Objective;
use crate::set::{ElementSet, GroundSet, PayloadKind};

/// A modular (additive) function: `f(S) = sum of per-element weights`.
/// Mostly a reference objective — greedy is exactly optimal for it, which
/// makes it useful for pinning down solver behavior in tests.
#[derive(Debug, Clone)]
pub struct Modular {
    weights: Vec<f64>,
    ground: GroundSet,
}

impl Modular {
    pub fn new(weights: Vec<f64>) -> Self {
        let ground = GroundSet::new(weights.len(), PayloadKind::Abstract);
        Modular { weights, ground }
    }

    pub fn weight(&self, e: u32) -> f64 {
        self.weights[e as usize]
    }
}

impl Objective for Modular {
    fn ground(&self) -> &GroundSet {
        &self.ground
    }

    fn value(&self, s: &ElementSet) -> f64 {
        s.iter().map(|e| self.weights[e as usize]).sum()
    }

    fn monotone(&self) -> bool {
        self.weights.iter().all(|&w| w >= 0.0)
    }

    fn nonnegative(&self) -> bool {
        self.weights.iter().all(|&w| w >= 0.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sums_weights() {
        let f = Modular::new(vec![5.0, 1.0, 3.0]);
        assert_eq!(f.value(&ElementSet::from_slice(&[0, 2])), 8.0);
        assert_eq!(f.value(&ElementSet::new()), 0.0);
        assert!(f.monotone());
    }

    #[test]
    fn zero_weight_element_has_zero_gain() {
        let f = Modular::new(vec![2.0, 0.0]);
        let s = ElementSet::from_slice(&[0]);
        let mut t = s.clone();
        t.insert(1);
        assert_eq!(f.value(&t) - f.value(&s), 0.0);
    }
}
