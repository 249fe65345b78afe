use crate::error::{Error, Result};
use crate::objective::{Evaluator, NaiveEvaluator, Objective};
use crate::set::{ElementId, ElementSet, GroundSet, PayloadKind};

/// A submodular function that is the mean of per-element components:
/// `f(S) = (1/|V|) * sum over i in V of f_i(S)`, each `f_i` bounded in
/// [0, 1] and evaluable without access to the full dataset. This is what
/// lets a machine score candidates against only the points it holds.
pub trait Decomposable: Objective {
    /// Component `f_i(S)` for data point `i`; bounded in [0, 1].
    fn component(&self, i: ElementId, s: &ElementSet) -> f64;

    /// Fast evaluator for the scope-restricted view, when the objective has
    /// one. The default falls back to recomputing the restricted mean.
    fn restricted_evaluator(&self, _scope: &[ElementId]) -> Option<Box<dyn Evaluator + '_>> {
        None
    }
}

/// `f_D(S) = (1/|D|) * sum over i in D of f_i(S)`.
pub fn restricted_eval(f: &dyn Decomposable, scope: &[ElementId], s: &ElementSet) -> Result<f64> {
    if scope.is_empty() {
        return Err(Error::EmptySelection(
            "restricted evaluation needs a nonempty scope".into(),
        ));
    }
    let total: f64 = scope.iter().map(|&i| f.component(i, s)).sum();
    Ok(total / scope.len() as f64)
}

/// The scope-restricted view as a standalone objective, suitable for
/// handing to any engine.
pub struct Restricted<'a> {
    inner: &'a dyn Decomposable,
    scope: Vec<ElementId>,
    ground: GroundSet,
}

impl<'a> Restricted<'a> {
    pub fn new(inner: &'a dyn Decomposable, scope: Vec<ElementId>) -> Result<Self> {
        if scope.is_empty() {
            return Err(Error::EmptySelection(
                "restricted evaluation needs a nonempty scope".into(),
            ));
        }
        let ground = GroundSet::new(inner.ground().len(), inner.ground().payload_kind());
        Ok(Restricted {
            inner,
            scope,
            ground,
        })
    }

    pub fn scope(&self) -> &[ElementId] {
        &self.scope
    }
}

impl Objective for Restricted<'_> {
    fn ground(&self) -> &GroundSet {
        &self.ground
    }

    fn value(&self, s: &ElementSet) -> f64 {
        restricted_eval(self.inner, &self.scope, s).expect("scope is nonempty by construction")
    }

    fn monotone(&self) -> bool {
        self.inner.monotone()
    }

    fn nonnegative(&self) -> bool {
        self.inner.nonnegative()
    }

    fn evaluator(&self) -> Box<dyn Evaluator + '_> {
        self.inner
            .restricted_evaluator(&self.scope)
            .unwrap_or_else(|| Box::new(NaiveEvaluator::new(self)))
    }
}

/// All components equal to the same constant; a degenerate decomposable
/// function used to pin down protocol behavior when the objective is flat.
#[derive(Debug, Clone)]
pub struct ConstantComponents {
    c: f64,
    ground: GroundSet,
}

impl ConstantComponents {
    pub fn new(n: usize, c: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&c) {
            return Err(Error::InvalidParameter(
                "constant component must lie in [0, 1]".into(),
            ));
        }
        Ok(ConstantComponents {
            c,
            ground: GroundSet::new(n, PayloadKind::Abstract),
        })
    }
}

impl Objective for ConstantComponents {
    fn ground(&self) -> &GroundSet {
        &self.ground
    }

    fn value(&self, _s: &ElementSet) -> f64 {
        self.c
    }

    fn monotone(&self) -> bool {
        true
    }

    fn nonnegative(&self) -> bool {
        true
    }
}

impl Decomposable for ConstantComponents {
    fn component(&self, _i: ElementId, _s: &ElementSet) -> f64 {
        self.c
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::VectorDataset;
    use crate::objectives::Exemplar;
    use std::sync::Arc;

    fn small_exemplar() -> Exemplar {
        let data = VectorDataset::from_rows(vec![
            vec![0.0, 0.0],
            vec![1.0, 0.0],
            vec![0.0, 2.0],
            vec![3.0, 1.0],
        ])
        .unwrap();
        Exemplar::new(Arc::new(data), 2.0).unwrap()
    }

    #[test]
    fn full_scope_matches_scaled_global_value() {
        let f = small_exemplar();
        let scope: Vec<u32> = (0..4).collect();
        let s = ElementSet::from_slice(&[1, 2]);
        let restricted = restricted_eval(&f, &scope, &s).unwrap();
        let global = f.value(&s) / f.phantom_cost();
        assert!((restricted - global).abs() < 1e-12);
    }

    #[test]
    fn singleton_scope_is_that_component() {
        let f = small_exemplar();
        let s = ElementSet::from_slice(&[0]);
        let got = restricted_eval(&f, &[3], &s).unwrap();
        assert!((got - f.component(3, &s)).abs() < 1e-15);
    }

    #[test]
    fn half_scope_mean_by_hand() {
        let f = small_exemplar();
        let s = ElementSet::from_slice(&[0]);
        let want = (f.component(0, &s) + f.component(1, &s)) / 2.0;
        let got = restricted_eval(&f, &[0, 1], &s).unwrap();
        assert!((got - want).abs() < 1e-15);
    }

    #[test]
    fn empty_scope_is_an_error() {
        let f = small_exemplar();
        assert!(restricted_eval(&f, &[], &ElementSet::new()).is_err());
    }

    #[test]
    fn restricted_objective_uses_fast_evaluator() {
        let f = small_exemplar();
        let view = Restricted::new(&f, vec![0, 1, 2]).unwrap();
        let mut ev = view.evaluator();
        let g = ev.gain(3);
        ev.accept(3);
        assert!((ev.value() - g).abs() < 1e-12);
        assert!((ev.value() - view.value(ev.selection())).abs() < 1e-9);
    }

    #[test]
    fn constant_components_are_flat() {
        let f = ConstantComponents::new(5, 0.25).unwrap();
        assert_eq!(f.value(&ElementSet::new()), 0.25);
        assert_eq!(f.value(&ElementSet::from_slice(&[0, 3])), 0.25);
        assert_eq!(restricted_eval(&f, &[1, 2], &ElementSet::new()).unwrap(), 0.25);
    }
}
