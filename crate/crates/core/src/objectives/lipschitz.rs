//! Empirical probes of the smoothness contracts.
//!
//! A set function is lambda-Lipschitz w.r.t. a metric `d` when for equal
//! sized sets matched element-by-element, `|f(S) - f(S')| <= lambda * sum of
//! matched distances`. The probe samples matched pairs and reports the worst
//! observed ratio, which must stay below the analytic constant.

use rand::seq::index::sample;

use crate::data::VectorDataset;
use crate::error::{Error, Result};
use crate::objective::Objective;
use crate::objectives::SeKernel;
use crate::rng::Rng;
use crate::set::{ElementId, ElementSet};

/// Distance between ground-set elements.
pub trait Metric {
    fn distance(&self, a: ElementId, b: ElementId) -> f64;
}

/// Euclidean metric over a point dataset.
pub struct EuclideanMetric<'a>(pub &'a VectorDataset);

impl Metric for EuclideanMetric<'_> {
    fn distance(&self, a: ElementId, b: ElementId) -> f64 {
        self.0.squared_distance(a as usize, b as usize).sqrt()
    }
}

/// Sample `trials` matched pairs of size-`k` sets and return the largest
/// observed ratio `|f(S) - f(S')| / sum_i d(e_i, e'_i)`. Pairs with zero
/// matched distance contribute nothing; if every trial degenerates that way
/// the ratio is undefined and an error is returned.
pub fn lipschitz_probe(
    f: &dyn Objective,
    metric: &dyn Metric,
    k: usize,
    trials: usize,
    rng: &mut Rng,
) -> Result<f64> {
    let n = f.n();
    if k == 0 || k > n {
        return Err(Error::InvalidParameter(format!(
            "probe set size must satisfy 1 <= k <= n, got k={k}, n={n}"
        )));
    }
    let mut max_ratio: Option<f64> = None;
    for _ in 0..trials {
        let s: Vec<ElementId> = sample(rng, n, k).iter().map(|i| i as ElementId).collect();
        let t: Vec<ElementId> = sample(rng, n, k).iter().map(|i| i as ElementId).collect();
        let matched: f64 = s
            .iter()
            .zip(&t)
            .map(|(&a, &b)| metric.distance(a, b))
            .sum();
        if matched == 0.0 {
            continue;
        }
        let fs = f.value(&ElementSet::from_slice(&s));
        let ft = f.value(&ElementSet::from_slice(&t));
        let ratio = (fs - ft).abs() / matched;
        max_ratio = Some(max_ratio.map_or(ratio, |m: f64| m.max(ratio)));
    }
    max_ratio.ok_or(Error::ZeroMatchedDistance)
}

/// Smoothness constant of the k-medoid family with `l = d^alpha`:
/// `alpha * R^(alpha-1)` where `R` is the diameter of the point set.
/// In particular 1 for `l = d` and `2R` for `l = d^2`.
pub fn exemplar_lambda(alpha: f64, diameter: f64) -> f64 {
    alpha * diameter.powf(alpha - 1.0)
}

/// Smoothness constant of the information-gain score with an SE kernel.
///
/// The kernel's own Lipschitz constant w.r.t. Euclidean distance is the
/// maximum gradient norm of `exp(-r^2/h^2)`, attained at `r = h/sqrt(2)`:
/// `L = sqrt(2) / (h * sqrt(e))`. The set-function constant is then
/// `L * k^3`, scaled by `sigma^-2` because the score sees the kernel through
/// `sigma^-2 K`.
pub fn info_gain_lambda(kernel: &SeKernel, k: usize) -> f64 {
    let kernel_lipschitz = std::f64::consts::SQRT_2 / (kernel.h * std::f64::consts::E.sqrt());
    let k = k as f64;
    kernel_lipschitz * k * k * k / (kernel.sigma * kernel.sigma)
}
