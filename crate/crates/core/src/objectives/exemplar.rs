use std::sync::Arc;

use crate::data::{dot_product, squared_distance, VectorDataset};
use crate::error::{Error, Result};
use crate::objective::{Evaluator, Objective};
use crate::objectives::decomposable::Decomposable;
use crate::set::{ElementId, ElementSet, GroundSet, PayloadKind};

/// The k-medoid loss: `L(S) = mean over v of min_{e in S} l(e, v)` with
/// dissimilarity `l = d^alpha` over Euclidean `d`. Undefined for an empty
/// exemplar set — callers wanting `S = {}` should use the utility form.
pub fn exemplar_loss(data: &VectorDataset, alpha: f64, s: &ElementSet) -> Result<f64> {
    if s.is_empty() {
        return Err(Error::EmptySelection(
            "loss over an empty exemplar set is undefined; evaluate the Exemplar utility instead"
                .into(),
        ));
    }
    let n = data.len();
    let mut total = 0.0;
    for v in 0..n {
        let mut best = f64::INFINITY;
        for e in s.iter() {
            let l = dissimilarity(data, alpha, e as usize, v);
            if l < best {
                best = l;
            }
        }
        total += best;
    }
    Ok(total / n as f64)
}

#[inline]
fn dissimilarity(data: &VectorDataset, alpha: f64, e: usize, v: usize) -> f64 {
    let sq = squared_distance(data.row(e), data.row(v));
    if alpha == 2.0 {
        sq
    } else if alpha == 1.0 {
        sq.sqrt()
    } else {
        sq.powf(alpha / 2.0)
    }
}

/// Exemplar clustering utility: the drop in k-medoid loss relative to an
/// auxiliary exemplar at constant dissimilarity `phantom_cost` from every
/// point. Monotone submodular with `f({}) = 0`.
#[derive(Debug, Clone)]
pub struct Exemplar {
    data: Arc<VectorDataset>,
    alpha: f64,
    phantom_cost: f64,
    ground: GroundSet,
}

impl Exemplar {
    /// The default auxiliary cost is the max pairwise dissimilarity with a
    /// 1% margin, which satisfies the phantom condition comfortably.
    pub fn new(data: Arc<VectorDataset>, alpha: f64) -> Result<Self> {
        let max_dis = Self::max_dissimilarity(&data, alpha)?;
        Self::with_phantom(data, alpha, max_dis * 1.01)
    }

    /// Use an explicit auxiliary cost; it must dominate every pairwise
    /// dissimilarity, otherwise the utility would stop tracking the loss.
    pub fn with_phantom(data: Arc<VectorDataset>, alpha: f64, phantom_cost: f64) -> Result<Self> {
        let max_dis = Self::max_dissimilarity(&data, alpha)?;
        if phantom_cost < max_dis {
            return Err(Error::InvalidParameter(format!(
                "phantom cost {phantom_cost} is below the max pairwise dissimilarity {max_dis}"
            )));
        }
        let ground = GroundSet::new(data.len(), PayloadKind::Vectors);
        Ok(Exemplar {
            data,
            alpha,
            phantom_cost,
            ground,
        })
    }

    fn max_dissimilarity(data: &VectorDataset, alpha: f64) -> Result<f64> {
        if !alpha.is_finite() || alpha < 1.0 {
            return Err(Error::InvalidParameter(format!(
                "dissimilarity exponent must be >= 1, got {alpha}"
            )));
        }
        let maxsq = data.max_squared_distance();
        Ok(if alpha == 2.0 {
            maxsq
        } else if alpha == 1.0 {
            maxsq.sqrt()
        } else {
            maxsq.powf(alpha / 2.0)
        })
    }

    pub fn phantom_cost(&self) -> f64 {
        self.phantom_cost
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn data(&self) -> &Arc<VectorDataset> {
        &self.data
    }

    #[inline]
    pub fn dissimilarity(&self, e: ElementId, v: ElementId) -> f64 {
        dissimilarity(&self.data, self.alpha, e as usize, v as usize)
    }

    fn scoped_evaluator(&self, customers: Vec<u32>, normalized: bool) -> ExemplarEvaluator<'_> {
        let mindist = vec![self.phantom_cost; customers.len()];
        // squared dissimilarity admits two shortcuts: first-round gains
        // collapse to a moment formula, and later gains can use the
        // norm-plus-dot identity instead of forming differences
        let (moments, norms) = if self.alpha == 2.0 {
            let d = self.data.dim();
            let mut mean = vec![0.0; d];
            let mut mean_sq = 0.0;
            let mut norms = Vec::with_capacity(customers.len());
            for &v in &customers {
                let row = self.data.row(v as usize);
                for (m, x) in mean.iter_mut().zip(row) {
                    *m += x;
                }
                let norm = dot_product(row, row);
                norms.push(norm);
                mean_sq += norm;
            }
            let inv = 1.0 / customers.len() as f64;
            for m in &mut mean {
                *m *= inv;
            }
            (Some((mean, mean_sq * inv)), Some(norms))
        } else {
            (None, None)
        };
        // column-major copy of the tracked points: the gain scan becomes a
        // dimension-at-a-time multiply-accumulate over flat arrays with no
        // per-point reduction, which is what lets it vectorize
        let (transposed, dots) = if self.alpha == 2.0 {
            let d = self.data.dim();
            let nc = customers.len();
            let mut transposed = vec![0.0; d * nc];
            for (idx, &v) in customers.iter().enumerate() {
                let row = self.data.row(v as usize);
                for (t, &x) in row.iter().enumerate() {
                    transposed[t * nc + idx] = x;
                }
            }
            (Some(transposed), vec![0.0; nc])
        } else {
            (None, Vec::new())
        };
        ExemplarEvaluator {
            f: self,
            customers,
            mindist,
            sum_reduction: 0.0,
            set: ElementSet::new(),
            calls: 1,
            normalized,
            moments,
            norms,
            transposed,
            dots,
        }
    }
}

impl Objective for Exemplar {
    fn ground(&self) -> &GroundSet {
        &self.ground
    }

    fn value(&self, s: &ElementSet) -> f64 {
        let n = self.data.len();
        let c = self.phantom_cost;
        let mut reduction = 0.0;
        for v in 0..n {
            let mut best = c;
            for e in s.iter() {
                let l = self.dissimilarity(e, v as u32);
                if l < best {
                    best = l;
                }
            }
            reduction += c - best;
        }
        reduction / n as f64
    }

    fn monotone(&self) -> bool {
        true
    }

    fn nonnegative(&self) -> bool {
        true
    }

    fn evaluator(&self) -> Box<dyn Evaluator + '_> {
        Box::new(self.scoped_evaluator((0..self.data.len() as u32).collect(), false))
    }
}

impl Decomposable for Exemplar {
    /// Per-point component, rescaled by the phantom cost to sit in [0, 1].
    fn component(&self, i: ElementId, s: &ElementSet) -> f64 {
        let c = self.phantom_cost;
        let mut best = c;
        for e in s.iter() {
            let l = self.dissimilarity(e, i);
            if l < best {
                best = l;
            }
        }
        (c - best) / c
    }

    fn restricted_evaluator(&self, scope: &[ElementId]) -> Option<Box<dyn Evaluator + '_>> {
        Some(Box::new(self.scoped_evaluator(scope.to_vec(), true)))
    }
}

/// Cached per-point current-minimum dissimilarities, updated on acceptance.
/// A gain query is one pass over the tracked points, which is what makes a
/// full greedy sweep affordable at n = 10,000.
struct ExemplarEvaluator<'a> {
    f: &'a Exemplar,
    customers: Vec<u32>,
    mindist: Vec<f64>,
    sum_reduction: f64,
    set: ElementSet,
    calls: u64,
    /// divide by the phantom cost (decomposable component scaling)
    normalized: bool,
    /// (scope mean vector, scope mean squared norm) for the empty-set
    /// fast path under squared dissimilarity
    moments: Option<(Vec<f64>, f64)>,
    /// per-customer squared norms for the dot-identity gain path
    norms: Option<Vec<f64>>,
    /// column-major tracked points (dimension-major blocks of length nc)
    transposed: Option<Vec<f64>>,
    /// scratch for the per-point dot products of the current query
    dots: Vec<f64>,
}

impl ExemplarEvaluator<'_> {
    #[inline]
    fn scale(&self) -> f64 {
        let base = self.customers.len() as f64;
        if self.normalized {
            base * self.f.phantom_cost
        } else {
            base
        }
    }
}

impl Evaluator for ExemplarEvaluator<'_> {
    fn value(&self) -> f64 {
        self.sum_reduction / self.scale()
    }

    fn selection(&self) -> &ElementSet {
        &self.set
    }

    fn gain(&mut self, e: ElementId) -> f64 {
        self.calls += 1;
        let data = &self.f.data;
        let alpha = self.f.alpha;
        let row = data.row(e as usize);
        if self.set.is_empty() {
            if let Some((mean, mean_sq)) = &self.moments {
                // every tracked point still sits at the phantom, and the
                // phantom dominates every dissimilarity, so the gain is
                // c - mean of ||x_e - x_v||^2 over the scope
                let mean_l = dot_product(row, row) - 2.0 * dot_product(row, mean) + mean_sq;
                return (self.f.phantom_cost - mean_l) * self.customers.len() as f64
                    / self.scale();
            }
        }
        let mut acc = 0.0;
        if let (Some(norms), Some(transposed)) = (&self.norms, &self.transposed) {
            // ||e - v||^2 = ||e||^2 + ||v||^2 - 2 e.v; accumulate every
            // tracked point's dot with the query one dimension at a time
            // over the column-major copy (flat multiply-accumulates, no
            // per-point reduction), then fold the clamped improvements.
            // Points are blocked so the dot scratch stays cache-resident
            // across the dimension passes.
            const BLOCK: usize = 1024;
            let nc = self.customers.len();
            let e_norm = dot_product(row, row);
            let mut start = 0;
            let d = row.len();
            while start < nc {
                let end = (start + BLOCK).min(nc);
                let len = end - start;
                let dots = &mut self.dots[start..end];
                dots.fill(0.0);
                // four dimensions per pass so each scratch element is
                // loaded and stored once per four columns
                let mut t = 0;
                while t + 4 <= d {
                    let (x0, x1, x2, x3) = (row[t], row[t + 1], row[t + 2], row[t + 3]);
                    let c0 = &transposed[t * nc + start..t * nc + end];
                    let c1 = &transposed[(t + 1) * nc + start..(t + 1) * nc + end];
                    let c2 = &transposed[(t + 2) * nc + start..(t + 2) * nc + end];
                    let c3 = &transposed[(t + 3) * nc + start..(t + 3) * nc + end];
                    for i in 0..len {
                        dots[i] += x0 * c0[i] + x1 * c1[i] + x2 * c2[i] + x3 * c3[i];
                    }
                    t += 4;
                }
                while t < d {
                    let x = row[t];
                    let col = &transposed[t * nc + start..t * nc + end];
                    for (dst, &src) in dots.iter_mut().zip(col) {
                        *dst += x * src;
                    }
                    t += 1;
                }
                let norms = &norms[start..end];
                let mindist = &self.mindist[start..end];
                for idx in 0..len {
                    let l = e_norm + norms[idx] - 2.0 * dots[idx];
                    acc += (mindist[idx] - l).max(0.0);
                }
                start = end;
            }
        } else if alpha == 2.0 {
            for (idx, &v) in self.customers.iter().enumerate() {
                let l = squared_distance(row, data.row(v as usize));
                acc += (self.mindist[idx] - l).max(0.0);
            }
        } else {
            for (idx, &v) in self.customers.iter().enumerate() {
                let sq = squared_distance(row, data.row(v as usize));
                let l = if alpha == 1.0 { sq.sqrt() } else { sq.powf(alpha / 2.0) };
                acc += (self.mindist[idx] - l).max(0.0);
            }
        }
        acc / self.scale()
    }

    fn accept(&mut self, e: ElementId) {
        let data = &self.f.data;
        for (idx, &v) in self.customers.iter().enumerate() {
            let l = dissimilarity(data, self.f.alpha, e as usize, v as usize);
            if l < self.mindist[idx] {
                self.sum_reduction += self.mindist[idx] - l;
                self.mindist[idx] = l;
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

    fn line_points(xs: &[f64]) -> Arc<VectorDataset> {
        Arc::new(VectorDataset::from_rows(xs.iter().map(|&x| vec![x]).collect()).unwrap())
    }

    #[test]
    fn loss_two_points_squared() {
        let data = line_points(&[0.0, 1.0]);
        let l = exemplar_loss(&data, 2.0, &ElementSet::from_slice(&[1])).unwrap();
        assert!((l - 0.5).abs() < 1e-12);
    }

    #[test]
    fn loss_of_full_set_is_zero() {
        let data = line_points(&[0.0, 1.0, 5.0]);
        let l = exemplar_loss(&data, 2.0, &ElementSet::from_slice(&[0, 1, 2])).unwrap();
        assert_eq!(l, 0.0);
    }

    #[test]
    fn loss_middle_point_linear() {
        let data = line_points(&[0.0, 2.0, 4.0]);
        let l = exemplar_loss(&data, 1.0, &ElementSet::from_slice(&[1])).unwrap();
        assert!((l - 4.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn loss_rejects_empty_set() {
        let data = line_points(&[0.0, 1.0]);
        assert!(exemplar_loss(&data, 2.0, &ElementSet::new()).is_err());
    }

    #[test]
    fn utility_empty_is_zero_and_full_is_phantom() {
        let data = line_points(&[0.0, 1.0]);
        let f = Exemplar::with_phantom(data, 2.0, 4.0).unwrap();
        assert_eq!(f.value(&ElementSet::new()), 0.0);
        // every point becomes its own exemplar, loss drops to zero
        let v = f.value(&ElementSet::from_slice(&[0, 1]));
        assert!((v - 4.0).abs() < 1e-12);
    }

    #[test]
    fn utility_hand_computed() {
        let data = line_points(&[0.0, 1.0]);
        let f = Exemplar::with_phantom(data, 2.0, 4.0).unwrap();
        let v = f.value(&ElementSet::from_slice(&[1]));
        assert!((v - 3.5).abs() < 1e-12);
    }

    #[test]
    fn phantom_condition_is_checked() {
        let data = line_points(&[0.0, 10.0]);
        assert!(Exemplar::with_phantom(data, 2.0, 50.0).is_err());
    }

    #[test]
    fn evaluator_agrees_with_direct_value() {
        let data = line_points(&[0.0, 1.0, 2.5, 7.0]);
        let f = Exemplar::new(data, 2.0).unwrap();
        let mut ev = f.evaluator();
        let g = ev.gain(2);
        ev.accept(2);
        assert!((ev.value() - g).abs() < 1e-12);
        assert!((ev.value() - f.value(ev.selection())).abs() < 1e-9);
        ev.accept(0);
        assert!((ev.value() - f.value(ev.selection())).abs() < 1e-9);
    }
}
