use std::sync::Arc;

use crate::data::VectorDataset;
use crate::error::{Error, Result};
use crate::objective::Objective;
use crate::objectives::linalg::logdet_spd;
use crate::objectives::SeKernel;
use crate::set::{ElementSet, GroundSet, PayloadKind};

/// Determinantal point process MAP score: `f(S) = log det(K_S)` with the
/// convention `det(K_emptyset) = 1`, so `f({}) = 0`. Submodular but neither
/// monotone nor nonnegative in general.
#[derive(Debug, Clone)]
pub struct DppLogDet {
    kernel: Vec<f64>,
    ground: GroundSet,
}

impl DppLogDet {
    /// Build from a full symmetric positive definite kernel matrix
    /// (row-major, n x n). Positive definiteness of principal submatrices
    /// follows, so evaluation cannot fail later.
    pub fn new(kernel: Vec<f64>, n: usize) -> Result<Self> {
        if n == 0 || kernel.len() != n * n {
            return Err(Error::InvalidParameter(format!(
                "kernel must be n x n with n >= 1, got {} values for n={n}",
                kernel.len()
            )));
        }
        for i in 0..n {
            for j in 0..i {
                if (kernel[i * n + j] - kernel[j * n + i]).abs() > 1e-12 {
                    return Err(Error::InvalidParameter(format!(
                        "kernel is not symmetric at ({i}, {j})"
                    )));
                }
            }
        }
        logdet_spd(&kernel, n)?;
        Ok(DppLogDet {
            kernel,
            ground: GroundSet::new(n, PayloadKind::Abstract),
        })
    }

    /// Convenience kernel from vector data: `K(i, j) = q^2 * SE(x_i, x_j)`.
    /// The quality scale `q > 1` lifts singleton determinants above one so
    /// that greedy selection has positive gains to work with.
    pub fn from_se(data: &Arc<VectorDataset>, se: SeKernel, quality: f64) -> Result<Self> {
        if !quality.is_finite() || quality <= 0.0 {
            return Err(Error::InvalidParameter("quality must be > 0".into()));
        }
        let n = data.len();
        let q2 = quality * quality;
        let mut kernel = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..=i {
                let v = q2 * se.eval(data.row(i), data.row(j));
                kernel[i * n + j] = v;
                kernel[j * n + i] = v;
            }
        }
        DppLogDet::new(kernel, n)
    }

    pub fn entry(&self, i: u32, j: u32) -> f64 {
        self.kernel[i as usize * self.ground.len() + j as usize]
    }
}

impl Objective for DppLogDet {
    fn ground(&self) -> &GroundSet {
        &self.ground
    }

    fn value(&self, s: &ElementSet) -> f64 {
        let k = s.len();
        if k == 0 {
            return 0.0;
        }
        let n = self.ground.len();
        let ids = s.as_sorted_slice();
        let mut m = vec![0.0; k * k];
        for (i, &a) in ids.iter().enumerate() {
            for (j, &b) in ids.iter().enumerate().take(i + 1) {
                let v = self.kernel[a as usize * n + b as usize];
                m[i * k + j] = v;
                m[j * k + i] = v;
            }
        }
        logdet_spd(&m, k).expect("principal submatrix of a PD kernel is PD")
    }

    fn monotone(&self) -> bool {
        false
    }

    fn nonnegative(&self) -> bool {
        false
    }
}
