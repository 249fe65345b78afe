//! Minimal symmetric factorization support for the log-determinant
//! objectives. Matrices here are tiny (|S| x |S| with |S| <= a few hundred),
//! so a plain Cholesky recomputed from scratch per evaluation is the right
//! trade-off.

use crate::error::{Error, Result};

/// In-place lower Cholesky of a symmetric positive definite matrix stored
/// row-major; returns `log det = 2 * sum(log diag(L))`. Fails if a pivot is
/// not strictly positive.
fn cholesky_logdet_once(a: &mut [f64], k: usize) -> Option<f64> {
    let mut logdet = 0.0;
    for i in 0..k {
        for j in 0..=i {
            let mut sum = a[i * k + j];
            for p in 0..j {
                sum -= a[i * k + p] * a[j * k + p];
            }
            if i == j {
                if sum <= 0.0 {
                    return None;
                }
                let l = sum.sqrt();
                a[i * k + i] = l;
                logdet += 2.0 * l.ln();
            } else {
                a[i * k + j] = sum / a[j * k + j];
            }
        }
    }
    Some(logdet)
}

/// Log-determinant via Cholesky with a single jitter retry: on failure the
/// diagonal is bumped by 1e-10 once, then the error is final.
pub fn logdet_spd(matrix: &[f64], k: usize) -> Result<f64> {
    debug_assert_eq!(matrix.len(), k * k);
    if k == 0 {
        return Ok(0.0);
    }
    let mut work = matrix.to_vec();
    if let Some(v) = cholesky_logdet_once(&mut work, k) {
        return Ok(v);
    }
    work.copy_from_slice(matrix);
    for i in 0..k {
        work[i * k + i] += 1e-10;
    }
    cholesky_logdet_once(&mut work, k).ok_or_else(|| {
        Error::Factorization(format!("{k}x{k} submatrix is not positive definite"))
    })
}
