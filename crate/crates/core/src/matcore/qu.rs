//! QU factorization g = a b with a orthogonal and b upper triangular with
//! positive diagonal. The positive-diagonal convention makes the factors
//! unique, so the factorization is a bijection GL(n,R) ~ O(n) x B.

use super::SquareMatrix;
use crate::error::{Error, Result};
use crate::tolerances;

/// The unique factors of an invertible matrix.
#[derive(Clone, Debug)]
pub struct QuFactors {
    /// a in O(n): a^T a = 1.
    pub orthogonal: SquareMatrix,
    /// b in B: upper triangular with strictly positive diagonal.
    pub upper: SquareMatrix,
}

/// Factors g with the default relative singularity threshold.
pub fn qu_factorize(g: &SquareMatrix) -> Result<QuFactors> {
    qu_factorize_with(g, tolerances::SINGULARITY_THRESHOLD)
}

/// Householder QR followed by a diagonal sign fix. Rejects inputs whose
/// triangular factor has a diagonal entry below `rel_threshold` times the
/// max-norm of g.
pub fn qu_factorize_with(g: &SquareMatrix, rel_threshold: f64) -> Result<QuFactors> {
    let n = g.n();
    let mut r = g.clone();
    let mut q = SquareMatrix::identity(n);

    for k in 0..n.saturating_sub(1) {
        let mut v: Vec<f64> = (k..n).map(|i| r.get(i, k)).collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        let alpha = if v[0] >= 0.0 { -norm } else { norm };
        v[0] -= alpha;
        let v_norm_sq: f64 = v.iter().map(|x| x * x).sum();
        if v_norm_sq == 0.0 {
            continue;
        }
        let beta = 2.0 / v_norm_sq;
        // r <- H r with H = I - beta v v^T acting on rows k..n
        for j in k..n {
            let s: f64 = (k..n).map(|i| v[i - k] * r.get(i, j)).sum();
            for i in k..n {
                let val = r.get(i, j) - beta * v[i - k] * s;
                r.set(i, j, val);
            }
        }
        // q <- q H (accumulates the product of reflections)
        for i in 0..n {
            let s: f64 = (k..n).map(|j| q.get(i, j) * v[j - k]).sum();
            for j in k..n {
                let val = q.get(i, j) - beta * s * v[j - k];
                q.set(i, j, val);
            }
        }
    }

    // Positive-diagonal convention: flip matching columns of q and rows of r.
    for i in 0..n {
        if r.get(i, i) < 0.0 {
            for j in 0..n {
                r.set(i, j, -r.get(i, j));
                q.set(j, i, -q.get(j, i));
            }
        }
    }
    // Clear the rounding residue below the diagonal.
    for i in 0..n {
        for j in 0..i {
            r.set(i, j, 0.0);
        }
    }

    let threshold = rel_threshold * g.max_norm();
    for i in 0..n {
        let pivot = r.get(i, i);
        // <= so that the zero matrix (threshold 0) is still rejected
        if pivot.abs() <= threshold {
            return Err(Error::NearSingular { pivot, threshold });
        }
    }

    Ok(QuFactors {
        orthogonal: q,
        upper: r,
    })
}
