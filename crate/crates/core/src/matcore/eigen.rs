//! Eigenvalue solvers sized for the n <= 12 envelope.
//!
//! Symmetric states take the cyclic Jacobi route; everything else goes
//! through a complex Hessenberg QR iteration with Wilkinson shifts.

use super::SquareMatrix;
use crate::error::{Error, Result};
use num_complex::Complex64;

/// Eigenvalues of a symmetric matrix by cyclic Jacobi sweeps, ascending.
///
/// The caller is responsible for symmetry; the routine symmetrizes its
/// working copy so tiny asymmetries do not bias the rotations.
pub fn symmetric_eigenvalues(m: &SquareMatrix) -> Vec<f64> {
    let n = m.n();
    let mut a = m.sym_part();
    let tol = 1e-15 * a.frobenius_norm().max(1.0);

    for _sweep in 0..60 {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in p + 1..n {
                off += a.get(p, q).abs();
            }
        }
        if off <= tol {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a.get(p, q);
                if apq.abs() <= f64::EPSILON * tol.max(1e-300) {
                    continue;
                }
                let theta = (a.get(q, q) - a.get(p, p)) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a.get(k, p);
                    let akq = a.get(k, q);
                    a.set(k, p, c * akp - s * akq);
                    a.set(k, q, s * akp + c * akq);
                }
                for k in 0..n {
                    let apk = a.get(p, k);
                    let aqk = a.get(q, k);
                    a.set(p, k, c * apk - s * aqk);
                    a.set(q, k, s * apk + c * aqk);
                }
            }
        }
    }

    let mut eigs: Vec<f64> = (0..n).map(|i| a.get(i, i)).collect();
    eigs.sort_by(f64::total_cmp);
    eigs
}

/// Eigenvalues of a general real matrix, sorted by (re, im).
///
/// Reduces to Hessenberg form and runs a complex single-shift QR
/// iteration; conjugate pairs come out conjugate up to rounding.
pub fn eigenvalues(m: &SquareMatrix) -> Result<Vec<Complex64>> {
    let n = m.n();
    let mut h = to_complex_hessenberg(m);
    let mut eigs = vec![Complex64::new(0.0, 0.0); n];
    let mut hi = n; // active block is rows/cols 0..hi
    let mut iterations = 0usize;
    let max_iterations = 100 * n.max(1);

    while hi > 0 {
        if hi == 1 {
            eigs[0] = h[0][0];
            break;
        }
        // Deflate negligible subdiagonals from the bottom of the block.
        let k = hi - 1;
        let scale = h[k - 1][k - 1].norm() + h[k][k].norm();
        if h[k][k - 1].norm() <= f64::EPSILON * scale.max(f64::MIN_POSITIVE) {
            eigs[k] = h[k][k];
            hi -= 1;
            continue;
        }

        iterations += 1;
        if iterations > max_iterations {
            return Err(Error::NoConvergence { iterations });
        }

        // Wilkinson shift: eigenvalue of the trailing 2x2 closest to h[k][k].
        let a = h[k - 1][k - 1];
        let b = h[k - 1][k];
        let c = h[k][k - 1];
        let d = h[k][k];
        let mean = (a + d) * 0.5;
        let disc = ((a - d) * (a - d) * 0.25 + b * c).sqrt();
        let r1 = mean + disc;
        let r2 = mean - disc;
        let shift = if (r1 - d).norm() <= (r2 - d).norm() {
            r1
        } else {
            r2
        };

        qr_step(&mut h, hi, shift);
    }

    eigs.sort_by(|x, y| x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im)));
    Ok(eigs)
}

/// Real Householder Hessenberg reduction, lifted to complex storage.
#[allow(clippy::needless_range_loop)] // index loops mirror the in-place transforms
fn to_complex_hessenberg(m: &SquareMatrix) -> Vec<Vec<Complex64>> {
    let n = m.n();
    let mut a: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| m.get(i, j)).collect())
        .collect();

    for k in 0..n.saturating_sub(2) {
        let mut v: Vec<f64> = (k + 1..n).map(|i| a[i][k]).collect();
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
        // A <- H A
        for j in 0..n {
            let s: f64 = (k + 1..n).map(|i| v[i - k - 1] * a[i][j]).sum();
            for i in k + 1..n {
                a[i][j] -= beta * v[i - k - 1] * s;
            }
        }
        // A <- A H
        for i in 0..n {
            let s: f64 = (k + 1..n).map(|j| a[i][j] * v[j - k - 1]).sum();
            for j in k + 1..n {
                a[i][j] -= beta * s * v[j - k - 1];
            }
        }
    }

    (0..n)
        .map(|i| (0..n).map(|j| Complex64::new(a[i][j], 0.0)).collect())
        .collect()
}

/// One explicit shifted QR step, H <- RQ + shift, on the leading hi x hi block.
#[allow(clippy::needless_range_loop)] // index loops mirror the in-place transforms
fn qr_step(h: &mut [Vec<Complex64>], hi: usize, shift: Complex64) {
    for i in 0..hi {
        h[i][i] -= shift;
    }
    // Givens rotations zeroing the subdiagonal of the Hessenberg block.
    let mut rotations = Vec::with_capacity(hi - 1);
    for k in 0..hi - 1 {
        let (c, s) = givens(h[k][k], h[k + 1][k]);
        for j in k..hi {
            let top = h[k][j];
            let bottom = h[k + 1][j];
            h[k][j] = c * top + s * bottom;
            h[k + 1][j] = -s.conj() * top + c * bottom;
        }
        rotations.push((c, s));
    }
    // Multiply R by the accumulated Q on the right.
    for (k, (c, s)) in rotations.into_iter().enumerate() {
        for row in h.iter_mut().take((k + 2).min(hi)) {
            let left = row[k];
            let right = row[k + 1];
            row[k] = c * left + s.conj() * right;
            row[k + 1] = -s * left + c * right;
        }
    }
    for i in 0..hi {
        h[i][i] += shift;
    }
}

/// Complex Givens rotation with real c: [c s; -conj(s) c] [a; b] = [r; 0].
fn givens(a: Complex64, b: Complex64) -> (Complex64, Complex64) {
    if b.norm() == 0.0 {
        return (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0));
    }
    if a.norm() == 0.0 {
        return (Complex64::new(0.0, 0.0), b.conj() / b.norm());
    }
    let denom = (a.norm_sqr() + b.norm_sqr()).sqrt();
    let c = Complex64::new(a.norm() / denom, 0.0);
    let s = (a / a.norm()) * (b.conj() / denom);
    (c, s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample;

    #[test]
    fn jacobi_on_known_symmetric() {
        let swap = SquareMatrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let eigs = symmetric_eigenvalues(&swap);
        assert!((eigs[0] + 1.0).abs() < 1e-14);
        assert!((eigs[1] - 1.0).abs() < 1e-14);

        let m = SquareMatrix::from_rows(&[vec![2.0, 1.0], vec![1.0, 2.0]]).unwrap();
        let eigs = symmetric_eigenvalues(&m);
        assert!((eigs[0] - 1.0).abs() < 1e-13);
        assert!((eigs[1] - 3.0).abs() < 1e-13);
    }

    #[test]
    fn jacobi_matches_trace_and_det() {
        let mut rng = sample::rng(31);
        for n in 2..=8 {
            let m = sample::symmetric(&mut rng, n);
            let eigs = symmetric_eigenvalues(&m);
            let sum: f64 = eigs.iter().sum();
            let prod: f64 = eigs.iter().product();
            assert!((sum - m.trace()).abs() < 1e-11);
            assert!((prod - m.det()).abs() < 1e-10);
        }
    }

    #[test]
    fn general_solver_handles_complex_pairs() {
        let rot = SquareMatrix::from_rows(&[vec![0.0, -1.0], vec![1.0, 0.0]]).unwrap();
        let eigs = eigenvalues(&rot).unwrap();
        assert!((eigs[0] - Complex64::new(0.0, -1.0)).norm() < 1e-12);
        assert!((eigs[1] - Complex64::new(0.0, 1.0)).norm() < 1e-12);
    }

    #[test]
    fn general_solver_on_triangular_input() {
        let t = SquareMatrix::from_rows(&[
            vec![3.0, 1.0, 4.0],
            vec![0.0, -2.0, 1.5],
            vec![0.0, 0.0, 0.5],
        ])
        .unwrap();
        let eigs = eigenvalues(&t).unwrap();
        let expected = [-2.0, 0.5, 3.0];
        for (e, want) in eigs.iter().zip(expected) {
            assert!(
                (e - Complex64::new(want, 0.0)).norm() < 1e-10,
                "{e} vs {want}"
            );
        }
    }

    #[test]
    fn general_solver_matches_trace_and_det() {
        let mut rng = sample::rng(32);
        for n in 2..=8 {
            let m = sample::matrix(&mut rng, n);
            let eigs = eigenvalues(&m).unwrap();
            let sum: Complex64 = eigs.iter().sum();
            let prod: Complex64 = eigs.iter().product();
            assert!(
                (sum.re - m.trace()).abs() < 1e-10,
                "trace mismatch at n={n}"
            );
            assert!(sum.im.abs() < 1e-10);
            assert!((prod.re - m.det()).abs() < 1e-9, "det mismatch at n={n}");
            assert!(prod.im.abs() < 1e-9);
        }
    }

    #[test]
    fn general_solver_agrees_with_jacobi_on_symmetric() {
        let mut rng = sample::rng(33);
        let m = sample::symmetric(&mut rng, 5);
        let sym = symmetric_eigenvalues(&m);
        let gen = eigenvalues(&m).unwrap();
        for (a, b) in sym.iter().zip(gen.iter()) {
            assert!((b - Complex64::new(*a, 0.0)).norm() < 1e-9);
        }
    }
}
