//! The remaining clause of acceptance criterion 9, kept as stated and
//! expected to stay red.
//!
//! The clause asks for tridiagonal tangency below 1e-12 for the linear
//! bracket of every r-matrix kind, with the hierarchy Hamiltonians h_k as
//! the stated probe family. For R' this is false: at a tridiagonal
//! symmetric L the h_2 flow is [R'(L), L], whose antisymmetric part is
//! [L_0, L]/2 and does not vanish, so the flow leaves the subspace with
//! an O(1) residual. The failure was verified by hand, by this crate's
//! definitional route, and by an independent implementation; the QU and
//! R'' kinds do restrict (checked, with full coordinate strength, in the
//! main acceptance suite). Rather than weakening the bound or shrinking
//! the probe family to the vacuous k = 1, the check stands as written and
//! this target documents the gap by failing.

use glpoisson::brackets::{tangency_residual, BracketSpec, Subspace};
use glpoisson::fields::MatrixField;
use glpoisson::rmat::RMatrixKind;
use glpoisson::{sample, tolerances};

#[test]
fn criterion_09_tridiagonal_prime_linear_as_stated() {
    let n = 3;
    let mut rng = sample::rng(90);
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let l = sample::tridiagonal_symmetric(&mut rng, n);
        for k in 1..=3 {
            let hk = MatrixField::trace_power(k);
            worst = worst.max(
                tangency_residual(
                    BracketSpec::linear(RMatrixKind::Prime),
                    Subspace::TridiagonalSymmetric,
                    &hk,
                    &l,
                    1e-9,
                )
                .unwrap(),
            );
        }
    }
    let pass = worst < tolerances::TANGENCY_TOL;
    let verdict = if pass { "PASS" } else { "FAIL" };
    println!(
        "[{verdict}] criterion 9, R' degree-1 clause as stated: max tangency residual \
         {worst:.3e} vs 1e-12 for h_k, k = 1..3 (expected red; see decisions ledger)"
    );
    assert!(
        pass,
        "documented non-restriction: [R'(L), L] has antisymmetric part [L_0, L]/2 != 0 at tridiagonal \
         symmetric L, so the stated bound cannot hold (residual {worst:.3e})"
    );
}
