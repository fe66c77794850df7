//! The triangular projections and the three classical r-matrices.
//!
//! gl(n,R) splits as the direct sum of the skew-symmetric subalgebra and
//! the upper triangular subalgebra; the associated projections produce
//! the QU r-matrix R = (pi_B - pi_A)/2. Two further operators from the
//! same triangular data, R' and R'' = R_a, select the related hierarchies.
//! All three solve the modified classical Yang-Baxter equation with the
//! convention [OX,OY] - O([OX,Y] + [X,OY]) = -[X,Y]/4.

use crate::matcore::{comm, SquareMatrix};

/// Selector for the three r-matrix operators.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RMatrixKind {
    /// R = (pi_B - pi_A)/2, attached to the QU factorization.
    Qu,
    /// R'(X) = (X_> + X_0 - X_<)/2, from the triangular-plus-strictly-lower splitting.
    Prime,
    /// R'' = R_a, the shared antisymmetric part of R and R'.
    Skew,
}

impl RMatrixKind {
    pub const ALL: [RMatrixKind; 3] = [RMatrixKind::Qu, RMatrixKind::Prime, RMatrixKind::Skew];

    pub fn as_str(self) -> &'static str {
        match self {
            RMatrixKind::Qu => "qu",
            RMatrixKind::Prime => "prime",
            RMatrixKind::Skew => "skew",
        }
    }
}

impl std::fmt::Display for RMatrixKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Component selector for an r-matrix operator.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RPart {
    Full,
    Antisymmetric,
    Symmetric,
}

/// Projection onto the skew-symmetric subalgebra: pi_A(X) = X_< - (X_<)^T.
pub fn project_a(x: &SquareMatrix) -> SquareMatrix {
    let n = x.n();
    SquareMatrix::from_fn(n, |i, j| {
        if i > j {
            x.get(i, j)
        } else if i < j {
            -x.get(j, i)
        } else {
            0.0
        }
    })
}

/// Projection onto the upper triangular subalgebra:
/// pi_B(X) = X_> + X_0 + (X_<)^T.
pub fn project_b(x: &SquareMatrix) -> SquareMatrix {
    let n = x.n();
    SquareMatrix::from_fn(n, |i, j| {
        if i < j {
            x.get(i, j) + x.get(j, i)
        } else if i == j {
            x.get(i, j)
        } else {
            0.0
        }
    })
}

/// Applies the full operator of the selected kind.
pub fn apply_r(kind: RMatrixKind, x: &SquareMatrix) -> SquareMatrix {
    apply_r_part(kind, RPart::Full, x)
}

/// Applies the selected component of the selected kind.
///
/// The antisymmetric part is (X_> - X_<)/2 for every kind; the symmetric
/// parts are (X_0)/2 + (X_<)^T for R, (X_0)/2 for R', and zero for R''.
pub fn apply_r_part(kind: RMatrixKind, part: RPart, x: &SquareMatrix) -> SquareMatrix {
    let n = x.n();
    SquareMatrix::from_fn(n, |i, j| {
        let antisym = if i < j {
            0.5 * x.get(i, j)
        } else if i > j {
            -0.5 * x.get(i, j)
        } else {
            0.0
        };
        let sym = match kind {
            RMatrixKind::Qu => {
                if i == j {
                    0.5 * x.get(i, j)
                } else if i < j {
                    x.get(j, i) // transposed strictly lower part
                } else {
                    0.0
                }
            }
            RMatrixKind::Prime => {
                if i == j {
                    0.5 * x.get(i, j)
                } else {
                    0.0
                }
            }
            RMatrixKind::Skew => 0.0,
        };
        match part {
            RPart::Full => antisym + sym,
            RPart::Antisymmetric => antisym,
            RPart::Symmetric => sym,
        }
    })
}

/// The pair (R_a X, R_s X) of the QU r-matrix.
pub fn apply_r_parts(x: &SquareMatrix) -> (SquareMatrix, SquareMatrix) {
    (
        apply_r_part(RMatrixKind::Qu, RPart::Antisymmetric, x),
        apply_r_part(RMatrixKind::Qu, RPart::Symmetric, x),
    )
}

/// r_{+-} = R_a +- id/2, so that r_+ - r_- = id.
pub fn apply_r_pm(sign: i8, x: &SquareMatrix) -> SquareMatrix {
    let ra = apply_r_part(RMatrixKind::Qu, RPart::Antisymmetric, x);
    let half = x.scale(0.5);
    if sign >= 0 {
        &ra + &half
    } else {
        &ra - &half
    }
}

/// The mCYBE residual [OX,OY] - O([OX,Y] + [X,OY]) + c [X,Y] for an
/// arbitrary linear operator O. Solutions make this vanish; the
/// convention used throughout the crate is c = 1/4.
pub fn mcybe_residual(
    op: &dyn Fn(&SquareMatrix) -> SquareMatrix,
    x: &SquareMatrix,
    y: &SquareMatrix,
    c: f64,
) -> SquareMatrix {
    let ox = op(x);
    let oy = op(y);
    let inner = &comm(&ox, y) + &comm(x, &oy);
    let lhs = &comm(&ox, &oy) - &op(&inner);
    &lhs + &comm(x, y).scale(c)
}

/// mCYBE residual for one of the named operators or its antisymmetric part.
pub fn mcybe_residual_kind(
    kind: RMatrixKind,
    part: RPart,
    x: &SquareMatrix,
    y: &SquareMatrix,
    c: f64,
) -> SquareMatrix {
    mcybe_residual(&|z| apply_r_part(kind, part, z), x, y, c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::trace_form;
    use crate::sample;
    use crate::tolerances::{MCYBE_TOL, TRACE_ADJOINT_TOL};

    fn m2(a: f64, b: f64, c: f64, d: f64) -> SquareMatrix {
        SquareMatrix::from_rows(&[vec![a, b], vec![c, d]]).unwrap()
    }

    const FOUR_OPERATORS: [(RMatrixKind, RPart); 4] = [
        (RMatrixKind::Qu, RPart::Full),
        (RMatrixKind::Qu, RPart::Antisymmetric),
        (RMatrixKind::Prime, RPart::Full),
        (RMatrixKind::Skew, RPart::Full),
    ];

    #[test]
    fn projection_fixtures() {
        let id = SquareMatrix::identity(2);
        assert_eq!(project_a(&id), SquareMatrix::zeros(2));
        assert_eq!(project_b(&id), id);

        let x = m2(1.0, 2.0, 3.0, 4.0);
        assert_eq!(project_a(&x), m2(0.0, -3.0, 3.0, 0.0));
        assert_eq!(project_b(&x), m2(1.0, 5.0, 0.0, 4.0));

        let mut rng = sample::rng(51);
        let skew = sample::antisymmetric(&mut rng, 4);
        assert_eq!(project_a(&skew), skew);
        let upper = crate::matcore::triangular_split(&sample::matrix(&mut rng, 4)).strict_upper;
        assert_eq!(project_b(&upper), upper);
    }

    #[test]
    fn projections_sum_to_identity_and_are_idempotent() {
        let mut rng = sample::rng(52);
        for n in 2..=5 {
            let x = sample::matrix(&mut rng, n);
            let pa = project_a(&x);
            let pb = project_b(&x);
            // reassociation x_ij - x_ji + x_ji leaves at most one ulp
            assert!((&(&pa + &pb) - &x).max_norm() <= 4.0 * f64::EPSILON);
            assert_eq!(project_a(&pa), pa);
            assert_eq!(project_b(&pb), pb);
            assert_eq!(project_a(&pb), SquareMatrix::zeros(n));
        }
    }

    #[test]
    fn apply_r_fixtures() {
        let id = SquareMatrix::identity(2);
        assert_eq!(apply_r(RMatrixKind::Qu, &id), id.scale(0.5));

        let x = m2(1.0, 2.0, 3.0, 4.0);
        assert_eq!(apply_r(RMatrixKind::Qu, &x), m2(0.5, 4.0, -1.5, 2.0));
        assert_eq!(apply_r(RMatrixKind::Prime, &x), m2(0.5, 1.0, -1.5, 2.0));
        assert_eq!(apply_r(RMatrixKind::Skew, &x), m2(0.0, 1.0, -1.5, 0.0));
    }

    #[test]
    fn parts_fixtures() {
        let id = SquareMatrix::identity(2);
        let (ra, rs) = apply_r_parts(&id);
        assert_eq!(ra, SquareMatrix::zeros(2));
        assert_eq!(rs, id.scale(0.5));

        let x = m2(1.0, 2.0, 3.0, 4.0);
        let (ra, rs) = apply_r_parts(&x);
        assert_eq!(ra, m2(0.0, 1.0, -1.5, 0.0));
        assert_eq!(rs, m2(0.5, 3.0, 0.0, 2.0));
        assert_eq!(&ra + &rs, apply_r(RMatrixKind::Qu, &x));
    }

    #[test]
    fn parts_recompose_for_every_kind() {
        let mut rng = sample::rng(53);
        let x = sample::matrix(&mut rng, 4);
        for kind in RMatrixKind::ALL {
            let full = apply_r(kind, &x);
            let a = apply_r_part(kind, RPart::Antisymmetric, &x);
            let s = apply_r_part(kind, RPart::Symmetric, &x);
            assert_eq!(&a + &s, full);
        }
        // R'' is the shared antisymmetric part
        assert_eq!(
            apply_r(RMatrixKind::Skew, &x),
            apply_r_part(RMatrixKind::Prime, RPart::Antisymmetric, &x)
        );
    }

    #[test]
    fn ra_swaps_skew_and_symmetric() {
        // R_a maps the skew-symmetric subalgebra into the symmetric
        // matrices and vice versa, with the offending part exactly zero.
        let mut rng = sample::rng(54);
        let skew = sample::antisymmetric(&mut rng, 4);
        let (ra, _) = apply_r_parts(&skew);
        assert_eq!(ra.skew_part(), SquareMatrix::zeros(4));

        let sym = sample::symmetric(&mut rng, 4);
        let (ra, _) = apply_r_parts(&sym);
        assert_eq!(ra.sym_part(), SquareMatrix::zeros(4));
    }

    #[test]
    fn parts_are_adjoint_and_antiadjoint() {
        let mut rng = sample::rng(55);
        for _ in 0..20 {
            let x = sample::matrix(&mut rng, 4);
            let y = sample::matrix(&mut rng, 4);
            let (rax, rsx) = apply_r_parts(&x);
            let (ray, rsy) = apply_r_parts(&y);
            let anti = trace_form(&rax, &y).unwrap() + trace_form(&x, &ray).unwrap();
            let sym = trace_form(&rsx, &y).unwrap() - trace_form(&x, &rsy).unwrap();
            assert!(anti.abs() < TRACE_ADJOINT_TOL);
            assert!(sym.abs() < TRACE_ADJOINT_TOL);
        }
    }

    #[test]
    fn r_pm_fixtures() {
        let id = SquareMatrix::identity(2);
        assert_eq!(apply_r_pm(1, &id), id.scale(0.5));

        let x = m2(1.0, 2.0, 3.0, 4.0);
        assert_eq!(apply_r_pm(1, &x), m2(0.5, 2.0, 0.0, 2.0));

        let upper = m2(0.0, 7.0, 0.0, 0.0);
        assert_eq!(apply_r_pm(-1, &upper), SquareMatrix::zeros(2));

        // r_+ - r_- = id
        assert_eq!(&apply_r_pm(1, &x) - &apply_r_pm(-1, &x), x);
    }

    #[test]
    fn mcybe_trivial_cases() {
        let mut rng = sample::rng(56);
        let x = sample::matrix(&mut rng, 3);
        for (kind, part) in FOUR_OPERATORS {
            assert_eq!(
                mcybe_residual_kind(kind, part, &x, &x, 0.25),
                SquareMatrix::zeros(3)
            );
        }
        let da = SquareMatrix::diagonal(&[1.0, -2.0, 0.5]);
        let db = SquareMatrix::diagonal(&[3.0, 0.25, -1.0]);
        for (kind, part) in FOUR_OPERATORS {
            assert_eq!(
                mcybe_residual_kind(kind, part, &da, &db, 0.25),
                SquareMatrix::zeros(3)
            );
        }
    }

    #[test]
    fn mcybe_vanishes_for_all_four_operators() {
        let mut rng = sample::rng(57);
        for n in 2..=4 {
            for _ in 0..100 {
                let x = sample::matrix(&mut rng, n);
                let y = sample::matrix(&mut rng, n);
                for (kind, part) in FOUR_OPERATORS {
                    let res = mcybe_residual_kind(kind, part, &x, &y, 0.25).max_norm();
                    assert!(
                        res < MCYBE_TOL,
                        "kind {kind:?} part {part:?} residual {res}"
                    );
                }
            }
        }
    }

    #[test]
    fn mcybe_detects_a_wrong_constant() {
        // guards the c = 1/4 convention against a vacuously-zero checker
        let mut rng = sample::rng(58);
        let x = sample::matrix(&mut rng, 3);
        let y = sample::matrix(&mut rng, 3);
        let res = mcybe_residual_kind(RMatrixKind::Qu, RPart::Full, &x, &y, 1.0).max_norm();
        assert!(res > 1e-3, "residual with c=1 should be visible, got {res}");
    }
}
