//! The phase space M = G x gl(n,R), a model of T*GL(n,R), with its
//! canonical bracket, the quadratic bracket descending from the
//! Heisenberg double, the S = O(n) x B action, invariant extensions of
//! functions on gl(n,R), and the reduced brackets at the slice (1_n, L).
//!
//! All derivatives on M are central finite differences along
//! one-parameter subgroup curves; no analytic chain rule through the QU
//! factorization enters, which keeps this module an independent check on
//! the direct gl(n,R) brackets.

use crate::error::{Error, Result};
use crate::fields::MatrixField;
use crate::matcore::{comm, dot, qu_factorize, SquareMatrix};
use crate::rmat::{apply_r_part, apply_r_pm, RMatrixKind, RPart};
use std::sync::Arc;

/// A point (g, L) with g invertible.
#[derive(Clone, Debug)]
pub struct PhasePoint {
    g: SquareMatrix,
    l: SquareMatrix,
}

impl PhasePoint {
    /// Validates invertibility of g against the singularity threshold.
    pub fn new(g: SquareMatrix, l: SquareMatrix) -> Result<Self> {
        if g.n() != l.n() {
            return Err(Error::DimensionMismatch {
                expected: g.n(),
                got: l.n(),
            });
        }
        qu_factorize(&g)?;
        Ok(Self { g, l })
    }

    /// The slice point (1_n, L).
    pub fn at_identity(l: SquareMatrix) -> Self {
        Self {
            g: SquareMatrix::identity(l.n()),
            l,
        }
    }

    pub fn g(&self) -> &SquareMatrix {
        &self.g
    }

    pub fn l(&self) -> &SquareMatrix {
        &self.l
    }

    pub fn n(&self) -> usize {
        self.g.n()
    }
}

/// A smooth scalar field on the phase space.
#[derive(Clone)]
pub struct PhaseField {
    label: String,
    eval: Arc<dyn Fn(&PhasePoint) -> f64 + Send + Sync>,
}

impl PhaseField {
    pub fn from_fn(
        label: impl Into<String>,
        eval: impl Fn(&PhasePoint) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            label: label.into(),
            eval: Arc::new(eval),
        }
    }

    pub fn evaluate(&self, p: &PhasePoint) -> f64 {
        (self.eval)(p)
    }

    pub fn label(&self) -> &str {
        &self.label
    }
}

impl std::fmt::Debug for PhaseField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "PhaseField({})", self.label)
    }
}

/// An element (a, b) of S = O(n) x B.
#[derive(Clone, Debug)]
pub struct SPair {
    a: SquareMatrix,
    b: SquareMatrix,
}

impl SPair {
    pub fn new(a: SquareMatrix, b: SquareMatrix) -> Result<Self> {
        if a.n() != b.n() {
            return Err(Error::DimensionMismatch {
                expected: a.n(),
                got: b.n(),
            });
        }
        let n = a.n();
        let defect = (&(&a.transpose() * &a) - &SquareMatrix::identity(n)).max_norm();
        if defect > crate::tolerances::QU_FACTOR_TOL {
            return Err(Error::InvalidConfig(format!(
                "first factor is not orthogonal: |a^T a - 1| = {defect:e}"
            )));
        }
        for i in 0..n {
            if b.get(i, i) <= 0.0 {
                return Err(Error::InvalidConfig(
                    "second factor needs a positive diagonal".into(),
                ));
            }
            for j in 0..i {
                if b.get(i, j) != 0.0 {
                    return Err(Error::InvalidConfig(
                        "second factor must be upper triangular".into(),
                    ));
                }
            }
        }
        Ok(Self { a, b })
    }

    pub fn a(&self) -> &SquareMatrix {
        &self.a
    }

    pub fn b(&self) -> &SquareMatrix {
        &self.b
    }
}

/// The S action (g, L) -> (a g b^{-1}, a L a^T).
pub fn s_action(s: &SPair, p: &PhasePoint) -> PhasePoint {
    let b_inv =
        s.b.inverse()
            .expect("b is upper triangular with positive diagonal");
    let g = &(&s.a * &p.g) * &b_inv;
    let l = &(&s.a * &p.l) * &s.a.transpose();
    PhasePoint { g, l }
}

/// The unique S-invariant extension of f: F(g, L) = f(u(g)^T L u(g))
/// with u(g) the orthogonal QU factor, so that F(1_n, L) = f(L).
pub fn invariant_extension(f: &MatrixField) -> PhaseField {
    let f = f.clone();
    PhaseField::from_fn(format!("ext({})", f.label()), move |p| {
        let u = qu_factorize(p.g())
            .expect("phase points keep g invertible")
            .orthogonal;
        f.evaluate(&(&(&u.transpose() * p.l()) * &u))
    })
}

/// The three first derivatives of a phase field at a point, computed by
/// central differences with the given step: <nabla_1 F, X> along
/// e^{tX} g, <nabla_1' F, X> along g e^{tX}, and the gradient d_2 in the
/// second argument.
#[derive(Clone, Debug)]
pub struct PhaseGradients {
    pub nabla1: SquareMatrix,
    pub nabla1_prime: SquareMatrix,
    pub d2: SquareMatrix,
}

/// e^{t E_ij} in closed form: the series stops at the linear term off the
/// diagonal because E_ij^2 = 0.
fn basis_curve(n: usize, i: usize, j: usize, t: f64) -> SquareMatrix {
    let mut m = SquareMatrix::identity(n);
    if i == j {
        m.set(i, i, t.exp());
    } else {
        m.set(i, j, t);
    }
    m
}

pub fn phase_gradients(f: &PhaseField, p: &PhasePoint, step: f64) -> PhaseGradients {
    let n = p.n();
    let mut nabla1 = SquareMatrix::zeros(n);
    let mut nabla1_prime = SquareMatrix::zeros(n);
    let mut d2 = SquareMatrix::zeros(n);

    for i in 0..n {
        for j in 0..n {
            let plus = basis_curve(n, i, j, step);
            let minus = basis_curve(n, i, j, -step);

            let left = f.evaluate(&PhasePoint {
                g: &plus * &p.g,
                l: p.l.clone(),
            }) - f.evaluate(&PhasePoint {
                g: &minus * &p.g,
                l: p.l.clone(),
            });
            nabla1.set(j, i, left / (2.0 * step));

            let right = f.evaluate(&PhasePoint {
                g: &p.g * &plus,
                l: p.l.clone(),
            }) - f.evaluate(&PhasePoint {
                g: &p.g * &minus,
                l: p.l.clone(),
            });
            nabla1_prime.set(j, i, right / (2.0 * step));

            let mut l_plus = p.l.clone();
            l_plus.set(i, j, l_plus.get(i, j) + step);
            let mut l_minus = p.l.clone();
            l_minus.set(i, j, l_minus.get(i, j) - step);
            let second = f.evaluate(&PhasePoint {
                g: p.g.clone(),
                l: l_plus,
            }) - f.evaluate(&PhasePoint {
                g: p.g.clone(),
                l: l_minus,
            });
            d2.set(j, i, second / (2.0 * step));
        }
    }

    PhaseGradients {
        nabla1,
        nabla1_prime,
        d2,
    }
}

/// The canonical bracket from precomputed gradients:
/// <nabla_1 F, d_2 H> - <nabla_1 H, d_2 F> + <L, [d_2 F, d_2 H]>.
pub fn pb1_from(gf: &PhaseGradients, gh: &PhaseGradients, l: &SquareMatrix) -> f64 {
    dot(&gf.nabla1, &gh.d2) - dot(&gh.nabla1, &gf.d2) + dot(l, &comm(&gf.d2, &gh.d2))
}

pub fn pb1(f: &PhaseField, h: &PhaseField, p: &PhasePoint, step: f64) -> f64 {
    let gf = phase_gradients(f, p, step);
    let gh = phase_gradients(h, p, step);
    pb1_from(&gf, &gh, &p.l)
}

/// The quadratic bracket from precomputed gradients: the five-term
/// expression with R_a of the QU kind and r_{+-} = R_a +- id/2.
pub fn pb2_from(gf: &PhaseGradients, gh: &PhaseGradients, l: &SquareMatrix) -> f64 {
    let ra = |x: &SquareMatrix| apply_r_part(RMatrixKind::Qu, RPart::Antisymmetric, x);

    let n2f = l * &gf.d2;
    let n2pf = &gf.d2 * l;
    let n2h = l * &gh.d2;
    let n2ph = &gh.d2 * l;

    let mix_h = &apply_r_pm(1, &n2ph) - &apply_r_pm(-1, &n2h);
    let mix_f = &apply_r_pm(1, &n2pf) - &apply_r_pm(-1, &n2f);

    dot(&ra(&gf.nabla1), &gh.nabla1) - dot(&ra(&gf.nabla1_prime), &gh.nabla1_prime)
        + dot(&(&n2f - &n2pf), &mix_h)
        + dot(&gf.nabla1, &mix_h)
        - dot(&gh.nabla1, &mix_f)
}

pub fn pb2(f: &PhaseField, h: &PhaseField, p: &PhasePoint, step: f64) -> f64 {
    let gf = phase_gradients(f, p, step);
    let gh = phase_gradients(h, p, step);
    pb2_from(&gf, &gh, &p.l)
}

/// The simplified quadratic bracket valid on S-invariant functions:
/// 2{F,H}_2 = <n2 F, n2' H> - <n2 H, n2' F>
///          + <nabla_1 F, n2' H + n2 H> - <nabla_1 H, n2' F + n2 F>.
pub fn pb2_invariant_form_from(gf: &PhaseGradients, gh: &PhaseGradients, l: &SquareMatrix) -> f64 {
    let n2f = l * &gf.d2;
    let n2pf = &gf.d2 * l;
    let n2h = l * &gh.d2;
    let n2ph = &gh.d2 * l;
    0.5 * (dot(&n2f, &n2ph) - dot(&n2h, &n2pf) + dot(&gf.nabla1, &(&n2ph + &n2h))
        - dot(&gh.nabla1, &(&n2pf + &n2f)))
}

pub fn pb2_invariant_form(f: &PhaseField, h: &PhaseField, p: &PhasePoint, step: f64) -> f64 {
    let gf = phase_gradients(f, p, step);
    let gh = phase_gradients(h, p, step);
    pb2_invariant_form_from(&gf, &gh, &p.l)
}

/// Max violation of the two infinitesimal S-invariance conditions at p:
/// <nabla_1' F, X> = 0 for upper triangular X, and
/// <nabla_1 F + nabla_2 F - nabla_2' F, Y> = 0 for antisymmetric Y.
pub fn invariance_residual(f: &PhaseField, p: &PhasePoint, step: f64) -> f64 {
    let g = phase_gradients(f, p, step);
    let n = p.n();
    let combo = &(&g.nabla1 + &(p.l() * &g.d2)) - &(&g.d2 * p.l());

    let mut residual = 0.0f64;
    for i in 0..n {
        // <nabla_1' F, E_ij> = (nabla_1' F)_ji for upper triangular E_ij
        for j in i..n {
            residual = residual.max(g.nabla1_prime.get(j, i).abs());
        }
        // antisymmetric basis Y = E_ij - E_ji pairs to combo_ji - combo_ij
        for j in i + 1..n {
            residual = residual.max((combo.get(j, i) - combo.get(i, j)).abs());
        }
    }
    residual
}

/// Residuals of the slice relations linking an invariant extension F to
/// its restriction f.
#[derive(Clone, Copy, Debug)]
pub struct LemmaResiduals {
    /// |nabla_1 F(1_n, L) - (r_+ - R_s)(nabla' f - nabla f)| in max-norm.
    pub nabla1_gap: f64,
    /// |d_2 F(1_n, L) - df(L)| in max-norm.
    pub d2_gap: f64,
}

impl LemmaResiduals {
    pub fn max(&self) -> f64 {
        self.nabla1_gap.max(self.d2_gap)
    }
}

/// Checks nabla_1 F(1_n,L) = (r_+ - R_s)(nabla' f(L) - nabla f(L)) and
/// d_2 F(1_n,L) = df(L) for F the invariant extension of f, with the left
/// sides computed by finite differences.
pub fn lemma_residual(f: &MatrixField, l: &SquareMatrix, step: f64) -> LemmaResiduals {
    let ext = invariant_extension(f);
    let p = PhasePoint::at_identity(l.clone());
    let g = phase_gradients(&ext, &p, step);

    // (r_+ - R_s) X = X_> - (X_<)^T, strictly upper triangular.
    let x = &f.nabla_prime(l) - &f.nabla(l);
    let rhs = SquareMatrix::from_fn(l.n(), |i, j| {
        if i < j {
            x.get(i, j) - x.get(j, i)
        } else {
            0.0
        }
    });

    LemmaResiduals {
        nabla1_gap: (&g.nabla1 - &rhs).max_norm(),
        d2_gap: (&g.d2 - &f.gradient(l)).max_norm(),
    }
}

/// The reduced bracket {f,h}_d^red(L) = {F,H}_d(1_n, L) with F, H the
/// invariant extensions. By the reduction theorem this reproduces the
/// direct linear (d=1) and quadratic (d=2) QU brackets on gl(n,R).
pub fn reduced_bracket(
    f: &MatrixField,
    h: &MatrixField,
    l: &SquareMatrix,
    degree: u8,
    step: f64,
) -> Result<f64> {
    let ext_f = invariant_extension(f);
    let ext_h = invariant_extension(h);
    let p = PhasePoint::at_identity(l.clone());
    match degree {
        1 => Ok(pb1(&ext_f, &ext_h, &p, step)),
        2 => Ok(pb2(&ext_f, &ext_h, &p, step)),
        d => Err(Error::InvalidBracket(format!(
            "reduced bracket degree {d} not in {{1,2}}"
        ))),
    }
}

/// Jacobi cyclic sum for pb1 (degree 1) or pb2 (degree 2), with inner
/// brackets evaluated at `inner_step` and wrapped as phase fields that
/// the outer bracket differentiates at `outer_step`.
pub fn pb_jacobi_residual(
    degree: u8,
    f: &PhaseField,
    g: &PhaseField,
    h: &PhaseField,
    p: &PhasePoint,
    inner_step: f64,
    outer_step: f64,
) -> Result<f64> {
    if !(degree == 1 || degree == 2) {
        return Err(Error::InvalidBracket(format!(
            "phase bracket degree {degree} not in {{1,2}}"
        )));
    }
    let pb = move |a: &PhaseField, b: &PhaseField, q: &PhasePoint| {
        if degree == 1 {
            pb1(a, b, q, inner_step)
        } else {
            pb2(a, b, q, inner_step)
        }
    };
    let wrap = |a: &PhaseField, b: &PhaseField| {
        let (a, b) = (a.clone(), b.clone());
        PhaseField::from_fn(format!("{{{},{}}}", a.label(), b.label()), move |q| {
            pb(&a, &b, q)
        })
    };

    let cyclic = |x: &PhaseField, y: &PhaseField, z: &PhaseField| -> f64 {
        let gx = phase_gradients(x, p, outer_step);
        let gyz = phase_gradients(&wrap(y, z), p, outer_step);
        if degree == 1 {
            pb1_from(&gx, &gyz, &p.l)
        } else {
            pb2_from(&gx, &gyz, &p.l)
        }
    };
    Ok(cyclic(f, g, h) + cyclic(g, h, f) + cyclic(h, f, g))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::brackets::{bracket_linear, bracket_quadratic};
    use crate::matcore::trace_form;
    use crate::sample;
    use crate::tolerances::{
        EQUIVARIANCE_TOL, EXTENSION_INVARIANCE_TOL, FD_STEP, FD_STEP_NESTED, INVARIANCE_TOL,
        LEMMA_D2_TOL, LEMMA_TOL, PB_JACOBI_TOL, PROPOSITION_TOL, STRICT_UPPER_TOL, THEOREM_TOL,
    };

    fn fixture() -> SquareMatrix {
        SquareMatrix::from_rows(&[vec![1.0, 2.0], vec![3.0, 4.0]]).unwrap()
    }

    fn random_point(rng: &mut rand_chacha::ChaCha8Rng, n: usize) -> PhasePoint {
        PhasePoint::new(sample::group_element(rng, n), sample::matrix(rng, n)).unwrap()
    }

    fn random_s_pair(rng: &mut rand_chacha::ChaCha8Rng, n: usize) -> SPair {
        SPair::new(sample::orthogonal(rng, n), sample::upper_positive(rng, n)).unwrap()
    }

    #[test]
    fn phase_point_rejects_singular_g() {
        let singular = SquareMatrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 4.0]]).unwrap();
        assert!(PhasePoint::new(singular, SquareMatrix::zeros(2)).is_err());
    }

    #[test]
    fn s_pair_validation() {
        let not_orthogonal = SquareMatrix::from_rows(&[vec![1.0, 1.0], vec![0.0, 1.0]]).unwrap();
        assert!(SPair::new(not_orthogonal.clone(), SquareMatrix::identity(2)).is_err());
        assert!(SPair::new(SquareMatrix::identity(2), not_orthogonal).is_ok());
        let negative_diag = SquareMatrix::diagonal(&[1.0, -1.0]);
        assert!(SPair::new(SquareMatrix::identity(2), negative_diag).is_err());
        let lower = SquareMatrix::from_rows(&[vec![1.0, 0.0], vec![1.0, 1.0]]).unwrap();
        assert!(SPair::new(SquareMatrix::identity(2), lower).is_err());
    }

    #[test]
    fn identity_pair_acts_trivially() {
        let mut rng = sample::rng(91);
        let p = random_point(&mut rng, 3);
        let s = SPair::new(SquareMatrix::identity(3), SquareMatrix::identity(3)).unwrap();
        let q = s_action(&s, &p);
        assert!((q.g() - p.g()).max_norm() < 1e-14);
        assert!((q.l() - p.l()).max_norm() < 1e-14);
    }

    #[test]
    fn action_composes_as_a_group_action() {
        let mut rng = sample::rng(92);
        let p = random_point(&mut rng, 3);
        let s1 = random_s_pair(&mut rng, 3);
        let s2 = random_s_pair(&mut rng, 3);
        let stepwise = s_action(&s2, &s_action(&s1, &p));
        let combined = SPair::new(&s2.a * &s1.a, &s2.b * &s1.b).unwrap();
        let at_once = s_action(&combined, &p);
        assert!((stepwise.g() - at_once.g()).max_norm() < 1e-12);
        assert!((stepwise.l() - at_once.l()).max_norm() < 1e-12);
    }

    #[test]
    fn orbit_representative_at_the_identity_slice() {
        // acting with (u(g)^T, b(g)) moves (g, L) onto (1_n, u^T L u)
        let mut rng = sample::rng(93);
        let p = random_point(&mut rng, 3);
        let factors = qu_factorize(p.g()).unwrap();
        let s = SPair::new(factors.orthogonal.transpose(), factors.upper.clone()).unwrap();
        let q = s_action(&s, &p);
        assert!((q.g() - &SquareMatrix::identity(3)).max_norm() < 1e-12);
        let expected = &(&factors.orthogonal.transpose() * p.l()) * &factors.orthogonal;
        assert!((q.l() - &expected).max_norm() < 1e-12);
    }

    #[test]
    fn extension_restricts_to_f_on_the_slice() {
        let mut rng = sample::rng(94);
        let f = MatrixField::coordinate(0, 1);
        let ext = invariant_extension(&f);
        let l = sample::matrix(&mut rng, 2);
        let p = PhasePoint::at_identity(l.clone());
        assert_eq!(ext.evaluate(&p), f.evaluate(&l));
    }

    #[test]
    fn extension_is_s_invariant() {
        let mut rng = sample::rng(95);
        for _ in 0..10 {
            let p = random_point(&mut rng, 3);
            let s = random_s_pair(&mut rng, 3);
            for f in [MatrixField::coordinate(0, 2), MatrixField::trace_power(3)] {
                let ext = invariant_extension(&f);
                let gap = (ext.evaluate(&s_action(&s, &p)) - ext.evaluate(&p)).abs();
                assert!(gap < EXTENSION_INVARIANCE_TOL, "{}: {gap}", f.label());
            }
        }
    }

    #[test]
    fn extension_at_orthogonal_g_is_conjugation() {
        let mut rng = sample::rng(96);
        let a = sample::orthogonal(&mut rng, 3);
        let l = sample::matrix(&mut rng, 3);
        let f = MatrixField::coordinate(1, 2);
        let ext = invariant_extension(&f);
        let p = PhasePoint::new(a.clone(), l.clone()).unwrap();
        let expected = f.evaluate(&(&(&a.transpose() * &l) * &a));
        assert!((ext.evaluate(&p) - expected).abs() < 1e-12);
    }

    #[test]
    fn pb1_reduces_to_lie_poisson_for_base_independent_fields() {
        let mut rng = sample::rng(97);
        let p = random_point(&mut rng, 3);
        let f1 = MatrixField::coordinate(0, 1);
        let f2 = MatrixField::coordinate(2, 0);
        let cap_f = PhaseField::from_fn("f1(L)", {
            let f1 = f1.clone();
            move |q: &PhasePoint| f1.evaluate(q.l())
        });
        let cap_h = PhaseField::from_fn("f2(L)", {
            let f2 = f2.clone();
            move |q: &PhasePoint| f2.evaluate(q.l())
        });
        let value = pb1(&cap_f, &cap_h, &p, FD_STEP);
        let lie_poisson =
            trace_form(p.l(), &comm(&f1.gradient(p.l()), &f2.gradient(p.l()))).unwrap();
        assert!((value - lie_poisson).abs() < 1e-8);
    }

    #[test]
    fn pb1_pairs_base_and_fiber_fields() {
        let mut rng = sample::rng(98);
        let p = random_point(&mut rng, 3);
        let a = sample::matrix(&mut rng, 3);
        let cap_f = PhaseField::from_fn("tr(Ag)", {
            let a = a.clone();
            move |q: &PhasePoint| crate::matcore::dot(&a, q.g())
        });
        let h = MatrixField::trace_power(2);
        let cap_h = PhaseField::from_fn("h2(L)", {
            let h = h.clone();
            move |q: &PhasePoint| h.evaluate(q.l())
        });
        let value = pb1(&cap_f, &cap_h, &p, FD_STEP);
        // nabla_1 of tr(Ag) is gA, and the Lie-Poisson term drops out
        let expected = trace_form(&(p.g() * &a), &h.gradient(p.l())).unwrap();
        assert!((value - expected).abs() < 1e-7, "{value} vs {expected}");
    }

    #[test]
    fn pb2_is_antisymmetric_and_kills_trace_power_pairs() {
        let mut rng = sample::rng(99);
        let p = random_point(&mut rng, 3);
        let ext = invariant_extension(&MatrixField::coordinate(0, 1));
        assert!(pb2(&ext, &ext, &p, FD_STEP).abs() < 1e-12);

        // fields of L alone whose gradients commute with L
        let h2 = MatrixField::trace_power(2);
        let h3 = MatrixField::trace_power(3);
        let cap_f = PhaseField::from_fn("h2(L)", {
            let h2 = h2.clone();
            move |q: &PhasePoint| h2.evaluate(q.l())
        });
        let cap_h = PhaseField::from_fn("h3(L)", {
            let h3 = h3.clone();
            move |q: &PhasePoint| h3.evaluate(q.l())
        });
        assert!(pb2(&cap_f, &cap_h, &p, FD_STEP).abs() < 1e-8);
    }

    #[test]
    fn proposition_pb2_matches_invariant_form_off_the_slice() {
        let mut rng = sample::rng(100);
        for _ in 0..5 {
            let p = random_point(&mut rng, 2);
            let fields = [
                MatrixField::coordinate(0, 0),
                MatrixField::coordinate(0, 1),
                MatrixField::trace_power(2),
            ];
            for f in &fields {
                for h in &fields {
                    let cap_f = invariant_extension(f);
                    let cap_h = invariant_extension(h);
                    let full = pb2(&cap_f, &cap_h, &p, FD_STEP);
                    let simplified = pb2_invariant_form(&cap_f, &cap_h, &p, FD_STEP);
                    assert!(
                        (full - simplified).abs() < PROPOSITION_TOL,
                        "{} vs {}: {full} != {simplified}",
                        f.label(),
                        h.label()
                    );
                }
            }
        }
    }

    #[test]
    fn invariance_residual_distinguishes_invariant_fields() {
        let mut rng = sample::rng(101);
        let p = random_point(&mut rng, 3);

        let ext = invariant_extension(&MatrixField::coordinate(1, 0));
        assert!(invariance_residual(&ext, &p, FD_STEP) < INVARIANCE_TOL);

        let trace = PhaseField::from_fn("tr(L)", |q: &PhasePoint| q.l().trace());
        assert!(invariance_residual(&trace, &p, FD_STEP) < 1e-10);

        let g11 = PhaseField::from_fn("g11", |q: &PhasePoint| q.g().get(0, 0));
        assert!(invariance_residual(&g11, &p, FD_STEP) > 0.1);
    }

    #[test]
    fn lemma_residuals_vanish_for_trace_powers_and_small_fields() {
        let mut rng = sample::rng(102);
        for k in 1..=3 {
            let l = sample::matrix(&mut rng, 3);
            let res = lemma_residual(&MatrixField::trace_power(k), &l, FD_STEP);
            assert!(res.nabla1_gap < 1e-8, "h{k}: {}", res.nabla1_gap);
            assert!(res.d2_gap < LEMMA_D2_TOL);
        }
        for n in 2..=3 {
            for _ in 0..5 {
                let l = sample::matrix(&mut rng, n);
                for i in 0..n {
                    for j in 0..n {
                        let res = lemma_residual(&MatrixField::coordinate(i, j), &l, FD_STEP);
                        assert!(
                            res.nabla1_gap < LEMMA_TOL,
                            "coord({i},{j}): {}",
                            res.nabla1_gap
                        );
                        assert!(res.d2_gap < LEMMA_D2_TOL);
                    }
                }
                let a = sample::matrix(&mut rng, n);
                let res = lemma_residual(&MatrixField::linear_pair(a), &l, FD_STEP);
                assert!(res.nabla1_gap < LEMMA_TOL);
                assert!(res.d2_gap < LEMMA_D2_TOL);
            }
        }
    }

    #[test]
    fn lemma_left_side_is_strictly_upper_for_symmetric_data() {
        let mut rng = sample::rng(103);
        let a = sample::symmetric(&mut rng, 3);
        let l = sample::symmetric(&mut rng, 3);
        let f = MatrixField::linear_pair(a);
        let ext = invariant_extension(&f);
        let p = PhasePoint::at_identity(l.clone());
        let g = phase_gradients(&ext, &p, FD_STEP);
        for i in 0..3 {
            for j in 0..=i {
                assert!(
                    g.nabla1.get(i, j).abs() < 1e-7,
                    "({i},{j}): {}",
                    g.nabla1.get(i, j)
                );
            }
        }
        let res = lemma_residual(&f, &l, FD_STEP);
        assert!(res.nabla1_gap < LEMMA_TOL);
    }

    #[test]
    fn reduced_brackets_reproduce_the_hand_fixture() {
        let l = fixture();
        let f = MatrixField::coordinate(0, 0);
        let h = MatrixField::coordinate(0, 1);
        let deg2 = reduced_bracket(&f, &h, &l, 2, FD_STEP).unwrap();
        assert!((deg2 - 3.0).abs() < THEOREM_TOL, "degree 2: {deg2}");
        let deg1 = reduced_bracket(&f, &h, &l, 1, FD_STEP).unwrap();
        assert!((deg1 - 3.0).abs() < THEOREM_TOL, "degree 1: {deg1}");
        assert!(reduced_bracket(&f, &f, &l, 2, FD_STEP).unwrap().abs() < 1e-12);
        assert!(reduced_bracket(&f, &h, &l, 3, FD_STEP).is_err());

        // the invariant-form route gives the same value on the slice
        let p = PhasePoint::at_identity(l);
        let simplified = pb2_invariant_form(
            &invariant_extension(&f),
            &invariant_extension(&h),
            &p,
            FD_STEP,
        );
        assert!((simplified - 3.0).abs() < THEOREM_TOL);
    }

    #[test]
    fn theorem_on_random_points() {
        let mut rng = sample::rng(104);
        let n = 2;
        for _ in 0..5 {
            let l = sample::matrix(&mut rng, n);
            for i in 0..n * n {
                for j in 0..n * n {
                    let f = MatrixField::coordinate(i / n, i % n);
                    let h = MatrixField::coordinate(j / n, j % n);
                    let red1 = reduced_bracket(&f, &h, &l, 1, FD_STEP).unwrap();
                    let red2 = reduced_bracket(&f, &h, &l, 2, FD_STEP).unwrap();
                    let dir1 = bracket_linear(&f, &h, &l, RMatrixKind::Qu);
                    let dir2 = bracket_quadratic(&f, &h, &l, RMatrixKind::Qu);
                    assert!((red1 - dir1).abs() < THEOREM_TOL, "deg1 ({i},{j})");
                    assert!((red2 - dir2).abs() < THEOREM_TOL, "deg2 ({i},{j})");
                }
            }
        }
    }

    #[test]
    fn equivariance_of_nabla1() {
        let mut rng = sample::rng(105);
        let p = random_point(&mut rng, 3);
        let s = random_s_pair(&mut rng, 3);
        let ext = invariant_extension(&MatrixField::coordinate(0, 2));
        let at_p = phase_gradients(&ext, &p, FD_STEP);
        let at_sp = phase_gradients(&ext, &s_action(&s, &p), FD_STEP);
        let conjugated = &(&s.a * &at_p.nabla1) * &s.a.transpose();
        assert!((&at_sp.nabla1 - &conjugated).max_norm() < EQUIVARIANCE_TOL);
    }

    #[test]
    fn nabla1_prime_of_invariant_fields_is_strictly_upper() {
        let mut rng = sample::rng(106);
        let p = random_point(&mut rng, 3);
        let ext = invariant_extension(&MatrixField::coordinate(2, 1));
        let g = phase_gradients(&ext, &p, FD_STEP);
        for i in 0..3 {
            for j in 0..=i {
                assert!(g.nabla1_prime.get(i, j).abs() < STRICT_UPPER_TOL);
            }
        }
    }

    #[test]
    fn phase_jacobi_identity_on_product_fields() {
        let mut rng = sample::rng(107);
        let n = 2;
        let p = random_point(&mut rng, n);
        let a = sample::matrix(&mut rng, n);
        let b = sample::matrix(&mut rng, n);
        let f = PhaseField::from_fn("tr(Ag)tr(L)", {
            let a = a.clone();
            move |q: &PhasePoint| crate::matcore::dot(&a, q.g()) * q.l().trace()
        });
        let g = PhaseField::from_fn("tr(Bg)", {
            let b = b.clone();
            move |q: &PhasePoint| crate::matcore::dot(&b, q.g())
        });
        let h = PhaseField::from_fn("h2(L)", |q: &PhasePoint| q.l().pow(2).trace() / 2.0);
        for degree in [1u8, 2] {
            let res = pb_jacobi_residual(degree, &f, &g, &h, &p, FD_STEP, FD_STEP_NESTED).unwrap();
            assert!(res.abs() < PB_JACOBI_TOL, "degree {degree}: {res}");
        }
    }
}
