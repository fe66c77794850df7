//! Scalar fields on gl(n,R) with trace-form gradients.
//!
//! A field carries an evaluator and a gradient map. The gradient df is
//! defined against the trace form: <df(L), X> is the directional
//! derivative of f along X. Consequently the gradient of the coordinate
//! L_ij is E_ji -- the transposed index placement shows up everywhere
//! downstream, so it is fixed here once.
//!
//! Fields are closures behind `Arc`, so a computed bracket {f,h} can be
//! wrapped as a field again for nested Jacobi checks, and evaluation is
//! safe to share across threads.

use crate::error::{Error, Result};
use crate::matcore::SquareMatrix;
use std::sync::Arc;

type EvalFn = Arc<dyn Fn(&SquareMatrix) -> f64 + Send + Sync>;
type GradFn = Arc<dyn Fn(&SquareMatrix) -> SquareMatrix + Send + Sync>;

/// A smooth scalar field on gl(n,R).
#[derive(Clone)]
pub struct MatrixField {
    label: String,
    eval: EvalFn,
    grad: GradFn,
}

impl MatrixField {
    /// Assembles a field from an evaluator and an analytic gradient.
    pub fn from_parts(
        label: impl Into<String>,
        eval: impl Fn(&SquareMatrix) -> f64 + Send + Sync + 'static,
        grad: impl Fn(&SquareMatrix) -> SquareMatrix + Send + Sync + 'static,
    ) -> Self {
        Self {
            label: label.into(),
            eval: Arc::new(eval),
            grad: Arc::new(grad),
        }
    }

    /// h_k(L) = tr(L^k)/k with gradient L^{k-1}.
    pub fn trace_power(k: u32) -> Self {
        assert!(k >= 1, "trace power index must be positive");
        Self::from_parts(
            format!("h{k}"),
            move |l| l.pow(k).trace() / f64::from(k),
            move |l| l.pow(k - 1),
        )
    }

    /// The coordinate L_ij (0-based) with gradient E_ji.
    pub fn coordinate(i: usize, j: usize) -> Self {
        Self::from_parts(
            format!("coord({},{})", i + 1, j + 1),
            move |l| l.get(i, j),
            move |l| SquareMatrix::elementary(l.n(), j, i),
        )
    }

    /// f(L) = tr(A L) with constant gradient A.
    pub fn linear_pair(a: SquareMatrix) -> Self {
        let grad_copy = a.clone();
        Self::from_parts(
            "lin".to_string(),
            move |l| crate::matcore::dot(&a, l),
            move |_| grad_copy.clone(),
        )
    }

    /// Wraps an arbitrary evaluator; the gradient falls back to central
    /// differences with the given step.
    pub fn fd_wrapped(
        label: impl Into<String>,
        eval: impl Fn(&SquareMatrix) -> f64 + Send + Sync + 'static,
        step: f64,
    ) -> Self {
        let eval = Arc::new(eval);
        let eval_for_grad = Arc::clone(&eval);
        Self {
            label: label.into(),
            eval: Arc::new(move |l| eval(l)),
            grad: Arc::new(move |l| {
                fd_gradient(|m| eval_for_grad(m), l, step)
                    .expect("finite-difference gradient hit a non-finite value")
            }),
        }
    }

    /// Pointwise product with the Leibniz gradient f dg + g df.
    pub fn product(f: &MatrixField, g: &MatrixField) -> Self {
        let (fe, fg) = (Arc::clone(&f.eval), Arc::clone(&f.grad));
        let (ge, gg) = (Arc::clone(&g.eval), Arc::clone(&g.grad));
        let label = format!("({})*({})", f.label, g.label);
        Self {
            label,
            eval: {
                let (fe, ge) = (Arc::clone(&fe), Arc::clone(&ge));
                Arc::new(move |l| fe(l) * ge(l))
            },
            grad: Arc::new(move |l| &gg(l).scale(fe(l)) + &fg(l).scale(ge(l))),
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn evaluate(&self, l: &SquareMatrix) -> f64 {
        (self.eval)(l)
    }

    /// The trace-form gradient df(L).
    pub fn gradient(&self, l: &SquareMatrix) -> SquareMatrix {
        (self.grad)(l)
    }

    /// Left derivative: nabla f(L) = L df(L).
    pub fn nabla(&self, l: &SquareMatrix) -> SquareMatrix {
        l * &self.gradient(l)
    }

    /// Right derivative: nabla' f(L) = df(L) L.
    pub fn nabla_prime(&self, l: &SquareMatrix) -> SquareMatrix {
        &self.gradient(l) * l
    }
}

impl std::fmt::Debug for MatrixField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "MatrixField({})", self.label)
    }
}

/// Central-difference trace-form gradient of an arbitrary evaluator.
///
/// Entry (j,i) of the result is (f(L + h E_ij) - f(L - h E_ij)) / 2h;
/// the transposed placement realizes the trace-form convention.
pub fn fd_gradient(
    eval: impl Fn(&SquareMatrix) -> f64,
    l: &SquareMatrix,
    step: f64,
) -> Result<SquareMatrix> {
    assert!(step > 0.0, "finite-difference step must be positive");
    let n = l.n();
    let mut grad = SquareMatrix::zeros(n);
    let mut work = l.clone();
    for i in 0..n {
        for j in 0..n {
            let orig = work.get(i, j);
            work.set(i, j, orig + step);
            let plus = eval(&work);
            work.set(i, j, orig - step);
            let minus = eval(&work);
            work.set(i, j, orig);
            let slope = (plus - minus) / (2.0 * step);
            if !slope.is_finite() {
                return Err(Error::NonFinite {
                    context: "finite-difference gradient",
                });
            }
            grad.set(j, i, slope);
        }
    }
    Ok(grad)
}
