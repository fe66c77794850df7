//! The linear, quadratic and cubic r-matrix Poisson brackets on gl(n,R),
//! their Hamiltonian vector fields and structure matrices, and the
//! residual operations used to machine-check the bracket identities:
//! Jacobi, pencil compatibility, the hierarchy shift, the Lie-derivative
//! relation between the quadratic and linear structures, and tangency to
//! candidate Poisson submanifolds.

use crate::error::{Error, Result};
use crate::fields::MatrixField;
use crate::matcore::{comm, dot, SquareMatrix};
use crate::rmat::{apply_r, RMatrixKind};
use crate::tolerances;

/// Selector for a bracket: polynomial degree and r-matrix kind.
///
/// Degree 3 exists only for the QU kind and only at invertible points.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BracketSpec {
    degree: u8,
    rkind: RMatrixKind,
}

impl BracketSpec {
    pub fn new(degree: u8, rkind: RMatrixKind) -> Result<Self> {
        if !(1..=3).contains(&degree) {
            return Err(Error::InvalidBracket(format!(
                "degree {degree} not in 1..=3"
            )));
        }
        if degree == 3 && rkind != RMatrixKind::Qu {
            return Err(Error::InvalidBracket(format!(
                "the cubic bracket is only defined for the qu kind, got {rkind}"
            )));
        }
        Ok(Self { degree, rkind })
    }

    pub fn linear(rkind: RMatrixKind) -> Self {
        Self { degree: 1, rkind }
    }

    pub fn quadratic(rkind: RMatrixKind) -> Self {
        Self { degree: 2, rkind }
    }

    pub fn cubic() -> Self {
        Self {
            degree: 3,
            rkind: RMatrixKind::Qu,
        }
    }

    pub fn degree(&self) -> u8 {
        self.degree
    }

    pub fn rkind(&self) -> RMatrixKind {
        self.rkind
    }

    /// {f,h} at L under this selector.
    pub fn evaluate(&self, f: &MatrixField, h: &MatrixField, l: &SquareMatrix) -> Result<f64> {
        match self.degree {
            1 => Ok(bracket_linear(f, h, l, self.rkind)),
            2 => Ok(bracket_quadratic(f, h, l, self.rkind)),
            _ => bracket_cubic(f, h, l),
        }
    }
}

impl std::fmt::Display for BracketSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "degree {} / {}", self.degree, self.rkind)
    }
}

/// <x, R_a y> without forming R_a y. The pairwise form makes the float
/// computation exactly antisymmetric under x <-> y, which the bracket
/// antisymmetry contract relies on.
fn pair_ra(x: &SquareMatrix, y: &SquareMatrix) -> f64 {
    let n = x.n();
    let mut acc = 0.0;
    for p in 0..n {
        for q in p + 1..n {
            acc += x.get(q, p) * y.get(p, q) - x.get(p, q) * y.get(q, p);
        }
    }
    0.5 * acc
}

/// <x, R_s y> for the symmetric part of the selected kind; exactly
/// symmetric in x and y as a float computation.
fn pair_rs(kind: RMatrixKind, x: &SquareMatrix, y: &SquareMatrix) -> f64 {
    let n = x.n();
    let mut acc = 0.0;
    match kind {
        RMatrixKind::Qu => {
            for p in 0..n {
                acc += 0.5 * (x.get(p, p) * y.get(p, p));
                for q in 0..p {
                    acc += x.get(p, q) * y.get(p, q);
                }
            }
        }
        RMatrixKind::Prime => {
            for p in 0..n {
                acc += 0.5 * (x.get(p, p) * y.get(p, p));
            }
        }
        RMatrixKind::Skew => {}
    }
    acc
}

/// The linear r-matrix bracket {f,h}_1 = <L, [R df, dh] + [df, R dh]>.
pub fn bracket_linear(
    f: &MatrixField,
    h: &MatrixField,
    l: &SquareMatrix,
    rkind: RMatrixKind,
) -> f64 {
    let df = f.gradient(l);
    let dh = h.gradient(l);
    let term = &comm(&apply_r(rkind, &df), &dh) + &comm(&df, &apply_r(rkind, &dh));
    dot(l, &term)
}

/// The quadratic r-matrix bracket
/// {f,h}_2 = <nf, R_a nh> - <n'f, R_a n'h> + <nf, R_s n'h> - <n'f, R_s nh>,
/// with (R_a, R_s) the parts of the selected kind and nf = L df, n'f = df L.
pub fn bracket_quadratic(
    f: &MatrixField,
    h: &MatrixField,
    l: &SquareMatrix,
    rkind: RMatrixKind,
) -> f64 {
    let df = f.gradient(l);
    let dh = h.gradient(l);
    let nf = l * &df;
    let npf = &df * l;
    let nh = l * &dh;
    let nph = &dh * l;
    (pair_ra(&nf, &nh) - pair_ra(&npf, &nph))
        + (pair_rs(rkind, &nf, &nph) - pair_rs(rkind, &npf, &nh))
}

/// The pullback f . inv with the chain-rule gradient
/// d(f.inv)(M) = -M^{-1} df(M^{-1}) M^{-1}.
fn pullback_through_inversion(f: &MatrixField) -> MatrixField {
    let f_eval = f.clone();
    let f_grad = f.clone();
    MatrixField::from_parts(
        format!("{}(inv)", f.label()),
        move |m| {
            let mi = m
                .inverse()
                .expect("cubic bracket evaluated at a singular point");
            f_eval.evaluate(&mi)
        },
        move |m| {
            let mi = m
                .inverse()
                .expect("cubic bracket evaluated at a singular point");
            (&(&mi * &f_grad.gradient(&mi)) * &mi).scale(-1.0)
        },
    )
}

/// The cubic bracket: the pushforward of the linear QU bracket under the
/// densely defined change of variables L -> L^{-1}.
pub fn bracket_cubic(f: &MatrixField, h: &MatrixField, l: &SquareMatrix) -> Result<f64> {
    let det = l.det();
    if det.abs() <= tolerances::CUBIC_DET_MIN {
        return Err(Error::NearSingular {
            pivot: det,
            threshold: tolerances::CUBIC_DET_MIN,
        });
    }
    let inv = l.inverse()?;
    let fp = pullback_through_inversion(f);
    let hp = pullback_through_inversion(h);
    Ok(bracket_linear(&fp, &hp, &inv, RMatrixKind::Qu))
}

/// The Hamiltonian vector field of h: V_ij = {L_ij, h} under the selector.
pub fn hamiltonian_vector_field(
    spec: BracketSpec,
    h: &MatrixField,
    l: &SquareMatrix,
) -> Result<SquareMatrix> {
    let n = l.n();
    let mut v = SquareMatrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            let coord = MatrixField::coordinate(i, j);
            v.set(i, j, spec.evaluate(&coord, h, l)?);
        }
    }
    Ok(v)
}

/// Coordinate presentation of the bivector: the n^2 x n^2 array of
/// brackets of coordinate functions.
#[derive(Clone, Debug)]
pub struct StructureMatrix {
    n: usize,
    data: Vec<f64>, // row-major over flattened (i*n+j) indices
}

impl StructureMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Side length n^2 of the array.
    pub fn dim(&self) -> usize {
        self.n * self.n
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.data[row * self.dim() + col]
    }

    /// Entry {L_ij, L_kl}.
    pub fn entry(&self, (i, j): (usize, usize), (k, l): (usize, usize)) -> f64 {
        self.get(i * self.n + j, k * self.n + l)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    pub fn combine(&self, other: &StructureMatrix, scale_other: f64) -> StructureMatrix {
        assert_eq!(self.n, other.n, "dimension mismatch");
        StructureMatrix {
            n: self.n,
            data: self
                .data
                .iter()
                .zip(other.data.iter())
                .map(|(a, b)| a + scale_other * b)
                .collect(),
        }
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.data.chunks(self.dim()).map(<[f64]>::to_vec).collect()
    }
}

pub fn structure_matrix(spec: BracketSpec, l: &SquareMatrix) -> Result<StructureMatrix> {
    let n = l.n();
    let coords: Vec<MatrixField> = (0..n * n)
        .map(|flat| MatrixField::coordinate(flat / n, flat % n))
        .collect();
    let dim = n * n;
    let mut data = vec![0.0; dim * dim];
    for (row, cf) in coords.iter().enumerate() {
        for (col, ch) in coords.iter().enumerate() {
            data[row * dim + col] = spec.evaluate(cf, ch, l)?;
        }
    }
    Ok(StructureMatrix { n, data })
}

/// The Jacobi cyclic sum {f,{g,h}} + {g,{h,f}} + {h,{f,g}} at L, with the
/// inner brackets wrapped as finite-difference fields of the given step.
///
/// Generic over the bracket evaluator so pencils of brackets go through
/// the same code path.
pub fn jacobi_residual_generic<B>(
    bracket: B,
    f: &MatrixField,
    g: &MatrixField,
    h: &MatrixField,
    l: &SquareMatrix,
    nested_step: f64,
) -> Result<f64>
where
    B: Fn(&MatrixField, &MatrixField, &SquareMatrix) -> Result<f64> + Clone + Send + Sync + 'static,
{
    // Surface evaluation errors (singular points etc.) before the nested
    // differencing, whose closures cannot propagate them.
    bracket(g, h, l)?;
    bracket(h, f, l)?;
    bracket(f, g, l)?;

    let wrap = |a: &MatrixField, b: &MatrixField| -> MatrixField {
        let (a, b) = (a.clone(), b.clone());
        let bracket = bracket.clone();
        MatrixField::fd_wrapped(
            format!("{{{},{}}}", a.label(), b.label()),
            move |m| bracket(&a, &b, m).expect("bracket evaluation failed inside nested Jacobi"),
            nested_step,
        )
    };

    let sum =
        bracket(f, &wrap(g, h), l)? + bracket(g, &wrap(h, f), l)? + bracket(h, &wrap(f, g), l)?;
    Ok(sum)
}

/// Jacobi residual of the bracket selected by `spec`.
pub fn jacobi_residual(
    spec: BracketSpec,
    f: &MatrixField,
    g: &MatrixField,
    h: &MatrixField,
    l: &SquareMatrix,
) -> Result<f64> {
    jacobi_residual_generic(
        move |a: &MatrixField, b: &MatrixField, m: &SquareMatrix| spec.evaluate(a, b, m),
        f,
        g,
        h,
        l,
        tolerances::FD_STEP_NESTED,
    )
}

/// Jacobi residual of the pencil {.,.}_1 + lambda {.,.}_2 of the QU kind;
/// its vanishing for several lambda certifies compatibility.
pub fn jacobi_residual_pencil(
    lambda: f64,
    f: &MatrixField,
    g: &MatrixField,
    h: &MatrixField,
    l: &SquareMatrix,
) -> Result<f64> {
    jacobi_residual_generic(
        move |a: &MatrixField, b: &MatrixField, m: &SquareMatrix| {
            Ok(bracket_linear(a, b, m, RMatrixKind::Qu)
                + lambda * bracket_quadratic(a, b, m, RMatrixKind::Qu))
        },
        f,
        g,
        h,
        l,
        tolerances::FD_STEP_NESTED,
    )
}

/// {f, h_k}_2 - {f, h_{k+1}}_1 at L; vanishes for the QU kind.
pub fn hierarchy_shift_residual(
    f: &MatrixField,
    k: u32,
    l: &SquareMatrix,
    rkind: RMatrixKind,
) -> f64 {
    let hk = MatrixField::trace_power(k);
    let hk1 = MatrixField::trace_power(k + 1);
    bracket_quadratic(f, &hk, l, rkind) - bracket_linear(f, &hk1, l, rkind)
}

/// Central-difference directional derivative of the quadratic structure
/// matrix along 1_n, minus the linear structure matrix. The coordinate
/// vector field V(L) = 1_n has constant components, so this difference is
/// the Lie-derivative relation between the two brackets.
pub fn lie_derivative_residual(
    l: &SquareMatrix,
    rkind: RMatrixKind,
    step: f64,
) -> Result<StructureMatrix> {
    let id = SquareMatrix::identity(l.n());
    let quad = BracketSpec::quadratic(rkind);
    let plus = structure_matrix(quad, &(l + &id.scale(step)))?;
    let minus = structure_matrix(quad, &(l - &id.scale(step)))?;
    let derivative = plus.combine(&minus, -1.0);
    let scaled = StructureMatrix {
        n: derivative.n,
        data: derivative.data.iter().map(|v| v / (2.0 * step)).collect(),
    };
    let lin = structure_matrix(BracketSpec::linear(rkind), l)?;
    Ok(scaled.combine(&lin, -1.0))
}

/// Candidate Poisson submanifolds of gl(n,R).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Subspace {
    Symmetric,
    TridiagonalSymmetric,
}

impl Subspace {
    /// Entrywise-orthogonal projection onto the subspace.
    pub fn project(self, m: &SquareMatrix) -> SquareMatrix {
        match self {
            Subspace::Symmetric => m.sym_part(),
            Subspace::TridiagonalSymmetric => SquareMatrix::from_fn(m.n(), |i, j| {
                if i.abs_diff(j) <= 1 {
                    0.5 * (m.get(i, j) + m.get(j, i))
                } else {
                    0.0
                }
            }),
        }
    }

    /// Frobenius distance from the subspace.
    pub fn distance(self, m: &SquareMatrix) -> f64 {
        (m - &self.project(m)).frobenius_norm()
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Subspace::Symmetric => "symmetric",
            Subspace::TridiagonalSymmetric => "tridiagonal-symmetric",
        }
    }
}

/// Norm of the component of the Hamiltonian vector field of h orthogonal
/// to the subspace at L. Zero iff the field is tangent there.
pub fn tangency_residual(
    spec: BracketSpec,
    subspace: Subspace,
    h: &MatrixField,
    l: &SquareMatrix,
    membership_tol: f64,
) -> Result<f64> {
    let deviation = subspace.distance(l);
    if deviation > membership_tol {
        return Err(Error::OutsideSubspace {
            deviation,
            tolerance: membership_tol,
        });
    }
    let v = hamiltonian_vector_field(spec, h, l)?;
    Ok(subspace.distance(&v))
}

/// Outcome of the non-tangency sweep: the largest residual found and the
/// configuration that produced it.
#[derive(Clone, Debug)]
pub struct TangencyWitness {
    pub residual: f64,
    pub point: SquareMatrix,
    pub coordinate: (usize, usize),
}

/// Deterministic seeded sweep over random tridiagonal symmetric points and
/// all coordinate Hamiltonians, reporting the largest quadratic-bracket
/// tangency residual. A large value exhibits a witness that the
/// tridiagonal symmetric matrices are not a Poisson submanifold for the
/// given kind.
pub fn tridiagonal_witness_search(
    rkind: RMatrixKind,
    n: usize,
    points: usize,
    seed: u64,
) -> Result<TangencyWitness> {
    let mut rng = crate::sample::rng(seed);
    let spec = BracketSpec::quadratic(rkind);
    let mut best: Option<TangencyWitness> = None;
    for _ in 0..points {
        let l = crate::sample::tridiagonal_symmetric(&mut rng, n);
        for i in 0..n {
            for j in 0..n {
                let h = MatrixField::coordinate(i, j);
                let residual =
                    tangency_residual(spec, Subspace::TridiagonalSymmetric, &h, &l, 1e-9)?;
                if best.as_ref().is_none_or(|b| residual > b.residual) {
                    best = Some(TangencyWitness {
                        residual,
                        point: l.clone(),
                        coordinate: (i, j),
                    });
                }
            }
        }
    }
    Ok(best.expect("witness sweep requires at least one point"))
}
