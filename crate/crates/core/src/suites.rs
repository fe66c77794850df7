//! Named verification suites behind the `check` subcommand.
//!
//! Each suite draws seeded random inputs, fans the trials out across
//! workers, reduces residuals by max (order independent, so reports are
//! reproducible byte for byte), and resolves its own default scale and
//! tolerance when the caller does not override them.

use crate::brackets::{
    bracket_linear, bracket_quadratic, hierarchy_shift_residual, jacobi_residual,
    jacobi_residual_pencil, lie_derivative_residual, tangency_residual, tridiagonal_witness_search,
    BracketSpec, Subspace,
};
use crate::cotangent::{
    invariant_extension, lemma_residual, pb1_from, pb2_from, pb2_invariant_form_from,
    phase_gradients, PhaseGradients, PhasePoint,
};
use crate::error::{Error, Result};
use crate::fields::MatrixField;
use crate::matcore::SquareMatrix;
use crate::rmat::{mcybe_residual_kind, RMatrixKind, RPart};
use crate::{sample, tolerances};
use rayon::prelude::*;
use serde::Serialize;

/// mCYBE convention constant: [OX,OY] - O([OX,Y]+[X,OY]) = -c [X,Y].
pub const MCYBE_CONSTANT: f64 = 0.25;

/// Points scanned by the non-submanifold witness sweep.
pub const WITNESS_SWEEP_POINTS: usize = 1000;

/// User-facing configuration; unset fields resolve to per-suite defaults.
#[derive(Clone, Copy, Debug, Default)]
pub struct RunConfig {
    pub n: Option<usize>,
    pub seed: u64,
    pub tol: Option<f64>,
    pub fd_step: Option<f64>,
    pub trials: Option<usize>,
}

#[derive(Clone, Copy, Debug)]
struct Resolved {
    n: usize,
    seed: u64,
    tol: f64,
    fd_step: f64,
    trials: usize,
}

impl RunConfig {
    fn resolve(
        &self,
        default_n: usize,
        default_tol: f64,
        default_trials: usize,
    ) -> Result<Resolved> {
        let resolved = Resolved {
            n: self.n.unwrap_or(default_n),
            seed: self.seed,
            tol: self.tol.unwrap_or(default_tol),
            fd_step: self.fd_step.unwrap_or(tolerances::FD_STEP),
            trials: self.trials.unwrap_or(default_trials),
        };
        if !(1..=12).contains(&resolved.n) {
            return Err(Error::InvalidConfig(format!(
                "n={} not in 1..=12",
                resolved.n
            )));
        }
        if !resolved.tol.is_finite() || resolved.tol <= 0.0 {
            return Err(Error::InvalidConfig("tolerance must be positive".into()));
        }
        if !resolved.fd_step.is_finite() || resolved.fd_step <= 0.0 {
            return Err(Error::InvalidConfig("fd step must be positive".into()));
        }
        if resolved.trials == 0 {
            return Err(Error::InvalidConfig("trials must be at least 1".into()));
        }
        Ok(resolved)
    }
}

/// Outcome of one suite run, carrying the resolved configuration so the
/// numbers are reproducible from the report alone.
#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub n: usize,
    pub trials: usize,
    pub seed: u64,
    pub fd_step: f64,
    pub tol: f64,
    pub max_residual: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d2_residual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_residual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_min: Option<f64>,
    pub pass: bool,
}

impl SuiteReport {
    fn new(suite: &str, r: Resolved, max_residual: f64) -> Self {
        Self {
            suite: suite.into(),
            n: r.n,
            trials: r.trials,
            seed: r.seed,
            fd_step: r.fd_step,
            tol: r.tol,
            max_residual,
            d2_residual: None,
            witness_residual: None,
            witness_min: None,
            pass: max_residual < r.tol,
        }
    }

    pub fn to_csv(&self) -> String {
        let opt = |v: Option<f64>| v.map_or(String::new(), |x| format!("{x}"));
        format!(
            "suite,n,trials,seed,fd_step,tol,max_residual,d2_residual,witness_residual,witness_min,pass\n{},{},{},{},{},{},{},{},{},{},{}\n",
            self.suite,
            self.n,
            self.trials,
            self.seed,
            self.fd_step,
            self.tol,
            self.max_residual,
            opt(self.d2_residual),
            opt(self.witness_residual),
            opt(self.witness_min),
            self.pass
        )
    }
}

pub const SUITES: [&str; 8] = [
    "mcybe",
    "jacobi",
    "hierarchy",
    "lie-derivative",
    "proposition",
    "lemma",
    "theorem",
    "tangency",
];

/// Runs one named suite. `all` is handled by [`run_all`].
pub fn run_suite(name: &str, config: &RunConfig) -> Result<SuiteReport> {
    match name {
        "mcybe" => run_mcybe(config),
        "jacobi" => run_jacobi(config),
        "hierarchy" => run_hierarchy(config),
        "lie-derivative" => run_lie_derivative(config),
        "proposition" => run_proposition(config),
        "lemma" => run_lemma(config),
        "theorem" => run_theorem(config),
        "tangency" => run_tangency(config),
        other => Err(Error::InvalidConfig(format!(
            "unknown suite {other:?}; expected one of {SUITES:?} or \"all\""
        ))),
    }
}

pub fn run_all(config: &RunConfig) -> Result<Vec<SuiteReport>> {
    SUITES.iter().map(|name| run_suite(name, config)).collect()
}

fn coordinate_fields(n: usize) -> Vec<MatrixField> {
    (0..n * n)
        .map(|flat| MatrixField::coordinate(flat / n, flat % n))
        .collect()
}

fn max_residual(values: impl IntoParallelIterator<Item = f64>) -> f64 {
    values.into_par_iter().reduce(|| 0.0, f64::max)
}

/// O in {R, R_a, R', R''}, random pairs, residual with c = 1/4.
fn run_mcybe(config: &RunConfig) -> Result<SuiteReport> {
    let r = config.resolve(3, tolerances::MCYBE_TOL, 100)?;
    let mut rng = sample::rng(r.seed);
    let pairs: Vec<(SquareMatrix, SquareMatrix)> = (0..r.trials)
        .map(|_| (sample::matrix(&mut rng, r.n), sample::matrix(&mut rng, r.n)))
        .collect();

    let operators = [
        (RMatrixKind::Qu, RPart::Full),
        (RMatrixKind::Qu, RPart::Antisymmetric),
        (RMatrixKind::Prime, RPart::Full),
        (RMatrixKind::Skew, RPart::Full),
    ];
    let worst = max_residual(pairs.par_iter().map(|(x, y)| {
        operators
            .iter()
            .map(|&(kind, part)| mcybe_residual_kind(kind, part, x, y, MCYBE_CONSTANT).max_norm())
            .fold(0.0f64, f64::max)
    }));
    Ok(SuiteReport::new("mcybe", r, worst))
}

/// Jacobi residuals over all coordinate triples: degrees 1-2 of all three
/// kinds, degree 3 of QU at invertible points, and the compatibility
/// pencil lambda in {-1, 0.5, 1}.
fn run_jacobi(config: &RunConfig) -> Result<SuiteReport> {
    let r = config.resolve(2, tolerances::JACOBI_TOL, 10)?;
    let mut rng = sample::rng(r.seed);
    let generic: Vec<SquareMatrix> = (0..r.trials)
        .map(|_| sample::matrix(&mut rng, r.n))
        .collect();
    let invertible: Vec<SquareMatrix> = (0..r.trials)
        .map(|_| sample::invertible(&mut rng, r.n))
        .collect();
    let coords = coordinate_fields(r.n);
    let dim = coords.len();
    let triples: Vec<(usize, usize, usize)> = (0..dim)
        .flat_map(|a| (0..dim).flat_map(move |b| (0..dim).map(move |c| (a, b, c))))
        .collect();

    let mut specs = Vec::new();
    for kind in RMatrixKind::ALL {
        specs.push(BracketSpec::linear(kind));
        specs.push(BracketSpec::quadratic(kind));
    }

    let worst_generic = max_residual(generic.par_iter().map(|l| {
        let mut worst = 0.0f64;
        for &(a, b, c) in &triples {
            for spec in &specs {
                let res = jacobi_residual(*spec, &coords[a], &coords[b], &coords[c], l)
                    .expect("degrees 1-2 evaluate everywhere");
                worst = worst.max(res.abs());
            }
            for lambda in [-1.0, 0.5, 1.0] {
                let res = jacobi_residual_pencil(lambda, &coords[a], &coords[b], &coords[c], l)
                    .expect("pencil brackets evaluate everywhere");
                worst = worst.max(res.abs());
            }
        }
        worst
    }));

    let cubic = BracketSpec::cubic();
    let worst_cubic = max_residual(invertible.par_iter().map(|l| {
        let mut worst = 0.0f64;
        for &(a, b, c) in &triples {
            let res = jacobi_residual(cubic, &coords[a], &coords[b], &coords[c], l)
                .expect("sampled points are invertible");
            worst = worst.max(res.abs());
        }
        worst
    }));

    Ok(SuiteReport::new(
        "jacobi",
        r,
        worst_generic.max(worst_cubic),
    ))
}

/// {f, h_k}_2 - {f, h_{k+1}}_1 for the QU kind, k = 1..3, coordinate f.
fn run_hierarchy(config: &RunConfig) -> Result<SuiteReport> {
    let r = config.resolve(3, tolerances::HIERARCHY_TOL, 20)?;
    let mut rng = sample::rng(r.seed);
    let points: Vec<SquareMatrix> = (0..r.trials)
        .map(|_| sample::matrix(&mut rng, r.n))
        .collect();
    let coords = coordinate_fields(r.n);

    let worst = max_residual(points.par_iter().map(|l| {
        let mut worst = 0.0f64;
        for f in &coords {
            for k in 1..=3 {
                worst = worst.max(hierarchy_shift_residual(f, k, l, RMatrixKind::Qu).abs());
            }
        }
        worst
    }));
    Ok(SuiteReport::new("hierarchy", r, worst))
}

/// Directional derivative of the quadratic structure matrix along 1_n
/// against the linear structure matrix, QU kind.
fn run_lie_derivative(config: &RunConfig) -> Result<SuiteReport> {
    let r = config.resolve(3, tolerances::LIE_DERIVATIVE_TOL, 10)?;
    let mut rng = sample::rng(r.seed);
    let points: Vec<SquareMatrix> = (0..r.trials)
        .map(|_| sample::matrix(&mut rng, r.n))
        .collect();

    let worst = max_residual(points.par_iter().map(|l| {
        lie_derivative_residual(l, RMatrixKind::Qu, r.fd_step)
            .expect("structure matrices evaluate everywhere")
            .max_abs()
    }));
    Ok(SuiteReport::new("lie-derivative", r, worst))
}

fn random_phase_point(rng: &mut rand_chacha::ChaCha8Rng, n: usize) -> PhasePoint {
    let g = sample::group_element(rng, n);
    let l = sample::matrix(rng, n);
    PhasePoint::new(g, l).expect("recomposed group elements are invertible")
}

/// |pb2 - pb2_invariant_form| on invariant extensions of the coordinate
/// fields at generic phase points.
fn run_proposition(config: &RunConfig) -> Result<SuiteReport> {
    let r = config.resolve(3, tolerances::PROPOSITION_TOL, 20)?;
    let mut rng = sample::rng(r.seed);
    let points: Vec<PhasePoint> = (0..r.trials)
        .map(|_| random_phase_point(&mut rng, r.n))
        .collect();
    let extensions: Vec<_> = coordinate_fields(r.n)
        .iter()
        .map(invariant_extension)
        .collect();

    let worst = max_residual(points.par_iter().map(|p| {
        let grads: Vec<PhaseGradients> = extensions
            .iter()
            .map(|f| phase_gradients(f, p, r.fd_step))
            .collect();
        let mut worst = 0.0f64;
        for (i, gf) in grads.iter().enumerate() {
            for gh in grads.iter().skip(i + 1) {
                let full = pb2_from(gf, gh, p.l());
                let simplified = pb2_invariant_form_from(gf, gh, p.l());
                worst = worst.max((full - simplified).abs());
            }
        }
        worst
    }));
    Ok(SuiteReport::new("proposition", r, worst))
}

/// Slice relations for invariant extensions of coordinate and linear fields.
fn run_lemma(config: &RunConfig) -> Result<SuiteReport> {
    let r = config.resolve(3, tolerances::LEMMA_TOL, 20)?;
    let mut rng = sample::rng(r.seed);
    let mut fields = coordinate_fields(r.n);
    for _ in 0..3 {
        fields.push(MatrixField::linear_pair(sample::matrix(&mut rng, r.n)));
    }
    let points: Vec<SquareMatrix> = (0..r.trials)
        .map(|_| sample::matrix(&mut rng, r.n))
        .collect();

    let gaps: Vec<(f64, f64)> = points
        .par_iter()
        .map(|l| {
            let mut worst = (0.0f64, 0.0f64);
            for f in &fields {
                let res = lemma_residual(f, l, r.fd_step);
                worst.0 = worst.0.max(res.nabla1_gap);
                worst.1 = worst.1.max(res.d2_gap);
            }
            worst
        })
        .collect();
    let nabla1 = gaps.iter().map(|g| g.0).fold(0.0f64, f64::max);
    let d2 = gaps.iter().map(|g| g.1).fold(0.0f64, f64::max);

    let mut report = SuiteReport::new("lemma", r, nabla1);
    report.d2_residual = Some(d2);
    report.pass = nabla1 < r.tol && d2 < tolerances::LEMMA_D2_TOL;
    Ok(report)
}

/// Reduced brackets at (1_n, L) against the direct gl(n,R) brackets, all
/// coordinate pairs, both degrees.
fn run_theorem(config: &RunConfig) -> Result<SuiteReport> {
    let r = config.resolve(3, tolerances::THEOREM_TOL, 20)?;
    let mut rng = sample::rng(r.seed);
    let points: Vec<SquareMatrix> = (0..r.trials)
        .map(|_| sample::matrix(&mut rng, r.n))
        .collect();
    let coords = coordinate_fields(r.n);
    let extensions: Vec<_> = coords.iter().map(invariant_extension).collect();

    let worst = max_residual(points.par_iter().map(|l| {
        let p = PhasePoint::at_identity(l.clone());
        let grads: Vec<PhaseGradients> = extensions
            .iter()
            .map(|f| phase_gradients(f, &p, r.fd_step))
            .collect();
        let mut worst = 0.0f64;
        for (i, f) in coords.iter().enumerate() {
            for (j, h) in coords.iter().enumerate() {
                let reduced1 = pb1_from(&grads[i], &grads[j], l);
                let reduced2 = pb2_from(&grads[i], &grads[j], l);
                let direct1 = bracket_linear(f, h, l, RMatrixKind::Qu);
                let direct2 = bracket_quadratic(f, h, l, RMatrixKind::Qu);
                worst = worst
                    .max((reduced1 - direct1).abs())
                    .max((reduced2 - direct2).abs());
            }
        }
        worst
    }));
    Ok(SuiteReport::new("theorem", r, worst))
}

/// Reduction check restricted to one degree, for `reduce check --degree d`.
pub fn run_reduce_check(degree: u8, config: &RunConfig) -> Result<SuiteReport> {
    if !(degree == 1 || degree == 2) {
        return Err(Error::InvalidConfig(format!(
            "reduced bracket degree {degree} not in {{1,2}}"
        )));
    }
    let r = config.resolve(3, tolerances::THEOREM_TOL, 20)?;
    let mut rng = sample::rng(r.seed);
    let points: Vec<SquareMatrix> = (0..r.trials)
        .map(|_| sample::matrix(&mut rng, r.n))
        .collect();
    let coords = coordinate_fields(r.n);
    let extensions: Vec<_> = coords.iter().map(invariant_extension).collect();

    let worst = max_residual(points.par_iter().map(|l| {
        let p = PhasePoint::at_identity(l.clone());
        let grads: Vec<PhaseGradients> = extensions
            .iter()
            .map(|f| phase_gradients(f, &p, r.fd_step))
            .collect();
        let mut worst = 0.0f64;
        for (i, f) in coords.iter().enumerate() {
            for (j, h) in coords.iter().enumerate() {
                let (reduced, direct) = if degree == 1 {
                    (
                        pb1_from(&grads[i], &grads[j], l),
                        bracket_linear(f, h, l, RMatrixKind::Qu),
                    )
                } else {
                    (
                        pb2_from(&grads[i], &grads[j], l),
                        bracket_quadratic(f, h, l, RMatrixKind::Qu),
                    )
                };
                worst = worst.max((reduced - direct).abs());
            }
        }
        worst
    }));
    Ok(SuiteReport::new(
        &format!("reduce-degree-{degree}"),
        r,
        worst,
    ))
}

/// Tangency of Hamiltonian vector fields to the symmetric and tridiagonal
/// symmetric subspaces that carry the Toda hierarchies, plus the witness sweep
/// showing the tridiagonal subspace fails for the R' and R'' quadratic
/// brackets.
fn run_tangency(config: &RunConfig) -> Result<SuiteReport> {
    let r = config.resolve(3, tolerances::TANGENCY_TOL, 20)?;
    let mut rng = sample::rng(r.seed);
    let coords = coordinate_fields(r.n);
    let symmetric_points: Vec<SquareMatrix> = (0..r.trials)
        .map(|_| sample::symmetric(&mut rng, r.n))
        .collect();
    let tridiag_points: Vec<SquareMatrix> = (0..r.trials)
        .map(|_| sample::tridiagonal_symmetric(&mut rng, r.n))
        .collect();

    let membership = 1e-9;
    let worst_symmetric = max_residual(symmetric_points.par_iter().map(|l| {
        let mut worst = 0.0f64;
        for h in &coords {
            for spec in [
                BracketSpec::linear(RMatrixKind::Qu),
                BracketSpec::quadratic(RMatrixKind::Qu),
            ] {
                let res = tangency_residual(spec, Subspace::Symmetric, h, l, membership)
                    .expect("sampled points lie in the subspace");
                worst = worst.max(res);
            }
        }
        worst
    }));

    // The QU brackets and the R'' linear bracket restrict to the
    // tridiagonal symmetric subspace (coordinate Hamiltonians certify
    // full tangency); the R' linear bracket does not, which the witness
    // sweep below also exhibits for the quadratic brackets.
    let trace_powers: Vec<MatrixField> = (1..=3).map(MatrixField::trace_power).collect();
    let worst_tridiag = max_residual(tridiag_points.par_iter().map(|l| {
        let mut worst = 0.0f64;
        for h in &coords {
            for spec in [
                BracketSpec::linear(RMatrixKind::Qu),
                BracketSpec::quadratic(RMatrixKind::Qu),
                BracketSpec::linear(RMatrixKind::Skew),
            ] {
                let res = tangency_residual(spec, Subspace::TridiagonalSymmetric, h, l, membership)
                    .expect("sampled points lie in the subspace");
                worst = worst.max(res);
            }
        }
        for hk in &trace_powers {
            for kind in [RMatrixKind::Qu, RMatrixKind::Skew] {
                let res = tangency_residual(
                    BracketSpec::linear(kind),
                    Subspace::TridiagonalSymmetric,
                    hk,
                    l,
                    membership,
                )
                .expect("sampled points lie in the subspace");
                worst = worst.max(res);
            }
        }
        worst
    }));

    let witness_prime =
        tridiagonal_witness_search(RMatrixKind::Prime, r.n, WITNESS_SWEEP_POINTS, r.seed)?;
    let witness_skew =
        tridiagonal_witness_search(RMatrixKind::Skew, r.n, WITNESS_SWEEP_POINTS, r.seed)?;
    let witness = witness_prime.residual.min(witness_skew.residual);

    let mut report = SuiteReport::new("tangency", r, worst_symmetric.max(worst_tridiag));
    report.witness_residual = Some(witness);
    report.witness_min = Some(tolerances::TANGENCY_WITNESS_MIN);
    report.pass = report.max_residual < r.tol && witness > tolerances::TANGENCY_WITNESS_MIN;
    Ok(report)
}
