//! Central tolerance and step-size constants.
//!
//! Every threshold used by the verification suites and tests is defined here
//! with its basis, so no check carries an ad-hoc magic number. Suites accept
//! overrides at runtime; these are the defaults they resolve to.

// ── Finite differencing ─────────────────────────────────────────────

/// Central-difference step for first derivatives of smooth fields.
///
/// Balances O(h^2) truncation against O(eps/h) rounding for values O(1).
pub const FD_STEP: f64 = 1e-5;

/// Step for differentiating fd-wrapped inner brackets in nested Jacobi
/// checks. Looser than [`FD_STEP`] because the inner value already carries
/// ~1e-10 finite-difference noise that the outer quotient amplifies by 1/h.
pub const FD_STEP_NESTED: f64 = 1e-4;

// ── Exact-arithmetic identities (rounding only) ──────────────────────

/// mCYBE residual for R, R_a, R' and R'' with c = 1/4; the identity is
/// algebraic, so only rounding remains (entries O(1)).
pub const MCYBE_TOL: f64 = 1e-13;

/// Adjointness of R_a/R_s and ad-invariance of the trace form, relative.
pub const TRACE_ADJOINT_TOL: f64 = 1e-12;

/// Hierarchy relation {f,h_k}_2 = {f,h_{k+1}}_1 with analytic gradients.
pub const HIERARCHY_TOL: f64 = 1e-12;

/// Hamiltonian vector field of h_k (quadratic bracket) against the closed
/// Lax form [R(L^k), L].
pub const LAX_CONSISTENCY_TOL: f64 = 1e-11;

/// Involution of the trace powers: <L^{m-1}, X_h> for hierarchy Hamiltonians.
pub const ISOSPECTRAL_DIRECTION_TOL: f64 = 1e-10;

/// Tangency of Hamiltonian vector fields to a Poisson submanifold
/// (symmetric, tridiagonal symmetric). Algebraic zero.
pub const TANGENCY_TOL: f64 = 1e-12;

/// A tangency residual this large certifies a non-tangent direction, i.e.
/// the subspace is not a Poisson submanifold for that bracket.
pub const TANGENCY_WITNESS_MIN: f64 = 1e-3;

/// Leibniz rule with analytic product-field gradients.
pub const LEIBNIZ_TOL: f64 = 1e-9;

// ── Factorizations ───────────────────────────────────────────────────

/// QU factorization: reject when any |b_ii| falls below this multiple of
/// the matrix max-norm. Degenerate inputs must fail loudly.
pub const SINGULARITY_THRESHOLD: f64 = 1e-12;

/// Orthogonality and reconstruction defects of the QU factors.
pub const QU_FACTOR_TOL: f64 = 1e-12;

/// Round-trip qu_factorize(a*b) == (a, b) on random factor pairs.
pub const QU_ROUNDTRIP_TOL: f64 = 1e-10;

/// Truncation level of the scaling-and-squaring matrix exponential.
pub const EXPM_TOL: f64 = 1e-13;

/// Cubic-bracket domain guard: |det L| must exceed this.
pub const CUBIC_DET_MIN: f64 = 1e-10;

// ── Finite-difference identities ─────────────────────────────────────

/// Analytic gradients against the central-difference oracle, relative.
pub const GRADIENT_FD_TOL: f64 = 1e-6;

/// Euler homogeneity <grad h_k, L> = k h_k(L).
pub const EULER_TRACE_TOL: f64 = 1e-10;

/// Jacobi identity with fd-wrapped inner brackets on gl(n,R).
pub const JACOBI_TOL: f64 = 1e-6;

/// Jacobi identity for the cotangent brackets, doubly nested differencing.
pub const PB_JACOBI_TOL: f64 = 1e-5;

/// Directional derivative of the quadratic structure matrix along 1_n
/// against the linear structure matrix; quotient of a quadratic is exact
/// up to rounding.
pub const LIE_DERIVATIVE_TOL: f64 = 1e-7;

// ── Cotangent-bundle reduction ───────────────────────────────────────

/// Reduced brackets at (1_n, L) against the direct gl(n,R) brackets.
pub const THEOREM_TOL: f64 = 1e-6;

/// Full five-term quadratic bracket against its invariant simplification.
pub const PROPOSITION_TOL: f64 = 1e-6;

/// nabla_1 F(1_n, L) against (r_+ - R_s)(nabla' f - nabla f).
pub const LEMMA_TOL: f64 = 1e-6;

/// Second half of the lemma: d_2 F(1_n, L) = df(L).
pub const LEMMA_D2_TOL: f64 = 1e-8;

/// Infinitesimal S-invariance conditions on invariant extensions.
pub const INVARIANCE_TOL: f64 = 1e-7;

/// S-invariance of extension values, |F(s.p) - F(p)|.
pub const EXTENSION_INVARIANCE_TOL: f64 = 1e-10;

/// Equivariance of nabla_1 under the S action.
pub const EQUIVARIANCE_TOL: f64 = 1e-7;

/// Strict upper triangularity of nabla_1' of an invariant function.
pub const STRICT_UPPER_TOL: f64 = 1e-8;

// ── Flows ────────────────────────────────────────────────────────────

/// Drift of h_1..h_4 and of sorted eigenvalues over a dt=1e-3, t=10 run.
pub const FLOW_DRIFT_TOL: f64 = 1e-8;

/// Asymmetry accumulated by RK4 on a symmetric initial condition.
pub const SYMMETRY_LEAK_TOL: f64 = 1e-10;

/// Leakage out of the tridiagonal symmetric subspace along QU flows.
pub const TRIDIAG_LEAK_TOL: f64 = 1e-9;

/// Bi-Hamiltonian consistency of the two vector fields along a trajectory.
pub const BIHAMILTONIAN_TRAJ_TOL: f64 = 1e-10;

// ── Text round-trips ─────────────────────────────────────────────────

/// Significant digits preserved by decimal matrix serialization.
pub const ROUNDTRIP_DIGITS: u32 = 15;
