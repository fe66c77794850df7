//! Dense real square-matrix arithmetic on gl(n,R).
//!
//! Everything downstream works with [`SquareMatrix`]: the triangular
//! decomposition X = X_> + X_0 + X_<, the trace pairing tr(XY), the
//! commutator, the QU factorization and the small numerical kernels
//! (inverse, exponential, eigenvalues) needed by the bracket and flow
//! modules. The design envelope is n <= 12; all algorithms are chosen
//! for clarity and stability at that scale, not throughput.

mod eigen;
mod io;
mod qu;

pub use eigen::{eigenvalues, symmetric_eigenvalues};
pub use qu::{qu_factorize, qu_factorize_with, QuFactors};

use crate::error::{Error, Result};
use crate::tolerances;
use std::fmt;
use std::ops::{Add, Index, Mul, Neg, Sub};

/// A dense real n x n matrix, stored row-major.
///
/// Invertible values double as elements of GL(n,R); the type itself does
/// not track invertibility. Entries are validated to be finite on
/// construction from external data.
#[derive(Clone, PartialEq)]
pub struct SquareMatrix {
    n: usize,
    data: Vec<f64>,
}

impl SquareMatrix {
    /// Builds a matrix from row-major data.
    pub fn new(n: usize, data: Vec<f64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidConfig("dimension must be positive".into()));
        }
        if data.len() != n * n {
            return Err(Error::InvalidData {
                expected: n * n,
                got: data.len(),
            });
        }
        if !data.iter().all(|v| v.is_finite()) {
            return Err(Error::NonFinite {
                context: "matrix construction",
            });
        }
        Ok(Self { n, data })
    }

    /// Builds a matrix from nested rows.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidData {
                expected: n * n,
                got: rows.iter().map(Vec::len).sum(),
            });
        }
        Self::new(n, rows.concat())
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = 1.0;
        }
        m
    }

    /// Diagonal matrix with the given entries.
    pub fn diagonal(entries: &[f64]) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n);
        for (i, &v) in entries.iter().enumerate() {
            m.data[i * n + i] = v;
        }
        m
    }

    /// The elementary matrix E_ij (1 at row i, column j, zero elsewhere).
    pub fn elementary(n: usize, i: usize, j: usize) -> Self {
        assert!(i < n && j < n, "elementary index out of range");
        let mut m = Self::zeros(n);
        m.data[i * n + j] = 1.0;
        m
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m.data[i * n + j] = f(i, j);
            }
        }
        m
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] = v;
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.n, |i, j| self.get(j, i))
    }

    pub fn scale(&self, a: f64) -> Self {
        Self {
            n: self.n,
            data: self.data.iter().map(|v| a * v).collect(),
        }
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    /// k-th power by repeated multiplication; `pow(0)` is the identity.
    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::identity(self.n);
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    /// Largest absolute entry.
    pub fn max_norm(&self) -> f64 {
        self.data.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// Symmetric part (Z + Z^T)/2, the component in the orthocomplement of
    /// the skew-symmetric subalgebra.
    pub fn sym_part(&self) -> Self {
        Self::from_fn(self.n, |i, j| 0.5 * (self.get(i, j) + self.get(j, i)))
    }

    /// Skew-symmetric part (Z - Z^T)/2, the component in the subalgebra of
    /// antisymmetric matrices.
    pub fn skew_part(&self) -> Self {
        Self::from_fn(self.n, |i, j| 0.5 * (self.get(i, j) - self.get(j, i)))
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| (self.get(i, j) - self.get(j, i)).abs() <= tol))
    }

    /// Symmetric with zero entries beyond the first off-diagonal.
    pub fn is_tridiagonal_symmetric(&self, tol: f64) -> bool {
        self.is_symmetric(tol)
            && (0..self.n)
                .all(|i| (0..self.n).all(|j| i.abs_diff(j) <= 1 || self.get(i, j).abs() <= tol))
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    /// Determinant via LU with partial pivoting.
    pub fn det(&self) -> f64 {
        let n = self.n;
        let mut a = self.data.clone();
        let mut det = 1.0;
        for k in 0..n {
            let pivot_row = (k..n)
                .max_by(|&r, &s| a[r * n + k].abs().total_cmp(&a[s * n + k].abs()))
                .unwrap();
            if a[pivot_row * n + k] == 0.0 {
                return 0.0;
            }
            if pivot_row != k {
                for j in 0..n {
                    a.swap(k * n + j, pivot_row * n + j);
                }
                det = -det;
            }
            let pivot = a[k * n + k];
            det *= pivot;
            for r in k + 1..n {
                let factor = a[r * n + k] / pivot;
                for j in k..n {
                    a[r * n + j] -= factor * a[k * n + j];
                }
            }
        }
        det
    }

    /// Inverse via Gauss-Jordan with partial pivoting.
    pub fn inverse(&self) -> Result<Self> {
        let n = self.n;
        let threshold = tolerances::SINGULARITY_THRESHOLD * self.max_norm().max(1.0);
        let mut a = self.data.clone();
        let mut inv = Self::identity(n).data;
        for k in 0..n {
            let pivot_row = (k..n)
                .max_by(|&r, &s| a[r * n + k].abs().total_cmp(&a[s * n + k].abs()))
                .unwrap();
            let pivot = a[pivot_row * n + k];
            if pivot.abs() < threshold {
                return Err(Error::NearSingular { pivot, threshold });
            }
            if pivot_row != k {
                for j in 0..n {
                    a.swap(k * n + j, pivot_row * n + j);
                    inv.swap(k * n + j, pivot_row * n + j);
                }
            }
            let pivot = a[k * n + k];
            for j in 0..n {
                a[k * n + j] /= pivot;
                inv[k * n + j] /= pivot;
            }
            for r in 0..n {
                if r == k {
                    continue;
                }
                let factor = a[r * n + k];
                if factor != 0.0 {
                    for j in 0..n {
                        a[r * n + j] -= factor * a[k * n + j];
                        inv[r * n + j] -= factor * inv[k * n + j];
                    }
                }
            }
        }
        Ok(Self { n, data: inv })
    }

    /// Matrix exponential by scaling and squaring with a truncated series.
    pub fn expm(&self) -> Self {
        let norm = self.max_norm();
        let squarings = if norm > 0.5 {
            (norm / 0.5).log2().ceil() as u32
        } else {
            0
        };
        let scaled = self.scale(0.5f64.powi(squarings as i32));
        let mut sum = Self::identity(self.n);
        let mut term = Self::identity(self.n);
        // Series terms decay factorially once the argument norm is < 1/2.
        for k in 1..=40u32 {
            term = &(&term * &scaled) * (1.0 / f64::from(k));
            sum = &sum + &term;
            if term.max_norm() < tolerances::EXPM_TOL {
                break;
            }
        }
        let mut out = sum;
        for _ in 0..squarings {
            out = &out * &out;
        }
        out
    }
}

impl fmt::Debug for SquareMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "SquareMatrix(n={})", self.n)?;
        for i in 0..self.n {
            let row: Vec<String> = (0..self.n)
                .map(|j| format!("{:>12.6}", self.get(i, j)))
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl Index<(usize, usize)> for SquareMatrix {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.n + j]
    }
}

macro_rules! entrywise_op {
    ($trait:ident, $method:ident, $op:tt) => {
        impl $trait<&SquareMatrix> for &SquareMatrix {
            type Output = SquareMatrix;

            fn $method(self, rhs: &SquareMatrix) -> SquareMatrix {
                assert_eq!(self.n, rhs.n, "dimension mismatch");
                SquareMatrix {
                    n: self.n,
                    data: self
                        .data
                        .iter()
                        .zip(rhs.data.iter())
                        .map(|(a, b)| a $op b)
                        .collect(),
                }
            }
        }
    };
}

entrywise_op!(Add, add, +);
entrywise_op!(Sub, sub, -);

impl Neg for &SquareMatrix {
    type Output = SquareMatrix;

    fn neg(self) -> SquareMatrix {
        self.scale(-1.0)
    }
}

impl Mul<&SquareMatrix> for &SquareMatrix {
    type Output = SquareMatrix;

    fn mul(self, rhs: &SquareMatrix) -> SquareMatrix {
        assert_eq!(self.n, rhs.n, "dimension mismatch");
        let n = self.n;
        let mut out = SquareMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * rhs.data[k * n + j];
                }
            }
        }
        out
    }
}

impl Mul<f64> for &SquareMatrix {
    type Output = SquareMatrix;

    fn mul(self, rhs: f64) -> SquareMatrix {
        self.scale(rhs)
    }
}

fn check_same_dim(x: &SquareMatrix, y: &SquareMatrix) -> Result<()> {
    if x.n == y.n {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            expected: x.n,
            got: y.n,
        })
    }
}

/// The trace form <X,Y> = tr(XY), computed without forming the product.
pub fn trace_form(x: &SquareMatrix, y: &SquareMatrix) -> Result<f64> {
    check_same_dim(x, y)?;
    Ok(dot(x, y))
}

/// Infallible trace pairing for operands known to share a dimension.
pub(crate) fn dot(x: &SquareMatrix, y: &SquareMatrix) -> f64 {
    let n = x.n;
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            acc += x.data[i * n + j] * y.data[j * n + i];
        }
    }
    acc
}

/// The commutator [X,Y] = XY - YX.
pub fn commutator(x: &SquareMatrix, y: &SquareMatrix) -> Result<SquareMatrix> {
    check_same_dim(x, y)?;
    Ok(comm(x, y))
}

pub(crate) fn comm(x: &SquareMatrix, y: &SquareMatrix) -> SquareMatrix {
    &(x * y) - &(y * x)
}

/// The triple (X_>, X_0, X_<) of strictly upper, diagonal and strictly
/// lower triangular parts. The three summands reconstruct X exactly.
#[derive(Clone, Debug)]
pub struct TriangularParts {
    pub strict_upper: SquareMatrix,
    pub diagonal: SquareMatrix,
    pub strict_lower: SquareMatrix,
}

pub fn triangular_split(x: &SquareMatrix) -> TriangularParts {
    let n = x.n();
    TriangularParts {
        strict_upper: SquareMatrix::from_fn(n, |i, j| if i < j { x.get(i, j) } else { 0.0 }),
        diagonal: SquareMatrix::from_fn(n, |i, j| if i == j { x.get(i, j) } else { 0.0 }),
        strict_lower: SquareMatrix::from_fn(n, |i, j| if i > j { x.get(i, j) } else { 0.0 }),
    }
}
