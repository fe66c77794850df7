//! Seeded random inputs for the property suites.
//!
//! Every generator takes the RNG explicitly so suites stay reproducible:
//! one seed fixes the whole trial sequence regardless of scheduling.

use crate::matcore::{qu_factorize, SquareMatrix};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// The crate-wide deterministic RNG.
pub fn rng(seed: u64) -> ChaCha8Rng {
    use rand::SeedableRng;
    ChaCha8Rng::seed_from_u64(seed)
}

/// Dense matrix with entries uniform in [-1, 1].
pub fn matrix(rng: &mut impl Rng, n: usize) -> SquareMatrix {
    SquareMatrix::from_fn(n, |_, _| rng.gen_range(-1.0..=1.0))
}

pub fn symmetric(rng: &mut impl Rng, n: usize) -> SquareMatrix {
    matrix(rng, n).sym_part().scale(2.0)
}

pub fn antisymmetric(rng: &mut impl Rng, n: usize) -> SquareMatrix {
    matrix(rng, n).skew_part().scale(2.0)
}

pub fn tridiagonal_symmetric(rng: &mut impl Rng, n: usize) -> SquareMatrix {
    let diag: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..=1.0)).collect();
    let off: Vec<f64> = (0..n.saturating_sub(1))
        .map(|_| rng.gen_range(-1.0..=1.0))
        .collect();
    SquareMatrix::from_fn(n, |i, j| {
        if i == j {
            diag[i]
        } else if i + 1 == j {
            off[i]
        } else if j + 1 == i {
            off[j]
        } else {
            0.0
        }
    })
}

/// Random matrix rejected until |det| is comfortably away from zero, so
/// inverses and cubic brackets stay well conditioned.
pub fn invertible(rng: &mut impl Rng, n: usize) -> SquareMatrix {
    loop {
        let m = matrix(rng, n);
        if m.det().abs() >= 0.2 {
            return m;
        }
    }
}

/// Random element of O(n): the orthogonal QU factor of a random
/// invertible matrix (sign convention makes it well defined).
pub fn orthogonal(rng: &mut impl Rng, n: usize) -> SquareMatrix {
    let m = invertible(rng, n);
    qu_factorize(&m)
        .expect("invertible sample must factorize")
        .orthogonal
}

/// Random element of B: upper triangular with diagonal in [0.6, 1.6].
pub fn upper_positive(rng: &mut impl Rng, n: usize) -> SquareMatrix {
    let mut m = SquareMatrix::zeros(n);
    for i in 0..n {
        for j in i..n {
            let v = if i == j {
                rng.gen_range(0.6..=1.6)
            } else {
                rng.gen_range(-1.0..=1.0)
            };
            m.set(i, j, v);
        }
    }
    m
}

/// Random group element recomposed from QU factors, guaranteeing
/// comfortable invertibility.
pub fn group_element(rng: &mut impl Rng, n: usize) -> SquareMatrix {
    &orthogonal(rng, n) * &upper_positive(rng, n)
}
