//! Time integration of the Lax equations dL/dt = [R(L^k), L] and
//! conservation / isospectrality reporting along trajectories.

use crate::error::{Error, Result};
use crate::matcore::{comm, eigenvalues, symmetric_eigenvalues, SquareMatrix};
use crate::rmat::{apply_r, RMatrixKind};
use num_complex::Complex64;

/// Configuration of one integration run.
#[derive(Clone, Copy, Debug)]
pub struct FlowConfig {
    pub rkind: RMatrixKind,
    /// Hierarchy index: the flow of h_k.
    pub k: u32,
    pub dt: f64,
    pub t_end: f64,
    pub scheme: Scheme,
    /// Log every `stride`-th step (the initial and final states are
    /// always logged).
    pub stride: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scheme {
    Rk4,
}

impl FlowConfig {
    pub fn new(rkind: RMatrixKind, k: u32, dt: f64, t_end: f64) -> Result<Self> {
        let cfg = Self {
            rkind,
            k,
            dt,
            t_end,
            scheme: Scheme::Rk4,
            stride: 100,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_stride(mut self, stride: usize) -> Self {
        self.stride = stride.max(1);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0 && self.t_end > 0.0 && self.dt < self.t_end) {
            return Err(Error::InvalidConfig(format!(
                "need 0 < dt < t_end, got dt={} t_end={}",
                self.dt, self.t_end
            )));
        }
        if self.k == 0 || self.k > 6 {
            return Err(Error::InvalidConfig(format!(
                "hierarchy index k={} not in 1..=6",
                self.k
            )));
        }
        Ok(())
    }
}

/// Conserved quantities and spectrum logged at one sample time.
#[derive(Clone, Debug)]
pub struct InvariantSample {
    /// h_m(L) = tr(L^m)/m for m = 1..4.
    pub h: [f64; 4],
    /// Eigenvalues sorted by (re, im); real for symmetric states.
    pub eigenvalues: Vec<Complex64>,
}

/// A sampled integration run.
#[derive(Clone, Debug)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<SquareMatrix>,
    pub invariants: Vec<InvariantSample>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Max drift of h_m over the trajectory, per m.
    pub fn h_drift(&self) -> [f64; 4] {
        let mut drift = [0.0f64; 4];
        if let Some(first) = self.invariants.first() {
            for sample in &self.invariants {
                for (slot, (now, start)) in
                    drift.iter_mut().zip(sample.h.iter().zip(first.h.iter()))
                {
                    *slot = slot.max((now - start).abs());
                }
            }
        }
        drift
    }

    /// Max drift of the sorted eigenvalue list over the trajectory.
    pub fn eigenvalue_drift(&self) -> f64 {
        let mut drift = 0.0f64;
        if let Some(first) = self.invariants.first() {
            for sample in &self.invariants {
                for (a, b) in sample.eigenvalues.iter().zip(first.eigenvalues.iter()) {
                    drift = drift.max((a - b).norm());
                }
            }
        }
        drift
    }
}

/// The Lax right-hand side [R(L^k), L].
pub fn lax_rhs(rkind: RMatrixKind, k: u32, l: &SquareMatrix) -> SquareMatrix {
    comm(&apply_r(rkind, &l.pow(k)), l)
}

fn invariant_sample(l: &SquareMatrix) -> Result<InvariantSample> {
    let mut h = [0.0f64; 4];
    let mut power = l.clone();
    for (m, slot) in h.iter_mut().enumerate() {
        *slot = power.trace() / (m as f64 + 1.0);
        power = &power * l;
    }
    let eigenvalues = if l.is_symmetric(1e-9) {
        symmetric_eigenvalues(l)
            .into_iter()
            .map(|x| Complex64::new(x, 0.0))
            .collect()
    } else {
        eigenvalues(l)?
    };
    Ok(InvariantSample { h, eigenvalues })
}

/// Classical RK4 on the Lax equation, logging invariants at the stride.
pub fn integrate(config: &FlowConfig, l0: &SquareMatrix) -> Result<Trajectory> {
    config.validate()?;
    let steps = (config.t_end / config.dt).round() as usize;
    let dt = config.dt;

    let mut traj = Trajectory {
        times: Vec::new(),
        states: Vec::new(),
        invariants: Vec::new(),
    };
    let mut log = |t: f64, l: &SquareMatrix| -> Result<()> {
        traj.times.push(t);
        traj.states.push(l.clone());
        traj.invariants.push(invariant_sample(l)?);
        Ok(())
    };

    let mut l = l0.clone();
    log(0.0, &l)?;
    for step in 1..=steps {
        let k1 = lax_rhs(config.rkind, config.k, &l);
        let k2 = lax_rhs(config.rkind, config.k, &(&l + &k1.scale(dt / 2.0)));
        let k3 = lax_rhs(config.rkind, config.k, &(&l + &k2.scale(dt / 2.0)));
        let k4 = lax_rhs(config.rkind, config.k, &(&l + &k3.scale(dt)));
        let increment = &(&k1 + &k4) + &(&(&k2 + &k3) * 2.0);
        l = &l + &increment.scale(dt / 6.0);
        if !l.is_finite() {
            return Err(Error::Diverged {
                t: step as f64 * dt,
            });
        }
        if step % config.stride == 0 || step == steps {
            log(step as f64 * dt, &l)?;
        }
    }
    Ok(traj)
}

/// Diagnostic summary of a trajectory: decay of the off-diagonal part and
/// agreement of the final diagonal with the initial spectrum. The drift
/// fields need at least two samples.
#[derive(Clone, Debug)]
pub struct ConvergenceReport {
    /// Frobenius norm of the off-diagonal part at each sample.
    pub offdiag_norms: Vec<f64>,
    /// Final diagonal entries, ascending.
    pub final_diagonal_sorted: Vec<f64>,
    /// Initial eigenvalues sorted by (re, im).
    pub initial_spectrum: Vec<Complex64>,
    pub h_drift: Option<[f64; 4]>,
    pub eigenvalue_drift: Option<f64>,
}

pub fn convergence_report(traj: &Trajectory) -> Result<ConvergenceReport> {
    if traj.is_empty() {
        return Err(Error::InvalidConfig(
            "cannot report on an empty trajectory".into(),
        ));
    }
    let offdiag_norms = traj
        .states
        .iter()
        .map(|l| {
            SquareMatrix::from_fn(l.n(), |i, j| if i == j { 0.0 } else { l.get(i, j) })
                .frobenius_norm()
        })
        .collect();
    let last = traj.states.last().expect("nonempty");
    let mut final_diagonal_sorted: Vec<f64> = (0..last.n()).map(|i| last.get(i, i)).collect();
    final_diagonal_sorted.sort_by(f64::total_cmp);

    let multiple = traj.len() > 1;
    Ok(ConvergenceReport {
        offdiag_norms,
        final_diagonal_sorted,
        initial_spectrum: traj.invariants[0].eigenvalues.clone(),
        h_drift: multiple.then(|| traj.h_drift()),
        eigenvalue_drift: multiple.then(|| traj.eigenvalue_drift()),
    })
}

/// CSV emission: columns t, L entries row-major, h1..h4, eig1..eign
/// (real parts; symmetric states have real spectra).
pub fn trajectory_to_csv(traj: &Trajectory) -> String {
    let mut out = String::new();
    let n = traj.states.first().map_or(0, SquareMatrix::n);
    let mut header: Vec<String> = vec!["t".into()];
    for i in 1..=n {
        for j in 1..=n {
            header.push(format!("L{i}_{j}"));
        }
    }
    for m in 1..=4 {
        header.push(format!("h{m}"));
    }
    for i in 1..=n {
        header.push(format!("eig{i}"));
    }
    out.push_str(&header.join(","));
    out.push('\n');

    for (idx, t) in traj.times.iter().enumerate() {
        let l = &traj.states[idx];
        let sample = &traj.invariants[idx];
        let mut row: Vec<String> = vec![format!("{t}")];
        for i in 0..n {
            for j in 0..n {
                row.push(format!("{}", l.get(i, j)));
            }
        }
        for m in 0..4 {
            row.push(format!("{}", sample.h[m]));
        }
        for eig in &sample.eigenvalues {
            row.push(format!("{}", eig.re));
        }
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}
