//! Time-evolution engines and diagnostics.
//!
//! All integrators are fixed-step RK4. The master-equation convention is
//! `drho/dt = -i[H, rho] + sum_c 2 kappa_c (A rho A+ - 1/2 {A+A, rho})`,
//! i.e. a [`CollapseChannel`] rate `kappa` enters the dissipator with a
//! prefactor of `2 kappa`, and a single photon then decays as
//! `<a+a>(t) = exp(-2 kappa t)`.

mod adiabatic;
mod fidelity;
mod lindblad;
mod record;
mod schrodinger;
mod trajectory;

pub use adiabatic::{adiabaticity_report, annotate_record, AdiabaticityReport};
pub use fidelity::{gate_fidelity, standard_probe_states, FidelityReport, ProbeState};
pub use lindblad::{evolve_lindblad, CollapseChannel};
pub use record::{EvolutionRecord, EvolveOptions};
pub use schrodinger::{evolve_schrodinger, extract_geometric_phase, PhaseExtraction};
pub use trajectory::{evolve_trajectories, JumpEvent, TrajectoryEnsemble};

use std::sync::Arc;

use ndarray::Array2;
use thiserror::Error;

use crate::qcore::{HermitianOperator, LabeledBasis, QcoreError};
use crate::scalar::{re, Cx, Real};

#[derive(Debug, Clone, Error)]
pub enum DynamicsError {
    #[error("time step must be positive (got {0})")]
    BadTimeStep(f64),
    #[error("state/basis dimension mismatch: {expected} vs {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("initial state is not a density matrix: {0}")]
    BadDensityMatrix(String),
    #[error("initial state has zero norm")]
    ZeroNorm,
    #[error("per-step jump probability {p:.3e} exceeds 0.1; reduce dt")]
    JumpProbabilityTooLarge { p: f64 },
    #[error("trajectory count must be >= 1")]
    NoTrajectories,
    #[error("probe set is empty")]
    NoProbes,
    #[error(transparent)]
    Qcore(#[from] QcoreError),
}

pub type DynResult<T> = Result<T, DynamicsError>;

/// Hermitian-matrix-valued function of time over a fixed labeled basis.
/// Implementations must be pure; the integrators may evaluate them from
/// multiple workers concurrently.
pub trait TimeDependentHamiltonian<S: Real>: Sync {
    fn basis(&self) -> &Arc<LabeledBasis>;

    /// Write H(t) into `out` (sized `dim x dim`; implementations overwrite
    /// the full matrix).
    fn eval_into(&self, t: S, out: &mut Array2<Cx<S>>);

    fn at(&self, t: S) -> HermitianOperator<S> {
        let d = self.basis().dimension();
        let mut m = Array2::zeros((d, d));
        self.eval_into(t, &mut m);
        HermitianOperator::new_unchecked(self.basis().clone(), m)
    }

    /// Estimate of max ||H|| over `[t0, t1]` (infinity norm, sampled).
    /// Drives the default time step `dt = 0.05 / max||H||`.
    fn norm_bound(&self, t0: S, t1: S) -> S {
        let d = self.basis().dimension();
        let mut m = Array2::zeros((d, d));
        let samples = 64;
        let mut worst = S::zero();
        for k in 0..=samples {
            let t = t0 + (t1 - t0) * re::<S>(k as f64 / samples as f64);
            self.eval_into(t, &mut m);
            let mut rowmax = S::zero();
            for i in 0..d {
                let mut row = S::zero();
                for j in 0..d {
                    row += m[(i, j)].norm();
                }
                if row > rowmax {
                    rowmax = row;
                }
            }
            if rowmax > worst {
                worst = rowmax;
            }
        }
        worst
    }
}

/// Adapter turning a closure into a time-dependent Hamiltonian.
pub struct MatrixFn<S: Real, F: Fn(S, &mut Array2<Cx<S>>) + Sync> {
    pub basis: Arc<LabeledBasis>,
    pub f: F,
    pub _scalar: std::marker::PhantomData<S>,
}

impl<S: Real, F: Fn(S, &mut Array2<Cx<S>>) + Sync> MatrixFn<S, F> {
    pub fn new(basis: Arc<LabeledBasis>, f: F) -> Self {
        Self { basis, f, _scalar: std::marker::PhantomData }
    }
}

impl<S: Real, F: Fn(S, &mut Array2<Cx<S>>) + Sync> TimeDependentHamiltonian<S>
    for MatrixFn<S, F>
{
    fn basis(&self) -> &Arc<LabeledBasis> {
        &self.basis
    }

    fn eval_into(&self, t: S, out: &mut Array2<Cx<S>>) {
        (self.f)(t, out)
    }
}
