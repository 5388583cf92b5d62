//! Gate Hamiltonians, analytic dark states, and holonomy values.
//!
//! Four builders cover the gate set: the single-qubit phase loop
//! ([`phase`]), the blockade-assisted register pump ([`pump`]), the
//! y-rotation over a two-fold degenerate dark space ([`yrot`]), and the
//! cavity-mediated controlled-phase gate on two clouds ([`cphase`]).
//! [`cavity`] models the classical drive response of the off-resonant
//! cavity mode and [`blockade`] the hydrogen-like dipole-dipole pair shift.

pub mod blockade;
pub mod cavity;
pub mod cphase;
pub mod phase;
pub mod pump;
pub mod yrot;

pub use blockade::{blockade_shift_hydrogenlike, BlockadeShift};
pub use cavity::{cavity_drive_amplitude, DriveResponse};
pub use cphase::{
    cavity_photon_number, cphase_phase_analytic, CPhaseParams, CPhaseSectorHamiltonian,
    CPhaseSystem, PhotonBranch, Sector,
};
pub use phase::{berry_phase_analytic, PhaseGateHamiltonian, PhaseGateParams};
pub use pump::{PumpBranch, PumpHamiltonian, PumpParams};
pub use yrot::{wilson_loop, YRotHamiltonian, YRotParams};

use ndarray::Array2;
use thiserror::Error;

use crate::pulses::PulseError;
use crate::qcore::QcoreError;
use crate::scalar::{Cx, Real};

#[derive(Debug, Clone, Error)]
pub enum GateError {
    #[error("invalid gate parameter: {0}")]
    BadParams(String),
    #[error("loop must start at (theta, phi) = (0, pi/2); got ({theta:.3e}, {phi:.6})")]
    BadStartPoint { theta: f64, phi: f64 },
    #[error("basis truncation too small: {0}")]
    Truncation(String),
    #[error(transparent)]
    Pulse(#[from] PulseError),
    #[error(transparent)]
    Qcore(#[from] QcoreError),
}

pub type GateResult<T> = Result<T, GateError>;

/// Holonomy acquired by the dark space over one closed control loop.
#[derive(Debug, Clone)]
pub enum HolonomyValue<S: Real> {
    /// Non-degenerate dark state: a single geometric phase in rad.
    AbelianPhase(S),
    /// Two-fold degenerate dark space: the 2x2 unitary on it.
    DarkUnitary(Array2<Cx<S>>),
}

#[derive(Debug, Clone)]
pub struct HolonomyResult<S: Real> {
    pub value: HolonomyValue<S>,
    /// Population outside the dark space at the end of the loop. Analytic
    /// holonomies carry 0 here; dynamics-derived values report the actual
    /// leakage.
    pub leakage: S,
    /// Minimum |nonzero eigenvalue| of H along the loop.
    pub min_gap: S,
}

impl<S: Real> HolonomyResult<S> {
    pub fn abelian_phase(&self) -> Option<S> {
        match &self.value {
            HolonomyValue::AbelianPhase(p) => Some(*p),
            HolonomyValue::DarkUnitary(_) => None,
        }
    }

    pub fn dark_unitary(&self) -> Option<&Array2<Cx<S>>> {
        match &self.value {
            HolonomyValue::AbelianPhase(_) => None,
            HolonomyValue::DarkUnitary(u) => Some(u),
        }
    }
}
