//! Simulation library for holonomic gates on collective atomic-ensemble
//! qubits coupled to an optical cavity.
//!
//! The crate is organized around five layers:
//!
//! - [`qcore`]: labeled collective bases, state vectors, Hermitian operators,
//!   and a dense Hermitian eigensolver with dark-subspace extraction.
//! - [`pulses`]: parametric control paths (Gaussian/constant/piecewise
//!   envelopes), loop-closure checks, geometric loop integrals, and amplitude
//!   calibration by root finding.
//! - [`gates`]: the gate Hamiltonians (single-qubit phase loop, blockade
//!   pump, y-rotation, cavity-mediated controlled phase), their analytic dark
//!   states, holonomy values, cavity drive response, and photon-number
//!   formulas.
//! - [`dynamics`]: fixed-step RK4 engines for the Schroedinger and Lindblad
//!   equations, Monte-Carlo quantum-jump trajectories with reproducible
//!   seeding, phase extraction, adiabaticity diagnostics, and the gate
//!   fidelity functional.
//! - [`stark`]: Rydberg Stark structure in atomic units - Wigner 3j symbols,
//!   parabolic-state expansions, hydrogen radial matrix elements,
//!   dipole-dipole pair elements, quantum-defect Stark maps, and cloud
//!   blockade-shift estimates.
//!
//! The numerical core is generic over the floating-point scalar through
//! [`scalar::Real`]; the aliases below fix `f64`, which is what the shipped
//! scenarios and CLI use.
//!
//! Unit conventions: times are microseconds and every quantity quoted in
//! "MHz"/"kHz" is interpreted as an angular frequency in rad/us with
//! hbar = 1. The `stark` module works in atomic units internally and
//! converts at its boundaries (see `stark::units`).

pub mod dynamics;
pub mod gates;
pub mod presets;
pub mod pulses;
pub mod qcore;
pub mod scalar;
pub mod stark;

pub use scalar::Real;

/// Concrete `f64` aliases for the main library types.
pub type StateVector64 = qcore::StateVector<f64>;
pub type HermitianOperator64 = qcore::HermitianOperator<f64>;
pub type EigenDecomposition64 = qcore::EigenDecomposition<f64>;
pub type Envelope64 = pulses::Envelope<f64>;
pub type ControlPath64 = pulses::ControlPath<f64>;
pub type SampledPath64 = pulses::SampledPath<f64>;
// f64 aliases for dynamics land with that module.



