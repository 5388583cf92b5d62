//! Complex linear-algebra substrate with physically labeled bases.
//!
//! A [`LabeledBasis`] enumerates collective-excitation occupation labels
//! (optionally crossed with a cavity Fock index), [`StateVector`] and
//! [`HermitianOperator`] carry amplitudes and matrices over such a basis, and
//! [`eigendecompose`] extracts the full spectrum together with the
//! zero-energy (dark) subspace. Everything here is immutable after
//! construction and safe to share across threads.

mod basis;
mod eig;
mod operator;

pub use basis::{build_collective_basis, Label, LabeledBasis, StateVector};
pub use eig::{default_tol_zero, eigendecompose, jacobi_hermitian, EigenDecomposition};
pub use operator::{
    photon_annihilator,
    collective_annihilator, mode_annihilator, mode_number, HermitianOperator,
};

use thiserror::Error;

/// Errors from basis construction and operator validation.
#[derive(Debug, Clone, Error)]
pub enum QcoreError {
    #[error("mode list must not be empty")]
    EmptyModeList,
    #[error("duplicate mode name `{0}`")]
    DuplicateMode(String),
    #[error("excitation cap must satisfy 0 <= max_excitations <= N (got {max_excitations}, N = {atom_count})")]
    BadExcitationCap { max_excitations: i64, atom_count: i64 },
    #[error("negative cavity photon cap")]
    NegativePhotonCap,
    #[error("matrix is not Hermitian: max |A - A^dagger| element = {max_asymmetry:e}")]
    NonHermitian { max_asymmetry: f64 },
    #[error("operator/state defined on different bases (dims {expected} vs {got})")]
    BasisMismatch { expected: usize, got: usize },
    #[error("unknown mode `{0}` for this basis")]
    UnknownMode(String),
    #[error("state has zero norm; cannot normalize")]
    ZeroNorm,
    #[error("matrix must be square over the basis dimension {expected}, got {rows}x{cols}")]
    BadShape { expected: usize, rows: usize, cols: usize },
}

/// Module-level result alias.
pub type QcoreResult<T> = Result<T, QcoreError>;
