//! Rydberg Stark structure in atomic units: Wigner 3j symbols, parabolic
//! state expansions, hydrogen radial integrals, dipole-dipole pair
//! elements, quantum-defect Stark maps, and cloud blockade estimates.

pub mod units;

pub mod cloud;
pub mod dipdip;
pub mod model;
pub mod parabolic;
pub mod radial;
pub mod wigner;

pub use cloud::{cloud_min_shift, CloudShiftEstimate};
pub use dipdip::{pair_element, transition_value, TransitionRow, TRANSITION_ROWS};
pub use model::{
    assemble_stark_hamiltonian, pair_shift_outermost, s_block, stark_map, PairShift,
    QuantumDefects, StarkError, StarkMap, StarkModel,
};
pub use parabolic::{c_matrix, parabolic_coefficient, q_ladder, ParabolicState, SphericalState};
pub use radial::{hydrogen_radial_dipole, radial_dipole_closed_form, z_expectation_parabolic};
pub use wigner::{wigner3j, Half, WignerError};
