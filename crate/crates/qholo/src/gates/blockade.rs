//! Hydrogen-like dipole-dipole blockade shift of two outermost Stark
//! eigenstates separated by R along the field axis:
//! `u = -(9/2) n1 n2 (n1 - 1)(n2 - 1) / R^3` in atomic units (4 pi eps0 = 1),
//! i.e. the product of the two permanent dipoles `(3/2) n (n - 1)` with the
//! `-2 / R^3` z-z geometric factor.

use crate::scalar::{re, Real};
use crate::stark::units::AU_ENERGY_RAD_PER_US;

use super::{GateError, GateResult};

#[derive(Debug, Clone, Copy)]
pub struct BlockadeShift<S: Real> {
    /// Energy shift in hartree.
    pub atomic_units: S,
    /// The same shift as an angular frequency in rad/us.
    pub rad_per_us: S,
}

/// Pair shift of `|n, m=0, q=n-1>` states at separation `r_a0` Bohr radii.
pub fn blockade_shift_hydrogenlike<S: Real>(
    n1: u32,
    n2: u32,
    r_a0: S,
) -> GateResult<BlockadeShift<S>> {
    if n1 < 2 || n2 < 2 {
        return Err(GateError::BadParams(
            "principal quantum numbers must be >= 2".into(),
        ));
    }
    if r_a0 <= S::zero() {
        return Err(GateError::BadParams("separation must be positive".into()));
    }
    let prod = re::<S>(f64::from(n1) * f64::from(n2) * f64::from(n1 - 1) * f64::from(n2 - 1));
    let au = re::<S>(-4.5) * prod / (r_a0 * r_a0 * r_a0);
    Ok(BlockadeShift {
        atomic_units: au,
        rad_per_us: au * re::<S>(AU_ENERGY_RAD_PER_US),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn direct_substitution_n2() {
        let s = blockade_shift_hydrogenlike::<f64>(2, 2, 1e4).unwrap();
        assert!((s.atomic_units - (-4.5 * 4.0 / 1e12)).abs() < 1e-26);
    }

    #[test]
    fn n70_pair_at_micron_scale_is_hundreds_of_rad_per_us() {
        // at the worst-pair distance of a few-micron cloud the n = 70 shift
        // sits at the 1e2..1e3 rad/us scale
        let r = crate::stark::units::um_to_a0(6.0);
        let s = blockade_shift_hydrogenlike::<f64>(70, 70, r).unwrap();
        let mag = s.rad_per_us.abs();
        assert!((1.0e2..1.0e4).contains(&mag), "got {mag} rad/us");
    }

    #[test]
    fn zero_or_tiny_n_rejected() {
        assert!(blockade_shift_hydrogenlike::<f64>(1, 5, 1e4).is_err());
        assert!(blockade_shift_hydrogenlike::<f64>(5, 5, 0.0).is_err());
    }
}
