//! Worst-case (most-distant-pair) blockade shift for a cloud of atoms
//! sampled uniformly in a box. The most distant pair carries the smallest
//! dipole-dipole shift, which is the figure of merit for the blockade.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha12Rng;
use thiserror::Error;

use super::units;

#[derive(Debug, Clone, Error)]
pub enum CloudError {
    #[error("need at least two atoms (got {0})")]
    TooFewAtoms(usize),
    #[error("box dimensions must be positive")]
    DegenerateBox,
    #[error("principal quantum numbers must be >= 2")]
    BadQuantumNumbers,
}

#[derive(Debug, Clone, Copy)]
pub struct CloudShiftEstimate {
    /// Largest pairwise separation among the sampled positions, Bohr radii.
    pub max_distance_a0: f64,
    /// Shift of the most distant pair, atomic units.
    pub shift_au: f64,
    pub shift_rad_per_us: f64,
}

/// Sample `n_atoms` uniform positions in `box_um` (micrometers per axis)
/// and evaluate the hydrogen-like outermost-pair shift at the maximum
/// pairwise distance. Deterministic for a fixed seed; scaling every box
/// side by a factor scales the sampled positions linearly, so doubling the
/// box divides the shift by exactly 8.
pub fn cloud_min_shift(
    n1: u32,
    n2: u32,
    box_um: [f64; 3],
    n_atoms: usize,
    seed: u64,
) -> Result<CloudShiftEstimate, CloudError> {
    if n_atoms < 2 {
        return Err(CloudError::TooFewAtoms(n_atoms));
    }
    if box_um.iter().any(|s| *s <= 0.0) {
        return Err(CloudError::DegenerateBox);
    }
    if n1 < 2 || n2 < 2 {
        return Err(CloudError::BadQuantumNumbers);
    }
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let positions: Vec<[f64; 3]> = (0..n_atoms)
        .map(|_| {
            let u: [f64; 3] = [rng.gen(), rng.gen(), rng.gen()];
            [u[0] * box_um[0], u[1] * box_um[1], u[2] * box_um[2]]
        })
        .collect();
    let mut max_d2 = 0.0f64;
    for i in 0..n_atoms {
        for j in i + 1..n_atoms {
            let dx = positions[i][0] - positions[j][0];
            let dy = positions[i][1] - positions[j][1];
            let dz = positions[i][2] - positions[j][2];
            let d2 = dx * dx + dy * dy + dz * dz;
            if d2 > max_d2 {
                max_d2 = d2;
            }
        }
    }
    let r_um = max_d2.sqrt();
    let r_a0 = units::um_to_a0(r_um);
    let prod = f64::from(n1) * f64::from(n2) * f64::from(n1 - 1) * f64::from(n2 - 1);
    let shift_au = -4.5 * prod / (r_a0 * r_a0 * r_a0);
    Ok(CloudShiftEstimate {
        max_distance_a0: r_a0,
        shift_au,
        shift_rad_per_us: units::au_to_rad_per_us(shift_au),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_pinned_atoms_reduce_to_the_formula() {
        // with two atoms the max distance is just their separation; check
        // the shift against the direct formula at that R
        let est = cloud_min_shift(15, 15, [6.0, 6.0, 6.0], 2, 3).unwrap();
        let r = est.max_distance_a0;
        let direct = -4.5 * (15.0 * 14.0f64).powi(2) / r.powi(3);
        assert!(((est.shift_au - direct) / direct).abs() < 1e-14);
    }

    #[test]
    fn thousand_atom_cloud_near_one_rad_per_us() {
        let est = cloud_min_shift(15, 15, [6.0, 6.0, 6.0], 1000, 7).unwrap();
        let mag = est.shift_rad_per_us.abs();
        assert!(
            (1.0 / 3.0..3.0).contains(&mag),
            "worst-pair shift {mag} rad/us"
        );
    }

    #[test]
    fn doubling_the_box_scales_by_exactly_one_eighth() {
        let small = cloud_min_shift(15, 15, [6.0, 6.0, 6.0], 500, 11).unwrap();
        let large = cloud_min_shift(15, 15, [12.0, 12.0, 12.0], 500, 11).unwrap();
        let ratio = large.shift_au / small.shift_au;
        assert!((ratio - 0.125).abs() < 1e-12, "ratio {ratio}");
    }

    #[test]
    fn bad_inputs_rejected() {
        assert!(cloud_min_shift(15, 15, [6.0; 3], 1, 0).is_err());
        assert!(cloud_min_shift(15, 15, [0.0, 6.0, 6.0], 10, 0).is_err());
        assert!(cloud_min_shift(1, 15, [6.0; 3], 10, 0).is_err());
    }
}
