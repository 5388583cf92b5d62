//! Adiabatic register pump: a two-photon ladder from the collective ground
//! state through the intermediate Rydberg mode m into the register mode r,
//! with dipole-dipole shifts suppressing every double excitation.
//!
//! Second-quantized form on the truncated (m, r) Fock space:
//!
//! `H = sqrt(N) W_p1(t) (M + M+) + W_p2(t) (M+ R + R+ M)
//!      + u_mm n_m (n_m - 1) + u_rr n_r (n_r - 1) + u_rm n_m n_r
//!      [+ u_fm n_m + u_fr n_r  when one f excitation is parked]`
//!
//! The shifts are the minimum pair shifts over the cloud (worst case), so
//! the simulated suppression is a lower bound on the real one.

use std::sync::Arc;

use ndarray::{Array1, Array2};

use crate::dynamics::TimeDependentHamiltonian;
use crate::pulses::{Channel, Envelope};
use crate::qcore::{build_collective_basis, LabeledBasis};
use crate::scalar::{crl, re, Cx, Real};

use super::{GateError, GateResult};

/// Which logical branch the pump acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PumpBranch {
    /// Initial |0L>: the f mode is empty and the ladder is resonant.
    ZeroL,
    /// Initial |1L> parked in f: one spectator f excitation adds
    /// `u_fm n_m + u_fr n_r` diagonal shifts that block the ladder.
    OneL,
}

#[derive(Debug, Clone)]
pub struct PumpParams<S: Real> {
    /// Single-atom pump Rabi envelope (the drive enters as sqrt(N) W_p1).
    pub omega_p1: Channel<S>,
    /// Exchange Rabi envelope between r and m (no sqrt(N) enhancement).
    pub omega_p2: Channel<S>,
    pub n_atoms: u64,
    /// Minimum pair shifts, rad/us.
    pub u_mm: S,
    pub u_rr: S,
    pub u_ff: S,
    pub u_rm: S,
    pub u_fm: S,
    pub u_fr: S,
    pub max_excitations: u32,
}

impl<S: Real> PumpParams<S> {
    pub fn validate(&self) -> GateResult<()> {
        if self.n_atoms < 1 {
            return Err(GateError::BadParams("need at least one atom".into()));
        }
        for (name, u) in [
            ("u_mm", self.u_mm),
            ("u_rr", self.u_rr),
            ("u_ff", self.u_ff),
            ("u_rm", self.u_rm),
            ("u_fm", self.u_fm),
            ("u_fr", self.u_fr),
        ] {
            if u < S::zero() {
                return Err(GateError::BadParams(format!(
                    "{name} is a magnitude and must be >= 0"
                )));
            }
        }
        if self.max_excitations < 2 {
            return Err(GateError::Truncation(
                "pump basis must host double excitations (max_excitations >= 2)".into(),
            ));
        }
        Ok(())
    }

    /// Gaussian STIRAP-style pulse pair: the exchange leg peaks first, the
    /// pump leg later, transferring the ground state into a single r
    /// excitation.
    pub fn stirap_pulses(
        sqrt_n_omega_p1_peak: S,
        omega_p2_peak: S,
        n_atoms: u64,
        center_p2: S,
        center_p1: S,
        width: S,
    ) -> (Channel<S>, Channel<S>) {
        let root_n = re::<S>((n_atoms as f64).sqrt());
        let p1 = Channel::single(Envelope::gaussian(
            sqrt_n_omega_p1_peak / root_n,
            center_p1,
            width,
        ));
        let p2 = Channel::single(Envelope::gaussian(omega_p2_peak, center_p2, width));
        (p1, p2)
    }
}

/// Pump Hamiltonian on the truncated {m, r} collective basis.
pub struct PumpHamiltonian<S: Real> {
    pub params: PumpParams<S>,
    pub branch: PumpBranch,
    basis: Arc<LabeledBasis>,
    drive: Array2<Cx<S>>,
    exchange: Array2<Cx<S>>,
    diagonal: Array1<S>,
}

impl<S: Real> PumpHamiltonian<S> {
    pub fn new(params: PumpParams<S>, branch: PumpBranch) -> GateResult<Self> {
        params.validate()?;
        let basis = Arc::new(build_collective_basis(
            &["m", "r"],
            params.n_atoms,
            params.max_excitations,
            None,
        )?);
        let d = basis.dimension();

        let m_low = crate::qcore::mode_annihilator::<S>(&basis, "m")?;
        let r_low = crate::qcore::mode_annihilator::<S>(&basis, "r")?;
        let m_dag = adjoint(&m_low);
        let r_dag = adjoint(&r_low);

        // drive structure M + M+, exchange structure M+ R + R+ M
        let drive = &m_low + &m_dag;
        let exchange = m_dag.dot(&r_low) + r_dag.dot(&m_low);

        let mut diagonal = Array1::zeros(d);
        let i_m = basis.mode_position("m")?;
        let i_r = basis.mode_position("r")?;
        for (k, label) in basis.labels().iter().enumerate() {
            let nm = re::<S>(f64::from(label.occ[i_m]));
            let nr = re::<S>(f64::from(label.occ[i_r]));
            let one = S::one();
            let mut e = params.u_mm * nm * (nm - one)
                + params.u_rr * nr * (nr - one)
                + params.u_rm * nm * nr;
            if branch == PumpBranch::OneL {
                e += params.u_fm * nm + params.u_fr * nr;
            }
            diagonal[k] = e;
        }

        Ok(Self { params, branch, basis, drive, exchange, diagonal })
    }

    pub fn index_of(&self, n_m: u32, n_r: u32) -> Option<usize> {
        self.basis.lookup(&crate::qcore::Label::new(vec![n_m, n_r]))
    }

    /// Indices of all states with two or more total excitations.
    pub fn double_excitation_indices(&self) -> Vec<usize> {
        self.basis
            .labels()
            .iter()
            .enumerate()
            .filter(|(_, l)| l.total_excitations() >= 2)
            .map(|(i, _)| i)
            .collect()
    }
}

impl<S: Real> TimeDependentHamiltonian<S> for PumpHamiltonian<S> {
    fn basis(&self) -> &Arc<LabeledBasis> {
        &self.basis
    }

    fn eval_into(&self, t: S, out: &mut Array2<Cx<S>>) {
        let root_n = re::<S>((self.params.n_atoms as f64).sqrt());
        let a1 = root_n * self.params.omega_p1.value(t);
        let a2 = self.params.omega_p2.value(t);
        let d = self.basis.dimension();
        for i in 0..d {
            for j in 0..d {
                out[(i, j)] = self.drive[(i, j)] * crl(a1) + self.exchange[(i, j)] * crl(a2);
            }
            out[(i, i)] += crl(self.diagonal[i]);
        }
    }
}

fn adjoint<S: Real>(m: &Array2<Cx<S>>) -> Array2<Cx<S>> {
    let mut out = Array2::zeros((m.ncols(), m.nrows()));
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            out[(j, i)] = m[(i, j)].conj();
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(u_rm: f64, u_mm: f64) -> PumpParams<f64> {
        let (p1, p2) = PumpParams::stirap_pulses(30.0, 30.0, 1000, 3.25, 4.75, 1.0);
        PumpParams {
            omega_p1: p1,
            omega_p2: p2,
            n_atoms: 1000,
            u_mm,
            u_rr: 500.0,
            u_ff: 500.0,
            u_rm,
            u_fm: 400.0,
            u_fr: 500.0,
            max_excitations: 2,
        }
    }

    #[test]
    fn truncation_below_two_rejected() {
        let mut p = params(400.0, 300.0);
        p.max_excitations = 1;
        assert!(matches!(
            PumpHamiltonian::new(p, PumpBranch::ZeroL),
            Err(GateError::Truncation(_))
        ));
    }

    #[test]
    fn decoupled_limit_is_driven_oscillator() {
        // all shifts zero and no exchange: a linearly driven m oscillator
        // with ladder elements sqrt(k) * sqrt(N) W_p1
        let mut p = params(0.0, 0.0);
        p.u_rr = 0.0;
        p.u_ff = 0.0;
        p.u_fm = 0.0;
        p.u_fr = 0.0;
        p.omega_p2 = Channel::single(Envelope::constant(0.0));
        p.omega_p1 = Channel::single(Envelope::constant(0.5));
        let h = PumpHamiltonian::new(p, PumpBranch::ZeroL).unwrap();
        let m = h.at(0.0);
        let m = m.matrix();
        let g = h.index_of(0, 0).unwrap();
        let m1 = h.index_of(1, 0).unwrap();
        let m2 = h.index_of(2, 0).unwrap();
        let r1 = h.index_of(0, 1).unwrap();
        let amp = 0.5 * 1000.0f64.sqrt();
        assert!((m[(m1, g)].re - amp).abs() < 1e-12);
        assert!((m[(m2, m1)].re - amp * 2.0f64.sqrt()).abs() < 1e-10);
        assert!(m[(r1, g)].norm() < 1e-15);
        for i in 0..h.basis().dimension() {
            assert!(m[(i, i)].norm() < 1e-15, "no shifts in the decoupled limit");
        }
    }

    #[test]
    fn blockade_shifts_sit_on_the_diagonal() {
        let h = PumpHamiltonian::new(params(400.0, 300.0), PumpBranch::ZeroL).unwrap();
        let m = h.at(0.0);
        let m = m.matrix();
        let mm = h.index_of(2, 0).unwrap();
        let rm = h.index_of(1, 1).unwrap();
        let rr = h.index_of(0, 2).unwrap();
        assert!((m[(mm, mm)].re - 600.0).abs() < 1e-12); // u_mm * 2 * 1
        assert!((m[(rm, rm)].re - 400.0).abs() < 1e-12); // u_rm * 1 * 1
        assert!((m[(rr, rr)].re - 1000.0).abs() < 1e-12); // u_rr * 2 * 1
    }

    #[test]
    fn spectator_f_excitation_detunes_the_ladder() {
        let h = PumpHamiltonian::new(params(400.0, 300.0), PumpBranch::OneL).unwrap();
        let m = h.at(0.0);
        let m = m.matrix();
        let m1 = h.index_of(1, 0).unwrap();
        let r1 = h.index_of(0, 1).unwrap();
        assert!((m[(m1, m1)].re - 400.0).abs() < 1e-12); // u_fm
        assert!((m[(r1, r1)].re - 500.0).abs() < 1e-12); // u_fr
    }
}
