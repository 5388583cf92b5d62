//! Single-qubit phase gate: a three-level lambda system on the collective
//! modes {e, s, a+} driven by two phase-matched lasers, with the logical
//! zero state fully decoupled.
//!
//! Couplings are `Omega_1 = Omega sin(theta)` on e<->1L and
//! `Omega_a = -Omega cos(theta) e^{i phi}` on e<->a+. The instantaneous
//! dark state `cos(theta)|1L> + sin(theta) e^{-i phi}|a+>` carries the
//! geometric phase `oint sin^2(theta) d(phi)` around a closed loop.

use std::sync::Arc;

use ndarray::{Array1, Array2};

use crate::dynamics::TimeDependentHamiltonian;
use crate::pulses::{loop_area_sin2, sample, ControlPath, CH_PHI, CH_THETA};
use crate::qcore::{build_collective_basis, jacobi_hermitian, LabeledBasis};
use crate::scalar::{crl, re, Cx, Real};

use super::{GateError, GateResult, HolonomyResult, HolonomyValue};

#[derive(Debug, Clone)]
pub struct PhaseGateParams<S: Real> {
    /// Constant Rabi magnitude, rad/us.
    pub omega: S,
    /// Closed loop with `theta` and `phi` channels.
    pub path: ControlPath<S>,
}

impl<S: Real> PhaseGateParams<S> {
    pub fn new(omega: S, path: ControlPath<S>) -> GateResult<Self> {
        if omega <= S::zero() {
            return Err(GateError::BadParams("omega must be positive".into()));
        }
        path.channel(CH_THETA)?;
        path.channel(CH_PHI)?;
        Ok(Self { omega, path })
    }
}

/// H(t) on the ordered basis {|0L>, |a+>, |1L>, |e>} (lexicographic over
/// modes e, s, a+; the |0L> row and column stay zero).
pub struct PhaseGateHamiltonian<S: Real> {
    pub params: PhaseGateParams<S>,
    basis: Arc<LabeledBasis>,
    pub idx_zero: usize,
    pub idx_aplus: usize,
    pub idx_one: usize,
    pub idx_e: usize,
}

impl<S: Real> PhaseGateHamiltonian<S> {
    pub fn new(params: PhaseGateParams<S>) -> GateResult<Self> {
        let basis = Arc::new(build_collective_basis(&["e", "s", "a+"], 1_000, 1, None)?);
        let idx_e = basis.single_excitation_index("e")?;
        let idx_one = basis.single_excitation_index("s")?;
        let idx_aplus = basis.single_excitation_index("a+")?;
        let idx_zero = basis.vacuum_index().expect("collective basis has a vacuum");
        Ok(Self { params, basis, idx_zero, idx_aplus, idx_one, idx_e })
    }

    /// Analytic dark state at loop point (theta, phi), normalized.
    pub fn dark_state(&self, theta: S, phi: S) -> Array1<Cx<S>> {
        let mut v = Array1::zeros(self.basis.dimension());
        v[self.idx_one] = crl(theta.cos());
        v[self.idx_aplus] = Cx::new(phi.cos(), -phi.sin()) * crl(theta.sin());
        v
    }

    pub fn angles(&self, t: S) -> (S, S) {
        let theta = self.params.path.channel(CH_THETA).expect("validated").value(t);
        let phi = self.params.path.channel(CH_PHI).expect("validated").value(t);
        (theta, phi)
    }
}

impl<S: Real> TimeDependentHamiltonian<S> for PhaseGateHamiltonian<S> {
    fn basis(&self) -> &Arc<LabeledBasis> {
        &self.basis
    }

    fn eval_into(&self, t: S, out: &mut Array2<Cx<S>>) {
        let (theta, phi) = self.angles(t);
        let om = self.params.omega;
        out.fill(Cx::new(S::zero(), S::zero()));
        let c_se = crl(om * theta.sin());
        // -Omega cos(theta) e^{i phi}
        let c_ae = Cx::new(phi.cos(), phi.sin()) * crl(-om * theta.cos());
        out[(self.idx_e, self.idx_one)] = c_se;
        out[(self.idx_one, self.idx_e)] = c_se.conj();
        out[(self.idx_e, self.idx_aplus)] = c_ae;
        out[(self.idx_aplus, self.idx_e)] = c_ae.conj();
    }
}

/// Geometric phase of the closed loop, evaluated analytically from the
/// loop integral; the minimum gap is taken from the instantaneous spectrum
/// on a coarse sample of the loop.
pub fn berry_phase_analytic<S: Real>(
    params: &PhaseGateParams<S>,
) -> GateResult<HolonomyResult<S>> {
    params.path.check_closed()?;
    let phase = loop_area_sin2(&params.path)?;
    let h = PhaseGateHamiltonian::new(params.clone())?;
    let min_gap = min_gap_over_loop(&h, &params.path)?;
    Ok(HolonomyResult {
        value: HolonomyValue::AbelianPhase(phase),
        leakage: S::zero(),
        min_gap,
    })
}

pub(crate) fn min_gap_over_loop<S: Real>(
    h: &impl TimeDependentHamiltonian<S>,
    path: &ControlPath<S>,
) -> GateResult<S> {
    let sampled = sample(path, 128)?;
    let d = h.basis().dimension();
    let mut m = Array2::zeros((d, d));
    let mut min_gap = S::infinity();
    for &t in &sampled.times {
        h.eval_into(t, &mut m);
        let (vals, _) = jacobi_hermitian(&m);
        let scale = vals.iter().fold(S::zero(), |a, v| if v.abs() > a { v.abs() } else { a });
        let tol = re::<S>(1e-9) * scale.max(S::one());
        for v in vals.iter() {
            if v.abs() > tol && v.abs() < min_gap {
                min_gap = v.abs();
            }
        }
    }
    Ok(min_gap)
}
