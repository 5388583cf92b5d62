//! Cavity-mediated controlled-phase gate on two atomic clouds.
//!
//! The two clouds exchange a virtual photon of the shared cavity mode. The
//! closed single-excitation space splits into two five-state chains:
//!
//! plus  sector: |100> -W1 sin(th)- |r+00> -g1- |001> -g2- |0r+0>
//!               -W2 cos(th) e^{i phi2}- |0a+0>
//! minus sector: |110> -W1 sin(th)- |r+10> -g1- |011> -g3- |0r-0>
//!               -W3 cos(th) e^{i phi3}- |0a-0>
//!
//! (state labels are |cloud1, cloud2, photons>). Each chain has one dark
//! state; transporting it around a closed (theta, phi2) loop imprints the
//! conditional phase on the |10> branch while the |11> branch is driven
//! with a frozen phi3 and so acquires none. |00> and |01> never couple.

use std::sync::Arc;

use ndarray::{Array1, Array2};

use crate::dynamics::TimeDependentHamiltonian;
use crate::pulses::{sample, ControlPath, PulseResult, CH_PHI2, CH_THETA, DEFAULT_LOOP_STEPS};
use crate::qcore::{Label, LabeledBasis};
use crate::scalar::{crl, re, Cx, Real};

use super::{GateError, GateResult};

/// Which photon-exchange chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sector {
    Plus,
    Minus,
}

/// Which logical input the closed-form photon number refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhotonBranch {
    /// Initial |10>: plus sector, couplings (g1, g2, W1, W2).
    OneZero,
    /// Initial |11>: minus sector, couplings (g1, g3, W1, W3).
    OneOne,
}

#[derive(Debug, Clone)]
pub struct CPhaseParams<S: Real> {
    /// Single-atom cavity couplings, rad/us.
    pub g_plus: S,
    pub g_minus: S,
    /// Atoms per cloud.
    pub n_atoms: u64,
    /// Collective couplings. `g1 = g2 = g_plus sqrt(N)` unless overridden;
    /// `g3 = g_minus` (no collective enhancement on the s <-> r- leg).
    pub g1: S,
    pub g2: S,
    pub g3: S,
    /// Drive magnitudes, rad/us.
    pub omega1: S,
    pub omega2: S,
    pub omega3: S,
    /// Fixed phases. The gauge fixes phi1 = 0; phi3 is held constant so the
    /// minus sector acquires no geometric phase.
    pub phi1: S,
    pub phi3: S,
    /// Closed loop with `theta` and `phi2` channels.
    pub path: ControlPath<S>,
}

impl<S: Real> CPhaseParams<S> {
    /// Collective couplings derived from the single-atom ones.
    pub fn from_single_atom(
        g_plus: S,
        g_minus: S,
        n_atoms: u64,
        omega1: S,
        omega2: S,
        omega3: S,
        path: ControlPath<S>,
    ) -> GateResult<Self> {
        let root_n = re::<S>((n_atoms as f64).sqrt());
        let g1 = g_plus * root_n;
        Self::new(g_plus, g_minus, n_atoms, g1, g1, g_minus, omega1, omega2, omega3, path)
    }

    #[allow(clippy::too_many_arguments)]
    pub fn new(
        g_plus: S,
        g_minus: S,
        n_atoms: u64,
        g1: S,
        g2: S,
        g3: S,
        omega1: S,
        omega2: S,
        omega3: S,
        path: ControlPath<S>,
    ) -> GateResult<Self> {
        for (name, v) in [
            ("g_plus", g_plus),
            ("g_minus", g_minus),
            ("g1", g1),
            ("g2", g2),
            ("g3", g3),
            ("omega1", omega1),
            ("omega2", omega2),
            ("omega3", omega3),
        ] {
            if v <= S::zero() {
                return Err(GateError::BadParams(format!("{name} must be positive")));
            }
        }
        path.channel(CH_THETA)?;
        path.channel(CH_PHI2)?;
        Ok(Self {
            g_plus,
            g_minus,
            n_atoms,
            g1,
            g2,
            g3,
            omega1,
            omega2,
            omega3,
            phi1: S::zero(),
            phi3: S::zero(),
            path,
        })
    }

    pub fn angles(&self, t: S) -> (S, S) {
        let theta = self.path.channel(CH_THETA).expect("validated").value(t);
        let phi2 = self.path.channel(CH_PHI2).expect("validated").value(t);
        (theta, phi2)
    }
}

const MODES: [&str; 7] = ["s1", "r+1", "s2", "r+2", "r-2", "a+2", "a-2"];

fn label(occ: [u32; 7], photon: u32) -> Label {
    Label::with_photon(occ.to_vec(), photon)
}

fn sector_labels(sector: Sector) -> Vec<Label> {
    match sector {
        Sector::Plus => vec![
            label([1, 0, 0, 0, 0, 0, 0], 0), // |100>
            label([0, 1, 0, 0, 0, 0, 0], 0), // |r+00>
            label([0, 0, 0, 0, 0, 0, 0], 1), // |001>
            label([0, 0, 0, 1, 0, 0, 0], 0), // |0r+0>
            label([0, 0, 0, 0, 0, 1, 0], 0), // |0a+0>
        ],
        Sector::Minus => vec![
            label([1, 0, 1, 0, 0, 0, 0], 0), // |110>
            label([0, 1, 1, 0, 0, 0, 0], 0), // |r+10>
            label([0, 0, 1, 0, 0, 0, 0], 1), // |011>
            label([0, 0, 0, 0, 1, 0, 0], 0), // |0r-0>
            label([0, 0, 0, 0, 0, 0, 1], 0), // |0a-0>
        ],
    }
}

/// Positions of the chain states inside a sector basis.
pub const SEC_INPUT: usize = 0;
pub const SEC_RPLUS1: usize = 1;
pub const SEC_PHOTON: usize = 2;
pub const SEC_R2: usize = 3;
pub const SEC_ANC: usize = 4;

fn modes_vec() -> Vec<String> {
    MODES.iter().map(|m| m.to_string()).collect()
}

/// One five-state sector of the controlled-phase Hamiltonian.
pub struct CPhaseSectorHamiltonian<S: Real> {
    pub params: CPhaseParams<S>,
    pub sector: Sector,
    basis: Arc<LabeledBasis>,
}

impl<S: Real> CPhaseSectorHamiltonian<S> {
    pub fn new(params: CPhaseParams<S>, sector: Sector) -> GateResult<Self> {
        let basis = Arc::new(LabeledBasis::from_labels(
            modes_vec(),
            params.n_atoms,
            sector_labels(sector),
        )?);
        Ok(Self { params, sector, basis })
    }

    /// Analytic dark state at loop point (theta, phi2), normalized. Only
    /// the input, photon, and ancilla slots are populated.
    pub fn dark_state(&self, theta: S, phi2: S) -> Array1<Cx<S>> {
        let p = &self.params;
        let (g_reg, g_anc, om_reg, om_anc, chi) = match self.sector {
            Sector::Plus => (p.g1, p.g2, p.omega1, p.omega2, phi2),
            Sector::Minus => (p.g1, p.g3, p.omega1, p.omega3, p.phi3),
        };
        let a = g_reg / om_reg * theta.cos();
        let b = g_anc / om_anc * theta.sin();
        let c = -theta.sin() * theta.cos();
        let norm = (a * a + b * b + c * c).sqrt();
        let mut v: Array1<Cx<S>> = Array1::zeros(5);
        v[SEC_INPUT] = crl(a / norm);
        v[SEC_PHOTON] = crl(c / norm);
        v[SEC_ANC] = Cx::new(chi.cos(), -chi.sin()) * crl(b / norm);
        v
    }
}

impl<S: Real> TimeDependentHamiltonian<S> for CPhaseSectorHamiltonian<S> {
    fn basis(&self) -> &Arc<LabeledBasis> {
        &self.basis
    }

    fn eval_into(&self, t: S, out: &mut Array2<Cx<S>>) {
        let (theta, phi2) = self.params.angles(t);
        out.fill(Cx::new(S::zero(), S::zero()));
        write_sector(
            &self.params,
            self.sector,
            theta,
            phi2,
            [SEC_INPUT, SEC_RPLUS1, SEC_PHOTON, SEC_R2, SEC_ANC],
            out,
        );
    }
}

fn write_sector<S: Real>(
    p: &CPhaseParams<S>,
    sector: Sector,
    theta: S,
    phi2: S,
    idx: [usize; 5],
    out: &mut Array2<Cx<S>>,
) {
    let [input, rplus1, photon, r2, anc] = idx;
    let (g_anc, om_anc, chi) = match sector {
        Sector::Plus => (p.g2, p.omega2, phi2),
        Sector::Minus => (p.g3, p.omega3, p.phi3),
    };
    // |input> -> |r+ in cloud 1>, driven leg (phi1 = 0 gauge, real)
    let w1 = crl(p.omega1 * theta.sin());
    out[(rplus1, input)] = w1;
    out[(input, rplus1)] = w1;
    // cavity legs
    let g1 = crl(p.g1);
    out[(photon, rplus1)] = g1;
    out[(rplus1, photon)] = g1;
    let ga = crl(g_anc);
    out[(photon, r2)] = ga;
    out[(r2, photon)] = ga;
    // ancilla drive W cos(theta) e^{i chi} on <r2|H|anc>
    let wa = Cx::new(chi.cos(), chi.sin()) * crl(om_anc * theta.cos());
    out[(r2, anc)] = wa;
    out[(anc, r2)] = wa.conj();
}

/// Full closed space for open-system runs: the two stationary logical
/// states |000> and |010> followed by the plus and minus chains. A photon
/// decay from |001> lands in |000>, from |011> in |010>.
pub struct CPhaseSystem<S: Real> {
    pub params: CPhaseParams<S>,
    basis: Arc<LabeledBasis>,
}

/// Index layout of [`CPhaseSystem`]'s basis.
pub const SYS_00: usize = 0;
pub const SYS_01: usize = 1;
pub const SYS_PLUS: usize = 2; // ..=6 mirror the sector layout
pub const SYS_MINUS: usize = 7; // ..=11

impl<S: Real> CPhaseSystem<S> {
    pub fn new(params: CPhaseParams<S>) -> GateResult<Self> {
        let mut labels = vec![
            label([0, 0, 0, 0, 0, 0, 0], 0), // |000>
            label([0, 0, 1, 0, 0, 0, 0], 0), // |010>
        ];
        labels.extend(sector_labels(Sector::Plus));
        labels.extend(sector_labels(Sector::Minus));
        let basis = Arc::new(LabeledBasis::from_labels(modes_vec(), params.n_atoms, labels)?);
        Ok(Self { params, basis })
    }

    /// Indices of the computational basis {|00>, |01>, |10>, |11>} inside
    /// the system basis.
    pub fn computational_indices(&self) -> [usize; 4] {
        [SYS_00, SYS_01, SYS_PLUS + SEC_INPUT, SYS_MINUS + SEC_INPUT]
    }

    /// Photon annihilation operator on the system basis.
    pub fn photon_annihilator(&self) -> Array2<Cx<S>> {
        crate::qcore::photon_annihilator(&self.basis)
    }
}

impl<S: Real> TimeDependentHamiltonian<S> for CPhaseSystem<S> {
    fn basis(&self) -> &Arc<LabeledBasis> {
        &self.basis
    }

    fn eval_into(&self, t: S, out: &mut Array2<Cx<S>>) {
        let (theta, phi2) = self.params.angles(t);
        out.fill(Cx::new(S::zero(), S::zero()));
        write_sector(
            &self.params,
            Sector::Plus,
            theta,
            phi2,
            [
                SYS_PLUS + SEC_INPUT,
                SYS_PLUS + SEC_RPLUS1,
                SYS_PLUS + SEC_PHOTON,
                SYS_PLUS + SEC_R2,
                SYS_PLUS + SEC_ANC,
            ],
            out,
        );
        write_sector(
            &self.params,
            Sector::Minus,
            theta,
            phi2,
            [
                SYS_MINUS + SEC_INPUT,
                SYS_MINUS + SEC_RPLUS1,
                SYS_MINUS + SEC_PHOTON,
                SYS_MINUS + SEC_R2,
                SYS_MINUS + SEC_ANC,
            ],
            out,
        );
    }
}

/// Geometric-phase integrand of the plus-sector dark state:
/// `f(theta) = (g2/W2)^2 sin^2 / [(g1/W1)^2 cos^2 + (g2/W2)^2 sin^2 +
/// sin^2 cos^2]`.
fn phase_integrand<S: Real>(p: &CPhaseParams<S>, theta: S) -> S {
    let s2 = theta.sin() * theta.sin();
    let c2 = theta.cos() * theta.cos();
    let ra = p.g1 / p.omega1;
    let rb = p.g2 / p.omega2;
    let num = rb * rb * s2;
    num / (ra * ra * c2 + num + s2 * c2)
}

/// Conditional phase acquired by the |10> input over the closed loop,
/// as a line integral in (theta, phi2).
pub fn cphase_phase_analytic<S: Real>(params: &CPhaseParams<S>) -> GateResult<S> {
    cphase_phase_analytic_n(params, DEFAULT_LOOP_STEPS)
}

pub fn cphase_phase_analytic_n<S: Real>(
    params: &CPhaseParams<S>,
    n_steps: usize,
) -> GateResult<S> {
    let sampled = sample(&params.path, n_steps)?;
    let i_theta = sampled.channel_index(CH_THETA)?;
    let i_phi2 = sampled.channel_index(CH_PHI2)?;
    let half = re::<S>(0.5);
    let mut acc = S::zero();
    for k in 0..sampled.times.len() - 1 {
        let f0 = phase_integrand(params, sampled.values[i_theta][k])
            * sampled.derivatives[i_phi2][k];
        let f1 = phase_integrand(params, sampled.values[i_theta][k + 1])
            * sampled.derivatives[i_phi2][k + 1];
        acc += half * (f0 + f1) * (sampled.times[k + 1] - sampled.times[k]);
    }
    Ok(acc)
}

/// Closed-form mean cavity photon number of the dark state at time `t`.
pub fn cavity_photon_number<S: Real>(
    params: &CPhaseParams<S>,
    t: S,
    branch: PhotonBranch,
) -> S {
    let (theta, _) = params.angles(t);
    photon_number_at_theta(params, theta, branch)
}

pub fn photon_number_at_theta<S: Real>(
    params: &CPhaseParams<S>,
    theta: S,
    branch: PhotonBranch,
) -> S {
    let (g_anc, om_anc) = match branch {
        PhotonBranch::OneZero => (params.g2, params.omega2),
        PhotonBranch::OneOne => (params.g3, params.omega3),
    };
    let s2 = theta.sin() * theta.sin();
    let c2 = theta.cos() * theta.cos();
    let ra = params.g1 / params.omega1;
    let rb = g_anc / om_anc;
    let num = s2 * c2;
    num / (ra * ra * c2 + rb * rb * s2 + num)
}

/// Peak of the closed-form photon number over the loop.
pub fn photon_number_peak<S: Real>(
    params: &CPhaseParams<S>,
    branch: PhotonBranch,
) -> PulseResult<S> {
    let sampled = sample(&params.path, DEFAULT_LOOP_STEPS)?;
    let i_theta = sampled.channel_index(CH_THETA)?;
    let mut peak = S::zero();
    for &theta in &sampled.values[i_theta] {
        let n = photon_number_at_theta(params, theta, branch);
        if n > peak {
            peak = n;
        }
    }
    Ok(peak)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pulses::{Channel, Envelope};
    use std::f64::consts::PI;

    pub fn paper_loop() -> ControlPath<f64> {
        ControlPath::new(0.0, 7.5, 40.0)
            .unwrap()
            .with_channel(
                CH_THETA,
                Channel::single(Envelope::gaussian(PI / 4.0, 3.3, 0.5)),
            )
            .unwrap()
            .with_channel(
                CH_PHI2,
                Channel::single(Envelope::gaussian(PI / 4.0, 3.715, 0.5)),
            )
            .unwrap()
    }

    pub fn paper_params() -> CPhaseParams<f64> {
        CPhaseParams::new(
            20.0, 10.0, 1000, 660.0, 660.0, 10.0, 40.0, 50.0, 300.0, paper_loop(),
        )
        .unwrap()
    }

    #[test]
    fn sectors_act_on_disjoint_labels() {
        let plus: Vec<Label> = sector_labels(Sector::Plus);
        let minus: Vec<Label> = sector_labels(Sector::Minus);
        for l in &plus {
            assert!(!minus.contains(l), "label {l:?} shared between sectors");
        }
    }

    #[test]
    fn theta_zero_decouples_the_lasers() {
        let p = paper_params();
        let h = CPhaseSectorHamiltonian::new(p, Sector::Plus).unwrap();
        let m = h.at(0.0);
        let m = m.matrix();
        // no laser coupling out of |100> at theta = 0, cavity legs active
        assert!(m[(SEC_RPLUS1, SEC_INPUT)].norm() < 1e-7);
        assert!((m[(SEC_PHOTON, SEC_RPLUS1)].re - 660.0).abs() < 1e-12);
        assert!((m[(SEC_PHOTON, SEC_R2)].re - 660.0).abs() < 1e-12);
    }

    #[test]
    fn dark_state_annihilated_both_sectors() {
        let p = paper_params();
        for sector in [Sector::Plus, Sector::Minus] {
            let h = CPhaseSectorHamiltonian::new(p.clone(), sector).unwrap();
            let mut m = Array2::zeros((5, 5));
            for k in 0..100 {
                let t = 7.5 * (k as f64 + 0.5) / 100.0;
                let (theta, phi2) = p.angles(t);
                let d = h.dark_state(theta, phi2);
                h.eval_into(t, &mut m);
                let hv = m.dot(&d);
                let r = hv.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
                assert!(r < 1e-10 * 660.0, "{sector:?} t = {t}: residual {r}");
            }
        }
    }

    #[test]
    fn dark_state_at_quoted_point() {
        // (theta, phi2) = (0.6, 0.3) with the quoted coupling set
        let p = paper_params();
        let h = CPhaseSectorHamiltonian::new(p, Sector::Plus).unwrap();
        let d = h.dark_state(0.6, 0.3);
        let mut m = Array2::zeros((5, 5));
        write_sector(
            &h.params,
            Sector::Plus,
            0.6,
            0.3,
            [SEC_INPUT, SEC_RPLUS1, SEC_PHOTON, SEC_R2, SEC_ANC],
            &mut m,
        );
        let hv = m.dot(&d);
        let r = hv.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        assert!(r < 1e-10, "residual {r}");
    }

    #[test]
    fn analytic_phase_near_pi_over_16() {
        let phi3 = cphase_phase_analytic(&paper_params()).unwrap();
        let target = PI / 16.0;
        assert!(
            (phi3 - target).abs() < 0.05 * target,
            "phi3 = {phi3}, target {target}"
        );
    }

    #[test]
    fn phase_independent_of_overall_coupling_scale() {
        let p = paper_params();
        let mut scaled = p.clone();
        scaled.g1 *= 2.0;
        scaled.g2 *= 2.0;
        scaled.g3 *= 2.0;
        scaled.omega1 *= 2.0;
        scaled.omega2 *= 2.0;
        scaled.omega3 *= 2.0;
        let a = cphase_phase_analytic(&p).unwrap();
        let b = cphase_phase_analytic(&scaled).unwrap();
        assert!((a - b).abs() < 1e-14);
    }

    #[test]
    fn theta_zero_loop_gives_zero_phase() {
        let mut p = paper_params();
        p.path
            .channels
            .get_mut(CH_THETA)
            .unwrap()
            .scale = 0.0;
        let phi3 = cphase_phase_analytic(&p).unwrap();
        assert!(phi3.abs() < 1e-15);
    }

    #[test]
    fn photon_number_bounds_and_zeros() {
        let p = paper_params();
        for branch in [PhotonBranch::OneZero, PhotonBranch::OneOne] {
            assert!(photon_number_at_theta(&p, 0.0, branch).abs() < 1e-300);
            assert!(photon_number_at_theta(&p, PI / 2.0, branch).abs() < 1e-25);
            for k in 0..200 {
                let theta = PI / 2.0 * (k as f64) / 200.0;
                let n = photon_number_at_theta(&p, theta, branch);
                assert!((0.0..=1.0).contains(&n));
            }
        }
    }

    #[test]
    fn minus_branch_peaks_higher_than_plus() {
        let p = paper_params();
        let plus = photon_number_peak(&p, PhotonBranch::OneZero).unwrap();
        let minus = photon_number_peak(&p, PhotonBranch::OneOne).unwrap();
        assert!(minus > plus, "n_ph-: {minus} vs n_ph+: {plus}");
    }

    #[test]
    fn system_photon_operator_maps_into_sinks() {
        let p = paper_params();
        let sys = CPhaseSystem::new(p).unwrap();
        let a = sys.photon_annihilator();
        assert!((a[(SYS_00, SYS_PLUS + SEC_PHOTON)].re - 1.0).abs() < 1e-15);
        assert!((a[(SYS_01, SYS_MINUS + SEC_PHOTON)].re - 1.0).abs() < 1e-15);
        let nonzero = a.iter().filter(|z| z.norm() > 0.0).count();
        assert_eq!(nonzero, 2);
    }
}
