//! Y-rotation gate on the two-fold degenerate dark space of a four-level
//! tripod: modes {e, r, s, a-} with couplings
//! `Omega_0 = Omega sin(theta) cos(phi)` (e<->r),
//! `Omega_1 = Omega sin(theta) sin(phi)` (e<->s) and
//! `Omega_a = Omega cos(theta)` (e<->a-).
//!
//! With the loop starting at (theta, phi) = (0, pi/2) the dark frame is
//! `D1 = |0L>`, `D2 = |1L>`, and the cyclic evolution rotates the dark
//! coefficients by `phi_2 = oint cos(theta) d(phi)`:
//! `U = [[cos phi_2, sin phi_2], [-sin phi_2, cos phi_2]]`.

use std::sync::Arc;

use ndarray::{Array1, Array2};

use crate::dynamics::TimeDependentHamiltonian;
use crate::pulses::{sample, ControlPath, CH_PHI, CH_THETA, DEFAULT_LOOP_STEPS};
use crate::qcore::{Label, LabeledBasis};
use crate::scalar::{crl, re, Cx, Real};

use super::phase::min_gap_over_loop;
use super::{GateError, GateResult, HolonomyResult, HolonomyValue};

#[derive(Debug, Clone)]
pub struct YRotParams<S: Real> {
    pub omega: S,
    pub path: ControlPath<S>,
}

impl<S: Real> YRotParams<S> {
    pub fn new(omega: S, path: ControlPath<S>) -> GateResult<Self> {
        if omega <= S::zero() {
            return Err(GateError::BadParams("omega must be positive".into()));
        }
        path.channel(CH_THETA)?;
        path.channel(CH_PHI)?;
        Ok(Self { omega, path })
    }

    fn check_start_gauge(&self) -> GateResult<()> {
        let theta0 = self.path.channel(CH_THETA)?.value(self.path.t_start);
        let phi0 = self.path.channel(CH_PHI)?.value(self.path.t_start);
        let half_pi = re::<S>(std::f64::consts::FRAC_PI_2);
        let tol = re::<S>(1e-6);
        if theta0.abs() > tol || (phi0 - half_pi).abs() > tol {
            return Err(GateError::BadStartPoint {
                theta: theta0.to_f64().unwrap_or(f64::NAN),
                phi: phi0.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(())
    }
}

/// H(t) on the explicit basis {|e>, |0L> = |r>, |1L> = |s>, |a->}.
pub struct YRotHamiltonian<S: Real> {
    pub params: YRotParams<S>,
    basis: Arc<LabeledBasis>,
}

pub const YROT_E: usize = 0;
pub const YROT_ZERO: usize = 1;
pub const YROT_ONE: usize = 2;
pub const YROT_AMINUS: usize = 3;

impl<S: Real> YRotHamiltonian<S> {
    pub fn new(params: YRotParams<S>) -> GateResult<Self> {
        let modes = vec![
            "e".to_string(),
            "r".to_string(),
            "s".to_string(),
            "a-".to_string(),
        ];
        let labels = vec![
            Label::new(vec![1, 0, 0, 0]),
            Label::new(vec![0, 1, 0, 0]),
            Label::new(vec![0, 0, 1, 0]),
            Label::new(vec![0, 0, 0, 1]),
        ];
        let basis = Arc::new(LabeledBasis::from_labels(modes, 1_000, labels)?);
        Ok(Self { params, basis })
    }

    pub fn angles(&self, t: S) -> (S, S) {
        let theta = self.params.path.channel(CH_THETA).expect("validated").value(t);
        let phi = self.params.path.channel(CH_PHI).expect("validated").value(t);
        (theta, phi)
    }

    /// Dark basis vector D1 = sin(phi)|0L> - cos(phi)|1L>.
    pub fn dark_one(&self, phi: S) -> Array1<Cx<S>> {
        let mut v = Array1::zeros(4);
        v[YROT_ZERO] = crl(phi.sin());
        v[YROT_ONE] = crl(-phi.cos());
        v
    }

    /// Dark basis vector
    /// D2 = cos(theta)(cos(phi)|0L> + sin(phi)|1L>) - sin(theta)|a->.
    pub fn dark_two(&self, theta: S, phi: S) -> Array1<Cx<S>> {
        let mut v = Array1::zeros(4);
        v[YROT_ZERO] = crl(theta.cos() * phi.cos());
        v[YROT_ONE] = crl(theta.cos() * phi.sin());
        v[YROT_AMINUS] = crl(-theta.sin());
        v
    }
}

impl<S: Real> TimeDependentHamiltonian<S> for YRotHamiltonian<S> {
    fn basis(&self) -> &Arc<LabeledBasis> {
        &self.basis
    }

    fn eval_into(&self, t: S, out: &mut Array2<Cx<S>>) {
        let (theta, phi) = self.angles(t);
        let om = self.params.omega;
        out.fill(Cx::new(S::zero(), S::zero()));
        let c0 = crl(om * theta.sin() * phi.cos());
        let c1 = crl(om * theta.sin() * phi.sin());
        let ca = crl(om * theta.cos());
        out[(YROT_E, YROT_ZERO)] = c0;
        out[(YROT_ZERO, YROT_E)] = c0;
        out[(YROT_E, YROT_ONE)] = c1;
        out[(YROT_ONE, YROT_E)] = c1;
        out[(YROT_E, YROT_AMINUS)] = ca;
        out[(YROT_AMINUS, YROT_E)] = ca;
    }
}

/// 2x2 rotation `[[cos a, sin a], [-sin a, cos a]]`.
pub fn dark_rotation<S: Real>(angle: S) -> Array2<Cx<S>> {
    let mut u = Array2::zeros((2, 2));
    u[(0, 0)] = crl(angle.cos());
    u[(0, 1)] = crl(angle.sin());
    u[(1, 0)] = crl(-angle.sin());
    u[(1, 1)] = crl(angle.cos());
    u
}

/// Path-ordered product of the dark-space transport around the loop.
///
/// The dark coefficients obey `dC/dt = G(t) C` with
/// `G = [[0, cos(theta) dphi/dt], [-cos(theta) dphi/dt, 0]]`; each grid step
/// applies the exact exponential of its (antisymmetric) increment. For this
/// one-parameter family all increments commute, so the ordered product
/// collapses to `dark_rotation(oint cos(theta) dphi)` -- asserted against
/// the closed form in the tests rather than assumed here.
pub fn wilson_loop<S: Real>(params: &YRotParams<S>) -> GateResult<HolonomyResult<S>> {
    wilson_loop_n(params, DEFAULT_LOOP_STEPS)
}

pub fn wilson_loop_n<S: Real>(
    params: &YRotParams<S>,
    n_steps: usize,
) -> GateResult<HolonomyResult<S>> {
    params.path.check_closed()?;
    params.check_start_gauge()?;
    let sampled = sample(&params.path, n_steps)?;
    let i_theta = sampled.channel_index(CH_THETA)?;
    let i_phi = sampled.channel_index(CH_PHI)?;
    let mut u = Array2::eye(2);
    let half = re::<S>(0.5);
    for k in 0..sampled.times.len() - 1 {
        let dt = sampled.times[k + 1] - sampled.times[k];
        let f0 = sampled.values[i_theta][k].cos() * sampled.derivatives[i_phi][k];
        let f1 = sampled.values[i_theta][k + 1].cos() * sampled.derivatives[i_phi][k + 1];
        let angle = half * (f0 + f1) * dt;
        u = dark_rotation(angle).dot(&u);
    }
    let h = YRotHamiltonian::new(params.clone())?;
    let min_gap = min_gap_over_loop(&h, &params.path)?;
    Ok(HolonomyResult {
        value: HolonomyValue::DarkUnitary(u),
        leakage: S::zero(),
        min_gap,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pulses::{loop_area_cos, Channel, Envelope};
    use std::f64::consts::{FRAC_PI_2, PI};

    pub fn yrot_path(a_theta: f64, a_phi: f64) -> ControlPath<f64> {
        ControlPath::new(0.0, 5.5, 200.0)
            .unwrap()
            .with_channel(
                CH_THETA,
                Channel::single(Envelope::gaussian(a_theta, 3.0, 0.25)),
            )
            .unwrap()
            .with_channel(
                CH_PHI,
                Channel::new(vec![
                    Envelope::constant(FRAC_PI_2),
                    Envelope::gaussian(a_phi, 2.4, 0.25),
                ]),
            )
            .unwrap()
    }

    #[test]
    fn zero_loop_gives_identity() {
        let params = YRotParams::new(200.0, yrot_path(0.0, 0.0)).unwrap();
        let res = wilson_loop(&params).unwrap();
        let u = res.dark_unitary().unwrap();
        assert!((u[(0, 0)].re - 1.0).abs() < 1e-14);
        assert!(u[(0, 1)].norm() < 1e-14);
    }

    #[test]
    fn wrong_start_point_rejected() {
        // phi starting at 0 instead of pi/2
        let path = ControlPath::new(0.0, 5.5, 200.0)
            .unwrap()
            .with_channel(CH_THETA, Channel::single(Envelope::gaussian(1.0, 3.0, 0.25)))
            .unwrap()
            .with_channel(CH_PHI, Channel::single(Envelope::gaussian(1.0, 2.4, 0.25)))
            .unwrap();
        let params = YRotParams::new(200.0, path).unwrap();
        assert!(matches!(
            wilson_loop(&params),
            Err(GateError::BadStartPoint { .. })
        ));
    }

    #[test]
    fn ordered_product_matches_closed_form() {
        let params = YRotParams::new(200.0, yrot_path(1.3, 1.5)).unwrap();
        let res = wilson_loop_n(&params, 10_000).unwrap();
        let u = res.dark_unitary().unwrap();
        let phi2 = loop_area_cos(&params.path).unwrap();
        let expect = dark_rotation(phi2);
        let mut err = 0.0f64;
        for i in 0..2 {
            for j in 0..2 {
                err += (u[(i, j)] - expect[(i, j)]).norm_sqr();
            }
        }
        assert!(err.sqrt() < 1e-8, "frobenius distance {}", err.sqrt());
    }

    #[test]
    fn wilson_output_is_real_orthogonal() {
        let params = YRotParams::new(200.0, yrot_path(1.1, 1.5)).unwrap();
        let res = wilson_loop(&params).unwrap();
        let u = res.dark_unitary().unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert!(u[(i, j)].im.abs() < 1e-12);
            }
        }
        // U^T U = 1
        let det = u[(0, 0)] * u[(1, 1)] - u[(0, 1)] * u[(1, 0)];
        assert!((det - Cx::new(1.0, 0.0)).norm() < 1e-10);
    }

    #[test]
    fn dark_space_at_start_gauge() {
        let params = YRotParams::new(1.0, yrot_path(1.0, 1.0)).unwrap();
        let h = YRotHamiltonian::new(params).unwrap();
        let d1 = h.dark_one(FRAC_PI_2);
        assert!((d1[YROT_ZERO].re - 1.0).abs() < 1e-15);
        assert!(d1[YROT_ONE].norm() < 1e-15);
        let d2 = h.dark_two(0.0, FRAC_PI_2);
        assert!((d2[YROT_ONE].re - 1.0).abs() < 1e-15);
        assert!(d2[YROT_ZERO].norm() < 1e-12);
    }

    #[test]
    fn dark_states_annihilated_along_loop() {
        let params = YRotParams::new(200.0, yrot_path(1.3, 1.5)).unwrap();
        let h = YRotHamiltonian::new(params).unwrap();
        let mut m = Array2::zeros((4, 4));
        for k in 0..100 {
            let t = 5.5 * (k as f64 + 0.5) / 100.0;
            let (theta, phi) = h.angles(t);
            h.eval_into(t, &mut m);
            for d in [h.dark_one(phi), h.dark_two(theta, phi)] {
                let hv = m.dot(&d);
                let r = hv.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
                assert!(r < 1e-10 * 200.0, "t = {t}: residual {r}");
            }
        }
    }

    #[test]
    fn explicit_dark_point_from_text() {
        // D2 at (theta, phi) = (0.4, 0.9) is annihilated
        let params = YRotParams::new(200.0, yrot_path(1.0, 1.0)).unwrap();
        let h = YRotHamiltonian::new(params).unwrap();
        let (theta, phi) = (0.4f64, 0.9f64);
        let mut m = Array2::zeros((4, 4));
        let om = 200.0;
        let c0 = Cx::new(om * theta.sin() * phi.cos(), 0.0);
        let c1 = Cx::new(om * theta.sin() * phi.sin(), 0.0);
        let ca = Cx::new(om * theta.cos(), 0.0);
        m[(YROT_E, YROT_ZERO)] = c0;
        m[(YROT_ZERO, YROT_E)] = c0;
        m[(YROT_E, YROT_ONE)] = c1;
        m[(YROT_ONE, YROT_E)] = c1;
        m[(YROT_E, YROT_AMINUS)] = ca;
        m[(YROT_AMINUS, YROT_E)] = ca;
        let d2 = h.dark_two(theta, phi);
        let hv = m.dot(&d2);
        let r = hv.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        assert!(r < 1e-12 * om);
    }

    #[test]
    fn quarter_turn_unitary() {
        // calibrate the theta amplitude so phi_2 = pi / 4, then compare the
        // ordered product against the expected quarter-turn matrix
        let path = yrot_path(1.0, 1.5);
        let tuned = crate::pulses::calibrate_channel_scale(
            &path,
            CH_THETA,
            PI / 4.0,
            2.8,
            |p| loop_area_cos(p),
        )
        .unwrap();
        let params = YRotParams::new(200.0, tuned).unwrap();
        let res = wilson_loop(&params).unwrap();
        let u = res.dark_unitary().unwrap();
        let s = 0.5f64.sqrt();
        assert!((u[(0, 0)].re - s).abs() < 1e-6);
        assert!((u[(0, 1)].re - s).abs() < 1e-6);
        assert!((u[(1, 0)].re + s).abs() < 1e-6);
        assert!((u[(1, 1)].re - s).abs() < 1e-6);
    }
}
