//! Classical response of the far-detuned cavity mode to an external drive.
//!
//! The slowly varying mode amplitude obeys
//! `d alpha / dt = -(i delta + kappa / 2) alpha + eps(t)`, whose solution is
//! the convolution of `eps` with `exp(-(i delta + kappa/2) t)`. When the
//! envelope timescale T satisfies `delta T >> 1` this is well approximated
//! by the quasi-static value `eps(t) / (i delta + kappa / 2)` (for
//! `eps(0) = 0`). Both are returned so callers can check the
//! approximation where they use it.

use crate::pulses::Channel;
use crate::scalar::{crl, re, Cx, Real};

use super::{GateError, GateResult};

#[derive(Debug, Clone)]
pub struct DriveResponse<S: Real> {
    pub times: Vec<S>,
    /// Convolution solution of the mode equation (RK4).
    pub exact: Vec<Cx<S>>,
    /// Quasi-static amplitude `eps(t) / (i delta + kappa / 2)`.
    pub quasistatic: Vec<Cx<S>>,
    /// Set when `delta * (t1 - t0) < 10`, where the quasi-static form is
    /// not trustworthy.
    pub slow_detuning_warning: bool,
}

impl<S: Real> DriveResponse<S> {
    /// `max_t |exact - quasistatic| / max_t |exact|`.
    pub fn max_relative_deviation(&self) -> S {
        let mut dev = S::zero();
        let mut scale = S::zero();
        for (e, q) in self.exact.iter().zip(self.quasistatic.iter()) {
            let d = (*e - *q).norm();
            if d > dev {
                dev = d;
            }
            let m = e.norm();
            if m > scale {
                scale = m;
            }
        }
        if scale > S::zero() {
            dev / scale
        } else {
            S::zero()
        }
    }
}

/// Integrate the driven-mode equation over `[t0, t1]` with `alpha(t0) = 0`.
pub fn cavity_drive_amplitude<S: Real>(
    eps: &Channel<S>,
    delta: S,
    kappa: S,
    t0: S,
    t1: S,
    n_steps: usize,
) -> GateResult<DriveResponse<S>> {
    if kappa < S::zero() {
        return Err(GateError::BadParams("kappa must be >= 0".into()));
    }
    if n_steps < 2 || t1 <= t0 {
        return Err(GateError::BadParams("bad time grid".into()));
    }
    let pole = Cx::new(kappa / re::<S>(2.0), delta); // i delta + kappa/2 times -1 handled below
    let dt = (t1 - t0) / re::<S>(n_steps as f64);
    let rhs = |t: S, a: Cx<S>| -> Cx<S> { crl(eps.value(t)) - pole * a };
    let mut alpha = Cx::new(S::zero(), S::zero());
    let mut times = Vec::with_capacity(n_steps + 1);
    let mut exact = Vec::with_capacity(n_steps + 1);
    let mut quasistatic = Vec::with_capacity(n_steps + 1);
    let denom = Cx::new(kappa / re::<S>(2.0), delta);
    let push = |t: S, a: Cx<S>, times: &mut Vec<S>, ex: &mut Vec<Cx<S>>, qs: &mut Vec<Cx<S>>| {
        times.push(t);
        ex.push(a);
        qs.push(crl(eps.value(t)) / denom);
    };
    push(t0, alpha, &mut times, &mut exact, &mut quasistatic);
    let half = re::<S>(0.5);
    let sixth = re::<S>(1.0 / 6.0);
    for k in 0..n_steps {
        let t = t0 + dt * re::<S>(k as f64);
        let k1 = rhs(t, alpha);
        let k2 = rhs(t + dt * half, alpha + k1 * crl(dt * half));
        let k3 = rhs(t + dt * half, alpha + k2 * crl(dt * half));
        let k4 = rhs(t + dt, alpha + k3 * crl(dt));
        alpha += (k1 + (k2 + k3) * crl(re::<S>(2.0)) + k4) * crl(dt * sixth);
        push(t + dt, alpha, &mut times, &mut exact, &mut quasistatic);
    }
    let warn = delta * (t1 - t0) < re::<S>(10.0);
    Ok(DriveResponse { times, exact, quasistatic, slow_detuning_warning: warn })
}
