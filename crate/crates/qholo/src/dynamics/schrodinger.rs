//! Fixed-step RK4 integration of `i d(psi)/dt = H(t) psi` and relative
//! phase extraction from the resulting record.

use ndarray::{Array1, Array2};

use crate::qcore::StateVector;
use crate::scalar::{crl, re, Cx, Real};

use super::record::{decimation_stride, EvolutionRecord, EvolveOptions};
use super::{DynResult, DynamicsError, TimeDependentHamiltonian};

pub fn evolve_schrodinger<S: Real>(
    h: &impl TimeDependentHamiltonian<S>,
    psi0: &StateVector<S>,
    t0: S,
    t1: S,
    opts: &EvolveOptions<S>,
) -> DynResult<EvolutionRecord<S>> {
    let d = h.basis().dimension();
    if psi0.basis().dimension() != d {
        return Err(DynamicsError::DimensionMismatch {
            expected: d,
            got: psi0.basis().dimension(),
        });
    }
    let norm0 = psi0.norm();
    if norm0 <= S::zero() {
        return Err(DynamicsError::ZeroNorm);
    }
    let mut warnings = Vec::new();
    if (norm0 - S::one()).abs() > re::<S>(1e-8) {
        warnings.push(format!(
            "initial norm {} deviates from 1",
            norm0.to_f64().unwrap_or(f64::NAN)
        ));
    }

    let hmax = h.norm_bound(t0, t1);
    let dt = match opts.dt {
        Some(dt) if dt > S::zero() => dt,
        Some(dt) => return Err(DynamicsError::BadTimeStep(dt.to_f64().unwrap_or(f64::NAN))),
        None => re::<S>(0.05) / hmax.max(re::<S>(1e-12)),
    };
    if dt * hmax >= re::<S>(0.1) {
        warnings.push(format!(
            "dt * max||H|| = {:.3} does not resolve the fastest scale",
            (dt * hmax).to_f64().unwrap_or(f64::NAN)
        ));
    }
    let span = t1 - t0;
    let n_steps = (span / dt).to_f64().unwrap_or(1.0).ceil().max(1.0) as usize;
    let dt = span / re::<S>(n_steps as f64);
    let stride = decimation_stride(n_steps, opts.target_samples);

    let mut psi: Array1<Cx<S>> = psi0.amplitudes().clone();
    let mut record = RecordBuilder::new(h, opts, dt);
    record.push(t0, &psi);

    let mut h_lo = Array2::zeros((d, d));
    let mut h_mid = Array2::zeros((d, d));
    let mut h_hi = Array2::zeros((d, d));
    h.eval_into(t0, &mut h_lo);
    let half = re::<S>(0.5);
    let sixth = re::<S>(1.0 / 6.0);
    for k in 0..n_steps {
        let t = t0 + dt * re::<S>(k as f64);
        h.eval_into(t + dt * half, &mut h_mid);
        h.eval_into(t + dt, &mut h_hi);
        let k1 = rhs(&h_lo, &psi);
        let k2 = rhs(&h_mid, &(psi.clone() + k1.mapv(|z| z * crl(dt * half))));
        let k3 = rhs(&h_mid, &(psi.clone() + k2.mapv(|z| z * crl(dt * half))));
        let k4 = rhs(&h_hi, &(psi.clone() + k3.mapv(|z| z * crl(dt))));
        let two = crl(re::<S>(2.0));
        psi = psi + (k1 + k2.mapv(|z| z * two) + k3.mapv(|z| z * two) + k4)
            .mapv(|z| z * crl(dt * sixth));
        if opts.renormalize {
            let n = state_norm(&psi);
            if n > S::zero() {
                psi.mapv_inplace(|z| z / crl(n));
            }
        }
        std::mem::swap(&mut h_lo, &mut h_hi);
        if (k + 1) % stride == 0 || k + 1 == n_steps {
            record.push(t + dt, &psi);
        }
    }
    Ok(record.finish(warnings))
}

fn rhs<S: Real>(h: &Array2<Cx<S>>, psi: &Array1<Cx<S>>) -> Array1<Cx<S>> {
    // -i H psi
    let hp = h.dot(psi);
    hp.mapv(|z| Cx::new(z.im, -z.re))
}

pub(crate) fn state_norm<S: Real>(psi: &Array1<Cx<S>>) -> S {
    psi.iter()
        .map(|z| z.norm_sqr())
        .fold(S::zero(), |a, x| a + x)
        .sqrt()
}

struct RecordBuilder<'a, S: Real, H: TimeDependentHamiltonian<S>> {
    h: &'a H,
    opts: &'a EvolveOptions<S>,
    dt: S,
    times: Vec<S>,
    states: Vec<Array1<Cx<S>>>,
    populations: Vec<Array1<S>>,
    norms: Vec<S>,
    phases: Vec<S>,
    last_raw_phase: S,
    unwrapped: S,
}

impl<'a, S: Real, H: TimeDependentHamiltonian<S>> RecordBuilder<'a, S, H> {
    fn new(h: &'a H, opts: &'a EvolveOptions<S>, dt: S) -> Self {
        Self {
            h,
            opts,
            dt,
            times: Vec::new(),
            states: Vec::new(),
            populations: Vec::new(),
            norms: Vec::new(),
            phases: Vec::new(),
            last_raw_phase: S::zero(),
            unwrapped: S::zero(),
        }
    }

    fn push(&mut self, t: S, psi: &Array1<Cx<S>>) {
        self.times.push(t);
        self.populations.push(psi.mapv(|z| z.norm_sqr()));
        self.norms.push(state_norm(psi));
        if let Some(ref_idx) = self.opts.phase_ref {
            let amp = psi[ref_idx];
            let raw = amp.im.atan2(amp.re);
            if self.times.len() == 1 {
                self.last_raw_phase = raw;
                self.unwrapped = raw;
            } else {
                let two_pi = re::<S>(std::f64::consts::TAU);
                let mut delta = raw - self.last_raw_phase;
                while delta > two_pi / re::<S>(2.0) {
                    delta -= two_pi;
                }
                while delta < -two_pi / re::<S>(2.0) {
                    delta += two_pi;
                }
                self.unwrapped += delta;
                self.last_raw_phase = raw;
            }
            self.phases.push(self.unwrapped);
        }
        if self.opts.store_states {
            self.states.push(psi.clone());
        }
    }

    fn finish(self, warnings: Vec<String>) -> EvolutionRecord<S> {
        EvolutionRecord {
            basis: self.h.basis().clone(),
            times: self.times,
            states: if self.opts.store_states { Some(self.states) } else { None },
            dmats: None,
            populations: self.populations,
            norms: self.norms,
            relative_phase: if self.opts.phase_ref.is_some() { Some(self.phases) } else { None },
            dark_leakage: None,
            min_gap: None,
            min_eigenvalue: None,
            warnings,
            dt: self.dt,
        }
    }
}

/// Result of the relative-phase read-out at the end of a cyclic evolution.
#[derive(Debug, Clone, Copy)]
pub struct PhaseExtraction<S: Real> {
    /// Unwrapped phase of the reference amplitude at the final time, rad.
    pub phase: S,
    pub final_ref_population: S,
    /// False when the final reference population dropped below 0.99 (the
    /// evolution did not return to the reference state within tolerance).
    pub cyclic: bool,
}

/// Unwrapped `arg <ref|psi(t_end)>`. Requires a record produced with
/// `phase_ref = Some(ref_index)` or with stored states.
pub fn extract_geometric_phase<S: Real>(
    record: &EvolutionRecord<S>,
    ref_index: usize,
) -> PhaseExtraction<S> {
    let phase = match &record.relative_phase {
        Some(series) => *series.last().expect("non-empty record"),
        None => {
            let states = record
                .states
                .as_ref()
                .expect("phase extraction needs phase_ref tracking or stored states");
            unwrap_series(states, ref_index)
        }
    };
    let pop = record.final_population(ref_index);
    PhaseExtraction {
        phase,
        final_ref_population: pop,
        cyclic: pop > re::<S>(0.99),
    }
}

fn unwrap_series<S: Real>(states: &[Array1<Cx<S>>], ref_index: usize) -> S {
    let mut last = S::zero();
    let mut acc = S::zero();
    let pi = re::<S>(std::f64::consts::PI);
    let two_pi = re::<S>(std::f64::consts::TAU);
    for (k, psi) in states.iter().enumerate() {
        let amp = psi[ref_index];
        let raw = amp.im.atan2(amp.re);
        if k == 0 {
            last = raw;
            acc = raw;
            continue;
        }
        let mut delta = raw - last;
        while delta > pi {
            delta -= two_pi;
        }
        while delta < -pi {
            delta += two_pi;
        }
        acc += delta;
        last = raw;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::MatrixFn;
    use crate::qcore::build_collective_basis;
    use std::sync::Arc;

    fn two_level(omega: f64) -> MatrixFn<f64, impl Fn(f64, &mut Array2<Cx<f64>>) + Sync> {
        let basis = Arc::new(build_collective_basis(&["s"], 10, 1, None).unwrap());
        MatrixFn::new(basis, move |_t, out: &mut Array2<Cx<f64>>| {
                out.fill(Cx::new(0.0, 0.0));
                out[(0, 1)] = Cx::new(omega, 0.0);
                out[(1, 0)] = Cx::new(omega, 0.0);
            },
        )
    }

    #[test]
    fn zero_hamiltonian_is_identity_evolution() {
        let basis = Arc::new(build_collective_basis(&["s"], 10, 1, None).unwrap());
        let h = MatrixFn::new(basis.clone(), |_t, out: &mut Array2<Cx<f64>>| out.fill(Cx::new(0.0, 0.0)),
        );
        let psi0 = StateVector::basis_state(basis, 1);
        let rec = evolve_schrodinger(&h, &psi0, 0.0, 2.0, &EvolveOptions::default()).unwrap();
        let end = rec.final_state().unwrap();
        assert_eq!(end[1], Cx::new(1.0, 0.0));
        assert_eq!(end[0], Cx::new(0.0, 0.0));
    }

    #[test]
    fn rabi_oscillation_closed_form() {
        // H = Omega sigma_x: excited population sin^2(Omega t)
        let omega = 3.0;
        let h = two_level(omega);
        let psi0 = StateVector::basis_state(h.basis().clone(), 0);
        let opts = EvolveOptions { dt: Some(1e-4 / omega), ..Default::default() };
        let t1 = 2.0 / omega;
        let rec = evolve_schrodinger(&h, &psi0, 0.0, t1, &opts).unwrap();
        for (k, &t) in rec.times.iter().enumerate() {
            let expect = (omega * t).sin().powi(2);
            assert!(
                (rec.populations[k][1] - expect).abs() < 1e-8,
                "t = {t}: {} vs {expect}",
                rec.populations[k][1]
            );
        }
    }

    #[test]
    fn norm_drift_is_reported_and_small() {
        let h = two_level(2.0);
        let psi0 = StateVector::basis_state(h.basis().clone(), 0);
        let opts = EvolveOptions { dt: Some(1e-3), ..Default::default() };
        let rec = evolve_schrodinger(&h, &psi0, 0.0, 5.0, &opts).unwrap();
        assert!(rec.norm_drift_per_us() < 1e-8);
    }

    #[test]
    fn rk4_order_check() {
        // halving dt shrinks the final-state change by ~2^4
        let h = two_level(5.0);
        let psi0 = StateVector::basis_state(h.basis().clone(), 0);
        let run = |dt: f64| {
            let opts = EvolveOptions {
                dt: Some(dt),
                store_states: true,
                ..Default::default()
            };
            evolve_schrodinger(&h, &psi0, 0.0, 1.0, &opts)
                .unwrap()
                .final_state()
                .unwrap()
                .clone()
        };
        let a = run(0.02);
        let b = run(0.01);
        let c = run(0.005);
        let d1: f64 = (&a - &b).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let d2: f64 = (&b - &c).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let ratio = d1 / d2;
        assert!(
            (8.0..32.0).contains(&ratio),
            "expected ~16x per halving, got {ratio}"
        );
    }

    #[test]
    fn phase_tracking_on_driven_phase_rotation() {
        // H = diag(0, -w): amplitude on |1> rotates as e^{i w t}
        let basis = Arc::new(build_collective_basis(&["s"], 10, 1, None).unwrap());
        let w = 4.0;
        let h = MatrixFn::new(basis.clone(), move |_t, out: &mut Array2<Cx<f64>>| {
                out.fill(Cx::new(0.0, 0.0));
                out[(1, 1)] = Cx::new(-w, 0.0);
            },
        );
        let psi0 = StateVector::basis_state(basis, 1);
        let opts = EvolveOptions {
            dt: Some(1e-4),
            phase_ref: Some(1),
            ..Default::default()
        };
        let rec = evolve_schrodinger(&h, &psi0, 0.0, 3.0, &opts).unwrap();
        let ext = extract_geometric_phase(&rec, 1);
        assert!(ext.cyclic);
        // total unwrapped phase w * t = 12 rad, beyond one wrap
        assert!((ext.phase - w * 3.0).abs() < 1e-6, "phase {}", ext.phase);
    }
}
