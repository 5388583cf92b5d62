//! Monte-Carlo wave-function (quantum-jump) unraveling of the master
//! equation, with per-trajectory RNG streams derived from a master seed so
//! results are identical regardless of execution order or worker count.

use ndarray::{Array1, Array2};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;

use crate::qcore::StateVector;
use crate::scalar::{crl, re, Cx, Real};

use super::lindblad::{adjoint, pure_density, CollapseChannel};
use super::record::{decimation_stride, EvolveOptions};
use super::schrodinger::state_norm;
use super::{DynResult, DynamicsError, TimeDependentHamiltonian};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JumpEvent<S: Real> {
    pub trajectory: usize,
    pub time: S,
    pub channel: usize,
}

#[derive(Debug, Clone)]
pub struct TrajectoryEnsemble<S: Real> {
    pub n_trajectories: usize,
    pub seed: u64,
    pub times: Vec<S>,
    /// Ensemble-averaged density matrix at each sample time.
    pub averaged: Vec<Array2<Cx<S>>>,
    /// Final normalized state of each trajectory.
    pub finals: Vec<Array1<Cx<S>>>,
    pub jumps: Vec<JumpEvent<S>>,
    /// `1 - mean_k |psi_k_nojump|^2`: the norm-decay estimate of the jump
    /// probability per trajectory, accumulated from the deterministic
    /// segments. Used for the ensemble's own error bar.
    pub norm_jump_probability: S,
}

impl<S: Real> TrajectoryEnsemble<S> {
    pub fn averaged_final(&self) -> &Array2<Cx<S>> {
        self.averaged.last().expect("non-empty ensemble")
    }

    /// Mean and standard error of `<Psi| rho |Psi>` over trajectories,
    /// the quantity whose square root is a fidelity. The error model adds
    /// the binomial variance of the jump/no-jump split (estimated from the
    /// norm decay, not from the observed count, so it stays meaningful when
    /// no jump fired) to the empirical spread.
    pub fn overlap_statistics(&self, target: &Array1<Cx<S>>) -> (S, S) {
        let n = self.finals.len();
        let ws: Vec<S> = self
            .finals
            .iter()
            .map(|psi| {
                let ov = psi
                    .iter()
                    .zip(target.iter())
                    .map(|(a, b)| b.conj() * a)
                    .fold(Cx::new(S::zero(), S::zero()), |acc, x| acc + x);
                ov.norm_sqr()
            })
            .collect();
        let nn = re::<S>(n as f64);
        let mean = ws.iter().fold(S::zero(), |a, x| a + *x) / nn;
        let var_sample = if n > 1 {
            ws.iter()
                .map(|w| (*w - mean) * (*w - mean))
                .fold(S::zero(), |a, x| a + x)
                / re::<S>((n - 1) as f64)
        } else {
            S::zero()
        };
        let p = self.norm_jump_probability.max(S::zero()).min(S::one());
        let var_binomial = mean * mean * p * (S::one() - p);
        let se = ((var_sample + var_binomial) / nn).sqrt();
        (mean, se)
    }

    /// Export the jump log as JSON lines `{"traj":..,"t":..,"channel":..}`.
    pub fn write_jump_log(&self, out: &mut impl std::io::Write) -> std::io::Result<()> {
        for j in &self.jumps {
            writeln!(
                out,
                "{{\"traj\":{},\"t\":{:.9e},\"channel\":{}}}",
                j.trajectory,
                j.time.to_f64().unwrap_or(f64::NAN),
                j.channel
            )?;
        }
        Ok(())
    }
}

struct TrajectoryOutput<S: Real> {
    samples: Vec<Array1<Cx<S>>>,
    jumps: Vec<JumpEvent<S>>,
    final_state: Array1<Cx<S>>,
    survival: S,
}

pub fn evolve_trajectories<S: Real>(
    h: &impl TimeDependentHamiltonian<S>,
    channels: &[CollapseChannel<S>],
    psi0: &StateVector<S>,
    t0: S,
    t1: S,
    opts: &EvolveOptions<S>,
    n_trajectories: usize,
    seed: u64,
) -> DynResult<TrajectoryEnsemble<S>> {
    if n_trajectories == 0 {
        return Err(DynamicsError::NoTrajectories);
    }
    let d = h.basis().dimension();
    if psi0.basis().dimension() != d {
        return Err(DynamicsError::DimensionMismatch {
            expected: d,
            got: psi0.basis().dimension(),
        });
    }
    if state_norm(psi0.amplitudes()) <= S::zero() {
        return Err(DynamicsError::ZeroNorm);
    }

    let hmax = h.norm_bound(t0, t1);
    let dt = match opts.dt {
        Some(dt) if dt > S::zero() => dt,
        Some(dt) => return Err(DynamicsError::BadTimeStep(dt.to_f64().unwrap_or(f64::NAN))),
        None => re::<S>(0.05) / hmax.max(re::<S>(1e-12)),
    };
    let span = t1 - t0;
    let n_steps = (span / dt).to_f64().unwrap_or(1.0).ceil().max(1.0) as usize;
    let dt = span / re::<S>(n_steps as f64);
    let stride = decimation_stride(n_steps, opts.target_samples);

    let active: Vec<JumpChannel<S>> = channels
        .iter()
        .filter(|c| c.rate > S::zero())
        .map(JumpChannel::new)
        .collect();

    let results: Vec<DynResult<TrajectoryOutput<S>>> = (0..n_trajectories)
        .into_par_iter()
        .map(|idx| {
            run_one(
                h,
                &active,
                psi0.amplitudes(),
                t0,
                dt,
                n_steps,
                stride,
                idx,
                derive_stream_seed(seed, idx as u64),
            )
        })
        .collect();

    let mut outputs = Vec::with_capacity(n_trajectories);
    for r in results {
        outputs.push(r?);
    }

    let n_samples = outputs[0].samples.len();
    let times: Vec<S> = (0..n_steps + 1)
        .filter(|k| *k == 0 || k % stride == 0 || *k == n_steps)
        .map(|k| t0 + dt * re::<S>(k as f64))
        .collect();
    debug_assert_eq!(times.len(), n_samples);

    let weight = crl(re::<S>(1.0 / n_trajectories as f64));
    let mut averaged: Vec<Array2<Cx<S>>> = vec![Array2::zeros((d, d)); n_samples];
    for out in &outputs {
        for (k, psi) in out.samples.iter().enumerate() {
            let rho = pure_density(psi);
            averaged[k] = &averaged[k] + &rho.mapv(|z| z * weight);
        }
    }

    let mut jumps = Vec::new();
    let mut survival_sum = S::zero();
    let mut finals = Vec::with_capacity(n_trajectories);
    for out in outputs {
        jumps.extend(out.jumps);
        survival_sum += out.survival;
        finals.push(out.final_state);
    }
    let norm_jump_probability =
        S::one() - survival_sum / re::<S>(n_trajectories as f64);

    Ok(TrajectoryEnsemble {
        n_trajectories,
        seed,
        times,
        averaged,
        finals,
        jumps,
        norm_jump_probability,
    })
}

struct JumpChannel<S: Real> {
    a: Array2<Cx<S>>,
    /// `kappa A+A` for the non-Hermitian drift (the 2 kappa convention puts
    /// `-i kappa A+A` into H_eff).
    kn: Array2<Cx<S>>,
    two_kappa: S,
}

impl<S: Real> JumpChannel<S> {
    fn new(c: &CollapseChannel<S>) -> Self {
        let a = c.operator.clone();
        let n = adjoint(&a).dot(&a);
        let kn = n.mapv(|z| z * crl(c.rate));
        Self { a, kn, two_kappa: c.rate + c.rate }
    }
}

/// Splitmix-style derivation of one stream seed per trajectory index.
fn derive_stream_seed(master: u64, index: u64) -> u64 {
    let mut z = master ^ index.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

#[allow(clippy::too_many_arguments)]
fn run_one<S: Real>(
    h: &impl TimeDependentHamiltonian<S>,
    channels: &[JumpChannel<S>],
    psi0: &Array1<Cx<S>>,
    t0: S,
    dt: S,
    n_steps: usize,
    stride: usize,
    index: usize,
    stream_seed: u64,
) -> DynResult<TrajectoryOutput<S>> {
    let d = psi0.len();
    let mut rng = ChaCha12Rng::seed_from_u64(stream_seed);
    let mut psi = psi0.clone();
    let norm0 = state_norm(&psi);
    psi.mapv_inplace(|z| z / crl(norm0));

    let mut samples = Vec::new();
    samples.push(psi.clone());
    let mut jumps = Vec::new();
    // running product of (1 - dp) over no-jump steps: the trajectory's own
    // estimate of its survival probability
    let mut survival = S::one();

    let mut h_lo = Array2::zeros((d, d));
    let mut h_mid = Array2::zeros((d, d));
    let mut h_hi = Array2::zeros((d, d));
    h.eval_into(t0, &mut h_lo);
    let half = re::<S>(0.5);
    let sixth = re::<S>(1.0 / 6.0);

    for k in 0..n_steps {
        let t = t0 + dt * re::<S>(k as f64);
        // jump probabilities at the start of the step
        let mut dps: Vec<S> = Vec::with_capacity(channels.len());
        let mut dp_total = S::zero();
        for ch in channels {
            let ap = ch.a.dot(&psi);
            let dp = ch.two_kappa * dt * ap.iter().map(|z| z.norm_sqr()).fold(S::zero(), |a, x| a + x);
            dps.push(dp);
            dp_total += dp;
        }
        if dp_total > re::<S>(0.1) {
            return Err(DynamicsError::JumpProbabilityTooLarge {
                p: dp_total.to_f64().unwrap_or(f64::NAN),
            });
        }
        let r: f64 = rng.gen();
        let r = re::<S>(r);
        if r < dp_total {
            // select the channel and collapse
            let mut acc = S::zero();
            let mut chosen = channels.len() - 1;
            for (c, dp) in dps.iter().enumerate() {
                acc += *dp;
                if r < acc {
                    chosen = c;
                    break;
                }
            }
            let mut collapsed = channels[chosen].a.dot(&psi);
            let n = state_norm(&collapsed);
            if n <= S::zero() {
                return Err(DynamicsError::ZeroNorm);
            }
            collapsed.mapv_inplace(|z| z / crl(n));
            psi = collapsed;
            jumps.push(JumpEvent { trajectory: index, time: t, channel: chosen });
        } else {
            survival *= S::one() - dp_total;
            // deterministic segment under H_eff = H - i sum kappa A+A
            h.eval_into(t + dt * half, &mut h_mid);
            h.eval_into(t + dt, &mut h_hi);
            let k1 = rhs_eff(&h_lo, channels, &psi);
            let k2 = rhs_eff(&h_mid, channels, &(psi.clone() + k1.mapv(|z| z * crl(dt * half))));
            let k3 = rhs_eff(&h_mid, channels, &(psi.clone() + k2.mapv(|z| z * crl(dt * half))));
            let k4 = rhs_eff(&h_hi, channels, &(psi.clone() + k3.mapv(|z| z * crl(dt))));
            let two = crl(re::<S>(2.0));
            psi = psi
                + (k1 + k2.mapv(|z| z * two) + k3.mapv(|z| z * two) + k4)
                    .mapv(|z| z * crl(dt * sixth));
            let n = state_norm(&psi);
            if n <= S::zero() {
                return Err(DynamicsError::ZeroNorm);
            }
            psi.mapv_inplace(|z| z / crl(n));
        }
        // the step consumed exactly one random draw either way; H(t+dt) is
        // only current when the deterministic branch ran
        if r < dp_total {
            h.eval_into(t + dt, &mut h_hi);
        }
        std::mem::swap(&mut h_lo, &mut h_hi);
        if (k + 1) % stride == 0 || k + 1 == n_steps {
            samples.push(psi.clone());
        }
    }

    Ok(TrajectoryOutput { samples, jumps, final_state: psi, survival })
}

fn rhs_eff<S: Real>(
    h: &Array2<Cx<S>>,
    channels: &[JumpChannel<S>],
    psi: &Array1<Cx<S>>,
) -> Array1<Cx<S>> {
    // -i H psi - sum kappa A+A psi
    let hp = h.dot(psi);
    let mut out = hp.mapv(|z| Cx::new(z.im, -z.re));
    for ch in channels {
        out = out - ch.kn.dot(psi);
    }
    out
}
