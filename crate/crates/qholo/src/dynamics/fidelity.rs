//! Gate fidelity functional: `F(psi) = sqrt(<psi| U+ L(|psi><psi|) U |psi>)`
//! minimized over a structured probe set (the computational basis plus
//! Haar-random states), with the reported minimum standing in for the true
//! minimum over all inputs.

use ndarray::{Array1, Array2};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;

use crate::scalar::{re, Cx, Real};

use super::lindblad::pure_density;
use super::{DynResult, DynamicsError};

#[derive(Debug, Clone)]
pub struct ProbeState<S: Real> {
    pub label: String,
    /// Amplitudes over the computational subspace.
    pub amplitudes: Array1<Cx<S>>,
}

/// The default probe set: the four two-qubit computational basis states
/// followed by `n_haar` Haar-random states drawn from a seeded stream.
pub fn standard_probe_states<S: Real>(n_haar: usize, seed: u64) -> Vec<ProbeState<S>> {
    let mut probes = Vec::with_capacity(4 + n_haar);
    for (k, name) in ["00", "01", "10", "11"].iter().enumerate() {
        let mut amp = Array1::zeros(4);
        amp[k] = Cx::new(S::one(), S::zero());
        probes.push(ProbeState { label: format!("|{name}>"), amplitudes: amp });
    }
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    for h in 0..n_haar {
        let mut amp: Array1<Cx<S>> = Array1::zeros(4);
        let mut norm2 = S::zero();
        for k in 0..4 {
            let (a, b) = gaussian_pair(&mut rng);
            let z = Cx::new(re::<S>(a), re::<S>(b));
            norm2 += z.norm_sqr();
            amp[k] = z;
        }
        let inv = S::one() / norm2.sqrt();
        amp.mapv_inplace(|z| z * Cx::new(inv, S::zero()));
        probes.push(ProbeState { label: format!("haar-{h}"), amplitudes: amp });
    }
    probes
}

fn gaussian_pair(rng: &mut ChaCha12Rng) -> (f64, f64) {
    // Box-Muller on the open interval
    let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
    let u2: f64 = rng.gen();
    let r = (-2.0 * u1.ln()).sqrt();
    let t = std::f64::consts::TAU * u2;
    (r * t.cos(), r * t.sin())
}

#[derive(Debug, Clone)]
pub struct FidelityReport<S: Real> {
    /// Per-probe fidelities in probe order.
    pub entries: Vec<(String, S)>,
    pub minimum: S,
    pub worst_state: String,
}

/// Evaluate the fidelity functional for every probe.
///
/// `ideal` is the target unitary on the computational subspace, `embedding`
/// maps computational indices into the full basis of the channel, and
/// `channel` carries an initial full-space density matrix to the final one
/// (e.g. a closure around the master-equation integrator). Probes evolve
/// independently and in parallel.
pub fn gate_fidelity<S: Real>(
    ideal: &Array2<Cx<S>>,
    embedding: &[usize],
    full_dim: usize,
    channel: &(impl Fn(&Array2<Cx<S>>) -> DynResult<Array2<Cx<S>>> + Sync),
    probes: &[ProbeState<S>],
) -> DynResult<FidelityReport<S>> {
    if probes.is_empty() {
        return Err(DynamicsError::NoProbes);
    }
    let k = embedding.len();
    if ideal.nrows() != k || ideal.ncols() != k {
        return Err(DynamicsError::DimensionMismatch { expected: k, got: ideal.nrows() });
    }
    let results: Vec<DynResult<(String, S)>> = probes
        .par_iter()
        .map(|probe| {
            if probe.amplitudes.len() != k {
                return Err(DynamicsError::DimensionMismatch {
                    expected: k,
                    got: probe.amplitudes.len(),
                });
            }
            let mut full: Array1<Cx<S>> = Array1::zeros(full_dim);
            for (c, &idx) in embedding.iter().enumerate() {
                full[idx] = probe.amplitudes[c];
            }
            let rho_final = channel(&pure_density(&full))?;
            // target state U |psi| embedded
            let target_small = ideal.dot(&probe.amplitudes);
            let mut target: Array1<Cx<S>> = Array1::zeros(full_dim);
            for (c, &idx) in embedding.iter().enumerate() {
                target[idx] = target_small[c];
            }
            let mut overlap = Cx::new(S::zero(), S::zero());
            for i in 0..full_dim {
                for j in 0..full_dim {
                    overlap += target[i].conj() * rho_final[(i, j)] * target[j];
                }
            }
            let f = overlap.re.max(S::zero()).sqrt();
            Ok((probe.label.clone(), f))
        })
        .collect();
    let mut entries = Vec::with_capacity(probes.len());
    for r in results {
        entries.push(r?);
    }
    let (worst_state, minimum) = entries
        .iter()
        .min_by(|a, b| a.1.partial_cmp(&b.1).expect("finite fidelities"))
        .map(|(l, f)| (l.clone(), *f))
        .expect("non-empty");
    Ok(FidelityReport { entries, minimum, worst_state })
}
