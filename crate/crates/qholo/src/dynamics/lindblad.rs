//! RK4 integration of the master equation
//! `drho/dt = -i[H, rho] + sum_c 2 kappa_c (A rho A+ - 1/2 {A+A, rho})`.

use ndarray::{Array1, Array2};

use crate::qcore::jacobi_hermitian;
use crate::scalar::{crl, re, Cx, Real};

use super::record::{decimation_stride, EvolutionRecord, EvolveOptions};
use super::{DynResult, DynamicsError, TimeDependentHamiltonian};

/// One collapse channel. `rate` is the kappa of the `2 kappa` dissipator
/// convention: a lone photon then decays as `exp(-2 kappa t)`.
#[derive(Debug, Clone)]
pub struct CollapseChannel<S: Real> {
    pub operator: Array2<Cx<S>>,
    pub rate: S,
}

impl<S: Real> CollapseChannel<S> {
    pub fn new(operator: Array2<Cx<S>>, rate: S) -> DynResult<Self> {
        if rate < S::zero() {
            return Err(DynamicsError::BadTimeStep(rate.to_f64().unwrap_or(f64::NAN)));
        }
        Ok(Self { operator, rate })
    }
}

pub fn evolve_lindblad<S: Real>(
    h: &impl TimeDependentHamiltonian<S>,
    channels: &[CollapseChannel<S>],
    rho0: &Array2<Cx<S>>,
    t0: S,
    t1: S,
    opts: &EvolveOptions<S>,
) -> DynResult<EvolutionRecord<S>> {
    let d = h.basis().dimension();
    if rho0.nrows() != d || rho0.ncols() != d {
        return Err(DynamicsError::DimensionMismatch { expected: d, got: rho0.nrows() });
    }
    validate_density_matrix(rho0)?;
    for c in channels {
        if c.operator.nrows() != d || c.operator.ncols() != d {
            return Err(DynamicsError::DimensionMismatch {
                expected: d,
                got: c.operator.nrows(),
            });
        }
    }

    let mut warnings = Vec::new();
    let hmax = h.norm_bound(t0, t1);
    let dt = match opts.dt {
        Some(dt) if dt > S::zero() => dt,
        Some(dt) => return Err(DynamicsError::BadTimeStep(dt.to_f64().unwrap_or(f64::NAN))),
        None => re::<S>(0.05) / hmax.max(re::<S>(1e-12)),
    };
    if dt * hmax >= re::<S>(0.1) {
        warnings.push("dt * max||H|| >= 0.1".into());
    }
    let span = t1 - t0;
    let n_steps = (span / dt).to_f64().unwrap_or(1.0).ceil().max(1.0) as usize;
    let dt = span / re::<S>(n_steps as f64);
    let stride = decimation_stride(n_steps, opts.target_samples);

    // precompute A, A+, A+A scaled by 2 kappa
    let diss: Vec<Dissipator<S>> = channels
        .iter()
        .filter(|c| c.rate > S::zero())
        .map(|c| Dissipator::new(c))
        .collect();

    let mut rho = rho0.clone();
    let mut times = Vec::new();
    let mut dmats = Vec::new();
    let mut populations = Vec::new();
    let mut norms = Vec::new();
    let mut min_eig = S::infinity();
    let push = |t: S,
                    rho: &Array2<Cx<S>>,
                    times: &mut Vec<S>,
                    dmats: &mut Vec<Array2<Cx<S>>>,
                    populations: &mut Vec<Array1<S>>,
                    norms: &mut Vec<S>,
                    min_eig: &mut S| {
        times.push(t);
        let pops = Array1::from((0..d).map(|i| rho[(i, i)].re).collect::<Vec<_>>());
        norms.push(pops.iter().fold(S::zero(), |a, x| a + *x));
        populations.push(pops);
        let (vals, _) = jacobi_hermitian(rho);
        if vals[0] < *min_eig {
            *min_eig = vals[0];
        }
        if opts.store_states {
            dmats.push(rho.clone());
        }
    };
    push(t0, &rho, &mut times, &mut dmats, &mut populations, &mut norms, &mut min_eig);

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
        let k1 = rhs(&h_lo, &diss, &rho);
        let k2 = rhs(&h_mid, &diss, &(rho.clone() + k1.mapv(|z| z * crl(dt * half))));
        let k3 = rhs(&h_mid, &diss, &(rho.clone() + k2.mapv(|z| z * crl(dt * half))));
        let k4 = rhs(&h_hi, &diss, &(rho.clone() + k3.mapv(|z| z * crl(dt))));
        let two = crl(re::<S>(2.0));
        rho = rho
            + (k1 + k2.mapv(|z| z * two) + k3.mapv(|z| z * two) + k4)
                .mapv(|z| z * crl(dt * sixth));
        std::mem::swap(&mut h_lo, &mut h_hi);
        if (k + 1) % stride == 0 || k + 1 == n_steps {
            push(t + dt, &rho, &mut times, &mut dmats, &mut populations, &mut norms, &mut min_eig);
        }
    }

    Ok(EvolutionRecord {
        basis: h.basis().clone(),
        times,
        states: None,
        dmats: if opts.store_states { Some(dmats) } else { None },
        populations,
        norms,
        relative_phase: None,
        dark_leakage: None,
        min_gap: None,
        min_eigenvalue: Some(min_eig),
        warnings,
        dt,
    })
}

struct Dissipator<S: Real> {
    a: Array2<Cx<S>>,
    a_dag: Array2<Cx<S>>,
    /// `kappa * A+A` (half of the 2 kappa anticommutator weight).
    kn: Array2<Cx<S>>,
    two_kappa: S,
}

impl<S: Real> Dissipator<S> {
    fn new(c: &CollapseChannel<S>) -> Self {
        let a = c.operator.clone();
        let a_dag = adjoint(&a);
        let n = a_dag.dot(&a);
        let kn = n.mapv(|z| z * crl(c.rate));
        Self { a, a_dag, kn, two_kappa: c.rate + c.rate }
    }
}

fn rhs<S: Real>(
    h: &Array2<Cx<S>>,
    diss: &[Dissipator<S>],
    rho: &Array2<Cx<S>>,
) -> Array2<Cx<S>> {
    // -i (H rho - rho H)
    let hr = h.dot(rho);
    let rh = rho.dot(h);
    let mut out = (hr - rh).mapv(|z| Cx::new(z.im, -z.re));
    for dsp in diss {
        // 2k A rho A+ - (k A+A rho + rho k A+A)
        let jump = dsp.a.dot(rho).dot(&dsp.a_dag).mapv(|z| z * crl(dsp.two_kappa));
        let anti = dsp.kn.dot(rho) + rho.dot(&dsp.kn);
        out = out + jump - anti;
    }
    out
}

pub(crate) fn adjoint<S: Real>(m: &Array2<Cx<S>>) -> Array2<Cx<S>> {
    let mut out = Array2::zeros((m.ncols(), m.nrows()));
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            out[(j, i)] = m[(i, j)].conj();
        }
    }
    out
}

fn validate_density_matrix<S: Real>(rho: &Array2<Cx<S>>) -> DynResult<()> {
    let n = rho.nrows();
    let mut tr = S::zero();
    for i in 0..n {
        tr += rho[(i, i)].re;
    }
    if (tr - S::one()).abs() > re::<S>(1e-8) {
        return Err(DynamicsError::BadDensityMatrix(format!(
            "trace {} != 1",
            tr.to_f64().unwrap_or(f64::NAN)
        )));
    }
    for i in 0..n {
        for j in i..n {
            if (rho[(i, j)] - rho[(j, i)].conj()).norm() > re::<S>(1e-10) {
                return Err(DynamicsError::BadDensityMatrix("not Hermitian".into()));
            }
        }
    }
    let (vals, _) = jacobi_hermitian(rho);
    if vals[0] < re::<S>(-1e-8) {
        return Err(DynamicsError::BadDensityMatrix(format!(
            "negative eigenvalue {}",
            vals[0].to_f64().unwrap_or(f64::NAN)
        )));
    }
    Ok(())
}

/// `|psi><psi|` from a (not necessarily normalized) pure state.
pub fn pure_density<S: Real>(psi: &Array1<Cx<S>>) -> Array2<Cx<S>> {
    let n = psi.len();
    let mut rho = Array2::zeros((n, n));
    for i in 0..n {
        for j in 0..n {
            rho[(i, j)] = psi[i] * psi[j].conj();
        }
    }
    rho
}
