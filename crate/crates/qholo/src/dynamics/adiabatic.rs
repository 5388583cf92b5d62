//! Instantaneous-spectrum diagnostics: minimum gap along a run and
//! population leakage out of the zero-energy (dark) subspace.

use ndarray::Array2;

use crate::qcore::jacobi_hermitian;
use crate::scalar::{re, Cx, Real};

use super::record::EvolutionRecord;
use super::TimeDependentHamiltonian;

#[derive(Debug, Clone)]
pub struct AdiabaticityReport<S: Real> {
    /// Minimum |nonzero eigenvalue| of H(t) over the sampled times.
    pub min_gap: S,
    pub max_leakage: S,
    /// Leakage (population outside the zero subspace, normalized by the
    /// squared state norm) at each sample.
    pub leakage_series: Vec<S>,
}

/// Diagnose a pure-state record against the instantaneous eigenstructure
/// of the Hamiltonian that produced it. The record must store states.
pub fn adiabaticity_report<S: Real>(
    h: &impl TimeDependentHamiltonian<S>,
    record: &EvolutionRecord<S>,
) -> AdiabaticityReport<S> {
    let states = record
        .states
        .as_ref()
        .expect("adiabaticity diagnostics need stored states");
    let d = h.basis().dimension();
    let mut m = Array2::zeros((d, d));
    let mut min_gap = S::infinity();
    let mut max_leakage = S::zero();
    let mut series = Vec::with_capacity(states.len());
    for (k, psi) in states.iter().enumerate() {
        h.eval_into(record.times[k], &mut m);
        let (vals, vecs) = jacobi_hermitian(&m);
        let scale = vals
            .iter()
            .fold(S::zero(), |a, v| if v.abs() > a { v.abs() } else { a });
        let tol = re::<S>(1e-6) * scale.max(re::<S>(1e-30));
        let mut dark_weight = S::zero();
        for (i, lam) in vals.iter().enumerate() {
            if lam.abs() < tol {
                let ov = (0..d)
                    .map(|r| vecs[(r, i)].conj() * psi[r])
                    .fold(Cx::new(S::zero(), S::zero()), |acc, x| acc + x);
                dark_weight += ov.norm_sqr();
            } else if lam.abs() < min_gap {
                min_gap = lam.abs();
            }
        }
        let norm2 = psi.iter().map(|z| z.norm_sqr()).fold(S::zero(), |a, x| a + x);
        let leak = if norm2 > S::zero() {
            (S::one() - dark_weight / norm2).max(S::zero())
        } else {
            S::zero()
        };
        series.push(leak);
        if leak > max_leakage {
            max_leakage = leak;
        }
    }
    AdiabaticityReport { min_gap, max_leakage, leakage_series: series }
}

/// Attach the leakage series and minimum gap to the record in place.
pub fn annotate_record<S: Real>(
    h: &impl TimeDependentHamiltonian<S>,
    record: &mut EvolutionRecord<S>,
) -> AdiabaticityReport<S> {
    let report = adiabaticity_report(h, record);
    record.dark_leakage = Some(report.leakage_series.clone());
    record.min_gap = Some(report.min_gap);
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{evolve_schrodinger, EvolveOptions, MatrixFn};
    use crate::qcore::{build_collective_basis, StateVector};
    use std::sync::Arc;

    #[test]
    fn eigenstate_of_static_hamiltonian_never_leaks() {
        // 3 levels: |2> is a zero-energy eigenstate of a coupling between
        // |0| and |1> only
        let basis = Arc::new(build_collective_basis(&["a", "b"], 10, 1, None).unwrap());
        let h = MatrixFn::new(basis.clone(), |_t, out: &mut Array2<Cx<f64>>| {
                out.fill(Cx::new(0.0, 0.0));
                out[(0, 1)] = Cx::new(3.0, 0.0);
                out[(1, 0)] = Cx::new(3.0, 0.0);
            },
        );
        let psi0 = StateVector::basis_state(basis, 2);
        let rec = evolve_schrodinger(&h, &psi0, 0.0, 1.0, &EvolveOptions::default()).unwrap();
        let rep = adiabaticity_report(&h, &rec);
        assert!(rep.max_leakage < 1e-12);
        assert!((rep.min_gap - 3.0).abs() < 1e-9);
    }
}
