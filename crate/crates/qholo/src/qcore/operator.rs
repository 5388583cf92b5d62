use std::sync::Arc;

use ndarray::Array2;


use crate::scalar::{crl, Cx, Real};

use super::basis::{Label, LabeledBasis};
use super::{QcoreError, QcoreResult};

/// Hermitian matrix over a labeled basis.
///
/// Entries are angular frequencies (rad/us) for Hamiltonians and
/// dimensionless for observables. Hermiticity is validated on construction:
/// `|A - A^dagger|` elementwise within `1e-12 * max(1, max|A|)`.
#[derive(Debug, Clone)]
pub struct HermitianOperator<S: Real> {
    basis: Arc<LabeledBasis>,
    matrix: Array2<Cx<S>>,
}

impl<S: Real> HermitianOperator<S> {
    pub fn new(basis: Arc<LabeledBasis>, matrix: Array2<Cx<S>>) -> QcoreResult<Self> {
        let d = basis.dimension();
        if matrix.nrows() != d || matrix.ncols() != d {
            return Err(QcoreError::BadShape {
                expected: d,
                rows: matrix.nrows(),
                cols: matrix.ncols(),
            });
        }
        let asym = max_asymmetry(&matrix);
        let scale = matrix
            .iter()
            .map(|z| z.norm())
            .fold(S::one(), |acc, x| if x > acc { x } else { acc });
        if asym > crate::scalar::re::<S>(1e-12) * scale {
            return Err(QcoreError::NonHermitian {
                max_asymmetry: asym.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(Self { basis, matrix })
    }

    /// Construct without the Hermiticity check. For builders whose matrices
    /// are Hermitian by construction (hot paths inside the integrators).
    pub fn new_unchecked(basis: Arc<LabeledBasis>, matrix: Array2<Cx<S>>) -> Self {
        debug_assert_eq!(matrix.nrows(), basis.dimension());
        Self { basis, matrix }
    }

    pub fn basis(&self) -> &Arc<LabeledBasis> {
        &self.basis
    }

    pub fn matrix(&self) -> &Array2<Cx<S>> {
        &self.matrix
    }

    pub fn into_matrix(self) -> Array2<Cx<S>> {
        self.matrix
    }

    pub fn dimension(&self) -> usize {
        self.basis.dimension()
    }

    /// Frobenius norm.
    pub fn norm_fro(&self) -> S {
        self.matrix
            .iter()
            .map(|z| z.norm_sqr())
            .fold(S::zero(), |acc, x| acc + x)
            .sqrt()
    }
}

pub(crate) fn max_asymmetry<S: Real>(m: &Array2<Cx<S>>) -> S {
    let n = m.nrows();
    let mut worst = S::zero();
    for i in 0..n {
        for j in i..n {
            let d = (m[(i, j)] - m[(j, i)].conj()).norm();
            if d > worst {
                worst = d;
            }
        }
    }
    worst
}

/// Bosonic annihilation operator for one mode on the truncated basis:
/// `<.., n-1, ..| a |.., n, ..> = sqrt(n)`. Creation out of the represented
/// subspace is truncated away. This is the `n << N` approximation used by
/// every gate Hamiltonian.
pub fn mode_annihilator<S: Real>(
    basis: &LabeledBasis,
    mode: &str,
) -> QcoreResult<Array2<Cx<S>>> {
    mode_lowering(basis, mode, |n, _ntot, _npool| crate::scalar::re::<S>(f64::from(n).sqrt()))
}

/// Exact collective lowering operator including the finite-atom-number
/// factor: lowering from a state with `n` excitations in the mode and `ntot`
/// total excitations carries `sqrt(n) * sqrt((N - ntot + 1)/N)`. Its
/// commutator with its adjoint reproduces `1 - 2n/N` on states below the
/// truncation edge.
pub fn collective_annihilator<S: Real>(
    basis: &LabeledBasis,
    mode: &str,
) -> QcoreResult<Array2<Cx<S>>> {
    let n_atoms = basis.atom_count() as f64;
    mode_lowering(basis, mode, move |n, ntot, _| {
        crate::scalar::re::<S>(
            f64::from(n).sqrt() * ((n_atoms - f64::from(ntot) + 1.0) / n_atoms).sqrt(),
        )
    })
}

fn mode_lowering<S: Real>(
    basis: &LabeledBasis,
    mode: &str,
    amp: impl Fn(u32, u32, u64) -> S,
) -> QcoreResult<Array2<Cx<S>>> {
    let k = basis.mode_position(mode)?;
    let d = basis.dimension();
    let mut m = Array2::zeros((d, d));
    for (j, label) in basis.labels().iter().enumerate() {
        let n = label.occ[k];
        if n == 0 {
            continue;
        }
        let mut lowered = Label {
            occ: label.occ.clone(),
            photon: label.photon,
        };
        lowered.occ[k] = n - 1;
        if let Some(i) = basis.lookup(&lowered) {
            m[(i, j)] = crl(amp(n, label.total_excitations(), basis.atom_count()));
        }
    }
    Ok(m)
}

/// Diagonal number operator for one mode.
pub fn mode_number<S: Real>(basis: &LabeledBasis, mode: &str) -> QcoreResult<Array2<Cx<S>>> {
    let k = basis.mode_position(mode)?;
    let d = basis.dimension();
    let mut m = Array2::zeros((d, d));
    for (i, label) in basis.labels().iter().enumerate() {
        m[(i, i)] = crl(crate::scalar::re::<S>(f64::from(label.occ[k])));
    }
    Ok(m)
}

/// Photon annihilation operator on a basis with a cavity Fock slot.
pub fn photon_annihilator<S: Real>(basis: &LabeledBasis) -> Array2<Cx<S>> {
    let d = basis.dimension();
    let mut m = Array2::zeros((d, d));
    for (j, label) in basis.labels().iter().enumerate() {
        let Some(p) = label.photon else { continue };
        if p == 0 {
            continue;
        }
        let lowered = Label {
            occ: label.occ.clone(),
            photon: Some(p - 1),
        };
        if let Some(i) = basis.lookup(&lowered) {
            m[(i, j)] = crl(crate::scalar::re::<S>(f64::from(p).sqrt()));
        }
    }
    m
}
