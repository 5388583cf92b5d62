use ndarray::{Array1, Array2};


use crate::scalar::{Cx, Real};

use super::operator::{max_asymmetry, HermitianOperator};
use super::{QcoreError, QcoreResult};

/// Full spectrum of a Hermitian operator with the zero subspace tagged.
///
/// Eigenvalues are ascending; eigenvectors are the matching orthonormal
/// columns. The gauge of degenerate eigenvectors is arbitrary.
#[derive(Debug, Clone)]
pub struct EigenDecomposition<S: Real> {
    pub eigenvalues: Array1<S>,
    pub eigenvectors: Array2<Cx<S>>,
    pub zero_subspace: Vec<usize>,
}

impl<S: Real> EigenDecomposition<S> {
    /// Smallest |eigenvalue| outside the zero subspace, if any.
    pub fn min_nonzero_gap(&self) -> Option<S> {
        self.eigenvalues
            .iter()
            .enumerate()
            .filter(|(i, _)| !self.zero_subspace.contains(i))
            .map(|(_, l)| l.abs())
            .fold(None, |acc, x| match acc {
                None => Some(x),
                Some(a) => Some(if x < a { x } else { a }),
            })
    }

    /// Squared overlap of `psi` with the zero subspace.
    pub fn zero_subspace_weight(&self, psi: &Array1<Cx<S>>) -> S {
        let mut w = S::zero();
        for &k in &self.zero_subspace {
            let col = self.eigenvectors.column(k);
            let ov = col
                .iter()
                .zip(psi.iter())
                .map(|(v, a)| v.conj() * a)
                .fold(Cx::new(S::zero(), S::zero()), |acc, x| acc + x);
            w += ov.norm_sqr();
        }
        w
    }
}

/// Conventional zero tolerance, `1e-6 * ||A||_F`. Dark states of the gate
/// Hamiltonians are exact zeros of the constructed matrices, so any small
/// norm-scaled threshold identifies them.
pub fn default_tol_zero<S: Real>(op: &HermitianOperator<S>) -> S {
    crate::scalar::re::<S>(1e-6) * op.norm_fro()
}

/// Eigendecomposition of a Hermitian operator via cyclic complex Jacobi
/// rotations. Rejects non-Hermitian input with the maximum asymmetry in the
/// diagnostic. `zero_subspace` collects indices with `|lambda| < tol_zero`.
pub fn eigendecompose<S: Real>(
    op: &HermitianOperator<S>,
    tol_zero: S,
) -> QcoreResult<EigenDecomposition<S>> {
    let asym = max_asymmetry(op.matrix());
    let scale = op
        .matrix()
        .iter()
        .map(|z| z.norm())
        .fold(S::one(), |acc, x| if x > acc { x } else { acc });
    if asym > crate::scalar::re::<S>(1e-12) * scale {
        return Err(QcoreError::NonHermitian {
            max_asymmetry: asym.to_f64().unwrap_or(f64::NAN),
        });
    }
    let (eigenvalues, eigenvectors) = jacobi_hermitian(op.matrix());
    let zero_subspace = eigenvalues
        .iter()
        .enumerate()
        .filter(|(_, l)| l.abs() < tol_zero)
        .map(|(i, _)| i)
        .collect();
    Ok(EigenDecomposition { eigenvalues, eigenvectors, zero_subspace })
}

/// Cyclic Jacobi diagonalization of a Hermitian matrix. Returns ascending
/// eigenvalues and the orthonormal eigenvector columns. Dimensions in this
/// crate stay below ~100, where Jacobi is both accurate and fast enough.
pub fn jacobi_hermitian<S: Real>(m: &Array2<Cx<S>>) -> (Array1<S>, Array2<Cx<S>>) {
    let n = m.nrows();
    let mut a = m.clone();
    let mut v: Array2<Cx<S>> = Array2::eye(n);
    if n <= 1 {
        let vals = Array1::from(vec![if n == 1 { a[(0, 0)].re } else { S::zero() }; n]);
        return (vals, v);
    }

    let fro = a
        .iter()
        .map(|z| z.norm_sqr())
        .fold(S::zero(), |acc, x| acc + x)
        .sqrt();
    let stop = fro * crate::scalar::re::<S>(32.0) * S::epsilon() + S::min_positive_value();
    let skip = stop / crate::scalar::re::<S>((n * n) as f64);
    let max_sweeps = 60;

    for _ in 0..max_sweeps {
        if off_diagonal_norm(&a) <= stop {
            break;
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                let apq = a[(p, q)];
                let h = apq.norm();
                if h <= skip {
                    continue;
                }
                // Phase that makes the (p, q) entry real, then a real
                // rotation that zeroes it.
                let phase = apq / Cx::new(h, S::zero());
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let tau = (aqq - app) / (h + h);
                let t = if tau >= S::zero() {
                    S::one() / (tau + (S::one() + tau * tau).sqrt())
                } else {
                    -S::one() / (-tau + (S::one() + tau * tau).sqrt())
                };
                let c = S::one() / (S::one() + t * t).sqrt();
                let s = t * c;
                // Column transform U: identity except the (p, q) block
                // [[c*phase, s*phase], [-s, c]].
                let up = phase * Cx::new(c, S::zero());
                let uq = phase * Cx::new(s, S::zero());
                let sc = Cx::new(s, S::zero());
                let cc = Cx::new(c, S::zero());
                // A <- U^dagger A U
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * up - akq * sc;
                    a[(k, q)] = akp * uq + akq * cc;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = up.conj() * apk - sc * aqk;
                    a[(q, k)] = uq.conj() * apk + cc * aqk;
                }
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * up - vkq * sc;
                    v[(k, q)] = vkp * uq + vkq * cc;
                }
                a[(p, q)] = Cx::new(S::zero(), S::zero());
                a[(q, p)] = Cx::new(S::zero(), S::zero());
            }
        }
    }

    let diag: Vec<S> = (0..n).map(|i| a[(i, i)].re).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| diag[i].partial_cmp(&diag[j]).expect("finite eigenvalues"));
    let eigenvalues = Array1::from(order.iter().map(|&i| diag[i]).collect::<Vec<_>>());
    let mut eigenvectors = Array2::zeros((n, n));
    for (new, &old) in order.iter().enumerate() {
        for k in 0..n {
            eigenvectors[(k, new)] = v[(k, old)];
        }
    }
    (eigenvalues, eigenvectors)
}

/// Frobenius norm of the strictly off-diagonal part; the Jacobi sweeps
/// drive this to zero.
fn off_diagonal_norm<S: Real>(a: &Array2<Cx<S>>) -> S {
    let n = a.nrows();
    let mut acc = S::zero();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc += a[(i, j)].norm_sqr();
            }
        }
    }
    acc.sqrt()
}
