//! Parabolic (linear-Stark) eigenstates |n, m, q> of hydrogen and their
//! expansion over the spherical basis |n, l, m>, with
//! `c(n, l, m, q) = (-1)^((1 - n + m + q)/2 + l) sqrt(2l + 1)
//!                  * 3j((n-1)/2, (n-1)/2, l; (m+q)/2, (m-q)/2, -m)`.

use ndarray::Array2;
use thiserror::Error;

use super::wigner::{wigner3j, Half, WignerError};

#[derive(Debug, Clone, Error)]
pub enum StarkStateError {
    #[error("invalid spherical state |n={n}, l={l}, m={m}>")]
    BadSpherical { n: u32, l: u32, m: i32 },
    #[error("invalid parabolic state |n={n}, m={m}, q={q}>")]
    BadParabolic { n: u32, m: i32, q: i32 },
    #[error(transparent)]
    Wigner(#[from] WignerError),
}

/// Parabolic quantum numbers; `q = n1 - n2` runs over
/// `n - 1 - |m|, n - 3 - |m|, ..., -(n - 1 - |m|)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ParabolicState {
    pub n: u32,
    pub m: i32,
    pub q: i32,
}

impl ParabolicState {
    pub fn new(n: u32, m: i32, q: i32) -> Result<Self, StarkStateError> {
        let s = Self { n, m, q };
        if n < 1 || !s.is_valid_q() {
            return Err(StarkStateError::BadParabolic { n, m, q });
        }
        Ok(s)
    }

    pub fn is_valid_q(&self) -> bool {
        let top = self.n as i32 - 1 - self.m.abs();
        top >= 0 && self.q.abs() <= top && (top - self.q) % 2 == 0
    }

    /// Linear Stark energy `-1/(2 n^2) + (3/2) q n E` in atomic units.
    pub fn linear_energy(&self, field_au: f64) -> f64 {
        let n = f64::from(self.n);
        -1.0 / (2.0 * n * n) + 1.5 * f64::from(self.q) * n * field_au
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SphericalState {
    pub n: u32,
    pub l: u32,
    pub m: i32,
}

impl SphericalState {
    pub fn new(n: u32, l: u32, m: i32) -> Result<Self, StarkStateError> {
        if n < 1 || l >= n || m.unsigned_abs() > l {
            return Err(StarkStateError::BadSpherical { n, l, m });
        }
        Ok(Self { n, l, m })
    }
}

/// Allowed q values for (n, m), ascending.
pub fn q_ladder(n: u32, m: i32) -> Vec<i32> {
    let top = n as i32 - 1 - m.abs();
    if top < 0 {
        return Vec::new();
    }
    let mut qs: Vec<i32> = (0..).map(|k| -top + 2 * k).take_while(|q| *q <= top).collect();
    qs.sort_unstable();
    qs
}

/// Expansion coefficient `<n, l, m | n, m, q>`. Returns exactly 0 for a q
/// outside the allowed ladder or l outside `|m|..n`.
pub fn parabolic_coefficient(n: u32, l: u32, m: i32, q: i32) -> f64 {
    let Ok(state) = ParabolicState::new(n, m, q) else {
        return 0.0;
    };
    if l >= n || (l as i32) < m.abs() {
        return 0.0;
    }
    let nn = n as i64;
    let threej = wigner3j(
        Half(nn - 1),
        Half(nn - 1),
        Half::int(l as i64),
        Half(i64::from(m + q)),
        Half(i64::from(m - q)),
        Half::int(-i64::from(m)),
    )
    .expect("validated parabolic labels give consistent 3j arguments");
    let exponent = (1 - nn + i64::from(state.m) + i64::from(state.q)) / 2 + l as i64;
    let sign = if exponent.rem_euclid(2) == 1 { -1.0 } else { 1.0 };
    sign * f64::from(2 * l + 1).sqrt() * threej
}

/// Coefficient matrix `[C^{nm}]_{q l} = c(n, l, m, q)` with rows over the
/// ascending q ladder and columns l = |m| .. n-1. The matrix is orthogonal:
/// `C C^T = 1`.
pub fn c_matrix(n: u32, m: i32) -> Array2<f64> {
    let qs = q_ladder(n, m);
    let l_min = m.unsigned_abs();
    let ls: Vec<u32> = (l_min..n).collect();
    let mut c = Array2::zeros((qs.len(), ls.len()));
    for (row, &q) in qs.iter().enumerate() {
        for (col, &l) in ls.iter().enumerate() {
            c[(row, col)] = parabolic_coefficient(n, l, m, q);
        }
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn n2_worked_example() {
        assert!((parabolic_coefficient(2, 0, 0, 1) - 0.5f64.sqrt()).abs() < 1e-12);
        assert!((parabolic_coefficient(2, 1, 0, 1) + 0.5f64.sqrt()).abs() < 1e-12);
        assert!((parabolic_coefficient(2, 0, 0, -1) - 0.5f64.sqrt()).abs() < 1e-12);
        assert!((parabolic_coefficient(2, 1, 0, -1) - 0.5f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn q_outside_ladder_gives_zero() {
        assert_eq!(parabolic_coefficient(5, 2, 0, 3), 0.0); // parity breaks
        assert_eq!(parabolic_coefficient(5, 2, 0, 6), 0.0); // beyond the top
        assert_eq!(parabolic_coefficient(5, 5, 0, 4), 0.0); // l >= n
    }

    #[test]
    fn ladders() {
        assert_eq!(q_ladder(3, 0), vec![-2, 0, 2]);
        assert_eq!(q_ladder(3, 1), vec![-1, 1]);
        assert_eq!(q_ladder(3, -1), vec![-1, 1]);
        assert_eq!(q_ladder(1, 0), vec![0]);
    }

    #[test]
    fn coefficient_matrix_is_orthogonal_n15() {
        let c = c_matrix(15, 0);
        let n = c.nrows();
        for i in 0..n {
            for j in 0..n {
                let dot: f64 = (0..c.ncols()).map(|k| c[(i, k)] * c[(j, k)]).sum();
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!(
                    (dot - expect).abs() < 1e-10,
                    "row pair ({i}, {j}): {dot}"
                );
            }
        }
    }

    #[test]
    fn orthogonality_with_m_one() {
        let c = c_matrix(12, 1);
        assert_eq!(c.nrows(), 11);
        assert_eq!(c.ncols(), 11);
        for i in 0..c.nrows() {
            let norm: f64 = (0..c.ncols()).map(|k| c[(i, k)] * c[(i, k)]).sum();
            assert!((norm - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn paper_c_and_v_blocks() {
        // C^{20} rows (ascending q): [1/sqrt2, 1/sqrt2], [1/sqrt2, -1/sqrt2]
        let c20 = c_matrix(2, 0);
        let s = 0.5f64.sqrt();
        assert!((c20[(0, 0)] - s).abs() < 1e-12);
        assert!((c20[(0, 1)] - s).abs() < 1e-12);
        assert!((c20[(1, 0)] - s).abs() < 1e-12);
        assert!((c20[(1, 1)] + s).abs() < 1e-12);
        // V^{30} = transpose of C^{30}
        let c30 = c_matrix(3, 0);
        let r3 = (1.0f64 / 3.0).sqrt();
        let r6 = (1.0f64 / 6.0).sqrt();
        let r23 = (2.0f64 / 3.0).sqrt();
        let expect = [
            [r3, s, r6],
            [r3, 0.0, -r23],
            [r3, -s, r6],
        ];
        for (row, want) in expect.iter().enumerate() {
            for (col, w) in want.iter().enumerate() {
                assert!(
                    (c30[(row, col)] - w).abs() < 1e-12,
                    "({row},{col}): {} vs {w}",
                    c30[(row, col)]
                );
            }
        }
    }
}
