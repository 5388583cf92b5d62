//! Dipole-dipole matrix elements between two-atom parabolic states with the
//! interatomic axis along z. The operator is the scalar product
//! `r1 . r2 = z1 z2 - (r C1_{+1})_1 (r C1_{-1})_2 - (r C1_{-1})_1 (r C1_{+1})_2`
//! in Racah-normalized spherical components; values are in units of the
//! Bohr radius squared. The physical pair interaction multiplies the m = 0
//! part by `-2 / R^3` (z-z geometry) in atomic units.

use super::parabolic::{parabolic_coefficient, ParabolicState};
use super::radial::radial_dipole_closed_form;
use super::wigner::{wigner3j, Half};

/// `<l', m + mu | C^1_mu | l, m>` (Racah-normalized spherical harmonic).
pub fn angular_c1(lp: u32, mp: i32, mu: i32, l: u32, m: i32) -> f64 {
    if mp != m + mu {
        return 0.0;
    }
    let tj_m = wigner3j(
        Half::int(lp as i64),
        Half::int(1),
        Half::int(l as i64),
        Half::int(-i64::from(mp)),
        Half::int(i64::from(mu)),
        Half::int(i64::from(m)),
    )
    .expect("integer angular momenta");
    let tj_0 = wigner3j(
        Half::int(lp as i64),
        Half::int(1),
        Half::int(l as i64),
        Half::int(0),
        Half::int(0),
        Half::int(0),
    )
    .expect("integer angular momenta");
    let reduced = sign(lp as i64) * (f64::from(2 * lp + 1) * f64::from(2 * l + 1)).sqrt() * tj_0;
    sign(i64::from(lp as i64) - i64::from(mp)) * tj_m * reduced
}

fn sign(exp: i64) -> f64 {
    if exp.rem_euclid(2) == 1 { -1.0 } else { 1.0 }
}

/// Single-atom element `<n, m', q' | r C^1_mu | n, m, q>` within one
/// manifold. Exactly zero unless `m' = m + mu` and `|q' - q| = 1` for
/// `mu = +-1`, or `q' = q` for `mu = 0` (same-n selection rules of the
/// parabolic basis).
pub fn dipole_component(n: u32, to: ParabolicState, mu: i32, from: ParabolicState) -> f64 {
    debug_assert_eq!(to.n, n);
    debug_assert_eq!(from.n, n);
    if to.m != from.m + mu {
        return 0.0;
    }
    let allowed = match mu {
        0 => to.q == from.q,
        _ => (to.q - from.q).abs() == 1,
    };
    if !allowed {
        return 0.0;
    }
    let l_min_from = from.m.unsigned_abs();
    let l_min_to = to.m.unsigned_abs();
    let mut acc = 0.0;
    for l in l_min_from..n {
        let c_from = parabolic_coefficient(n, l, from.m, from.q);
        if c_from == 0.0 {
            continue;
        }
        for lp in l_min_to..n {
            if l.abs_diff(lp) != 1 {
                continue;
            }
            let c_to = parabolic_coefficient(n, lp, to.m, to.q);
            if c_to == 0.0 {
                continue;
            }
            acc += c_to
                * c_from
                * radial_dipole_closed_form(n, l, lp)
                * angular_c1(lp, to.m, mu, l, from.m);
        }
    }
    acc
}

/// Two-atom bracket `<to1, to2| r1 . r2 |from1, from2>` in Bohr-radii
/// squared, atom 1 in manifold `n1`, atom 2 in `n2`.
pub fn pair_element(
    n1: u32,
    from1: ParabolicState,
    to1: ParabolicState,
    n2: u32,
    from2: ParabolicState,
    to2: ParabolicState,
) -> f64 {
    let mu1 = to1.m - from1.m;
    let mu2 = to2.m - from2.m;
    match (mu1, mu2) {
        (0, 0) => dipole_component(n1, to1, 0, from1) * dipole_component(n2, to2, 0, from2),
        (1, -1) => {
            -dipole_component(n1, to1, 1, from1) * dipole_component(n2, to2, -1, from2)
        }
        (-1, 1) => {
            -dipole_component(n1, to1, -1, from1) * dipole_component(n2, to2, 1, from2)
        }
        _ => 0.0,
    }
}

/// One printed transition row: both atoms share the manifold n and start
/// from the same `(m, q)` state; offsets are relative to `n` so the same
/// row spans several manifolds.
#[derive(Debug, Clone, Copy)]
pub struct TransitionRow {
    /// (m, q-offset) of the shared initial state; q = n + offset.
    pub from: (i32, i32),
    pub to_atom1: (i32, i32),
    pub to_atom2: (i32, i32),
    pub label: &'static str,
}

/// The tabulated same-n transition set: diagonal shifts and the leading
/// `(m, m) -> (m + 1, m - 1)` channels for the outermost and near-outermost
/// states.
pub const TRANSITION_ROWS: [TransitionRow; 15] = [
    TransitionRow { from: (0, -1), to_atom1: (1, -2), to_atom2: (-1, -2), label: "|0,n-1>|0,n-1> -> |1,n-2>|-1,n-2>" },
    TransitionRow { from: (0, -1), to_atom1: (0, -1), to_atom2: (0, -1), label: "|0,n-1>|0,n-1> -> |0,n-1>|0,n-1>" },
    TransitionRow { from: (0, -1), to_atom1: (1, -4), to_atom2: (-1, -4), label: "|0,n-1>|0,n-1> -> |1,n-4>|-1,n-4>" },
    TransitionRow { from: (0, -3), to_atom1: (1, -2), to_atom2: (-1, -4), label: "|0,n-3>|0,n-3> -> |1,n-2>|-1,n-4>" },
    TransitionRow { from: (0, -3), to_atom1: (1, -4), to_atom2: (-1, -2), label: "|0,n-3>|0,n-3> -> |1,n-4>|-1,n-2>" },
    TransitionRow { from: (0, -3), to_atom1: (1, -4), to_atom2: (-1, -4), label: "|0,n-3>|0,n-3> -> |1,n-4>|-1,n-4>" },
    TransitionRow { from: (0, -3), to_atom1: (1, -2), to_atom2: (-1, -2), label: "|0,n-3>|0,n-3> -> |1,n-2>|-1,n-2>" },
    TransitionRow { from: (0, -3), to_atom1: (0, -3), to_atom2: (0, -3), label: "|0,n-3>|0,n-3> -> |0,n-3>|0,n-3>" },
    TransitionRow { from: (1, -2), to_atom1: (2, -3), to_atom2: (0, -3), label: "|1,n-2>|1,n-2> -> |2,n-3>|0,n-3>" },
    TransitionRow { from: (1, -2), to_atom1: (1, -2), to_atom2: (1, -2), label: "|1,n-2>|1,n-2> -> |1,n-2>|1,n-2>" },
    TransitionRow { from: (1, -4), to_atom1: (2, -3), to_atom2: (0, -5), label: "|1,n-4>|1,n-4> -> |2,n-3>|0,n-5>" },
    TransitionRow { from: (1, -4), to_atom1: (2, -5), to_atom2: (0, -3), label: "|1,n-4>|1,n-4> -> |2,n-5>|0,n-3>" },
    TransitionRow { from: (1, -4), to_atom1: (2, -5), to_atom2: (0, -5), label: "|1,n-4>|1,n-4> -> |2,n-5>|0,n-5>" },
    TransitionRow { from: (1, -4), to_atom1: (2, -3), to_atom2: (0, -3), label: "|1,n-4>|1,n-4> -> |2,n-3>|0,n-3>" },
    TransitionRow { from: (1, -4), to_atom1: (1, -4), to_atom2: (1, -4), label: "|1,n-4>|1,n-4> -> |1,n-4>|1,n-4>" },
];

/// Evaluate one table row at manifold n. Returns the signed bracket value
/// in Bohr-radii squared.
pub fn transition_value(row: &TransitionRow, n: u32) -> f64 {
    let make = |spec: (i32, i32)| ParabolicState {
        n,
        m: spec.0,
        q: n as i32 + spec.1,
    };
    let from = make(row.from);
    pair_element(n, from, make(row.to_atom1), n, from, make(row.to_atom2))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn state(n: u32, m: i32, q: i32) -> ParabolicState {
        ParabolicState { n, m, q }
    }

    #[test]
    fn outermost_diagonal_is_dipole_squared() {
        for n in [5u32, 10, 15, 20, 25] {
            let s = state(n, 0, n as i32 - 1);
            let got = pair_element(n, s, s, n, s, s);
            let z = 1.5 * f64::from(n) * f64::from(n - 1);
            assert!(
                ((got - z * z) / (z * z)).abs() < 1e-12,
                "n = {n}: {got} vs {}",
                z * z
            );
        }
    }

    #[test]
    fn forbidden_delta_q_is_exact_zero() {
        // outermost to (1, n-4)(-1, n-4): |delta q| = 3 on each atom
        for n in [5u32, 10, 15] {
            let from = state(n, 0, n as i32 - 1);
            let t1 = state(n, 1, n as i32 - 4);
            let t2 = state(n, -1, n as i32 - 4);
            assert_eq!(pair_element(n, from, t1, n, from, t2), 0.0);
        }
    }

    #[test]
    fn first_row_at_n5_and_n10() {
        let v5 = transition_value(&TRANSITION_ROWS[0], 5);
        assert!(
            (v5.abs() - 112.5).abs() < 112.5 * 1e-3,
            "n = 5 first row: {v5}"
        );
        let v10 = transition_value(&TRANSITION_ROWS[0], 10);
        assert!(
            (v10.abs() - 1012.5).abs() < 1012.5 * 1e-3,
            "n = 10 first row: {v10}"
        );
    }

    #[test]
    fn m_reflection_symmetry() {
        // (m, m) -> (m+1, m-1) and (m, m) -> (m-1, m+1) strengths agree
        for n in [5u32, 12] {
            let from = state(n, 0, n as i32 - 1);
            let up = pair_element(
                n,
                from,
                state(n, 1, n as i32 - 2),
                n,
                from,
                state(n, -1, n as i32 - 2),
            );
            let down = pair_element(
                n,
                from,
                state(n, -1, n as i32 - 2),
                n,
                from,
                state(n, 1, n as i32 - 2),
            );
            assert!((up - down).abs() < 1e-10 * up.abs().max(1.0));
        }
    }

    #[test]
    fn angular_factor_reference_value() {
        // <1 0|C1_0|0 0> = 1/sqrt(3)
        let got = angular_c1(1, 0, 0, 0, 0);
        assert!((got - 1.0 / 3.0f64.sqrt()).abs() < 1e-14, "got {got}");
    }
}
