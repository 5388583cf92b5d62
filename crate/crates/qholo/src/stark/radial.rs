//! Hydrogen radial wavefunctions and same-manifold dipole integrals in
//! atomic units. The quadrature route integrates the explicit
//! Laguerre-series wavefunctions; the closed form
//! `<n, l | r | n, l'> = (3/2) n sqrt(n^2 - max(l, l')^2)` is kept alongside
//! as the exact same-n value the quadrature is checked against.

use std::sync::OnceLock;

use super::parabolic::{parabolic_coefficient, q_ladder};
use super::wigner::ln_factorial;

/// Radial function R_nl(r), atomic units.
pub fn radial_wavefunction(n: u32, l: u32, r: f64) -> f64 {
    assert!(l < n, "l must be below n");
    if r < 0.0 {
        return 0.0;
    }
    let nf = f64::from(n);
    let x = 2.0 * r / nf;
    // sqrt((2/n)^3 (n-l-1)! / (2n (n+l)!))
    let ln_norm = 0.5
        * (3.0 * (2.0 / nf).ln() + ln_factorial(i64::from(n - l - 1))
            - (2.0 * nf).ln()
            - ln_factorial(i64::from(n + l)));
    let lag = laguerre(i64::from(n - l - 1), f64::from(2 * l + 1), x);
    ln_norm.exp() * (-x / 2.0).exp() * x.powi(l as i32) * lag
}

/// Associated Laguerre polynomial L_k^alpha(x) by the three-term recurrence.
fn laguerre(k: i64, alpha: f64, x: f64) -> f64 {
    if k == 0 {
        return 1.0;
    }
    let mut lm1 = 1.0;
    let mut l = 1.0 + alpha - x;
    for i in 1..k {
        let fi = i as f64;
        let next = ((2.0 * fi + 1.0 + alpha - x) * l - (fi + alpha) * lm1) / (fi + 1.0);
        lm1 = l;
        l = next;
    }
    l
}

const GL_ORDER: usize = 24;

fn gl_nodes() -> &'static (Vec<f64>, Vec<f64>) {
    static NODES: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    NODES.get_or_init(|| {
        // Newton iteration on P_n for the Gauss-Legendre nodes on [-1, 1]
        let n = GL_ORDER;
        let mut xs = vec![0.0; n];
        let mut ws = vec![0.0; n];
        for i in 0..n {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            for _ in 0..100 {
                let (p, dp) = legendre_with_derivative(n, x);
                let dx = p / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, dp) = legendre_with_derivative(n, x);
            xs[i] = x;
            ws[i] = 2.0 / ((1.0 - x * x) * dp * dp);
        }
        (xs, ws)
    })
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

fn gl_panel(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let (xs, ws) = gl_nodes();
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    xs.iter()
        .zip(ws.iter())
        .map(|(&x, &w)| w * f(mid + half * x))
        .sum::<f64>()
        * half
}

/// Adaptive Gauss-Legendre quadrature: a panel is accepted when splitting
/// it changes the value by less than the (absolute) tolerance share.
pub fn adaptive_quadrature(f: &impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn recurse(f: &impl Fn(f64) -> f64, a: f64, b: f64, whole: f64, tol: f64, depth: u32) -> f64 {
        let mid = 0.5 * (a + b);
        let left = gl_panel(f, a, mid);
        let right = gl_panel(f, mid, b);
        if depth >= 30 || (left + right - whole).abs() <= tol {
            return left + right;
        }
        recurse(f, a, mid, left, tol / 2.0, depth + 1)
            + recurse(f, mid, b, right, tol / 2.0, depth + 1)
    }
    let whole = gl_panel(f, a, b);
    recurse(f, a, b, whole, tol, 0)
}

/// Same-manifold radial dipole element by numerical quadrature over the
/// support interval `[0, 4 n (n + 15)]` with tolerance 1e-12 relative to
/// the element scale. Zero unless `|l - l'| = 1`.
pub fn hydrogen_radial_dipole(n: u32, l: u32, lp: u32) -> f64 {
    assert!(l < n && lp < n, "l quantum numbers must be below n");
    if l.abs_diff(lp) != 1 {
        return 0.0;
    }
    let r_max = 4.0 * f64::from(n) * (f64::from(n) + 15.0);
    let scale = radial_dipole_closed_form(n, l, lp).abs().max(1.0);
    let f = |r: f64| radial_wavefunction(n, l, r) * radial_wavefunction(n, lp, r) * r * r * r;
    adaptive_quadrature(&f, 0.0, r_max, 1e-12 * scale)
}

/// Exact same-n value `-(3/2) n sqrt(n^2 - l_>^2)` with `l_> = max(l, l')`.
/// The sign follows the positive-at-origin wavefunction convention (the
/// n = 2 element is the textbook `-3 sqrt(3)`); magnitudes match the usual
/// unsigned quotation of the formula.
pub fn radial_dipole_closed_form(n: u32, l: u32, lp: u32) -> f64 {
    if l.abs_diff(lp) != 1 {
        return 0.0;
    }
    let lmax = f64::from(l.max(lp));
    let nf = f64::from(n);
    -1.5 * nf * (nf * nf - lmax * lmax).sqrt()
}

/// `<z>` of the parabolic state |n, m, q> evaluated through the full
/// spherical expansion (coefficients, angular factor, radial elements).
/// Equals `(3/2) n q` analytically; this routine exercises the pipeline.
pub fn z_expectation_parabolic(n: u32, m: i32, q: i32) -> f64 {
    let l_min = m.unsigned_abs();
    let mut acc = 0.0;
    for l in l_min..n {
        for lp in l_min..n {
            if l.abs_diff(lp) != 1 {
                continue;
            }
            let c1 = parabolic_coefficient(n, lp, m, q);
            let c2 = parabolic_coefficient(n, l, m, q);
            if c1 == 0.0 || c2 == 0.0 {
                continue;
            }
            let ang = super::dipdip::angular_c1(lp, m, 0, l, m);
            acc += c1 * c2 * radial_dipole_closed_form(n, l, lp) * ang;
        }
    }
    acc
}

/// Sanity identity used by the Stark machinery: summing `q^2` weights over
/// the ladder never exceeds the manifold size.
pub fn ladder_size(n: u32, m: i32) -> usize {
    q_ladder(n, m).len()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wavefunctions_are_normalized() {
        for (n, l) in [(1u32, 0u32), (2, 1), (5, 3), (15, 0), (15, 14), (25, 2)] {
            let r_max = 4.0 * f64::from(n) * (f64::from(n) + 15.0);
            let f = |r: f64| {
                let v = radial_wavefunction(n, l, r);
                v * v * r * r
            };
            let norm = adaptive_quadrature(&f, 0.0, r_max, 1e-12);
            assert!(
                (norm - 1.0).abs() < 1e-9,
                "norm of (n, l) = ({n}, {l}): {norm}"
            );
        }
    }

    #[test]
    fn quadrature_matches_closed_form_small_n() {
        // n = 2, l = 0 <-> 1: the textbook -3 sqrt(3)
        let got = hydrogen_radial_dipole(2, 0, 1);
        assert!((got + 3.0 * 3.0f64.sqrt()).abs() < 1e-10, "got {got}");
    }

    #[test]
    fn quadrature_matches_closed_form_all_l_at_n15() {
        for l in 0..14u32 {
            let got = hydrogen_radial_dipole(15, l, l + 1);
            let want = radial_dipole_closed_form(15, l, l + 1);
            assert!(
                ((got - want) / want).abs() < 1e-9,
                "l = {l}: {got} vs {want}"
            );
        }
    }

    #[test]
    fn non_adjacent_l_is_zero() {
        assert_eq!(hydrogen_radial_dipole(5, 0, 2), 0.0);
        assert_eq!(hydrogen_radial_dipole(5, 1, 1), 0.0);
    }

    #[test]
    fn z_expectation_matches_linear_stark_slope() {
        // <z> = (3/2) n q through the full expansion
        let got = z_expectation_parabolic(5, 0, 4);
        assert!((got - 30.0).abs() < 1e-10, "got {got}");
        let got = z_expectation_parabolic(15, 0, 14);
        assert!((got - 1.5 * 15.0 * 14.0).abs() < 1e-8, "got {got}");
        let got = z_expectation_parabolic(15, 0, -14);
        assert!((got + 1.5 * 15.0 * 14.0).abs() < 1e-8, "got {got}");
    }
}
