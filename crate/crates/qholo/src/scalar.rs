//! Scalar abstraction for the numerical core.
//!
//! Everything downstream (bases, operators, integrators, control paths) is
//! written against [`Real`], so the same code runs in `f32` or `f64`. The
//! crate root exports `f64` aliases for the common types; `f64` is what the
//! CLI and all shipped scenarios use.

use std::fmt::{Debug, Display};

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign};

/// Floating-point scalar for state amplitudes, Hamiltonian entries and times.
pub trait Real:
    Float + FloatConst + FromPrimitive + NumAssign + Debug + Display + Send + Sync + 'static
{
}

impl Real for f32 {}
impl Real for f64 {}

/// Complex number over the crate scalar.
pub type Cx<S> = Complex<S>;

/// Convert an `f64` literal into the working scalar.
#[inline]
pub fn re<S: Real>(x: f64) -> S {
    S::from_f64(x).expect("f64 literal must convert into the scalar type")
}

/// Complex constant from `f64` parts.
#[inline]
pub fn cx<S: Real>(re_part: f64, im_part: f64) -> Cx<S> {
    Complex::new(re(re_part), re(im_part))
}

/// `i` in the working scalar.
#[inline]
pub fn ci<S: Real>() -> Cx<S> {
    Complex::new(S::zero(), S::one())
}

/// Real value promoted to a complex number.
#[inline]
pub fn crl<S: Real>(x: S) -> Cx<S> {
    Complex::new(x, S::zero())
}
