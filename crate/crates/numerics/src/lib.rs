//! Numerical side of the toolkit.
//!
//! * [`pdesim`]: periodic solver for `v_t - eps v_xt = d_x(v^2 - eps v v_x)`
//!   written through the auxiliary field `P`, with spectral and fourth-order
//!   finite-difference discretizations and run diagnostics.
//! * [`burgers`]: pseudospectral Burgers solver and exact Cole-Hopf
//!   references (periodic and whole-line).
//! * [`critical`]: Pearcey integral, the two universality ODEs, the `0F2`
//!   audit, catastrophe detection and the critical profile.
//!
//! Everything is generic over [`Real`], which both `f32` and `f64` satisfy.

use std::fmt::Debug;

use num_traits::{Float, FloatConst};
use rustfft::FftNum;

pub mod burgers;
pub mod critical;
pub mod fd4;
pub mod pdesim;
pub mod spectral;

/// Floating-point scalar accepted by every numeric routine.
pub trait Real: Float + FloatConst + FftNum + Debug {}

impl<T: Float + FloatConst + FftNum + Debug> Real for T {}

pub type SimConfig64 = pdesim::SimConfig<f64>;
pub type SimConfig32 = pdesim::SimConfig<f32>;
pub type Simulator64 = pdesim::Simulator<f64>;
pub type Simulator32 = pdesim::Simulator<f32>;
pub type Pearcey64 = critical::Pearcey<f64>;
pub type Pearcey32 = critical::Pearcey<f32>;

/// Converts an `f64` literal into `F`.
#[inline]
pub(crate) fn lit<F: Real>(x: f64) -> F {
    F::from(x).expect("literal representable in the target float type")
}

pub(crate) fn max_abs<F: Real>(xs: &[F]) -> F {
    xs.iter().fold(F::zero(), |m, x| m.max(x.abs()))
}
