//! The Burgers equation `v_t = d_x(v^2 + eps v_x) = 2 v v_x + eps v_xx`.
//!
//! [`BurgersSolver`] is a dealiased pseudospectral solver with an
//! integrating factor for the diffusion. The Cole-Hopf substitution
//! `v = eps d_x log w` turns the equation into the heat equation
//! `w_t = eps w_xx`, which gives the exact references used to validate it.

use rustfft::num_complex::Complex;
use thiserror::Error;

use crate::critical::Polynomial;
use crate::spectral::{Grid, Spectral};
use crate::{lit, Real};

#[derive(Clone, Debug, Error, PartialEq)]
pub enum BurgersError {
    #[error("Cole-Hopf potential lost positivity (min {min})")]
    NonPositive { min: f64 },
    #[error("time must be positive for the whole-line Cole-Hopf integral")]
    NonPositiveTime,
}

pub struct BurgersSolver<F: Real> {
    spectral: Spectral<F>,
    eps: F,
}

impl<F: Real> BurgersSolver<F> {
    pub fn new(grid: Grid<F>, eps: F) -> Self {
        BurgersSolver { spectral: Spectral::new(grid), eps }
    }

    fn nonlinear(&self, hat: &[Complex<F>]) -> Vec<Complex<F>> {
        let v = self.spectral.inverse(hat.to_vec());
        let sq: Vec<F> = v.iter().map(|&x| x * x).collect();
        let mut out = self.spectral.forward(&sq);
        for (c, &k) in out.iter_mut().zip(self.spectral.kappa()) {
            *c = *c * Complex::new(F::zero(), k);
        }
        self.spectral.dealias(&mut out);
        out
    }

    /// Advances `v0` to time `t` in steps no longer than `dt`.
    pub fn evolve(&self, v0: &[F], t: F, dt: F) -> Vec<F> {
        let steps = (t / dt).ceil().max(F::one()).to_usize().unwrap();
        let h = t / F::from(steps).unwrap();
        let half: Vec<Complex<F>> = self
            .spectral
            .kappa()
            .iter()
            .map(|&k| Complex::new((-self.eps * k * k * h / lit(2.0)).exp(), F::zero()))
            .collect();
        let mut hat = self.spectral.forward(v0);
        self.spectral.dealias(&mut hat);
        let two = lit::<F>(2.0);
        let six = lit::<F>(6.0);
        for _ in 0..steps {
            let a: Vec<_> = self.nonlinear(&hat).into_iter().map(|c| c * h).collect();
            let s: Vec<_> = (0..hat.len()).map(|j| half[j] * (hat[j] + a[j] / two)).collect();
            let b: Vec<_> = self.nonlinear(&s).into_iter().map(|c| c * h).collect();
            let s: Vec<_> = (0..hat.len()).map(|j| half[j] * hat[j] + b[j] / two).collect();
            let c: Vec<_> = self.nonlinear(&s).into_iter().map(|c| c * h).collect();
            let s: Vec<_> = (0..hat.len()).map(|j| half[j] * half[j] * hat[j] + half[j] * c[j]).collect();
            let d: Vec<_> = self.nonlinear(&s).into_iter().map(|c| c * h).collect();
            for j in 0..hat.len() {
                let e2 = half[j] * half[j];
                hat[j] = e2 * hat[j] + (e2 * a[j] + half[j] * (b[j] + c[j]) * two + d[j]) / six;
            }
        }
        self.spectral.inverse(hat)
    }
}

/// Exact periodic Burgers solution at time `t` from the grid datum `v0`.
///
/// The mean `c` of the datum is removed by the Galilean shift `x -> x + 2ct`;
/// the zero-mean part is exponentiated into `w`, evolved exactly mode by mode
/// under the heat flow, and differentiated back.
pub fn burgers_reference<F: Real>(v0: &[F], grid: &Grid<F>, eps: F, t: F) -> Result<Vec<F>, BurgersError> {
    let spectral = Spectral::new(grid.clone());
    let n = F::from(grid.n).unwrap();
    let mean = v0.iter().fold(F::zero(), |s, &x| s + x) / n;
    let fluct: Vec<F> = v0.iter().map(|&x| x - mean).collect();
    let phi = spectral.antiderivative(&fluct);
    let top = phi.iter().fold(F::neg_infinity(), |m, &x| m.max(x));
    let w0: Vec<F> = phi.iter().map(|&p| ((p - top) / eps).exp()).collect();
    let shift = lit::<F>(2.0) * mean * t;
    let evolve = |k: F| (Complex::new(-eps * k * k * t, k * shift)).exp();
    let w = spectral.apply(&w0, evolve);
    let wx = spectral.apply(&w0, |k| evolve(k) * Complex::new(F::zero(), k));
    let min = w.iter().fold(F::infinity(), |m, &x| m.min(x));
    if !(min > F::zero()) {
        return Err(BurgersError::NonPositive { min: min.to_f64().unwrap_or(f64::NAN) });
    }
    Ok(w.iter().zip(&wx).map(|(&a, &b)| mean + eps * b / a).collect())
}

/// Whole-line Burgers solution whose `t = 0` datum is the hodograph datum
/// `x = f(u)` of a monotone increasing polynomial flux `f`.
///
/// Writing the heat-kernel integral in the variable `u` of the initial
/// point `y = f(u)`, `v(x,t)` is the average of `(f(u) - x)/(2t)` against
/// the weight `f'(u) exp(E(u)/eps)`,
/// `E = u f(u) - int f - (x - f(u))^2/(4t)`, computed with the trapezoidal
/// rule on `nodes` points of `u_range`.
pub struct LineColeHopf<F> {
    f: Polynomial<F>,
    df: Polynomial<F>,
    big_f: Polynomial<F>,
    eps: F,
    u_range: (F, F),
    nodes: usize,
}

impl<F: Real> LineColeHopf<F> {
    pub fn new(f: Polynomial<F>, eps: F, u_range: (F, F), nodes: usize) -> Self {
        LineColeHopf { df: f.derivative(), big_f: f.antiderivative(), f, eps, u_range, nodes }
    }

    pub fn eval(&self, x: F, t: F) -> Result<F, BurgersError> {
        if !(t > F::zero()) {
            return Err(BurgersError::NonPositiveTime);
        }
        let (lo, hi) = self.u_range;
        let m = F::from(self.nodes - 1).unwrap();
        let four_t = lit::<F>(4.0) * t;
        let samples: Vec<(F, F, F)> = (0..self.nodes)
            .map(|i| {
                let u = lo + (hi - lo) * F::from(i).unwrap() / m;
                let fu = self.f.eval(u);
                let e = (u * fu - self.big_f.eval(u) - (x - fu).powi(2) / four_t) / self.eps;
                (e, self.df.eval(u), (fu - x) / (lit::<F>(2.0) * t))
            })
            .collect();
        let top = samples.iter().fold(F::neg_infinity(), |m, s| m.max(s.0));
        let (mut num, mut den) = (F::zero(), F::zero());
        for (i, &(e, w, g)) in samples.iter().enumerate() {
            let end = if i == 0 || i + 1 == self.nodes { lit(0.5) } else { F::one() };
            let weight = end * w * (e - top).exp();
            num = num + weight * g;
            den = den + weight;
        }
        Ok(num / den)
    }
}
