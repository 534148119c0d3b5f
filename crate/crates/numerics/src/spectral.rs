//! Fourier operators on a uniform periodic grid.

use std::sync::Arc;

use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlanner};

use crate::{lit, Real};

/// Uniform periodic grid `x_j = start + j * length / n`.
#[derive(Clone, Debug, PartialEq)]
pub struct Grid<F> {
    pub n: usize,
    pub length: F,
    pub start: F,
}

impl<F: Real> Grid<F> {
    pub fn new(n: usize, length: F, start: F) -> Self {
        Grid { n, length, start }
    }

    /// Grid on `[-length/2, length/2)`.
    pub fn centered(n: usize, length: F) -> Self {
        Grid { n, length, start: -length / lit(2.0) }
    }

    pub fn spacing(&self) -> F {
        self.length / F::from(self.n).unwrap()
    }

    pub fn points(&self) -> Vec<F> {
        let h = self.spacing();
        (0..self.n).map(|j| self.start + h * F::from(j).unwrap()).collect()
    }

    pub fn sample(&self, f: impl Fn(F) -> F) -> Vec<F> {
        self.points().into_iter().map(f).collect()
    }

    /// Trapezoidal (spectrally exact for trigonometric polynomials) integral.
    pub fn integrate(&self, f: &[F]) -> F {
        f.iter().fold(F::zero(), |s, &v| s + v) * self.spacing()
    }
}

/// FFT plans and wavenumbers for one grid.
///
/// Mode index `j` carries the integer wavenumber `m = j` for `j < n/2` and
/// `m = j - n` above; the Nyquist mode is given wavenumber zero so that real
/// fields stay real under every odd-symbol operator.
#[derive(Clone)]
pub struct Spectral<F: Real> {
    grid: Grid<F>,
    forward: Arc<dyn Fft<F>>,
    inverse: Arc<dyn Fft<F>>,
    modes: Vec<i64>,
    kappa: Vec<F>,
}

impl<F: Real> Spectral<F> {
    pub fn new(grid: Grid<F>) -> Self {
        let n = grid.n;
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(n);
        let inverse = planner.plan_fft_inverse(n);
        let half = (n / 2) as i64;
        let modes: Vec<i64> = (0..n as i64)
            .map(|j| if j < half { j } else if j == half && n % 2 == 0 { 0 } else { j - n as i64 })
            .collect();
        let base = F::TAU() / grid.length;
        let kappa = modes.iter().map(|&m| base * F::from(m).unwrap()).collect();
        Spectral { grid, forward, inverse, modes, kappa }
    }

    pub fn grid(&self) -> &Grid<F> {
        &self.grid
    }

    /// Physical wavenumbers `2 pi m / L`.
    pub fn kappa(&self) -> &[F] {
        &self.kappa
    }

    pub fn modes(&self) -> &[i64] {
        &self.modes
    }

    pub fn forward(&self, f: &[F]) -> Vec<Complex<F>> {
        let mut buf: Vec<Complex<F>> = f.iter().map(|&v| Complex::new(v, F::zero())).collect();
        self.forward.process(&mut buf);
        buf
    }

    /// Inverse transform (normalized) keeping the real part.
    pub fn inverse(&self, mut hat: Vec<Complex<F>>) -> Vec<F> {
        self.inverse.process(&mut hat);
        let scale = F::one() / F::from(self.grid.n).unwrap();
        hat.into_iter().map(|c| c.re * scale).collect()
    }

    /// Multiplies every mode by `symbol(kappa)`.
    pub fn apply(&self, f: &[F], symbol: impl Fn(F) -> Complex<F>) -> Vec<F> {
        let mut hat = self.forward(f);
        for (c, &k) in hat.iter_mut().zip(&self.kappa) {
            *c = *c * symbol(k);
        }
        self.inverse(hat)
    }

    pub fn derivative(&self, f: &[F]) -> Vec<F> {
        self.apply(f, |k| Complex::new(F::zero(), k))
    }

    /// Zeroes every mode with `|m| > n/3` (the two-thirds rule).
    pub fn dealias(&self, hat: &mut [Complex<F>]) {
        let cut = (self.grid.n / 3) as i64;
        let nyquist = self.grid.n / 2;
        for (j, c) in hat.iter_mut().enumerate() {
            if self.modes[j].abs() > cut || (self.grid.n % 2 == 0 && j == nyquist) {
                *c = Complex::new(F::zero(), F::zero());
            }
        }
    }

    pub fn dealiased(&self, f: &[F]) -> Vec<F> {
        let mut hat = self.forward(f);
        self.dealias(&mut hat);
        self.inverse(hat)
    }

    /// Zero-mean antiderivative of the fluctuating part of `f`.
    pub fn antiderivative(&self, f: &[F]) -> Vec<F> {
        self.apply(f, |k| {
            if k == F::zero() {
                Complex::new(F::zero(), F::zero())
            } else {
                Complex::new(F::zero(), -F::one() / k)
            }
        })
    }

    /// Mode shift `f(x) -> f(x + s)`.
    pub fn shift(&self, f: &[F], s: F) -> Vec<F> {
        self.apply(f, |k| Complex::new(F::zero(), k * s).exp())
    }
}
