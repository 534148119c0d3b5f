//! Periodic initial-value solver for
//! `v_t - eps v_xt = d_x(v^2 - eps v v_x)`.
//!
//! With the auxiliary field `(1 - eps d_x) P = v^2/2` the equation becomes
//! the first-order system `v_t = v v_x + P_x`, which is what gets
//! integrated here. `P` is re-solved from `v` at every Runge-Kutta stage.

use rustfft::num_complex::Complex;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fd4::{self, CyclicSolver};
use crate::spectral::{Grid, Spectral};
use crate::{lit, max_abs, Real};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    Spectral,
    Fd4,
}

/// Initial datum. `V1`, `V2`, `V3` are `sin(pi x/12) + 2`,
/// `sin(pi x/6) + 2` and `sin(pi x/12)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", bound(deserialize = "F: Deserialize<'de>"))]
pub enum Datum<F> {
    V1,
    V2,
    V3,
    /// `amplitude * exp(-(x/width)^2)`, meant for widths well below the period.
    BurgersGaussian { amplitude: F, width: F },
    /// `mean + sum a cos(2 pi m x/L) + sum b sin(2 pi m x/L)`, entries `(m, a)`.
    Series {
        mean: F,
        #[serde(default)]
        cos: Vec<(u32, F)>,
        #[serde(default)]
        sin: Vec<(u32, F)>,
    },
}

impl<F: Real> Datum<F> {
    pub fn eval(&self, x: F, length: F) -> F {
        let pi = F::PI();
        match self {
            Datum::V1 => (pi * x / lit(12.0)).sin() + lit(2.0),
            Datum::V2 => (pi * x / lit(6.0)).sin() + lit(2.0),
            Datum::V3 => (pi * x / lit(12.0)).sin(),
            Datum::BurgersGaussian { amplitude, width } => *amplitude * (-(x / *width).powi(2)).exp(),
            Datum::Series { mean, cos, sin } => {
                let base = F::TAU() / length;
                let c = cos.iter().fold(F::zero(), |s, &(m, a)| s + a * (base * F::from(m).unwrap() * x).cos());
                let sn = sin.iter().fold(F::zero(), |s, &(m, b)| s + b * (base * F::from(m).unwrap() * x).sin());
                *mean + c + sn
            }
        }
    }

    /// Smallest period the datum needs from the domain, if it has one.
    fn natural_period(&self) -> Option<F> {
        match self {
            Datum::V1 | Datum::V3 => Some(lit(24.0)),
            Datum::V2 => Some(lit(12.0)),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "lowercase")]
pub enum StepControl<F> {
    Fixed { dt: F },
    /// Step-doubling error control; the step is halved until the estimate
    /// is below `tol` and allowed to grow back up to `dt`.
    Adaptive { dt: F, tol: F },
}

fn default_blowup<F: Real>() -> F {
    lit(50.0)
}

fn default_min_step<F: Real>() -> F {
    lit(1e-10)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(deserialize = "F: Real + Deserialize<'de>"))]
pub struct SimConfig<F> {
    pub length: F,
    pub n: usize,
    pub eps: F,
    pub t_end: F,
    pub step: StepControl<F>,
    pub scheme: Scheme,
    pub datum: Datum<F>,
    /// Snapshot cadence; diagnostics are recorded at every accepted step.
    pub output_every: F,
    /// Blow-up is flagged once `max |v_x|` exceeds this multiple of its
    /// initial value.
    #[serde(default = "default_blowup")]
    pub blowup_factor: F,
    #[serde(default = "default_min_step")]
    pub min_step: F,
}

impl<F: Real> SimConfig<F> {
    /// Period 24, `eps = 1`, 512 spectral points, adaptive RK4 up to `t = 12`.
    pub fn standard(datum: Datum<F>) -> Self {
        SimConfig {
            length: lit(24.0),
            n: 512,
            eps: F::one(),
            t_end: lit(12.0),
            step: StepControl::Adaptive { dt: lit(0.01), tol: lit(1e-9) },
            scheme: Scheme::Spectral,
            datum,
            output_every: lit(0.5),
            blowup_factor: default_blowup(),
            min_step: default_min_step(),
        }
    }

    pub fn validate(&self) -> Result<(), SimError> {
        let bad = |m: &str| Err(SimError::InvalidConfig(m.to_string()));
        if self.n < 16 {
            return bad("grid size must be at least 16");
        }
        if self.scheme == Scheme::Spectral && !self.n.is_power_of_two() {
            return bad("spectral grid size must be a power of two");
        }
        if !(self.eps > F::zero()) {
            return bad("eps must be positive");
        }
        if !(self.length > F::zero()) || !(self.t_end >= F::zero()) || !(self.output_every > F::zero()) {
            return bad("length and output cadence must be positive, t_end non-negative");
        }
        let dt = match self.step {
            StepControl::Fixed { dt } => dt,
            StepControl::Adaptive { dt, tol } => {
                if !(tol > F::epsilon() * lit(100.0)) {
                    return bad("tolerance must exceed 100 ulp of the float type");
                }
                dt
            }
        };
        if !(dt > F::zero()) {
            return bad("time step must be positive");
        }
        if let Some(p) = self.datum.natural_period() {
            let ratio = self.length / p;
            if (ratio - ratio.round()).abs() > lit(1e-9) || ratio.round() < F::one() {
                return bad("domain length must be a multiple of the datum period");
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Error, PartialEq)]
pub enum SimError {
    #[error("invalid simulation config: {0}")]
    InvalidConfig(String),
}

/// Grid snapshot; `m = v - eps v_x`.
#[derive(Clone, Debug, PartialEq)]
pub struct SimState<F> {
    pub t: F,
    pub v: Vec<F>,
    pub p: Vec<F>,
    pub m: Vec<F>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Diagnostics<F> {
    pub t: F,
    pub mass: F,
    pub m_mass: F,
    pub max_slope: F,
    /// Location of the steepest slope.
    pub slope_at: F,
    pub osc_amp: F,
    pub energy: F,
    /// Relative residual of `(1 - eps d_x) P = v^2/2`.
    pub constraint: F,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum BlowUpReason<F> {
    Slope { max_slope: F, threshold: F },
    StepUnderflow { step: F },
    NonFinite,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Outcome<F> {
    Finished,
    BlowUp { t_last: F, reason: BlowUpReason<F> },
}

#[derive(Clone, Debug)]
pub struct SimRun<F> {
    pub grid: Vec<F>,
    pub snapshots: Vec<SimState<F>>,
    pub diagnostics: Vec<Diagnostics<F>>,
    pub outcome: Outcome<F>,
    pub steps: usize,
}

impl<F: Real> SimRun<F> {
    pub fn blew_up(&self) -> bool {
        matches!(self.outcome, Outcome::BlowUp { .. })
    }

    pub fn peak_slope(&self) -> F {
        self.diagnostics.iter().fold(F::zero(), |m, d| m.max(d.max_slope))
    }

    /// Diagnostics record closest to time `t`.
    pub fn diagnostics_at(&self, t: F) -> Option<&Diagnostics<F>> {
        self.diagnostics
            .iter()
            .min_by(|a, b| (a.t - t).abs().partial_cmp(&(b.t - t).abs()).unwrap())
    }
}

pub struct Simulator<F: Real> {
    config: SimConfig<F>,
    spectral: Spectral<F>,
    cyclic: Option<CyclicSolver<F>>,
}

impl<F: Real> Simulator<F> {
    pub fn new(config: SimConfig<F>) -> Result<Self, SimError> {
        config.validate()?;
        let grid = Grid::centered(config.n, config.length);
        let cyclic = match config.scheme {
            Scheme::Fd4 => Some(CyclicSolver::new(config.n, grid.spacing(), config.eps)),
            Scheme::Spectral => None,
        };
        Ok(Simulator { spectral: Spectral::new(grid), config, cyclic })
    }

    pub fn config(&self) -> &SimConfig<F> {
        &self.config
    }

    pub fn grid(&self) -> &Grid<F> {
        self.spectral.grid()
    }

    pub fn initial(&self) -> Vec<F> {
        let l = self.config.length;
        self.grid().sample(|x| self.config.datum.eval(x, l))
    }

    pub fn derivative(&self, f: &[F]) -> Vec<F> {
        match &self.cyclic {
            None => self.spectral.derivative(f),
            Some(_) => fd4::derivative(f, self.grid().spacing()),
        }
    }

    /// Solves `(1 - eps d_x) P = v^2/2` with the configured discretization.
    pub fn solve_p(&self, v: &[F]) -> Vec<F> {
        let half: Vec<F> = v.iter().map(|&x| x * x / lit(2.0)).collect();
        match &self.cyclic {
            Some(solver) => solver.solve(&half),
            None => {
                let eps = self.config.eps;
                self.spectral.apply(&half, |k| Complex::new(F::one(), -eps * k).inv())
            }
        }
    }

    /// `||(1 - eps d_x) P - v^2/2||_inf / ||v^2/2||_inf`.
    pub fn constraint_residual(&self, v: &[F], p: &[F]) -> F {
        let px = self.derivative(p);
        let eps = self.config.eps;
        let mut num = F::zero();
        let mut den = F::zero();
        for ((&vi, &pi), &pxi) in v.iter().zip(p).zip(&px) {
            let q = vi * vi / lit(2.0);
            num = num.max((pi - eps * pxi - q).abs());
            den = den.max(q.abs());
        }
        if num == F::zero() {
            F::zero()
        } else {
            num / den
        }
    }

    /// `v v_x + P_x` for a given `P`.
    pub fn rhs_with(&self, v: &[F], p: &[F]) -> Vec<F> {
        let vx = self.derivative(v);
        let px = self.derivative(p);
        let out: Vec<F> = v.iter().zip(&vx).zip(&px).map(|((&a, &b), &c)| a * b + c).collect();
        match self.config.scheme {
            Scheme::Spectral => self.spectral.dealiased(&out),
            Scheme::Fd4 => out,
        }
    }

    pub fn rhs(&self, state: &SimState<F>) -> Vec<F> {
        self.rhs_with(&state.v, &state.p)
    }

    /// Time derivative in conservation form `d_x(v^2/2 + G * v^2/2)`, with
    /// `G` the periodic Green function of `1 - eps d_x` applied spectrally.
    pub fn nonlocal_flux_rhs(&self, v: &[F]) -> Vec<F> {
        let eps = self.config.eps;
        let half: Vec<F> = v.iter().map(|&x| x * x / lit(2.0)).collect();
        let mut hat = self.spectral.forward(&half);
        for (c, &k) in hat.iter_mut().zip(self.spectral.kappa()) {
            let green = Complex::new(F::one(), -eps * k).inv();
            *c = *c * (Complex::new(F::one(), F::zero()) + green) * Complex::new(F::zero(), k);
        }
        self.spectral.dealias(&mut hat);
        self.spectral.inverse(hat)
    }

    pub fn state(&self, t: F, v: Vec<F>) -> SimState<F> {
        let p = self.solve_p(&v);
        let vx = self.derivative(&v);
        let eps = self.config.eps;
        let m = v.iter().zip(&vx).map(|(&a, &b)| a - eps * b).collect();
        SimState { t, v, p, m }
    }

    pub fn diagnostics(&self, state: &SimState<F>) -> Diagnostics<F> {
        let grid = self.grid();
        let vx = self.derivative(&state.v);
        let (slope_idx, max_slope) = vx
            .iter()
            .enumerate()
            .fold((0, F::zero()), |(i, m), (j, &s)| if s.abs() > m { (j, s.abs()) } else { (i, m) });
        let hi = state.v.iter().fold(F::neg_infinity(), |m, &x| m.max(x));
        let lo = state.v.iter().fold(F::infinity(), |m, &x| m.min(x));
        let sq: Vec<F> = state.v.iter().map(|&x| x * x).collect();
        Diagnostics {
            t: state.t,
            mass: grid.integrate(&state.v),
            m_mass: grid.integrate(&state.m),
            max_slope,
            slope_at: grid.start + grid.spacing() * F::from(slope_idx).unwrap(),
            osc_amp: hi - lo,
            energy: grid.integrate(&sq),
            constraint: self.constraint_residual(&state.v, &state.p),
        }
    }

    fn field_rhs(&self, v: &[F]) -> Vec<F> {
        let p = self.solve_p(v);
        self.rhs_with(v, &p)
    }

    /// One classical fourth-order Runge-Kutta step.
    pub fn rk4_step(&self, v: &[F], h: F) -> Vec<F> {
        let two = lit::<F>(2.0);
        let axpy = |a: &[F], s: F, b: &[F]| -> Vec<F> { a.iter().zip(b).map(|(&x, &y)| x + s * y).collect() };
        let k1 = self.field_rhs(v);
        let k2 = self.field_rhs(&axpy(v, h / two, &k1));
        let k3 = self.field_rhs(&axpy(v, h / two, &k2));
        let k4 = self.field_rhs(&axpy(v, h, &k3));
        let six = lit::<F>(6.0);
        (0..v.len())
            .map(|i| v[i] + h / six * (k1[i] + two * k2[i] + two * k3[i] + k4[i]))
            .collect()
    }

    pub fn integrate(&self) -> SimRun<F> {
        let cfg = &self.config;
        let tiny = cfg.t_end.max(F::one()) * lit(1e-12);
        let mut t = F::zero();
        let mut v = self.initial();
        let state = self.state(t, v.clone());
        let first = self.diagnostics(&state);
        let threshold = if first.max_slope > F::zero() {
            first.max_slope * cfg.blowup_factor
        } else {
            F::infinity()
        };
        let mut run = SimRun {
            grid: self.grid().points(),
            snapshots: vec![state],
            diagnostics: vec![first],
            outcome: Outcome::Finished,
            steps: 0,
        };
        let (mut dt, dt_max, tol) = match cfg.step {
            StepControl::Fixed { dt } => (dt, dt, None),
            StepControl::Adaptive { dt, tol } => (dt, dt, Some(tol)),
        };
        let mut next_out = cfg.output_every;
        while t < cfg.t_end - tiny {
            let mut h = dt.min(cfg.t_end - t).min(next_out - t);
            let next = loop {
                let Some(tol) = tol else { break self.rk4_step(&v, h) };
                let big = self.rk4_step(&v, h);
                let half = self.rk4_step(&self.rk4_step(&v, h / lit(2.0)), h / lit(2.0));
                let diff: Vec<F> = big.iter().zip(&half).map(|(&a, &b)| a - b).collect();
                let err = max_abs(&diff) / (F::one() + max_abs(&half));
                if err.is_finite() && err <= tol {
                    if err < tol / lit(32.0) && h >= dt {
                        dt = (dt * lit(2.0)).min(dt_max);
                    }
                    break half;
                }
                h = h / lit(2.0);
                dt = h;
                if h < cfg.min_step {
                    run.outcome = Outcome::BlowUp { t_last: t, reason: BlowUpReason::StepUnderflow { step: h } };
                    return run;
                }
            };
            if next.iter().any(|x| !x.is_finite()) {
                run.outcome = Outcome::BlowUp { t_last: t, reason: BlowUpReason::NonFinite };
                return run;
            }
            t = t + h;
            v = next;
            run.steps += 1;
            let state = self.state(t, v.clone());
            let diag = self.diagnostics(&state);
            run.diagnostics.push(diag);
            let blown = diag.max_slope > threshold;
            if blown || t >= next_out - tiny || t >= cfg.t_end - tiny {
                run.snapshots.push(state);
                if t >= next_out - tiny {
                    next_out = next_out + cfg.output_every;
                }
            }
            if blown {
                run.outcome = Outcome::BlowUp {
                    t_last: t,
                    reason: BlowUpReason::Slope { max_slope: diag.max_slope, threshold },
                };
                return run;
            }
        }
        run
    }
}

/// Periodic Green function of `1 - eps d_x` on a circle of length `length`,
/// for `x` in `(0, length)`.
pub fn green_function<F: Real>(x: F, eps: F, length: F) -> F {
    let x = x - (x / length).floor() * length;
    ((x - length) / eps).exp() / (eps * (F::one() - (-length / eps).exp()))
}
