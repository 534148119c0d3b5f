use thiserror::Error;

use super::catastrophe::{critical_profile, find_catastrophe, CatastropheError, CatastrophePoint, CriticalScales};
use super::pearcey::Pearcey;
use super::poly::Polynomial;
use crate::burgers::{BurgersError, LineColeHopf};
use crate::{lit, Real};

/// Burgers runs near the catastrophe of hodograph data `x = f(u)` at `t = 0`.
#[derive(Clone, Debug)]
pub struct UniversalityConfig<F> {
    /// Increasing polynomial flux with a generic inflection point.
    pub flux: Polynomial<F>,
    pub search: (F, F),
    pub epsilons: Vec<F>,
    /// Half-widths of the rescaled `(X, T)` window.
    pub window: (F, F),
    pub samples: (usize, usize),
    /// Half-width of the `u` interval of the Cole-Hopf quadrature.
    pub u_half_width: F,
    pub nodes: usize,
}

impl<F: Real> Default for UniversalityConfig<F> {
    /// `f(u) = (u - 1/2)^3 + (u - 1/2) + 1/5` and `eps = 0.04, 0.02, 0.01`.
    fn default() -> Self {
        UniversalityConfig {
            flux: Polynomial::shifted_cubic(lit(0.5), F::one(), F::one(), lit(0.2)),
            search: (lit(-2.0), lit(2.0)),
            epsilons: vec![lit(0.04), lit(0.02), lit(0.01)],
            window: (lit(3.0), lit(3.0)),
            samples: (25, 13),
            u_half_width: lit(3.0),
            nodes: 24_001,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UniversalityRow<F> {
    pub eps: F,
    /// `max |u_burgers - u_profile|` over the window.
    pub max_deviation: F,
    /// `max |u_burgers - u0|` over the window.
    pub max_amplitude: F,
}

#[derive(Clone, Debug, PartialEq)]
pub struct UniversalityReport<F> {
    pub catastrophe: CatastrophePoint<F>,
    pub scales: CriticalScales<F>,
    pub rows: Vec<UniversalityRow<F>>,
    /// Least-squares slope of `log max_amplitude` against `log eps`.
    pub amplitude_exponent: F,
}

impl<F: Real> UniversalityReport<F> {
    /// Deviation strictly decreasing along decreasing `eps`.
    pub fn deviation_decreases(&self) -> bool {
        let mut rows = self.rows.clone();
        rows.sort_by(|a, b| b.eps.partial_cmp(&a.eps).unwrap());
        rows.windows(2).all(|w| w[1].max_deviation < w[0].max_deviation)
    }
}

#[derive(Clone, Debug, Error, PartialEq)]
pub enum UniversalityError {
    #[error(transparent)]
    Catastrophe(#[from] CatastropheError),
    #[error(transparent)]
    Burgers(#[from] BurgersError),
    #[error("the rescaled window reaches t <= 0 at eps = {eps}")]
    WindowBeforeStart { eps: f64 },
}

/// Compares exact Burgers solutions (`a0 = 1`) with the Pearcey profile on
/// a fixed rescaled window around the catastrophe, for each `eps`.
pub fn universality_experiment<F: Real>(cfg: &UniversalityConfig<F>) -> Result<UniversalityReport<F>, UniversalityError> {
    let cp = find_catastrophe(|u| cfg.flux.jet(u), cfg.search)?;
    let a0 = F::one();
    let scales = CriticalScales::new(a0, cp.f3);
    let pearcey = Pearcey::default();
    let axis = |half: F, n: usize| -> Vec<F> {
        (0..n).map(|i| -half + lit::<F>(2.0) * half * F::from(i).unwrap() / F::from(n - 1).unwrap()).collect()
    };
    let xs = axis(cfg.window.0, cfg.samples.0);
    let ts = axis(cfg.window.1, cfg.samples.1);
    let mut rows = Vec::new();
    for &eps in &cfg.epsilons {
        let solver = LineColeHopf::new(
            cfg.flux.clone(),
            eps,
            (cp.u0 - cfg.u_half_width, cp.u0 + cfg.u_half_width),
            cfg.nodes,
        );
        let mut max_deviation = F::zero();
        let mut max_amplitude = F::zero();
        for &big_t in &ts {
            for &big_x in &xs {
                let (x, t) = scales.physical(&cp, eps, big_x, big_t);
                if !(t > F::zero()) {
                    return Err(UniversalityError::WindowBeforeStart { eps: eps.to_f64().unwrap_or(f64::NAN) });
                }
                let u = solver.eval(x, t)?;
                let profile = critical_profile(&cp, a0, eps, x, t, &pearcey);
                max_deviation = max_deviation.max((u - profile.u).abs());
                max_amplitude = max_amplitude.max((u - cp.u0).abs());
            }
        }
        rows.push(UniversalityRow { eps, max_deviation, max_amplitude });
    }
    let pts: Vec<(F, F)> = rows.iter().map(|r| (r.eps.ln(), r.max_amplitude.ln())).collect();
    Ok(UniversalityReport { catastrophe: cp, scales, amplitude_exponent: slope(&pts), rows })
}

fn slope<F: Real>(pts: &[(F, F)]) -> F {
    let n = F::from(pts.len()).unwrap();
    let mx = pts.iter().fold(F::zero(), |s, p| s + p.0) / n;
    let my = pts.iter().fold(F::zero(), |s, p| s + p.1) / n;
    let sxy = pts.iter().fold(F::zero(), |s, p| s + (p.0 - mx) * (p.1 - my));
    let sxx = pts.iter().fold(F::zero(), |s, p| s + (p.0 - mx) * (p.0 - mx));
    sxy / sxx
}
