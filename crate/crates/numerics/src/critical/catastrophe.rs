use thiserror::Error;

use super::pearcey::Pearcey;
use crate::{lit, Real};

/// Point where the hodograph solution of `x + 2ut - f(u) = 0` first breaks.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CatastrophePoint<F> {
    pub x0: F,
    pub t0: F,
    pub u0: F,
    /// `f'''(u0)`.
    pub f3: F,
}

impl<F: Real> CatastrophePoint<F> {
    /// Residuals of `x0 + 2u0 t0 - f(u0)`, `2t0 - f'(u0)` and `f''(u0)`.
    pub fn residuals(&self, f: impl Fn(F) -> [F; 4]) -> [F; 3] {
        let [f0, f1, f2, _] = f(self.u0);
        let two = lit::<F>(2.0);
        [self.x0 + two * self.u0 * self.t0 - f0, two * self.t0 - f1, f2]
    }
}

#[derive(Clone, Debug, Error, PartialEq)]
pub enum CatastropheError {
    #[error("f'' does not change sign in [{lo}, {hi}]")]
    NoSignChange { lo: f64, hi: f64 },
    #[error("f''' = {f3} at the zero of f'': not a generic catastrophe")]
    Degenerate { f3: f64 },
}

const SCAN: usize = 256;

/// Locates the catastrophe from `f -> [f, f', f'', f''']` and a search
/// interval for `u0`.
pub fn find_catastrophe<F: Real>(
    f: impl Fn(F) -> [F; 4],
    search: (F, F),
) -> Result<CatastrophePoint<F>, CatastropheError> {
    let (lo, hi) = search;
    let f2 = |u: F| f(u)[2];
    let to64 = |v: F| v.to_f64().unwrap_or(f64::NAN);
    let n = F::from(SCAN).unwrap();
    let mut root = None;
    let mut falling = None;
    let mut a = lo;
    let mut ga = f2(a);
    for i in 1..=SCAN {
        let b = lo + (hi - lo) * F::from(i).unwrap() / n;
        let gb = f2(b);
        if ga == F::zero() {
            root = Some(a);
            break;
        }
        if ga < F::zero() && gb >= F::zero() {
            root = Some(bisect(&f2, a, b, ga));
            break;
        }
        if ga > F::zero() && gb < F::zero() && falling.is_none() {
            falling = Some(bisect(&f2, a, b, ga));
        }
        a = b;
        ga = gb;
    }
    if root.is_none() && ga == F::zero() {
        root = Some(a);
    }
    let u0 = match (root, falling) {
        (Some(u), _) => u,
        (None, Some(u)) => u,
        (None, None) => return Err(CatastropheError::NoSignChange { lo: to64(lo), hi: to64(hi) }),
    };
    let [f0, f1, _, f3] = f(u0);
    if !(f3 > F::zero()) {
        return Err(CatastropheError::Degenerate { f3: to64(f3) });
    }
    let t0 = f1 / lit(2.0);
    Ok(CatastrophePoint { x0: f0 - lit::<F>(2.0) * u0 * t0, t0, u0, f3 })
}

fn bisect<F: Real>(g: &impl Fn(F) -> F, mut a: F, mut b: F, mut ga: F) -> F {
    for _ in 0..200 {
        let m = (a + b) / lit(2.0);
        let gm = g(m);
        if gm == F::zero() {
            return m;
        }
        if (ga < F::zero()) == (gm < F::zero()) {
            a = m;
            ga = gm;
        } else {
            b = m;
        }
        if (b - a).abs() <= F::epsilon() * (a.abs() + b.abs()) {
            break;
        }
    }
    (a + b) / lit(2.0)
}

/// `s1 = (a0^3 f'''/6)^(1/4)`, `s2 = (a0 f'''/24)^(1/2)`,
/// `s3 = (6 a0/f''')^(1/4)` and the exponents `sigma = 3`, `beta = 2`,
/// `q = 1/4` of `x - x0 + 2u0(t - t0) = eps^(3/4) s1 X`,
/// `t - t0 = eps^(1/2) s2 T`, `u - u0 = eps^(1/4) s3 U`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CriticalScales<F> {
    pub s1: F,
    pub s2: F,
    pub s3: F,
    pub sigma: F,
    pub beta: F,
    pub q: F,
}

impl<F: Real> CriticalScales<F> {
    pub fn new(a0: F, f3: F) -> Self {
        let quarter = lit::<F>(0.25);
        CriticalScales {
            s1: (a0.powi(3) * f3 / lit(6.0)).powf(quarter),
            s2: (a0 * f3 / lit(24.0)).sqrt(),
            s3: (lit::<F>(6.0) * a0 / f3).powf(quarter),
            sigma: lit(3.0),
            beta: lit(2.0),
            q: quarter,
        }
    }

    /// `(X, T)` of the physical point `(x, t)`.
    pub fn rescale(&self, cp: &CatastrophePoint<F>, eps: F, x: F, t: F) -> (F, F) {
        let q = self.q;
        let xt = x - cp.x0 + lit::<F>(2.0) * cp.u0 * (t - cp.t0);
        let big_x = xt / (self.s1 * eps.powf(self.sigma * q));
        let big_t = (t - cp.t0) / (self.s2 * eps.powf(self.beta * q));
        (big_x, big_t)
    }

    /// Physical point `(x, t)` of `(X, T)`.
    pub fn physical(&self, cp: &CatastrophePoint<F>, eps: F, big_x: F, big_t: F) -> (F, F) {
        let q = self.q;
        let t = cp.t0 + self.s2 * eps.powf(self.beta * q) * big_t;
        let x = cp.x0 - lit::<F>(2.0) * cp.u0 * (t - cp.t0) + self.s1 * eps.powf(self.sigma * q) * big_x;
        (x, t)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProfilePoint<F> {
    pub u: F,
    pub big_x: F,
    pub big_t: F,
    /// False when `(X, T)` falls outside the validated Pearcey box.
    pub in_box: bool,
}

/// `u0 + s3 eps^(1/4) U(X, T)` with `U = P_X/P`.
pub fn critical_profile<F: Real>(
    cp: &CatastrophePoint<F>,
    a0: F,
    eps: F,
    x: F,
    t: F,
    pearcey: &Pearcey<F>,
) -> ProfilePoint<F> {
    let scales = CriticalScales::new(a0, cp.f3);
    let (big_x, big_t) = scales.rescale(cp, eps, x, t);
    let u = pearcey.profile(big_x, big_t)[0];
    ProfilePoint {
        u: cp.u0 + scales.s3 * eps.powf(scales.q) * u,
        big_x,
        big_t,
        in_box: pearcey.in_validated_box(big_x, big_t),
    }
}
