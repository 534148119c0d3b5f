use num_traits::Float;
use thiserror::Error;

/// Which hodograph equation is solved: `x + 2ut + f(u) = 0` or
/// `x + 2ut - f(u) = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HodographSign {
    Plus,
    Minus,
}

#[derive(Clone, Debug, Error, PartialEq)]
pub enum HodographError {
    #[error("no root of the hodograph equation in [{lo}, {hi}]")]
    NoBracket { lo: f64, hi: f64 },
    #[error("hodograph solution is multivalued: {roots} roots in [{lo}, {hi}]")]
    Multivalued { roots: usize, lo: f64, hi: f64 },
}

const SCAN: usize = 400;

/// Solves the hodograph equation for `u` in `search = (lo, hi)`.
///
/// The interval is scanned for sign changes first, so a solution past the
/// gradient catastrophe (several roots) is reported instead of silently
/// picking one branch; roots closer together than the scan spacing are not
/// separated.
pub fn hodograph_solve<F: Float>(
    f: impl Fn(F) -> F,
    x: F,
    t: F,
    sign: HodographSign,
    search: (F, F),
) -> Result<F, HodographError> {
    let two = F::one() + F::one();
    let g = |u: F| match sign {
        HodographSign::Plus => x + two * u * t + f(u),
        HodographSign::Minus => x + two * u * t - f(u),
    };
    let (lo, hi) = search;
    let n = F::from(SCAN).unwrap();
    let mut brackets = Vec::new();
    let mut a = lo;
    let mut ga = g(a);
    for i in 1..=SCAN {
        let b = lo + (hi - lo) * F::from(i).unwrap() / n;
        let gb = g(b);
        if ga == F::zero() {
            brackets.push((a, a));
        } else if ga * gb < F::zero() {
            brackets.push((a, b));
        }
        a = b;
        ga = gb;
    }
    if ga == F::zero() {
        brackets.push((a, a));
    }
    let to64 = |v: F| v.to_f64().unwrap_or(f64::NAN);
    match brackets.as_slice() {
        [] => Err(HodographError::NoBracket { lo: to64(lo), hi: to64(hi) }),
        [(a, b)] => Ok(refine(&g, *a, *b)),
        many => Err(HodographError::Multivalued { roots: many.len(), lo: to64(lo), hi: to64(hi) }),
    }
}

/// Secant steps safeguarded by bisection on a sign-changing bracket.
fn refine<F: Float>(g: &impl Fn(F) -> F, mut a: F, mut b: F) -> F {
    if a == b {
        return a;
    }
    let two = F::one() + F::one();
    let mut ga = g(a);
    let mut gb = g(b);
    for _ in 0..200 {
        let secant = b - gb * (b - a) / (gb - ga);
        let mid = (a + b) / two;
        let c = if secant > a.min(b) && secant < a.max(b) { secant } else { mid };
        let gc = g(c);
        if gc == F::zero() {
            return c;
        }
        if ga * gc < F::zero() {
            b = c;
            gb = gc;
        } else {
            a = c;
            ga = gc;
        }
        // Bisect as well so that one-sided secant convergence cannot stall.
        let m = (a + b) / two;
        let gm = g(m);
        if gm == F::zero() {
            return m;
        }
        if ga * gm < F::zero() {
            b = m;
            gb = gm;
        } else {
            a = m;
            ga = gm;
        }
        if (b - a).abs() <= F::epsilon() * (a.abs() + b.abs() + F::min_positive_value()) {
            break;
        }
    }
    if ga.abs() < gb.abs() {
        a
    } else {
        b
    }
}
