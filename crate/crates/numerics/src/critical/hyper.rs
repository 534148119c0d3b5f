use thiserror::Error;

use super::ode::{combined_ode_residual, linear_ode_residual, Residual};
use crate::{lit, Real};

#[derive(Clone, Debug, Error, PartialEq)]
pub enum HyperError {
    #[error("0F2 parameters must be positive, got ({alpha}, {beta})")]
    NonPositive { alpha: f64, beta: f64 },
}

/// Rising factorial `(a)_n`, with `(a)_0 = 1`.
pub fn pochhammer<F: Real>(a: F, n: usize) -> F {
    (0..n).fold(F::one(), |p, k| p * (a + F::from(k).unwrap()))
}

/// `0F2([alpha, beta], z) = sum z^n / ((alpha)_n (beta)_n n!)`.
///
/// Summation stops once the term ratio has dropped below one half (so the
/// tail is at most twice the next term) and the next term is below
/// `1e-15` of the partial sum.
pub fn hyper0f2<F: Real>(alpha: F, beta: F, z: F) -> Result<F, HyperError> {
    if !(alpha > F::zero() && beta > F::zero()) {
        return Err(HyperError::NonPositive {
            alpha: alpha.to_f64().unwrap_or(f64::NAN),
            beta: beta.to_f64().unwrap_or(f64::NAN),
        });
    }
    let tol = lit::<F>(1e-15).max(F::epsilon() / lit(4.0));
    let half = lit::<F>(0.5);
    let mut term = F::one();
    let mut sum = F::one();
    for n in 0..100_000usize {
        let nf = F::from(n).unwrap();
        let ratio = z / ((alpha + nf) * (beta + nf) * (nf + F::one()));
        term = term * ratio;
        sum = sum + term;
        if ratio.abs() < half && term.abs() <= tol * sum.abs() {
            break;
        }
    }
    Ok(sum)
}

/// One of the three claimed basis solutions `s^m 0F2([a, b], s^4/64)`,
/// `s = X + T`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BasisTerm {
    pub power: u32,
    pub alpha: f64,
    pub beta: f64,
}

impl BasisTerm {
    pub fn label(&self) -> String {
        format!("(X+T)^{} 0F2([{}, {}], (X+T)^4/64)", self.power, self.alpha, self.beta)
    }

    /// `[w, w_s, w_ss, w_sss]` by termwise differentiation of
    /// `sum_n s^(4n+m) / ((a)_n (b)_n n! 64^n)`.
    pub fn jet<F: Real>(&self, s: F) -> [F; 4] {
        let (a, b): (F, F) = (lit(self.alpha), lit(self.beta));
        let m = self.power as i64;
        let mut out = [F::zero(); 4];
        let mut coeff = F::one();
        let tol = lit::<F>(1e-17);
        for n in 0..400i64 {
            if n > 0 {
                let nf = F::from(n - 1).unwrap();
                coeff = coeff / ((a + nf) * (b + nf) * (nf + F::one()) * lit(64.0));
            }
            let e = 4 * n + m;
            let mut contrib = [F::zero(); 4];
            for (d, slot) in contrib.iter_mut().enumerate() {
                let d = d as i64;
                if e - d < 0 {
                    continue;
                }
                let falling = (0..d).fold(1i64, |p, j| p * (e - j));
                *slot = coeff * F::from(falling).unwrap() * s.powi((e - d) as i32);
            }
            for (o, c) in out.iter_mut().zip(contrib) {
                *o = *o + c;
            }
            let small = contrib.iter().zip(&out).all(|(c, o)| c.abs() <= tol * o.abs() || *c == F::zero());
            if n > 2 && small {
                break;
            }
        }
        out
    }
}

pub fn general_solution_basis() -> [BasisTerm; 3] {
    [
        BasisTerm { power: 0, alpha: 0.5, beta: 0.75 },
        BasisTerm { power: 1, alpha: 0.75, beta: 1.25 },
        BasisTerm { power: 2, alpha: 1.25, beta: 1.5 },
    ]
}

/// Which third-order equation a basis function is tested against.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Reading {
    /// `w_XXX - T w_X = X w`.
    Stated,
    /// `w_XXX = (X + T) w`.
    Combined,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GeneralSolutionRow {
    pub basis: String,
    pub reading: Reading,
    pub max_relative: f64,
    pub max_absolute: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GeneralSolutionAudit {
    pub half_width: f64,
    pub samples: usize,
    pub rows: Vec<GeneralSolutionRow>,
}

impl GeneralSolutionAudit {
    pub fn row(&self, basis: usize, reading: Reading) -> Option<&GeneralSolutionRow> {
        self.rows.iter().filter(|r| r.reading == reading).nth(basis)
    }
}

/// Measures every claimed basis solution, and the zero function, against
/// both readings on a `samples x samples` grid of `[-h, h]^2`.
pub fn audit_general_solution(half_width: f64, samples: usize) -> GeneralSolutionAudit {
    let grid: Vec<f64> = (0..samples)
        .map(|i| -half_width + 2.0 * half_width * i as f64 / (samples - 1) as f64)
        .collect();
    let measure = |w: &dyn Fn(f64, f64) -> [f64; 4], reading: Reading| {
        let mut rel: f64 = 0.0;
        let mut abs: f64 = 0.0;
        for &x in &grid {
            for &t in &grid {
                let r: Residual<f64> = match reading {
                    Reading::Stated => linear_ode_residual(w, x, t),
                    Reading::Combined => combined_ode_residual(w, x, t),
                };
                rel = rel.max(r.relative());
                abs = abs.max(r.absolute);
            }
        }
        (rel, abs)
    };
    let mut rows = Vec::new();
    for reading in [Reading::Stated, Reading::Combined] {
        for term in general_solution_basis() {
            let w = move |x: f64, t: f64| {
                let j = term.jet(x + t);
                [j[0], j[1], j[2], j[3]]
            };
            let (max_relative, max_absolute) = measure(&w, reading);
            rows.push(GeneralSolutionRow { basis: term.label(), reading, max_relative, max_absolute });
        }
        let (max_relative, max_absolute) = measure(&|_, _| [0.0; 4], reading);
        rows.push(GeneralSolutionRow { basis: "0".to_string(), reading, max_relative, max_absolute });
    }
    GeneralSolutionAudit { half_width, samples, rows }
}
