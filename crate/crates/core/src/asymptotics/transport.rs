use std::collections::BTreeMap;
use std::fmt;

use num_traits::Float;

use super::qexpr::{eval_current, flux, from_hodograph, hodograph_jet, QExpr, QMonomial, QSeries};
use crate::classify::{classify, specialize_deformation};
use crate::coeff::CoeffExpr;
use crate::current::EpsCurrent;
use crate::diffpoly::DiffPoly;
use crate::error::{AlgebraError, Result};
use crate::hierarchy::{burgers_current, viscous_ch_current};
use crate::symbol::FuncSymbol;
use crate::{rat, Rational};

fn r(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

fn series_of(terms: &[QExpr], order: usize) -> QSeries {
    let mut s = QSeries::zero(order);
    for (i, t) in terms.iter().enumerate().take(order) {
        s.set_comp(i + 1, t.clone());
    }
    s
}

/// Right-hand side `F_n(u, u_x)` of the n-th transport equation
/// `L* v^n = F_n`, with `n = previous.len() + 1` and `previous` holding
/// `v^1, ..., v^{n-1}` in `(u, u_x)` form. Components of `current` beyond
/// its order count as zero, so exact currents such as `u^2 + eps u_x` may be
/// given at their own length.
pub fn transport_rhs(current: &EpsCurrent, previous: &[QExpr]) -> Result<QExpr> {
    if current.comp(0) != &DiffPoly::u().pow(2) {
        return Err(AlgebraError::Precondition("the leading flux must be u^2".into()));
    }
    let n = previous.len() + 1;
    let omega = eval_current(current, &series_of(previous, n))?;
    omega.comp(n).dx_hodograph()
}

/// `int phi^s (ln phi)^k dphi` without constant term.
fn integrate_power_log(s: i32, k: u32) -> QExpr {
    if s == -1 {
        return QExpr::term(QMonomial::new(vec![0], k + 1), CoeffExpr::from_rational(rat(1, k as i64 + 1)));
    }
    let inv = rat(1, (s + 1) as i64);
    let mut out = QExpr::term(QMonomial::new(vec![s + 1], k), CoeffExpr::from_rational(inv.clone()));
    if k > 0 {
        let rest = integrate_power_log(s, k - 1).scale(&(inv * r(k as i64)));
        out = &out - &rest;
    }
    out
}

/// The quadrature `p_n = int^{u_x} F_n(u, phi) / (2 phi^3) dphi`, with the
/// lower limit absorbed into the homogeneous solution.
pub fn transport_quadrature(rhs: &QExpr) -> Result<QExpr> {
    if !rhs.is_first_order() {
        return Err(AlgebraError::Precondition(format!("transport right-hand side is not in (u, u_x) form: {rhs}")));
    }
    let mut p = QExpr::zero();
    for (m, c) in rhs.terms() {
        let half = c.scale(&rat(1, 2));
        p.add_assign_ref(&integrate_power_log(m.exp(1) - 3, m.log_power()).scale_by(&half));
    }
    Ok(p)
}

/// `v^n = p_n u_x + g_n(u) u_x` for the given homogeneous part `g_n`.
pub fn transport_solve(rhs: &QExpr, g: &CoeffExpr) -> Result<QExpr> {
    let p = transport_quadrature(rhs)?;
    Ok((&p + &QExpr::constant(g.clone())).times_ux(1))
}

/// `L* v = v_t - d_x(2 u v)` on a hodograph solution.
pub fn adjoint_hopf(v: &QExpr) -> Result<QExpr> {
    let two_u = QExpr::constant(CoeffExpr::id().scale(&r(2)));
    Ok(&v.dt_hodograph()? - &(&two_u * v).dx_hodograph()?)
}

/// One term `eps^n v^n` of a quasi-Miura transformation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuasiMiuraTerm {
    pub order: usize,
    /// Particular integral `p_n` of the transport equation.
    pub p: QExpr,
    /// Homogeneous part `g_n(u)`.
    pub g: CoeffExpr,
    /// `v^n` in terms of `u`, `u_x` and the flux derivatives.
    pub hodograph_form: QExpr,
    /// `v^n` as a rational expression in the jets, flux eliminated.
    pub jet_form: QExpr,
}

/// Quasi-Miura terms `v^1, ..., v^order` with `g_n = 0`.
pub fn quasi_miura(current: &EpsCurrent, order: usize) -> Result<Vec<QuasiMiuraTerm>> {
    quasi_miura_with(current, order, |_, _| Ok(CoeffExpr::zero()))
}

/// Quasi-Miura terms with the homogeneous parts chosen by `g(n, p_n)`.
pub fn quasi_miura_with(
    current: &EpsCurrent,
    order: usize,
    mut g: impl FnMut(usize, &QExpr) -> Result<CoeffExpr>,
) -> Result<Vec<QuasiMiuraTerm>> {
    let mut terms: Vec<QuasiMiuraTerm> = Vec::with_capacity(order);
    let mut previous: Vec<QExpr> = Vec::with_capacity(order);
    for n in 1..=order {
        let rhs = transport_rhs(current, &previous)?;
        let p = transport_quadrature(&rhs)?;
        let gn = g(n, &p)?;
        let v = (&p + &QExpr::constant(gn.clone())).times_ux(1);
        previous.push(v.clone());
        terms.push(QuasiMiuraTerm { order: n, p, g: gn, jet_form: from_hodograph(&v), hodograph_form: v });
    }
    Ok(terms)
}

/// `u + sum eps^n v^n` minus `u`, as a series in `(u, u_x)` form.
pub fn quasi_miura_series(terms: &[QuasiMiuraTerm]) -> QSeries {
    let hv: Vec<QExpr> = terms.iter().map(|t| t.hodograph_form.clone()).collect();
    series_of(&hv, terms.len())
}

/// `v_t - d_x omega(v)` for `v = u + delta` and `u` a hodograph solution.
pub fn formal_solution_residual(current: &EpsCurrent, delta: &QSeries) -> Result<QSeries> {
    let mut vt = delta.dt_hodograph()?;
    let ut = QExpr::constant(CoeffExpr::id().scale(&r(2))).times_ux(1);
    let mut c0 = vt.comp(0).clone();
    c0.add_assign_ref(&ut);
    vt.set_comp(0, c0);
    Ok(vt.sub(&eval_current(current, delta)?.dx_hodograph()?))
}

/// The coefficient table `alpha_{n,n+j}` of the Burgers transport
/// solutions `v^n = sum_j alpha_{n,n+j} u_x^{n+j}` (with `g_n = 0`),
/// computed by the closed recursion in the flux derivatives.
/// Row `n - 1` holds `alpha_{n,n+1}, ..., alpha_{n,3n-1}`.
pub fn burgers_alpha(order: usize) -> Vec<Vec<CoeffExpr>> {
    let mut table: Vec<Vec<CoeffExpr>> = Vec::with_capacity(order);
    if order == 0 {
        return table;
    }
    table.push(vec![flux(2).scale(&rat(1, 2))]);
    // alpha(i, m) with the convention that entries outside the table vanish.
    let alpha = |t: &Vec<Vec<CoeffExpr>>, i: usize, m: i64| -> CoeffExpr {
        let j = m - i as i64;
        if i == 0 || i > t.len() || j < 1 || j > 2 * i as i64 - 1 {
            CoeffExpr::zero()
        } else {
            t[i - 1][(j - 1) as usize].clone()
        }
    };
    let f2 = flux(2);
    let f3 = flux(3);
    for n in 2..=order {
        let ni = n as i64;
        let lambda = |t: &Vec<Vec<CoeffExpr>>, k: i64| -> CoeffExpr {
            let mut s = CoeffExpr::zero();
            for i in 1..n {
                for j in 1..=(2 * i as i64 - 1) {
                    s.add_assign_ref(&(&alpha(t, i, i as i64 + j) * &alpha(t, n - i, ni + k - i as i64 - j)));
                }
            }
            s
        };
        let omega = |t: &Vec<Vec<CoeffExpr>>, j: i64| -> CoeffExpr {
            let a = alpha(t, n - 1, ni + j - 1);
            &(&f2 * &a.du()).scale(&r(2 * ni + 2 * j - 1)) + &(&f3 * &a).scale(&r(ni + j - 1))
        };
        let mut row = Vec::with_capacity(2 * n - 1);
        for j in 1..=(2 * ni - 1) {
            let m = ni + j;
            let mut s = alpha(&table, n - 1, m - 1).du_n(2);
            s.add_assign_ref(&lambda(&table, j).du());
            s.add_assign_ref(&(&f2 * &lambda(&table, j - 1)).scale(&r(m - 1)));
            s.add_assign_ref(&omega(&table, j - 1));
            s.add_assign_ref(&(&(&f2 * &f2) * &alpha(&table, n - 1, m - 3)).scale(&r((m - 3) * (m - 1))));
            row.push(s.scale(&rat(1, 2 * (m - 1))));
        }
        table.push(row);
    }
    table
}

/// `sum_j alpha_{n,n+j} u_x^{n+j}` for row `n` of a table.
pub fn alpha_row_expr(n: usize, row: &[CoeffExpr]) -> QExpr {
    let mut e = QExpr::zero();
    for (j, c) in row.iter().enumerate() {
        e.add_term(QMonomial::new(vec![(n + j + 1) as i32], 0), c.clone());
    }
    e
}

/// `g_n(u) = -p_n(u, -1/f'(u))` as a sum of `c(u) f'^p (ln|f'|)^q`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DatumCorrection {
    terms: BTreeMap<(i32, u32), CoeffExpr>,
}

impl DatumCorrection {
    pub fn terms(&self) -> impl Iterator<Item = (&(i32, u32), &CoeffExpr)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add(&mut self, key: (i32, u32), c: CoeffExpr) {
        let slot = self.terms.entry(key).or_default();
        slot.add_assign_ref(&c);
        if slot.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn coeff(&self, fp_power: i32, log_power: u32) -> CoeffExpr {
        self.terms.get(&(fp_power, log_power)).cloned().unwrap_or_default()
    }

    /// Derivative in `u`.
    pub fn du(&self) -> DatumCorrection {
        let mut out = DatumCorrection::default();
        for (&(p, q), c) in &self.terms {
            out.add((p, q), c.du());
            if p != 0 {
                out.add((p - 1, q), (&flux(2) * c).scale(&r(p as i64)));
            }
            if q > 0 {
                out.add((p - 1, q - 1), (&flux(2) * c).scale(&r(q as i64)));
            }
        }
        out
    }

    pub fn eval<F: Float>(&self, sym: impl Fn(&FuncSymbol) -> F) -> F {
        let fp = sym(&FuncSymbol::free_deriv(crate::classify::FLUX, 1));
        let mut acc = F::zero();
        for (&(p, q), c) in &self.terms {
            acc = acc + c.eval(&sym) * fp.powi(p) * fp.abs().ln().powi(q as i32);
        }
        acc
    }
}

impl fmt::Display for DatumCorrection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(&(p, q), c)| {
                let mut s = format!("({c})");
                if p != 0 {
                    s.push_str(&format!(" f'^({p})"));
                }
                if q > 0 {
                    s.push_str(&format!(" ln|f'|^{q}"));
                }
                s
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Homogeneous part that makes `v^n(x, 0) = 0` for the datum
/// `x + f(u_0) = 0`, where `u_0x = -1/f'(u_0)`.
pub fn initial_datum_fix(p: &QExpr) -> Result<DatumCorrection> {
    if !p.is_first_order() {
        return Err(AlgebraError::Precondition(format!("p_n is not in (u, u_x) form: {p}")));
    }
    let mut out = DatumCorrection::default();
    for (m, c) in p.terms() {
        // u_x^k (ln|u_x|)^l  ->  (-1)^k f'^(-k) (-ln|f'|)^l, negated.
        let k = m.exp(1);
        let l = m.log_power();
        let sign = if (k.rem_euclid(2) + l as i32) % 2 == 0 { -1 } else { 1 };
        out.add((-k, l), c.scale(&r(sign)));
    }
    Ok(out)
}

/// Central invariant of the deformed hodograph check.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InvariantMode {
    /// `a(u) = 1`: the Burgers equation.
    Constant,
    /// `a(u) = u`: the viscous Camassa-Holm normal form.
    Linear,
}

/// Residuals of the deformed hodograph formula `x + 2vt + omega_f(v) + F = 0`
/// along the quasi-Miura solution `v` built on `x + 2ut + f(u) = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HodographResidual {
    pub order: usize,
    /// `1 + 2 v_x t + d_x(omega_f + F)`.
    pub differentiated: QSeries,
    /// `x + 2 v t + omega_f + F`.
    pub integrated: QSeries,
}

/// The hodograph correction `F = eps/2 ln v_x - eps^2 v v_xx^2 / (12 v_x^3)`
/// for `a(u) = u`, evaluated at `v = u + delta`.
pub fn linear_hodograph_correction(delta: &QSeries) -> Result<QSeries> {
    let n = delta.order();
    let mut ux = QSeries::zero(n);
    ux.set_comp(0, QExpr::jet(1));
    let dv = delta.dx_hodograph()?;
    let z = dv.map(|e| e.times_ux(-1));
    let mut ln_vx = QSeries::log1p(&z)?;
    ln_vx.set_comp(0, &ln_vx.comp(0).clone() + &QExpr::log_ux());
    let inv_cube = QSeries::binomial(&z, &r(-3))?.map(|e| e.times_ux(-3));
    let mut vxx = dv.dx_hodograph()?;
    vxx.set_comp(0, &vxx.comp(0).clone() + &hodograph_jet(2));
    let mut v = delta.clone();
    v.set_comp(0, &v.comp(0).clone() + &QExpr::constant(CoeffExpr::id()));
    let second = v.mul(&vxx.pow(2)).mul(&inv_cube).scale(&rat(-1, 12));
    Ok(ln_vx.scale(&rat(1, 2)).shift(1).add(&second.shift(2)))
}

pub fn deformed_hodograph_residual(mode: InvariantMode, order: usize) -> Result<HodographResidual> {
    let (current, a) = match mode {
        InvariantMode::Constant => (burgers_current(1), CoeffExpr::one()),
        InvariantMode::Linear => {
            if order > 2 {
                return Err(AlgebraError::TruncationExceeded { requested: order, available: 2 });
            }
            (viscous_ch_current(order), CoeffExpr::id())
        }
    };
    let classified = classify(order + 1)?;
    let omega_f = specialize_deformation(&classified, &a, order)?;
    let terms = quasi_miura(&current, order)?;
    let delta = quasi_miura_series(&terms);
    let mut lhs = eval_current(&omega_f, &delta)?;
    if mode == InvariantMode::Linear {
        lhs = lhs.add(&linear_hodograph_correction(&delta)?);
    }
    // On the hodograph solution x = -2ut - f(u) and 2t = -1/u_x - f'(u).
    let two_t = &(-&QExpr::ux_pow(-1)) - &QExpr::constant(flux(1));
    let mut integrated = lhs.add(&delta.map(|e| e * &two_t));
    integrated.set_comp(0, &integrated.comp(0).clone() - &QExpr::constant(flux(0)));
    let mut differentiated = lhs.dx_hodograph()?;
    let mut vx = delta.dx_hodograph()?;
    vx.set_comp(0, &vx.comp(0).clone() + &QExpr::jet(1));
    differentiated = differentiated.add(&vx.map(|e| e * &two_t));
    differentiated.set_comp(0, &differentiated.comp(0).clone() + &QExpr::one());
    Ok(HodographResidual { order, differentiated, integrated })
}
