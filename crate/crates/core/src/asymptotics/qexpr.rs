//! Rational jet expressions with logarithms.
//!
//! A [`QExpr`] is a finite sum of `c(u) * u_x^m * u_xx^e2 * ... * (ln u_x)^l`
//! with `m` any integer and the other exponents nonnegative. Expressions that
//! involve only `u_x` and `ln u_x` are the `(u, u_x)` form used on hodograph
//! solutions; [`QExpr::dx_hodograph`] differentiates them along
//! `x + 2ut + f(u) = 0`, where `u_xx = f'' u_x^3`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{Float, One, Signed, Zero};

use crate::classify::FLUX;
use crate::coeff::{CoeffExpr, SymMonomial};
use crate::current::EpsCurrent;
use crate::diffpoly::DiffPoly;
use crate::error::{AlgebraError, Result};
use crate::jet::jet_name;
use crate::symbol::FuncSymbol;
use crate::Rational;

/// `u_x^{jets[0]} u_xx^{jets[1]} ... (ln u_x)^log`.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QMonomial {
    jets: Vec<i32>,
    log: u32,
}

impl QMonomial {
    pub fn new(mut jets: Vec<i32>, log: u32) -> Self {
        while jets.last() == Some(&0) {
            jets.pop();
        }
        debug_assert!(jets.iter().skip(1).all(|&e| e >= 0), "only u_x may carry a negative power");
        QMonomial { jets, log }
    }

    pub fn one() -> Self {
        Self::default()
    }

    /// Exponent of the k-th derivative `u_(k)`, `k >= 1`.
    pub fn exp(&self, k: usize) -> i32 {
        self.jets.get(k - 1).copied().unwrap_or(0)
    }

    pub fn log_power(&self) -> u32 {
        self.log
    }

    /// Highest derivative present (0 for a pure coefficient).
    pub fn order(&self) -> usize {
        self.jets.len()
    }

    fn mul(&self, other: &Self) -> Self {
        let n = self.jets.len().max(other.jets.len());
        let jets = (1..=n).map(|k| self.exp(k) + other.exp(k)).collect();
        QMonomial::new(jets, self.log + other.log)
    }

    fn with_exp(&self, k: usize, delta: i32) -> Self {
        let mut jets = self.jets.clone();
        if jets.len() < k {
            jets.resize(k, 0);
        }
        jets[k - 1] += delta;
        QMonomial::new(jets, self.log)
    }

    fn with_log(&self, log: u32) -> Self {
        QMonomial { jets: self.jets.clone(), log }
    }
}

impl fmt::Display for QMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for k in (1..=self.jets.len()).rev() {
            match self.exp(k) {
                0 => {}
                1 => parts.push(jet_name(k)),
                e if e < 0 => parts.push(format!("{}^({e})", jet_name(k))),
                e => parts.push(format!("{}^{e}", jet_name(k))),
            }
        }
        match self.log {
            0 => {}
            1 => parts.push("ln(u_x)".into()),
            l => parts.push(format!("ln(u_x)^{l}")),
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join(" "))
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct QExpr {
    terms: BTreeMap<QMonomial, CoeffExpr>,
}

impl QExpr {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(CoeffExpr::one())
    }

    pub fn constant(c: CoeffExpr) -> Self {
        Self::term(QMonomial::one(), c)
    }

    pub fn term(m: QMonomial, c: CoeffExpr) -> Self {
        let mut out = Self::zero();
        out.add_term(m, c);
        out
    }

    /// `u_x^p`.
    pub fn ux_pow(p: i32) -> Self {
        Self::term(QMonomial::new(vec![p], 0), CoeffExpr::one())
    }

    /// The k-th derivative `u_(k)`, `k >= 1`.
    pub fn jet(k: usize) -> Self {
        assert!(k >= 1, "u itself is a coefficient");
        Self::term(QMonomial::one().with_exp(k, 1), CoeffExpr::one())
    }

    /// `ln u_x`.
    pub fn log_ux() -> Self {
        Self::term(QMonomial::one().with_log(1), CoeffExpr::one())
    }

    pub fn from_diffpoly(p: &DiffPoly) -> Self {
        let mut out = Self::zero();
        for (m, c) in p.terms() {
            let jets = m.exponents().iter().map(|&e| e as i32).collect();
            out.add_term(QMonomial::new(jets, 0), c.clone());
        }
        out
    }

    pub fn terms(&self) -> impl Iterator<Item = (&QMonomial, &CoeffExpr)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &QMonomial) -> CoeffExpr {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, m: QMonomial, c: CoeffExpr) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(m).or_default();
        slot.add_assign_ref(&c);
        if slot.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn add_assign_ref(&mut self, other: &QExpr) {
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c.clone());
        }
    }

    pub fn scale(&self, r: &Rational) -> QExpr {
        if r.is_zero() {
            return Self::zero();
        }
        QExpr { terms: self.terms.iter().map(|(m, c)| (m.clone(), c.scale(r))).collect() }
    }

    pub fn scale_by(&self, c: &CoeffExpr) -> QExpr {
        let mut out = Self::zero();
        for (m, d) in &self.terms {
            out.add_term(m.clone(), d * c);
        }
        out
    }

    fn mul_monomial(&self, m: &QMonomial, c: &CoeffExpr) -> QExpr {
        let mut out = Self::zero();
        for (n, d) in &self.terms {
            out.add_term(n.mul(m), d * c);
        }
        out
    }

    /// Multiplies by `u_x^p`.
    pub fn times_ux(&self, p: i32) -> QExpr {
        self.mul_monomial(&QMonomial::new(vec![p], 0), &CoeffExpr::one())
    }

    pub fn pow(&self, n: u32) -> QExpr {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// True when only `u_x` and `ln u_x` occur.
    pub fn is_first_order(&self) -> bool {
        self.terms.keys().all(|m| m.order() <= 1)
    }

    pub fn order(&self) -> usize {
        self.terms.keys().map(QMonomial::order).max().unwrap_or(0)
    }

    pub fn has_log(&self) -> bool {
        self.terms.keys().any(|m| m.log > 0)
    }

    pub fn map_coeffs<F: FnMut(&CoeffExpr) -> CoeffExpr>(&self, mut f: F) -> QExpr {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(c));
        }
        out
    }

    pub fn substitute_symbol(&self, base: &str, expr: &CoeffExpr) -> QExpr {
        self.map_coeffs(|c| c.substitute(base, expr))
    }

    /// Replaces coefficient symbols by expressions: every symbol for which
    /// `map` returns `Some` is expanded into that expression.
    pub fn expand_symbols(&self, map: impl Fn(&FuncSymbol) -> Option<QExpr>) -> QExpr {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            for (sm, r) in c.terms() {
                let mut kept = Vec::new();
                let mut factor = QExpr::one();
                for (s, p) in sm.factors() {
                    match map(s) {
                        Some(q) => factor = &factor * &q.pow(*p),
                        None => kept.push((s.clone(), *p)),
                    }
                }
                let coeff = CoeffExpr::term(SymMonomial::from_factors(kept), r.clone());
                out.add_assign_ref(&factor.mul_monomial(m, &coeff));
            }
        }
        out
    }

    /// Explicit derivative in `u` (through the coefficients).
    pub fn partial_u(&self) -> QExpr {
        self.map_coeffs(CoeffExpr::du)
    }

    /// Partial derivative in `u_(k)`; for `k = 1` this includes `ln u_x`.
    pub fn partial_jet(&self, k: usize) -> QExpr {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let e = m.exp(k);
            if e != 0 {
                out.add_term(m.with_exp(k, -1), c.scale(&Rational::from_integer(e.into())));
            }
            if k == 1 && m.log > 0 {
                out.add_term(m.with_log(m.log - 1).with_exp(1, -1), c.scale(&Rational::from_integer(m.log.into())));
            }
        }
        out
    }

    /// Total x-derivative in the jet variables.
    pub fn dx(&self) -> QExpr {
        let mut out = self.partial_u().times_ux(1);
        for k in 1..=self.order() {
            out.add_assign_ref(&(&self.partial_jet(k) * &QExpr::jet(k + 1)));
        }
        out
    }

    pub fn dx_n(&self, n: usize) -> QExpr {
        let mut e = self.clone();
        for _ in 0..n {
            e = e.dx();
        }
        e
    }

    /// x-derivative along a hodograph solution, `u_x d_u + f'' u_x^3 d_{u_x}`.
    pub fn dx_hodograph(&self) -> Result<QExpr> {
        self.require_first_order()?;
        let mut out = self.partial_u().times_ux(1);
        out.add_assign_ref(&self.partial_jet(1).times_ux(3).scale_by(&flux(2)));
        Ok(out)
    }

    /// t-derivative along a solution of `u_t = 2 u u_x`:
    /// `2 u d_x + 2 u_x^2 d_{u_x}`.
    pub fn dt_hodograph(&self) -> Result<QExpr> {
        let mut out = self.dx_hodograph()?.scale_by(&CoeffExpr::id().scale(&Rational::from_integer(2.into())));
        out.add_assign_ref(&self.partial_jet(1).times_ux(2).scale(&Rational::from_integer(2.into())));
        Ok(out)
    }

    fn require_first_order(&self) -> Result<()> {
        if self.is_first_order() {
            Ok(())
        } else {
            Err(AlgebraError::Precondition(format!("expression is not in (u, u_x) form: {self}")))
        }
    }

    /// Numeric value; `sym` values coefficient symbols, `jets[k-1]` is `u_(k)`.
    pub fn eval<F: Float>(&self, sym: impl Fn(&FuncSymbol) -> F, jets: &[F]) -> F {
        let mut acc = F::zero();
        for (m, c) in &self.terms {
            let mut t = c.eval(&sym);
            for k in 1..=m.order() {
                let e = m.exp(k);
                if e != 0 {
                    t = t * jets[k - 1].powi(e);
                }
            }
            if m.log > 0 {
                t = t * jets[0].abs().ln().powi(m.log as i32);
            }
            acc = acc + t;
        }
        acc
    }
}

/// The flux derivative `f^(k)` as a coefficient.
pub fn flux(k: u32) -> CoeffExpr {
    CoeffExpr::free_deriv(FLUX, k)
}

impl Add for &QExpr {
    type Output = QExpr;
    fn add(self, rhs: &QExpr) -> QExpr {
        let mut out = self.clone();
        out.add_assign_ref(rhs);
        out
    }
}

impl Sub for &QExpr {
    type Output = QExpr;
    fn sub(self, rhs: &QExpr) -> QExpr {
        let mut out = self.clone();
        out.add_assign_ref(&-rhs);
        out
    }
}

impl Neg for &QExpr {
    type Output = QExpr;
    fn neg(self) -> QExpr {
        self.scale(&-Rational::one())
    }
}

impl Mul for &QExpr {
    type Output = QExpr;
    fn mul(self, rhs: &QExpr) -> QExpr {
        let mut out = QExpr::zero();
        for (m, c) in &rhs.terms {
            out.add_assign_ref(&self.mul_monomial(m, c));
        }
        out
    }
}

impl fmt::Display for QExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let single = c.len() == 1 && c.terms().next().is_some_and(|(sm, _)| sm.is_one());
            let (neg, body) = match c.as_rational() {
                Some(r) if single => (r.is_negative(), r.abs().to_string()),
                _ => (false, format!("({c})")),
            };
            if i > 0 {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            } else if neg {
                write!(f, "-")?;
            }
            match (body == "1", m.order() == 0 && m.log == 0) {
                (_, true) => write!(f, "{body}")?,
                (true, false) => write!(f, "{m}")?,
                (false, false) => write!(f, "{body} {m}")?,
            }
        }
        Ok(())
    }
}

/// A truncated series `sum_k eps^k c_k` with [`QExpr`] coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QSeries {
    comps: Vec<QExpr>,
}

impl QSeries {
    pub fn new(comps: Vec<QExpr>) -> Self {
        assert!(!comps.is_empty(), "a series keeps at least its eps^0 term");
        QSeries { comps }
    }

    pub fn zero(order: usize) -> Self {
        QSeries { comps: vec![QExpr::zero(); order + 1] }
    }

    pub fn constant(e: QExpr, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.comps[0] = e;
        s
    }

    pub fn order(&self) -> usize {
        self.comps.len() - 1
    }

    pub fn comps(&self) -> &[QExpr] {
        &self.comps
    }

    pub fn comp(&self, k: usize) -> &QExpr {
        &self.comps[k]
    }

    pub fn set_comp(&mut self, k: usize, e: QExpr) {
        self.comps[k] = e;
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(QExpr::is_zero)
    }

    pub fn first_nonzero(&self) -> Option<usize> {
        self.comps.iter().position(|c| !c.is_zero())
    }

    pub fn truncate(&self, order: usize) -> QSeries {
        let mut comps = self.comps.clone();
        comps.resize(order + 1, QExpr::zero());
        QSeries { comps }
    }

    pub fn add(&self, other: &QSeries) -> QSeries {
        let n = self.order().min(other.order());
        QSeries { comps: (0..=n).map(|k| &self.comps[k] + &other.comps[k]).collect() }
    }

    pub fn sub(&self, other: &QSeries) -> QSeries {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, r: &Rational) -> QSeries {
        QSeries { comps: self.comps.iter().map(|c| c.scale(r)).collect() }
    }

    pub fn map(&self, f: impl FnMut(&QExpr) -> QExpr) -> QSeries {
        QSeries { comps: self.comps.iter().map(f).collect() }
    }

    pub fn try_map(&self, f: impl FnMut(&QExpr) -> Result<QExpr>) -> Result<QSeries> {
        Ok(QSeries { comps: self.comps.iter().map(f).collect::<Result<_>>()? })
    }

    /// Multiplies by `eps^s`, keeping the order.
    pub fn shift(&self, s: usize) -> QSeries {
        let mut out = Self::zero(self.order());
        for k in s..=self.order() {
            out.comps[k] = self.comps[k - s].clone();
        }
        out
    }

    pub fn mul(&self, other: &QSeries) -> QSeries {
        let n = self.order().min(other.order());
        let mut out = Self::zero(n);
        for i in 0..=n {
            if self.comps[i].is_zero() {
                continue;
            }
            for j in 0..=n - i {
                out.comps[i + j].add_assign_ref(&(&self.comps[i] * &other.comps[j]));
            }
        }
        out
    }

    pub fn pow(&self, p: u32) -> QSeries {
        let mut acc = Self::constant(QExpr::one(), self.order());
        for _ in 0..p {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn dx_hodograph(&self) -> Result<QSeries> {
        self.try_map(QExpr::dx_hodograph)
    }

    pub fn dt_hodograph(&self) -> Result<QSeries> {
        self.try_map(QExpr::dt_hodograph)
    }

    pub fn dx(&self) -> QSeries {
        self.map(QExpr::dx)
    }

    fn require_small(&self) -> Result<()> {
        if self.comps[0].is_zero() {
            Ok(())
        } else {
            Err(AlgebraError::Precondition("series perturbation must vanish at eps^0".into()))
        }
    }

    /// `sum_k c_k z^k` for a series `z` without eps^0 term.
    fn power_sum(z: &QSeries, coeffs: impl Fn(usize) -> QExpr) -> Result<QSeries> {
        z.require_small()?;
        let n = z.order();
        let mut out = Self::zero(n);
        let mut zk = Self::constant(QExpr::one(), n);
        for k in 0..=n {
            let c = coeffs(k);
            if !c.is_zero() {
                out = out.add(&zk.map(|e| e * &c));
            }
            zk = zk.mul(z);
        }
        Ok(out)
    }

    /// `c(u + delta)` by Taylor expansion, for a coefficient `c(u)`.
    pub fn compose_coeff(c: &CoeffExpr, delta: &QSeries) -> Result<QSeries> {
        let mut fact = Rational::one();
        let derivs: Vec<QExpr> = (0..=delta.order())
            .map(|k| {
                if k > 0 {
                    fact *= Rational::from_integer(k.into());
                }
                QExpr::constant(c.du_n(k as u32).scale(&fact.recip()))
            })
            .collect();
        Self::power_sum(delta, |k| derivs[k].clone())
    }

    /// `(1 + z)^r` for rational `r`.
    pub fn binomial(z: &QSeries, r: &Rational) -> Result<QSeries> {
        let n = z.order();
        let mut cs = vec![Rational::one(); n + 1];
        for k in 1..=n {
            cs[k] = &cs[k - 1] * (r - Rational::from_integer((k - 1).into())) / Rational::from_integer(k.into());
        }
        Self::power_sum(z, |k| QExpr::constant(CoeffExpr::from_rational(cs[k].clone())))
    }

    /// `ln(1 + z)`.
    pub fn log1p(z: &QSeries) -> Result<QSeries> {
        Self::power_sum(z, |k| match k {
            0 => QExpr::zero(),
            k => {
                let s = if k % 2 == 1 { 1 } else { -1 };
                QExpr::constant(CoeffExpr::from_rational(Rational::new(s.into(), (k as i64).into())))
            }
        })
    }
}

impl fmt::Display for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut any = false;
        for (k, c) in self.comps.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if any {
                write!(f, " + ")?;
            }
            any = true;
            match k {
                0 => write!(f, "({c})")?,
                1 => write!(f, "eps ({c})")?,
                k => write!(f, "eps^{k} ({c})")?,
            }
        }
        if !any {
            write!(f, "0")?;
        }
        write!(f, " + O(eps^{})", self.order() + 1)
    }
}

/// The derivative `u_(k)` on a hodograph solution, in `(u, u_x)` form.
pub fn hodograph_jet(k: usize) -> QExpr {
    let mut e = QExpr::jet(1);
    for _ in 1..k {
        e = e.dx_hodograph().expect("hodograph jets stay first order");
    }
    e
}

/// Jets of the perturbed field `u + delta` on a hodograph solution:
/// entry `j - 1` is the series of `(u + delta)_(j)`.
fn perturbed_jets(delta: &QSeries, max: usize) -> Result<Vec<QSeries>> {
    let mut out = Vec::with_capacity(max);
    let mut d = delta.clone();
    for j in 1..=max {
        d = d.dx_hodograph()?;
        let mut s = d.clone();
        s.comps[0].add_assign_ref(&hodograph_jet(j));
        out.push(s);
    }
    Ok(out)
}

/// `omega(u + delta)` on a hodograph solution, where the eps-grading of
/// `omega` is merged with that of `delta`.
pub fn eval_current(omega: &EpsCurrent, delta: &QSeries) -> Result<QSeries> {
    let n = delta.order();
    let max = omega.comps().iter().take(n + 1).map(DiffPoly::order).max().unwrap_or(0);
    let jets = perturbed_jets(delta, max)?;
    let mut out = QSeries::zero(n);
    for (k, comp) in omega.comps().iter().enumerate().take(n + 1) {
        let mut acc = QSeries::zero(n);
        for (m, c) in comp.terms() {
            let mut t = QSeries::compose_coeff(c, delta)?;
            for j in 1..=m.order() {
                let e = m.exp(j);
                if e > 0 {
                    t = t.mul(&jets[j - 1].pow(e));
                }
            }
            acc = acc.add(&t);
        }
        out = out.add(&acc.shift(k));
    }
    Ok(out)
}

/// Forward elimination: every `u_(k)`, `k >= 2`, is replaced by its
/// hodograph value in terms of `u_x` and the flux derivatives.
pub fn to_hodograph(e: &QExpr) -> QExpr {
    let mut out = QExpr::zero();
    for (m, c) in e.terms() {
        let mut t = QExpr::term(QMonomial::new(vec![m.exp(1)], m.log), c.clone());
        for k in 2..=m.order() {
            let p = m.exp(k);
            if p > 0 {
                t = &t * &hodograph_jet(k).pow(p as u32);
            }
        }
        out.add_assign_ref(&t);
    }
    out
}

/// `f^(k)`, `k >= 2`, expressed through the jets of a hodograph solution.
pub fn flux_from_jets(k: u32) -> QExpr {
    assert!(k >= 2, "only f'' and higher derivatives are determined by the jets");
    let mut e = &QExpr::jet(2) * &QExpr::ux_pow(-3);
    for _ in 2..k {
        e = e.dx().times_ux(-1);
    }
    e
}

/// Reverse elimination: flux derivatives `f^(k)`, `k >= 2`, are replaced by
/// rational expressions in the jets.
pub fn from_hodograph(e: &QExpr) -> QExpr {
    e.expand_symbols(|s| (s.is_free() && s.base() == FLUX && s.deriv_order() >= 2).then(|| flux_from_jets(s.deriv_order())))
}
