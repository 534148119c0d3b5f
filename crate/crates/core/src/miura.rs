//! Miura transformations of currents: single steps `v = u + eps^k d_x beta(u)`,
//! general invertible eps-series changes of variable, and the reduction of a
//! current to normal form.

use std::fmt;

use num_traits::{One, Zero};

use crate::coeff::CoeffExpr;
use crate::current::EpsCurrent;
use crate::diffpoly::DiffPoly;
use crate::error::{AlgebraError, Result};
use crate::integrate::integrate_x;
use crate::jet::JetMonomial;
use crate::symbol::{Rule, SymbolKind};
use crate::Rational;

/// One step `u -> v = u + eps^k d_x beta(u, u_x, ...)` with `deg beta = k - 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MiuraStep {
    order: usize,
    beta: DiffPoly,
}

impl MiuraStep {
    pub fn new(order: usize, beta: DiffPoly) -> Result<Self> {
        if order < 2 {
            return Err(AlgebraError::InvalidStep(format!("step order {order} is below 2")));
        }
        if !beta.is_homogeneous_of(order as u32 - 1) {
            return Err(AlgebraError::NonHomogeneous { order, expected: order as i64 - 1 });
        }
        Ok(MiuraStep { order, beta })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn beta(&self) -> &DiffPoly {
        &self.beta
    }

    /// `eps^k beta` as a weight -1 series truncated at `order`.
    fn generator(&self, order: usize) -> EpsCurrent {
        let mut h = EpsCurrent::zero(order, -1);
        if self.order <= order {
            h.set_comp(self.order, self.beta.clone()).unwrap();
        }
        h
    }

    /// The new variable as a series in the old one, `v = u + eps^k d_x beta(u)`.
    pub fn forward(&self, order: usize) -> GeneralMiura {
        let id = EpsCurrent::leading(DiffPoly::u(), order).unwrap();
        GeneralMiura { series: id.add(&self.generator(order).dx()) }
    }
}

impl fmt::Display for MiuraStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "k = {}: beta = {}", self.order, self.beta)
    }
}

/// Steps applied in turn, with strictly increasing orders.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct MiuraSeq {
    steps: Vec<MiuraStep>,
    order: usize,
}

impl MiuraSeq {
    pub fn new(order: usize) -> Self {
        MiuraSeq { steps: Vec::new(), order }
    }

    pub fn from_steps(steps: Vec<MiuraStep>, order: usize) -> Result<Self> {
        let mut seq = MiuraSeq::new(order);
        for s in steps {
            seq.push(s)?;
        }
        Ok(seq)
    }

    pub fn push(&mut self, step: MiuraStep) -> Result<()> {
        if let Some(last) = self.steps.last() {
            if step.order <= last.order {
                return Err(AlgebraError::InvalidStep(format!(
                    "step order {} does not exceed the previous order {}",
                    step.order, last.order
                )));
            }
        }
        if step.order > self.order {
            return Err(AlgebraError::InvalidStep(format!(
                "step order {} exceeds the truncation {}",
                step.order, self.order
            )));
        }
        self.steps.push(step);
        Ok(())
    }

    pub fn steps(&self) -> &[MiuraStep] {
        &self.steps
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Applies every step to `omega`, first step first.
    pub fn apply(&self, omega: &EpsCurrent) -> Result<EpsCurrent> {
        let mut cur = omega.truncate(self.order);
        for s in &self.steps {
            cur = apply_miura(&cur, s, self.order)?;
        }
        Ok(cur)
    }

    /// The final variable as a series in the original one.
    pub fn forward(&self) -> Result<GeneralMiura> {
        let mut total = GeneralMiura::identity(self.order);
        for s in &self.steps {
            total = s.forward(self.order).compose(&total)?;
        }
        Ok(total)
    }

    /// The original variable as a series in the final one, ready for
    /// [`change_variable`].
    pub fn to_general(&self) -> Result<GeneralMiura> {
        invert_general(&self.forward()?, self.order)
    }
}

impl fmt::Display for MiuraSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.steps.is_empty() {
            return write!(f, "(identity)");
        }
        for (i, s) in self.steps.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

/// An eps-series `u = sum_k eps^k F_k(v, v_x, ...)` with `deg F_k = k` and
/// leading term `F_0 = c v` for a nonzero rational `c`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneralMiura {
    series: EpsCurrent,
}

impl GeneralMiura {
    pub fn new(series: EpsCurrent) -> Result<Self> {
        if series.weight() != 0 {
            return Err(AlgebraError::Precondition("a change of variable has weight 0".into()));
        }
        let gm = GeneralMiura { series };
        gm.leading_scale()?;
        Ok(gm)
    }

    pub fn identity(order: usize) -> Self {
        GeneralMiura { series: EpsCurrent::leading(DiffPoly::u(), order).unwrap() }
    }

    pub fn series(&self) -> &EpsCurrent {
        &self.series
    }

    pub fn order(&self) -> usize {
        self.series.order()
    }

    /// The constant `c` in `F_0 = c v`.
    pub fn leading_scale(&self) -> Result<Rational> {
        let f0 = self.series.comp(0);
        let c = f0.coeff(&JetMonomial::one());
        let ok = f0.len() == 1 && c.len() == 1;
        if ok {
            let (m, r) = c.terms().next().unwrap();
            if m.factors() == [(crate::FuncSymbol::id(), 1)] && !r.is_zero() {
                return Ok(r.clone());
            }
        }
        Err(AlgebraError::NonInvertible(format!("leading term {f0} is not a nonzero multiple of the variable")))
    }

    /// `self o inner`: the series obtained by substituting `inner` for the
    /// variable of `self`.
    pub fn compose(&self, inner: &GeneralMiura) -> Result<GeneralMiura> {
        let order = self.order().min(inner.order());
        let c = inner.leading_scale()?;
        let (_, shift) = split_leading(&inner.series, &c, order)?;
        let outer = rescale(&self.series.truncate(order), &c)?;
        Ok(GeneralMiura { series: outer.compose_shift(&shift.scale(&c.recip()), order) })
    }
}

impl fmt::Display for GeneralMiura {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.series)
    }
}

/// Splits `c v + delta(v)` into `c v` and `delta`.
fn split_leading(series: &EpsCurrent, c: &Rational, order: usize) -> Result<(EpsCurrent, EpsCurrent)> {
    let lead = EpsCurrent::leading(DiffPoly::u().scale(c), order)?;
    let rest = series.truncate(order).sub(&lead);
    Ok((lead, rest))
}

/// `series(c v)`: jets scale by `c`, `id` by `c`, `1/u` by `1/c`.
fn rescale(series: &EpsCurrent, c: &Rational) -> Result<EpsCurrent> {
    if c.is_one() {
        return Ok(series.clone());
    }
    let mut failure = None;
    let out = series.map(|p| {
        let mut q = DiffPoly::zero();
        for (m, coeff) in p.terms() {
            let mapped = coeff.map_symbols(|s| match s.kind() {
                SymbolKind::Defined(Rule::Identity) => Some(CoeffExpr::id().scale(c)),
                SymbolKind::Defined(Rule::Reciprocal) => Some(CoeffExpr::inv().scale(&c.recip())),
                SymbolKind::Defined(Rule::Constant) => None,
                SymbolKind::Free => {
                    failure = Some(s.to_string());
                    None
                }
            });
            q.add_term(m.clone(), mapped.scale(&pow_rat(c, m.total_power())));
        }
        q
    });
    match failure {
        Some(s) => Err(AlgebraError::NonInvertible(format!("cannot rescale the argument of the free function {s}"))),
        None => Ok(out),
    }
}

fn pow_rat(c: &Rational, n: u32) -> Rational {
    (0..n).fold(Rational::one(), |acc, _| acc * c)
}

/// Formal inverse: from `u = F(v)` returns `v = G(u)`, through `order`.
pub fn invert_general(gm: &GeneralMiura, order: usize) -> Result<GeneralMiura> {
    if gm.order() < order {
        return Err(AlgebraError::TruncationExceeded { requested: order, available: gm.order() });
    }
    let c = gm.leading_scale()?;
    let cinv = c.recip();
    let (_, delta) = split_leading(&gm.series, &c, order)?;
    // v = u/c + gamma, gamma = -delta(u/c + gamma)/c = -delta_hat(u + c gamma)/c.
    let delta_hat = rescale(&delta, &cinv)?;
    let mut gamma = EpsCurrent::zero(order, 0);
    for _ in 0..order {
        let next = delta_hat.compose_shift(&gamma.scale(&c), order).scale(&-cinv.clone());
        if next == gamma {
            break;
        }
        gamma = next;
    }
    let lead = EpsCurrent::leading(DiffPoly::u().scale(&cinv), order)?;
    Ok(GeneralMiura { series: lead.add(&gamma) })
}

/// Effect of a step on a current with `omega_0 = u^2`: returns the current of
/// the equation satisfied by `v = u + eps^k d_x beta(u)`, truncated at `order`.
pub fn apply_miura(omega: &EpsCurrent, step: &MiuraStep, order: usize) -> Result<EpsCurrent> {
    if order < step.order {
        return Err(AlgebraError::InvalidStep(format!(
            "truncation {order} is below the step order {}",
            step.order
        )));
    }
    if omega.order() < order {
        return Err(AlgebraError::TruncationExceeded { requested: order, available: omega.order() });
    }
    let omega = omega.truncate(order);
    let h = step.generator(order);
    let transformed = omega.add(&h.variation(&omega.dx()));
    // u = v + gamma(v) with gamma = -eps^k d_x beta(v + gamma).
    let dbeta = h.dx();
    let mut gamma = EpsCurrent::zero(order, 0);
    for _ in 0..=(order / step.order) {
        gamma = dbeta.compose_shift(&gamma, order).scale(&-Rational::one());
    }
    Ok(transformed.compose_shift(&gamma, order))
}

/// Current of the equation for `v`, where `u = F(v)` is given by `gm` and
/// `u_t = d_x omega(u)`. The inverse `v = G(u)` must have the form
/// `c u + d_x H(u)`.
pub fn change_variable(omega: &EpsCurrent, gm: &GeneralMiura, order: usize) -> Result<EpsCurrent> {
    if omega.order() < order {
        return Err(AlgebraError::TruncationExceeded { requested: order, available: omega.order() });
    }
    let omega = omega.truncate(order);
    let g = invert_general(gm, order)?;
    let cg = g.leading_scale()?;
    let mut h = EpsCurrent::zero(order, -1);
    for k in 1..=order {
        h.set_comp(k, integrate_x(g.series.comp(k))?)?;
    }
    let in_u = omega.scale(&cg).add(&h.variation(&omega.dx()));
    let cf = gm.leading_scale()?;
    let (_, delta) = split_leading(&gm.series, &cf, order)?;
    let scaled = rescale(&in_u, &cf)?;
    Ok(scaled.compose_shift(&delta.scale(&cf.recip()), order))
}

fn binomial(n: usize, k: usize) -> Rational {
    let mut r = Rational::one();
    for i in 0..k {
        r = r * Rational::from_integer((n - i).into()) / Rational::from_integer((i + 1).into());
    }
    r
}

/// The order-`k` change `sum_{s>=1} beta_{v_(s)} sum_{l=1}^{s} C(s+1,l) v_(l) v_(s+1-l)`
/// produced by a step with generator `beta` on a current led by `v^2`.
pub fn step_linear_part(beta: &DiffPoly) -> DiffPoly {
    bilinear_sum(beta, 1, 1)
}

/// The residual operator `sum_{s>=3} beta_{v_(s)} sum_{l=2}^{s-1} C(s+1,l) v_(l) v_(s+1-l)`.
pub fn delta_operator(beta: &DiffPoly) -> DiffPoly {
    bilinear_sum(beta, 3, 2)
}

/// `tilde beta = 2 v_x beta_{v_x} + sum_{s>=2} 2(s+1) v_(s) beta_{v_(s)}`, so
/// that `step_linear_part(beta) = v_x tilde beta + delta_operator(beta)`.
///
/// At `s = 1` the two end terms `l = 1` and `l = s` of the inner sum are the
/// same single term `C(2,1) v_x^2`, hence the factor 2 instead of 4.
pub fn tilde_beta(beta: &DiffPoly) -> DiffPoly {
    let mut out = DiffPoly::zero();
    for s in 1..=beta.order() {
        let part = &beta.partial(s) * &DiffPoly::var(s);
        let factor = if s == 1 { 2 } else { 2 * (s as i64 + 1) };
        out.add_scaled(&part, &Rational::from_integer(factor.into()));
    }
    out
}

fn bilinear_sum(beta: &DiffPoly, s_min: usize, l_min: usize) -> DiffPoly {
    let mut out = DiffPoly::zero();
    for s in s_min..=beta.order() {
        let part = beta.partial(s);
        if part.is_zero() {
            continue;
        }
        let mut quad = DiffPoly::zero();
        for l in l_min..=(s + 1 - l_min) {
            quad.add_scaled(&(&DiffPoly::var(l) * &DiffPoly::var(s + 1 - l)), &binomial(s + 1, l));
        }
        out.add_assign_ref(&(&part * &quad));
    }
    out
}

/// `true` when no component of order `>= 2` depends on `v_x`.
pub fn is_normal(omega: &EpsCurrent) -> bool {
    omega.comps().iter().skip(2).all(|c| c.partial(1).is_zero())
}

/// Reduces `omega = u^2 + eps a(u) u_x + ...` to normal form through `order`,
/// returning the reduced current and the steps used.
pub fn normal_form(omega: &EpsCurrent, order: usize) -> Result<(EpsCurrent, MiuraSeq)> {
    if omega.comp(0) != &DiffPoly::u().pow(2) {
        return Err(AlgebraError::Precondition(format!("leading term {} is not u^2", omega.comp(0))));
    }
    if omega.order() < order {
        return Err(AlgebraError::TruncationExceeded { requested: order, available: omega.order() });
    }
    let mut cur = omega.truncate(order);
    let mut seq = MiuraSeq::new(order);
    for k in 2..=order {
        let mut residual = cur.comp(k).clone();
        let mut beta = DiffPoly::zero();
        for m in JetMonomial::all_of_degree(k as u32 - 1) {
            let target = m.times_var(1, 1);
            let e = residual.coeff(&target);
            if e.is_zero() {
                continue;
            }
            let image = step_linear_part(&DiffPoly::term(m.clone(), CoeffExpr::one()));
            let ck = image.coeff(&target).as_rational().filter(|r| !r.is_zero()).ok_or_else(|| {
                AlgebraError::UnsolvableRank(format!("no pivot for {target} at order {k}"))
            })?;
            let b = e.scale(&-ck.recip());
            residual.add_assign_ref(&image.scale_by(&b));
            beta.add_term(m, b);
        }
        if let Some((m, _)) = residual.terms().find(|(m, _)| m.divisible_by_ux()) {
            return Err(AlgebraError::UnsolvableRank(format!("term {m} survives at order {k}")));
        }
        if beta.is_zero() {
            continue;
        }
        let step = MiuraStep::new(k, beta)?;
        cur = apply_miura(&cur, &step, order)?;
        debug_assert_eq!(cur.comp(k), &residual);
        seq.push(step)?;
    }
    Ok((cur, seq))
}
