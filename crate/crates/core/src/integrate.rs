//! Formal integration: inverting `d_x` on total derivatives and `d/du` on
//! coefficient expressions.

use crate::coeff::{CoeffExpr, SymMonomial};
use crate::diffpoly::DiffPoly;
use crate::error::{AlgebraError, Result};
use crate::jet::JetMonomial;
use crate::symbol::{FuncSymbol, Rule, SymbolKind};
use crate::Rational;

const MAX_STEPS: usize = 256;

/// Finds `q` with `d_x q = p`, with zero integration constant.
pub fn integrate_x(p: &DiffPoly) -> Result<DiffPoly> {
    let mut rest = p.clone();
    let mut acc = DiffPoly::zero();
    for _ in 0..MAX_STEPS {
        if rest.is_zero() {
            return Ok(acc);
        }
        let n = rest.order();
        if n == 0 {
            return Err(AlgebraError::NotTotalDerivative(rest.to_string()));
        }
        let mut a = DiffPoly::zero();
        for (m, c) in rest.terms() {
            match m.exp(n) {
                0 => {}
                1 => a.add_term(m.div_var(n).unwrap(), c.clone()),
                _ => return Err(AlgebraError::NotTotalDerivative(rest.to_string())),
            }
        }
        let q = if n >= 2 {
            let mut q = DiffPoly::zero();
            for (m, c) in a.terms() {
                let e = m.exp(n - 1);
                q.add_term(m.times_var(n - 1, 1), c.scale(&Rational::new(1.into(), (e as i64 + 1).into())));
            }
            q
        } else {
            if a.terms().any(|(m, _)| !m.is_one()) {
                return Err(AlgebraError::NotTotalDerivative(rest.to_string()));
            }
            DiffPoly::constant(integrate_u(&a.coeff(&JetMonomial::one()))?)
        };
        rest = &rest - &q.dx();
        acc.add_assign_ref(&q);
    }
    Err(AlgebraError::NotTotalDerivative(p.to_string()))
}

/// Finds an antiderivative in `u` of a coefficient expression, when one
/// exists in closed polynomial form.
pub fn integrate_u(c: &CoeffExpr) -> Result<CoeffExpr> {
    let mut rest = c.clone();
    let mut acc = CoeffExpr::zero();
    for _ in 0..MAX_STEPS {
        if rest.is_zero() {
            return Ok(acc);
        }
        let top = rest.symbols().into_iter().filter(FuncSymbol::is_free).max_by(|a, b| {
            a.deriv_order().cmp(&b.deriv_order()).then_with(|| a.base().cmp(b.base()))
        });
        let q = match top {
            Some(s) if s.deriv_order() >= 1 => {
                let lower = FuncSymbol::free_deriv(s.base(), s.deriv_order() - 1);
                let mut q = CoeffExpr::zero();
                for (m, r) in rest.terms() {
                    match m.power_of(&s) {
                        0 => {}
                        1 => {
                            let rem = m.without_one(&s).unwrap();
                            let e = rem.power_of(&lower);
                            let nm = rem.mul(&SymMonomial::from_symbol(lower.clone(), 1));
                            q.add_term(nm, r / Rational::from_integer((e as i64 + 1).into()));
                        }
                        _ => return Err(AlgebraError::NoAntiderivative(c.to_string())),
                    }
                }
                q
            }
            Some(_) => return Err(AlgebraError::NoAntiderivative(c.to_string())),
            None => integrate_elementary(&rest).ok_or_else(|| AlgebraError::NoAntiderivative(c.to_string()))?,
        };
        rest = &rest - &q.du();
        acc.add_assign_ref(&q);
    }
    Err(AlgebraError::NoAntiderivative(c.to_string()))
}

/// Antiderivative of a Laurent polynomial in `u` with constant symbols.
fn integrate_elementary(c: &CoeffExpr) -> Option<CoeffExpr> {
    let id = FuncSymbol::id();
    let inv = FuncSymbol::inv();
    let mut out = CoeffExpr::zero();
    for (m, r) in c.terms() {
        if m.factors().iter().any(|(s, _)| !matches!(s.kind(), SymbolKind::Defined(_))) {
            return None;
        }
        let consts = m.without_all(&id).without_all(&inv);
        debug_assert!(consts.factors().iter().all(|(s, _)| s.kind() == SymbolKind::Defined(Rule::Constant)));
        let (pi, pv) = (m.power_of(&id), m.power_of(&inv));
        if pv == 1 {
            return None;
        }
        let (mono, k) = if pv >= 2 {
            (SymMonomial::from_symbol(inv.clone(), pv - 1), -Rational::new(1.into(), ((pv - 1) as i64).into()))
        } else {
            (SymMonomial::from_symbol(id.clone(), pi + 1), Rational::new(1.into(), ((pi + 1) as i64).into()))
        };
        out.add_term(mono.mul(&consts), r * k);
    }
    Some(out)
}
