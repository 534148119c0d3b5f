//! Generators for the Burgers, negative and viscous Camassa-Holm families,
//! and application of the recursion operators built from `d_x`, `d_x^{-1}`,
//! multiplication and `(1 - eps d_x)^{+-1}`.

use std::fmt;

use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::coeff::CoeffExpr;
use crate::current::EpsCurrent;
use crate::diffpoly::DiffPoly;
use crate::error::{AlgebraError, Result};
use crate::integrate::integrate_x;
use crate::symbol::FuncSymbol;
use crate::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Burgers,
    Negative,
    #[serde(rename = "viscousCH")]
    ViscousCh,
}

/// A member of one of the hierarchies.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HierarchyFlow {
    pub family: Family,
    pub index: usize,
    pub current: EpsCurrent,
    /// `true` when the current is a polynomial in eps (no truncation).
    pub exact: bool,
}

/// Sign in front of `eps d_x` in the negative-family generator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum NegativeSign {
    /// `(1/u - eps d_x 1/u)^n (1)`.
    #[default]
    Minus,
    /// `(1/u + eps d_x 1/u)^n (1)`.
    Plus,
}

/// `(u + eps d_x)^n u`, exact with truncation order `n`.
pub fn burgers_current(n: usize) -> EpsCurrent {
    let u = EpsCurrent::leading(DiffPoly::u(), n).unwrap();
    let mut w = u.clone();
    for _ in 0..n {
        w = u.mul(&w).add(&w.eps_dx());
    }
    w
}

/// `(1/u - eps d_x 1/u)^n (1)`, exact with truncation order `n`.
pub fn negative_current(n: usize) -> EpsCurrent {
    negative_current_signed(n, NegativeSign::Minus)
}

pub fn negative_current_signed(n: usize, sign: NegativeSign) -> EpsCurrent {
    let inv = EpsCurrent::leading(DiffPoly::constant(CoeffExpr::inv()), n).unwrap();
    let s = match sign {
        NegativeSign::Minus => -Rational::one(),
        NegativeSign::Plus => Rational::one(),
    };
    let mut w = EpsCurrent::leading(DiffPoly::constant(CoeffExpr::one()), n).unwrap();
    for _ in 0..n {
        let p = inv.mul(&w);
        w = p.add(&p.eps_dx().scale(&s));
    }
    w
}

/// `sum_{k=0}^{K} eps^k u u_(k)`.
pub fn viscous_ch_current(order: usize) -> EpsCurrent {
    let comps = (0..=order).map(|k| &DiffPoly::u() * &DiffPoly::var(k)).collect();
    EpsCurrent::new(comps).unwrap()
}

pub fn flow(family: Family, index: usize, order: usize) -> HierarchyFlow {
    match family {
        Family::Burgers => HierarchyFlow { family, index, current: burgers_current(index), exact: true },
        Family::Negative => HierarchyFlow { family, index, current: negative_current(index), exact: true },
        Family::ViscousCh => HierarchyFlow { family, index, current: viscous_ch_current(order), exact: false },
    }
}

/// Primitive factor of a pseudo-differential operator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Factor {
    Dx,
    /// `d_x^{-1}`, adding the named integration constant when the result has
    /// weight 0 (so a constant is homogeneous there).
    DxInv { constant: Option<String> },
    Mul(CoeffExpr),
    OneMinusEpsDx,
    /// `(1 - eps d_x)^{-1} = sum eps^k d_x^k`, truncated at the working order.
    OneMinusEpsDxInv,
}

/// Composition of factors, written left to right as in operator notation:
/// the rightmost factor acts first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PseudoOp {
    pub factors: Vec<Factor>,
}

impl PseudoOp {
    /// `R = d_x u (1 - eps d_x)^{-1} d_x^{-1}`.
    pub fn recursion(constant: &str) -> Self {
        PseudoOp {
            factors: vec![
                Factor::Dx,
                Factor::Mul(CoeffExpr::id()),
                Factor::OneMinusEpsDxInv,
                Factor::DxInv { constant: Some(constant.to_string()) },
            ],
        }
    }

    /// `R^{-1} = d_x (1 - eps d_x) (1/u) d_x^{-1}`.
    pub fn inverse_recursion(constant: &str) -> Self {
        PseudoOp {
            factors: vec![
                Factor::Dx,
                Factor::OneMinusEpsDx,
                Factor::Mul(CoeffExpr::inv()),
                Factor::DxInv { constant: Some(constant.to_string()) },
            ],
        }
    }

    /// The composition `self o other`.
    pub fn compose(&self, other: &PseudoOp) -> PseudoOp {
        let mut factors = self.factors.clone();
        factors.extend(other.factors.iter().cloned());
        PseudoOp { factors }
    }
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Factor::Dx => write!(f, "d_x"),
            Factor::DxInv { .. } => write!(f, "d_x^-1"),
            Factor::Mul(c) => write!(f, "({c})"),
            Factor::OneMinusEpsDx => write!(f, "(1 - eps d_x)"),
            Factor::OneMinusEpsDxInv => write!(f, "(1 - eps d_x)^-1"),
        }
    }
}

/// Applies `op` to `flow`, truncating at `order`.
pub fn apply_pseudo(op: &PseudoOp, flow: &EpsCurrent, order: usize) -> Result<EpsCurrent> {
    if flow.order() < order {
        return Err(AlgebraError::TruncationExceeded { requested: order, available: flow.order() });
    }
    let mut w = flow.truncate(order);
    for factor in op.factors.iter().rev() {
        w = match factor {
            Factor::Dx => w.dx(),
            Factor::Mul(c) => w.scale_by(c),
            Factor::OneMinusEpsDx => w.sub(&w.eps_dx()),
            Factor::OneMinusEpsDxInv => {
                let mut acc = w.clone();
                let mut t = w.clone();
                for _ in 0..order {
                    t = t.eps_dx();
                    acc = acc.add(&t);
                }
                acc
            }
            Factor::DxInv { constant } => {
                let mut comps = Vec::with_capacity(order + 1);
                for c in w.comps() {
                    comps.push(integrate_x(c)?);
                }
                let weight = w.weight() - 1;
                if weight == 0 {
                    if let Some(name) = constant {
                        comps[0].add_term(crate::JetMonomial::one(), CoeffExpr::symbol(FuncSymbol::constant(name)));
                    }
                }
                EpsCurrent::with_weight(comps, weight)?
            }
        };
    }
    Ok(w)
}

/// `w^2/2 + sum_{k=0}^{K} eps^k d_x^k (w^2/2)`: the current of
/// `w_t - eps w_xt = d_x(w^2 - eps w w_x)` written in evolutionary form.
pub fn viscous_ch_evolutionary_current(order: usize) -> EpsCurrent {
    let half = DiffPoly::u().pow(2).scale(&Rational::new(1.into(), 2.into()));
    let mut comps = Vec::with_capacity(order + 1);
    let mut d = half.clone();
    comps.push(half.scale(&Rational::from_integer(2.into())));
    for _ in 1..=order {
        d = d.dx();
        comps.push(d.clone());
    }
    EpsCurrent::new(comps).unwrap()
}

/// Residuals of the two readings of the Miura map between the evolutionary
/// current of `w_t - eps w_xt = d_x(w^2 - eps w w_x)` and the normal form
/// `sum eps^k u u_(k)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MiuraDirectionAudit {
    pub order: usize,
    /// Transformed current minus the normal form, for `u = w - eps w_x`.
    pub stated: EpsCurrent,
    /// The same for `u = w + eps w_x`, i.e. `w = u - eps u_x`.
    pub reversed: EpsCurrent,
}

impl MiuraDirectionAudit {
    pub fn stated_holds(&self) -> bool {
        self.stated.is_zero()
    }

    pub fn reversed_holds(&self) -> bool {
        self.reversed.is_zero()
    }
}

pub fn audit_viscous_ch_miura(order: usize) -> Result<MiuraDirectionAudit> {
    use crate::miura::{change_variable, GeneralMiura};
    let omega = viscous_ch_evolutionary_current(order);
    let target = viscous_ch_current(order);
    // u = w - eps w_x means w = sum eps^k u_(k).
    let stated_map = GeneralMiura::new(EpsCurrent::new((0..=order).map(DiffPoly::var).collect())?)?;
    let mut rev = vec![DiffPoly::u(), DiffPoly::var(1).scale(&-Rational::one())];
    rev.resize(order + 1, DiffPoly::zero());
    let reversed_map = GeneralMiura::new(EpsCurrent::new(rev)?.truncate(order))?;
    Ok(MiuraDirectionAudit {
        order,
        stated: change_variable(&omega, &stated_map, order)?.sub(&target),
        reversed: change_variable(&omega, &reversed_map, order)?.sub(&target),
    })
}
