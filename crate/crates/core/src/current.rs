//! Truncated epsilon-series of differential polynomials (currents, 1-forms)
//! and the Poisson bracket on them.

use std::fmt;

use num_traits::One;

use crate::bracket::bracket_poly;
use crate::coeff::CoeffExpr;
use crate::diffpoly::DiffPoly;
use crate::error::{AlgebraError, Result};
use crate::Rational;

/// `sum_{k=0}^{K} eps^k omega_k` with `deg omega_k = k + weight`.
///
/// Currents have weight 0. Brackets of currents and evolution vector fields
/// `u_t = d_x omega` have weight 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EpsCurrent {
    comps: Vec<DiffPoly>,
    weight: i32,
}

impl EpsCurrent {
    /// Builds a weight-0 current, checking homogeneity.
    pub fn new(comps: Vec<DiffPoly>) -> Result<Self> {
        Self::with_weight(comps, 0)
    }

    pub fn with_weight(comps: Vec<DiffPoly>, weight: i32) -> Result<Self> {
        assert!(!comps.is_empty(), "a current has at least the order-0 component");
        for (k, c) in comps.iter().enumerate() {
            let d = k as i64 + weight as i64;
            if c.terms().any(|(m, _)| m.degree() as i64 != d) {
                return Err(AlgebraError::NonHomogeneous { order: k, expected: d });
            }
        }
        Ok(EpsCurrent { comps, weight })
    }

    pub fn zero(order: usize, weight: i32) -> Self {
        EpsCurrent { comps: vec![DiffPoly::zero(); order + 1], weight }
    }

    /// The current `p` at order 0, truncated at `order`.
    pub fn leading(p: DiffPoly, order: usize) -> Result<Self> {
        let mut comps = vec![DiffPoly::zero(); order + 1];
        comps[0] = p;
        Self::new(comps)
    }

    /// Truncation order `K`.
    pub fn order(&self) -> usize {
        self.comps.len() - 1
    }

    pub fn weight(&self) -> i32 {
        self.weight
    }

    pub fn comps(&self) -> &[DiffPoly] {
        &self.comps
    }

    pub fn comp(&self, k: usize) -> &DiffPoly {
        &self.comps[k]
    }

    /// Component `k`, or zero when `k` exceeds the truncation.
    pub fn comp_or_zero(&self, k: usize) -> DiffPoly {
        self.comps.get(k).cloned().unwrap_or_default()
    }

    pub fn set_comp(&mut self, k: usize, p: DiffPoly) -> Result<()> {
        let d = k as i64 + self.weight as i64;
        if p.terms().any(|(m, _)| m.degree() as i64 != d) {
            return Err(AlgebraError::NonHomogeneous { order: k, expected: d });
        }
        self.comps[k] = p;
        Ok(())
    }

    pub fn truncate(&self, order: usize) -> EpsCurrent {
        let mut comps: Vec<DiffPoly> = self.comps.iter().take(order + 1).cloned().collect();
        while comps.len() < order + 1 {
            comps.push(DiffPoly::zero());
        }
        EpsCurrent { comps, weight: self.weight }
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(DiffPoly::is_zero)
    }

    /// Lowest order with a nonzero component.
    pub fn first_nonzero(&self) -> Option<usize> {
        self.comps.iter().position(|c| !c.is_zero())
    }

    pub fn add(&self, other: &EpsCurrent) -> EpsCurrent {
        assert_eq!(self.weight, other.weight, "adding series of different weight");
        let k = self.order().min(other.order());
        let comps = (0..=k).map(|i| &self.comps[i] + &other.comps[i]).collect();
        EpsCurrent { comps, weight: self.weight }
    }

    pub fn sub(&self, other: &EpsCurrent) -> EpsCurrent {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, r: &Rational) -> EpsCurrent {
        EpsCurrent { comps: self.comps.iter().map(|c| c.scale(r)).collect(), weight: self.weight }
    }

    pub fn scale_by(&self, c: &CoeffExpr) -> EpsCurrent {
        EpsCurrent { comps: self.comps.iter().map(|p| p.scale_by(c)).collect(), weight: self.weight }
    }

    /// Cauchy product truncated at the smaller order.
    pub fn mul(&self, other: &EpsCurrent) -> EpsCurrent {
        let k = self.order().min(other.order());
        let mut comps = vec![DiffPoly::zero(); k + 1];
        for i in 0..=k {
            if self.comps[i].is_zero() {
                continue;
            }
            for j in 0..=(k - i) {
                if other.comps[j].is_zero() {
                    continue;
                }
                comps[i + j].add_assign_ref(&(&self.comps[i] * &other.comps[j]));
            }
        }
        EpsCurrent { comps, weight: self.weight + other.weight }
    }

    /// Total x-derivative of every component (raises the weight by one).
    pub fn dx(&self) -> EpsCurrent {
        EpsCurrent { comps: self.comps.iter().map(DiffPoly::dx).collect(), weight: self.weight + 1 }
    }

    /// `eps * d_x`: shifts components up one order (weight preserved).
    pub fn eps_dx(&self) -> EpsCurrent {
        let mut comps = vec![DiffPoly::zero()];
        comps.extend(self.comps[..self.order()].iter().map(DiffPoly::dx));
        EpsCurrent { comps, weight: self.weight }
    }

    /// Multiplication by `eps^s`, keeping the truncation order.
    pub fn shift(&self, s: usize) -> EpsCurrent {
        let mut comps = vec![DiffPoly::zero(); self.order() + 1];
        for k in 0..=self.order() {
            if k + s <= self.order() {
                comps[k + s] = self.comps[k].clone();
            }
        }
        EpsCurrent { comps, weight: self.weight - s as i32 }
    }

    pub fn map<F: FnMut(&DiffPoly) -> DiffPoly>(&self, f: F) -> EpsCurrent {
        EpsCurrent { comps: self.comps.iter().map(f).collect(), weight: self.weight }
    }

    pub fn substitute_symbol(&self, base: &str, expr: &CoeffExpr) -> EpsCurrent {
        self.map(|p| p.substitute_symbol(base, expr))
    }

    /// Replaces the named constant symbol by `value`.
    pub fn substitute_constant(&self, name: &str, value: &CoeffExpr) -> EpsCurrent {
        self.map(|p| {
            p.map_coeffs(|c| {
                c.map_symbols(|s| {
                    (s.kind() == crate::SymbolKind::Defined(crate::Rule::Constant) && s.base() == name)
                        .then(|| value.clone())
                })
            })
        })
    }

    /// `sum_j (d_x^j delta) * d(self)/du_(j)`, the derivative of `self` along
    /// the variation `delta` (truncated at the smaller order).
    pub fn variation(&self, delta: &EpsCurrent) -> EpsCurrent {
        let k = self.order().min(delta.order());
        let max_j = self.comps.iter().map(DiffPoly::order).max().unwrap_or(0);
        let mut ddelta: Vec<Vec<DiffPoly>> = Vec::with_capacity(max_j + 1);
        ddelta.push(delta.comps.iter().take(k + 1).cloned().collect());
        for j in 1..=max_j {
            let next = ddelta[j - 1].iter().map(DiffPoly::dx).collect();
            ddelta.push(next);
        }
        let mut comps = vec![DiffPoly::zero(); k + 1];
        for b in 0..=k {
            let pb = &self.comps[b];
            if pb.is_zero() {
                continue;
            }
            for (j, dd) in ddelta.iter().enumerate().take(pb.order() + 1) {
                let part = pb.partial(j);
                if part.is_zero() {
                    continue;
                }
                for a in 0..=(k - b) {
                    if dd[a].is_zero() {
                        continue;
                    }
                    comps[a + b].add_assign_ref(&(&dd[a] * &part));
                }
            }
        }
        EpsCurrent { comps, weight: self.weight + delta.weight }
    }

    /// `self(u + delta)` by the Taylor series in `delta`, which must start at
    /// order 1 or higher. Truncated at `order`.
    pub fn compose_shift(&self, delta: &EpsCurrent, order: usize) -> EpsCurrent {
        assert!(delta.comps[0].is_zero(), "the variation must vanish at order 0");
        assert_eq!(delta.weight, 0, "the variation of u has weight 0");
        let delta = delta.truncate(order);
        let one = EpsCurrent::leading(DiffPoly::constant(CoeffExpr::one()), order).unwrap();
        // Powers of delta scaled by 1/n!, and powers of (u_(j) + d^j delta).
        let mut delta_pows = vec![one.clone()];
        let mut jet_pows: Vec<Vec<EpsCurrent>> = Vec::new();
        let mut out = EpsCurrent::zero(order, self.weight);
        for (b, pb) in self.comps.iter().enumerate().take(order + 1) {
            for (m, c) in pb.terms() {
                let mut taylor = EpsCurrent::zero(order, 0);
                let mut dc = c.clone();
                let mut n = 0usize;
                while !dc.is_zero() && n <= order - b {
                    while delta_pows.len() <= n {
                        let k = delta_pows.len();
                        let next = delta_pows[k - 1].mul(&delta).scale(&Rational::new(1.into(), (k as i64).into()));
                        delta_pows.push(next);
                    }
                    if delta_pows[n].is_zero() {
                        break;
                    }
                    taylor = taylor.add(&delta_pows[n].scale_by(&dc));
                    dc = dc.du();
                    n += 1;
                }
                let mut prod = taylor;
                for j in 1..=m.order() {
                    let e = m.exp(j) as usize;
                    if e == 0 {
                        continue;
                    }
                    while jet_pows.len() < j {
                        let jj = jet_pows.len() + 1;
                        let mut shifted = delta.clone();
                        for _ in 0..jj {
                            shifted = shifted.map(DiffPoly::dx);
                        }
                        shifted.comps[0] = DiffPoly::var(jj);
                        jet_pows.push(vec![one.clone(), shifted]);
                    }
                    while jet_pows[j - 1].len() <= e {
                        let next = jet_pows[j - 1].last().unwrap().mul(&jet_pows[j - 1][1]);
                        jet_pows[j - 1].push(next);
                    }
                    prod = prod.mul(&jet_pows[j - 1][e]);
                }
                for k in 0..=(order - b) {
                    out.comps[k + b].add_assign_ref(&prod.comps[k]);
                }
            }
        }
        out
    }

    pub fn canonical(&self) -> EpsCurrent {
        self.map(DiffPoly::canonical)
    }
}

impl fmt::Display for EpsCurrent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.comps.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "eps ({c})")?,
                _ => write!(f, "eps^{k} ({c})")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(eps^{})", self.order() + 1)
    }
}

/// Poisson bracket of two currents, truncated at `order`.
pub fn poisson_bracket(alpha: &EpsCurrent, beta: &EpsCurrent, order: usize) -> Result<EpsCurrent> {
    let available = alpha.order().min(beta.order());
    if order > available {
        return Err(AlgebraError::TruncationExceeded { requested: order, available });
    }
    let mut comps = vec![DiffPoly::zero(); order + 1];
    for (k, slot) in comps.iter_mut().enumerate() {
        for i in 0..=k {
            let (a, b) = (&alpha.comps[i], &beta.comps[k - i]);
            if a.is_zero() || b.is_zero() {
                continue;
            }
            slot.add_assign_ref(&bracket_poly(a, b));
        }
    }
    Ok(EpsCurrent { comps, weight: alpha.weight + beta.weight + 1 })
}

/// Outcome of an involution check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Involution {
    Pass,
    Fail { order: usize, residual: DiffPoly },
}

impl Involution {
    pub fn passed(&self) -> bool {
        matches!(self, Involution::Pass)
    }
}

/// Commutator `D_X Y - D_Y X` of the flows `u_t = d_x alpha` and
/// `u_s = d_x beta`, computed from Frechet derivatives without the bracket.
pub fn flow_commutator(alpha: &EpsCurrent, beta: &EpsCurrent, order: usize) -> Result<EpsCurrent> {
    let available = alpha.order().min(beta.order());
    if order > available {
        return Err(AlgebraError::TruncationExceeded { requested: order, available });
    }
    let x = alpha.truncate(order).dx();
    let y = beta.truncate(order).dx();
    Ok(y.variation(&x).sub(&x.variation(&y)))
}

pub fn involution_check(alpha: &EpsCurrent, beta: &EpsCurrent, order: usize) -> Result<Involution> {
    let br = poisson_bracket(alpha, beta, order)?;
    Ok(match br.first_nonzero() {
        None => Involution::Pass,
        Some(k) => Involution::Fail { order: k, residual: br.comp(k).clone() },
    })
}
