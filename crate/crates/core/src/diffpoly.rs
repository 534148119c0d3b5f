//! Differential polynomials: finite maps from jet monomials to coefficient
//! expressions in functions of `u`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::coeff::CoeffExpr;
use crate::jet::{rank_compare, JetMonomial};
use crate::Rational;

#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DiffPoly {
    terms: BTreeMap<JetMonomial, CoeffExpr>,
}

impl DiffPoly {
    pub fn zero() -> Self {
        DiffPoly { terms: BTreeMap::new() }
    }

    pub fn constant(c: CoeffExpr) -> Self {
        Self::term(JetMonomial::one(), c)
    }

    pub fn term(m: JetMonomial, c: CoeffExpr) -> Self {
        let mut p = Self::zero();
        p.add_term(m, c);
        p
    }

    /// `u` itself (the identity coefficient, degree 0).
    pub fn u() -> Self {
        Self::constant(CoeffExpr::id())
    }

    /// The jet variable `u_(k)`; `k = 0` gives `u`.
    pub fn var(k: usize) -> Self {
        if k == 0 {
            return Self::u();
        }
        Self::term(JetMonomial::var(k), CoeffExpr::one())
    }

    pub fn terms(&self) -> impl Iterator<Item = (&JetMonomial, &CoeffExpr)> {
        self.terms.iter()
    }

    /// Terms ordered from the highest to the lowest rank.
    pub fn ranked_terms(&self) -> Vec<(&JetMonomial, &CoeffExpr)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| rank_compare(b.0, a.0));
        v
    }

    pub fn coeff(&self, m: &JetMonomial) -> CoeffExpr {
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

    pub fn add_term(&mut self, m: JetMonomial, c: CoeffExpr) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                e.get_mut().add_assign_ref(&c);
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add_assign_ref(&mut self, other: &DiffPoly) {
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c.clone());
        }
    }

    pub fn add_scaled(&mut self, other: &DiffPoly, k: &Rational) {
        if k.is_zero() {
            return;
        }
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c.scale(k));
        }
    }

    pub fn scale(&self, k: &Rational) -> DiffPoly {
        let mut out = Self::zero();
        out.add_scaled(self, k);
        out
    }

    /// Multiplication by a coefficient expression.
    pub fn scale_by(&self, c: &CoeffExpr) -> DiffPoly {
        let mut out = Self::zero();
        for (m, d) in &self.terms {
            out.add_term(m.clone(), d * c);
        }
        out
    }

    pub fn mul_monomial(&self, m: &JetMonomial) -> DiffPoly {
        DiffPoly { terms: self.terms.iter().map(|(n, c)| (n.mul(m), c.clone())).collect() }
    }

    pub fn pow(&self, n: u32) -> DiffPoly {
        let mut acc = Self::constant(CoeffExpr::one());
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// The common degree of all terms, or `None` if mixed. Zero is
    /// homogeneous of every degree and reports `None`.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut it = self.terms.keys().map(JetMonomial::degree);
        let d = it.next()?;
        it.all(|e| e == d).then_some(d)
    }

    pub fn is_homogeneous_of(&self, d: u32) -> bool {
        self.terms.keys().all(|m| m.degree() == d)
    }

    /// Highest jet order appearing.
    pub fn order(&self) -> usize {
        self.terms.keys().map(JetMonomial::order).max().unwrap_or(0)
    }

    /// Total x-derivative.
    pub fn dx(&self) -> DiffPoly {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let dc = c.du();
            if !dc.is_zero() {
                out.add_term(m.times_var(1, 1), dc);
            }
            for k in 1..=m.order() {
                let e = m.exp(k);
                if e == 0 {
                    continue;
                }
                let nm = m.div_var(k).unwrap().times_var(k + 1, 1);
                out.add_term(nm, c.scale(&Rational::from_integer(e.into())));
            }
        }
        out
    }

    pub fn dx_n(&self, n: usize) -> DiffPoly {
        let mut p = self.clone();
        for _ in 0..n {
            p = p.dx();
        }
        p
    }

    /// Formal partial derivative with respect to `u_(j)`; `j = 0` means `u`.
    pub fn partial(&self, j: usize) -> DiffPoly {
        let mut out = Self::zero();
        if j == 0 {
            for (m, c) in &self.terms {
                out.add_term(m.clone(), c.du());
            }
            return out;
        }
        for (m, c) in &self.terms {
            let e = m.exp(j);
            if e == 0 {
                continue;
            }
            out.add_term(m.div_var(j).unwrap(), c.scale(&Rational::from_integer(e.into())));
        }
        out
    }

    /// Applies a map to every coefficient.
    pub fn map_coeffs<F: FnMut(&CoeffExpr) -> CoeffExpr>(&self, mut f: F) -> DiffPoly {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(c));
        }
        out
    }

    pub fn substitute_symbol(&self, base: &str, expr: &CoeffExpr) -> DiffPoly {
        self.map_coeffs(|c| c.substitute(base, expr))
    }

    /// Keeps the terms whose monomial satisfies `keep`.
    pub fn filter<F: Fn(&JetMonomial) -> bool>(&self, keep: F) -> DiffPoly {
        DiffPoly { terms: self.terms.iter().filter(|(m, _)| keep(m)).map(|(m, c)| (m.clone(), c.clone())).collect() }
    }

    pub fn canonical(&self) -> DiffPoly {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            out.add_term(JetMonomial::new(m.exponents().to_vec()), c.canonical());
        }
        out
    }
}

impl Add for &DiffPoly {
    type Output = DiffPoly;
    fn add(self, rhs: &DiffPoly) -> DiffPoly {
        let mut out = self.clone();
        out.add_assign_ref(rhs);
        out
    }
}

impl Sub for &DiffPoly {
    type Output = DiffPoly;
    fn sub(self, rhs: &DiffPoly) -> DiffPoly {
        let mut out = self.clone();
        out.add_scaled(rhs, &-Rational::one());
        out
    }
}

impl Neg for &DiffPoly {
    type Output = DiffPoly;
    fn neg(self) -> DiffPoly {
        self.scale(&-Rational::one())
    }
}

impl Mul for &DiffPoly {
    type Output = DiffPoly;
    fn mul(self, rhs: &DiffPoly) -> DiffPoly {
        let mut out = DiffPoly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

impl fmt::Display for DiffPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.ranked_terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let single = c.len() == 1;
            match (m.is_one(), single) {
                (true, _) => write!(f, "{c}")?,
                (false, true) if c.as_rational().is_some_and(|r| r.is_one()) => write!(f, "{m}")?,
                (false, true) => write!(f, "{c} {m}")?,
                (false, false) => write!(f, "({c}) {m}")?,
            }
        }
        Ok(())
    }
}
