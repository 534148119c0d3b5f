//! Exact coefficient expressions: rational linear combinations of products of
//! function symbols.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{Float, One, Signed, ToPrimitive, Zero};

use crate::symbol::{FuncSymbol, Rule, SymbolKind};
use crate::Rational;

/// A product of symbol powers, sorted by symbol, with `u * (1/u)` cancelled.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SymMonomial(Vec<(FuncSymbol, u32)>);

impl SymMonomial {
    pub fn one() -> Self {
        SymMonomial(Vec::new())
    }

    pub fn from_symbol(s: FuncSymbol, power: u32) -> Self {
        if power == 0 {
            return Self::one();
        }
        SymMonomial(vec![(s, power)])
    }

    /// Builds a monomial from arbitrary factors, merging repeats.
    pub fn from_factors<I: IntoIterator<Item = (FuncSymbol, u32)>>(factors: I) -> Self {
        let mut m = Self::one();
        for (s, p) in factors {
            m = m.mul(&Self::from_symbol(s, p));
        }
        m
    }

    pub fn factors(&self) -> &[(FuncSymbol, u32)] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn power_of(&self, s: &FuncSymbol) -> u32 {
        self.0.iter().find(|(t, _)| t == s).map_or(0, |(_, p)| *p)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out: Vec<(FuncSymbol, u32)> = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].0.cmp(&other.0[j].0) {
                std::cmp::Ordering::Less => {
                    out.push(self.0[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(other.0[j].clone());
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push((self.0[i].0.clone(), self.0[i].1 + other.0[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        let mut m = SymMonomial(out);
        m.cancel_reciprocals();
        m
    }

    fn cancel_reciprocals(&mut self) {
        let id = FuncSymbol::id();
        let inv = FuncSymbol::inv();
        let pi = self.power_of(&id);
        let pv = self.power_of(&inv);
        if pi == 0 || pv == 0 {
            return;
        }
        let k = pi.min(pv);
        for (s, p) in self.0.iter_mut() {
            if *s == id || *s == inv {
                *p -= k;
            }
        }
        self.0.retain(|(_, p)| *p > 0);
    }

    /// The monomial with one factor of `s` removed; `None` if absent.
    pub fn without_one(&self, s: &FuncSymbol) -> Option<Self> {
        let pos = self.0.iter().position(|(t, _)| t == s)?;
        let mut v = self.0.clone();
        if v[pos].1 == 1 {
            v.remove(pos);
        } else {
            v[pos].1 -= 1;
        }
        Some(SymMonomial(v))
    }

    /// The monomial with every factor of `s` removed.
    pub fn without_all(&self, s: &FuncSymbol) -> Self {
        SymMonomial(self.0.iter().filter(|(t, _)| t != s).cloned().collect())
    }
}

impl fmt::Display for SymMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (s, p) in &self.0 {
            if !first {
                write!(f, " ")?;
            }
            first = false;
            if *p == 1 {
                write!(f, "{s}")?;
            } else if s.deriv_order() > 0 && s.is_free() {
                write!(f, "({s})^{p}")?;
            } else {
                write!(f, "{s}^{p}")?;
            }
        }
        Ok(())
    }
}

/// A finite sum of rational multiples of symbol monomials, kept canonical.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CoeffExpr {
    terms: BTreeMap<SymMonomial, Rational>,
}

impl CoeffExpr {
    pub fn zero() -> Self {
        CoeffExpr { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::from_rational(Rational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(Rational::from_integer(n.into()))
    }

    pub fn from_rational(r: Rational) -> Self {
        let mut c = Self::zero();
        c.add_term(SymMonomial::one(), r);
        c
    }

    pub fn symbol(s: FuncSymbol) -> Self {
        Self::term(SymMonomial::from_symbol(s, 1), Rational::one())
    }

    pub fn free(base: &str) -> Self {
        Self::symbol(FuncSymbol::free(base))
    }

    pub fn free_deriv(base: &str, k: u32) -> Self {
        Self::symbol(FuncSymbol::free_deriv(base, k))
    }

    pub fn id() -> Self {
        Self::symbol(FuncSymbol::id())
    }

    pub fn inv() -> Self {
        Self::symbol(FuncSymbol::inv())
    }

    pub fn term(m: SymMonomial, r: Rational) -> Self {
        let mut c = Self::zero();
        c.add_term(m, r);
        c
    }

    pub fn terms(&self) -> impl Iterator<Item = (&SymMonomial, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// The rational value if the expression has no symbols.
    pub fn as_rational(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (m, r) = self.terms.iter().next().unwrap();
                m.is_one().then(|| r.clone())
            }
            _ => None,
        }
    }

    pub fn add_term(&mut self, m: SymMonomial, r: Rational) {
        if r.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(r);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += r;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add_assign_ref(&mut self, other: &CoeffExpr) {
        for (m, r) in &other.terms {
            self.add_term(m.clone(), r.clone());
        }
    }

    pub fn add_scaled(&mut self, other: &CoeffExpr, k: &Rational) {
        if k.is_zero() {
            return;
        }
        for (m, r) in &other.terms {
            self.add_term(m.clone(), r * k);
        }
    }

    pub fn scale(&self, k: &Rational) -> CoeffExpr {
        if k.is_zero() {
            return Self::zero();
        }
        CoeffExpr { terms: self.terms.iter().map(|(m, r)| (m.clone(), r * k)).collect() }
    }

    pub fn mul_monomial(&self, m: &SymMonomial, k: &Rational) -> CoeffExpr {
        let mut out = Self::zero();
        for (n, r) in &self.terms {
            out.add_term(n.mul(m), r * k);
        }
        out
    }

    pub fn pow(&self, n: u32) -> CoeffExpr {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Derivative with respect to `u`.
    pub fn du(&self) -> CoeffExpr {
        let mut out = Self::zero();
        for (m, r) in &self.terms {
            for (i, (s, p)) in m.factors().iter().enumerate() {
                let rest = {
                    let mut v = m.factors().to_vec();
                    if *p == 1 {
                        v.remove(i);
                    } else {
                        v[i].1 -= 1;
                    }
                    SymMonomial::from_factors(v)
                };
                let k = r * Rational::from_integer((*p).into());
                match s.kind() {
                    SymbolKind::Free => {
                        out.add_term(rest.mul(&SymMonomial::from_symbol(s.derived(), 1)), k);
                    }
                    SymbolKind::Defined(Rule::Identity) => out.add_term(rest, k),
                    SymbolKind::Defined(Rule::Reciprocal) => {
                        out.add_term(rest.mul(&SymMonomial::from_symbol(s.clone(), 2)), -k);
                    }
                    SymbolKind::Defined(Rule::Constant) => {}
                }
            }
        }
        out
    }

    /// Numeric value, with every symbol (including `u` and `1/u`) valued by
    /// `sym`.
    pub fn eval<F: Float>(&self, sym: impl Fn(&FuncSymbol) -> F) -> F {
        let mut acc = F::zero();
        for (m, r) in &self.terms {
            let mut t = F::from(r.to_f64().unwrap_or(f64::NAN)).unwrap_or_else(F::nan);
            for (s, p) in m.factors() {
                t = t * sym(s).powi(*p as i32);
            }
            acc = acc + t;
        }
        acc
    }

    /// Repeated u-derivative.
    pub fn du_n(&self, n: u32) -> CoeffExpr {
        let mut c = self.clone();
        for _ in 0..n {
            c = c.du();
        }
        c
    }

    /// Replaces the free function `base` (and its derivatives) by `expr`
    /// (and the corresponding u-derivatives of `expr`).
    pub fn substitute(&self, base: &str, expr: &CoeffExpr) -> CoeffExpr {
        let mut derivs: Vec<CoeffExpr> = vec![expr.clone()];
        let mut out = Self::zero();
        for (m, r) in &self.terms {
            let mut acc = CoeffExpr::term(SymMonomial::one(), r.clone());
            for (s, p) in m.factors() {
                if s.is_free() && s.base() == base {
                    let k = s.deriv_order() as usize;
                    while derivs.len() <= k {
                        let next = derivs.last().unwrap().du();
                        derivs.push(next);
                    }
                    acc = &acc * &derivs[k].pow(*p);
                } else {
                    acc = acc.mul_monomial(&SymMonomial::from_symbol(s.clone(), *p), &Rational::one());
                }
                if acc.is_zero() {
                    break;
                }
            }
            out.add_assign_ref(&acc);
        }
        out
    }

    /// Applies `map` to every symbol and multiplies the images out.
    pub fn map_symbols<F: FnMut(&FuncSymbol) -> Option<CoeffExpr>>(&self, mut map: F) -> CoeffExpr {
        let mut out = Self::zero();
        for (m, r) in &self.terms {
            let mut acc = CoeffExpr::term(SymMonomial::one(), r.clone());
            for (s, p) in m.factors() {
                match map(s) {
                    Some(e) => acc = &acc * &e.pow(*p),
                    None => acc = acc.mul_monomial(&SymMonomial::from_symbol(s.clone(), *p), &Rational::one()),
                }
                if acc.is_zero() {
                    break;
                }
            }
            out.add_assign_ref(&acc);
        }
        out
    }

    /// All symbols occurring in the expression.
    pub fn symbols(&self) -> Vec<FuncSymbol> {
        let mut v: Vec<FuncSymbol> = self.terms.keys().flat_map(|m| m.factors().iter().map(|(s, _)| s.clone())).collect();
        v.sort();
        v.dedup();
        v
    }

    pub fn contains_base(&self, base: &str) -> bool {
        self.terms.keys().any(|m| m.factors().iter().any(|(s, _)| s.base() == base))
    }

    /// Splits the expression by the part of each monomial made of symbols
    /// selected by `pick`: returns `pick-part -> remaining coefficient`.
    pub fn split_by<F: Fn(&FuncSymbol) -> bool>(&self, pick: F) -> BTreeMap<SymMonomial, CoeffExpr> {
        let mut out: BTreeMap<SymMonomial, CoeffExpr> = BTreeMap::new();
        for (m, r) in &self.terms {
            let (sel, rest): (Vec<_>, Vec<_>) = m.factors().iter().cloned().partition(|(s, _)| pick(s));
            out.entry(SymMonomial(sel)).or_default().add_term(SymMonomial(rest), r.clone());
        }
        out.retain(|_, c| !c.is_zero());
        out
    }

    /// Canonical form. Values are kept canonical by every constructor, so
    /// this is a structural copy.
    pub fn canonical(&self) -> CoeffExpr {
        let mut out = Self::zero();
        for (m, r) in &self.terms {
            out.add_term(SymMonomial::from_factors(m.factors().iter().cloned()), r.clone());
        }
        out
    }
}

impl Add for &CoeffExpr {
    type Output = CoeffExpr;
    fn add(self, rhs: &CoeffExpr) -> CoeffExpr {
        let mut out = self.clone();
        out.add_assign_ref(rhs);
        out
    }
}

impl Sub for &CoeffExpr {
    type Output = CoeffExpr;
    fn sub(self, rhs: &CoeffExpr) -> CoeffExpr {
        let mut out = self.clone();
        out.add_scaled(rhs, &-Rational::one());
        out
    }
}

impl Neg for &CoeffExpr {
    type Output = CoeffExpr;
    fn neg(self) -> CoeffExpr {
        self.scale(&-Rational::one())
    }
}

impl Mul for &CoeffExpr {
    type Output = CoeffExpr;
    fn mul(self, rhs: &CoeffExpr) -> CoeffExpr {
        let mut out = CoeffExpr::zero();
        for (m1, r1) in &self.terms {
            for (m2, r2) in &rhs.terms {
                out.add_term(m1.mul(m2), r1 * r2);
            }
        }
        out
    }
}

impl fmt::Display for CoeffExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, r) in &self.terms {
            let neg = r.is_negative();
            let a = r.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            if m.is_one() {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{a} {m}")?;
            }
        }
        Ok(())
    }
}
