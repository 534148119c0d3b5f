//! Order-by-order classification of currents `u^2 + eps a(u) u_x + ...` in
//! normal form that admit a commuting deformation of an arbitrary flux
//! `f(u)`.
//!
//! The unknown coefficients of the normal form are the small letters
//! (`b1`, `c1`, `d1`, `d2`, ...); those of the commuting current are the
//! capitals (`A`, `B1`, `B2`, ...). At order `k` the vanishing of the
//! bracket is linear in the order-`k` capitals with rational coefficients;
//! equations left over after elimination constrain the small letters.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::coeff::{CoeffExpr, SymMonomial};
use crate::bracket::bracket_poly;
use crate::current::{poisson_bracket, EpsCurrent};
use crate::diffpoly::DiffPoly;
use crate::error::{AlgebraError, Result};
use crate::jet::JetMonomial;
use crate::Rational;

/// Highest order covered by the reference coefficient tables.
pub const CHECKED_ORDER: usize = 5;

/// Name of the free flux function.
pub const FLUX: &str = "f";
/// Name of the viscous central invariant.
pub const INVARIANT: &str = "a";

const SMALL_LETTERS: &[&str] = &["b", "c", "d", "e", "g", "h", "p", "q", "r", "s"];
const CAPITAL_LETTERS: &[&str] = &["A", "B", "C", "D", "E", "F", "G", "H", "I", "J", "K"];

/// One unknown coefficient together with the monomial it multiplies.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Unknown {
    pub name: String,
    pub order: usize,
    pub monomial: JetMonomial,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ansatz {
    pub order: usize,
    pub main: EpsCurrent,
    pub sym: EpsCurrent,
    pub small: Vec<Unknown>,
    pub capitals: Vec<Unknown>,
}

impl Ansatz {
    pub fn capitals_of_order(&self, k: usize) -> impl Iterator<Item = &Unknown> {
        self.capitals.iter().filter(move |c| c.order == k)
    }

    pub fn small_of_order(&self, k: usize) -> impl Iterator<Item = &Unknown> {
        self.small.iter().filter(move |c| c.order == k)
    }
}

fn letter(table: &[&str], i: usize) -> String {
    table.get(i).map(|s| s.to_string()).unwrap_or_else(|| format!("x{i}_"))
}

/// Normal-form current with small letters and the general commuting current
/// with capitals, through `order`.
pub fn build_ansatz(order: usize) -> Ansatz {
    let mut main = vec![DiffPoly::u().pow(2)];
    let mut sym = vec![DiffPoly::constant(CoeffExpr::free(FLUX))];
    let mut small = Vec::new();
    let mut capitals = Vec::new();
    for k in 1..=order {
        let basis = JetMonomial::all_of_degree(k as u32);
        let mut s = DiffPoly::zero();
        for (i, m) in basis.iter().enumerate() {
            let name = if k == 1 { letter(CAPITAL_LETTERS, 0) } else { format!("{}{}", letter(CAPITAL_LETTERS, k - 1), i + 1) };
            s.add_term(m.clone(), CoeffExpr::free(&name));
            capitals.push(Unknown { name, order: k, monomial: m.clone() });
        }
        sym.push(s);
        let mut p = DiffPoly::zero();
        if k == 1 {
            p.add_term(JetMonomial::var(1), CoeffExpr::free(INVARIANT));
        } else {
            for (i, m) in basis.iter().filter(|m| !m.divisible_by_ux()).enumerate() {
                let name = format!("{}{}", letter(SMALL_LETTERS, k - 2), i + 1);
                p.add_term(m.clone(), CoeffExpr::free(&name));
                small.push(Unknown { name, order: k, monomial: m.clone() });
            }
        }
        main.push(p);
    }
    Ansatz {
        order,
        main: EpsCurrent::new(main).expect("ansatz components are homogeneous"),
        sym: EpsCurrent::new(sym).expect("ansatz components are homogeneous"),
        small,
        capitals,
    }
}

/// A capital determined at `order`, with the constraints known at that
/// order already substituted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolvedCapital {
    pub name: String,
    pub order: usize,
    pub value: CoeffExpr,
}

/// `symbol = value`, found while solving order `found_at`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub symbol: String,
    pub found_at: usize,
    pub value: CoeffExpr,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassificationResult {
    /// Orders `0..=solved` have been processed.
    pub solved: Option<usize>,
    pub capitals: Vec<SolvedCapital>,
    pub constraints: Vec<Constraint>,
    /// Equations that could not be put in solved form.
    pub unresolved: Vec<(usize, CoeffExpr)>,
    /// Normal form and commuting current with every solution substituted.
    pub main: EpsCurrent,
    pub sym: EpsCurrent,
}

impl ClassificationResult {
    pub fn initial(ansatz: &Ansatz) -> Self {
        ClassificationResult {
            solved: None,
            capitals: Vec::new(),
            constraints: Vec::new(),
            unresolved: Vec::new(),
            main: ansatz.main.clone(),
            sym: ansatz.sym.clone(),
        }
    }

    pub fn order(&self) -> usize {
        self.solved.unwrap_or(0)
    }

    pub fn capital(&self, name: &str) -> Option<&CoeffExpr> {
        self.capitals.iter().find(|c| c.name == name).map(|c| &c.value)
    }

    pub fn constraint(&self, symbol: &str) -> Option<&CoeffExpr> {
        self.constraints.iter().find(|c| c.symbol == symbol).map(|c| &c.value)
    }

    /// `true` when orders up to `CHECKED_ORDER` only were involved.
    pub fn within_checked_range(&self) -> bool {
        self.order() <= CHECKED_ORDER
    }

    fn substitute_everywhere(&mut self, base: &str, value: &CoeffExpr) {
        let sub = |p: &DiffPoly| p.substitute_symbol(base, value);
        self.main = self.main.map(sub);
        self.sym = self.sym.map(sub);
        for c in &mut self.constraints {
            c.value = c.value.substitute(base, value);
        }
        for (_, e) in &mut self.unresolved {
            *e = e.substitute(base, value);
        }
        self.unresolved.retain(|(_, e)| !e.is_zero());
    }
}

/// Writes `e` as `sum_i r_i X_i + rest` for the unknown bases `xs`.
fn linear_split(e: &CoeffExpr, xs: &[String]) -> Result<(Vec<Rational>, CoeffExpr)> {
    let mut coeffs = vec![Rational::zero(); xs.len()];
    let mut rest = CoeffExpr::zero();
    for (m, r) in e.terms() {
        let hits: Vec<usize> = m
            .factors()
            .iter()
            .filter_map(|(s, _)| xs.iter().position(|x| s.is_free() && s.base() == x))
            .collect();
        match hits.as_slice() {
            [] => rest.add_term(m.clone(), r.clone()),
            [i] if m.factors().len() == 1 && m.factors()[0].1 == 1 && m.factors()[0].0.deriv_order() == 0 => {
                coeffs[*i] += r;
            }
            _ => {
                return Err(AlgebraError::NonTriangular {
                    order: 0,
                    detail: format!("unknowns enter nonlinearly or with a non-constant factor in {e}"),
                })
            }
        }
    }
    Ok((coeffs, rest))
}

/// Solves `M x + rhs = 0` by elimination. Returns the solved unknowns and the
/// right-hand sides of the rows with no unknowns left.
fn eliminate(
    mut rows: Vec<(Vec<Rational>, CoeffExpr)>,
    n: usize,
) -> (Vec<Option<CoeffExpr>>, Vec<CoeffExpr>) {
    let mut pivots = Vec::new();
    let mut r0 = 0;
    for col in 0..n {
        let Some(p) = (r0..rows.len()).find(|&r| !rows[r].0[col].is_zero()) else { continue };
        rows.swap(r0, p);
        let scale = rows[r0].0[col].recip();
        rows[r0].0.iter_mut().for_each(|v| *v *= &scale);
        rows[r0].1 = rows[r0].1.scale(&scale);
        for r in 0..rows.len() {
            if r == r0 || rows[r].0[col].is_zero() {
                continue;
            }
            let factor = rows[r].0[col].clone();
            let (prow, prhs) = (rows[r0].0.clone(), rows[r0].1.clone());
            for (v, pv) in rows[r].0.iter_mut().zip(&prow) {
                *v -= &factor * pv;
            }
            rows[r].1.add_scaled(&prhs, &-factor);
        }
        pivots.push((r0, col));
        r0 += 1;
    }
    let mut sol = vec![None; n];
    for &(r, col) in &pivots {
        if rows[r].0.iter().enumerate().all(|(c, v)| c == col || v.is_zero()) {
            sol[col] = Some(-&rows[r].1);
        }
    }
    let leftovers = rows[r0..].iter().map(|(_, rhs)| rhs.clone()).filter(|e| !e.is_zero()).collect();
    (sol, leftovers)
}

/// Divides out the largest power of the nonvanishing invariant `a` common to
/// every term.
fn strip_invariant_power(e: &CoeffExpr) -> CoeffExpr {
    let a = crate::FuncSymbol::free(INVARIANT);
    let p = e.terms().map(|(m, _)| m.power_of(&a)).min().unwrap_or(0);
    if p == 0 {
        return e.clone();
    }
    let mut out = CoeffExpr::zero();
    for (m, r) in e.terms() {
        let factors = m.factors().iter().map(|(s, q)| (s.clone(), if *s == a { q - p } else { *q }));
        out.add_term(SymMonomial::from_factors(factors), r.clone());
    }
    out
}

/// Tries to solve `e = 0` for one of `candidates` (tried in order); the
/// symbol must enter linearly, undifferentiated, with a rational factor.
fn solve_for(e: &CoeffExpr, candidates: &[String]) -> Option<(String, CoeffExpr)> {
    for x in candidates {
        if !e.contains_base(x) {
            continue;
        }
        if let Ok((c, rest)) = linear_split(e, std::slice::from_ref(x)) {
            if !c[0].is_zero() {
                return Some((x.clone(), rest.scale(&-c[0].recip())));
            }
        }
    }
    None
}

/// Imposes the vanishing of the order-`k` bracket component.
pub fn solve_order(ansatz: &Ansatz, k: usize, prior: &ClassificationResult) -> Result<ClassificationResult> {
    let expected = if k == 0 { None } else { Some(k - 1) };
    if prior.solved != expected {
        return Err(AlgebraError::Precondition(format!("order {k} requires all lower orders solved")));
    }
    if k > ansatz.order {
        return Err(AlgebraError::TruncationExceeded { requested: k, available: ansatz.order });
    }
    let mut res = prior.clone();
    res.solved = Some(k);
    let mut component = DiffPoly::zero();
    for i in 0..=k {
        let (a, b) = (res.main.comp(i), res.sym.comp(k - i));
        if !a.is_zero() && !b.is_zero() {
            component.add_assign_ref(&bracket_poly(a, b));
        }
    }
    let unknowns: Vec<String> = ansatz.capitals_of_order(k).map(|u| u.name.clone()).collect();
    let mut rows = Vec::new();
    for (_, c) in component.terms() {
        rows.push(linear_split(c, &unknowns).map_err(|e| match e {
            AlgebraError::NonTriangular { detail, .. } => AlgebraError::NonTriangular { order: k, detail },
            other => other,
        })?);
    }
    let (sol, leftovers) = eliminate(rows, unknowns.len());
    let mut new_caps = Vec::new();
    for (name, value) in unknowns.iter().zip(sol) {
        match value {
            Some(v) => {
                res.substitute_everywhere(name, &v);
                new_caps.push(SolvedCapital { name: name.clone(), order: k, value: v });
            }
            None => {
                return Err(AlgebraError::NonTriangular {
                    order: k,
                    detail: format!("capital {name} is not determined"),
                })
            }
        }
    }
    // Each leftover must vanish for every flux f: split by f-derivative products.
    let mut equations: Vec<CoeffExpr> = Vec::new();
    for e in leftovers {
        let parts: BTreeMap<SymMonomial, CoeffExpr> = e.split_by(|s| s.base() == FLUX);
        equations.extend(parts.into_values().map(|e| strip_invariant_power(&e)));
    }
    let candidates: Vec<String> = ansatz.small.iter().map(|u| u.name.clone()).collect();
    let mut found: Vec<(String, CoeffExpr)> = Vec::new();
    while let Some(pos) = equations.iter().position(|e| solve_for(e, &candidates).is_some()) {
        let e = equations.remove(pos);
        let (x, v) = solve_for(&e, &candidates).unwrap();
        res.substitute_everywhere(&x, &v);
        for c in &mut new_caps {
            c.value = c.value.substitute(&x, &v);
        }
        for (_, val) in &mut found {
            *val = val.substitute(&x, &v);
        }
        for eq in &mut equations {
            *eq = strip_invariant_power(&eq.substitute(&x, &v));
        }
        equations.retain(|eq| !eq.is_zero());
        found.push((x, v));
    }
    for (x, v) in found {
        res.constraints.push(Constraint { symbol: x, found_at: k, value: v });
    }
    res.unresolved.extend(equations.into_iter().map(|e| (k, e)));
    res.capitals.extend(new_caps);
    Ok(res)
}

/// Runs every order through `order` and verifies the bracket vanishes.
pub fn classify(order: usize) -> Result<ClassificationResult> {
    let ansatz = build_ansatz(order);
    let mut res = ClassificationResult::initial(&ansatz);
    for k in 0..=order {
        res = solve_order(&ansatz, k, &res)?;
    }
    if let Some((k, e)) = res.unresolved.first() {
        return Err(AlgebraError::NonTriangular { order: *k, detail: format!("unresolved equation {e} = 0") });
    }
    let br = poisson_bracket(&res.main, &res.sym, order)?;
    if let Some(k) = br.first_nonzero() {
        return Err(AlgebraError::NonTriangular {
            order: k,
            detail: format!("bracket does not vanish after substitution: {}", br.comp(k)),
        });
    }
    Ok(res)
}

/// The normal-form current with `a` replaced by `a_value`, through `order`.
/// Every small letter up to `order` must be fixed by a constraint.
pub fn specialize(result: &ClassificationResult, a_value: &CoeffExpr, order: usize) -> Result<EpsCurrent> {
    substitute_invariant(&result.main, a_value, order, &[])
}

/// The commuting deformation `omega_f` for the central invariant `a_value`,
/// with the flux `f` left as a free function.
pub fn specialize_deformation(result: &ClassificationResult, a_value: &CoeffExpr, order: usize) -> Result<EpsCurrent> {
    substitute_invariant(&result.sym, a_value, order, &[FLUX])
}

fn substitute_invariant(current: &EpsCurrent, a_value: &CoeffExpr, order: usize, keep: &[&str]) -> Result<EpsCurrent> {
    if a_value.is_zero() {
        return Err(AlgebraError::Precondition("a(u) = 0 lies outside the viscous branch".into()));
    }
    if current.order() < order {
        return Err(AlgebraError::TruncationExceeded { requested: order, available: current.order() });
    }
    let out = current.truncate(order).map(|p| p.substitute_symbol(INVARIANT, a_value));
    for c in out.comps() {
        for (_, coeff) in c.terms() {
            if let Some(s) = coeff.symbols().into_iter().find(|s| s.is_free() && !keep.contains(&s.base())) {
                return Err(AlgebraError::Precondition(format!(
                    "coefficient {s} is not fixed at this order; classify one order higher"
                )));
            }
        }
    }
    Ok(out)
}
