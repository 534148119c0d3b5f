//! Canonical JSON form of the symbolic artifacts.
//!
//! Every document is an envelope
//! `{"schema": "vislaw", "version": 1, "kind": ..., "body": ...}`.
//! Jet monomials are exponent arrays (index 0 is `u_x`), coefficients are
//! lists of `{rational: "p/q", symbols: [{base, deriv_order, power, kind}]}`
//! and current components are keyed by their eps-order. Terms are written in
//! rank order and symbols in their canonical order, so serializing a parsed
//! document reproduces it byte for byte.

use std::collections::BTreeMap;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::classify::{ClassificationResult, Constraint, SolvedCapital};
use crate::coeff::{CoeffExpr, SymMonomial};
use crate::current::EpsCurrent;
use crate::diffpoly::DiffPoly;
use crate::error::{AlgebraError, Result};
use crate::jet::JetMonomial;
use crate::miura::{MiuraSeq, MiuraStep};
use crate::symbol::{FuncSymbol, Rule, SymbolKind};
use crate::Rational;

pub const SCHEMA: &str = "vislaw";
pub const VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct Envelope<T> {
    schema: String,
    version: u32,
    kind: String,
    body: T,
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SymKindJson {
    Free,
    Identity,
    Reciprocal,
    Constant,
}

#[derive(Serialize, Deserialize)]
pub struct SymbolJson {
    base: String,
    deriv_order: u32,
    power: u32,
    kind: SymKindJson,
}

#[derive(Serialize, Deserialize)]
pub struct CoeffTermJson {
    rational: String,
    symbols: Vec<SymbolJson>,
}

#[derive(Serialize, Deserialize)]
pub struct PolyTermJson {
    monomial: Vec<u32>,
    coeff: Vec<CoeffTermJson>,
}

#[derive(Serialize, Deserialize)]
pub struct CurrentJson {
    weight: i32,
    components: BTreeMap<usize, Vec<PolyTermJson>>,
}

#[derive(Serialize, Deserialize)]
pub struct StepJson {
    order: usize,
    beta: Vec<PolyTermJson>,
}

#[derive(Serialize, Deserialize)]
pub struct MiuraSeqJson {
    order: usize,
    steps: Vec<StepJson>,
}

#[derive(Serialize, Deserialize)]
pub struct CapitalJson {
    name: String,
    order: usize,
    value: Vec<CoeffTermJson>,
}

#[derive(Serialize, Deserialize)]
pub struct ConstraintJson {
    symbol: String,
    found_at: usize,
    value: Vec<CoeffTermJson>,
}

#[derive(Serialize, Deserialize)]
pub struct UnresolvedJson {
    order: usize,
    equation: Vec<CoeffTermJson>,
}

#[derive(Serialize, Deserialize)]
pub struct ClassificationJson {
    solved: Option<usize>,
    capitals: Vec<CapitalJson>,
    constraints: Vec<ConstraintJson>,
    unresolved: Vec<UnresolvedJson>,
    main: CurrentJson,
    sym: CurrentJson,
}

fn schema_err(msg: impl Into<String>) -> AlgebraError {
    AlgebraError::Schema(msg.into())
}

fn coeff_out(c: &CoeffExpr) -> Vec<CoeffTermJson> {
    c.terms()
        .map(|(m, r)| CoeffTermJson {
            rational: r.to_string(),
            symbols: m
                .factors()
                .iter()
                .map(|(s, p)| SymbolJson {
                    base: s.base().to_string(),
                    deriv_order: s.deriv_order(),
                    power: *p,
                    kind: match s.kind() {
                        SymbolKind::Free => SymKindJson::Free,
                        SymbolKind::Defined(Rule::Identity) => SymKindJson::Identity,
                        SymbolKind::Defined(Rule::Reciprocal) => SymKindJson::Reciprocal,
                        SymbolKind::Defined(Rule::Constant) => SymKindJson::Constant,
                    },
                })
                .collect(),
        })
        .collect()
}

fn coeff_in(terms: &[CoeffTermJson]) -> Result<CoeffExpr> {
    let mut out = CoeffExpr::zero();
    for t in terms {
        let r: Rational = t.rational.parse().map_err(|_| schema_err(format!("bad rational `{}`", t.rational)))?;
        let mut factors = Vec::with_capacity(t.symbols.len());
        for s in &t.symbols {
            let sym = match s.kind {
                SymKindJson::Free => FuncSymbol::free_deriv(&s.base, s.deriv_order),
                SymKindJson::Identity => FuncSymbol::id(),
                SymKindJson::Reciprocal => FuncSymbol::inv(),
                SymKindJson::Constant => FuncSymbol::constant(&s.base),
            };
            if !sym.is_free() && s.deriv_order != 0 {
                return Err(schema_err(format!("defined symbol `{}` carries a derivative order", s.base)));
            }
            if s.power == 0 {
                return Err(schema_err(format!("zero power of `{}`", s.base)));
            }
            factors.push((sym, s.power));
        }
        out.add_term(SymMonomial::from_factors(factors), r);
    }
    Ok(out)
}

fn poly_out(p: &DiffPoly) -> Vec<PolyTermJson> {
    p.ranked_terms()
        .into_iter()
        .map(|(m, c)| PolyTermJson { monomial: m.exponents().to_vec(), coeff: coeff_out(c) })
        .collect()
}

fn poly_in(terms: &[PolyTermJson]) -> Result<DiffPoly> {
    let mut out = DiffPoly::zero();
    for t in terms {
        out.add_term(JetMonomial::new(t.monomial.clone()), coeff_in(&t.coeff)?);
    }
    Ok(out)
}

fn current_out(c: &EpsCurrent) -> CurrentJson {
    CurrentJson {
        weight: c.weight(),
        components: c.comps().iter().enumerate().map(|(k, p)| (k, poly_out(p))).collect(),
    }
}

fn current_in(c: &CurrentJson) -> Result<EpsCurrent> {
    let comps = c
        .components
        .iter()
        .enumerate()
        .map(|(i, (k, terms))| {
            if i != *k {
                return Err(schema_err(format!("component {i} missing")));
            }
            poly_in(terms)
        })
        .collect::<Result<Vec<_>>>()?;
    if comps.is_empty() {
        return Err(schema_err("current without components"));
    }
    EpsCurrent::with_weight(comps, c.weight)
}

/// A symbolic artifact with a canonical JSON form.
pub trait JsonArtifact: Sized {
    const KIND: &'static str;
    #[doc(hidden)]
    type Body: Serialize + DeserializeOwned;
    #[doc(hidden)]
    fn to_body(&self) -> Self::Body;
    #[doc(hidden)]
    fn from_body(body: &Self::Body) -> Result<Self>;
}

impl JsonArtifact for CoeffExpr {
    const KIND: &'static str = "coeff";
    type Body = Vec<CoeffTermJson>;
    fn to_body(&self) -> Self::Body {
        coeff_out(self)
    }
    fn from_body(body: &Self::Body) -> Result<Self> {
        coeff_in(body)
    }
}

impl JsonArtifact for DiffPoly {
    const KIND: &'static str = "diffpoly";
    type Body = Vec<PolyTermJson>;
    fn to_body(&self) -> Self::Body {
        poly_out(self)
    }
    fn from_body(body: &Self::Body) -> Result<Self> {
        poly_in(body)
    }
}

impl JsonArtifact for EpsCurrent {
    const KIND: &'static str = "current";
    type Body = CurrentJson;
    fn to_body(&self) -> Self::Body {
        current_out(self)
    }
    fn from_body(body: &Self::Body) -> Result<Self> {
        current_in(body)
    }
}

impl JsonArtifact for MiuraSeq {
    const KIND: &'static str = "miura_seq";
    type Body = MiuraSeqJson;
    fn to_body(&self) -> Self::Body {
        MiuraSeqJson {
            order: self.order(),
            steps: self.steps().iter().map(|s| StepJson { order: s.order(), beta: poly_out(s.beta()) }).collect(),
        }
    }
    fn from_body(body: &Self::Body) -> Result<Self> {
        let steps = body
            .steps
            .iter()
            .map(|s| MiuraStep::new(s.order, poly_in(&s.beta)?))
            .collect::<Result<Vec<_>>>()?;
        MiuraSeq::from_steps(steps, body.order)
    }
}

impl JsonArtifact for ClassificationResult {
    const KIND: &'static str = "classification";
    type Body = ClassificationJson;
    fn to_body(&self) -> Self::Body {
        ClassificationJson {
            solved: self.solved,
            capitals: self
                .capitals
                .iter()
                .map(|c| CapitalJson { name: c.name.clone(), order: c.order, value: coeff_out(&c.value) })
                .collect(),
            constraints: self
                .constraints
                .iter()
                .map(|c| ConstraintJson { symbol: c.symbol.clone(), found_at: c.found_at, value: coeff_out(&c.value) })
                .collect(),
            unresolved: self
                .unresolved
                .iter()
                .map(|(k, e)| UnresolvedJson { order: *k, equation: coeff_out(e) })
                .collect(),
            main: current_out(&self.main),
            sym: current_out(&self.sym),
        }
    }
    fn from_body(body: &Self::Body) -> Result<Self> {
        Ok(ClassificationResult {
            solved: body.solved,
            capitals: body
                .capitals
                .iter()
                .map(|c| Ok(SolvedCapital { name: c.name.clone(), order: c.order, value: coeff_in(&c.value)? }))
                .collect::<Result<_>>()?,
            constraints: body
                .constraints
                .iter()
                .map(|c| Ok(Constraint { symbol: c.symbol.clone(), found_at: c.found_at, value: coeff_in(&c.value)? }))
                .collect::<Result<_>>()?,
            unresolved: body
                .unresolved
                .iter()
                .map(|u| Ok((u.order, coeff_in(&u.equation)?)))
                .collect::<Result<_>>()?,
            main: current_in(&body.main)?,
            sym: current_in(&body.sym)?,
        })
    }
}

/// Pretty-printed canonical JSON of `value`, ending in a newline.
pub fn to_json<T: JsonArtifact>(value: &T) -> String {
    let env = Envelope { schema: SCHEMA.to_string(), version: VERSION, kind: T::KIND.to_string(), body: value.to_body() };
    let mut s = serde_json::to_string_pretty(&env).expect("artifact bodies always serialize");
    s.push('\n');
    s
}

pub fn to_value<T: JsonArtifact>(value: &T) -> serde_json::Value {
    serde_json::to_value(Envelope {
        schema: SCHEMA.to_string(),
        version: VERSION,
        kind: T::KIND.to_string(),
        body: value.to_body(),
    })
    .expect("artifact bodies always serialize")
}

pub fn from_json<T: JsonArtifact>(text: &str) -> Result<T> {
    let head: Envelope<serde_json::Value> =
        serde_json::from_str(text).map_err(|e| schema_err(format!("malformed document: {e}")))?;
    if head.schema != SCHEMA {
        return Err(schema_err(format!("unknown schema `{}`", head.schema)));
    }
    if head.version != VERSION {
        return Err(schema_err(format!("unsupported schema version {}", head.version)));
    }
    if head.kind != T::KIND {
        return Err(schema_err(format!("expected a `{}` document, found `{}`", T::KIND, head.kind)));
    }
    let body: T::Body = serde_json::from_value(head.body).map_err(|e| schema_err(format!("malformed {}: {e}", T::KIND)))?;
    T::from_body(&body)
}
