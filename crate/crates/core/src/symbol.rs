//! Function symbols of the dependent variable `u`.
//!
//! A symbol is either a free function (`a(u)`, `f(u)`, an unknown capital
//! such as `C2`) whose u-derivatives are new independent symbols, or one of a
//! few defined functions whose derivative rewrites into known expressions.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

/// Derivative rule of a defined symbol.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Rule {
    /// `id(u) = u`, with `id' = 1`.
    Identity,
    /// `inv(u) = 1/u`, with `inv' = -inv^2`.
    Reciprocal,
    /// A constant, with derivative zero.
    Constant,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SymbolKind {
    Free,
    Defined(Rule),
}

/// A function of `u`, possibly differentiated `deriv_order` times.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FuncSymbol {
    base: Arc<str>,
    deriv_order: u32,
    kind: SymbolKind,
}

pub const ID_NAME: &str = "u";
pub const INV_NAME: &str = "inv";

impl FuncSymbol {
    pub fn free(base: &str) -> Self {
        Self::free_deriv(base, 0)
    }

    pub fn free_deriv(base: &str, deriv_order: u32) -> Self {
        FuncSymbol { base: Arc::from(base), deriv_order, kind: SymbolKind::Free }
    }

    /// The identity function `u`.
    pub fn id() -> Self {
        FuncSymbol { base: Arc::from(ID_NAME), deriv_order: 0, kind: SymbolKind::Defined(Rule::Identity) }
    }

    /// The reciprocal `1/u`.
    pub fn inv() -> Self {
        FuncSymbol { base: Arc::from(INV_NAME), deriv_order: 0, kind: SymbolKind::Defined(Rule::Reciprocal) }
    }

    /// A named constant (for example an integration constant).
    pub fn constant(base: &str) -> Self {
        FuncSymbol { base: Arc::from(base), deriv_order: 0, kind: SymbolKind::Defined(Rule::Constant) }
    }

    pub fn base(&self) -> &str {
        &self.base
    }

    pub fn deriv_order(&self) -> u32 {
        self.deriv_order
    }

    pub fn kind(&self) -> SymbolKind {
        self.kind
    }

    pub fn is_free(&self) -> bool {
        self.kind == SymbolKind::Free
    }

    /// The next derivative of a free symbol. Panics on defined symbols,
    /// whose derivatives are rewritten by [`crate::CoeffExpr::du`].
    pub fn derived(&self) -> Self {
        assert!(self.is_free(), "defined symbols differentiate through their rule");
        FuncSymbol { base: self.base.clone(), deriv_order: self.deriv_order + 1, kind: self.kind }
    }
}

impl fmt::Display for FuncSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            SymbolKind::Defined(Rule::Reciprocal) => write!(f, "(1/u)"),
            _ => {
                write!(f, "{}", self.base)?;
                match self.deriv_order {
                    0 => Ok(()),
                    n @ 1..=3 => write!(f, "{}", "'".repeat(n as usize)),
                    n => write!(f, "^({n})"),
                }
            }
        }
    }
}
