//! Exact symbolic toolkit for scalar viscous conservation laws
//! `u_t = d_x(u^2 + eps a(u) u_x + ...)`.
//!
//! The algebra layer ([`CoeffExpr`], [`DiffPoly`], [`EpsCurrent`]) works over
//! exact rationals. On top of it sit the Miura normal form, the order-by-order
//! classification of commuting deformations, hierarchy generators, and the
//! quasi-Miura asymptotics of the Burgers-type family.

pub mod asymptotics;
pub mod bracket;
pub mod classify;
pub mod coeff;
pub mod current;
pub mod diffpoly;
pub mod error;
pub mod hierarchy;
pub mod integrate;
pub mod jet;
pub mod json;
pub mod miura;
pub mod parse;
pub mod symbol;

pub use coeff::{CoeffExpr, SymMonomial};
pub use current::{flow_commutator, involution_check, poisson_bracket, EpsCurrent, Involution};
pub use diffpoly::DiffPoly;
pub use error::{AlgebraError, Result};
pub use jet::{rank_compare, JetMonomial};
pub use symbol::{FuncSymbol, Rule, SymbolKind};

/// Exact rational scalar used for every symbolic coefficient.
pub type Rational = num_rational::BigRational;

/// `p/q` as a [`Rational`].
pub fn rat(p: i64, q: i64) -> Rational {
    Rational::new(p.into(), q.into())
}
