//! Parser for coefficient expressions in the notation used by `Display`:
//! `1/2 a^2 a' f''' - 3/4 (a'')^2 f^(4) + b1 u (1/u)^2`.
//!
//! `u` is the identity function, `(1/u)` its reciprocal, and every other
//! name is a free function of `u`; primes and `^(n)` denote u-derivatives.

use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::One;

use crate::coeff::{CoeffExpr, SymMonomial};
use crate::error::{AlgebraError, Result};
use crate::symbol::FuncSymbol;
use crate::Rational;

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err(&self, what: &str) -> AlgebraError {
        AlgebraError::Schema(format!(
            "{what} at position {} in `{}`",
            self.pos,
            String::from_utf8_lossy(self.s)
        ))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && (self.s[self.pos] == b' ' || self.s[self.pos] == b'*') {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn integer(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected an integer"));
        }
        Ok(std::str::from_utf8(&self.s[start..self.pos]).unwrap().parse().unwrap())
    }

    fn small(&mut self) -> Result<u32> {
        u32::try_from(self.integer()?).map_err(|_| self.err("exponent out of range"))
    }

    fn expr(&mut self) -> Result<CoeffExpr> {
        let mut out = CoeffExpr::zero();
        let mut sign = if self.eat(b'-') { -Rational::one() } else { Rational::one() };
        loop {
            let t = self.term()?;
            out.add_scaled(&t, &sign);
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    sign = Rational::one();
                }
                Some(b'-') => {
                    self.pos += 1;
                    sign = -Rational::one();
                }
                None | Some(b')') => return Ok(out),
                Some(_) => return Err(self.err("expected `+` or `-`")),
            }
        }
    }

    fn term(&mut self) -> Result<CoeffExpr> {
        let mut acc = CoeffExpr::one();
        let mut any = false;
        if matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            let n = self.integer()?;
            let d = if self.peek() == Some(b'/') && self.s.get(self.pos + 1).is_some_and(u8::is_ascii_digit) {
                self.pos += 1;
                self.integer()?
            } else {
                BigInt::one()
            };
            acc = acc.scale(&Rational::new(n, d));
            any = true;
        }
        while let Some(c) = self.peek() {
            if !(c.is_ascii_alphabetic() || c == b'(') {
                break;
            }
            let f = self.factor()?;
            acc = &acc * &f;
            any = true;
        }
        if !any {
            return Err(self.err("expected a term"));
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<CoeffExpr> {
        let base = if self.eat(b'(') {
            let save = self.pos;
            self.skip_ws();
            if self.s[self.pos..].starts_with(b"1/u") {
                self.pos += 3;
                if !self.eat(b')') {
                    return Err(self.err("expected `)`"));
                }
                CoeffExpr::inv()
            } else {
                self.pos = save;
                let e = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.err("expected `)`"));
                }
                e
            }
        } else {
            self.symbol()?
        };
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let p = self.small()?;
            return Ok(base.pow(p));
        }
        Ok(base)
    }

    fn symbol(&mut self) -> Result<CoeffExpr> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && (self.s[self.pos].is_ascii_alphanumeric() || self.s[self.pos] == b'_') {
            self.pos += 1;
        }
        let name = std::str::from_utf8(&self.s[start..self.pos]).unwrap().to_string();
        if name.is_empty() {
            return Err(self.err("expected a symbol"));
        }
        let mut order = 0u32;
        while self.s.get(self.pos) == Some(&b'\'') {
            self.pos += 1;
            order += 1;
        }
        if order == 0 && self.s.get(self.pos) == Some(&b'^') && self.s.get(self.pos + 1) == Some(&b'(') {
            self.pos += 2;
            order = self.small()?;
            if !self.eat(b')') {
                return Err(self.err("expected `)`"));
            }
        }
        if name == "u" {
            if order > 0 {
                return Err(self.err("derivatives of u are not coefficient symbols"));
            }
            return Ok(CoeffExpr::id());
        }
        Ok(CoeffExpr::term(SymMonomial::from_symbol(FuncSymbol::free_deriv(&name, order), 1), Rational::one()))
    }
}

impl FromStr for CoeffExpr {
    type Err = AlgebraError;

    fn from_str(s: &str) -> Result<Self> {
        let mut p = Parser { s: s.trim().as_bytes(), pos: 0 };
        let e = p.expr()?;
        if p.peek().is_some() {
            return Err(p.err("unexpected trailing input"));
        }
        Ok(e)
    }
}
