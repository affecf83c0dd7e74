use std::fmt;

use crate::error::{Error, Result};
use crate::laurent::{theta_floor, LaurentL, RationalK};
use crate::scalars::FieldDesc;
use crate::specials::{cmpl_eval, zeta, Index};
use crate::tate::carlitz_pi;

/// Products and integer powers of named values: `pi`, `zeta(1,2)` and
/// `cmpl(1,2)` (the polylogarithm at the all-ones point).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Pi,
    Zeta(Index),
    Cmpl(Index),
    Pow(Box<Expr>, i64),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Pi => write!(f, "pi"),
            Expr::Zeta(i) => write!(f, "zeta{i}"),
            Expr::Cmpl(i) => write!(f, "cmpl{i}"),
            Expr::Pow(b, e) => write!(f, "({b})^{e}"),
            Expr::Mul(a, b) => write!(f, "{a}*{b}"),
            Expr::Div(a, b) => write!(f, "{a}/({b})"),
        }
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err(&self, what: &str) -> Error {
        Error::Parse(format!("{what} at position {} in expression", self.pos))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn integer(&mut self) -> Result<i64> {
        self.skip_ws();
        let start = self.pos;
        if matches!(self.src.get(self.pos), Some(b'-')) {
            self.pos += 1;
        }
        while self.src.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos]).unwrap().parse().map_err(|_| self.err("expected an integer"))
    }

    fn word(&mut self) -> &'a str {
        self.skip_ws();
        let start = self.pos;
        while self.src.get(self.pos).is_some_and(|c| c.is_ascii_alphabetic()) {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos]).unwrap()
    }

    fn index(&mut self) -> Result<Index> {
        if !self.eat(b'(') {
            return Err(self.err("expected '('"));
        }
        let mut parts = Vec::new();
        loop {
            let n = self.integer()?;
            parts.push(u32::try_from(n).map_err(|_| Error::InvalidIndex("index parts must be ≥ 1".into()))?);
            if self.eat(b')') {
                break;
            }
            if !self.eat(b',') {
                return Err(self.err("expected ',' or ')'"));
            }
        }
        Index::new(parts)
    }

    fn atom(&mut self) -> Result<Expr> {
        if self.eat(b'(') {
            let e = self.expr()?;
            if !self.eat(b')') {
                return Err(self.err("expected ')'"));
            }
            return Ok(e);
        }
        match self.word() {
            "pi" => Ok(Expr::Pi),
            "zeta" => Ok(Expr::Zeta(self.index()?)),
            "cmpl" | "li" => Ok(Expr::Cmpl(self.index()?)),
            "" => Err(self.err("expected a value")),
            w => Err(Error::Parse(format!("unknown value '{w}'"))),
        }
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.eat(b'^') {
            Ok(Expr::Pow(Box::new(base), self.integer()?))
        } else {
            Ok(base)
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut acc = self.power()?;
        loop {
            if self.eat(b'*') {
                acc = Expr::Mul(Box::new(acc), Box::new(self.power()?));
            } else if self.eat(b'/') {
                acc = Expr::Div(Box::new(acc), Box::new(self.power()?));
            } else {
                return Ok(acc);
            }
        }
    }
}

impl std::str::FromStr for Expr {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut p = Parser { src: s.as_bytes(), pos: 0 };
        let e = p.expr()?;
        if p.peek().is_some() {
            return Err(p.err("unexpected trailing input"));
        }
        Ok(e)
    }
}

impl Expr {
    /// Sum of absolute exponents of the atoms, used to size the guard.
    fn size(&self) -> i64 {
        match self {
            Expr::Pi | Expr::Zeta(_) | Expr::Cmpl(_) => 1,
            Expr::Pow(b, e) => b.size() * e.abs().max(1),
            Expr::Mul(a, b) | Expr::Div(a, b) => a.size() + b.size(),
        }
    }

    fn eval_raw(&self, f: &FieldDesc, n: i64) -> Result<LaurentL> {
        match self {
            Expr::Pi => carlitz_pi(f, n),
            Expr::Zeta(i) => zeta(f, i, n),
            Expr::Cmpl(i) => cmpl_eval(f, i, &vec![RationalK::one(f); i.depth()], n),
            Expr::Pow(b, e) => b.eval_raw(f, n)?.pow(*e),
            Expr::Mul(a, b) => a.eval_raw(f, n)?.mul(&b.eval_raw(f, n)?),
            Expr::Div(a, b) => a.eval_raw(f, n)?.div(&b.eval_raw(f, n)?),
        }
    }

    /// The value to theta-precision `n`.
    pub fn eval(&self, f: &FieldDesc, n: i64) -> Result<LaurentL> {
        let floor = theta_floor(f.q(), n);
        let mut guard = 2 + 2 * self.size();
        let mut last = None;
        for _ in 0..5 {
            match self.eval_raw(f, n + guard)?.truncate(floor) {
                Ok(v) => return Ok(v),
                Err(e) => {
                    last = Some(e);
                    guard *= 2;
                }
            }
        }
        Err(last.expect("at least one attempt"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses() {
        let e: Expr = "zeta(1)/pi^1".parse().unwrap();
        assert_eq!(e, Expr::Div(Box::new(Expr::Zeta(Index::new(vec![1]).unwrap())), Box::new(Expr::Pow(Box::new(Expr::Pi), 1))));
        assert!("zeta(0,1)".parse::<Expr>().is_err());
        assert!("foo".parse::<Expr>().is_err());
        assert!("pi *".parse::<Expr>().is_err());
    }

    #[test]
    fn evaluates_quotient() {
        let f = FieldDesc::with_order(2).unwrap();
        let v = "zeta(2)/zeta(1)^2".parse::<Expr>().unwrap().eval(&f, 20).unwrap();
        assert!(v.agrees_with(&LaurentL::one(&f)));
    }
}
