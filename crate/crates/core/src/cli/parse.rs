use crate::error::{Error, Result};
use crate::laurent::RationalK;
use crate::scalars::FieldDesc;
use crate::tate::KtPoly;

/// Splits on commas that are not inside brackets.
pub fn split_top_level(s: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    for ch in s.chars() {
        match ch {
            '(' | '{' => depth += 1,
            ')' | '}' => depth -= 1,
            _ => {}
        }
        if ch == ',' && depth == 0 {
            out.push(cur.trim().to_string());
            cur.clear();
        } else {
            cur.push(ch);
        }
    }
    if !cur.trim().is_empty() || !out.is_empty() {
        out.push(cur.trim().to_string());
    }
    out
}

struct Parser<'a> {
    field: &'a FieldDesc,
    src: Vec<char>,
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, what: &str) -> Error {
        let text: String = self.src.iter().collect();
        Error::Parse(format!("{what} at position {} in '{text}'", self.pos))
    }

    fn peek(&mut self) -> Option<char> {
        while self.src.get(self.pos).is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn number(&mut self) -> Result<u64> {
        self.peek();
        let start = self.pos;
        while self.src.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        let s: String = self.src[start..self.pos].iter().collect();
        s.parse().map_err(|_| self.err("expected a number"))
    }

    fn exponent(&mut self) -> Result<u32> {
        if self.eat('^') {
            u32::try_from(self.number()?).map_err(|_| self.err("exponent too large"))
        } else {
            Ok(1)
        }
    }

    fn factor(&mut self) -> Result<KtPoly> {
        let f = self.field;
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let inner = self.sum()?;
                if !self.eat(')') {
                    return Err(self.err("expected ')'"));
                }
                inner.pow(self.exponent()?)
            }
            Some('{') => {
                self.pos += 1;
                let code = self.number()?;
                if !self.eat('}') {
                    return Err(self.err("expected '}'"));
                }
                let c = f.element(code)?;
                Ok(KtPoly::constant(RationalK::constant(f, c)))
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.number()?;
                Ok(KtPoly::constant(RationalK::from_int(f, (n % f.p() as u64) as i64)))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.src.get(self.pos).is_some_and(|c| c.is_ascii_alphabetic()) {
                    self.pos += 1;
                }
                let word: String = self.src[start..self.pos].iter().collect();
                let base = match word.as_str() {
                    "theta" | "T" => KtPoly::constant(RationalK::theta(f)),
                    "t" => KtPoly::t(f),
                    _ => return Err(Error::Parse(format!("unknown symbol '{word}'"))),
                };
                base.pow(self.exponent()?)
            }
            _ => Err(self.err("expected a term")),
        }
    }

    fn term(&mut self) -> Result<KtPoly> {
        let mut acc = self.factor()?;
        loop {
            if self.eat('*') {
                acc = acc.mul(&self.factor()?)?;
            } else if self.eat('/') {
                let d = self.factor()?;
                let d = d.as_scalar().ok_or_else(|| Error::Parse("only division by elements of F_q(theta) is allowed".into()))?;
                acc = acc.scale(&d.inv()?)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn sum(&mut self) -> Result<KtPoly> {
        let negate = self.eat('-');
        let mut acc = self.term()?;
        if negate {
            acc = acc.neg();
        }
        loop {
            if self.eat('+') {
                acc = acc.add(&self.term()?)?;
            } else if self.eat('-') {
                acc = acc.sub(&self.term()?)?;
            } else {
                return Ok(acc);
            }
        }
    }
}

/// A polynomial in t over F_q(theta), e.g. `t + theta^2`, `1/(theta+1)`,
/// `{3}*theta` for the field element with code 3.
pub fn parse_ktpoly(field: &FieldDesc, s: &str) -> Result<KtPoly> {
    let mut p = Parser { field, src: s.chars().collect(), pos: 0 };
    let v = p.sum()?;
    if p.peek().is_some() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(v)
}

/// An element of F_q(theta).
pub fn parse_rational(field: &FieldDesc, s: &str) -> Result<RationalK> {
    parse_ktpoly(field, s)?.as_scalar().ok_or_else(|| Error::Parse(format!("'{s}' involves t")))
}

/// Comma-separated modulus codes, lowest degree first.
pub fn parse_codes(s: &str) -> Result<Vec<u32>> {
    s.split(',').map(|x| x.trim().parse::<u32>().map_err(|_| Error::Parse(format!("bad code '{x}'")))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_coordinates() {
        let f = FieldDesc::with_order(3).unwrap();
        let parts = split_top_level("1, theta^2 + 1, 1/(theta+1)");
        assert_eq!(parts.len(), 3);
        let x = parse_rational(&f, &parts[2]).unwrap();
        assert_eq!(x.inv().unwrap(), parse_rational(&f, "theta + 1").unwrap());
        let u = parse_ktpoly(&f, "t - theta").unwrap();
        assert_eq!(u, KtPoly::t_minus_theta_power(&f, 1));
        assert!(parse_rational(&f, "t").is_err());
        assert!(parse_ktpoly(&f, "x").is_err());
        assert_eq!(parse_rational(&f, "4").unwrap(), RationalK::one(&f));
    }
}
