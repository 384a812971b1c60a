//! Canonical text form of polynomials.
//!
//! Terms are printed in ascending graded order as `coeff*q^e1*a^e2*...`,
//! joined by ` + ` (or ` - ` for a negative coefficient). Unit coefficients
//! and unit exponents are omitted: `2 + q - a*x^-1`.

use std::fmt;
use std::str::FromStr;

use super::poly::{ring_of, MultiLaurentPoly};
use super::rat::BigRat;
use super::var::{Monomial, Ring, Var};
use crate::error::{QckError, Result};

fn write_term(f: &mut fmt::Formatter<'_>, m: &Monomial, c: &BigRat) -> fmt::Result {
    if m.is_one() {
        write!(f, "{c}")
    } else if c.is_one() {
        write!(f, "{m}")
    } else {
        write!(f, "{c}*{m}")
    }
}

impl fmt::Display for MultiLaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms().iter().enumerate() {
            let neg = c.is_negative();
            match (i, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            write_term(f, m, &c.abs())?;
        }
        Ok(())
    }
}

impl fmt::Debug for MultiLaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}({})", self.ring(), self)
    }
}

struct Cursor<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(s: &'a str) -> Self {
        Cursor { src: s.as_bytes(), pos: 0 }
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

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(QckError::Parse { offset: self.pos, message: message.into() })
    }

    fn digits(&mut self) -> Option<&'a str> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        (self.pos > start).then(|| std::str::from_utf8(&self.src[start..self.pos]).unwrap())
    }

    fn ident(&mut self) -> Option<&'a str> {
        self.skip_ws();
        let start = self.pos;
        if self.pos < self.src.len() && self.src[self.pos].is_ascii_alphabetic() {
            self.pos += 1;
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphanumeric() {
                self.pos += 1;
            }
        }
        (self.pos > start).then(|| std::str::from_utf8(&self.src[start..self.pos]).unwrap())
    }

    fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }
}

fn parse_rat(cur: &mut Cursor<'_>) -> Result<Option<BigRat>> {
    let Some(num) = cur.digits() else { return Ok(None) };
    let text = if cur.eat(b'/') {
        match cur.digits() {
            Some(den) => format!("{num}/{den}"),
            None => return cur.err("expected denominator"),
        }
    } else {
        num.to_string()
    };
    match text.parse::<BigRat>() {
        Ok(r) => Ok(Some(r)),
        Err(_) => cur.err("invalid rational"),
    }
}

fn parse_signed_int(cur: &mut Cursor<'_>) -> Result<i32> {
    let neg = if cur.eat(b'-') {
        true
    } else {
        cur.eat(b'+');
        false
    };
    let Some(d) = cur.digits() else { return cur.err("expected exponent") };
    match d.parse::<i32>() {
        Ok(v) => Ok(if neg { -v } else { v }),
        Err(_) => cur.err("exponent out of range"),
    }
}

/// `factor ("*" factor)*` where a factor is a rational or `VAR["^"SINT]`.
fn parse_product(cur: &mut Cursor<'_>) -> Result<(BigRat, Monomial)> {
    let mut coeff = BigRat::ONE;
    let mut mono = Monomial::ONE;
    loop {
        if let Some(r) = parse_rat(cur)? {
            coeff = &coeff * &r;
        } else if let Some(name) = cur.ident() {
            let Some(v) = Var::parse(name) else {
                return cur.err(format!("unknown variable `{name}`"));
            };
            let e = if cur.eat(b'^') { parse_signed_int(cur)? } else { 1 };
            mono = mono.mul(&Monomial::var(v, e));
        } else {
            return cur.err("expected a number or variable");
        }
        if !cur.eat(b'*') {
            return Ok((coeff, mono));
        }
    }
}

fn parse_terms(s: &str) -> Result<Vec<(Monomial, BigRat)>> {
    let mut cur = Cursor::new(s);
    let mut terms = Vec::new();
    let mut first = true;
    loop {
        let mut neg = false;
        if first {
            if cur.eat(b'-') {
                neg = true;
            } else {
                cur.eat(b'+');
            }
        } else if cur.eat(b'-') {
            neg = true;
        } else if !cur.eat(b'+') {
            return cur.err("expected `+` or `-`");
        }
        // Tolerate `+ -q`.
        if !first && cur.eat(b'-') {
            neg = !neg;
        }
        let (c, m) = parse_product(&mut cur)?;
        terms.push((m, if neg { -c } else { c }));
        first = false;
        if cur.at_end() {
            return Ok(terms);
        }
    }
}

impl MultiLaurentPoly {
    /// Parse canonical (or any equivalent) text into the given ring.
    pub fn parse_in(s: &str, ring: Ring) -> Result<Self> {
        Self::from_terms(ring, parse_terms(s)?)
    }
}

/// Parses with the ring inferred from the variables that occur (plus `q`).
impl FromStr for MultiLaurentPoly {
    type Err = QckError;

    fn from_str(s: &str) -> Result<Self> {
        let terms = parse_terms(s)?;
        let ring = terms.iter().fold(Ring::q_only(), |r, (m, _)| r.union(ring_of(m)));
        Self::from_terms(ring, terms)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_printing() {
        let p: MultiLaurentPoly = "q + 2".parse().unwrap();
        assert_eq!(p.to_string(), "2 + q");
        let p: MultiLaurentPoly = "x*a^-1 - 3/2*q^-3 + -1".parse().unwrap();
        assert_eq!(p.to_string(), "-3/2*q^-3 + a^-1*x - 1");
        assert_eq!(MultiLaurentPoly::zero(Ring::q_only()).to_string(), "0");
    }

    #[test]
    fn parse_errors_carry_offsets() {
        match "1 + + q".parse::<MultiLaurentPoly>() {
            Err(QckError::Parse { offset, .. }) => assert_eq!(offset, 4),
            other => panic!("{other:?}"),
        }
        assert!("q^".parse::<MultiLaurentPoly>().is_err());
        assert!("z + 1".parse::<MultiLaurentPoly>().is_err());
        assert!("1 q".parse::<MultiLaurentPoly>().is_err());
    }

    #[test]
    fn collects_like_terms() {
        let p: MultiLaurentPoly = "q + q - 2*q + q*a*q^-1".parse().unwrap();
        assert_eq!(p.to_string(), "a");
    }
}
