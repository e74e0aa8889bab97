//! Recursive-descent parser for the polynomial text grammar:
//!
//! ```text
//! expr   := ['-'] term (('+' | '-') term)*
//! term   := factor ('*' factor)*
//! factor := base ['^' digits]
//! base   := rational | rational 'i' | 'i' | var | '(' expr ')'
//! ```
//!
//! Rationals are `digits` or `digits/digits`; an immediately following `i`
//! makes the literal imaginary (`2i`, `3/2i`). Variables are `x1..xn`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::{GaussianRational, Polynomial};
use crate::{Error, Result};

/// Parse a polynomial over `Q(i)` in the variables `x1..xn`.
pub fn parse_poly(text: &str, n: usize) -> Result<Polynomial> {
    Polynomial::var(n, 0)?; // validates the variable count
    let mut p = Parser {
        bytes: text.as_bytes(),
        pos: 0,
        n,
    };
    let poly = p.expr()?;
    p.skip_ws();
    if p.pos != p.bytes.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(poly)
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
    n: usize,
}

impl<'a> Parser<'a> {
    fn err(&self, msg: &str) -> Error {
        Error::Syntax {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self
            .bytes
            .get(self.pos)
            .is_some_and(u8::is_ascii_whitespace)
        {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Polynomial> {
        let mut negate = false;
        if self.peek() == Some(b'-') {
            self.pos += 1;
            negate = true;
        }
        let mut acc = self.term()?;
        if negate {
            acc = acc.neg();
        }
        while let Some(op) = self.peek() {
            match op {
                b'+' => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                b'-' => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Polynomial> {
        let mut acc = self.factor()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            acc = acc.mul(&self.factor()?);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Polynomial> {
        let base = self.base()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let k = self.digits("exponent")?;
            let k: u32 = k
                .parse()
                .map_err(|_| self.err("exponent too large"))?;
            return Ok(base.pow_trunc(k, None));
        }
        Ok(base)
    }

    fn base(&mut self) -> Result<Polynomial> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(b'i') if !self.followed_by_digit(1) => {
                self.pos += 1;
                Ok(Polynomial::constant(self.n, GaussianRational::i()))
            }
            Some(b'x') => {
                self.pos += 1;
                let idx: usize = self
                    .digits("variable index")?
                    .parse()
                    .map_err(|_| self.err("variable index too large"))?;
                if idx == 0 || idx > self.n {
                    return Err(Error::VariableOutOfRange {
                        index: idx,
                        count: self.n,
                    });
                }
                Polynomial::var(self.n, idx - 1)
            }
            Some(c) if c.is_ascii_digit() => {
                let numer = self.digits("number")?;
                let mut value = BigRational::from(
                    numer.parse::<BigInt>().map_err(|_| self.err("bad number"))?,
                );
                if self.bytes.get(self.pos) == Some(&b'/') {
                    self.pos += 1;
                    let denom: BigInt = self
                        .digits("denominator")?
                        .parse()
                        .map_err(|_| self.err("bad denominator"))?;
                    if denom.is_zero() {
                        return Err(self.err("zero denominator"));
                    }
                    value /= BigRational::from(denom);
                }
                // An immediately following `i` makes the literal imaginary.
                let coeff = if self.bytes.get(self.pos) == Some(&b'i') {
                    self.pos += 1;
                    GaussianRational::new(BigRational::zero(), value)
                } else {
                    GaussianRational::from_rational(value)
                };
                Ok(Polynomial::constant(self.n, coeff))
            }
            _ => Err(self.err("expected a number, 'i', a variable or '('")),
        }
    }

    fn followed_by_digit(&self, offset: usize) -> bool {
        self.bytes
            .get(self.pos + offset)
            .is_some_and(u8::is_ascii_digit)
    }

    fn digits(&mut self, what: &str) -> Result<String> {
        self.skip_ws();
        let start = self.pos;
        while self
            .bytes
            .get(self.pos)
            .is_some_and(u8::is_ascii_digit)
        {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.err(&format!("expected {what}")));
        }
        Ok(String::from_utf8_lossy(&self.bytes[start..self.pos]).into_owned())
    }
}
