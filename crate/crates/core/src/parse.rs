//! Inline polynomial syntax: a sum of terms `c`, `c*x`, `c x^k`, `x^k`,
//! with integer, fractional (`3/4`) or decimal coefficients, optionally in
//! parentheses. No nesting beyond a single term.

use std::str::FromStr;

use num::{BigInt, BigRational, Zero};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::poly::Poly;

struct Lexer<'a> {
    s: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn err(&self, message: impl Into<String>) -> Error {
        Error::Parse {
            position: self.pos,
            message: message.into(),
        }
    }

    fn digits(&mut self) -> &'a str {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.s[start..self.pos]).expect("ascii")
    }

    /// Unsigned rational literal: `12`, `3/4`, `0.25`.
    fn number(&mut self) -> Result<BigRational> {
        let int = self.digits();
        if int.is_empty() {
            return Err(self.err("expected a number"));
        }
        let mut value = BigRational::from_integer(BigInt::from_str(int).expect("digits"));
        if self.s.get(self.pos) == Some(&b'.') {
            self.pos += 1;
            let frac = self.digits();
            if !frac.is_empty() {
                let scale = num::pow(BigInt::from(10), frac.len());
                value += BigRational::new(BigInt::from_str(frac).expect("digits"), scale);
            }
        } else if self.peek() == Some(b'/') {
            self.pos += 1;
            let den = self.digits();
            if den.is_empty() {
                return Err(self.err("expected a denominator"));
            }
            let den = BigInt::from_str(den).expect("digits");
            if den.is_zero() {
                return Err(self.err("zero denominator"));
            }
            value /= BigRational::from_integer(den);
        }
        Ok(value)
    }

    fn signed_number(&mut self) -> Result<BigRational> {
        let neg = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                true
            }
            Some(b'+') => {
                self.pos += 1;
                false
            }
            _ => false,
        };
        let v = self.number()?;
        Ok(if neg { -v } else { v })
    }
}

/// Parses a polynomial in `var` into rational coefficients, low degree
/// first. Repeated powers are summed.
pub fn parse_terms(s: &str, var: char) -> Result<Vec<BigRational>> {
    let mut lx = Lexer { s: s.as_bytes(), pos: 0 };
    let var = var as u8;
    let mut coeffs: Vec<BigRational> = Vec::new();
    let mut first = true;
    loop {
        let sign = match lx.peek() {
            None if first => return Err(lx.err("empty polynomial")),
            None => break,
            Some(b'+') => {
                lx.pos += 1;
                1
            }
            Some(b'-') => {
                lx.pos += 1;
                -1
            }
            Some(_) if first => 1,
            Some(c) => return Err(lx.err(format!("expected '+' or '-', found '{}'", c as char))),
        };
        first = false;
        let coef = match lx.peek() {
            Some(b'(') => {
                lx.pos += 1;
                let v = lx.signed_number()?;
                if lx.peek() != Some(b')') {
                    return Err(lx.err("expected ')'"));
                }
                lx.pos += 1;
                Some(v)
            }
            Some(c) if c.is_ascii_digit() => Some(lx.number()?),
            Some(c) if c == var => None,
            Some(c) => return Err(lx.err(format!("unexpected '{}'", c as char))),
            None => return Err(lx.err("dangling sign")),
        };
        let mut power = 0usize;
        let explicit_mul = lx.peek() == Some(b'*');
        if explicit_mul {
            lx.pos += 1;
        }
        if lx.peek() == Some(var) {
            lx.pos += 1;
            power = 1;
            if lx.peek() == Some(b'^') {
                lx.pos += 1;
                let d = lx.digits();
                power = d.parse().map_err(|_| lx.err("expected an exponent"))?;
            }
        } else if explicit_mul || coef.is_none() {
            return Err(lx.err(format!("expected '{}'", var as char)));
        }
        let c = coef.unwrap_or_else(|| BigRational::from_integer(1.into()));
        let c = if sign < 0 { -c } else { c };
        if coeffs.len() <= power {
            coeffs.resize(power + 1, BigRational::zero());
        }
        coeffs[power] += c;
    }
    while coeffs.last().is_some_and(|c| c.is_zero()) {
        coeffs.pop();
    }
    Ok(coeffs)
}

/// Parses an inline polynomial in `x` and maps its coefficients into
/// `field`.
pub fn parse_poly<F: Field>(field: &F, s: &str) -> Result<Poly<F>> {
    let coeffs = parse_terms(s, 'x')?
        .iter()
        .map(|c| field.from_rational(c))
        .collect::<Result<Vec<_>>>()?;
    Ok(Poly::new(field.clone(), coeffs))
}
