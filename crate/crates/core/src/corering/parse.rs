//! Recursive-descent parser for the polynomial text grammar:
//!
//! ```text
//! expr   := ["-"] term (("+" | "-") term)*
//! term   := factor ("*" factor)*
//! factor := coeff | var ["^" nat] | "(" expr ")" ["^" nat]
//! coeff  := int ["/" posint]
//! ```
//!
//! Whitespace is ignored between tokens. Positions in errors are byte offsets.

use std::sync::Arc;

use num_bigint::BigInt;

use super::field::{Field, Scalar};
use super::poly::{Polynomial, Ring};
use crate::error::{Error, Result};

pub fn parse_poly(text: &str, ring: &Arc<Ring>) -> Result<Polynomial> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
        ring,
    };
    p.skip_ws();
    let out = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(out)
}

/// Parses a scalar in the coefficient grammar, with an optional leading minus.
/// Prime-field scalars are integers reduced mod p.
pub fn parse_scalar(text: &str, field: Field) -> Result<Scalar> {
    let ring = Ring::new(field, Vec::<String>::new());
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
        ring: &ring,
    };
    p.skip_ws();
    let negative = p.eat(b'-');
    p.skip_ws();
    let c = p.coeff()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.error("unexpected trailing input in scalar"));
    }
    Ok(if negative { -c } else { c })
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    ring: &'a Arc<Ring>,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> Error {
        Error::Parse {
            position: self.pos,
            message: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
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

    fn expr(&mut self) -> Result<Polynomial> {
        let negative = self.eat(b'-');
        self.skip_ws();
        let first = self.term()?;
        let mut acc = if negative { -&first } else { first };
        loop {
            self.skip_ws();
            if self.eat(b'+') {
                self.skip_ws();
                acc = &acc + &self.term()?;
            } else if self.eat(b'-') {
                self.skip_ws();
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial> {
        let mut acc = self.factor()?;
        loop {
            self.skip_ws();
            if self.eat(b'*') {
                self.skip_ws();
                acc = &acc * &self.factor()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn factor(&mut self) -> Result<Polynomial> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                self.skip_ws();
                let inner = self.expr()?;
                self.skip_ws();
                if !self.eat(b')') {
                    return Err(self.error("expected ')'"));
                }
                let e = self.exponent()?;
                Ok(inner.pow(e))
            }
            Some(c) if c.is_ascii_digit() => {
                let c = self.coeff()?;
                Ok(Polynomial::constant(self.ring, c))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while let Some(c) = self.peek() {
                    if c.is_ascii_alphanumeric() || c == b'_' {
                        self.pos += 1;
                    } else {
                        break;
                    }
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
                let idx = self
                    .ring
                    .var_index(name)
                    .ok_or_else(|| Error::UnknownVariable(name.to_string()))?;
                let e = self.exponent()?;
                Ok(Polynomial::var(self.ring, idx).pow(e))
            }
            Some(_) => Err(self.error("expected coefficient, variable or '('")),
            None => Err(self.error("unexpected end of input")),
        }
    }

    fn exponent(&mut self) -> Result<u64> {
        let save = self.pos;
        self.skip_ws();
        if !self.eat(b'^') {
            self.pos = save;
            return Ok(1);
        }
        self.skip_ws();
        let n = self.natural()?;
        u64::try_from(&n).map_err(|_| self.error("exponent too large"))
    }

    fn natural(&mut self) -> Result<BigInt> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected a natural number"));
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        Ok(digits.parse().expect("digit string"))
    }

    fn coeff(&mut self) -> Result<Scalar> {
        let num = self.natural()?;
        let save = self.pos;
        self.skip_ws();
        if self.eat(b'/') {
            self.skip_ws();
            let den = self.natural()?;
            if den == BigInt::from(0) {
                return Err(Error::DivisionByZero);
            }
            return self.ring.field().fraction(&num, &den);
        }
        self.pos = save;
        Ok(self.ring.field().from_bigint(&num))
    }
}
