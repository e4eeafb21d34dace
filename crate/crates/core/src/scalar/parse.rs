use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::{Coeff, Field, GaussianRational, Poly, Var};
use crate::error::{Error, Result};
use crate::ParamScalar;

/// Parses a parameter polynomial such as `(λ^2 - μ^2)/2`, `1/2+3*i` or
/// `c0*c2 - 1/2*c1^2`. Accepts everything [`Poly::render`] produces.
pub fn parse_poly(src: &str) -> Result<ParamScalar> {
    let mut p = Parser { src, pos: 0 };
    let out = p.expr()?;
    p.skip_ws();
    if p.pos != src.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(out)
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse { pos: self.pos, msg: msg.to_string() }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn eat(&mut self, want: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(want) {
            self.pos += want.len_utf8();
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<ParamScalar> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = acc + self.term()?;
            } else if self.eat('-') {
                acc = acc - self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<ParamScalar> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = acc.mul_ref(&self.unary()?);
            } else if self.eat('/') {
                let at = self.pos;
                let d = self.unary()?;
                let c = d.as_constant().filter(|c| !c.is_zero()).ok_or(Error::Parse {
                    pos: at,
                    msg: "division only by a nonzero constant".into(),
                })?;
                acc = acc.scale(&c.inv().expect("nonzero"));
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<ParamScalar> {
        if self.eat('-') {
            return Ok(-self.unary()?);
        }
        if self.eat('+') {
            return self.unary();
        }
        let base = self.atom()?;
        if self.eat('^') {
            self.skip_ws();
            let start = self.pos;
            while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
                self.pos += 1;
            }
            let e: u32 = self.src[start..self.pos].parse().map_err(|_| self.err("expected exponent"))?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<ParamScalar> {
        self.skip_ws();
        let Some(c) = self.peek() else {
            return Err(self.err("unexpected end of input"));
        };
        if c == '(' {
            self.pos += 1;
            let e = self.expr()?;
            if !self.eat(')') {
                return Err(self.err("expected `)`"));
            }
            return Ok(e);
        }
        if c.is_ascii_digit() {
            let start = self.pos;
            while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
                self.pos += 1;
            }
            let n: BigInt = self.src[start..self.pos].parse().map_err(|_| self.err("bad integer"))?;
            return Ok(Poly::constant(GaussianRational::real(BigRational::from_integer(n))));
        }
        if c.is_alphabetic() {
            let start = self.pos;
            while let Some(c) = self.peek() {
                if c.is_alphanumeric() || c == '_' {
                    self.pos += c.len_utf8();
                } else {
                    break;
                }
            }
            let name = &self.src[start..self.pos];
            if name == "i" {
                return Ok(Poly::constant(GaussianRational::i()));
            }
            return Var::from_name(name).map(Poly::var).ok_or(Error::Parse {
                pos: start,
                msg: format!("unknown indeterminate `{name}`"),
            });
        }
        Err(self.err("unexpected character"))
    }
}
