//! Recursive-descent parser for scalar expressions such as `(q^2-1)/(q-1)`.
//!
//! Grammar:
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | '+' unary | power
//! power  := atom ('^' exp)?
//! exp    := ['-'] int | '(' ['-'] int ['/' int] ')'
//! atom   := int | 'q' | 's' | '(' expr ')'
//! ```
//!
//! Fractional exponents must have denominator 1 or 2 and may only be applied
//! to `q`. `s` is accepted as shorthand for `q^(1/2)`.

use num::{BigInt, BigRational, One};

use super::Scalar;
use crate::error::{Error, Result};

pub(super) fn parse_scalar(src: &str) -> Result<Scalar> {
    let toks: Vec<char> = src.chars().filter(|c| !c.is_whitespace()).collect();
    if toks.is_empty() {
        return Err(Error::Parse("empty expression".into()));
    }
    let mut p = Parser { toks, pos: 0 };
    let v = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(p.err("trailing input"));
    }
    Ok(v)
}

enum Atom {
    Q,
    S,
    Other(Scalar),
}

struct Parser {
    toks: Vec<char>,
    pos: usize,
}

impl Parser {
    fn err(&self, msg: &str) -> Error {
        Error::Parse(format!("{msg} at offset {}", self.pos))
    }

    fn peek(&self) -> Option<char> {
        self.toks.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(&format!("expected '{c}'")))
        }
    }

    fn expr(&mut self) -> Result<Scalar> {
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

    fn term(&mut self) -> Result<Scalar> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = acc * self.unary()?;
            } else if self.eat('/') {
                let d = self.unary()?;
                acc = acc.checked_div(&d)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Scalar> {
        if self.eat('-') {
            return Ok(-self.unary()?);
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Scalar> {
        let atom = self.atom()?;
        if !self.eat('^') {
            return Ok(match atom {
                Atom::Q => Scalar::q(),
                Atom::S => Scalar::s_pow(1),
                Atom::Other(x) => x,
            });
        }
        let (n, d) = self.exponent()?;
        match atom {
            Atom::Q if d == 1 => Ok(Scalar::s_pow(2 * n)),
            Atom::Q => Ok(Scalar::s_pow(n)),
            Atom::S if d == 1 => Ok(Scalar::s_pow(n)),
            Atom::Other(x) if d == 1 => x.pow(n),
            _ => Err(self.err("half-integer exponent is only allowed on q")),
        }
    }

    /// Returns `(n, d)` with `d` in `{1, 2}`.
    fn exponent(&mut self) -> Result<(i64, i64)> {
        if self.eat('(') {
            let neg = self.eat('-');
            let n = self.int()?;
            let d = if self.eat('/') { self.int()? } else { 1 };
            self.expect(')')?;
            let n = if neg { -n } else { n };
            return match d {
                1 => Ok((n, 1)),
                2 if n % 2 == 0 => Ok((n / 2, 1)),
                2 => Ok((n, 2)),
                _ => Err(self.err("exponent denominator must be 1 or 2")),
            };
        }
        let neg = self.eat('-');
        let n = self.int()?;
        Ok((if neg { -n } else { n }, 1))
    }

    fn int(&mut self) -> Result<i64> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected integer"));
        }
        let s: String = self.toks[start..self.pos].iter().collect();
        s.parse().map_err(|_| self.err("integer out of range"))
    }

    fn atom(&mut self) -> Result<Atom> {
        match self.peek() {
            Some('q') => {
                self.pos += 1;
                Ok(Atom::Q)
            }
            Some('s') => {
                self.pos += 1;
                Ok(Atom::S)
            }
            Some('(') => {
                self.pos += 1;
                let v = self.expr()?;
                self.expect(')')?;
                Ok(Atom::Other(v))
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.peek().is_some_and(|c| c.is_ascii_digit()) {
                    self.pos += 1;
                }
                let s: String = self.toks[start..self.pos].iter().collect();
                let n: BigInt = s.parse().map_err(|_| self.err("bad integer"))?;
                Ok(Atom::Other(Scalar::from_rational(BigRational::new(n, BigInt::one()))))
            }
            _ => Err(self.err("unexpected character")),
        }
    }
}
