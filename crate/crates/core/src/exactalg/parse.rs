//! Recursive-descent parser for the polynomial grammar:
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary ('*' unary)*
//! unary  := ('+' | '-') unary | power
//! power  := atom ('^' UINT)?
//! atom   := NUMBER | NUMBER '/' NUMBER | 'x' | 'y' | '(' expr ')'
//! ```

use num_bigint::BigInt;
use num_traits::Zero;

use super::poly::Poly;
use super::rational::Rational;
use crate::error::{Error, Result};

pub fn parse_poly(text: &str) -> Result<Poly> {
    let mut p = Parser {
        chars: text.char_indices().collect(),
        idx: 0,
        len: text.len(),
    };
    let out = p.expr()?;
    p.skip_ws();
    if let Some(&(pos, c)) = p.chars.get(p.idx) {
        return Err(syntax(pos, format!("unexpected '{c}'")));
    }
    Ok(out)
}

fn syntax(pos: usize, msg: impl Into<String>) -> Error {
    Error::Syntax {
        pos,
        msg: msg.into(),
    }
}

struct Parser {
    chars: Vec<(usize, char)>,
    idx: usize,
    len: usize,
}

impl Parser {
    fn skip_ws(&mut self) {
        while matches!(self.chars.get(self.idx), Some((_, c)) if c.is_whitespace()) {
            self.idx += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.idx).map(|&(_, c)| c)
    }

    fn pos(&self) -> usize {
        self.chars.get(self.idx).map_or(self.len, |&(p, _)| p)
    }

    fn expr(&mut self) -> Result<Poly> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some('+') => {
                    self.idx += 1;
                    acc = &acc + &self.term()?;
                }
                Some('-') => {
                    self.idx += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Poly> {
        let mut acc = self.unary()?;
        while self.peek() == Some('*') {
            self.idx += 1;
            acc = &acc * &self.unary()?;
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Poly> {
        match self.peek() {
            Some('-') => {
                self.idx += 1;
                Ok(-self.unary()?)
            }
            Some('+') => {
                self.idx += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Poly> {
        let base = self.atom()?;
        if self.peek() == Some('^') {
            self.idx += 1;
            let pos = {
                self.skip_ws();
                self.pos()
            };
            let digits = self.digits();
            if digits.is_empty() {
                return Err(Error::BadExponent { pos });
            }
            // "x^2.5" or "x^2/3" are not integer exponents
            if matches!(self.peek(), Some('.') | Some('/')) {
                return Err(Error::BadExponent { pos });
            }
            let e: u32 = digits.parse().map_err(|_| Error::BadExponent { pos })?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn digits(&mut self) -> String {
        let mut s = String::new();
        while let Some(&(_, c)) = self.chars.get(self.idx) {
            if c.is_ascii_digit() {
                s.push(c);
                self.idx += 1;
            } else {
                break;
            }
        }
        s
    }

    fn atom(&mut self) -> Result<Poly> {
        let pos = {
            self.skip_ws();
            self.pos()
        };
        match self.peek() {
            Some('x') => {
                self.idx += 1;
                Ok(Poly::x())
            }
            Some('y') => {
                self.idx += 1;
                Ok(Poly::y())
            }
            Some('(') => {
                self.idx += 1;
                let inner = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(syntax(self.pos(), "expected ')'"));
                }
                self.idx += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let num: BigInt = self.digits().parse().expect("digit run");
                if self.peek() == Some('/') {
                    self.idx += 1;
                    self.skip_ws();
                    let dpos = self.pos();
                    let d = self.digits();
                    if d.is_empty() {
                        return Err(syntax(dpos, "expected denominator"));
                    }
                    let den: BigInt = d.parse().expect("digit run");
                    if den.is_zero() {
                        return Err(syntax(dpos, "zero denominator"));
                    }
                    return Ok(Poly::constant(Rational::new(num, den)));
                }
                Ok(Poly::constant(Rational::from_integer(num)))
            }
            Some(c) => Err(syntax(pos, format!("unexpected '{c}'"))),
            None => Err(syntax(pos, "unexpected end of input")),
        }
    }
}
