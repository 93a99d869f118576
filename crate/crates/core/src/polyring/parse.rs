//! Text syntax for polynomials: `3/2*x^2*y - y^3`, `(x+y)^2`, `x^i`.
//!
//! Identifiers that are not ring variables may be bound to integers through
//! a parameter map; they can then appear in exponents and as coefficients.

use std::collections::BTreeMap;

use super::{GradedPolyRing, PolyError, Poly};
use crate::exactla::Rational;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(String),
    Ident(String),
    Sym(char),
}

fn lex(s: &str) -> Result<Vec<(usize, Tok)>, PolyError> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            out.push((start, Tok::Num(chars[start..i].iter().collect())));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((start, Tok::Ident(chars[start..i].iter().collect())));
        } else if "+-*/^()".contains(c) {
            out.push((i, Tok::Sym(c)));
            i += 1;
        } else {
            return Err(PolyError::Parse { pos: i, msg: format!("unexpected character `{c}`") });
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    len: usize,
    ring: Option<&'a GradedPolyRing>,
    params: &'a BTreeMap<String, i64>,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.len, |(o, _)| *o)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, PolyError> {
        Err(PolyError::Parse { pos: self.offset(), msg: msg.into() })
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), PolyError> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(format!("expected `{c}`"))
        }
    }

    // Integer expressions: used for exponents and degree annotations.
    fn int_expr(&mut self) -> Result<i64, PolyError> {
        let neg = if self.eat('-') {
            true
        } else {
            self.eat('+');
            false
        };
        let mut acc = self.int_term()?;
        if neg {
            acc = -acc;
        }
        loop {
            if self.eat('+') {
                acc += self.int_term()?;
            } else if self.eat('-') {
                acc -= self.int_term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn int_term(&mut self) -> Result<i64, PolyError> {
        let mut acc = self.int_atom()?;
        while self.eat('*') {
            acc *= self.int_atom()?;
        }
        Ok(acc)
    }

    fn int_atom(&mut self) -> Result<i64, PolyError> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                n.parse().or_else(|_| self.err("integer out of range"))
            }
            Some(Tok::Ident(name)) => match self.params.get(&name) {
                Some(v) => {
                    self.pos += 1;
                    Ok(*v)
                }
                None => self.err(format!("unbound parameter `{name}`")),
            },
            Some(Tok::Sym('(')) => {
                self.pos += 1;
                let v = self.int_expr()?;
                self.expect(')')?;
                Ok(v)
            }
            Some(Tok::Sym('-')) => {
                self.pos += 1;
                Ok(-self.int_atom()?)
            }
            _ => self.err("expected integer"),
        }
    }

    fn ring(&self) -> &'a GradedPolyRing {
        self.ring.expect("polynomial parsing requires a ring")
    }

    fn expr(&mut self) -> Result<Poly, PolyError> {
        let mut acc = if self.eat('-') {
            self.term()?.neg()
        } else {
            self.eat('+');
            self.term()?
        };
        loop {
            if self.eat('+') {
                acc = acc.add(&self.term()?);
            } else if self.eat('-') {
                acc = acc.sub(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Poly, PolyError> {
        let mut acc = self.factor()?;
        while self.eat('*') {
            let f = self.factor()?;
            acc = self.ring().mul(&acc, &f);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Poly, PolyError> {
        let base = self.base()?;
        if self.eat('^') {
            let e = self.int_atom()?;
            if e < 0 {
                return self.err("negative exponent");
            }
            Ok(self.ring().pow(&base, e as u32))
        } else {
            Ok(base)
        }
    }

    fn base(&mut self) -> Result<Poly, PolyError> {
        let ring = self.ring();
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                let mut lit = n;
                if self.eat('/') {
                    match self.peek().cloned() {
                        Some(Tok::Num(d)) => {
                            self.pos += 1;
                            lit = format!("{lit}/{d}");
                        }
                        _ => return self.err("expected denominator"),
                    }
                }
                let q: Rational = lit.parse().or_else(|_| self.err("bad rational literal"))?;
                Ok(ring.constant(q))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                if let Some(i) = ring.var_index(&name) {
                    Ok(ring.var(i))
                } else if let Some(v) = self.params.get(&name) {
                    Ok(ring.constant(Rational::from_int(*v)))
                } else {
                    Err(PolyError::UnknownVariable(name))
                }
            }
            Some(Tok::Sym('(')) => {
                self.pos += 1;
                let p = self.expr()?;
                self.expect(')')?;
                Ok(p)
            }
            _ => self.err("expected number, variable or `(`"),
        }
    }

    fn finish(&self) -> Result<(), PolyError> {
        if self.pos == self.toks.len() {
            Ok(())
        } else {
            self.err("trailing input")
        }
    }
}

pub(super) fn parse_poly(
    ring: &GradedPolyRing,
    s: &str,
    params: &BTreeMap<String, i64>,
) -> Result<Poly, PolyError> {
    let toks = lex(s)?;
    let mut p = Parser { toks, pos: 0, len: s.len(), ring: Some(ring), params };
    let out = p.expr()?;
    p.finish()?;
    Ok(out)
}

/// Evaluates an integer expression such as `-i`, `2*i+1` or `(i-1)*3`.
pub fn eval_int_expr(s: &str, params: &BTreeMap<String, i64>) -> Result<i64, PolyError> {
    let toks = lex(s)?;
    let mut p = Parser { toks, pos: 0, len: s.len(), ring: None, params };
    let v = p.int_expr()?;
    p.finish()?;
    Ok(v)
}
