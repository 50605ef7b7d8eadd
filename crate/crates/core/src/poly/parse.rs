use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{One, Signed};
use thiserror::Error;

use super::{Monomial, MonomialOrder, Polynomial, Rational, VarTable};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("polynomial parse error at byte {pos}: {msg}")]
pub struct ParseError {
    pub pos: usize,
    pub msg: String,
}

fn write_monomial(out: &mut String, m: &Monomial, vars: &VarTable, order: &MonomialOrder) {
    let mut pairs: Vec<(usize, u32)> = m.pairs().to_vec();
    pairs.sort_by_key(|&(v, _)| order.rank(v));
    for (i, (v, e)) in pairs.into_iter().enumerate() {
        if i > 0 {
            out.push('*');
        }
        out.push_str(vars.name(v));
        if e > 1 {
            let _ = write!(out, "^{e}");
        }
    }
}

fn write_terms<'a>(
    terms: impl Iterator<Item = (&'a Monomial, Rational)>,
    vars: &VarTable,
    order: &MonomialOrder,
) -> String {
    let mut out = String::new();
    for (i, (m, c)) in terms.enumerate() {
        let neg = c.is_negative();
        match (i, neg) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        let a = c.abs();
        if m.is_one() {
            let _ = write!(out, "{a}");
        } else {
            if !a.is_one() {
                let _ = write!(out, "{a}*");
            }
            write_monomial(&mut out, m, vars, order);
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

impl Polynomial {
    /// Integer-cleared primitive form with terms in decreasing `order`,
    /// e.g. `4*y3^2 - 3`.
    pub fn display(&self, vars: &VarTable, order: &MonomialOrder) -> String {
        let p = self.primitive(order);
        let terms = p.sorted_terms(order);
        write_terms(terms.into_iter().map(|(m, c)| (m, c.clone())), vars, order)
    }

    /// Exact form keeping rational coefficients, e.g. `y3^2 - 3/4`.
    pub fn display_exact(&self, vars: &VarTable, order: &MonomialOrder) -> String {
        let terms = self.sorted_terms(order);
        write_terms(terms.into_iter().map(|(m, c)| (m, c.clone())), vars, order)
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Sym(u8),
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let b = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < b.len() {
        let c = b[i];
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let s = i;
            while i < b.len() && b[i].is_ascii_digit() {
                i += 1;
            }
            out.push((s, Tok::Num(text[s..i].parse().unwrap())));
        } else if c.is_ascii_alphabetic() || c == b'_' {
            let s = i;
            while i < b.len() && (b[i].is_ascii_alphanumeric() || b[i] == b'_') {
                i += 1;
            }
            out.push((s, Tok::Ident(text[s..i].to_string())));
        } else if b"+-*/^()=".contains(&c) {
            out.push((i, Tok::Sym(c)));
            i += 1;
        } else {
            return Err(ParseError { pos: i, msg: format!("unexpected character `{}`", c as char) });
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    i: usize,
    end: usize,
    vars: &'a VarTable,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.i).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.i).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn err(&self, msg: impl Into<String>) -> ParseError {
        ParseError { pos: self.pos(), msg: msg.into() }
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.i += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Polynomial, ParseError> {
        let mut acc = if self.eat(b'-') {
            -&self.term()?
        } else {
            self.eat(b'+');
            self.term()?
        };
        loop {
            if self.eat(b'+') {
                acc = &acc + &self.term()?;
            } else if self.eat(b'-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn starts_atom(&self) -> bool {
        matches!(self.peek(), Some(Tok::Num(_) | Tok::Ident(_) | Tok::Sym(b'(')))
    }

    fn term(&mut self) -> Result<Polynomial, ParseError> {
        let mut acc = self.power()?;
        loop {
            if self.eat(b'*') {
                acc = &acc * &self.power()?;
            } else if self.eat(b'/') {
                let pos = self.pos();
                let d = self.power()?;
                if !d.is_unit() {
                    return Err(ParseError { pos, msg: "division by zero or a non-constant".into() });
                }
                let c = d.coeff(&Monomial::one());
                acc = acc.scale(&c.recip());
            } else if self.starts_atom() {
                acc = &acc * &self.power()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn power(&mut self) -> Result<Polynomial, ParseError> {
        let base = self.atom()?;
        if self.eat(b'^') {
            match self.peek().cloned() {
                Some(Tok::Num(n)) => {
                    self.i += 1;
                    let e: u32 = n.try_into().map_err(|_| self.err("exponent too large"))?;
                    Ok(base.pow(e))
                }
                _ => Err(self.err("expected exponent")),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Polynomial, ParseError> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.i += 1;
                Ok(Polynomial::constant(Rational::from_integer(n)))
            }
            Some(Tok::Ident(name)) => {
                let v = self
                    .vars
                    .index_of(&name)
                    .ok_or_else(|| self.err(format!("unknown variable `{name}`")))?;
                self.i += 1;
                Ok(Polynomial::var(v))
            }
            Some(Tok::Sym(b'(')) => {
                self.i += 1;
                let e = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.err("expected `)`"));
                }
                Ok(e)
            }
            _ => Err(self.err("expected number, variable or `(`")),
        }
    }
}

/// Parses `expr` or `lhs = rhs` (returned as `lhs - rhs`). Multiplication may
/// be written with `*` or by juxtaposition (`2 x3`, `x2 x5`).
pub fn parse_polynomial(text: &str, vars: &VarTable) -> Result<Polynomial, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, i: 0, end: text.len(), vars };
    let lhs = p.expr()?;
    let out = if p.eat(b'=') { &lhs - &p.expr()? } else { lhs };
    if p.i != p.toks.len() {
        return Err(p.err("trailing input"));
    }
    Ok(out)
}

impl Polynomial {
    pub fn is_constant(&self) -> bool {
        self.terms().all(|(m, _)| m.is_one())
    }
}
