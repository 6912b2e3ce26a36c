//! Tokens and polynomial expressions, shared with the script parser.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use super::poly::{Poly, PolyRing};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Int(BigInt),
    Ident(String),
    /// Single-character punctuation: `( ) [ ] { } , : = + - * / ^`.
    Sym(char),
    Arrow,
    Newline,
    Eof,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Token {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Int(n) => write!(f, "{n}"),
            Tok::Ident(s) => write!(f, "{s}"),
            Tok::Sym(c) => write!(f, "'{c}'"),
            Tok::Arrow => f.write_str("'->'"),
            Tok::Newline => f.write_str("end of line"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

/// Splits text into tokens. `#` starts a comment; newlines inside brackets
/// are dropped so long lists may wrap.
pub fn lex(text: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let mut depth: usize = 0;
    for (ln, line) in text.lines().enumerate() {
        let line_no = ln + 1;
        let chars: Vec<char> = line.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let col = i + 1;
            if c == '#' {
                break;
            }
            if c.is_whitespace() {
                i += 1;
                continue;
            }
            if c.is_ascii_digit() {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                out.push(Token { tok: Tok::Int(s.parse().unwrap()), line: line_no, col });
                continue;
            }
            if c.is_alphabetic() || c == '_' {
                let start = i;
                while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '\'') {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                out.push(Token { tok: Tok::Ident(s), line: line_no, col });
                continue;
            }
            if c == '-' && chars.get(i + 1) == Some(&'>') {
                out.push(Token { tok: Tok::Arrow, line: line_no, col });
                i += 2;
                continue;
            }
            if "()[]{},:=+-*/^".contains(c) {
                match c {
                    '(' | '[' | '{' => depth += 1,
                    ')' | ']' | '}' => depth = depth.saturating_sub(1),
                    _ => {}
                }
                out.push(Token { tok: Tok::Sym(c), line: line_no, col });
                i += 1;
                continue;
            }
            return Err(Error::Syntax { line: line_no, col, msg: format!("unexpected character '{c}'") });
        }
        if depth == 0 && !matches!(out.last(), None | Some(Token { tok: Tok::Newline, .. })) {
            out.push(Token { tok: Tok::Newline, line: line_no, col: chars.len() + 1 });
        }
    }
    let line = text.lines().count().max(1);
    out.push(Token { tok: Tok::Eof, line, col: 1 });
    Ok(out)
}

/// A cursor over a token list.
pub struct Cursor<'a> {
    toks: &'a [Token],
    pos: usize,
}

impl<'a> Cursor<'a> {
    pub fn new(toks: &'a [Token]) -> Self {
        Cursor { toks, pos: 0 }
    }

    pub fn peek(&self) -> &'a Token {
        &self.toks[self.pos.min(self.toks.len() - 1)]
    }

    pub fn peek_at(&self, k: usize) -> &'a Token {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)]
    }

    pub fn next(&mut self) -> &'a Token {
        let t = self.peek();
        if self.pos < self.toks.len() - 1 {
            self.pos += 1;
        }
        t
    }

    pub fn at_sym(&self, c: char) -> bool {
        self.peek().tok == Tok::Sym(c)
    }

    pub fn eat_sym(&mut self, c: char) -> bool {
        if self.at_sym(c) {
            self.next();
            true
        } else {
            false
        }
    }

    pub fn error<T>(&self, msg: impl Into<String>) -> Result<T> {
        let t = self.peek();
        Err(Error::Syntax { line: t.line, col: t.col, msg: msg.into() })
    }

    pub fn expect_sym(&mut self, c: char) -> Result<&'a Token> {
        if self.at_sym(c) {
            Ok(self.next())
        } else {
            self.error(format!("expected '{c}', found {}", self.peek().tok))
        }
    }

    /// Expects the closing bracket of `open`, reporting at `open` when the
    /// input ends first.
    pub fn expect_close(&mut self, c: char, open: &Token) -> Result<()> {
        if self.eat_sym(c) {
            return Ok(());
        }
        if matches!(self.peek().tok, Tok::Eof | Tok::Newline) {
            let o = match open.tok {
                Tok::Sym(o) => o,
                _ => '(',
            };
            return Err(Error::Syntax { line: open.line, col: open.col, msg: format!("unclosed '{o}'") });
        }
        self.error(format!("expected '{c}', found {}", self.peek().tok))
    }

    pub fn ident(&mut self) -> Result<String> {
        match &self.peek().tok {
            Tok::Ident(s) => {
                let s = s.clone();
                self.next();
                Ok(s)
            }
            t => self.error(format!("expected a name, found {t}")),
        }
    }

    pub fn int(&mut self) -> Result<BigInt> {
        match &self.peek().tok {
            Tok::Int(n) => {
                let n = n.clone();
                self.next();
                Ok(n)
            }
            t => self.error(format!("expected an integer, found {t}")),
        }
    }

    pub fn at_keyword(&self, kw: &str) -> bool {
        matches!(&self.peek().tok, Tok::Ident(s) if s == kw)
    }

    pub fn expect_keyword(&mut self, kw: &str) -> Result<()> {
        if self.at_keyword(kw) {
            self.next();
            Ok(())
        } else {
            self.error(format!("expected '{kw}', found {}", self.peek().tok))
        }
    }

    pub fn at_end_of_statement(&self) -> bool {
        matches!(self.peek().tok, Tok::Newline | Tok::Eof)
    }
}

/// Polynomial syntax tree, kept for printing scripts back out.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PolyExpr {
    Int(BigInt),
    Var(String),
    Neg(Box<PolyExpr>),
    Add(Box<PolyExpr>, Box<PolyExpr>),
    Sub(Box<PolyExpr>, Box<PolyExpr>),
    Mul(Box<PolyExpr>, Box<PolyExpr>),
    Div(Box<PolyExpr>, Box<PolyExpr>),
    Pow(Box<PolyExpr>, u32),
}

impl PolyExpr {
    pub fn parse(cur: &mut Cursor<'_>) -> Result<PolyExpr> {
        let mut lhs = Self::term(cur)?;
        loop {
            if cur.eat_sym('+') {
                lhs = PolyExpr::Add(Box::new(lhs), Box::new(Self::term(cur)?));
            } else if cur.eat_sym('-') {
                lhs = PolyExpr::Sub(Box::new(lhs), Box::new(Self::term(cur)?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(cur: &mut Cursor<'_>) -> Result<PolyExpr> {
        let mut lhs = Self::unary(cur)?;
        loop {
            if cur.eat_sym('*') {
                lhs = PolyExpr::Mul(Box::new(lhs), Box::new(Self::unary(cur)?));
            } else if cur.eat_sym('/') {
                lhs = PolyExpr::Div(Box::new(lhs), Box::new(Self::unary(cur)?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(cur: &mut Cursor<'_>) -> Result<PolyExpr> {
        if cur.eat_sym('-') {
            return Ok(PolyExpr::Neg(Box::new(Self::unary(cur)?)));
        }
        let base = Self::atom(cur)?;
        if cur.eat_sym('^') {
            let e = cur.int()?;
            let e = e.to_u32().filter(|&e| e <= 1 << 16);
            match e {
                Some(e) => Ok(PolyExpr::Pow(Box::new(base), e)),
                None => cur.error("exponent out of range"),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(cur: &mut Cursor<'_>) -> Result<PolyExpr> {
        let t = cur.peek();
        match &t.tok {
            Tok::Int(n) => {
                cur.next();
                Ok(PolyExpr::Int(n.clone()))
            }
            Tok::Ident(s) => {
                cur.next();
                Ok(PolyExpr::Var(s.clone()))
            }
            Tok::Sym('(') => {
                cur.next();
                let e = match Self::parse(cur) {
                    Ok(e) => e,
                    Err(_) if cur.peek().tok == Tok::Eof => {
                        return Err(Error::Syntax { line: t.line, col: t.col, msg: "unclosed '('".into() })
                    }
                    Err(err) => return Err(err),
                };
                cur.expect_close(')', t)?;
                Ok(e)
            }
            other => cur.error(format!("expected a polynomial, found {other}")),
        }
    }

    /// Evaluates in `ring`, whose variables are `names`.
    pub fn to_poly(&self, names: &[String], ring: PolyRing) -> Result<Poly> {
        Ok(match self {
            PolyExpr::Int(n) => Poly::constant(ring, ring.domain.from_bigint(n.clone())),
            PolyExpr::Var(v) => match names.iter().position(|n| n == v) {
                Some(i) => Poly::var(ring, i),
                None => return Err(Error::UnknownName(v.clone())),
            },
            PolyExpr::Neg(a) => a.to_poly(names, ring)?.neg(),
            PolyExpr::Add(a, b) => a.to_poly(names, ring)?.add(&b.to_poly(names, ring)?),
            PolyExpr::Sub(a, b) => a.to_poly(names, ring)?.sub(&b.to_poly(names, ring)?),
            PolyExpr::Mul(a, b) => a.to_poly(names, ring)?.mul(&b.to_poly(names, ring)?),
            PolyExpr::Div(a, b) => {
                let num = a.to_poly(names, ring)?;
                let den = b.to_poly(names, ring)?;
                let c = den
                    .constant_value()
                    .filter(|c| !c.is_zero())
                    .ok_or_else(|| Error::MalformedRelation(format!("division by non-constant {self}")))?;
                let inv = ring
                    .domain
                    .inv(&c)
                    .ok_or_else(|| Error::MalformedRelation(format!("{c} is not invertible in {}", ring.domain)))?;
                num.scale(&inv)
            }
            PolyExpr::Pow(a, e) => a.to_poly(names, ring)?.pow(*e),
        })
    }

    /// Syntax tree of a polynomial, printed with the given names.
    pub fn from_poly(p: &Poly, names: &[String]) -> PolyExpr {
        let text = p.display(names).to_string();
        let toks = lex(&text).expect("rendered polynomial lexes");
        PolyExpr::parse(&mut Cursor::new(&toks)).expect("rendered polynomial parses")
    }

    fn prec(&self) -> u8 {
        match self {
            PolyExpr::Add(..) | PolyExpr::Sub(..) => 1,
            PolyExpr::Mul(..) | PolyExpr::Div(..) => 2,
            PolyExpr::Neg(..) => 3,
            PolyExpr::Pow(..) => 4,
            PolyExpr::Int(_) | PolyExpr::Var(_) => 5,
        }
    }

    fn fmt_at(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if self.prec() < min {
            f.write_str("(")?;
            self.fmt_at(f, 0)?;
            return f.write_str(")");
        }
        match self {
            PolyExpr::Int(n) => write!(f, "{n}"),
            PolyExpr::Var(v) => f.write_str(v),
            PolyExpr::Neg(a) => {
                f.write_str("-")?;
                a.fmt_at(f, 3)
            }
            PolyExpr::Add(a, b) | PolyExpr::Sub(a, b) => {
                a.fmt_at(f, 1)?;
                f.write_str(if matches!(self, PolyExpr::Add(..)) { " + " } else { " - " })?;
                b.fmt_at(f, 2)
            }
            PolyExpr::Mul(a, b) | PolyExpr::Div(a, b) => {
                a.fmt_at(f, 2)?;
                f.write_str(if matches!(self, PolyExpr::Mul(..)) { "*" } else { "/" })?;
                b.fmt_at(f, 3)
            }
            PolyExpr::Pow(a, e) => {
                a.fmt_at(f, 5)?;
                write!(f, "^{e}")
            }
        }
    }
}

impl fmt::Display for PolyExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_at(f, 0)
    }
}

/// Parses a complete polynomial over `ring` with variables `names`.
pub fn parse_poly(text: &str, names: &[String], ring: PolyRing) -> Result<Poly> {
    let toks = lex(text)?;
    let mut cur = Cursor::new(&toks);
    let e = PolyExpr::parse(&mut cur)?;
    if !cur.at_end_of_statement() {
        return cur.error(format!("unexpected {}", cur.peek().tok));
    }
    e.to_poly(names, ring)
}

/// Rational constant helper for tests and builders.
pub fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::coeff::Domain;

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    fn roundtrip(s: &str) {
        let toks = lex(s).unwrap();
        let e = PolyExpr::parse(&mut Cursor::new(&toks)).unwrap();
        let printed = e.to_string();
        let toks2 = lex(&printed).unwrap();
        let e2 = PolyExpr::parse(&mut Cursor::new(&toks2)).unwrap();
        assert_eq!(e, e2, "{s} -> {printed}");
    }

    #[test]
    fn parses_and_evaluates() {
        let r = PolyRing::new(1, Domain::Int);
        let p = parse_poly("(2*w - 1)^2 - 17", &names(&["w"]), r).unwrap();
        assert_eq!(p.display(&names(&["w"])).to_string(), "4*w^2 - 4*w - 16");
    }

    #[test]
    fn division_needs_a_unit() {
        let q = PolyRing::new(1, Domain::Rat);
        let p = parse_poly("(x + 1)/2", &names(&["x"]), q).unwrap();
        assert_eq!(p.display(&names(&["x"])).to_string(), "(1/2)*x + 1/2");
        let z = PolyRing::new(1, Domain::Int);
        assert!(matches!(parse_poly("x/2", &names(&["x"]), z), Err(Error::MalformedRelation(_))));
    }

    #[test]
    fn unknown_variable() {
        let r = PolyRing::new(1, Domain::Rat);
        assert_eq!(parse_poly("y + 1", &names(&["x"]), r), Err(Error::UnknownName("y".into())));
    }

    #[test]
    fn dangling_paren_reports_open_position() {
        let r = PolyRing::new(1, Domain::Rat);
        match parse_poly("(x^2 -", &names(&["x"]), r) {
            Err(Error::Syntax { line: 1, col: 1, .. }) => {}
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn printing_round_trips() {
        for s in ["x - (y - z)", "-x^2", "(-x)^2", "2*(a + b)*c", "a - -b", "x/2/3", "x/(2*3)", "--x", "(x*y)^3"] {
            roundtrip(s);
        }
    }

    #[test]
    fn from_poly_matches() {
        let r = PolyRing::new(2, Domain::Rat);
        let n = names(&["x", "y"]);
        let p = parse_poly("(x + y/3)^2 - 1", &n, r).unwrap();
        assert_eq!(PolyExpr::from_poly(&p, &n).to_poly(&n, r).unwrap(), p);
    }
}
