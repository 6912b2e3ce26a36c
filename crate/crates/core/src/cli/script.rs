//! The script language: declarations of rings, maps, primes and
//! expressions, followed by commands that check or certify them.
//!
//! ```text
//! ring A = ZZ[x] / (x^2 - 17)
//! ring B = ZZ[w] / (w^2 - w - 4)
//! map u : A -> B { x -> 2*w - 1 }
//! check psi u
//! ```

use std::collections::HashMap;
use std::fmt;

use num_traits::ToPrimitive;

use crate::deduce::Goal;
use crate::error::{Error, Result};
use crate::kernel::expr::{lex, Cursor, PolyExpr, Tok, Token};
use crate::kernel::Domain;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Base {
    ZZ,
    QQ,
    Fp(u64),
}

impl Base {
    pub fn domain(self) -> Domain {
        match self {
            Base::ZZ => Domain::Int,
            Base::QQ => Domain::Rat,
            Base::Fp(p) => Domain::ModP(p),
        }
    }
}

impl fmt::Display for Base {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Base::ZZ => f.write_str("ZZ"),
            Base::QQ => f.write_str("QQ"),
            Base::Fp(p) => write!(f, "Fp({p})"),
        }
    }
}

/// `{(0), (2)}`, `{(0)} + primes except {2}` and so on.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SpectrumSpec {
    Computed,
    Primes { generic: bool, primes: Vec<u64>, cofinite: bool },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FactSpec {
    Surjective,
    NotSurjective,
    Epi,
    NotEpi,
    Fraction,
    AllPrimesExtended,
    Finite,
    FiniteType,
    Psi,
    Strong,
    NotPsi,
    NotStrong,
    Spectrum(SpectrumSpec),
    ResidueTrivial(String),
    Minimal { ideal: String, finite: bool },
    Compositum(String, String),
    /// Non-surjectivity read off a fiber of dimension at least 2.
    NotSurjectiveAt(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExprSpec {
    Name(String),
    Compose(Box<ExprSpec>, Box<ExprSpec>),
    Quotient(Box<ExprSpec>, String, String),
    Localize(Box<ExprSpec>, PolyExpr, PolyExpr),
    /// Base change along a declared map out of the same source.
    BaseChange(Box<ExprSpec>, String),
    PolyExt(Box<ExprSpec>),
    Diagonal(Box<ExprSpec>, Box<ExprSpec>),
    Idealize(String, String),
    Reduce(Box<ExprSpec>, String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CheckProp {
    Psi,
    Strong,
    Epi,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Stmt {
    Ring { name: String, base: Base, vars: Vec<String>, rels: Vec<PolyExpr> },
    Module { name: String, over: String, gens: Vec<String>, rels: Vec<PolyExpr> },
    Map { name: String, source: String, target: String, images: Vec<(String, PolyExpr)> },
    Prime { name: String, ring: String, gens: Vec<PolyExpr> },
    Ideal { name: String, ring: String, gens: Vec<PolyExpr> },
    Fact { target: String, fact: FactSpec },
    Expr { name: String, expr: ExprSpec },
    Check { prop: CheckProp, target: String },
    Fiber { map: String, prime: String },
    Certify { goal: Goal, target: String },
    Sweep { from: i64, to: i64 },
    Fuzz { seed: u64, count: usize, bound: usize },
}

impl Stmt {
    pub fn is_command(&self) -> bool {
        matches!(
            self,
            Stmt::Check { .. } | Stmt::Fiber { .. } | Stmt::Certify { .. } | Stmt::Sweep { .. } | Stmt::Fuzz { .. }
        )
    }

    /// The name a declaration introduces.
    pub fn declares(&self) -> Option<(&str, Kind)> {
        match self {
            Stmt::Ring { name, .. } => Some((name, Kind::Ring)),
            Stmt::Module { name, .. } => Some((name, Kind::Module)),
            Stmt::Map { name, .. } => Some((name, Kind::Map)),
            Stmt::Prime { name, .. } => Some((name, Kind::Prime)),
            Stmt::Ideal { name, .. } => Some((name, Kind::Ideal)),
            Stmt::Expr { name, .. } => Some((name, Kind::Expr)),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Ring,
    Module,
    Map,
    Prime,
    Ideal,
    Expr,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::Ring => "ring",
            Kind::Module => "module",
            Kind::Map => "map",
            Kind::Prime => "prime",
            Kind::Ideal => "ideal",
            Kind::Expr => "expr",
        })
    }
}

/// A parsed script. Line numbers are kept for error reports and do not
/// take part in equality.
#[derive(Clone, Debug, Default)]
pub struct Script {
    pub stmts: Vec<Stmt>,
    pub lines: Vec<usize>,
}

impl PartialEq for Script {
    fn eq(&self, other: &Self) -> bool {
        self.stmts == other.stmts
    }
}

impl Eq for Script {}

impl Script {
    pub fn count(&self, kind: Kind) -> usize {
        self.stmts.iter().filter(|s| matches!(s.declares(), Some((_, k)) if k == kind)).count()
    }

    /// Canonical text; parsing it gives back the same statements.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for s in &self.stmts {
            out.push_str(&s.to_string());
            out.push('\n');
        }
        out
    }
}

pub fn parse_script(text: &str) -> Result<Script> {
    let toks = lex(text)?;
    let mut cur = Cursor::new(&toks);
    let mut script = Script::default();
    loop {
        while cur.peek().tok == Tok::Newline {
            cur.next();
        }
        if cur.peek().tok == Tok::Eof {
            break;
        }
        let line = cur.peek().line;
        let stmt = statement(&mut cur)?;
        if !cur.at_end_of_statement() {
            return cur.error(format!("unexpected {} after the statement", cur.peek().tok));
        }
        script.stmts.push(stmt);
        script.lines.push(line);
    }
    resolve(&script)?;
    Ok(script)
}

fn statement(cur: &mut Cursor<'_>) -> Result<Stmt> {
    let kw = cur.peek();
    let keyword = match &kw.tok {
        Tok::Ident(s) => s.clone(),
        t => return cur.error(format!("expected a keyword, found {t}")),
    };
    cur.next();
    match keyword.as_str() {
        "ring" => {
            let name = cur.ident()?;
            cur.expect_sym('=')?;
            let base = base(cur)?;
            let mut vars = Vec::new();
            if let Some(open) = eat(cur, '[') {
                loop {
                    vars.push(cur.ident()?);
                    if !cur.eat_sym(',') {
                        break;
                    }
                }
                cur.expect_close(']', open)?;
            }
            let rels = if cur.eat_sym('/') { poly_list(cur)? } else { Vec::new() };
            Ok(Stmt::Ring { name, base, vars, rels })
        }
        "module" => {
            let name = cur.ident()?;
            cur.expect_keyword("over")?;
            let over = cur.ident()?;
            cur.expect_sym('=')?;
            let open = cur.expect_sym('[')?;
            let mut gens = Vec::new();
            loop {
                gens.push(cur.ident()?);
                if !cur.eat_sym(',') {
                    break;
                }
            }
            cur.expect_close(']', open)?;
            let rels = if cur.eat_sym('/') { poly_list(cur)? } else { Vec::new() };
            Ok(Stmt::Module { name, over, gens, rels })
        }
        "map" => {
            let name = cur.ident()?;
            cur.expect_sym(':')?;
            let source = cur.ident()?;
            arrow(cur)?;
            let target = cur.ident()?;
            let mut images = Vec::new();
            if let Some(open) = eat(cur, '{') {
                if !cur.at_sym('}') {
                    loop {
                        let v = cur.ident()?;
                        arrow(cur)?;
                        images.push((v, PolyExpr::parse(cur).map_err(|e| unclosed(cur, open, e))?));
                        if !cur.eat_sym(',') {
                            break;
                        }
                    }
                }
                cur.expect_close('}', open)?;
            }
            Ok(Stmt::Map { name, source, target, images })
        }
        "prime" | "ideal" => {
            let name = cur.ident()?;
            cur.expect_keyword("in")?;
            let ring = cur.ident()?;
            cur.expect_sym('=')?;
            let gens = poly_list(cur)?;
            Ok(if keyword == "prime" { Stmt::Prime { name, ring, gens } } else { Stmt::Ideal { name, ring, gens } })
        }
        "fact" => {
            let target = cur.ident()?;
            let fact = fact(cur)?;
            Ok(Stmt::Fact { target, fact })
        }
        "expr" => {
            let name = cur.ident()?;
            cur.expect_sym('=')?;
            let expr = expr(cur)?;
            Ok(Stmt::Expr { name, expr })
        }
        "check" => {
            let (w, t) = word(cur)?;
            let prop = match w.as_str() {
                "psi" => CheckProp::Psi,
                "strong" => CheckProp::Strong,
                "epi" => CheckProp::Epi,
                other => return at(t, format!("expected psi, strong or epi, found {other}")),
            };
            Ok(Stmt::Check { prop, target: cur.ident()? })
        }
        "fiber" => {
            let map = cur.ident()?;
            let prime = cur.ident()?;
            Ok(Stmt::Fiber { map, prime })
        }
        "certify" => {
            let negated = cur.at_keyword("not") && {
                cur.next();
                true
            };
            let (w, t) = word(cur)?;
            let goal = match (negated, w.as_str()) {
                (false, "psi") => Goal::Psi,
                (false, "strong") => Goal::Strong,
                (false, "epi") => Goal::Epi,
                (true, "psi") => Goal::NotPsi,
                (true, "strong") => Goal::NotStrong,
                (_, other) => return at(t, format!("expected a goal, found {other}")),
            };
            Ok(Stmt::Certify { goal, target: cur.ident()? })
        }
        "sweep" => {
            let from = signed(cur)?;
            let to = signed(cur)?;
            if from > to {
                return cur.error("sweep range is empty");
            }
            Ok(Stmt::Sweep { from, to })
        }
        "fuzz" => {
            let seed = unsigned(cur)?;
            let count = unsigned(cur)? as usize;
            let bound = unsigned(cur)? as usize;
            if count == 0 {
                return cur.error("fuzz needs a positive count");
            }
            Ok(Stmt::Fuzz { seed, count, bound })
        }
        _ => Err(Error::Syntax { line: kw.line, col: kw.col, msg: format!("unknown keyword `{keyword}`") }),
    }
}

fn word<'a>(cur: &mut Cursor<'a>) -> Result<(String, &'a Token)> {
    let t = cur.peek();
    Ok((cur.ident()?, t))
}

fn at<T>(t: &Token, msg: String) -> Result<T> {
    Err(Error::Syntax { line: t.line, col: t.col, msg })
}

fn eat<'a>(cur: &mut Cursor<'a>, c: char) -> Option<&'a Token> {
    if cur.at_sym(c) {
        Some(cur.next())
    } else {
        None
    }
}

fn arrow(cur: &mut Cursor<'_>) -> Result<()> {
    if cur.peek().tok == Tok::Arrow {
        cur.next();
        Ok(())
    } else {
        cur.error(format!("expected '->', found {}", cur.peek().tok))
    }
}

/// An error that ran into the end of input is blamed on the open bracket.
fn unclosed(cur: &Cursor<'_>, open: &Token, e: Error) -> Error {
    if cur.peek().tok == Tok::Eof {
        let c = match open.tok {
            Tok::Sym(c) => c,
            _ => '(',
        };
        Error::Syntax { line: open.line, col: open.col, msg: format!("unclosed '{c}'") }
    } else {
        e
    }
}

fn base(cur: &mut Cursor<'_>) -> Result<Base> {
    let (w, t) = word(cur)?;
    match w.as_str() {
        "ZZ" => Ok(Base::ZZ),
        "QQ" => Ok(Base::QQ),
        "Fp" => {
            let open = cur.expect_sym('(')?;
            let p = unsigned(cur)?;
            cur.expect_close(')', open)?;
            Ok(Base::Fp(p))
        }
        other => at(t, format!("expected ZZ, QQ or Fp(p), found {other}")),
    }
}

fn poly_list(cur: &mut Cursor<'_>) -> Result<Vec<PolyExpr>> {
    let open = cur.expect_sym('(')?;
    let mut out = Vec::new();
    if cur.eat_sym(')') {
        return Ok(out);
    }
    loop {
        out.push(PolyExpr::parse(cur).map_err(|e| unclosed(cur, open, e))?);
        if !cur.eat_sym(',') {
            break;
        }
    }
    cur.expect_close(')', open)?;
    Ok(out)
}

fn signed(cur: &mut Cursor<'_>) -> Result<i64> {
    let neg = cur.eat_sym('-');
    let n = cur.int()?;
    let n = if neg { -n } else { n };
    match n.to_i64() {
        Some(v) => Ok(v),
        None => cur.error("integer out of range"),
    }
}

fn unsigned(cur: &mut Cursor<'_>) -> Result<u64> {
    let n = cur.int()?;
    match n.to_u64() {
        Some(v) => Ok(v),
        None => cur.error("expected a non-negative integer"),
    }
}

fn fact(cur: &mut Cursor<'_>) -> Result<FactSpec> {
    let (w, t) = word(cur)?;
    Ok(match w.as_str() {
        "finite" => FactSpec::Finite,
        "finite_type" => FactSpec::FiniteType,
        "surjective" => FactSpec::Surjective,
        "epi" => FactSpec::Epi,
        "fraction" => FactSpec::Fraction,
        "all_primes_extended" => FactSpec::AllPrimesExtended,
        "psi" => FactSpec::Psi,
        "strong" => FactSpec::Strong,
        "not" => {
            let (w, t) = word(cur)?;
            match w.as_str() {
            "surjective" => {
                if cur.at_keyword("at") {
                    cur.next();
                    FactSpec::NotSurjectiveAt(cur.ident()?)
                } else {
                    FactSpec::NotSurjective
                }
            }
            "epi" => FactSpec::NotEpi,
            "psi" => FactSpec::NotPsi,
            "strong" => FactSpec::NotStrong,
            other => return at(t, format!("`not {other}` is not a fact")),
            }
        }
        "spectrum" => FactSpec::Spectrum(spectrum(cur)?),
        "residue_trivial" => FactSpec::ResidueTrivial(cur.ident()?),
        "minimal" => {
            let ideal = cur.ident()?;
            let (w, t) = word(cur)?;
            let finite = match w.as_str() {
                "finite" => true,
                "infinite" => false,
                other => return at(t, format!("expected finite or infinite, found {other}")),
            };
            FactSpec::Minimal { ideal, finite }
        }
        "compositum" => {
            let a = cur.ident()?;
            let b = cur.ident()?;
            FactSpec::Compositum(a, b)
        }
        other => return at(t, format!("unknown fact `{other}`")),
    })
}

fn spectrum(cur: &mut Cursor<'_>) -> Result<SpectrumSpec> {
    if cur.at_keyword("computed") {
        cur.next();
        return Ok(SpectrumSpec::Computed);
    }
    let mut generic = false;
    let mut primes = Vec::new();
    let mut cofinite = false;
    if let Some(open) = eat(cur, '{') {
        if !cur.at_sym('}') {
            loop {
                let o = cur.expect_sym('(')?;
                let p = unsigned(cur)?;
                cur.expect_close(')', o)?;
                if p == 0 {
                    generic = true;
                } else if crate::kernel::primes::is_prime_u64(p) {
                    primes.push(p);
                } else {
                    return cur.error(format!("{p} is not prime"));
                }
                if !cur.eat_sym(',') {
                    break;
                }
            }
        }
        cur.expect_close('}', open)?;
        if cur.eat_sym('+') {
            cur.expect_keyword("primes")?;
            cofinite = true;
        }
    } else {
        cur.expect_keyword("primes")?;
        cofinite = true;
    }
    if cofinite {
        if !primes.is_empty() {
            return cur.error("list excluded primes after `except`");
        }
        if cur.at_keyword("except") {
            cur.next();
            let open = cur.expect_sym('{')?;
            loop {
                primes.push(unsigned(cur)?);
                if !cur.eat_sym(',') {
                    break;
                }
            }
            cur.expect_close('}', open)?;
        }
    }
    primes.sort_unstable();
    primes.dedup();
    Ok(SpectrumSpec::Primes { generic, primes, cofinite })
}

const EXPR_FORMS: &[&str] =
    &["compose", "quotient", "localize", "basechange", "polyext", "diagonal", "idealize", "reduce"];

fn expr(cur: &mut Cursor<'_>) -> Result<ExprSpec> {
    let name = cur.ident()?;
    if !cur.at_sym('(') || !EXPR_FORMS.contains(&name.as_str()) {
        return Ok(ExprSpec::Name(name));
    }
    let open = cur.next();
    let e = expr_args(cur, &name).map_err(|e| unclosed(cur, open, e))?;
    cur.expect_close(')', open)?;
    Ok(e)
}

fn expr_args(cur: &mut Cursor<'_>, form: &str) -> Result<ExprSpec> {
    let comma = |cur: &mut Cursor<'_>| cur.expect_sym(',').map(|_| ());
    Ok(match form {
        "compose" => {
            let a = expr(cur)?;
            comma(cur)?;
            ExprSpec::Compose(Box::new(a), Box::new(expr(cur)?))
        }
        "quotient" => {
            let a = expr(cur)?;
            comma(cur)?;
            let i = cur.ident()?;
            comma(cur)?;
            ExprSpec::Quotient(Box::new(a), i, cur.ident()?)
        }
        "localize" => {
            let a = expr(cur)?;
            comma(cur)?;
            let s = PolyExpr::parse(cur)?;
            comma(cur)?;
            ExprSpec::Localize(Box::new(a), s, PolyExpr::parse(cur)?)
        }
        "basechange" => {
            let a = expr(cur)?;
            comma(cur)?;
            ExprSpec::BaseChange(Box::new(a), cur.ident()?)
        }
        "polyext" => ExprSpec::PolyExt(Box::new(expr(cur)?)),
        "diagonal" => {
            let a = expr(cur)?;
            comma(cur)?;
            ExprSpec::Diagonal(Box::new(a), Box::new(expr(cur)?))
        }
        "idealize" => {
            let r = cur.ident()?;
            comma(cur)?;
            ExprSpec::Idealize(r, cur.ident()?)
        }
        "reduce" => {
            let a = expr(cur)?;
            comma(cur)?;
            ExprSpec::Reduce(Box::new(a), cur.ident()?)
        }
        _ => unreachable!("checked against EXPR_FORMS"),
    })
}

/// Checks that every name is declared once, before use, with the right kind.
fn resolve(script: &Script) -> Result<()> {
    let mut seen: HashMap<&str, Kind> = HashMap::new();
    for (s, &line) in script.stmts.iter().zip(&script.lines) {
        let want = |name: &str, kinds: &[Kind]| -> Result<()> {
            match seen.get(name) {
                Some(k) if kinds.contains(k) => Ok(()),
                Some(k) => Err(Error::Syntax {
                    line,
                    col: 1,
                    msg: format!("`{name}` is a {k}, expected {}", kinds.iter().map(|k| k.to_string()).collect::<Vec<_>>().join(" or ")),
                }),
                None => Err(Error::UnknownName(format!("{name} (line {line})"))),
            }
        };
        const MORPHISM: &[Kind] = &[Kind::Map, Kind::Expr];
        const IDEAL: &[Kind] = &[Kind::Ideal, Kind::Prime];
        match s {
            Stmt::Ring { .. } | Stmt::Sweep { .. } | Stmt::Fuzz { .. } => {}
            Stmt::Module { over, .. } => want(over, &[Kind::Ring])?,
            Stmt::Map { source, target, .. } => {
                want(source, &[Kind::Ring])?;
                want(target, &[Kind::Ring])?;
            }
            Stmt::Prime { ring, .. } | Stmt::Ideal { ring, .. } => want(ring, &[Kind::Ring])?,
            Stmt::Fact { target, fact } => {
                want(target, &[Kind::Map])?;
                match fact {
                    FactSpec::ResidueTrivial(p) | FactSpec::NotSurjectiveAt(p) => want(p, &[Kind::Prime])?,
                    FactSpec::Minimal { ideal, .. } => want(ideal, IDEAL)?,
                    FactSpec::Compositum(a, b) => {
                        want(a, MORPHISM)?;
                        want(b, MORPHISM)?;
                    }
                    _ => {}
                }
            }
            Stmt::Expr { expr, .. } => check_expr(expr, &want)?,
            Stmt::Check { target, .. } | Stmt::Certify { target, .. } => want(target, MORPHISM)?,
            Stmt::Fiber { map, prime } => {
                want(map, MORPHISM)?;
                want(prime, &[Kind::Prime])?;
            }
        }
        if let Some((name, kind)) = s.declares() {
            if seen.insert(name, kind).is_some() {
                return Err(Error::DuplicateName(format!("{name} (line {line})")));
            }
        }
    }
    Ok(())
}

fn check_expr(e: &ExprSpec, want: &dyn Fn(&str, &[Kind]) -> Result<()>) -> Result<()> {
    const MORPHISM: &[Kind] = &[Kind::Map, Kind::Expr];
    const IDEAL: &[Kind] = &[Kind::Ideal, Kind::Prime];
    match e {
        ExprSpec::Name(n) => want(n, MORPHISM),
        ExprSpec::Compose(a, b) | ExprSpec::Diagonal(a, b) => {
            check_expr(a, want)?;
            check_expr(b, want)
        }
        ExprSpec::Quotient(a, i, j) => {
            check_expr(a, want)?;
            want(i, IDEAL)?;
            want(j, IDEAL)
        }
        ExprSpec::Localize(a, _, _) | ExprSpec::PolyExt(a) => check_expr(a, want),
        ExprSpec::BaseChange(a, v) => {
            check_expr(a, want)?;
            want(v, &[Kind::Map])
        }
        ExprSpec::Idealize(r, m) => {
            want(r, &[Kind::Ring])?;
            want(m, &[Kind::Module])
        }
        ExprSpec::Reduce(a, i) => {
            check_expr(a, want)?;
            want(i, IDEAL)
        }
    }
}

fn join<T: fmt::Display>(items: &[T]) -> String {
    items.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
}

impl fmt::Display for SpectrumSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpectrumSpec::Computed => f.write_str("computed"),
            SpectrumSpec::Primes { generic, primes, cofinite: false } => {
                let mut items: Vec<String> = Vec::new();
                if *generic {
                    items.push("(0)".into());
                }
                items.extend(primes.iter().map(|p| format!("({p})")));
                write!(f, "{{{}}}", items.join(", "))
            }
            SpectrumSpec::Primes { generic, primes, cofinite: true } => {
                if *generic {
                    f.write_str("{(0)} + ")?;
                }
                f.write_str("primes")?;
                if !primes.is_empty() {
                    write!(f, " except {{{}}}", join(primes))?;
                }
                Ok(())
            }
        }
    }
}

impl fmt::Display for FactSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FactSpec::Surjective => f.write_str("surjective"),
            FactSpec::NotSurjective => f.write_str("not surjective"),
            FactSpec::Epi => f.write_str("epi"),
            FactSpec::NotEpi => f.write_str("not epi"),
            FactSpec::Fraction => f.write_str("fraction"),
            FactSpec::AllPrimesExtended => f.write_str("all_primes_extended"),
            FactSpec::Finite => f.write_str("finite"),
            FactSpec::FiniteType => f.write_str("finite_type"),
            FactSpec::Psi => f.write_str("psi"),
            FactSpec::Strong => f.write_str("strong"),
            FactSpec::NotPsi => f.write_str("not psi"),
            FactSpec::NotStrong => f.write_str("not strong"),
            FactSpec::Spectrum(s) => write!(f, "spectrum {s}"),
            FactSpec::ResidueTrivial(p) => write!(f, "residue_trivial {p}"),
            FactSpec::Minimal { ideal, finite } => {
                write!(f, "minimal {ideal} {}", if *finite { "finite" } else { "infinite" })
            }
            FactSpec::Compositum(a, b) => write!(f, "compositum {a} {b}"),
            FactSpec::NotSurjectiveAt(p) => write!(f, "not surjective at {p}"),
        }
    }
}

impl fmt::Display for ExprSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExprSpec::Name(n) => f.write_str(n),
            ExprSpec::Compose(a, b) => write!(f, "compose({a}, {b})"),
            ExprSpec::Quotient(a, i, j) => write!(f, "quotient({a}, {i}, {j})"),
            ExprSpec::Localize(a, s, t) => write!(f, "localize({a}, {s}, {t})"),
            ExprSpec::BaseChange(a, v) => write!(f, "basechange({a}, {v})"),
            ExprSpec::PolyExt(a) => write!(f, "polyext({a})"),
            ExprSpec::Diagonal(a, b) => write!(f, "diagonal({a}, {b})"),
            ExprSpec::Idealize(r, m) => write!(f, "idealize({r}, {m})"),
            ExprSpec::Reduce(a, i) => write!(f, "reduce({a}, {i})"),
        }
    }
}

impl fmt::Display for CheckProp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CheckProp::Psi => "psi",
            CheckProp::Strong => "strong",
            CheckProp::Epi => "epi",
        })
    }
}

pub fn goal_words(g: Goal) -> &'static str {
    match g {
        Goal::Psi => "psi",
        Goal::Strong => "strong",
        Goal::Epi => "epi",
        Goal::NotPsi => "not psi",
        Goal::NotStrong => "not strong",
    }
}

impl fmt::Display for Stmt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Stmt::Ring { name, base, vars, rels } => {
                write!(f, "ring {name} = {base}")?;
                if !vars.is_empty() {
                    write!(f, "[{}]", vars.join(", "))?;
                }
                if !rels.is_empty() {
                    write!(f, " / ({})", join(rels))?;
                }
                Ok(())
            }
            Stmt::Module { name, over, gens, rels } => {
                write!(f, "module {name} over {over} = [{}]", gens.join(", "))?;
                if !rels.is_empty() {
                    write!(f, " / ({})", join(rels))?;
                }
                Ok(())
            }
            Stmt::Map { name, source, target, images } => {
                write!(f, "map {name} : {source} -> {target}")?;
                if !images.is_empty() {
                    let body: Vec<String> = images.iter().map(|(v, p)| format!("{v} -> {p}")).collect();
                    write!(f, " {{ {} }}", body.join(", "))?;
                }
                Ok(())
            }
            Stmt::Prime { name, ring, gens } => write!(f, "prime {name} in {ring} = ({})", join(gens)),
            Stmt::Ideal { name, ring, gens } => write!(f, "ideal {name} in {ring} = ({})", join(gens)),
            Stmt::Fact { target, fact } => write!(f, "fact {target} {fact}"),
            Stmt::Expr { name, expr } => write!(f, "expr {name} = {expr}"),
            Stmt::Check { prop, target } => write!(f, "check {prop} {target}"),
            Stmt::Fiber { map, prime } => write!(f, "fiber {map} {prime}"),
            Stmt::Certify { goal, target } => write!(f, "certify {} {target}", goal_words(*goal)),
            Stmt::Sweep { from, to } => write!(f, "sweep {from} {to}"),
            Stmt::Fuzz { seed, count, bound } => write!(f, "fuzz {seed} {count} {bound}"),
        }
    }
}
