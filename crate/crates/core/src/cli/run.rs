//! Executes parsed scripts statement by statement.

use std::collections::HashMap;
use std::fmt;
use std::time::Instant;

use serde::Serialize;

use super::fuzz::oracle_fuzz;
use super::script::{goal_words, CheckProp, ExprSpec, FactSpec, Script, SpectrumSpec, Stmt};
use super::sweep::sweep_quadratic;
use crate::deduce::{
    attach_fact, certify, explain, non_surjectivity_from_fiber, spectral_image, Certificate, Fact, FactTag, Goal,
    MorphismExpr, SpecImage,
};
use crate::error::{Error, Result};
use crate::kernel::expr::PolyExpr;
use crate::kernel::primes::is_prime_u64;
use crate::kernel::{Domain, Poly, PolyRing};
use crate::psi::{decide, fiber_ring, is_epimorphism, Epi, FiberVerdict, Property, Status, DEFAULT_SEARCH_BOUND};
use crate::rings::{verify_prime, FpAlgebra, IdealSpec, ModulePresentation, PrimeSpec, RingMorphism};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Engine {
    Symbolic,
    Finite,
    Deduction,
    /// Declarations that failed before any engine ran.
    Script,
}

impl fmt::Display for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Engine::Symbolic => "symbolic",
            Engine::Finite => "finite",
            Engine::Deduction => "deduction",
            Engine::Script => "script",
        })
    }
}

/// The outcome of one command, or of a declaration that failed.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub verdict: String,
    pub witness: Option<String>,
    pub trace: Vec<String>,
    pub millis: u64,
    pub engine: Engine,
    #[serde(skip)]
    pub exit: u8,
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("reports serialize")
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "> {}", self.command)?;
        writeln!(f, "  verdict: {}", self.verdict)?;
        if let Some(w) = &self.witness {
            writeln!(f, "  witness: {w}")?;
        }
        for t in &self.trace {
            writeln!(f, "  | {t}")?;
        }
        write!(f, "  engine: {}, {} ms", self.engine, self.millis)
    }
}

/// 1 for script errors, 2 for unsupported inputs, 3 for internal limits.
pub fn exit_code(e: &Error) -> u8 {
    match e {
        Error::UnsupportedFiber(_) | Error::UnsupportedSource(_) => 2,
        Error::ResourceLimit(_) | Error::TooLarge { .. } => 3,
        _ => 1,
    }
}

/// Overall exit status of a run.
pub fn overall_exit(reports: &[Report]) -> u8 {
    reports.iter().map(|r| r.exit).max().unwrap_or(0)
}

#[derive(Clone, Debug)]
pub struct RunOptions {
    pub bound: u64,
    pub parallel: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions { bound: DEFAULT_SEARCH_BOUND, parallel: false }
    }
}

/// Which commands to execute; declarations always run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Selection {
    All,
    DeclarationsOnly,
    /// Statement indices.
    Only(Vec<usize>),
}

pub fn run(script: &Script, selection: &Selection, opts: &RunOptions) -> Vec<Report> {
    let mut runner = Runner::new(opts.clone());
    let mut out = Vec::new();
    for (i, s) in script.stmts.iter().enumerate() {
        let wanted = match selection {
            Selection::All => true,
            Selection::DeclarationsOnly => false,
            Selection::Only(ix) => ix.contains(&i),
        };
        if s.is_command() && !wanted {
            continue;
        }
        out.extend(runner.exec(s));
    }
    out
}

/// Runs the declarations, then certifies `target` (the last expression or
/// map when `None`).
pub fn certify_script(script: &Script, target: Option<&str>, goal: Goal, opts: &RunOptions) -> Vec<Report> {
    let mut runner = Runner::new(opts.clone());
    let mut out = Vec::new();
    for s in script.stmts.iter().filter(|s| !s.is_command()) {
        out.extend(runner.exec(s));
    }
    let target = match target {
        Some(t) => t.to_string(),
        None => {
            let last = script.stmts.iter().rev().find_map(|s| match s {
                Stmt::Expr { name, .. } | Stmt::Map { name, .. } => Some(name.clone()),
                _ => None,
            });
            match last {
                Some(t) => t,
                None => {
                    out.push(error_report(
                        format!("certify {}", goal_words(goal)),
                        Engine::Deduction,
                        &Error::UnknownName("the script declares no map or expression".into()),
                        0,
                    ));
                    return out;
                }
            }
        }
    };
    out.extend(runner.exec(&Stmt::Certify { goal, target }));
    out
}

fn error_report(command: String, engine: Engine, e: &Error, millis: u64) -> Report {
    Report {
        command,
        verdict: "error".into(),
        witness: Some(e.to_string()),
        trace: Vec::new(),
        millis,
        engine,
        exit: exit_code(e),
    }
}

/// Named objects declared so far.
pub struct Runner {
    opts: RunOptions,
    rings: HashMap<String, FpAlgebra>,
    modules: HashMap<String, ModulePresentation>,
    maps: HashMap<String, MorphismExpr>,
    primes: HashMap<String, PrimeSpec>,
    ideals: HashMap<String, IdealSpec>,
    exprs: HashMap<String, ExprSpec>,
}

impl Runner {
    pub fn new(opts: RunOptions) -> Self {
        Runner {
            opts,
            rings: HashMap::new(),
            modules: HashMap::new(),
            maps: HashMap::new(),
            primes: HashMap::new(),
            ideals: HashMap::new(),
            exprs: HashMap::new(),
        }
    }

    /// Runs one statement; declarations report only when they fail.
    pub fn exec(&mut self, s: &Stmt) -> Option<Report> {
        let start = Instant::now();
        let engine = engine_of(s);
        let res = if s.is_command() { self.command(s).map(Some) } else { self.declare(s).map(|_| None) };
        let millis = start.elapsed().as_millis() as u64;
        match res {
            Ok(Some(mut r)) => {
                r.millis = millis;
                Some(r)
            }
            Ok(None) => None,
            Err(e) => Some(error_report(s.to_string(), engine, &e, millis)),
        }
    }

    /// Declared maps, with the facts attached so far, sorted by name.
    pub fn atoms(&self) -> Vec<&MorphismExpr> {
        let mut v: Vec<&MorphismExpr> = self.maps.values().collect();
        v.sort_by(|a, b| a.name().cmp(b.name()));
        v
    }

    /// Every declared expression built from the current state, sorted by name.
    pub fn expressions(&self) -> Vec<(String, Result<MorphismExpr>)> {
        let mut names: Vec<&String> = self.exprs.keys().collect();
        names.sort();
        names.into_iter().map(|n| (n.clone(), self.build(&ExprSpec::Name(n.clone())))).collect()
    }

    fn ring(&self, name: &str) -> Result<&FpAlgebra> {
        self.rings.get(name).ok_or_else(|| Error::UnknownName(name.into()))
    }

    fn ideal(&self, name: &str) -> Result<IdealSpec> {
        if let Some(p) = self.primes.get(name) {
            return Ok(p.ideal().clone());
        }
        self.ideals.get(name).cloned().ok_or_else(|| Error::UnknownName(name.into()))
    }

    fn prime(&self, name: &str) -> Result<&PrimeSpec> {
        self.primes.get(name).ok_or_else(|| Error::UnknownName(name.into()))
    }

    fn declare(&mut self, s: &Stmt) -> Result<()> {
        match s {
            Stmt::Ring { name, base, vars, rels } => {
                let d = base.domain();
                if let Domain::ModP(p) = d {
                    if !is_prime_u64(p) {
                        return Err(Error::MalformedRelation(format!("Fp({p}) needs a prime modulus")));
                    }
                }
                let ring = PolyRing::new(vars.len(), d);
                let rels = polys(rels, vars, ring)?;
                self.rings.insert(name.clone(), FpAlgebra::new(d, vars.clone(), rels)?);
            }
            Stmt::Module { name, over, gens, rels } => {
                let a = self.ring(over)?;
                let gens: Vec<&str> = gens.iter().map(String::as_str).collect();
                let rels: Vec<String> = rels.iter().map(|r| r.to_string()).collect();
                let rels: Vec<&str> = rels.iter().map(String::as_str).collect();
                self.modules.insert(name.clone(), ModulePresentation::parse(a, &gens, &rels)?);
            }
            Stmt::Map { name, source, target, images } => {
                let a = self.ring(source)?.clone();
                let b = self.ring(target)?.clone();
                for (v, _) in images {
                    if a.var_index(v).is_none() {
                        return Err(Error::UnknownName(format!("{v} is not a generator of {source}")));
                    }
                }
                let mut out = Vec::with_capacity(a.nvars());
                for v in a.names() {
                    let (_, e) = images
                        .iter()
                        .find(|(n, _)| n == v)
                        .ok_or_else(|| Error::MalformedRelation(format!("no image given for `{v}`")))?;
                    out.push(e.to_poly(b.names(), b.ring())?);
                }
                let u = RingMorphism::new(a, b, out)?;
                self.maps.insert(name.clone(), MorphismExpr::atom(name.clone(), u));
            }
            Stmt::Prime { name, ring, gens } => {
                let a = self.ring(ring)?;
                let i = IdealSpec::new(a, polys(gens, a.names(), a.ring())?)?;
                self.primes.insert(name.clone(), verify_prime(&i)?);
            }
            Stmt::Ideal { name, ring, gens } => {
                let a = self.ring(ring)?;
                let i = IdealSpec::new(a, polys(gens, a.names(), a.ring())?)?;
                self.ideals.insert(name.clone(), i);
            }
            Stmt::Fact { target, fact } => {
                let fact = self.fact(target, fact)?;
                let e = self.maps.remove(target).ok_or_else(|| Error::UnknownName(target.clone()))?;
                let kept = e.clone();
                match attach_fact(e, fact) {
                    Ok(e) => {
                        self.maps.insert(target.clone(), e);
                    }
                    Err(err) => {
                        self.maps.insert(target.clone(), kept);
                        return Err(err);
                    }
                }
            }
            Stmt::Expr { name, expr } => {
                self.build(expr)?;
                self.exprs.insert(name.clone(), expr.clone());
            }
            _ => unreachable!("commands are not declarations"),
        }
        Ok(())
    }

    fn fact(&self, target: &str, spec: &FactSpec) -> Result<Fact> {
        let u = self.maps.get(target).ok_or_else(|| Error::UnknownName(target.into()))?;
        let presented = || {
            u.morphism().presented().cloned().ok_or_else(|| Error::MeaninglessFact(format!("{target} has no presentation")))
        };
        let tag = match spec {
            FactSpec::Surjective => FactTag::Surjective,
            FactSpec::NotSurjective => FactTag::NotSurjective,
            FactSpec::Epi => FactTag::Epimorphism,
            FactSpec::NotEpi => FactTag::NotEpimorphism,
            FactSpec::Fraction => FactTag::FractionMap,
            FactSpec::AllPrimesExtended => FactTag::AllPrimesExtended,
            FactSpec::Finite => FactTag::Finite,
            FactSpec::FiniteType => FactTag::FiniteType,
            FactSpec::Psi => FactTag::KnownPsi,
            FactSpec::Strong => FactTag::KnownStrong,
            FactSpec::NotPsi => FactTag::KnownNotPsi("asserted".into()),
            FactSpec::NotStrong => FactTag::KnownNotStrong("asserted".into()),
            FactSpec::Spectrum(SpectrumSpec::Computed) => {
                let img = spectral_image(&presented()?)?
                    .ok_or_else(|| Error::MeaninglessFact(format!("spectrum of {target}: the source is not the integers")))?;
                return Ok(Fact::computed(FactTag::SpectraImage(img), "spectral_image"));
            }
            FactSpec::Spectrum(SpectrumSpec::Primes { generic, primes, cofinite }) => {
                let img = if *cofinite {
                    SpecImage::all_but(*generic, primes.iter().copied())
                } else {
                    SpecImage::finite(*generic, primes.iter().copied())
                };
                FactTag::SpectraImage(img)
            }
            FactSpec::ResidueTrivial(p) => FactTag::ResidueTrivialAt(self.prime(p)?.clone()),
            FactSpec::Minimal { ideal, finite } => {
                FactTag::MinimalExtension { crucial: self.ideal(ideal)?, finite: *finite }
            }
            FactSpec::Compositum(a, b) => FactTag::Compositum {
                left: Box::new(self.build(&ExprSpec::Name(a.clone()))?),
                right: Box::new(self.build(&ExprSpec::Name(b.clone()))?),
            },
            FactSpec::NotSurjectiveAt(p) => {
                return non_surjectivity_from_fiber(&presented()?, self.prime(p)?)?.ok_or_else(|| {
                    Error::MeaninglessFact(format!("the fiber of {target} at {p} does not show non-surjectivity"))
                });
            }
        };
        Ok(Fact::asserted(tag))
    }

    /// Builds an expression from the current declarations and facts.
    fn build(&self, e: &ExprSpec) -> Result<MorphismExpr> {
        Ok(match e {
            ExprSpec::Name(n) => {
                if let Some(u) = self.maps.get(n) {
                    u.clone()
                } else if let Some(spec) = self.exprs.get(n) {
                    self.build(spec)?.named(n.clone())
                } else {
                    return Err(Error::UnknownName(n.clone()));
                }
            }
            ExprSpec::Compose(a, b) => MorphismExpr::compose(self.build(a)?, self.build(b)?)?,
            ExprSpec::Quotient(a, i, j) => MorphismExpr::quotient(self.build(a)?, self.ideal(i)?, self.ideal(j)?)?,
            ExprSpec::Localize(a, s, t) => {
                let inner = self.build(a)?;
                let u = inner
                    .morphism()
                    .presented()
                    .cloned()
                    .ok_or_else(|| Error::IllTypedExpression(format!("{inner} has no presentation")))?;
                let s = s.to_poly(u.source().names(), u.source().ring())?;
                let t = t.to_poly(u.target().names(), u.target().ring())?;
                MorphismExpr::localize(inner, s, t)?
            }
            ExprSpec::BaseChange(a, v) => {
                let along = self.build(&ExprSpec::Name(v.clone()))?;
                let along = along
                    .morphism()
                    .presented()
                    .cloned()
                    .ok_or_else(|| Error::IllTypedExpression(format!("{v} has no presentation")))?;
                MorphismExpr::base_change(self.build(a)?, along)?
            }
            ExprSpec::PolyExt(a) => MorphismExpr::poly_ext(self.build(a)?)?,
            ExprSpec::Diagonal(a, b) => MorphismExpr::diagonal(self.build(a)?, self.build(b)?)?,
            ExprSpec::Idealize(r, m) => {
                let ring = self.ring(r)?.clone();
                let module = self.modules.get(m).cloned().ok_or_else(|| Error::UnknownName(m.clone()))?;
                MorphismExpr::idealize(e.to_string(), ring, module)?
            }
            ExprSpec::Reduce(a, i) => MorphismExpr::common_ideal_reduce(self.build(a)?, self.ideal(i)?)?,
        })
    }

    fn presented(&self, name: &str) -> Result<RingMorphism> {
        let e = self.build(&ExprSpec::Name(name.into()))?;
        e.morphism()
            .presented()
            .cloned()
            .ok_or_else(|| Error::IllTypedExpression(format!("{name} has no presentation")))
    }

    fn command(&mut self, s: &Stmt) -> Result<Report> {
        let mut r = Report {
            command: s.to_string(),
            verdict: String::new(),
            witness: None,
            trace: Vec::new(),
            millis: 0,
            engine: engine_of(s),
            exit: 0,
        };
        match s {
            Stmt::Check { prop: CheckProp::Epi, target } => match is_epimorphism(&self.presented(target)?)? {
                Epi::Yes => r.verdict = "yes".into(),
                Epi::No { shown, .. } => {
                    r.verdict = "no".into();
                    r.witness = Some(format!("{shown} is a nonzero element of the kernel of B (x) B -> B"));
                }
                Epi::Unknown(why) => {
                    r.verdict = "unknown".into();
                    r.trace.push(why);
                    r.exit = 3;
                }
            },
            Stmt::Check { prop, target } => {
                let p = if *prop == CheckProp::Psi { Property::Psi } else { Property::Strong };
                let v = decide(&self.presented(target)?, p, self.opts.bound)?;
                r.verdict = v.status.to_string();
                r.witness = v.witness.as_ref().map(|w| w.to_string());
                r.trace.push(v.argument.clone());
                if !v.also_failing.is_empty() {
                    let more: Vec<String> = v.also_failing.iter().map(|p| p.to_string()).collect();
                    r.trace.push(format!("also failing at {}", more.join(", ")));
                }
                if let Some(b) = v.searched_bound {
                    r.trace.push(format!("no failing prime up to {b}"));
                }
                if v.status == Status::Unknown {
                    r.exit = 3;
                }
            }
            Stmt::Fiber { map, prime } => {
                let u = self.presented(map)?;
                let rep = fiber_ring(&u, self.prime(prime)?)?;
                r.verdict = match &rep.verdict {
                    FiberVerdict::Zero => "Zero".into(),
                    FiberVerdict::Field(d) => format!("Field({d})"),
                    FiberVerdict::NotField(_) => "NotField".into(),
                };
                r.witness = Some(rep.to_string());
            }
            Stmt::Certify { goal, target } => {
                let e = self.build(&ExprSpec::Name(target.clone()))?;
                let c = certify(&e, *goal)?;
                r.verdict = c.label().into();
                if let Some(t) = c.trace() {
                    r.trace = explain(t)?.lines().map(str::to_string).collect();
                    if t.conditional {
                        r.witness = Some("conditional on asserted facts".into());
                    }
                }
                if let Certificate::Inconclusive = c {
                    r.witness = Some("no rule settles the goal".into());
                }
            }
            Stmt::Sweep { from, to } => {
                let rows = sweep_quadratic(*from, *to, self.opts.parallel)?;
                let yes = rows.iter().filter(|x| x.verdict == Status::Yes).count();
                let unknown = rows.iter().filter(|x| x.verdict == Status::Unknown).count();
                r.verdict = format!("{yes} yes, {} no", rows.len() - yes - unknown);
                r.trace.push("d,residue_mod_8,verdict".into());
                r.trace.extend(rows.iter().map(|x| x.csv()));
                if unknown > 0 {
                    r.exit = 3;
                }
            }
            Stmt::Fuzz { seed, count, bound } => {
                let summary = oracle_fuzz(*seed, *count, *bound);
                r.verdict = if summary.passed() { "ok".into() } else { "failed".into() };
                r.trace = summary.to_string().lines().map(str::to_string).collect();
            }
            _ => unreachable!("declarations are not commands"),
        }
        Ok(r)
    }
}

fn engine_of(s: &Stmt) -> Engine {
    match s {
        Stmt::Check { .. } | Stmt::Fiber { .. } => Engine::Symbolic,
        Stmt::Certify { .. } => Engine::Deduction,
        Stmt::Sweep { .. } | Stmt::Fuzz { .. } => Engine::Finite,
        _ => Engine::Script,
    }
}

fn polys(exprs: &[PolyExpr], names: &[String], ring: PolyRing) -> Result<Vec<Poly>> {
    exprs.iter().map(|e| e.to_poly(names, ring)).collect()
}
