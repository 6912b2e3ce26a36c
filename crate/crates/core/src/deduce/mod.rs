//! Forward chaining over the closure theorems: proves or refutes PSI,
//! strong PSI and epimorphism goals for structured morphism expressions.

mod expr;
mod facts;

pub use expr::{Atom, Morphism, MorphismExpr, Node};
pub use facts::{attach_fact, computed_facts, non_surjectivity_from_fiber, spectral_image, Fact, FactTag, Provenance, SpecImage};

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::kernel::Poly;
use crate::psi::{mb_maximal_check, MbClass};
use crate::rings::{verify_prime, IdealSpec, ModulePresentation};

/// Derived facts allowed per certification.
pub const FIXPOINT_BOUND: usize = 1000;
const MINOR_LIMIT: usize = 512;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Goal {
    Psi,
    Strong,
    Epi,
    NotPsi,
    NotStrong,
}

impl Goal {
    fn claim(self) -> Claim {
        match self {
            Goal::Psi => Claim::Psi,
            Goal::Strong => Claim::Strong,
            Goal::Epi => Claim::Epi,
            Goal::NotPsi => Claim::NotPsi,
            Goal::NotStrong => Claim::NotStrong,
        }
    }
}

impl fmt::Display for Goal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Goal::Psi => "psi",
            Goal::Strong => "strong",
            Goal::Epi => "epi",
            Goal::NotPsi => "not-psi",
            Goal::NotStrong => "not-strong",
        };
        write!(f, "{s}")
    }
}

impl FromStr for Goal {
    type Err = Error;

    fn from_str(s: &str) -> Result<Goal> {
        Ok(match s {
            "psi" => Goal::Psi,
            "strong" => Goal::Strong,
            "epi" => Goal::Epi,
            "not-psi" => Goal::NotPsi,
            "not-strong" => Goal::NotStrong,
            _ => return Err(Error::UnknownName(format!("goal {s}"))),
        })
    }
}

/// A property of one node of the expression.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum Claim {
    Psi,
    Strong,
    Epi,
    NotPsi,
    NotStrong,
    NotEpi,
}

impl Claim {
    fn negation(self) -> Claim {
        match self {
            Claim::Psi => Claim::NotPsi,
            Claim::Strong => Claim::NotStrong,
            Claim::Epi => Claim::NotEpi,
            Claim::NotPsi => Claim::Psi,
            Claim::NotStrong => Claim::Strong,
            Claim::NotEpi => Claim::Epi,
        }
    }

    fn text(self) -> &'static str {
        match self {
            Claim::Psi => "is PSI",
            Claim::Strong => "is strong PSI",
            Claim::Epi => "is an epimorphism",
            Claim::NotPsi => "is not PSI",
            Claim::NotStrong => "is not strong PSI",
            Claim::NotEpi => "is not an epimorphism",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceStep {
    pub rule: String,
    pub citation: String,
    pub conclusion: String,
    /// 1-based numbers of earlier steps.
    pub premises: Vec<usize>,
    /// Facts used directly, rendered as `node: fact`.
    pub given: Vec<String>,
}

impl fmt::Display for TraceStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ps: Vec<String> = self.premises.iter().map(|p| p.to_string()).collect();
        write!(f, "[{}] {} by {} from steps [{}]", self.rule, self.conclusion, self.citation, ps.join(", "))?;
        if !self.given.is_empty() {
            write!(f, " given {}", self.given.join("; "))?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProofTrace {
    pub goal: String,
    pub steps: Vec<TraceStep>,
    /// Set when some premise was asserted rather than computed.
    pub conditional: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Certificate {
    Proved(ProofTrace),
    /// The negation of the goal was proved.
    Refuted(ProofTrace),
    Inconclusive,
}

impl Certificate {
    pub fn trace(&self) -> Option<&ProofTrace> {
        match self {
            Certificate::Proved(t) | Certificate::Refuted(t) => Some(t),
            Certificate::Inconclusive => None,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Certificate::Proved(_) => "proved",
            Certificate::Refuted(_) => "refuted",
            Certificate::Inconclusive => "inconclusive",
        }
    }
}

/// Numbered derivation text, one line per step.
pub fn explain(trace: &ProofTrace) -> Result<String> {
    if trace.steps.is_empty() {
        return Err(Error::InvalidTrace("the trace has no steps".into()));
    }
    let mut out = String::new();
    for (k, s) in trace.steps.iter().enumerate() {
        if let Some(p) = s.premises.iter().find(|&&p| p == 0 || p > k) {
            return Err(Error::InvalidTrace(format!("step {} refers to step {p}", k + 1)));
        }
        out.push_str(&format!("step {}: {s}\n", k + 1));
    }
    Ok(out)
}

#[derive(Clone, Debug)]
struct Derivation {
    rule: &'static str,
    citation: String,
    claims: Vec<(usize, Claim)>,
    given: Vec<String>,
    tainted: bool,
}

/// Pseudo-rule for claims read straight off a fact; invisible in traces
/// unless the goal itself is such a claim.
const GIVEN: &str = "R0";

struct Engine<'a> {
    nodes: Vec<&'a MorphismExpr>,
    kids: Vec<Vec<usize>>,
    facts: Vec<Vec<Fact>>,
    store: HashMap<(usize, Claim), Derivation>,
    /// Per idealization node: whether the module vanishes at every prime, with a reason.
    idealized: HashMap<usize, (bool, String)>,
    /// Per atom with a finite minimal-extension fact: whether the crucial ideal stays maximal.
    crucial: HashMap<usize, (bool, String)>,
    derived: usize,
}

impl<'a> Engine<'a> {
    fn new(root: &'a MorphismExpr) -> Self {
        let mut e = Engine {
            nodes: Vec::new(),
            kids: Vec::new(),
            facts: Vec::new(),
            store: HashMap::new(),
            idealized: HashMap::new(),
            crucial: HashMap::new(),
            derived: 0,
        };
        e.visit(root);
        e
    }

    fn visit(&mut self, x: &'a MorphismExpr) -> usize {
        let id = self.nodes.len();
        self.nodes.push(x);
        self.kids.push(Vec::new());
        self.facts.push(x.facts().to_vec());
        let ks: Vec<usize> = x.children().into_iter().map(|c| self.visit(c)).collect();
        self.kids[id] = ks;
        id
    }

    fn name(&self, id: usize) -> &str {
        self.nodes[id].name()
    }

    fn has(&self, id: usize, c: Claim) -> bool {
        self.store.contains_key(&(id, c))
    }

    fn fact(&self, id: usize, pred: impl Fn(&FactTag) -> bool) -> Option<&Fact> {
        self.facts[id].iter().find(|f| pred(&f.tag))
    }

    fn given(&self, id: usize, f: &Fact) -> (String, bool) {
        (format!("{}: {f}", self.name(id)), f.is_asserted())
    }

    /// Records a derivation; an untainted one replaces a tainted one.
    fn fire(
        &mut self,
        id: usize,
        c: Claim,
        rule: &'static str,
        citation: &str,
        claims: Vec<(usize, Claim)>,
        given: Vec<(String, bool)>,
    ) -> bool {
        if self.derived >= FIXPOINT_BOUND {
            return false;
        }
        let tainted = claims.iter().any(|k| self.store[k].tainted) || given.iter().any(|(_, t)| *t);
        if let Some(old) = self.store.get(&(id, c)) {
            if !old.tainted || tainted {
                return false;
            }
        }
        let d = Derivation {
            rule,
            citation: citation.to_string(),
            claims,
            given: given.into_iter().map(|(s, _)| s).collect(),
            tainted,
        };
        self.store.insert((id, c), d);
        self.derived += 1;
        true
    }

    /// `premises ⇒ (id, c)` when every premise claim is known.
    fn chain(&mut self, id: usize, c: Claim, rule: &'static str, citation: &str, premises: &[(usize, Claim)]) -> bool {
        if premises.iter().all(|&(k, p)| self.has(k, p)) {
            return self.fire(id, c, rule, citation, premises.to_vec(), Vec::new());
        }
        false
    }

    fn from_fact(
        &mut self,
        id: usize,
        c: Claim,
        rule: &'static str,
        citation: &str,
        pred: impl Fn(&FactTag) -> bool,
    ) -> bool {
        match self.fact(id, pred).cloned() {
            Some(f) => {
                let g = self.given(id, &f);
                self.fire(id, c, rule, citation, Vec::new(), vec![g])
            }
            None => false,
        }
    }

    fn step(&mut self) -> bool {
        let mut changed = false;
        for id in 0..self.nodes.len() {
            changed |= self.rules_at(id);
        }
        changed
    }

    fn rules_at(&mut self, id: usize) -> bool {
        use Claim::*;
        let mut ch = false;
        // facts read directly
        ch |= self.from_fact(id, Psi, GIVEN, "Theorem 2", |t| *t == FactTag::KnownPsi);
        ch |= self.from_fact(id, Strong, GIVEN, "Theorem 13 (iii)", |t| *t == FactTag::KnownStrong);
        ch |= self.from_fact(id, NotPsi, GIVEN, "Theorem 2", |t| matches!(t, FactTag::KnownNotPsi(_)));
        ch |= self.from_fact(id, NotStrong, GIVEN, "Theorem 13 (iii)", |t| matches!(t, FactTag::KnownNotStrong(_)));
        ch |= self.from_fact(id, Epi, GIVEN, "the definition of an epimorphism", |t| {
            matches!(t, FactTag::Epimorphism | FactTag::Surjective | FactTag::FractionMap)
        });
        ch |= self.from_fact(id, NotEpi, GIVEN, "the definition of an epimorphism", |t| *t == FactTag::NotEpimorphism);

        // R1
        ch |= self.from_fact(id, Psi, "R1", "Proposition 9 (i)", |t| *t == FactTag::AllPrimesExtended);
        ch |= self.from_fact(id, Psi, "R1", "Proposition 9 (iii)", |t| *t == FactTag::Surjective);
        ch |= self.from_fact(id, Psi, "R1", "Proposition 9 (iv)", |t| *t == FactTag::FractionMap);
        ch |= self.chain(id, Psi, "R1", "Proposition 9 (ii)", &[(id, Epi)]);

        // R2
        ch |= self.from_fact(id, Strong, "R2", "Proposition 9 (iv) and Proposition 14", |t| *t == FactTag::FractionMap);
        ch |= self.from_fact(id, Strong, "R2", "Proposition 14", |t| *t == FactTag::Surjective);
        ch |= self.chain(id, Strong, "R2", "Proposition 14", &[(id, Epi)]);
        ch |= self.chain(id, NotEpi, "R2", "Proposition 14", &[(id, NotStrong)]);

        let kids = self.kids[id].clone();
        match self.nodes[id].node() {
            Node::Compose(..) => {
                let (x, y) = (kids[0], kids[1]);
                ch |= self.chain(id, Psi, "R3", "Theorem 8 (i)", &[(x, Psi), (y, Psi)]);
                ch |= self.chain(y, Psi, "R3", "Theorem 8 (ii)", &[(id, Psi)]);
                ch |= self.chain(id, NotPsi, "R3", "Theorem 8 (ii)", &[(y, NotPsi)]);
                ch |= self.chain(id, Strong, "R4", "Theorem 12 (i)", &[(x, Strong), (y, Strong)]);
                ch |= self.chain(y, Strong, "R4", "Theorem 12 (ii)", &[(id, Strong)]);
                ch |= self.chain(id, NotStrong, "R4", "Theorem 12 (ii)", &[(y, NotStrong)]);
                if let Node::BaseChange { along, .. } = self.nodes[y].node() {
                    if self.nodes[x].morphism().presented() == Some(along) {
                        let e = self.kids[y][0];
                        ch |= self.chain(id, Strong, "R13", "Corollary 19", &[(x, Strong), (e, Strong)]);
                    }
                }
            }
            Node::Quotient { .. } => {
                ch |= self.chain(id, Psi, "R5", "Corollary 10 (i)", &[(kids[0], Psi)]);
            }
            Node::Localize { .. } => {
                ch |= self.chain(id, Psi, "R5", "Corollary 10 (ii)", &[(kids[0], Psi)]);
            }
            Node::PolyExt(_) => {
                let e = kids[0];
                ch |= self.chain(id, Psi, "R6", "Theorem 16 (iv)", &[(e, Strong)]);
                ch |= self.chain(id, Strong, "R6", "Theorem 16 (ii)", &[(e, Strong)]);
                ch |= self.chain(e, Strong, "R6", "Theorem 16 (iv)", &[(id, Psi)]);
                ch |= self.chain(id, NotPsi, "R6", "Theorem 16 (iv)", &[(e, NotStrong)]);
            }
            Node::BaseChange { .. } => {
                ch |= self.chain(id, Strong, "R6", "Theorem 16 (ii)", &[(kids[0], Strong)]);
            }
            Node::CommonIdealReduce { .. } => {
                let e = kids[0];
                for c in [Psi, Strong, NotPsi, NotStrong] {
                    ch |= self.chain(id, c, "R8", "Proposition 17", &[(e, c)]);
                    ch |= self.chain(e, c, "R8", "Proposition 17", &[(id, c)]);
                }
            }
            Node::Diagonal(..) => ch |= self.diagonal_rules(id, kids[0], kids[1]),
            Node::Idealize { .. } => {
                if let Some((vanishes, why)) = self.idealized.get(&id).cloned() {
                    let c = if vanishes { Strong } else { NotStrong };
                    ch |= self.fire(id, c, "R10", "Proposition 22", Vec::new(), vec![(why, false)]);
                }
            }
            Node::Atom(_) => {}
        }

        // R7
        ch |= self.chain(id, Psi, "R7", "Theorem 13", &[(id, Strong)]);
        ch |= self.chain(id, NotStrong, "R7", "Theorem 13", &[(id, NotPsi)]);
        if self.has(id, Psi) && self.source_is_field(id) {
            if let Some(f) = self.fact(id, |t| matches!(t, FactTag::ResidueTrivialAt(_))).cloned() {
                let g = self.given(id, &f);
                ch |= self.fire(id, Strong, "R7", "Theorem 13 (ii)", vec![(id, Psi)], vec![g]);
            }
        }

        // R11
        if let (Some(f), Some(n)) = (
            self.fact(id, |t| *t == FactTag::Finite).cloned(),
            self.fact(id, |t| *t == FactTag::NotSurjective).cloned(),
        ) {
            let g = vec![self.given(id, &f), self.given(id, &n)];
            ch |= self.fire(id, NotStrong, "R11", "Corollary 300", Vec::new(), g);
        }

        // R12
        if let Some(f) = self.fact(id, |t| *t == FactTag::FiniteType).cloned() {
            let g = self.given(id, &f);
            if self.has(id, Strong) {
                ch |= self.fire(id, Epi, "R12", "Theorem 301", vec![(id, Strong)], vec![g.clone()]);
            }
            if self.has(id, NotEpi) {
                ch |= self.fire(id, NotStrong, "R12", "Theorem 301", vec![(id, NotEpi)], vec![g]);
            }
        }

        // R13, compositum form
        let comp = self.fact(id, |t| matches!(t, FactTag::Compositum { .. })).cloned();
        if let Some(f) = comp {
            let (l, r) = (kids[0], kids[1]);
            if self.has(l, Strong) && self.has(r, Strong) {
                let g = self.given(id, &f);
                ch |= self.fire(id, Strong, "R13", "Corollary 20", vec![(l, Strong), (r, Strong)], vec![g]);
            }
        }

        // R14
        if let Some(f) = self.fact(id, |t| matches!(t, FactTag::MinimalExtension { .. })).cloned() {
            let g = self.given(id, &f);
            match &f.tag {
                FactTag::MinimalExtension { finite: false, .. } => {
                    ch |= self.fire(id, Psi, "R14", "Proposition 23", Vec::new(), vec![g]);
                }
                _ => {
                    if let Some((maximal, why)) = self.crucial.get(&id).cloned() {
                        let c = if maximal { Psi } else { NotPsi };
                        ch |= self.fire(id, c, "R14", "Proposition 23", Vec::new(), vec![g, (why, false)]);
                    }
                }
            }
        }
        ch
    }

    fn diagonal_rules(&mut self, id: usize, b: usize, c: usize) -> bool {
        use Claim::*;
        let image = |e: &Self, k: usize| {
            e.fact(k, |t| matches!(t, FactTag::SpectraImage(_))).cloned()
        };
        let (Some(fb), Some(fc)) = (image(self, b), image(self, c)) else { return false };
        let (FactTag::SpectraImage(ib), FactTag::SpectraImage(ic)) = (&fb.tag, &fc.tag) else { unreachable!() };
        let Ok(common) = ib.common_point(ic) else { return false };
        let given = vec![self.given(b, &fb), self.given(c, &fc)];
        let mut ch = false;
        match common {
            None => {
                for (p, q) in [(Psi, NotPsi), (Strong, NotStrong), (Epi, NotEpi)] {
                    if self.has(b, p) && self.has(c, p) {
                        ch |= self.fire(id, p, "R9", "Proposition 170", vec![(b, p), (c, p)], given.clone());
                    }
                    for k in [b, c] {
                        ch |= self.chain(k, p, "R9", "Proposition 170", &[(id, p)]);
                        ch |= self.chain(id, q, "R9", "Proposition 170", &[(k, q)]);
                    }
                }
            }
            Some(point) => {
                let why = (format!("both spectra images contain {point}"), false);
                let mut g = given.clone();
                g.push(why);
                for q in [NotPsi, NotStrong, NotEpi] {
                    ch |= self.fire(id, q, "R9", "Proposition 170", Vec::new(), g.clone());
                }
            }
        }
        ch
    }

    fn source_is_field(&self, id: usize) -> bool {
        self.nodes[id].morphism().presented().is_some_and(|u| u.source().is_base_ring() && u.source().base().is_field())
    }

    /// Computations that are not atom decisions: module vanishing for
    /// idealizations and maximality of crucial ideals.
    fn prepare(&mut self) {
        for id in 0..self.nodes.len() {
            if let Node::Idealize { module, .. } = self.nodes[id].node() {
                if let Ok(v) = module_vanishes(module) {
                    self.idealized.insert(id, v);
                }
            }
            let crucial = self.facts[id].iter().find_map(|f| match &f.tag {
                FactTag::MinimalExtension { crucial, finite: true } => Some(crucial.clone()),
                _ => None,
            });
            if let (Some(m), Some(u)) = (crucial, self.nodes[id].morphism().presented()) {
                let r = verify_prime(&m).and_then(|p| mb_maximal_check(u, &p));
                if let Ok(class) = r {
                    let maximal = class == MbClass::Maximal;
                    let why = format!("{m}B {} maximal (computed)", if maximal { "is" } else { "is not" });
                    self.crucial.insert(id, (maximal, why));
                }
            }
        }
    }

    fn saturate(&mut self) {
        while self.step() {}
    }

    fn add_computed_facts(&mut self) {
        for id in 0..self.nodes.len() {
            if !matches!(self.nodes[id].node(), Node::Atom(_)) {
                continue;
            }
            for f in computed_facts(self.nodes[id].morphism()) {
                let same = |g: &Fact| std::mem::discriminant(&g.tag) == std::mem::discriminant(&f.tag);
                if let Some(old) = self.facts[id].iter_mut().find(|g| same(g)) {
                    if old.is_asserted() && old.tag == f.tag {
                        *old = f;
                    }
                } else {
                    self.facts[id].push(f);
                }
            }
        }
    }

    fn settled(&self, c: Claim) -> bool {
        self.has(0, c) || self.has(0, c.negation())
    }

    fn trace(&self, c: Claim) -> ProofTrace {
        let mut steps = Vec::new();
        let mut numbers: HashMap<(usize, Claim), usize> = HashMap::new();
        self.emit((0, c), true, &mut steps, &mut numbers);
        ProofTrace {
            goal: format!("{} {}", self.name(0), c.text()),
            steps,
            conditional: self.store[&(0, c)].tainted,
        }
    }

    /// Emits the steps for `key` after those of its premises; returns the
    /// step number, or `None` for a claim read off a fact.
    fn emit(
        &self,
        key: (usize, Claim),
        is_goal: bool,
        steps: &mut Vec<TraceStep>,
        numbers: &mut HashMap<(usize, Claim), usize>,
    ) -> Option<usize> {
        if let Some(&n) = numbers.get(&key) {
            return Some(n);
        }
        let d = &self.store[&key];
        if d.rule == GIVEN && !is_goal {
            return None;
        }
        let mut premises = Vec::new();
        let mut given = Vec::new();
        for &k in &d.claims {
            match self.emit(k, false, steps, numbers) {
                Some(n) => premises.push(n),
                None => given.extend(self.store[&k].given.iter().cloned()),
            }
        }
        given.extend(d.given.iter().cloned());
        premises.sort_unstable();
        premises.dedup();
        steps.push(TraceStep {
            rule: d.rule.to_string(),
            citation: d.citation.clone(),
            conclusion: format!("{} {}", self.name(key.0), key.1.text()),
            premises,
            given,
        });
        numbers.insert(key, steps.len());
        Some(steps.len())
    }

    fn verdict(&self, goal: Claim) -> Certificate {
        let pro = self.store.get(&(0, goal));
        let con = self.store.get(&(0, goal.negation()));
        match (pro, con) {
            (Some(p), Some(c)) if p.tainted == c.tainted => Certificate::Inconclusive,
            (Some(p), Some(_)) if !p.tainted => Certificate::Proved(self.trace(goal)),
            (Some(_), Some(_)) => Certificate::Refuted(self.trace(goal.negation())),
            (Some(_), None) => Certificate::Proved(self.trace(goal)),
            (None, Some(_)) => Certificate::Refuted(self.trace(goal.negation())),
            (None, None) => Certificate::Inconclusive,
        }
    }
}

/// Whether `k(P) ⊗ M = 0` for every prime `P`. For a finitely presented
/// module this holds iff `M = 0`, iff its 0-th Fitting ideal is the unit ideal.
fn module_vanishes(m: &ModulePresentation) -> Result<(bool, String)> {
    let a = m.over();
    let k = m.gens().len();
    if k == 0 {
        return Ok((true, "the module has no generators (computed)".into()));
    }
    let rels = m.relations();
    let mut minors = Vec::new();
    if rels.len() >= k {
        let subsets = subsets_of(rels.len(), k, MINOR_LIMIT)
            .ok_or_else(|| Error::ResourceLimit("too many minors for the Fitting ideal".into()))?;
        for rows in subsets {
            let mat: Vec<Vec<Poly>> = rows.iter().map(|&r| rels[r].clone()).collect();
            let d = a.reduce(&determinant(&mat));
            if !d.is_zero() {
                minors.push(d);
            }
        }
    }
    let fitt = IdealSpec::new(a, minors)?;
    Ok(if fitt.is_proper()? {
        (false, format!("Fitt_0 of the module is {fitt}, a proper ideal, so some k(P) ⊗ M is nonzero (computed)"))
    } else {
        (true, "Fitt_0 of the module is the unit ideal, so k(P) ⊗ M = 0 for all P (computed)".into())
    })
}

fn subsets_of(n: usize, k: usize, limit: usize) -> Option<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        if out.len() > limit {
            return None;
        }
        let mut i = k;
        loop {
            if i == 0 {
                return Some(out);
            }
            i -= 1;
            if cur[i] < n - k + i {
                break;
            }
            if i == 0 {
                return Some(out);
            }
        }
        cur[i] += 1;
        for j in i + 1..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

/// Laplace expansion along the first row.
fn determinant(m: &[Vec<Poly>]) -> Poly {
    let n = m.len();
    if n == 1 {
        return m[0][0].clone();
    }
    let ring = m[0][0].ring();
    let mut acc = Poly::zero(ring);
    for j in 0..n {
        if m[0][j].is_zero() {
            continue;
        }
        let minor: Vec<Vec<Poly>> =
            m[1..].iter().map(|row| row.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, p)| p.clone()).collect()).collect();
        let t = m[0][j].mul(&determinant(&minor));
        acc = if j % 2 == 0 { acc.add(&t) } else { acc.sub(&t) };
    }
    acc
}

/// Derives `goal` for `e` from its facts and the rule table, calling the
/// deciders on atoms only when the structural rules do not settle it.
pub fn certify(e: &MorphismExpr, goal: Goal) -> Result<Certificate> {
    let c = goal.claim();
    let mut engine = Engine::new(e);
    engine.prepare();
    engine.saturate();
    if !engine.settled(c) {
        engine.add_computed_facts();
        engine.saturate();
    }
    Ok(engine.verdict(c))
}

#[cfg(test)]
mod tests;
