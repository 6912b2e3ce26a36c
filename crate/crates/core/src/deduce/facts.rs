//! Facts attached to atoms: asserted by the user or computed.

use std::collections::BTreeSet;
use std::fmt;

use num_traits::{One, Signed};

use super::expr::{Morphism, MorphismExpr};
use crate::error::{Error, Result};
use crate::finring::{self, FiniteMorphism};
use crate::kernel::primes::prime_factors;
use crate::kernel::{Domain, Poly};
use crate::psi::{decide_psi, decide_strong, fiber_ring, is_epimorphism, Epi, DEFAULT_SEARCH_BOUND};
use crate::rings::{FpAlgebra, IdealSpec, PrimeSpec, RingMorphism};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Provenance {
    UserAsserted,
    /// Produced by the named operation.
    Computed(String),
}

/// The image of `Spec(B)` in the spectrum of the source.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SpecImage {
    /// A set of primes of ℤ: `(0)` when `generic`, plus the listed primes,
    /// or plus every prime except the listed ones when `cofinite`.
    Integers { generic: bool, primes: BTreeSet<u64>, cofinite: bool },
    /// Free text; never used to decide disjointness.
    Described(String),
}

impl SpecImage {
    pub fn finite(generic: bool, primes: impl IntoIterator<Item = u64>) -> Self {
        SpecImage::Integers { generic, primes: primes.into_iter().collect(), cofinite: false }
    }

    pub fn all_but(generic: bool, primes: impl IntoIterator<Item = u64>) -> Self {
        SpecImage::Integers { generic, primes: primes.into_iter().collect(), cofinite: true }
    }

    /// A prime in both sets, `None` when disjoint, or an error when the
    /// descriptions cannot be compared.
    pub fn common_point(&self, other: &SpecImage) -> std::result::Result<Option<String>, ()> {
        let (
            SpecImage::Integers { generic: g1, primes: p1, cofinite: c1 },
            SpecImage::Integers { generic: g2, primes: p2, cofinite: c2 },
        ) = (self, other)
        else {
            return Err(());
        };
        if *g1 && *g2 {
            return Ok(Some("(0)".into()));
        }
        let hit = match (c1, c2) {
            (false, false) => p1.intersection(p2).next().copied(),
            (false, true) => p1.difference(p2).next().copied(),
            (true, false) => p2.difference(p1).next().copied(),
            (true, true) => (2u64..).find(|p| crate::kernel::primes::is_prime_u64(*p) && !p1.contains(p) && !p2.contains(p)),
        };
        Ok(hit.map(|p| format!("({p})")))
    }
}

impl fmt::Display for SpecImage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpecImage::Described(s) => write!(f, "{s}"),
            SpecImage::Integers { generic, primes, cofinite: false } => {
                let mut items: Vec<String> = Vec::new();
                if *generic {
                    items.push("(0)".into());
                }
                items.extend(primes.iter().map(|p| format!("({p})")));
                write!(f, "{{{}}}", items.join(", "))
            }
            SpecImage::Integers { generic, primes, cofinite: true } => {
                if *generic {
                    write!(f, "{{(0)}} + ")?;
                }
                if primes.is_empty() {
                    write!(f, "all primes")
                } else {
                    let ps: Vec<String> = primes.iter().map(|p| p.to_string()).collect();
                    write!(f, "primes except {{{}}}", ps.join(", "))
                }
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FactTag {
    Surjective,
    NotSurjective,
    Epimorphism,
    NotEpimorphism,
    FractionMap,
    AllPrimesExtended,
    Finite,
    FiniteType,
    MinimalExtension { crucial: IdealSpec, finite: bool },
    SpectraImage(SpecImage),
    /// The atom `A → D` has `D` generated by the images of `B` and `C`
    /// under maps compatible with `left : A → B` and `right : A → C`.
    Compositum { left: Box<MorphismExpr>, right: Box<MorphismExpr> },
    ResidueTrivialAt(PrimeSpec),
    KnownPsi,
    KnownStrong,
    KnownNotPsi(String),
    KnownNotStrong(String),
}

impl fmt::Display for FactTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FactTag::Surjective => write!(f, "surjective"),
            FactTag::NotSurjective => write!(f, "not surjective"),
            FactTag::Epimorphism => write!(f, "epimorphism"),
            FactTag::NotEpimorphism => write!(f, "not an epimorphism"),
            FactTag::FractionMap => write!(f, "fraction map"),
            FactTag::AllPrimesExtended => write!(f, "all primes extended"),
            FactTag::Finite => write!(f, "finite"),
            FactTag::FiniteType => write!(f, "finite type"),
            FactTag::MinimalExtension { crucial, finite } => {
                write!(f, "minimal extension with crucial ideal {crucial}, {}", if *finite { "finite" } else { "not finite" })
            }
            FactTag::SpectraImage(s) => write!(f, "spectrum image {s}"),
            FactTag::Compositum { left, right } => write!(f, "compositum of {left} and {right}"),
            FactTag::ResidueTrivialAt(p) => write!(f, "trivial residue extension at {p}"),
            FactTag::KnownPsi => write!(f, "PSI"),
            FactTag::KnownStrong => write!(f, "strong PSI"),
            FactTag::KnownNotPsi(w) => write!(f, "not PSI ({w})"),
            FactTag::KnownNotStrong(w) => write!(f, "not strong PSI ({w})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fact {
    pub tag: FactTag,
    pub provenance: Provenance,
}

impl Fact {
    pub fn asserted(tag: FactTag) -> Self {
        Fact { tag, provenance: Provenance::UserAsserted }
    }

    pub fn computed(tag: FactTag, op: impl Into<String>) -> Self {
        Fact { tag, provenance: Provenance::Computed(op.into()) }
    }

    pub fn is_asserted(&self) -> bool {
        self.provenance == Provenance::UserAsserted
    }

    pub(crate) fn subexpressions(&self) -> Vec<&MorphismExpr> {
        match &self.tag {
            FactTag::Compositum { left, right } => vec![left, right],
            _ => Vec::new(),
        }
    }
}

impl fmt::Display for Fact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.provenance {
            Provenance::UserAsserted => write!(f, "{} (asserted)", self.tag),
            Provenance::Computed(op) => write!(f, "{} (computed by {op})", self.tag),
        }
    }
}

fn source_of(m: &Morphism) -> Option<&FpAlgebra> {
    m.presented().map(|u| u.source())
}

fn is_integers(a: &FpAlgebra) -> bool {
    a.is_base_ring() && a.base() == Domain::Int
}

/// Records `fact` on an atom. Facts that can be checked by exhausting a
/// finite ring are checked, and then carry computed provenance.
pub fn attach_fact(mut e: MorphismExpr, fact: Fact) -> Result<MorphismExpr> {
    let name = e.name().to_string();
    let Some(atom) = e.atom_mut() else {
        return Err(Error::MeaninglessFact(format!("{name} is not an atom")));
    };
    let label = fact.tag.to_string();
    let meaningless = |why: String| Err(Error::MeaninglessFact(format!("{label} on {name}: {why}")));
    let mut fact = fact;
    match &fact.tag {
        FactTag::Surjective | FactTag::NotSurjective => {
            let claim = fact.tag == FactTag::Surjective;
            let (actual, op) = match &atom.morphism {
                Morphism::Finite(f) => (Some(f.is_surjective()), "exhaustion"),
                Morphism::Presented(u) => (u.is_surjective().ok(), "surjectivity check"),
            };
            if let Some(actual) = actual {
                if actual != claim {
                    return meaningless(format!("contradicted by {op}"));
                }
                if fact.is_asserted() {
                    fact.provenance = Provenance::Computed(op.into());
                }
            }
        }
        FactTag::Finite | FactTag::FiniteType => match &atom.morphism {
            Morphism::Finite(_) => fact.provenance = Provenance::Computed("exhaustion".into()),
            // a target finite over its base is finite over any source
            Morphism::Presented(u) if finite_over_base(u.target()) => {
                fact.provenance = Provenance::Computed("finiteness check".into())
            }
            Morphism::Presented(_) => {}
        },
        FactTag::SpectraImage(SpecImage::Integers { .. }) => {
            if !source_of(&atom.morphism).is_some_and(is_integers) {
                return meaningless("the source is not the integers".into());
            }
        }
        FactTag::ResidueTrivialAt(p) => {
            if Some(p.ambient()) != source_of(&atom.morphism) {
                return meaningless(format!("{p} is not a prime of the source"));
            }
        }
        FactTag::MinimalExtension { crucial, .. } => {
            if Some(crucial.ambient()) != source_of(&atom.morphism) {
                return meaningless(format!("{crucial} is not an ideal of the source"));
            }
        }
        FactTag::Compositum { left, right } => {
            let src = source_of(&atom.morphism);
            if src.is_none() || source_of(left.morphism()) != src || source_of(right.morphism()) != src {
                return meaningless("the factors must share the source of the atom".into());
            }
        }
        _ => {}
    }
    if !atom.facts.iter().any(|f| f.tag == fact.tag) {
        atom.facts.push(fact);
    }
    Ok(e)
}

/// Image of `Spec(B) → Spec(ℤ)`. Only primes dividing a leading
/// coefficient of the strong Gröbner basis can have a zero fiber.
pub fn spectral_image(u: &RingMorphism) -> Result<Option<SpecImage>> {
    if !is_integers(u.source()) {
        return Ok(None);
    }
    let b = u.target();
    if b.is_zero_ring() {
        return Ok(Some(SpecImage::finite(false, [])));
    }
    match b.base() {
        Domain::Rat => return Ok(Some(SpecImage::finite(true, []))),
        Domain::ModP(p) => return Ok(Some(SpecImage::finite(false, [p]))),
        Domain::Int => {}
    }
    let nonzero_mod = |p: u64| -> Result<bool> {
        let q = b.with_relations([Poly::from_i64(b.ring(), p as i64)])?;
        Ok(!q.is_zero_ring())
    };
    let basis = b.gb().basis();
    if let Some(c) = basis.iter().find(|g| g.is_constant()) {
        let n = c.lc().expect("nonzero").numer().abs();
        let ps = prime_factors(&n).ok_or_else(|| Error::ResourceLimit(format!("factoring {n}")))?;
        let mut hit = Vec::new();
        for p in ps {
            if nonzero_mod(p)? {
                hit.push(p);
            }
        }
        return Ok(Some(SpecImage::finite(false, hit)));
    }
    let mut critical = BTreeSet::new();
    for g in basis {
        let lc = g.lc().expect("nonzero").numer().abs();
        if !lc.is_one() {
            critical.extend(prime_factors(&lc).ok_or_else(|| Error::ResourceLimit(format!("factoring {lc}")))?);
        }
    }
    let mut dead = Vec::new();
    for p in critical {
        if !nonzero_mod(p)? {
            dead.push(p);
        }
    }
    Ok(Some(SpecImage::all_but(true, dead)))
}

/// Whether every generator has a monic power among the leading terms, so
/// the algebra is a finitely generated module over its base.
fn finite_over_base(b: &FpAlgebra) -> bool {
    let field = b.base().is_field();
    let unit_lms: Vec<_> = b
        .gb()
        .basis()
        .iter()
        .filter(|g| field || g.lc().expect("nonzero").numer().abs().is_one())
        .filter_map(|g| g.lm().and_then(|m| m.pure_power()))
        .collect();
    b.is_zero_ring() || (0..b.nvars()).all(|k| unit_lms.iter().any(|(v, _)| *v == k))
}

/// Non-surjectivity read off a fiber at a maximal prime: a surjection has
/// fibers of dimension at most one there.
pub fn non_surjectivity_from_fiber(u: &RingMorphism, p: &PrimeSpec) -> Result<Option<Fact>> {
    if !p.is_maximal() {
        return Ok(None);
    }
    let r = fiber_ring(u, p)?;
    Ok(match r.dim {
        Some(d) if d >= 2 => Some(Fact::computed(
            FactTag::NotSurjective,
            format!("fiber at {} of dimension {d}", r.prime),
        )),
        _ => None,
    })
}

fn finite_witness(f: &FiniteMorphism) -> String {
    let b = f.target();
    for i in finring::a_primes_finite(f) {
        if !finring::is_prime_ideal_finite(b, &i) {
            let gens: Vec<String> = b.ideal_gens(&i).into_iter().map(|x| b.label(x)).collect();
            return format!("A-prime ideal ({}) is not prime", gens.join(", "));
        }
    }
    "a fiber is not a field".into()
}

fn strong_witness(f: &FiniteMorphism) -> String {
    for p in finring::prime_ideals(f.source()) {
        let j = f.extend(&p);
        if j.len() != f.target().size() && f.target().size() / j.len() != f.source().size() / p.len() {
            let a = f.source();
            let gens: Vec<String> = a.ideal_gens(&p).into_iter().map(|x| a.label(x)).collect();
            return format!("the fiber at ({}) is larger than the residue field", gens.join(", "));
        }
    }
    finite_witness(f)
}

/// Facts the deciders can establish for an atom.
pub fn computed_facts(m: &Morphism) -> Vec<Fact> {
    let mut out = Vec::new();
    let finite = match m {
        Morphism::Finite(f) => Some(f.clone()),
        Morphism::Presented(u) => FiniteMorphism::from_ring_morphism(u, finring::DEFAULT_BOUND).ok(),
    };
    if let Some(f) = finite {
        let st = finring::bruteforce_status(&f);
        let op = "exhaustion";
        out.push(if st.psi {
            Fact::computed(FactTag::KnownPsi, op)
        } else {
            Fact::computed(FactTag::KnownNotPsi(finite_witness(&f)), op)
        });
        out.push(if st.strong {
            Fact::computed(FactTag::KnownStrong, op)
        } else {
            Fact::computed(FactTag::KnownNotStrong(strong_witness(&f)), op)
        });
        out.push(Fact::computed(if f.is_surjective() { FactTag::Surjective } else { FactTag::NotSurjective }, op));
        out.push(Fact::computed(FactTag::Finite, op));
        out.push(Fact::computed(FactTag::FiniteType, op));
        return out;
    }
    let Some(u) = m.presented() else { return out };
    match decide_strong(u, DEFAULT_SEARCH_BOUND) {
        Ok(v) if v.is_yes() => out.push(Fact::computed(FactTag::KnownStrong, "decide_strong")),
        Ok(v) if v.is_no() => {
            let w = v.witness.as_ref().map(|r| r.to_string()).unwrap_or_default();
            out.push(Fact::computed(FactTag::KnownNotStrong(w), "decide_strong"));
            match decide_psi(u, DEFAULT_SEARCH_BOUND) {
                Ok(v) if v.is_yes() => out.push(Fact::computed(FactTag::KnownPsi, "decide_psi")),
                Ok(v) if v.is_no() => {
                    let w = v.witness.as_ref().map(|r| r.to_string()).unwrap_or_default();
                    out.push(Fact::computed(FactTag::KnownNotPsi(w), "decide_psi"));
                }
                _ => {}
            }
        }
        _ => {}
    }
    if let Ok(s) = u.is_surjective() {
        let tag = if s { FactTag::Surjective } else { FactTag::NotSurjective };
        out.push(Fact::computed(tag, "surjectivity check"));
    }
    let (a, b) = (u.source(), u.target());
    if !(a.base() == Domain::Int && b.base() == Domain::Rat) {
        out.push(Fact::computed(FactTag::FiniteType, "presentation"));
        if finite_over_base(b) {
            out.push(Fact::computed(FactTag::Finite, "integral relations"));
        }
    }
    if let Ok(Some(img)) = spectral_image(u) {
        out.push(Fact::computed(FactTag::SpectraImage(img), "leading coefficients"));
    }
    match is_epimorphism(u) {
        Ok(Epi::Yes) => out.push(Fact::computed(FactTag::Epimorphism, "tensor square")),
        Ok(Epi::No { .. }) => out.push(Fact::computed(FactTag::NotEpimorphism, "tensor square")),
        _ => {}
    }
    out
}
