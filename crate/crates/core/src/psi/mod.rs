//! Fiber rings and the PSI / strong PSI deciders built on them.

mod decide;
mod reduce;

pub use decide::{decide, decide_psi, decide_strong, PsiVerdict, Status, DEFAULT_SEARCH_BOUND};
pub use reduce::{
    common_ideal_reduce, quadratic_order, quadratic_order_psi, quadratic_reduction, QuadraticInstance, Reduction,
};

use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::kernel::artinian::{classify_algebra, ArtinianClass, Witness};
use crate::kernel::ideal::QuotientAlgebra;
use crate::kernel::{Domain, Poly};
use crate::rings::{
    base_change, contract_ideal, ideal_base_change, tensor_over, verify_prime, FpAlgebra, IdealSpec, PrimeKind,
    PrimeSpec, RingMorphism,
};

/// Which property a decider checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Property {
    Psi,
    Strong,
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Property::Psi => write!(f, "PSI"),
            Property::Strong => write!(f, "strong PSI"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FiberVerdict {
    Zero,
    /// A field of the given dimension over the residue field of the prime.
    Field(usize),
    NotField(Witness),
}

/// `k(P) ⊗ B`, presented over the prime field of `k(P)` (ℚ or 𝔽_p).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberReport {
    pub prime: PrimeSpec,
    pub presentation: FpAlgebra,
    pub verdict: FiberVerdict,
    /// Dimension over the prime field; `None` when infinite.
    pub total_dim: Option<usize>,
    /// Degree of `k(P)` over its prime field.
    pub residue_degree: usize,
    /// Dimension over `k(P)`; `None` when infinite.
    pub dim: Option<usize>,
}

impl FiberReport {
    pub fn is_field_or_zero(&self) -> bool {
        !matches!(self.verdict, FiberVerdict::NotField(_))
    }

    /// Zero, or a field of dimension one over `k(P)`.
    pub fn is_trivial(&self) -> bool {
        matches!(self.verdict, FiberVerdict::Zero | FiberVerdict::Field(1))
    }

    pub fn fails(&self, prop: Property) -> bool {
        match prop {
            Property::Psi => !self.is_field_or_zero(),
            Property::Strong => !self.is_trivial(),
        }
    }

    pub fn witness(&self) -> Option<&Witness> {
        match &self.verdict {
            FiberVerdict::NotField(w) => Some(w),
            _ => None,
        }
    }

    /// Whether the fiber carries a nontrivial idempotent.
    pub fn splits(&self) -> bool {
        matches!(self.witness(), Some(Witness::Split { .. }))
    }

    /// One-line rendering of the witness, in the presentation's names.
    pub fn witness_text(&self) -> Option<String> {
        let show = |p: &Poly| self.presentation.show(p);
        self.witness().map(|w| match w {
            Witness::Nilpotent { element, order } => format!("nilpotent ({})^{order} = 0", show(element)),
            Witness::Split { idempotent, zero_divisor, partner } => format!(
                "idempotent {}; ({}) * ({}) = 0",
                show(idempotent),
                show(zero_divisor),
                show(partner)
            ),
            Witness::Transcendental { element } => format!("{} is transcendental", show(element)),
        })
    }
}

impl fmt::Display for FiberReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "fiber at {}: {}", self.prime, self.presentation)?;
        match &self.verdict {
            FiberVerdict::Zero => write!(f, " is zero"),
            FiberVerdict::Field(d) => write!(f, " is a field of dimension {d} over the residue field"),
            FiberVerdict::NotField(w) => {
                write!(f, " is not a field ({})", self.witness_text().unwrap_or_else(|| w.kind().into()))?;
                match self.dim {
                    Some(d) => write!(f, ", dimension {d} over the residue field"),
                    None => write!(f, ", infinite dimension"),
                }
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LocalVerdict {
    Yes,
    No(Box<FiberReport>),
}

impl LocalVerdict {
    pub fn is_yes(&self) -> bool {
        matches!(self, LocalVerdict::Yes)
    }
}

fn ensure_verified(u: &RingMorphism, p: &PrimeSpec) -> Result<PrimeSpec> {
    if p.ambient() != u.source() {
        return Err(Error::ContextMismatch("prime is not an ideal of the source".into()));
    }
    if p.is_verified() {
        Ok(p.clone())
    } else {
        verify_prime(p.ideal())
    }
}

/// Computes and classifies the fiber ring of `u` at `p`.
pub fn fiber_ring(u: &RingMorphism, p: &PrimeSpec) -> Result<FiberReport> {
    let p = ensure_verified(u, p)?;
    let kind = p.kind().expect("verified").clone();
    let mut report = fiber_for_kind(u, &p, &kind)?;
    report.prime = p;
    Ok(report)
}

/// Generators of the target over the residue field's prime field, or `None`
/// when the fiber vanishes for characteristic reasons.
fn fiber_domain(kind: &PrimeKind, target: Domain) -> Option<Domain> {
    match kind {
        PrimeKind::Maximal { characteristic: 0, .. } | PrimeKind::Generic | PrimeKind::RationalPoint { .. } => {
            match target {
                Domain::Int | Domain::Rat => Some(Domain::Rat),
                Domain::ModP(_) => None,
            }
        }
        PrimeKind::Maximal { characteristic: p, .. } => match target {
            Domain::Int => Some(Domain::ModP(*p)),
            Domain::ModP(q) if q == *p => Some(Domain::ModP(*p)),
            _ => None,
        },
        PrimeKind::Extended { .. } => unreachable!("stripped before"),
    }
}

fn residue_degree(kind: &PrimeKind) -> usize {
    match kind {
        PrimeKind::Maximal { residue_degree, .. } | PrimeKind::RationalPoint { residue_degree } => *residue_degree,
        PrimeKind::Generic => 1,
        PrimeKind::Extended { inner, .. } => residue_degree(inner),
    }
}

fn zero_presentation(b: &FpAlgebra, d: Domain) -> Result<FpAlgebra> {
    let ring = crate::kernel::PolyRing::new(b.nvars(), d);
    FpAlgebra::new(d, b.names().to_vec(), vec![Poly::one(ring)])
}

fn fiber_for_kind(u: &RingMorphism, p: &PrimeSpec, kind: &PrimeKind) -> Result<FiberReport> {
    if let PrimeKind::Extended { inner, free } = kind {
        let s = strip_free(u, p, free)?;
        return fiber_for_kind(&s.morphism, &s.prime, inner);
    }
    let b = u.target();
    let r = residue_degree(kind);
    let Some(d) = fiber_domain(kind, b.base()) else {
        let dom = match kind.characteristic() {
            0 => Domain::Rat,
            c => Domain::ModP(c),
        };
        return Ok(FiberReport {
            prime: p.clone(),
            presentation: zero_presentation(b, dom)?,
            verdict: FiberVerdict::Zero,
            total_dim: Some(0),
            residue_degree: r,
            dim: Some(0),
        });
    };
    let bk = base_change(b, d)?;
    let order = bk.ring().order;
    let gens: Vec<Poly> = p
        .gens()
        .iter()
        .map(|g| u.apply(g).to_domain(d).expect("integer coefficients map anywhere").with_order(order))
        .collect();
    let presentation = bk.with_relations(gens)?;
    let gb = presentation.gb().clone();
    if gb.is_unit() {
        return Ok(FiberReport {
            prime: p.clone(),
            presentation,
            verdict: FiberVerdict::Zero,
            total_dim: Some(0),
            residue_degree: r,
            dim: Some(0),
        });
    }
    match QuotientAlgebra::from_gb(gb.clone()) {
        Ok(q) => {
            let total = q.dim();
            let mut rng = ChaCha8Rng::seed_from_u64(crate::kernel::artinian::classification_seed());
            let verdict = match classify_algebra(&q, &mut rng)? {
                ArtinianClass::Zero => FiberVerdict::Zero,
                ArtinianClass::Field(t) => FiberVerdict::Field(t / r),
                ArtinianClass::NotField(w) => FiberVerdict::NotField(w),
            };
            Ok(FiberReport {
                prime: p.clone(),
                presentation,
                verdict,
                total_dim: Some(total),
                residue_degree: r,
                dim: Some(total / r),
            })
        }
        Err(Error::InfiniteDimension) => {
            let ring = presentation.ring();
            let k = (0..ring.nvars)
                .find(|&k| {
                    !gb.basis().iter().any(|g| g.lm().and_then(|m| m.pure_power()).is_some_and(|(v, _)| v == k))
                })
                .expect("an infinite quotient has a generator with no pure-power leading monomial");
            Ok(FiberReport {
                prime: p.clone(),
                presentation,
                verdict: FiberVerdict::NotField(Witness::Transcendental { element: Poly::var(ring, k) }),
                total_dim: None,
                residue_degree: r,
                dim: None,
            })
        }
        Err(e) => Err(e),
    }
}

/// `u` with the free generators of an extended prime removed on both sides.
struct Stripped {
    morphism: RingMorphism,
    prime: PrimeSpec,
    /// Target generator indices that survive, in order.
    target_keep: Vec<usize>,
}

fn strip_free(u: &RingMorphism, p: &PrimeSpec, free: &[usize]) -> Result<Stripped> {
    let a = u.source();
    let b = u.target();
    let unsupported = || {
        Error::UnsupportedFiber(format!(
            "{} is positive-dimensional and its free generators do not map to free generators of the target",
            p
        ))
    };
    let keep_a: Vec<usize> = (0..a.nvars()).filter(|k| !free.contains(k)).collect();
    let mut dropped = Vec::new();
    for &k in free {
        let im = &u.images()[k];
        let j = (0..b.nvars()).find(|&j| *im == Poly::var(b.ring(), j)).ok_or_else(unsupported)?;
        let used = b.relations().iter().any(|r| r.uses_var(j))
            || keep_a.iter().any(|&i| u.images()[i].uses_var(j))
            || dropped.contains(&j);
        if used {
            return Err(unsupported());
        }
        dropped.push(j);
    }
    let keep_b: Vec<usize> = (0..b.nvars()).filter(|j| !dropped.contains(j)).collect();
    let restrict = |q: &Poly, keep: &[usize]| q.restrict(keep).expect("free generators are unused");
    let a2 = FpAlgebra::new(
        a.base(),
        keep_a.iter().map(|&k| a.names()[k].clone()).collect(),
        a.relations().iter().map(|q| restrict(q, &keep_a)).collect(),
    )?;
    let b2 = FpAlgebra::new(
        b.base(),
        keep_b.iter().map(|&k| b.names()[k].clone()).collect(),
        b.relations().iter().map(|q| restrict(q, &keep_b)).collect(),
    )?;
    let images = keep_a.iter().map(|&k| restrict(&u.images()[k], &keep_b)).collect();
    let morphism = RingMorphism::new(a2.clone(), b2, images)?;
    let gens = p.gens().iter().map(|g| restrict(g, &keep_a)).collect();
    let prime = verify_prime(&IdealSpec::new(&a2, gens)?)?;
    Ok(Stripped { morphism, prime, target_keep: keep_b })
}

/// Whether every `A`-prime ideal over `p` is prime: the fiber is a field or zero.
pub fn psi_at(u: &RingMorphism, p: &PrimeSpec) -> Result<LocalVerdict> {
    let r = fiber_ring(u, p)?;
    Ok(if r.is_field_or_zero() { LocalVerdict::Yes } else { LocalVerdict::No(Box::new(r)) })
}

/// Whether the fiber at `p` has dimension at most one over the residue field.
pub fn strong_at(u: &RingMorphism, p: &PrimeSpec) -> Result<LocalVerdict> {
    let r = fiber_ring(u, p)?;
    Ok(if r.is_trivial() { LocalVerdict::Yes } else { LocalVerdict::No(Box::new(r)) })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum APrime {
    Yes,
    /// `witness` lies in the contraction of the extension but not in `I`.
    No { witness: Option<Poly>, reason: String },
}

/// `B → B ⊗ ℚ` for an algebra over the integers.
fn rationalization(b: &FpAlgebra) -> Result<RingMorphism> {
    let bq = base_change(b, Domain::Rat)?;
    let images = (0..bq.nvars()).map(|k| bq.var(k)).collect();
    RingMorphism::new(b.clone(), bq, images)
}

/// Whether `i` is an A-prime ideal of the target: it must be the contraction
/// of its extension to the fiber ring over `P = u⁻¹(I)`.
pub fn is_a_prime(u: &RingMorphism, i: &IdealSpec) -> Result<APrime> {
    if i.ambient() != u.target() {
        return Err(Error::ContextMismatch("ideal is not in the target of the morphism".into()));
    }
    if !i.is_proper()? {
        return Err(Error::ImproperIdeal);
    }
    let pc = contract_ideal(u, i)?;
    let p = match verify_prime(&pc) {
        Ok(p) => p,
        Err(Error::NotPrime(why)) => {
            return Ok(APrime::No { witness: None, reason: format!("the contraction {pc} is not prime: {why}") })
        }
        Err(e) => return Err(e),
    };
    match p.kind().expect("verified") {
        // B/I is already a k(P)-algebra, so I is the contraction of its extension
        PrimeKind::Maximal { .. } => Ok(APrime::Yes),
        PrimeKind::Generic | PrimeKind::RationalPoint { .. } => {
            let b = u.target();
            if b.base() != Domain::Int {
                return Ok(APrime::Yes);
            }
            let v = rationalization(b)?;
            let iq = ideal_base_change(i, v.target())?;
            let back = contract_ideal(&v, &iq)?;
            let gb = i.gb()?;
            for g in back.gens() {
                if !gb.contains(g)? {
                    return Ok(APrime::No {
                        witness: Some(g.clone()),
                        reason: format!("{} is in the saturation but not in {i}", b.show(g)),
                    });
                }
            }
            Ok(APrime::Yes)
        }
        PrimeKind::Extended { .. } => Err(Error::UnsupportedFiber(format!(
            "A-primality over the positive-dimensional prime {p}"
        ))),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Preimage {
    Prime(IdealSpec),
    /// `PB = B`: no prime of the target lies over `P`.
    NoPrimeOver,
}

/// The unique prime of the target over `p`: the kernel of `B → k(P) ⊗ B`.
pub fn spectral_preimage(u: &RingMorphism, p: &PrimeSpec) -> Result<Preimage> {
    let p = ensure_verified(u, p)?;
    let report = fiber_ring(u, &p)?;
    match report.verdict {
        FiberVerdict::Zero => return Ok(Preimage::NoPrimeOver),
        FiberVerdict::NotField(_) => return Err(Error::NotPsiAtPrime(p.to_string())),
        FiberVerdict::Field(_) => {}
    }
    let kind = p.kind().expect("verified").clone();
    preimage_for_kind(u, &p, &kind).map(Preimage::Prime)
}

fn preimage_for_kind(u: &RingMorphism, p: &PrimeSpec, kind: &PrimeKind) -> Result<IdealSpec> {
    let b = u.target();
    match kind {
        PrimeKind::Extended { inner, free } => {
            let s = strip_free(u, p, free)?;
            let q = preimage_for_kind(&s.morphism, &s.prime, inner)?;
            let gens = q.gens().iter().map(|g| g.embed(b.ring(), &s.target_keep)).collect();
            canonical(&IdealSpec::new(b, gens)?)
        }
        PrimeKind::Maximal { .. } => canonical(&extension(u, p)?),
        PrimeKind::Generic | PrimeKind::RationalPoint { .. } => {
            let pb = extension(u, p)?;
            if b.base() != Domain::Int {
                return canonical(&pb);
            }
            let v = rationalization(b)?;
            let pq = ideal_base_change(&pb, v.target())?;
            canonical(&contract_ideal(&v, &pq)?)
        }
    }
}

fn extension(u: &RingMorphism, p: &PrimeSpec) -> Result<IdealSpec> {
    IdealSpec::new(u.target(), p.gens().iter().map(|g| u.apply(g)).filter(|g| !g.is_zero()).collect())
}

/// Reduced generators, dropping (from the back) any implied by the rest.
fn canonical(i: &IdealSpec) -> Result<IdealSpec> {
    let mut gens = i.canonical_gens()?;
    let mut k = gens.len();
    while k > 0 {
        k -= 1;
        let mut rest = gens.clone();
        let g = rest.remove(k);
        if IdealSpec::new(i.ambient(), rest.clone())?.contains(&g)? {
            gens = rest;
        }
    }
    IdealSpec::new(i.ambient(), gens)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MbClass {
    Maximal,
    Unit,
    Neither,
}

/// Classifies `MB` for a maximal ideal `M` of the source.
pub fn mb_maximal_check(u: &RingMorphism, m: &PrimeSpec) -> Result<MbClass> {
    let m = ensure_verified(u, m)?;
    if !m.is_maximal() {
        return Err(Error::UnsupportedFiber(format!("{m} is not maximal")));
    }
    let r = fiber_ring(u, &m)?;
    Ok(match r.verdict {
        FiberVerdict::Zero => MbClass::Unit,
        FiberVerdict::Field(_) => MbClass::Maximal,
        FiberVerdict::NotField(_) => MbClass::Neither,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Epi {
    Yes,
    /// A generator `x ⊗ 1 - 1 ⊗ x` of the kernel of `B ⊗ B → B` that is nonzero.
    No { element: Poly, shown: String },
    Unknown(String),
}

/// Whether `B ⊗_A B → B` is an isomorphism.
pub fn is_epimorphism(u: &RingMorphism) -> Result<Epi> {
    let t = match tensor_over(u, u) {
        Ok(t) => t,
        Err(Error::ResourceLimit(why)) => return Ok(Epi::Unknown(why)),
        Err(e) => return Err(e),
    };
    for k in &t.kernel {
        if !t.algebra.is_zero(k) {
            return Ok(Epi::No { element: k.clone(), shown: t.algebra.show(k) });
        }
    }
    Ok(Epi::Yes)
}

#[cfg(test)]
mod tests;
