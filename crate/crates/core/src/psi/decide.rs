//! Global decisions: enumerate the primes that can fail and inspect their fibers.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use super::reduce::{common_ideal_reduce, Reduction};
use super::{fiber_ring, FiberReport, Property};
use crate::error::{Error, Result};
use crate::finring::{self, FiniteRing};
use crate::kernel::ideal::{quotient_basis, QuotientBasis};
use crate::kernel::primes::{prime_factors, primes_up_to};
use crate::kernel::{Domain, Monomial};
use crate::rings::{base_change, base_prime, verify_prime, FpAlgebra, IdealSpec, PrimeSpec, RingMorphism};

pub const DEFAULT_SEARCH_BOUND: u64 = 1000;
const CHUNK: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Yes,
    No,
    Unknown,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Status::Yes => write!(f, "yes"),
            Status::No => write!(f, "no"),
            Status::Unknown => write!(f, "unknown"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PsiVerdict {
    pub property: Property,
    pub status: Status,
    /// For `No`: the fiber that fails.
    pub witness: Option<Box<FiberReport>>,
    /// Other primes found failing, in search order.
    pub also_failing: Vec<PrimeSpec>,
    /// For `Unknown`: every prime up to this bound was checked.
    pub searched_bound: Option<u64>,
    /// How the verdict was reached.
    pub argument: String,
}

impl PsiVerdict {
    fn yes(property: Property, argument: impl Into<String>) -> Self {
        PsiVerdict {
            property,
            status: Status::Yes,
            witness: None,
            also_failing: Vec::new(),
            searched_bound: None,
            argument: argument.into(),
        }
    }

    /// `No` from failing fibers listed in search order.
    fn from_failures(property: Property, mut failing: Vec<FiberReport>, argument: impl Into<String>) -> Self {
        let k = failing.iter().position(|r| r.splits()).unwrap_or(0);
        let witness = failing.remove(k);
        PsiVerdict {
            property,
            status: Status::No,
            witness: Some(Box::new(witness)),
            also_failing: failing.into_iter().map(|r| r.prime).collect(),
            searched_bound: None,
            argument: argument.into(),
        }
    }

    pub fn is_yes(&self) -> bool {
        self.status == Status::Yes
    }

    pub fn is_no(&self) -> bool {
        self.status == Status::No
    }
}

impl fmt::Display for PsiVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.property, self.status)?;
        if let Some(w) = &self.witness {
            write!(f, "; {w}")?;
        }
        if let Some(b) = self.searched_bound {
            write!(f, "; no failing prime up to {b}")?;
        }
        Ok(())
    }
}

pub fn decide_psi(u: &RingMorphism, bound: u64) -> Result<PsiVerdict> {
    decide(u, Property::Psi, bound)
}

pub fn decide_strong(u: &RingMorphism, bound: u64) -> Result<PsiVerdict> {
    decide(u, Property::Strong, bound)
}

/// Decides `prop` for `u` on the sources whose spectrum can be handled.
pub fn decide(u: &RingMorphism, prop: Property, bound: u64) -> Result<PsiVerdict> {
    let a = u.source();
    let b = u.target();
    if b.is_zero_ring() {
        return Ok(PsiVerdict::yes(prop, "the target is the zero ring"));
    }
    if a.is_base_ring() {
        return match a.base() {
            Domain::Int => decide_over_integers(u, prop, bound),
            _ => {
                let primes = vec![base_prime(a, 0)?];
                over_primes(u, prop, primes, "the source is a field; its only prime is (0)")
            }
        };
    }
    match FiniteRing::from_algebra(a, finring::DEFAULT_BOUND) {
        Ok(fa) => return decide_finite_source(u, prop, &fa),
        Err(Error::NotFiniteQuotient(_)) => {}
        Err(e) => return Err(e),
    }
    if a.base().is_field() {
        if let Ok(p) = verify_prime(&IdealSpec::zero(a)) {
            if p.is_maximal() {
                return over_primes(u, prop, vec![p], "the source is a field; its only prime is (0)");
            }
        }
    }
    match conductor(u)? {
        Some(Conductor::Isomorphism) => Ok(PsiVerdict::yes(prop, "the source and target lattices coincide")),
        Some(Conductor::Reduced(red, n)) => {
            let arg = format!("common ideal ({n}) of source and target; decided on the finite quotients");
            decide_reduced(u, &red, prop, &arg)
        }
        None => Err(Error::UnsupportedSource(format!(
            "cannot enumerate the spectrum of {a}: not a base ring, not finite, and no conductor found"
        ))),
    }
}

fn fibers(u: &RingMorphism, primes: &[PrimeSpec]) -> Result<Vec<FiberReport>> {
    primes.par_iter().map(|p| fiber_ring(u, p)).collect()
}

/// The verdict from checking exactly the given primes, in order.
fn over_primes(u: &RingMorphism, prop: Property, primes: Vec<PrimeSpec>, argument: &str) -> Result<PsiVerdict> {
    let failing: Vec<FiberReport> = fibers(u, &primes)?.into_iter().filter(|r| r.fails(prop)).collect();
    if failing.is_empty() {
        Ok(PsiVerdict::yes(prop, argument))
    } else {
        Ok(PsiVerdict::from_failures(prop, failing, argument))
    }
}

fn base_primes(a: &FpAlgebra, ps: impl IntoIterator<Item = u64>) -> Result<Vec<PrimeSpec>> {
    ps.into_iter().map(|p| base_prime(a, p)).collect()
}

fn factor(c: &BigInt) -> Result<Vec<u64>> {
    prime_factors(c).ok_or_else(|| Error::ResourceLimit(format!("cannot factor {c}")))
}

/// Source `ℤ`: every prime is `(0)` or `(p)`.
fn decide_over_integers(u: &RingMorphism, prop: Property, bound: u64) -> Result<PsiVerdict> {
    let a = u.source();
    let b = u.target();
    match b.base() {
        Domain::Rat => {
            return over_primes(u, prop, base_primes(a, [0])?, "every prime p is invertible in the target");
        }
        Domain::ModP(q) => {
            return over_primes(u, prop, base_primes(a, [q])?, &format!("the target has characteristic {q}"));
        }
        Domain::Int => {}
    }
    let gb = b.gb();
    if let Some(c) = gb.integer_part() {
        let ps = factor(&c.abs())?;
        let arg = format!("{c} = 0 in the target, so only primes dividing it have nonzero fibers");
        return over_primes(u, prop, base_primes(a, ps)?, &arg);
    }
    let critical: BTreeSet<u64> = gb
        .basis()
        .iter()
        .map(|g| g.lc().expect("nonzero").numer().abs())
        .filter(|c| !c.is_one())
        .map(|c| factor(&c))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    let bq = base_change(b, Domain::Rat)?;
    let generic_dim = quotient_basis(&bq.ideal())?.dim();
    let mut first = vec![0];
    first.extend(critical.iter().copied());
    let first = base_primes(a, first)?;
    let listed = critical.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(", ");
    match generic_dim {
        None => over_primes(u, prop, first, "the generic fiber is infinite-dimensional"),
        Some(1) => over_primes(
            u,
            prop,
            first,
            &format!(
                "generic rank 1: away from (0) and the leading-coefficient primes {{{listed}}} every fiber is GF(p)"
            ),
        ),
        Some(d) if prop == Property::Strong => over_primes(
            u,
            prop,
            base_primes(a, [0])?,
            &format!("the generic fiber has dimension {d} over QQ"),
        ),
        Some(_) => {
            let failing: Vec<FiberReport> = fibers(u, &first)?.into_iter().filter(|r| r.fails(prop)).collect();
            if !failing.is_empty() {
                return Ok(PsiVerdict::from_failures(prop, failing, "failure at (0) or a leading-coefficient prime"));
            }
            search(u, prop, bound, &critical)
        }
    }
}

/// Scans the remaining primes up to `bound` in chunks, stopping after the
/// first chunk that produces a splitting fiber.
fn search(u: &RingMorphism, prop: Property, bound: u64, skip: &BTreeSet<u64>) -> Result<PsiVerdict> {
    let a = u.source();
    let primes: Vec<u64> = primes_up_to(bound).into_iter().filter(|p| !skip.contains(p)).collect();
    let mut failing = Vec::new();
    for chunk in primes.chunks(CHUNK) {
        let specs = base_primes(a, chunk.iter().copied())?;
        failing.extend(fibers(u, &specs)?.into_iter().filter(|r| r.fails(prop)));
        if failing.iter().any(|r| r.splits()) {
            break;
        }
    }
    if failing.is_empty() {
        return Ok(PsiVerdict {
            property: prop,
            status: Status::Unknown,
            witness: None,
            also_failing: Vec::new(),
            searched_bound: Some(bound),
            argument: format!("every prime up to {bound} passes, but the generic fiber has dimension at least 2"),
        });
    }
    Ok(PsiVerdict::from_failures(prop, failing, format!("search over primes up to {bound}")))
}

/// Lifts a prime of the finite ring built from `a` (or from a quotient of it
/// by `extra`) to a verified prime of `a`.
fn lift_prime(a: &FpAlgebra, fr: &FiniteRing, q: &finring::FiniteIdeal, extra: &[crate::kernel::Poly]) -> Result<PrimeSpec> {
    let order = a.ring().order;
    let mut gens: Vec<_> = fr
        .ideal_gens(q)
        .into_iter()
        .map(|x| {
            fr.element_poly(x)
                .expect("presented ring")
                .to_domain(a.base())
                .expect("integers map anywhere")
                .with_order(order)
        })
        .filter(|p| !p.is_zero())
        .collect();
    if let Domain::Int = a.base() {
        // the characteristic is implicit in the finite presentation
        let ch = fr.characteristic();
        gens.push(crate::kernel::Poly::from_i64(a.ring(), ch as i64));
    }
    gens.extend(extra.iter().cloned());
    let canonical = IdealSpec::new(a, gens)?.canonical_gens()?;
    verify_prime(&IdealSpec::new(a, canonical)?)
}

fn decide_finite_source(u: &RingMorphism, prop: Property, fa: &FiniteRing) -> Result<PsiVerdict> {
    let a = u.source();
    let primes = finring::prime_ideals(fa)
        .iter()
        .map(|q| lift_prime(a, fa, q, &[]))
        .collect::<Result<Vec<_>>>()?;
    let n = primes.len();
    over_primes(u, prop, primes, &format!("the source is finite with {n} prime ideals"))
}

/// The verdict on a common-ideal reduction, decided by exhaustion on the
/// finite quotients; a failing prime is lifted back for a symbolic fiber.
pub(crate) fn decide_reduced(u: &RingMorphism, red: &Reduction, prop: Property, argument: &str) -> Result<PsiVerdict> {
    let f = &red.finite;
    let status = finring::bruteforce_status(f);
    let ok = match prop {
        Property::Psi => status.psi,
        Property::Strong => status.strong,
    };
    if ok {
        return Ok(PsiVerdict::yes(prop, argument));
    }
    let fa = f.source();
    let extra: Vec<_> = red.source_ideal.gens().to_vec();
    let mut failing = Vec::new();
    for q in finring::prime_ideals(fa) {
        let j = f.extend(&q);
        let tb = f.target();
        if j.len() == tb.size() {
            continue;
        }
        let bad = !finring::is_prime_ideal_finite(tb, &j)
            || (prop == Property::Strong && tb.size() / j.len() != fa.size() / q.len());
        if bad {
            let p = lift_prime(u.source(), fa, &q, &extra)?;
            failing.push(fiber_ring(u, &p)?);
        }
    }
    if failing.is_empty() {
        return Err(Error::ResourceLimit("exhaustive search failed but no failing prime was lifted".into()));
    }
    Ok(PsiVerdict::from_failures(prop, failing, argument))
}

pub(crate) enum Conductor {
    Isomorphism,
    Reduced(Box<Reduction>, BigInt),
}

/// Free `ℤ`-basis of an algebra whose Gröbner basis has unit leading
/// coefficients and finitely many standard monomials.
fn lattice_basis(a: &FpAlgebra) -> Result<Option<Vec<Monomial>>> {
    if a.base() != Domain::Int || a.gb().basis().iter().any(|g| !g.lc().expect("nonzero").numer().abs().is_one()) {
        return Ok(None);
    }
    match quotient_basis(&base_change(a, Domain::Rat)?.ideal())? {
        QuotientBasis::Finite(ms) => Ok(Some(ms)),
        QuotientBasis::Infinite => Ok(None),
    }
}

/// Fraction-free determinant.
fn determinant(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if m[k][k].is_zero() {
            let Some(r) = (k + 1..n).find(|&r| !m[r][k].is_zero()) else {
                return BigInt::zero();
            };
            m.swap(k, r);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

/// For `ℤ`-free algebras of equal rank with `u(A)` of finite index `N` in
/// `B`, the ideal `N·B` is common to both.
pub(crate) fn conductor(u: &RingMorphism) -> Result<Option<Conductor>> {
    let (a, b) = (u.source(), u.target());
    let (Some(ma), Some(mb)) = (lattice_basis(a)?, lattice_basis(b)?) else {
        return Ok(None);
    };
    if ma.len() != mb.len() || ma.is_empty() {
        return Ok(None);
    }
    let one = num_rational::BigRational::one();
    let matrix: Vec<Vec<BigInt>> = ma
        .iter()
        .map(|m| {
            let im = u.apply(&crate::kernel::Poly::monomial(a.ring(), m.clone(), one.clone()));
            mb.iter().map(|n| im.coeff_of(n).to_integer()).collect()
        })
        .collect();
    let det = determinant(matrix).abs();
    if det.is_zero() {
        return Ok(None);
    }
    if det.is_one() {
        return Ok(Some(Conductor::Isomorphism));
    }
    let Some(n) = det.to_i64() else {
        return Ok(None);
    };
    let i = IdealSpec::new(b, vec![crate::kernel::Poly::from_i64(b.ring(), n)])?;
    let red = common_ideal_reduce(u, &i)?;
    Ok(Some(Conductor::Reduced(Box::new(red), det)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn determinant_matches_cofactor_expansion() {
        let m = |rows: &[&[i64]]| rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect::<Vec<Vec<BigInt>>>();
        assert_eq!(determinant(m(&[&[1, -1], &[0, 2]])), BigInt::from(2));
        assert_eq!(determinant(m(&[&[0, 1], &[1, 0]])), BigInt::from(-1));
        // 2(0*1 - 4*5) - 3(1*1 - 4*2) + 1(1*5 - 0*2) = -40 + 21 + 5
        assert_eq!(determinant(m(&[&[2, 3, 1], &[1, 0, 4], &[2, 5, 1]])), BigInt::from(-14));
        assert_eq!(determinant(m(&[&[1, 2], &[2, 4]])), BigInt::zero());
    }
}
