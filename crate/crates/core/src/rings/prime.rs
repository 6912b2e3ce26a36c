//! Primality checks for ideals in the classes the deciders can handle.

use std::fmt;

use num_traits::{Signed, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{contract_ideal, FpAlgebra, IdealSpec, RingMorphism};
use crate::error::{Error, Result};
use crate::kernel::artinian::{classify_algebra, ArtinianClass};
use crate::kernel::ideal::QuotientAlgebra;
use crate::kernel::primes::is_prime_u64;
use crate::kernel::{Domain, Poly, PolyRing};

/// Shape of a verified prime ideal `P` of `A`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PrimeKind {
    /// `A/P` is a finite extension of `𝔽_p` (`characteristic = p`) or of
    /// `ℚ` (`characteristic = 0`) of the given degree.
    Maximal { characteristic: u64, residue_degree: usize },
    /// `P = (0)` in `ℤ`.
    Generic,
    /// `P ∩ ℤ = 0` and `A/P ⊗ ℚ` is a number field of the given degree.
    RationalPoint { residue_degree: usize },
    /// `P` comes from a prime of the algebra on the other generators; the
    /// listed generators are free (appear in no relation and no generator).
    Extended { inner: Box<PrimeKind>, free: Vec<usize> },
}

impl PrimeKind {
    pub fn is_maximal(&self) -> bool {
        matches!(self, PrimeKind::Maximal { .. })
    }

    /// Characteristic of the residue field.
    pub fn characteristic(&self) -> u64 {
        match self {
            PrimeKind::Maximal { characteristic, .. } => *characteristic,
            PrimeKind::Generic | PrimeKind::RationalPoint { .. } => 0,
            PrimeKind::Extended { inner, .. } => inner.characteristic(),
        }
    }
}

impl fmt::Display for PrimeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PrimeKind::Maximal { characteristic: 0, residue_degree } => {
                write!(f, "maximal, residue field of degree {residue_degree} over QQ")
            }
            PrimeKind::Maximal { characteristic, residue_degree } => {
                write!(f, "maximal, residue field GF({characteristic}^{residue_degree})")
            }
            PrimeKind::Generic => write!(f, "generic point"),
            PrimeKind::RationalPoint { residue_degree } => {
                write!(f, "height-one prime over (0), number field of degree {residue_degree}")
            }
            PrimeKind::Extended { inner, free } => write!(f, "{inner}, extended by {} free generators", free.len()),
        }
    }
}

/// An ideal used as a prime: verified (with its kind) or merely claimed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeSpec {
    ideal: IdealSpec,
    kind: Option<PrimeKind>,
}

impl PrimeSpec {
    /// Trusts the caller; downstream operations flag the result as claimed.
    pub fn claimed(ideal: IdealSpec) -> Self {
        PrimeSpec { ideal, kind: None }
    }

    pub fn ideal(&self) -> &IdealSpec {
        &self.ideal
    }

    pub fn ambient(&self) -> &FpAlgebra {
        self.ideal.ambient()
    }

    pub fn gens(&self) -> &[Poly] {
        self.ideal.gens()
    }

    pub fn kind(&self) -> Option<&PrimeKind> {
        self.kind.as_ref()
    }

    pub fn is_verified(&self) -> bool {
        self.kind.is_some()
    }

    pub fn is_maximal(&self) -> bool {
        self.kind.as_ref().is_some_and(|k| k.is_maximal())
    }
}

impl fmt::Display for PrimeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.ideal)
    }
}

/// `A ⊗ k` for a base change `k` of the base of `A` (`ℤ -> ℚ` or `ℤ -> 𝔽_p`,
/// or the identity).
pub(crate) fn base_change(a: &FpAlgebra, d: Domain) -> Result<FpAlgebra> {
    if a.base() == d {
        return Ok(a.clone());
    }
    if a.base() != Domain::Int {
        return Err(Error::BaseIncompatible(format!("cannot change base from {} to {d}", a.base())));
    }
    let ring = PolyRing::new(a.nvars(), d);
    let rels = a
        .relations()
        .iter()
        .map(|r| r.to_domain(d).expect("integer coefficients map anywhere").with_order(ring.order))
        .collect();
    FpAlgebra::new(d, a.names().to_vec(), rels)
}

/// Moves the generators of an ideal into `A ⊗ k`.
pub(crate) fn ideal_base_change(i: &IdealSpec, ak: &FpAlgebra) -> Result<IdealSpec> {
    let d = ak.base();
    let gens = i.gens().iter().map(|g| g.to_domain(d).expect("integer coefficients map anywhere")).collect();
    IdealSpec::new(ak, gens)
}

fn classify_field_quotient(i: &IdealSpec) -> Result<Option<ArtinianClass>> {
    let gb = i.gb()?;
    match QuotientAlgebra::from_gb(gb) {
        Ok(q) => {
            // classification is deterministic for a fixed seed
            let mut rng = ChaCha8Rng::seed_from_u64(crate::kernel::artinian::classification_seed());
            Ok(Some(classify_algebra(&q, &mut rng)?))
        }
        Err(Error::InfiniteDimension) => Ok(None),
        Err(e) => Err(e),
    }
}

fn not_prime(i: &IdealSpec, class: &ArtinianClass) -> Error {
    match class {
        ArtinianClass::NotField(w) => Error::NotPrime(format!("{i}: quotient has a {} element", w.kind())),
        _ => Error::NotPrime(i.to_string()),
    }
}

/// Checks that `i` is a prime ideal and determines its kind. Positive
/// dimensional primes are accepted only as extensions of a supported prime
/// by free generators.
pub fn verify_prime(i: &IdealSpec) -> Result<PrimeSpec> {
    let kind = prime_kind(i)?;
    Ok(PrimeSpec { ideal: i.clone(), kind: Some(kind) })
}

fn prime_kind(i: &IdealSpec) -> Result<PrimeKind> {
    let a = i.ambient();
    let gb = i.gb()?;
    if gb.is_unit() {
        return Err(Error::ImproperIdeal);
    }
    match a.base() {
        Domain::Rat | Domain::ModP(_) => {
            let ch = a.base().characteristic();
            match classify_field_quotient(i)? {
                Some(ArtinianClass::Field(d)) => Ok(PrimeKind::Maximal { characteristic: ch, residue_degree: d }),
                Some(c) => Err(not_prime(i, &c)),
                None => extended(i),
            }
        }
        Domain::Int => match gb.integer_part() {
            Some(c) => {
                let c = c.abs();
                let p = c.to_u64().filter(|&p| is_prime_u64(p));
                let Some(p) = p else {
                    return Err(Error::NotPrime(format!("{i} contains {c}, which is not prime")));
                };
                let ap = base_change(a, Domain::ModP(p))?;
                let ip = ideal_base_change(i, &ap)?;
                match classify_field_quotient(&ip)? {
                    Some(ArtinianClass::Field(d)) => Ok(PrimeKind::Maximal { characteristic: p, residue_degree: d }),
                    Some(c) => Err(not_prime(i, &c)),
                    None => extended(i),
                }
            }
            None => {
                if a.nvars() == 0 {
                    return Ok(PrimeKind::Generic);
                }
                let aq = base_change(a, Domain::Rat)?;
                let iq = ideal_base_change(i, &aq)?;
                match classify_field_quotient(&iq)? {
                    Some(ArtinianClass::Field(d)) => {
                        let images = (0..aq.nvars()).map(|k| aq.var(k)).collect();
                        let u = RingMorphism::new(a.clone(), aq.clone(), images)?;
                        if contract_ideal(&u, &iq)?.same_as(i)? {
                            Ok(PrimeKind::RationalPoint { residue_degree: d })
                        } else {
                            Err(Error::NotPrime(format!("{i}: some integer is a zero divisor modulo the ideal")))
                        }
                    }
                    Some(c) => Err(not_prime(i, &c)),
                    None => extended(i),
                }
            }
        },
    }
}

/// Strips generators that occur nowhere and retries on the rest.
fn extended(i: &IdealSpec) -> Result<PrimeKind> {
    let a = i.ambient();
    let n = a.nvars();
    let used = |k: usize| a.relations().iter().chain(i.gens()).any(|p| p.uses_var(k));
    let free: Vec<usize> = (0..n).filter(|&k| !used(k)).collect();
    if free.is_empty() {
        return Err(Error::UnsupportedFiber(format!(
            "cannot verify the positive-dimensional ideal {i}"
        )));
    }
    let keep: Vec<usize> = (0..n).filter(|k| !free.contains(k)).collect();
    let names = keep.iter().map(|&k| a.names()[k].clone()).collect();
    let strip = |p: &Poly| p.restrict(&keep).expect("free generators are unused");
    let inner_a = FpAlgebra::new(a.base(), names, a.relations().iter().map(strip).collect())?;
    let inner_i = IdealSpec::new(&inner_a, i.gens().iter().map(strip).collect())?;
    let inner = prime_kind(&inner_i)?;
    Ok(PrimeKind::Extended { inner: Box::new(inner), free })
}

/// The prime `(p)` (or `(0)` for `p = 0`) of the base ring of `a`.
pub fn base_prime(a: &FpAlgebra, p: u64) -> Result<PrimeSpec> {
    let gens = if p.is_zero() { Vec::new() } else { vec![Poly::from_i64(a.ring(), p as i64)] };
    verify_prime(&IdealSpec::new(a, gens)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zz() -> FpAlgebra {
        FpAlgebra::base_ring(Domain::Int)
    }

    fn zi() -> FpAlgebra {
        FpAlgebra::parse(Domain::Int, &["i"], &["i^2 + 1"]).unwrap()
    }

    fn kind(a: &FpAlgebra, gens: &[&str]) -> Result<PrimeKind> {
        verify_prime(&IdealSpec::parse(a, gens).unwrap()).map(|p| p.kind().unwrap().clone())
    }

    #[test]
    fn primes_of_the_integers() {
        assert_eq!(kind(&zz(), &["5"]), Ok(PrimeKind::Maximal { characteristic: 5, residue_degree: 1 }));
        assert_eq!(kind(&zz(), &[]), Ok(PrimeKind::Generic));
        assert!(matches!(kind(&zz(), &["6"]), Err(Error::NotPrime(_))));
        assert_eq!(kind(&zz(), &["1"]), Err(Error::ImproperIdeal));
    }

    #[test]
    fn primes_of_gaussian_integers() {
        assert_eq!(kind(&zi(), &["3"]), Ok(PrimeKind::Maximal { characteristic: 3, residue_degree: 2 }));
        assert_eq!(kind(&zi(), &["2 + i"]), Ok(PrimeKind::Maximal { characteristic: 5, residue_degree: 1 }));
        assert!(matches!(kind(&zi(), &["5"]), Err(Error::NotPrime(_))));
        assert!(matches!(kind(&zi(), &["2"]), Err(Error::NotPrime(_))));
        assert_eq!(kind(&zi(), &[]), Ok(PrimeKind::RationalPoint { residue_degree: 2 }));
    }

    #[test]
    fn primes_over_fields() {
        let q = FpAlgebra::parse(Domain::Rat, &["x"], &[]).unwrap();
        assert_eq!(kind(&q, &["x^2 - 2"]), Ok(PrimeKind::Maximal { characteristic: 0, residue_degree: 2 }));
        assert!(matches!(kind(&q, &["x^2 - 1"]), Err(Error::NotPrime(_))));
        let qq = FpAlgebra::base_ring(Domain::Rat);
        assert_eq!(kind(&qq, &[]), Ok(PrimeKind::Maximal { characteristic: 0, residue_degree: 1 }));
    }

    #[test]
    fn non_saturated_ideal_is_rejected() {
        let zx = FpAlgebra::parse(Domain::Int, &["x"], &[]).unwrap();
        assert_eq!(kind(&zx, &["x"]), Ok(PrimeKind::RationalPoint { residue_degree: 1 }));
        assert!(matches!(kind(&zx, &["2*x"]), Err(Error::NotPrime(_))));
        assert!(matches!(kind(&zx, &["2*x - 1"]), Ok(PrimeKind::RationalPoint { .. })));
    }

    #[test]
    fn free_generators_extend_primes() {
        let zx = FpAlgebra::parse(Domain::Int, &["x"], &[]).unwrap();
        assert_eq!(
            kind(&zx, &["3"]),
            Ok(PrimeKind::Extended {
                inner: Box::new(PrimeKind::Maximal { characteristic: 3, residue_degree: 1 }),
                free: vec![0]
            })
        );
        assert!(matches!(kind(&zx, &[]), Ok(PrimeKind::Extended { .. })));
        let zxy = FpAlgebra::parse(Domain::Int, &["x", "y"], &[]).unwrap();
        assert!(matches!(kind(&zxy, &["x*y"]), Err(Error::NotPrime(_)) | Err(Error::UnsupportedFiber(_))));
    }

    #[test]
    fn zero_ring_has_no_primes() {
        let z = FpAlgebra::zero_ring(Domain::Int);
        assert_eq!(kind(&z, &[]), Err(Error::ImproperIdeal));
        assert!(!IdealSpec::zero(&z).is_proper().unwrap());
    }
}
