//! Deciding whether a zero-dimensional quotient over a field is a field.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rand::Rng;

use super::coeff::Domain;
use super::factor::factor_upoly;
use super::groebner::IdealGens;
use super::ideal::QuotientAlgebra;
use super::poly::Poly;
use super::upoly::UPoly;
use crate::error::{Error, Result};

use std::sync::atomic::{AtomicU64, Ordering};

static CLASSIFICATION_SEED: AtomicU64 = AtomicU64::new(0);

/// Seed for the randomized retries inside field classification.
/// Verdicts do not depend on it; only the route taken to reach them does.
pub fn set_classification_seed(seed: u64) {
    CLASSIFICATION_SEED.store(seed, Ordering::Relaxed);
}

pub fn classification_seed() -> u64 {
    CLASSIFICATION_SEED.load(Ordering::Relaxed)
}

const RETRIES: usize = 20;
const FORM_RANGE: i64 = 9;
const ENUMERATION_BOUND: u64 = 1 << 20;

/// Certificate that a nonzero quotient is not a field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    /// `element^order = 0` with `element != 0`.
    Nilpotent { element: Poly, order: u32 },
    /// An element whose minimal polynomial splits as `g*h` with coprime
    /// factors: `g(t)*h(t) = 0` with both nonzero, and `idempotent`
    /// (neither 0 nor 1) with `idempotent^2 = idempotent`.
    Split { idempotent: Poly, zero_divisor: Poly, partner: Poly },
    /// A generator with no pure-power leading monomial in the Gröbner basis,
    /// so the quotient is infinite-dimensional and cannot be a field.
    Transcendental { element: Poly },
}

impl Witness {
    pub fn kind(&self) -> &'static str {
        match self {
            Witness::Nilpotent { .. } => "nilpotent",
            Witness::Split { .. } => "idempotent",
            Witness::Transcendental { .. } => "transcendental",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ArtinianClass {
    Zero,
    Field(usize),
    NotField(Witness),
}

/// Result of analysing one element's minimal polynomial.
enum Probe {
    Primitive,
    Smaller,
    Refuted(Witness),
}

fn probe(q: &QuotientAlgebra, t: &Poly) -> Result<Probe> {
    let d = q.domain();
    let m = q.min_poly(t);
    let fac = factor_upoly(&m)?;
    if !fac.is_squarefree() {
        let r = fac.radical(d);
        let element = q.eval(&r, t);
        let mut order = 1;
        let mut pw = element.clone();
        while !q.is_zero(&pw) {
            pw = q.mul(&pw, &element);
            order += 1;
        }
        return Ok(Probe::Refuted(Witness::Nilpotent { element, order }));
    }
    if fac.factors.len() > 1 {
        let g = fac.factors[0].0.clone();
        let h = m.quo(&g);
        let (one, _s, tt) = g.xgcd(&h);
        debug_assert!(one.is_one());
        let e = tt.mul(&h);
        return Ok(Probe::Refuted(Witness::Split {
            idempotent: q.eval(&e, t),
            zero_divisor: q.eval(&g, t),
            partner: q.eval(&h, t),
        }));
    }
    if m.deg() == q.dim() {
        Ok(Probe::Primitive)
    } else {
        Ok(Probe::Smaller)
    }
}

/// Classifies `k[x]/I` as zero, a field of dimension `D`, or not a field
/// with a witness. Random linear forms are drawn from `rng`.
pub fn classify_artinian_quotient<R: Rng>(gens: &IdealGens, rng: &mut R) -> Result<ArtinianClass> {
    let q = QuotientAlgebra::new(gens)?;
    classify_algebra(&q, rng)
}

pub fn classify_algebra<R: Rng>(q: &QuotientAlgebra, rng: &mut R) -> Result<ArtinianClass> {
    let dim = q.dim();
    if dim == 0 {
        return Ok(ArtinianClass::Zero);
    }
    if dim == 1 {
        return Ok(ArtinianClass::Field(1));
    }
    let ring = q.ring();
    let n = ring.nvars;
    let mut vars = Vec::with_capacity(n);
    for i in 0..n {
        let x = Poly::var(ring, i);
        match probe(q, &x)? {
            Probe::Primitive => return Ok(ArtinianClass::Field(dim)),
            Probe::Refuted(w) => return Ok(ArtinianClass::NotField(w)),
            Probe::Smaller => vars.push(x),
        }
    }
    for _ in 0..RETRIES {
        let mut t = Poly::zero(ring);
        for x in &vars {
            let c = rng.gen_range(-FORM_RANGE..=FORM_RANGE);
            t = t.add(&x.scale(&BigRational::from_integer(c.into())));
        }
        if q.is_zero(&t) {
            continue;
        }
        match probe(q, &t)? {
            Probe::Primitive => return Ok(ArtinianClass::Field(dim)),
            Probe::Refuted(w) => return Ok(ArtinianClass::NotField(w)),
            Probe::Smaller => {}
        }
    }
    enumerate_fallback(q)
}

/// Walks every element of a small finite quotient.
fn enumerate_fallback(q: &QuotientAlgebra) -> Result<ArtinianClass> {
    let Domain::ModP(p) = q.domain() else {
        return Err(Error::ResourceLimit("no separating element found over QQ".into()));
    };
    let dim = q.dim();
    let size = BigUint::from(p).pow(dim as u32);
    if size > BigUint::from(ENUMERATION_BOUND) {
        return Err(Error::ResourceLimit(format!("{p}^{dim} elements exceed enumeration bound")));
    }
    let total = size.to_u64().unwrap();
    for code in 1..total {
        let mut c = code;
        let v: Vec<BigRational> = (0..dim)
            .map(|_| {
                let digit = c % p;
                c /= p;
                BigRational::from_integer(digit.into())
            })
            .collect();
        let t = q.from_coords(&v);
        match probe(q, &t)? {
            Probe::Primitive => return Ok(ArtinianClass::Field(dim)),
            Probe::Refuted(w) => return Ok(ArtinianClass::NotField(w)),
            Probe::Smaller => {}
        }
    }
    // every element generates a proper subfield: impossible for a finite field,
    // so reaching here means the algebra has no primitive element at all
    Err(Error::ResourceLimit("exhaustive search found no primitive element".into()))
}

/// Checks a witness against the quotient it came from.
pub fn verify_witness(q: &QuotientAlgebra, w: &Witness) -> bool {
    match w {
        Witness::Nilpotent { element, order } => {
            if q.is_zero(element) {
                return false;
            }
            let mut pw = Poly::one(q.ring());
            for _ in 0..*order {
                pw = q.mul(&pw, element);
            }
            q.is_zero(&pw)
        }
        Witness::Split { idempotent, zero_divisor, partner } => {
            let e = q.reduce(idempotent);
            let ok_e = !e.is_zero() && !e.is_one() && q.mul(&e, &e) == e;
            let ok_z = !q.is_zero(zero_divisor) && !q.is_zero(partner) && q.is_zero(&q.mul(zero_divisor, partner));
            ok_e && ok_z
        }
        // a finite quotient has no transcendental elements
        Witness::Transcendental { .. } => false,
    }
}

/// Convenience wrapper returning whether the minimal polynomial of `t` is irreducible.
pub fn is_irreducible(u: &UPoly) -> Result<bool> {
    if u.is_zero() || u.deg() == 0 {
        return Ok(false);
    }
    Ok(factor_upoly(u)?.is_irreducible())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::expr::parse_poly;
    use crate::kernel::poly::PolyRing;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn ideal(d: Domain, vars: &[&str], gens: &[&str]) -> IdealGens {
        let ring = PolyRing::new(vars.len(), d);
        let n: Vec<String> = vars.iter().map(|s| s.to_string()).collect();
        IdealGens::new(ring, gens.iter().map(|g| parse_poly(g, &n, ring).unwrap()).collect()).unwrap()
    }

    fn classify(d: Domain, vars: &[&str], gens: &[&str]) -> (ArtinianClass, QuotientAlgebra) {
        let i = ideal(d, vars, gens);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        (classify_artinian_quotient(&i, &mut rng).unwrap(), QuotientAlgebra::new(&i).unwrap())
    }

    fn names(vars: &[&str]) -> Vec<String> {
        vars.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn gaussian_rationals_are_a_field() {
        let (c, _) = classify(Domain::Rat, &["x"], &["x^2 + 1"]);
        assert_eq!(c, ArtinianClass::Field(2));
    }

    #[test]
    fn split_over_rationals_gives_idempotent() {
        let (c, q) = classify(Domain::Rat, &["x"], &["x^2 - 1"]);
        let ArtinianClass::NotField(w @ Witness::Split { .. }) = c else { panic!("{c:?}") };
        assert!(verify_witness(&q, &w));
        let Witness::Split { idempotent, .. } = w else { unreachable!() };
        assert_eq!(idempotent.display(&names(&["x"])).to_string(), "(1/2)*x + 1/2");
    }

    #[test]
    fn nilpotent_witness() {
        let (c, q) = classify(Domain::Rat, &["x"], &["x^2"]);
        let ArtinianClass::NotField(w) = c else { panic!() };
        assert_eq!(w, Witness::Nilpotent { element: Poly::var(q.ring(), 0), order: 2 });
        assert!(verify_witness(&q, &w));
    }

    #[test]
    fn split_mod_five_gives_zero_divisor() {
        let (c, q) = classify(Domain::ModP(5), &["x"], &["x^2 + 1"]);
        let ArtinianClass::NotField(w) = c else { panic!() };
        assert!(verify_witness(&q, &w));
        let Witness::Split { zero_divisor, partner, .. } = w else { panic!() };
        let n = names(&["x"]);
        assert_eq!(zero_divisor.display(&n).to_string(), "x + 2");
        assert_eq!(partner.display(&n).to_string(), "x + 3");
    }

    #[test]
    fn unit_ideal_is_zero() {
        let (c, _) = classify(Domain::Rat, &["x"], &["x", "x - 1"]);
        assert_eq!(c, ArtinianClass::Zero);
    }

    #[test]
    fn tiny_field_needs_fallback() {
        // F_4 x F_4 over F_2: no linear form with small coefficients helps
        // beyond x, y themselves; classification must still be decisive.
        let (c, q) = classify(Domain::ModP(2), &["x", "y"], &["x^2 + x + 1", "y^2 + y + 1"]);
        let ArtinianClass::NotField(w) = c else { panic!("{c:?}") };
        assert!(verify_witness(&q, &w));
        let (c, _) = classify(Domain::ModP(2), &["x", "y"], &["x^2 + x + 1", "y - x"]);
        assert_eq!(c, ArtinianClass::Field(2));
    }

    #[test]
    fn biquadratic_field_needs_a_linear_form() {
        let (c, q) = classify(Domain::Rat, &["x", "y"], &["x^2 - 2", "y^2 - 3"]);
        assert_eq!(c, ArtinianClass::Field(4));
        // sample of residues is invertible
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..32 {
            let v: Vec<BigRational> = (0..4).map(|_| BigRational::from_integer(rng.gen_range(-5i64..=5).into())).collect();
            let a = q.from_coords(&v);
            if q.is_zero(&a) {
                continue;
            }
            let inv = q.inverse(&a).expect("field element invertible");
            assert!(q.mul(&a, &inv).is_one());
        }
    }
}
