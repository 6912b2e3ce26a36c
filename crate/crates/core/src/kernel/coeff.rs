//! Coefficient domains: the integers, the rationals and prime fields.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::primes::is_prime_u64;

/// Coefficient domain of a polynomial ring.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Domain {
    Int,
    Rat,
    /// Residues modulo a prime `p`.
    ModP(u64),
}

/// A coefficient tagged with its domain.
///
/// Polynomials store bare [`BigRational`] values and carry the domain once;
/// this type is the tagged form handed across the public API.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Coefficient {
    pub domain: Domain,
    pub value: BigRational,
}

impl Coefficient {
    pub fn new(domain: Domain, value: BigRational) -> Self {
        let value = domain.normalize(value);
        Coefficient { domain, value }
    }
}

impl fmt::Display for Coefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Domain {
    /// Builds `ModP(p)` after checking that `p` is prime.
    pub fn mod_p(p: u64) -> Option<Domain> {
        is_prime_u64(p).then_some(Domain::ModP(p))
    }

    pub fn is_field(self) -> bool {
        !matches!(self, Domain::Int)
    }

    /// Characteristic of the domain (0 for `Int` and `Rat`).
    pub fn characteristic(self) -> u64 {
        match self {
            Domain::ModP(p) => p,
            _ => 0,
        }
    }

    pub fn zero(self) -> BigRational {
        BigRational::zero()
    }

    pub fn one(self) -> BigRational {
        BigRational::one()
    }

    pub fn from_i64(self, v: i64) -> BigRational {
        self.normalize(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn from_bigint(self, v: BigInt) -> BigRational {
        self.normalize(BigRational::from_integer(v))
    }

    /// Reduces a value into canonical form for this domain.
    ///
    /// For `Int` the value must already be integral; for `ModP` rationals
    /// with denominator prime to `p` are mapped to their residue.
    pub fn normalize(self, v: BigRational) -> BigRational {
        match self {
            Domain::Int => {
                debug_assert!(v.is_integer(), "non-integral value in Int domain");
                v
            }
            Domain::Rat => v,
            Domain::ModP(p) => {
                let p = BigInt::from(p);
                let num = v.numer().mod_floor(&p);
                if v.denom().is_one() {
                    return BigRational::from_integer(num);
                }
                let den = v.denom().mod_floor(&p);
                let inv = mod_inverse(&den, &p).expect("denominator divisible by p");
                BigRational::from_integer((num * inv).mod_floor(&p))
            }
        }
    }

    pub fn add(self, a: &BigRational, b: &BigRational) -> BigRational {
        match self {
            Domain::ModP(_) => self.normalize(a + b),
            _ => a + b,
        }
    }

    pub fn sub(self, a: &BigRational, b: &BigRational) -> BigRational {
        match self {
            Domain::ModP(_) => self.normalize(a - b),
            _ => a - b,
        }
    }

    pub fn mul(self, a: &BigRational, b: &BigRational) -> BigRational {
        match self {
            Domain::ModP(_) => self.normalize(a * b),
            _ => a * b,
        }
    }

    pub fn neg(self, a: &BigRational) -> BigRational {
        match self {
            Domain::ModP(_) => self.normalize(-a),
            _ => -a,
        }
    }

    /// Multiplicative inverse; `None` for zero or non-units of `Int`.
    pub fn inv(self, a: &BigRational) -> Option<BigRational> {
        if a.is_zero() {
            return None;
        }
        match self {
            Domain::Int => {
                if a.numer().abs().is_one() {
                    Some(a.clone())
                } else {
                    None
                }
            }
            Domain::Rat => Some(a.recip()),
            Domain::ModP(p) => {
                let p = BigInt::from(p);
                mod_inverse(a.numer(), &p).map(BigRational::from_integer)
            }
        }
    }

    /// Field division `a / b`; panics when `b` is not a unit.
    pub fn div(self, a: &BigRational, b: &BigRational) -> BigRational {
        let inv = self.inv(b).expect("division by a non-unit");
        self.mul(a, &inv)
    }

    pub fn pow(self, a: &BigRational, mut e: u64) -> BigRational {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// Maps a value of domain `from` into this domain along the canonical map.
    ///
    /// Returns `None` when no canonical map exists for that value (a
    /// rational with denominator divisible by `p`, or a non-integer into `Int`).
    pub fn convert_from(self, from: Domain, v: &BigRational) -> Option<BigRational> {
        match (from, self) {
            (a, b) if a == b => Some(v.clone()),
            (_, Domain::Int) => v.is_integer().then(|| v.clone()),
            (_, Domain::Rat) => Some(v.clone()),
            (_, Domain::ModP(p)) => {
                let pb = BigInt::from(p);
                if v.denom().is_multiple_of(&pb) {
                    None
                } else {
                    Some(self.normalize(v.clone()))
                }
            }
        }
    }

    pub fn name(self) -> String {
        match self {
            Domain::Int => "ZZ".to_string(),
            Domain::Rat => "QQ".to_string(),
            Domain::ModP(p) => format!("Fp({p})"),
        }
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.mod_floor(m).extended_gcd(m);
    if e.gcd.is_one() {
        Some(e.x.mod_floor(m))
    } else {
        None
    }
}

/// Euclidean division with a nonnegative remainder `0 <= r < |b|`.
pub fn euclid_divrem(a: &BigInt, b: &BigInt) -> (BigInt, BigInt) {
    let babs = b.abs();
    let r = a.mod_floor(&babs);
    let q = (a - &r) / b;
    (q, r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn modp_normalizes_fractions() {
        let d = Domain::ModP(5);
        // 1/2 = 3 mod 5
        assert_eq!(d.normalize(q(1, 2)), q(3, 1));
        assert_eq!(d.normalize(q(-1, 1)), q(4, 1));
    }

    #[test]
    fn inverses() {
        assert_eq!(Domain::ModP(7).inv(&q(3, 1)), Some(q(5, 1)));
        assert_eq!(Domain::Int.inv(&q(2, 1)), None);
        assert_eq!(Domain::Int.inv(&q(-1, 1)), Some(q(-1, 1)));
        assert_eq!(Domain::Rat.inv(&q(2, 3)), Some(q(3, 2)));
    }

    #[test]
    fn euclid_remainder_is_nonnegative() {
        let (qq, r) = euclid_divrem(&BigInt::from(-7), &BigInt::from(3));
        assert_eq!(r, BigInt::from(2));
        assert_eq!(qq, BigInt::from(-3));
        let (qq, r) = euclid_divrem(&BigInt::from(7), &BigInt::from(-3));
        assert_eq!(r, BigInt::from(1));
        assert_eq!(qq * BigInt::from(-3) + r, BigInt::from(7));
    }

    #[test]
    fn conversion_rules() {
        assert_eq!(Domain::ModP(3).convert_from(Domain::Rat, &q(1, 3)), None);
        assert_eq!(Domain::ModP(3).convert_from(Domain::Int, &q(7, 1)), Some(q(1, 1)));
        assert_eq!(Domain::Int.convert_from(Domain::Rat, &q(1, 2)), None);
    }

    #[test]
    fn mod_p_requires_prime() {
        assert!(Domain::mod_p(4).is_none());
        assert_eq!(Domain::mod_p(5), Some(Domain::ModP(5)));
    }
}
