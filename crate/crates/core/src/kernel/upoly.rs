//! Dense univariate polynomials over a field domain, plus integer helpers.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::coeff::Domain;
use super::monomial::Monomial;
use super::poly::{Poly, PolyRing};

/// Coefficients low to high, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UPoly {
    pub d: Domain,
    pub c: Vec<BigRational>,
}

impl UPoly {
    pub fn new(d: Domain, c: Vec<BigRational>) -> Self {
        let mut p = UPoly { d, c: c.into_iter().map(|x| d.normalize(x)).collect() };
        p.trim();
        p
    }

    fn trim(&mut self) {
        while self.c.last().map(|x| x.is_zero()).unwrap_or(false) {
            self.c.pop();
        }
    }

    pub fn zero(d: Domain) -> Self {
        UPoly { d, c: Vec::new() }
    }

    pub fn one(d: Domain) -> Self {
        UPoly { d, c: vec![BigRational::one()] }
    }

    pub fn x(d: Domain) -> Self {
        UPoly { d, c: vec![BigRational::zero(), BigRational::one()] }
    }

    pub fn constant(d: Domain, v: BigRational) -> Self {
        UPoly::new(d, vec![v])
    }

    pub fn from_i64s(d: Domain, c: &[i64]) -> Self {
        UPoly::new(d, c.iter().map(|&x| BigRational::from_integer(x.into())).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.c.len() == 1 && self.c[0].is_one()
    }

    /// Degree; zero polynomial reports 0 (check `is_zero` where it matters).
    pub fn deg(&self) -> usize {
        self.c.len().saturating_sub(1)
    }

    pub fn lc(&self) -> BigRational {
        self.c.last().cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn coeff(&self, i: usize) -> BigRational {
        self.c.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn add(&self, o: &UPoly) -> UPoly {
        let n = self.c.len().max(o.c.len());
        let c = (0..n).map(|i| self.d.add(&self.coeff(i), &o.coeff(i))).collect();
        UPoly::new(self.d, c)
    }

    pub fn sub(&self, o: &UPoly) -> UPoly {
        let n = self.c.len().max(o.c.len());
        let c = (0..n).map(|i| self.d.sub(&self.coeff(i), &o.coeff(i))).collect();
        UPoly::new(self.d, c)
    }

    pub fn scale(&self, a: &BigRational) -> UPoly {
        UPoly::new(self.d, self.c.iter().map(|x| self.d.mul(x, a)).collect())
    }

    pub fn mul(&self, o: &UPoly) -> UPoly {
        if self.is_zero() || o.is_zero() {
            return UPoly::zero(self.d);
        }
        let mut c = vec![BigRational::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        UPoly::new(self.d, c)
    }

    pub fn monic(&self) -> UPoly {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self.d.inv(&self.lc()).expect("field coefficients");
        self.scale(&inv)
    }

    /// Quotient and remainder; `o` must be nonzero.
    pub fn divrem(&self, o: &UPoly) -> (UPoly, UPoly) {
        assert!(!o.is_zero(), "division by zero polynomial");
        let d = self.d;
        let mut r = self.c.clone();
        let n = o.c.len();
        if r.len() < n {
            return (UPoly::zero(d), self.clone());
        }
        let inv = d.inv(&o.lc()).expect("field coefficients");
        let mut q = vec![BigRational::zero(); r.len() - n + 1];
        for k in (0..q.len()).rev() {
            let coef = d.mul(&r[k + n - 1], &inv);
            if coef.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                r[k + j] = d.sub(&r[k + j], &d.mul(&coef, b));
            }
            q[k] = coef;
        }
        r.truncate(n - 1);
        (UPoly::new(d, q), UPoly::new(d, r))
    }

    pub fn rem(&self, o: &UPoly) -> UPoly {
        self.divrem(o).1
    }

    pub fn quo(&self, o: &UPoly) -> UPoly {
        self.divrem(o).0
    }

    /// Monic gcd.
    pub fn gcd(&self, o: &UPoly) -> UPoly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Returns `(g, s, t)` with `s*self + t*o = g`, `g` monic.
    pub fn xgcd(&self, o: &UPoly) -> (UPoly, UPoly, UPoly) {
        let d = self.d;
        let (mut r0, mut r1) = (self.clone(), o.clone());
        let (mut s0, mut s1) = (UPoly::one(d), UPoly::zero(d));
        let (mut t0, mut t1) = (UPoly::zero(d), UPoly::one(d));
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1);
            r0 = std::mem::replace(&mut r1, r);
            let s = s0.sub(&q.mul(&s1));
            s0 = std::mem::replace(&mut s1, s);
            let t = t0.sub(&q.mul(&t1));
            t0 = std::mem::replace(&mut t1, t);
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = d.inv(&r0.lc()).unwrap();
        (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
    }

    pub fn derivative(&self) -> UPoly {
        let c = self
            .c
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, a)| self.d.mul(a, &BigRational::from_integer(i.into())))
            .collect();
        UPoly::new(self.d, c)
    }

    /// `self^e mod m`.
    pub fn powmod(&self, e: &BigUint, m: &UPoly) -> UPoly {
        let base = self.rem(m);
        let mut acc = UPoly::one(self.d).rem(m);
        for i in (0..e.bits()).rev() {
            acc = acc.mul(&acc).rem(m);
            if e.bit(i) {
                acc = acc.mul(&base).rem(m);
            }
        }
        acc
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for a in self.c.iter().rev() {
            acc = self.d.add(&self.d.mul(&acc, x), a);
        }
        acc
    }

    /// Polynomial in variable `var` of `ring`.
    pub fn to_poly(&self, ring: PolyRing, var: usize) -> Poly {
        let terms = self
            .c
            .iter()
            .enumerate()
            .map(|(i, a)| (Monomial::var(ring.nvars, var, i as u32), a.clone()))
            .collect();
        Poly::from_terms(ring, terms)
    }

    /// Reads a polynomial that uses at most variable `var`.
    pub fn from_poly(p: &Poly, var: usize) -> Option<UPoly> {
        let mut c = vec![BigRational::zero(); p.degree_in(var) as usize + 1];
        for (m, a) in p.terms() {
            if m.0.iter().enumerate().any(|(i, &e)| i != var && e > 0) {
                return None;
            }
            c[m.0[var] as usize] = a.clone();
        }
        Some(UPoly::new(p.domain(), c))
    }
}

/// Dense integer polynomial helpers (coefficients low to high).
pub mod zpoly {
    use super::*;

    pub fn trim(mut c: Vec<BigInt>) -> Vec<BigInt> {
        while c.last().map(|x| x.is_zero()).unwrap_or(false) {
            c.pop();
        }
        c
    }

    pub fn mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut c = vec![BigInt::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                c[i + j] += x * y;
            }
        }
        trim(c)
    }

    pub fn sub(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        let n = a.len().max(b.len());
        let z = BigInt::zero();
        trim((0..n).map(|i| a.get(i).unwrap_or(&z) - b.get(i).unwrap_or(&z)).collect())
    }

    pub fn add(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        let n = a.len().max(b.len());
        let z = BigInt::zero();
        trim((0..n).map(|i| a.get(i).unwrap_or(&z) + b.get(i).unwrap_or(&z)).collect())
    }

    pub fn scale(a: &[BigInt], k: &BigInt) -> Vec<BigInt> {
        trim(a.iter().map(|x| x * k).collect())
    }

    /// Coefficients reduced into the symmetric range `(-m/2, m/2]`.
    pub fn symmetric(a: &[BigInt], m: &BigInt) -> Vec<BigInt> {
        let half = m / 2;
        trim(
            a.iter()
                .map(|x| {
                    let r = x.mod_floor(m);
                    if r > half {
                        r - m
                    } else {
                        r
                    }
                })
                .collect(),
        )
    }

    pub fn modulo(a: &[BigInt], m: &BigInt) -> Vec<BigInt> {
        trim(a.iter().map(|x| x.mod_floor(m)).collect())
    }

    /// Exact division over the integers, `None` when `b` does not divide `a`.
    pub fn div_exact(a: &[BigInt], b: &[BigInt]) -> Option<Vec<BigInt>> {
        if b.is_empty() {
            return None;
        }
        if a.is_empty() {
            return Some(Vec::new());
        }
        if a.len() < b.len() {
            return None;
        }
        let mut r = a.to_vec();
        let lb = b.last().unwrap();
        let mut q = vec![BigInt::zero(); a.len() - b.len() + 1];
        for k in (0..q.len()).rev() {
            let top = &r[k + b.len() - 1];
            if top.is_zero() {
                continue;
            }
            let (qq, rr) = top.div_rem(lb);
            if !rr.is_zero() {
                return None;
            }
            for (j, y) in b.iter().enumerate() {
                r[k + j] -= &qq * y;
            }
            q[k] = qq;
        }
        if r.iter().all(|x| x.is_zero()) {
            Some(trim(q))
        } else {
            None
        }
    }

    pub fn content(a: &[BigInt]) -> BigInt {
        a.iter().fold(BigInt::zero(), |g, x| g.gcd(x))
    }

    /// Divides by the content and makes the leading coefficient positive.
    pub fn primitive(a: &[BigInt]) -> Vec<BigInt> {
        let mut c = content(a);
        if c.is_zero() {
            return a.to_vec();
        }
        if a.last().map(|x| x.is_negative()).unwrap_or(false) {
            c = -c;
        }
        a.iter().map(|x| x / &c).collect()
    }

    pub fn to_upoly(a: &[BigInt], d: Domain) -> UPoly {
        UPoly::new(d, a.iter().map(|x| BigRational::from_integer(x.clone())).collect())
    }

    /// Integer representatives of a polynomial mod p, in `[0, p)`.
    pub fn from_upoly(u: &UPoly) -> Vec<BigInt> {
        u.c.iter().map(|x| x.numer().clone()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn division_and_gcd() {
        let d = Domain::Rat;
        let f = UPoly::from_i64s(d, &[-1, 0, 1]);
        let g = UPoly::from_i64s(d, &[-1, 1]);
        let (q, r) = f.divrem(&g);
        assert_eq!(q, UPoly::from_i64s(d, &[1, 1]));
        assert!(r.is_zero());
        assert_eq!(f.gcd(&g), g);
        let (h, s, t) = g.xgcd(&UPoly::from_i64s(d, &[1, 1]));
        assert!(h.is_one());
        assert_eq!(s.mul(&g).add(&t.mul(&UPoly::from_i64s(d, &[1, 1]))), h);
    }

    #[test]
    fn powmod_fermat() {
        let d = Domain::ModP(5);
        let m = UPoly::from_i64s(d, &[1, 0, 1]);
        // x^25 = x in F_25 = F_5[x]/(x^2+1)? x^2+1 splits mod 5, still x^5 == x mod each factor
        let x = UPoly::x(d);
        let r = x.powmod(&BigUint::from(5u32), &m);
        assert_eq!(r, x.rem(&m));
    }

    #[test]
    fn exact_integer_division() {
        let a = vec![BigInt::from(-1), BigInt::zero(), BigInt::from(4)];
        let b = vec![BigInt::from(-1), BigInt::from(2)];
        assert_eq!(zpoly::div_exact(&a, &b), Some(vec![BigInt::from(1), BigInt::from(2)]));
        let c = vec![BigInt::from(1), BigInt::from(3)];
        assert_eq!(zpoly::div_exact(&a, &c), None);
    }
}
