//! Sparse multivariate polynomials over a [`Domain`].

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::coeff::Domain;
use super::monomial::{Monomial, MonomialOrder};

/// The ambient polynomial ring of a [`Poly`]: variable count, coefficient
/// domain and term order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PolyRing {
    pub nvars: usize,
    pub domain: Domain,
    pub order: MonomialOrder,
}

impl PolyRing {
    pub fn new(nvars: usize, domain: Domain) -> Self {
        PolyRing { nvars, domain, order: MonomialOrder::GrevLex }
    }

    pub fn with_order(self, order: MonomialOrder) -> Self {
        PolyRing { order, ..self }
    }

    pub fn with_domain(self, domain: Domain) -> Self {
        PolyRing { domain, ..self }
    }

    pub fn with_nvars(self, nvars: usize) -> Self {
        PolyRing { nvars, ..self }
    }
}

/// A polynomial: nonzero terms sorted strictly descending by the ring's order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly {
    ring: PolyRing,
    terms: Vec<(Monomial, BigRational)>,
}

impl Poly {
    pub fn zero(ring: PolyRing) -> Self {
        Poly { ring, terms: Vec::new() }
    }

    pub fn one(ring: PolyRing) -> Self {
        Poly::constant(ring, BigRational::one())
    }

    pub fn constant(ring: PolyRing, c: BigRational) -> Self {
        let c = ring.domain.normalize(c);
        if c.is_zero() {
            return Poly::zero(ring);
        }
        Poly { ring, terms: vec![(Monomial::one(ring.nvars), c)] }
    }

    pub fn from_i64(ring: PolyRing, c: i64) -> Self {
        Poly::constant(ring, BigRational::from_integer(BigInt::from(c)))
    }

    pub fn var(ring: PolyRing, i: usize) -> Self {
        assert!(i < ring.nvars, "variable index out of range");
        Poly { ring, terms: vec![(Monomial::var(ring.nvars, i, 1), BigRational::one())] }
    }

    pub fn monomial(ring: PolyRing, m: Monomial, c: BigRational) -> Self {
        Poly::from_terms(ring, vec![(m, c)])
    }

    /// Builds a polynomial from arbitrary terms: sorts, merges and drops zeros.
    pub fn from_terms(ring: PolyRing, mut terms: Vec<(Monomial, BigRational)>) -> Self {
        let d = ring.domain;
        terms.sort_by(|a, b| ring.order.cmp(&b.0, &a.0));
        let mut out: Vec<(Monomial, BigRational)> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            debug_assert_eq!(m.nvars(), ring.nvars);
            match out.last_mut() {
                Some((lm, lc)) if *lm == m => *lc = d.add(lc, &c),
                _ => out.push((m, d.normalize(c))),
            }
        }
        out.retain(|(_, c)| !c.is_zero());
        Poly { ring, terms: out }
    }

    pub fn ring(&self) -> PolyRing {
        self.ring
    }

    pub fn domain(&self) -> Domain {
        self.ring.domain
    }

    pub fn nvars(&self) -> usize {
        self.ring.nvars
    }

    pub fn terms(&self) -> &[(Monomial, BigRational)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(Monomial, BigRational)> {
        self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.terms[0].1.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.is_one())
    }

    /// The constant value when the polynomial is constant.
    pub fn constant_value(&self) -> Option<BigRational> {
        match self.terms.as_slice() {
            [] => Some(BigRational::zero()),
            [(m, c)] if m.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn lm(&self) -> Option<&Monomial> {
        self.terms.first().map(|t| &t.0)
    }

    pub fn lc(&self) -> Option<&BigRational> {
        self.terms.first().map(|t| &t.1)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.iter().map(|(m, _)| m.degree()).max().unwrap_or(0)
    }

    /// Largest exponent of variable `i`.
    pub fn degree_in(&self, i: usize) -> u32 {
        self.terms.iter().map(|(m, _)| m.0[i]).max().unwrap_or(0)
    }

    pub fn uses_var(&self, i: usize) -> bool {
        self.terms.iter().any(|(m, _)| m.0[i] > 0)
    }

    fn check(&self, other: &Poly) {
        assert_eq!(self.ring, other.ring, "polynomial ring mismatch");
    }

    pub fn add(&self, other: &Poly) -> Poly {
        self.check(other);
        let d = self.ring.domain;
        let ord = self.ring.order;
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < other.terms.len() {
            let (ma, ca) = &self.terms[i];
            let (mb, cb) = &other.terms[j];
            match ord.cmp(ma, mb) {
                Ordering::Greater => {
                    out.push((ma.clone(), ca.clone()));
                    i += 1;
                }
                Ordering::Less => {
                    out.push((mb.clone(), cb.clone()));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = d.add(ca, cb);
                    if !c.is_zero() {
                        out.push((ma.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.terms[i..]);
        out.extend_from_slice(&other.terms[j..]);
        Poly { ring: self.ring, terms: out }
    }

    pub fn neg(&self) -> Poly {
        let d = self.ring.domain;
        Poly {
            ring: self.ring,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), d.neg(c))).collect(),
        }
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &BigRational) -> Poly {
        let d = self.ring.domain;
        let c = d.normalize(c.clone());
        if c.is_zero() {
            return Poly::zero(self.ring);
        }
        let terms = self
            .terms
            .iter()
            .map(|(m, a)| (m.clone(), d.mul(a, &c)))
            .filter(|(_, a)| !a.is_zero())
            .collect();
        Poly { ring: self.ring, terms }
    }

    /// Multiplies by the term `c * m`. Order is preserved for monomial orders.
    pub fn mul_term(&self, m: &Monomial, c: &BigRational) -> Poly {
        let d = self.ring.domain;
        let c = d.normalize(c.clone());
        if c.is_zero() {
            return Poly::zero(self.ring);
        }
        let terms = self
            .terms
            .iter()
            .map(|(mm, a)| (mm.mul(m), d.mul(a, &c)))
            .filter(|(_, a)| !a.is_zero())
            .collect();
        Poly { ring: self.ring, terms }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        self.check(other);
        if self.is_zero() || other.is_zero() {
            return Poly::zero(self.ring);
        }
        let d = self.ring.domain;
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                terms.push((ma.mul(mb), d.mul(ca, cb)));
            }
        }
        Poly::from_terms(self.ring, terms)
    }

    pub fn pow(&self, mut e: u32) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one(self.ring);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Divides by the leading coefficient (field domains only).
    pub fn monic(&self) -> Poly {
        match self.lc() {
            None => self.clone(),
            Some(lc) => {
                let inv = self.ring.domain.inv(lc).expect("leading coefficient not a unit");
                self.scale(&inv)
            }
        }
    }

    /// Re-sorts the terms under another order.
    pub fn with_order(&self, order: MonomialOrder) -> Poly {
        let ring = self.ring.with_order(order);
        Poly::from_terms(ring, self.terms.clone())
    }

    /// Maps coefficients into another domain along the canonical map.
    pub fn to_domain(&self, domain: Domain) -> Option<Poly> {
        let ring = self.ring.with_domain(domain);
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            terms.push((m.clone(), domain.convert_from(self.ring.domain, c)?));
        }
        Some(Poly::from_terms(ring, terms))
    }

    /// Moves the polynomial into a ring with `nvars` variables, sending
    /// variable `i` to `var_map[i]`.
    pub fn embed(&self, target: PolyRing, var_map: &[usize]) -> Poly {
        assert_eq!(var_map.len(), self.ring.nvars);
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            let mut e = vec![0u32; target.nvars];
            for (i, &x) in m.0.iter().enumerate() {
                if x > 0 {
                    e[var_map[i]] += x;
                }
            }
            let c = target
                .domain
                .convert_from(self.ring.domain, c)
                .expect("coefficient has no image in target domain");
            terms.push((Monomial(e), c));
        }
        Poly::from_terms(target, terms)
    }

    /// Restricts to the variables in `keep` (in that order); returns `None`
    /// if some other variable occurs.
    pub fn restrict(&self, keep: &[usize]) -> Option<Poly> {
        let ring = self.ring.with_nvars(keep.len());
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            let total: u32 = m.degree();
            let e: Vec<u32> = keep.iter().map(|&i| m.0[i]).collect();
            if e.iter().sum::<u32>() != total {
                return None;
            }
            terms.push((Monomial(e), c.clone()));
        }
        Some(Poly::from_terms(ring, terms))
    }

    /// Substitutes `images[i]` for variable `i`; coefficients are mapped into
    /// the images' domain.
    pub fn substitute(&self, images: &[Poly], target: PolyRing) -> Poly {
        assert_eq!(images.len(), self.ring.nvars);
        let d = target.domain;
        let mut powers: Vec<Vec<Poly>> = images.iter().map(|p| vec![Poly::one(target), p.clone()]).collect();
        let mut acc = Poly::zero(target);
        for (m, c) in &self.terms {
            let c = d
                .convert_from(self.ring.domain, c)
                .expect("coefficient has no image in target domain");
            let mut t = Poly::constant(target, c);
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let e = e as usize;
                while powers[i].len() <= e {
                    let next = powers[i].last().unwrap().mul(&images[i]);
                    powers[i].push(next);
                }
                t = t.mul(&powers[i][e]);
            }
            acc = acc.add(&t);
        }
        acc
    }

    /// Over `Rat`: multiplies by the lcm of denominators and returns the
    /// resulting integer polynomial in an `Int` ring.
    pub fn clear_denominators(&self) -> Poly {
        let l = self
            .terms
            .iter()
            .fold(BigInt::one(), |acc, (_, c)| acc.lcm(c.denom()));
        let ring = self.ring.with_domain(Domain::Int);
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| (m.clone(), BigRational::from_integer(c.numer() * (&l / c.denom()))))
            .collect();
        Poly::from_terms(ring, terms)
    }

    /// Integer content (gcd of coefficients) of an integral polynomial.
    pub fn content(&self) -> BigInt {
        self.terms
            .iter()
            .fold(BigInt::zero(), |acc, (_, c)| acc.gcd(c.numer()))
    }

    /// Integral polynomial divided by its content, with positive leading coefficient.
    pub fn primitive_part(&self) -> Poly {
        let c = self.content();
        if c.is_zero() {
            return self.clone();
        }
        let c = if self.lc().map(|x| x.is_negative()).unwrap_or(false) { -c } else { c };
        let inv = BigRational::from_integer(c);
        let terms = self.terms.iter().map(|(m, a)| (m.clone(), a / &inv)).collect();
        Poly { ring: self.ring, terms }
    }

    /// Drops the leading term.
    pub fn tail(&self) -> Poly {
        Poly { ring: self.ring, terms: self.terms[1.min(self.terms.len())..].to_vec() }
    }

    /// Coefficient of a given monomial.
    pub fn coeff_of(&self, m: &Monomial) -> BigRational {
        self.terms
            .iter()
            .find(|(mm, _)| mm == m)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(BigRational::zero)
    }

    /// Renders with the given variable names.
    pub fn display<'a>(&'a self, names: &'a [String]) -> PolyDisplay<'a> {
        PolyDisplay { poly: self, names }
    }
}

/// Formatting helper pairing a polynomial with variable names.
pub struct PolyDisplay<'a> {
    poly: &'a Poly,
    names: &'a [String],
}

fn write_monomial(f: &mut fmt::Formatter<'_>, m: &Monomial, names: &[String]) -> fmt::Result {
    let mut first = true;
    for (i, &e) in m.0.iter().enumerate() {
        if e == 0 {
            continue;
        }
        if !first {
            f.write_str("*")?;
        }
        first = false;
        match names.get(i) {
            Some(n) => f.write_str(n)?,
            None => write!(f, "x{i}")?,
        }
        if e > 1 {
            write!(f, "^{e}")?;
        }
    }
    Ok(())
}

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.poly.terms.iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if k == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            if m.is_one() {
                write!(f, "{a}")?;
            } else {
                if !a.is_one() {
                    if a.is_integer() {
                        write!(f, "{a}*")?;
                    } else {
                        write!(f, "({a})*")?;
                    }
                }
                write_monomial(f, m, self.names)?;
            }
        }
        Ok(())
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display(&[]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring2() -> PolyRing {
        PolyRing::new(2, Domain::Rat)
    }

    #[test]
    fn arithmetic_basics() {
        let r = ring2();
        let x = Poly::var(r, 0);
        let y = Poly::var(r, 1);
        let p = x.add(&y).pow(2);
        let q = x.mul(&x).add(&x.mul(&y).scale(&BigRational::from_integer(2.into()))).add(&y.mul(&y));
        assert_eq!(p, q);
        assert!(p.sub(&q).is_zero());
        assert_eq!(p.total_degree(), 2);
    }

    #[test]
    fn modp_arithmetic_wraps() {
        let r = PolyRing::new(1, Domain::ModP(5));
        let x = Poly::var(r, 0);
        let p = x.add(&Poly::from_i64(r, 2)).mul(&x.add(&Poly::from_i64(r, 3)));
        // (x+2)(x+3) = x^2 + 5x + 6 = x^2 + 1 mod 5
        let expect = x.mul(&x).add(&Poly::one(r));
        assert_eq!(p, expect);
    }

    #[test]
    fn substitution_changes_rings() {
        let src = PolyRing::new(1, Domain::Int);
        let dst = PolyRing::new(1, Domain::Int);
        let x = Poly::var(src, 0);
        let w = Poly::var(dst, 0);
        let f = x.mul(&x).sub(&Poly::from_i64(src, 17));
        let img = w.scale(&BigRational::from_integer(2.into())).sub(&Poly::one(dst));
        let g = f.substitute(&[img], dst);
        // (2w-1)^2 - 17 = 4w^2 - 4w - 16
        let names = vec!["w".to_string()];
        assert_eq!(g.display(&names).to_string(), "4*w^2 - 4*w - 16");
    }

    #[test]
    fn display_rational_coefficients() {
        let r = PolyRing::new(1, Domain::Rat);
        let x = Poly::var(r, 0);
        let p = x.scale(&BigRational::new(1.into(), 2.into())).add(&Poly::constant(r, BigRational::new(1.into(), 2.into())));
        assert_eq!(p.display(&["x".into()]).to_string(), "(1/2)*x + 1/2");
    }

    #[test]
    fn clear_denominators_and_primitive() {
        let r = PolyRing::new(1, Domain::Rat);
        let x = Poly::var(r, 0);
        let p = x.scale(&BigRational::new(2.into(), 3.into())).sub(&Poly::constant(r, BigRational::new(1.into(), 2.into())));
        let z = p.clear_denominators();
        assert_eq!(z.domain(), Domain::Int);
        assert_eq!(z.display(&["x".into()]).to_string(), "4*x - 3");
        let n = z.scale(&BigRational::from_integer((-6).into()));
        assert_eq!(n.primitive_part(), z);
    }
}
