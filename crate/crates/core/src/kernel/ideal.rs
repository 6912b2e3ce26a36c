//! Elimination, saturation, standard monomials and linear algebra in
//! zero-dimensional quotients.

use std::collections::{BTreeSet, HashMap};

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::coeff::Domain;
use super::groebner::{groebner, groebner_with, GroebnerBasis, IdealGens};
use super::limits::Limits;
use super::monomial::{Monomial, MonomialOrder};
use super::poly::{Poly, PolyRing};
use super::upoly::UPoly;
use crate::error::{Error, Result};

/// Intersection of the ideal with the subring on the variables `keep`.
///
/// The result lives in a ring whose variables are `keep`, in that order.
pub fn eliminate(gens: &IdealGens, keep: &[usize]) -> Result<IdealGens> {
    eliminate_with(gens, keep, &Limits::default())
}

pub fn eliminate_with(gens: &IdealGens, keep: &[usize], limits: &Limits) -> Result<IdealGens> {
    let ring = gens.ring();
    let n = ring.nvars;
    if let Some(&bad) = keep.iter().find(|&&k| k >= n) {
        return Err(Error::ContextMismatch(format!("variable index {bad} out of range")));
    }
    let drop: Vec<usize> = (0..n).filter(|i| !keep.contains(i)).collect();
    // new position of each old variable: eliminated block first
    let mut pos = vec![0; n];
    for (k, &i) in drop.iter().enumerate() {
        pos[i] = k;
    }
    for (k, &i) in keep.iter().enumerate() {
        pos[i] = drop.len() + k;
    }
    let big = PolyRing::new(n, ring.domain).with_order(MonomialOrder::Block(drop.len()));
    let moved: Vec<Poly> = gens.gens().iter().map(|g| g.embed(big, &pos)).collect();
    let gb = groebner_with(&IdealGens::new(big, moved)?, limits)?;
    let small = PolyRing::new(keep.len(), ring.domain);
    let tail: Vec<usize> = (drop.len()..n).collect();
    let out = gb
        .basis()
        .iter()
        .filter_map(|g| g.restrict(&tail))
        .map(|g| g.with_order(small.order))
        .collect();
    IdealGens::new(small, out)
}

/// `I : f^∞`, via an extra variable `t` with `t*f - 1` and elimination of `t`.
pub fn saturate(gens: &IdealGens, f: &Poly) -> Result<IdealGens> {
    saturate_with(gens, f, &Limits::default())
}

pub fn saturate_with(gens: &IdealGens, f: &Poly, limits: &Limits) -> Result<IdealGens> {
    if f.is_zero() {
        return Err(Error::MalformedRelation("saturation by zero".into()));
    }
    let ring = gens.ring();
    if f.ring() != ring {
        return Err(Error::ContextMismatch("saturating element lives in another ring".into()));
    }
    let n = ring.nvars;
    let ext = PolyRing::new(n + 1, ring.domain);
    let map: Vec<usize> = (0..n).collect();
    let mut g: Vec<Poly> = gens.gens().iter().map(|p| p.embed(ext, &map)).collect();
    let t = Poly::var(ext, n);
    g.push(t.mul(&f.embed(ext, &map)).sub(&Poly::one(ext)));
    let keep: Vec<usize> = (0..n).collect();
    let out = eliminate_with(&IdealGens::new(ext, g)?, &keep, limits)?;
    let gens = out.into_gens().into_iter().map(|p| p.with_order(ring.order)).collect();
    IdealGens::new(ring, gens)
}

/// Mutual containment of two ideals in the same ring.
pub fn ideals_equal(a: &IdealGens, b: &IdealGens) -> Result<bool> {
    let ga = groebner(a)?;
    let gb = groebner(b)?;
    for g in b.gens() {
        if !ga.contains(g)? {
            return Ok(false);
        }
    }
    for g in a.gens() {
        if !gb.contains(g)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Standard monomials of a zero-dimensional ideal, or `Infinite`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum QuotientBasis {
    Finite(Vec<Monomial>),
    Infinite,
}

impl QuotientBasis {
    pub fn dim(&self) -> Option<usize> {
        match self {
            QuotientBasis::Finite(v) => Some(v.len()),
            QuotientBasis::Infinite => None,
        }
    }
}

/// Monomials not divisible by any leading monomial of the basis, when finitely many.
pub fn standard_monomials(gb: &GroebnerBasis, limits: &Limits) -> Result<QuotientBasis> {
    let n = gb.ring().nvars;
    if gb.is_unit() {
        return Ok(QuotientBasis::Finite(Vec::new()));
    }
    let leads: Vec<&Monomial> = gb.basis().iter().filter_map(|g| g.lm()).collect();
    for i in 0..n {
        let has_pure = leads
            .iter()
            .any(|m| m.pure_power().map(|(v, _)| v == i).unwrap_or(false));
        if !has_pure {
            return Ok(QuotientBasis::Infinite);
        }
    }
    let reducible = |m: &Monomial| leads.iter().any(|l| l.divides(m));
    let mut seen: BTreeSet<Vec<u32>> = BTreeSet::new();
    let mut frontier = vec![Monomial::one(n)];
    seen.insert(Monomial::one(n).0);
    let mut out = Vec::new();
    while let Some(m) = frontier.pop() {
        out.push(m.clone());
        if out.len() > limits.max_terms {
            return Err(Error::ResourceLimit(format!("more than {} standard monomials", limits.max_terms)));
        }
        for i in 0..n {
            let mut e = m.0.clone();
            e[i] += 1;
            let next = Monomial(e);
            if !seen.contains(&next.0) && !reducible(&next) {
                seen.insert(next.0.clone());
                frontier.push(next);
            }
        }
    }
    let order = gb.ring().order;
    out.sort_by(|a, b| order.cmp(a, b));
    Ok(QuotientBasis::Finite(out))
}

/// Standard-monomial basis of the quotient by an ideal over a field.
pub fn quotient_basis(gens: &IdealGens) -> Result<QuotientBasis> {
    if !gens.ring().domain.is_field() {
        return Err(Error::ContextMismatch("quotient_basis needs field coefficients".into()));
    }
    let gb = groebner(gens)?;
    standard_monomials(&gb, &Limits::default())
}

/// A finite-dimensional quotient `k[x]/I` with its monomial basis.
#[derive(Clone, Debug)]
pub struct QuotientAlgebra {
    gb: GroebnerBasis,
    basis: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
}

impl QuotientAlgebra {
    pub fn new(gens: &IdealGens) -> Result<Self> {
        Self::from_gb(groebner(gens)?)
    }

    pub fn from_gb(gb: GroebnerBasis) -> Result<Self> {
        if !gb.ring().domain.is_field() {
            return Err(Error::ContextMismatch("quotient algebra needs field coefficients".into()));
        }
        match standard_monomials(&gb, &Limits::default())? {
            QuotientBasis::Infinite => Err(Error::InfiniteDimension),
            QuotientBasis::Finite(basis) => {
                let index = basis.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
                Ok(QuotientAlgebra { gb, basis, index })
            }
        }
    }

    pub fn gb(&self) -> &GroebnerBasis {
        &self.gb
    }

    pub fn ring(&self) -> PolyRing {
        self.gb.ring()
    }

    pub fn domain(&self) -> Domain {
        self.gb.ring().domain
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Monomial] {
        &self.basis
    }

    pub fn reduce(&self, f: &Poly) -> Poly {
        self.gb.normal_form(f).expect("same ring")
    }

    pub fn coords(&self, f: &Poly) -> Vec<BigRational> {
        let r = self.reduce(f);
        let mut v = vec![BigRational::zero(); self.dim()];
        for (m, c) in r.terms() {
            v[self.index[m]] = c.clone();
        }
        v
    }

    pub fn from_coords(&self, v: &[BigRational]) -> Poly {
        let terms = self.basis.iter().cloned().zip(v.iter().cloned()).collect();
        Poly::from_terms(self.ring(), terms)
    }

    pub fn mul(&self, a: &Poly, b: &Poly) -> Poly {
        self.reduce(&a.mul(b))
    }

    /// `u(a)` for a univariate `u`, by Horner's rule.
    pub fn eval(&self, u: &UPoly, a: &Poly) -> Poly {
        let ring = self.ring();
        let mut acc = Poly::zero(ring);
        for c in u.c.iter().rev() {
            acc = self.mul(&acc, a).add(&Poly::constant(ring, c.clone()));
        }
        self.reduce(&acc)
    }

    /// Monic minimal polynomial of the residue of `g`.
    pub fn min_poly(&self, g: &Poly) -> UPoly {
        let d = self.domain();
        let n = self.dim();
        if n == 0 {
            return UPoly::one(d);
        }
        // rows: (vector, combination of powers), pivot = first nonzero entry
        let mut rows: Vec<(Vec<BigRational>, Vec<BigRational>, usize)> = Vec::new();
        let g = self.reduce(g);
        let mut power = Poly::one(self.ring());
        for k in 0..=n {
            let mut v = self.coords(&power);
            let mut comb = vec![BigRational::zero(); k + 1];
            comb[k] = BigRational::one();
            for (rv, rc, piv) in &rows {
                if v[*piv].is_zero() {
                    continue;
                }
                let f = d.div(&v[*piv], &rv[*piv]);
                for i in 0..n {
                    v[i] = d.sub(&v[i], &d.mul(&f, &rv[i]));
                }
                for (i, c) in rc.iter().enumerate() {
                    comb[i] = d.sub(&comb[i], &d.mul(&f, c));
                }
            }
            match v.iter().position(|x| !x.is_zero()) {
                None => return UPoly::new(d, comb).monic(),
                Some(piv) => rows.push((v, comb, piv)),
            }
            power = self.mul(&power, &g);
        }
        unreachable!("dimension bound forces a dependence")
    }

    /// Inverse of a residue, when it is a unit.
    pub fn inverse(&self, a: &Poly) -> Option<Poly> {
        let d = self.domain();
        let m = self.min_poly(a);
        let c0 = m.coeff(0);
        if c0.is_zero() {
            return None;
        }
        // m(a) = 0 => a * (m(a) - c0)/a = -c0
        let shifted = UPoly::new(d, m.c[1..].to_vec());
        let neg_inv = d.neg(&d.inv(&c0)?);
        Some(self.eval(&shifted, a).scale(&neg_inv))
    }

    pub fn is_zero(&self, a: &Poly) -> bool {
        self.reduce(a).is_zero()
    }
}

/// Minimal polynomial of `g` modulo a zero-dimensional ideal over a field.
pub fn min_poly(g: &Poly, gens: &IdealGens) -> Result<UPoly> {
    let q = QuotientAlgebra::new(gens)?;
    Ok(q.min_poly(g))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::expr::parse_poly;
    use proptest::prelude::*;

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    fn ideal(d: Domain, vars: &[&str], gens: &[&str]) -> IdealGens {
        let ring = PolyRing::new(vars.len(), d);
        let n = names(vars);
        IdealGens::new(ring, gens.iter().map(|g| parse_poly(g, &n, ring).unwrap()).collect()).unwrap()
    }

    fn show(i: &IdealGens, vars: &[&str]) -> Vec<String> {
        let n = names(vars);
        groebner(i).unwrap().basis().iter().map(|p| p.display(&n).to_string()).collect()
    }

    #[test]
    fn elimination_examples() {
        let e = eliminate(&ideal(Domain::Rat, &["x", "y"], &["x - y"]), &[1]).unwrap();
        assert!(e.is_empty());
        let e = eliminate(&ideal(Domain::Rat, &["x", "y"], &["x^2 - 2", "y - x"]), &[1]).unwrap();
        assert_eq!(show(&e, &["y"]), vec!["y^2 - 2"]);
        let e = eliminate(&ideal(Domain::Rat, &["x", "y"], &["x*y - 1", "x"]), &[1]).unwrap();
        assert_eq!(show(&e, &["y"]), vec!["1"]);
    }

    #[test]
    fn elimination_over_integers_finds_norm() {
        // contraction of (2 + i) in Z[i] to Z, as an elimination
        let e = eliminate(&ideal(Domain::Int, &["i", "a"], &["i^2 + 1", "i + 2"]), &[1]).unwrap();
        assert_eq!(show(&e, &["a"]), vec!["5"]);
    }

    #[test]
    fn saturation_examples() {
        let r = PolyRing::new(2, Domain::Rat);
        let n = names(&["x", "y"]);
        let x = parse_poly("x", &n, r).unwrap();
        let s = saturate(&ideal(Domain::Rat, &["x", "y"], &["x*y"]), &x).unwrap();
        assert_eq!(show(&s, &["x", "y"]), vec!["y"]);
        let s = saturate(&ideal(Domain::Rat, &["x", "y"], &["x^2"]), &x).unwrap();
        assert_eq!(show(&s, &["x", "y"]), vec!["1"]);
        let z = PolyRing::new(1, Domain::Int);
        let three = Poly::from_i64(z, 3);
        let s = saturate(&ideal(Domain::Int, &["y"], &["3*y"]), &three).unwrap();
        assert_eq!(show(&s, &["y"]), vec!["y"]);
    }

    #[test]
    fn quotient_basis_examples() {
        let q = quotient_basis(&ideal(Domain::Rat, &["x"], &["x^2 + 1"])).unwrap();
        assert_eq!(q.dim(), Some(2));
        let q = quotient_basis(&ideal(Domain::Rat, &["x"], &["x - 5"])).unwrap();
        assert_eq!(q.dim(), Some(1));
        let q = quotient_basis(&ideal(Domain::Rat, &["x", "y"], &["x*y"])).unwrap();
        assert_eq!(q, QuotientBasis::Infinite);
    }

    #[test]
    fn min_poly_examples() {
        let r = PolyRing::new(1, Domain::Rat);
        let n = names(&["x"]);
        let i = ideal(Domain::Rat, &["x"], &["x^2 + 1"]);
        let m = min_poly(&parse_poly("x", &n, r).unwrap(), &i).unwrap();
        assert_eq!(m, UPoly::from_i64s(Domain::Rat, &[1, 0, 1]));
        let i = ideal(Domain::Rat, &["x"], &["x^2"]);
        let m = min_poly(&parse_poly("x + 1", &n, r).unwrap(), &i).unwrap();
        assert_eq!(m, UPoly::from_i64s(Domain::Rat, &[1, -2, 1]));
        let m = min_poly(&Poly::one(r), &i).unwrap();
        assert_eq!(m, UPoly::from_i64s(Domain::Rat, &[-1, 1]));
    }

    #[test]
    fn inverse_in_number_field() {
        let r = PolyRing::new(1, Domain::Rat);
        let n = names(&["x"]);
        let q = QuotientAlgebra::new(&ideal(Domain::Rat, &["x"], &["x^2 - 2"])).unwrap();
        let a = parse_poly("x + 1", &n, r).unwrap();
        let inv = q.inverse(&a).unwrap();
        assert!(q.mul(&a, &inv).is_one());
    }

    proptest! {
        #[test]
        fn saturation_is_a_fixpoint(a in -3i64..=3, b in -3i64..=3, c in 1i64..=3) {
            let r = PolyRing::new(2, Domain::Rat);
            let n = names(&["x", "y"]);
            let i = ideal(Domain::Rat, &["x", "y"], &[&format!("x^2*y - {a}*x*y"), &format!("y^2 + {b}*x")]);
            let f = parse_poly(&format!("x + {c}*y"), &n, r).unwrap();
            let s1 = saturate(&i, &f).unwrap();
            let s2 = saturate(&s1, &f).unwrap();
            prop_assert!(ideals_equal(&s1, &s2).unwrap());
        }

        #[test]
        fn groebner_is_idempotent(a in -4i64..=4, b in -4i64..=4, c in -4i64..=4) {
            for d in [Domain::Rat, Domain::Int, Domain::ModP(3)] {
                let i = ideal(d, &["x", "y", "z"], &[&format!("x^2 - {a}*y*z"), &format!("{b}*x*y + z^2 - 1"), &format!("y^2 - {c}*x")]);
                let gb = groebner(&i).unwrap();
                prop_assert_eq!(groebner(&gb.to_gens()).unwrap(), gb);
            }
        }
    }
}
