//! Buchberger's algorithm over fields, and strong Gröbner bases over `Int`
//! using S- and G-polynomials with Euclidean reduction.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::coeff::{euclid_divrem, Domain};
use super::limits::Limits;
use super::monomial::{Monomial, MonomialOrder};
use super::poly::{Poly, PolyRing};
use crate::error::{Error, Result};

/// A list of ideal generators sharing one polynomial ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdealGens {
    ring: PolyRing,
    gens: Vec<Poly>,
}

impl IdealGens {
    pub fn new(ring: PolyRing, gens: Vec<Poly>) -> Result<Self> {
        for g in &gens {
            if g.ring() != ring {
                return Err(Error::ContextMismatch(format!(
                    "generator in {:?}, ideal in {:?}",
                    g.ring(),
                    ring
                )));
            }
        }
        let gens = gens.into_iter().filter(|g| !g.is_zero()).collect();
        Ok(IdealGens { ring, gens })
    }

    pub fn ring(&self) -> PolyRing {
        self.ring
    }

    pub fn gens(&self) -> &[Poly] {
        &self.gens
    }

    pub fn into_gens(self) -> Vec<Poly> {
        self.gens
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    /// Same generators, sorted under another order.
    pub fn with_order(&self, order: MonomialOrder) -> IdealGens {
        IdealGens {
            ring: self.ring.with_order(order),
            gens: self.gens.iter().map(|g| g.with_order(order)).collect(),
        }
    }

    pub fn extend(&self, more: impl IntoIterator<Item = Poly>) -> Result<IdealGens> {
        let mut gens = self.gens.clone();
        gens.extend(more);
        IdealGens::new(self.ring, gens)
    }
}

/// A reduced Gröbner basis; `strong` is set over `Int`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroebnerBasis {
    ring: PolyRing,
    basis: Vec<Poly>,
}

impl GroebnerBasis {
    pub fn ring(&self) -> PolyRing {
        self.ring
    }

    pub fn basis(&self) -> &[Poly] {
        &self.basis
    }

    pub fn strong(&self) -> bool {
        self.ring.domain == Domain::Int
    }

    /// True when the ideal is the whole ring.
    pub fn is_unit(&self) -> bool {
        self.basis.iter().any(|g| g.is_constant() && g.lc().map(|c| c.abs().is_one()).unwrap_or(false))
    }

    pub fn is_zero_ideal(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn normal_form(&self, f: &Poly) -> Result<Poly> {
        if f.ring() != self.ring {
            return Err(Error::ContextMismatch(format!(
                "polynomial in {:?}, basis in {:?}",
                f.ring(),
                self.ring
            )));
        }
        Ok(reduce(f, &self.basis))
    }

    pub fn contains(&self, f: &Poly) -> Result<bool> {
        Ok(self.normal_form(f)?.is_zero())
    }

    pub fn to_gens(&self) -> IdealGens {
        IdealGens { ring: self.ring, gens: self.basis.clone() }
    }

    /// The positive generator of the ideal's intersection with the integers
    /// (`Int` domain), when that intersection is nonzero.
    pub fn integer_part(&self) -> Option<BigInt> {
        self.basis
            .iter()
            .find(|g| g.is_constant())
            .map(|g| g.lc().unwrap().numer().abs())
    }
}

/// Remainder of `f` modulo the ideal of `gb`; zero iff `f` is a member.
pub fn normal_form(f: &Poly, gb: &GroebnerBasis) -> Result<Poly> {
    gb.normal_form(f)
}

/// Full reduction of `f` by `basis`, dispatching on the coefficient domain.
pub fn reduce(f: &Poly, basis: &[Poly]) -> Poly {
    if f.domain() == Domain::Int {
        reduce_int(f, basis)
    } else {
        reduce_field(f, basis)
    }
}

fn reduce_field(f: &Poly, basis: &[Poly]) -> Poly {
    let ring = f.ring();
    let d = ring.domain;
    let mut p = f.clone();
    let mut rem = Vec::new();
    while let Some((m, c)) = p.terms().first().cloned() {
        match basis.iter().find(|g| g.lm().map(|gm| gm.divides(&m)).unwrap_or(false)) {
            Some(g) => {
                let q = m.div(g.lm().unwrap());
                let coef = d.div(&c, g.lc().unwrap());
                p = p.sub(&g.mul_term(&q, &coef));
            }
            None => {
                rem.push((m, c));
                p = p.tail();
            }
        }
    }
    Poly::from_terms(ring, rem)
}

fn reduce_int(f: &Poly, basis: &[Poly]) -> Poly {
    let ring = f.ring();
    let mut p = f.clone();
    let mut rem = Vec::new();
    while let Some((m, c)) = p.terms().first().cloned() {
        let best = basis
            .iter()
            .filter(|g| g.lm().map(|gm| gm.divides(&m)).unwrap_or(false))
            .min_by(|a, b| a.lc().unwrap().abs().cmp(&b.lc().unwrap().abs()));
        match best {
            Some(g) => {
                let lc = g.lc().unwrap().numer().clone();
                let (q, _) = euclid_divrem(c.numer(), &lc);
                if !q.is_zero() {
                    let qm = m.div(g.lm().unwrap());
                    p = p.sub(&g.mul_term(&qm, &BigRational::from_integer(q)));
                }
                if p.lm() == Some(&m) {
                    rem.push(p.terms()[0].clone());
                    p = p.tail();
                }
            }
            None => {
                rem.push((m, c));
                p = p.tail();
            }
        }
    }
    Poly::from_terms(ring, rem)
}

fn check_limits(p: &Poly, limits: &Limits) -> Result<()> {
    if p.total_degree() as usize > limits.max_degree {
        return Err(Error::ResourceLimit(format!(
            "degree {} exceeds {}",
            p.total_degree(),
            limits.max_degree
        )));
    }
    if p.len() > limits.max_terms {
        return Err(Error::ResourceLimit(format!(
            "{} terms exceeds {}",
            p.len(),
            limits.max_terms
        )));
    }
    Ok(())
}

/// Computes the reduced (strong, over `Int`) Gröbner basis with default limits.
pub fn groebner(gens: &IdealGens) -> Result<GroebnerBasis> {
    groebner_with(gens, &Limits::default())
}

pub fn groebner_with(gens: &IdealGens, limits: &Limits) -> Result<GroebnerBasis> {
    let ring = gens.ring();
    for g in gens.gens() {
        check_limits(g, limits)?;
    }
    let basis = if ring.domain == Domain::Int {
        buchberger_int(gens.gens(), limits)?
    } else {
        buchberger_field(gens.gens(), limits)?
    };
    Ok(GroebnerBasis { ring, basis })
}

struct PairQueue {
    pending: Vec<(usize, usize, Monomial)>,
    live: HashSet<(usize, usize)>,
}

impl PairQueue {
    fn new() -> Self {
        PairQueue { pending: Vec::new(), live: HashSet::new() }
    }

    fn push(&mut self, i: usize, j: usize, lcm: Monomial) {
        self.live.insert((i.min(j), i.max(j)));
        self.pending.push((i, j, lcm));
    }

    fn pop_min(&mut self, order: MonomialOrder) -> Option<(usize, usize, Monomial)> {
        if self.pending.is_empty() {
            return None;
        }
        let mut best = 0;
        for k in 1..self.pending.len() {
            if order.cmp(&self.pending[k].2, &self.pending[best].2).is_lt() {
                best = k;
            }
        }
        let p = self.pending.swap_remove(best);
        self.live.remove(&(p.0.min(p.1), p.0.max(p.1)));
        Some(p)
    }

    fn is_live(&self, i: usize, j: usize) -> bool {
        self.live.contains(&(i.min(j), i.max(j)))
    }
}

fn buchberger_field(input: &[Poly], limits: &Limits) -> Result<Vec<Poly>> {
    let Some(first) = input.first() else {
        return Ok(Vec::new());
    };
    let ring = first.ring();
    let d = ring.domain;
    let mut g: Vec<Poly> = Vec::new();
    let mut queue = PairQueue::new();
    let add = |h: Poly, g: &mut Vec<Poly>, queue: &mut PairQueue| {
        let k = g.len();
        let hm = h.lm().unwrap().clone();
        for (i, gi) in g.iter().enumerate() {
            queue.push(i, k, gi.lm().unwrap().lcm(&hm));
        }
        g.push(h);
    };
    for p in input {
        let r = reduce_field(p, &g);
        if r.is_zero() {
            continue;
        }
        if r.is_constant() {
            return Ok(vec![Poly::one(ring)]);
        }
        add(r.monic(), &mut g, &mut queue);
    }
    while let Some((i, j, lcm)) = queue.pop_min(ring.order) {
        let (mi, mj) = (g[i].lm().unwrap().clone(), g[j].lm().unwrap().clone());
        if mi.coprime(&mj) {
            continue;
        }
        let chain = (0..g.len()).any(|k| {
            k != i
                && k != j
                && g[k].lm().unwrap().divides(&lcm)
                && !queue.is_live(i, k)
                && !queue.is_live(j, k)
        });
        if chain {
            continue;
        }
        let s = g[i]
            .mul_term(&lcm.div(&mi), &d.inv(g[i].lc().unwrap()).unwrap())
            .sub(&g[j].mul_term(&lcm.div(&mj), &d.inv(g[j].lc().unwrap()).unwrap()));
        let r = reduce_field(&s, &g);
        if r.is_zero() {
            continue;
        }
        check_limits(&r, limits)?;
        if r.is_constant() {
            return Ok(vec![Poly::one(ring)]);
        }
        if g.len() >= limits.max_basis {
            return Err(Error::ResourceLimit(format!("basis exceeds {} elements", limits.max_basis)));
        }
        add(r.monic(), &mut g, &mut queue);
    }
    Ok(interreduce_field(g))
}

fn interreduce_field(g: Vec<Poly>) -> Vec<Poly> {
    let mut g: Vec<Poly> = g.into_iter().map(|p| p.monic()).collect();
    let order = match g.first() {
        Some(p) => p.ring().order,
        None => return g,
    };
    g.sort_by(|a, b| order.cmp(a.lm().unwrap(), b.lm().unwrap()));
    let mut minimal: Vec<Poly> = Vec::new();
    for p in g {
        if !minimal.iter().any(|q| q.lm().unwrap().divides(p.lm().unwrap())) {
            minimal.push(p);
        }
    }
    let mut out = Vec::with_capacity(minimal.len());
    for k in 0..minimal.len() {
        let others: Vec<Poly> = minimal
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != k)
            .map(|(_, p)| p.clone())
            .collect();
        let p = &minimal[k];
        let head = Poly::monomial(p.ring(), p.lm().unwrap().clone(), p.lc().unwrap().clone());
        out.push(head.add(&reduce_field(&p.tail(), &others)));
    }
    out
}

fn positive_lc(p: Poly) -> Poly {
    if p.lc().map(|c| c.is_negative()).unwrap_or(false) {
        p.neg()
    } else {
        p
    }
}

fn buchberger_int(input: &[Poly], limits: &Limits) -> Result<Vec<Poly>> {
    let Some(first) = input.first() else {
        return Ok(Vec::new());
    };
    let ring = first.ring();
    let mut g: Vec<Poly> = Vec::new();
    let mut queue = PairQueue::new();
    let add = |h: Poly, g: &mut Vec<Poly>, queue: &mut PairQueue| {
        let k = g.len();
        let hm = h.lm().unwrap().clone();
        for (i, gi) in g.iter().enumerate() {
            queue.push(i, k, gi.lm().unwrap().lcm(&hm));
        }
        g.push(h);
    };
    for p in input {
        let r = reduce_int(p, &g);
        if r.is_zero() {
            continue;
        }
        add(positive_lc(r), &mut g, &mut queue);
    }
    while let Some((i, j, lcm)) = queue.pop_min(ring.order) {
        if g.iter().any(|h| h.is_one()) {
            return Ok(vec![Poly::one(ring)]);
        }
        let (mi, mj) = (g[i].lm().unwrap().clone(), g[j].lm().unwrap().clone());
        let a = g[i].lc().unwrap().numer().clone();
        let b = g[j].lc().unwrap().numer().clone();
        let ti = lcm.div(&mi);
        let tj = lcm.div(&mj);
        let mut candidates = Vec::with_capacity(2);
        let skip_s = mi.coprime(&mj) && a.gcd(&b).is_one();
        if !skip_s {
            let c = a.lcm(&b);
            let s = g[i]
                .mul_term(&ti, &BigRational::from_integer(&c / &a))
                .sub(&g[j].mul_term(&tj, &BigRational::from_integer(&c / &b)));
            candidates.push(s);
        }
        if !a.is_multiple_of(&b) && !b.is_multiple_of(&a) {
            let e = a.extended_gcd(&b);
            let gp = g[i]
                .mul_term(&ti, &BigRational::from_integer(e.x))
                .add(&g[j].mul_term(&tj, &BigRational::from_integer(e.y)));
            candidates.push(gp);
        }
        for c in candidates {
            let r = reduce_int(&c, &g);
            if r.is_zero() {
                continue;
            }
            check_limits(&r, limits)?;
            if g.len() >= limits.max_basis {
                return Err(Error::ResourceLimit(format!("basis exceeds {} elements", limits.max_basis)));
            }
            add(positive_lc(r), &mut g, &mut queue);
        }
    }
    Ok(interreduce_int(g))
}

fn interreduce_int(g: Vec<Poly>) -> Vec<Poly> {
    let mut g: Vec<Poly> = g.into_iter().map(positive_lc).collect();
    let order = match g.first() {
        Some(p) => p.ring().order,
        None => return g,
    };
    if g.iter().any(|p| p.is_one()) {
        return vec![Poly::one(g[0].ring())];
    }
    g.sort_by(|a, b| {
        order
            .cmp(a.lm().unwrap(), b.lm().unwrap())
            .then_with(|| a.lc().unwrap().cmp(b.lc().unwrap()))
    });
    let mut minimal: Vec<Poly> = Vec::new();
    for p in g {
        let divisible = minimal.iter().any(|q| {
            q.lm().unwrap().divides(p.lm().unwrap())
                && p.lc().unwrap().numer().is_multiple_of(q.lc().unwrap().numer())
        });
        if !divisible {
            minimal.push(p);
        }
    }
    let mut out = Vec::with_capacity(minimal.len());
    for k in 0..minimal.len() {
        let others: Vec<Poly> = minimal
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != k)
            .map(|(_, p)| p.clone())
            .collect();
        let p = &minimal[k];
        let head = Poly::monomial(p.ring(), p.lm().unwrap().clone(), p.lc().unwrap().clone());
        out.push(head.add(&reduce_int(&p.tail(), &others)));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::expr::parse_poly;

    fn ideal(domain: Domain, names: &[&str], gens: &[&str]) -> IdealGens {
        let ring = PolyRing::new(names.len(), domain);
        let names: Vec<String> = names.iter().map(|s| s.to_string()).collect();
        let gens = gens.iter().map(|g| parse_poly(g, &names, ring).unwrap()).collect();
        IdealGens::new(ring, gens).unwrap()
    }

    fn show(gb: &GroebnerBasis, names: &[&str]) -> Vec<String> {
        let names: Vec<String> = names.iter().map(|s| s.to_string()).collect();
        gb.basis().iter().map(|p| p.display(&names).to_string()).collect()
    }

    #[test]
    fn principal_ideal_is_its_own_basis() {
        let gb = groebner(&ideal(Domain::Rat, &["x"], &["x"])).unwrap();
        assert_eq!(show(&gb, &["x"]), vec!["x"]);
    }

    #[test]
    fn univariate_gcd_over_rationals() {
        // gcd(x^2 - 1, x - 1) = x - 1
        let gb = groebner(&ideal(Domain::Rat, &["x"], &["x^2 - 1", "x - 1"])).unwrap();
        assert_eq!(show(&gb, &["x"]), vec!["x - 1"]);
    }

    #[test]
    fn integer_gcd_of_leading_coefficients() {
        // 1*x = 3x - 2x, so x is in (2x, 3x) over the integers
        let gb = groebner(&ideal(Domain::Int, &["x"], &["2*x", "3*x"])).unwrap();
        assert_eq!(show(&gb, &["x"]), vec!["x"]);
    }

    #[test]
    fn normal_form_examples() {
        let gb = groebner(&ideal(Domain::Rat, &["x"], &["x - 1"])).unwrap();
        let names = vec!["x".to_string()];
        let f = parse_poly("x^2 - 1", &names, gb.ring()).unwrap();
        assert!(gb.normal_form(&f).unwrap().is_zero());
        let f = parse_poly("x + 1", &names, gb.ring()).unwrap();
        assert_eq!(gb.normal_form(&f).unwrap().display(&names).to_string(), "2");
        let gb = groebner(&ideal(Domain::Int, &["x"], &["2*x"])).unwrap();
        let f = parse_poly("x", &names, gb.ring()).unwrap();
        assert_eq!(gb.normal_form(&f).unwrap().display(&names).to_string(), "x");
    }

    #[test]
    fn normal_form_rejects_mismatched_ring() {
        let gb = groebner(&ideal(Domain::Rat, &["x"], &["x"])).unwrap();
        let other = Poly::var(PolyRing::new(2, Domain::Rat), 1);
        assert!(matches!(gb.normal_form(&other), Err(Error::ContextMismatch(_))));
    }

    #[test]
    fn gaussian_integers_mod_five_over_z() {
        let gb = groebner(&ideal(Domain::Int, &["i"], &["i^2 + 1", "5", "i - 2"])).unwrap();
        assert_eq!(show(&gb, &["i"]), vec!["5", "i + 3"]);
        let gb = groebner(&ideal(Domain::Int, &["i"], &["i^2 + 1", "i + 2"])).unwrap();
        assert_eq!(show(&gb, &["i"]), vec!["5", "i + 2"]);
    }

    #[test]
    fn strong_basis_keeps_mixed_leading_coefficients() {
        // (2x, x^2): x^2 is not a multiple of 2x over Z
        let gb = groebner(&ideal(Domain::Int, &["x"], &["2*x", "x^2"])).unwrap();
        assert_eq!(show(&gb, &["x"]), vec!["2*x", "x^2"]);
    }

    #[test]
    fn unit_ideal_collapses() {
        let gb = groebner(&ideal(Domain::Rat, &["x", "y"], &["x*y - 1", "x"])).unwrap();
        assert!(gb.is_unit());
        let gb = groebner(&ideal(Domain::Int, &["x"], &["2", "3"])).unwrap();
        assert!(gb.is_unit());
    }

    #[test]
    fn idempotent_on_reduced_bases() {
        let i = ideal(Domain::Rat, &["x", "y", "z"], &["x^2 + y*z - 2", "y^2 - x*z", "x*y*z - 1"]);
        let gb = groebner(&i).unwrap();
        let again = groebner(&gb.to_gens()).unwrap();
        assert_eq!(gb, again);
    }

    #[test]
    fn degree_limit_fails_loudly() {
        let limits = Limits { max_degree: 3, ..Limits::default() };
        let i = ideal(Domain::Rat, &["x"], &["x^5 - 1"]);
        assert!(matches!(groebner_with(&i, &limits), Err(Error::ResourceLimit(_))));
    }
}
