//! Finitely presented algebras over ℤ, ℚ or 𝔽_p, their morphisms and ideals.

mod construct;
mod prime;

pub use construct::{
    diagonal, idealization, localize_construction, polynomial_extension, product_construction,
    quotient_construction, tensor_over, Product, Tensor,
};
pub use prime::{base_prime, verify_prime, PrimeKind, PrimeSpec};
pub(crate) use prime::{base_change, ideal_base_change};

use std::fmt;

use crate::error::{Error, Result};
use crate::kernel::expr::parse_poly;
use crate::kernel::groebner::{groebner, GroebnerBasis, IdealGens};
use crate::kernel::ideal::{eliminate, saturate};
use crate::kernel::limits::Limits;
use crate::kernel::monomial::MonomialOrder;
use crate::kernel::{Domain, Poly, PolyRing};

/// `base[names] / (relations)`.
#[derive(Clone, Debug)]
pub struct FpAlgebra {
    base: Domain,
    names: Vec<String>,
    relations: Vec<Poly>,
    gb: GroebnerBasis,
}

impl PartialEq for FpAlgebra {
    fn eq(&self, other: &Self) -> bool {
        self.base == other.base && self.names == other.names && self.relations == other.relations
    }
}

impl Eq for FpAlgebra {}

fn valid_name(s: &str) -> bool {
    let mut it = s.chars();
    matches!(it.next(), Some(c) if c.is_alphabetic() || c == '_')
        && it.all(|c| c.is_alphanumeric() || c == '_' || c == '\'')
}

/// `base`, `base1`, `base2`, ... whichever is not taken.
pub(crate) fn fresh_name(base: &str, taken: &[String]) -> String {
    if !taken.iter().any(|t| t == base) {
        return base.to_string();
    }
    (1..)
        .map(|k| format!("{base}{k}"))
        .find(|n| !taken.contains(n))
        .unwrap()
}

impl FpAlgebra {
    /// Validates a presentation; relations must live in `base[names]`.
    pub fn new(base: Domain, names: Vec<String>, relations: Vec<Poly>) -> Result<Self> {
        for (i, n) in names.iter().enumerate() {
            if !valid_name(n) {
                return Err(Error::MalformedRelation(format!("`{n}` is not a valid generator name")));
            }
            if names[..i].contains(n) {
                return Err(Error::DuplicateName(n.clone()));
            }
        }
        let limits = Limits::default();
        if names.len() > limits.max_vars {
            return Err(Error::ResourceLimit(format!(
                "{} generators exceed the limit of {}",
                names.len(),
                limits.max_vars
            )));
        }
        let ring = PolyRing::new(names.len(), base);
        for r in &relations {
            if r.ring() != ring {
                return Err(Error::MalformedRelation(format!(
                    "relation over {:?} in a presentation over {:?}",
                    r.ring(),
                    ring
                )));
            }
        }
        let relations: Vec<Poly> = relations.into_iter().filter(|r| !r.is_zero()).collect();
        let gb = groebner(&IdealGens::new(ring, relations.clone())?)?;
        Ok(FpAlgebra { base, names, relations, gb })
    }

    /// Builds from relation text, e.g. `parse(Int, &["x"], &["x^2 - 17"])`.
    pub fn parse(base: Domain, names: &[&str], relations: &[&str]) -> Result<Self> {
        let names: Vec<String> = names.iter().map(|s| s.to_string()).collect();
        let ring = PolyRing::new(names.len(), base);
        let rels = relations
            .iter()
            .map(|r| parse_poly(r, &names, ring))
            .collect::<Result<Vec<_>>>()?;
        FpAlgebra::new(base, names, rels)
    }

    /// The base ring itself, with no generators.
    pub fn base_ring(base: Domain) -> Self {
        FpAlgebra::new(base, Vec::new(), Vec::new()).expect("base ring is valid")
    }

    /// The zero ring over `base`.
    pub fn zero_ring(base: Domain) -> Self {
        let ring = PolyRing::new(0, base);
        FpAlgebra::new(base, Vec::new(), vec![Poly::one(ring)]).expect("zero ring is valid")
    }

    pub fn base(&self) -> Domain {
        self.base
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn nvars(&self) -> usize {
        self.names.len()
    }

    pub fn ring(&self) -> PolyRing {
        PolyRing::new(self.names.len(), self.base)
    }

    pub fn relations(&self) -> &[Poly] {
        &self.relations
    }

    pub fn gb(&self) -> &GroebnerBasis {
        &self.gb
    }

    pub fn ideal(&self) -> IdealGens {
        IdealGens::new(self.ring(), self.relations.clone()).expect("relations share the ring")
    }

    /// True for the unit (zero) ring.
    pub fn is_zero_ring(&self) -> bool {
        self.gb.is_unit()
    }

    pub fn is_base_ring(&self) -> bool {
        self.names.is_empty() && self.relations.is_empty()
    }

    pub fn var(&self, i: usize) -> Poly {
        Poly::var(self.ring(), i)
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn poly(&self, text: &str) -> Result<Poly> {
        parse_poly(text, &self.names, self.ring())
    }

    pub fn reduce(&self, p: &Poly) -> Poly {
        self.gb.normal_form(p).expect("same ring")
    }

    pub fn is_zero(&self, p: &Poly) -> bool {
        self.reduce(p).is_zero()
    }

    pub fn show(&self, p: &Poly) -> String {
        p.display(&self.names).to_string()
    }

    /// Same generators with extra relations.
    pub fn with_relations(&self, more: impl IntoIterator<Item = Poly>) -> Result<FpAlgebra> {
        let mut rels = self.relations.clone();
        rels.extend(more);
        FpAlgebra::new(self.base, self.names.clone(), rels)
    }

    /// Renders as `ZZ[x, y] / (rel, ...)`.
    pub fn describe(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for FpAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.base)?;
        if !self.names.is_empty() {
            write!(f, "[{}]", self.names.join(", "))?;
        }
        if !self.relations.is_empty() {
            let rels: Vec<String> = self.relations.iter().map(|r| self.show(r)).collect();
            write!(f, " / ({})", rels.join(", "))?;
        }
        Ok(())
    }
}

/// Whether a morphism from an algebra over `from` to one over `to` may exist.
pub fn base_compatible(from: Domain, to: Domain) -> bool {
    match (from, to) {
        (Domain::Int, _) => true,
        (Domain::Rat, Domain::Rat) => true,
        (Domain::ModP(p), Domain::ModP(q)) => p == q,
        _ => false,
    }
}

/// `u : A -> B` given by the images of the generators of `A`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingMorphism {
    source: FpAlgebra,
    target: FpAlgebra,
    images: Vec<Poly>,
}

impl RingMorphism {
    /// Checks base compatibility and that every relation of `source` maps to zero.
    pub fn new(source: FpAlgebra, target: FpAlgebra, images: Vec<Poly>) -> Result<Self> {
        if !base_compatible(source.base(), target.base()) {
            return Err(Error::BaseIncompatible(format!(
                "no ring map from {} to {}",
                source.base(),
                target.base()
            )));
        }
        if images.len() != source.nvars() {
            return Err(Error::MalformedRelation(format!(
                "{} images for {} generators",
                images.len(),
                source.nvars()
            )));
        }
        let tr = target.ring();
        for im in &images {
            if im.ring() != tr {
                return Err(Error::ContextMismatch("image outside the target ring".into()));
            }
        }
        let images: Vec<Poly> = images.iter().map(|p| target.reduce(p)).collect();
        for rel in source.relations() {
            let v = rel.substitute(&images, tr);
            if !target.is_zero(&v) {
                return Err(Error::RelationNotPreserved(source.show(rel)));
            }
        }
        Ok(RingMorphism { source, target, images })
    }

    /// Images by generator name, e.g. `[("x", "2*w - 1")]`.
    pub fn parse(source: &FpAlgebra, target: &FpAlgebra, images: &[(&str, &str)]) -> Result<Self> {
        let mut out = Vec::with_capacity(source.nvars());
        for name in source.names() {
            let text = images
                .iter()
                .find(|(n, _)| n == name)
                .map(|(_, t)| *t)
                .ok_or_else(|| Error::MalformedRelation(format!("no image given for `{name}`")))?;
            out.push(target.poly(text)?);
        }
        for (n, _) in images {
            if source.var_index(n).is_none() {
                return Err(Error::UnknownName(n.to_string()));
            }
        }
        RingMorphism::new(source.clone(), target.clone(), out)
    }

    pub fn identity(a: &FpAlgebra) -> Self {
        let images = (0..a.nvars()).map(|i| a.var(i)).collect();
        RingMorphism::new(a.clone(), a.clone(), images).expect("identity is valid")
    }

    /// The structure map from the base ring of `source_base` into `b`.
    pub fn structure(source_base: Domain, b: &FpAlgebra) -> Result<Self> {
        RingMorphism::new(FpAlgebra::base_ring(source_base), b.clone(), Vec::new())
    }

    pub fn source(&self) -> &FpAlgebra {
        &self.source
    }

    pub fn target(&self) -> &FpAlgebra {
        &self.target
    }

    pub fn images(&self) -> &[Poly] {
        &self.images
    }

    /// Image of a source polynomial, reduced in the target.
    pub fn apply(&self, f: &Poly) -> Poly {
        self.target.reduce(&f.substitute(&self.images, self.target.ring()))
    }

    /// `v ∘ self`.
    pub fn then(&self, v: &RingMorphism) -> Result<RingMorphism> {
        compose(self, v)
    }

    /// Whether every generator of the target lies in the image.
    pub fn is_surjective(&self) -> Result<bool> {
        is_surjective(self)
    }
}

impl fmt::Display for RingMorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let maps: Vec<String> = self
            .source
            .names()
            .iter()
            .zip(&self.images)
            .map(|(n, p)| format!("{n} -> {}", self.target.show(p)))
            .collect();
        write!(f, "{} -> {} {{ {} }}", self.source, self.target, maps.join(", "))
    }
}

/// `v ∘ u`: first `u`, then `v`.
pub fn compose(u: &RingMorphism, v: &RingMorphism) -> Result<RingMorphism> {
    if u.target != v.source {
        return Err(Error::ContextMismatch(format!(
            "target {} differs from source {}",
            u.target, v.source
        )));
    }
    let images = u.images.iter().map(|p| v.apply(p)).collect();
    RingMorphism::new(u.source.clone(), v.target.clone(), images)
}

/// An ideal of an algebra, given by generators (relations are implicit).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdealSpec {
    ambient: FpAlgebra,
    gens: Vec<Poly>,
}

impl IdealSpec {
    pub fn new(ambient: &FpAlgebra, gens: Vec<Poly>) -> Result<Self> {
        let ring = ambient.ring();
        for g in &gens {
            if g.ring() != ring {
                return Err(Error::ContextMismatch("ideal generator outside the ambient ring".into()));
            }
        }
        Ok(IdealSpec { ambient: ambient.clone(), gens })
    }

    pub fn parse(ambient: &FpAlgebra, gens: &[&str]) -> Result<Self> {
        let gens = gens.iter().map(|g| ambient.poly(g)).collect::<Result<Vec<_>>>()?;
        IdealSpec::new(ambient, gens)
    }

    pub fn zero(ambient: &FpAlgebra) -> Self {
        IdealSpec { ambient: ambient.clone(), gens: Vec::new() }
    }

    pub fn ambient(&self) -> &FpAlgebra {
        &self.ambient
    }

    pub fn gens(&self) -> &[Poly] {
        &self.gens
    }

    /// Relations plus generators, as an ideal of the free polynomial ring.
    pub fn full_ideal(&self) -> IdealGens {
        self.ambient.ideal().extend(self.gens.iter().cloned()).expect("same ring")
    }

    pub fn gb(&self) -> Result<GroebnerBasis> {
        groebner(&self.full_ideal())
    }

    pub fn is_proper(&self) -> Result<bool> {
        Ok(!self.gb()?.is_unit())
    }

    pub fn contains(&self, p: &Poly) -> Result<bool> {
        self.gb()?.contains(p)
    }

    /// Same ideal as `other` (mutual containment modulo relations).
    pub fn same_as(&self, other: &IdealSpec) -> Result<bool> {
        if self.ambient != other.ambient {
            return Ok(false);
        }
        let a = self.gb()?;
        let b = other.gb()?;
        Ok(self.gens.iter().all(|g| b.contains(g).unwrap_or(false))
            && other.gens.iter().all(|g| a.contains(g).unwrap_or(false)))
    }

    /// The quotient algebra `ambient / self`.
    pub fn quotient(&self) -> Result<FpAlgebra> {
        self.ambient.with_relations(self.gens.iter().cloned())
    }

    /// Generators of a reduced Gröbner basis, minus the ambient relations.
    pub fn canonical_gens(&self) -> Result<Vec<Poly>> {
        let gb = self.gb()?;
        Ok(gb
            .basis()
            .iter()
            .filter(|g| !self.ambient.is_zero(g) || self.ambient.is_zero_ring())
            .cloned()
            .collect())
    }
}

impl fmt::Display for IdealSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.gens.is_empty() {
            return write!(f, "(0)");
        }
        let gens: Vec<String> = self.gens.iter().map(|g| self.ambient.show(g)).collect();
        write!(f, "({})", gens.join(", "))
    }
}

/// A module over an algebra: generators and relations, each relation a
/// coefficient vector over the algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModulePresentation {
    over: FpAlgebra,
    gens: Vec<String>,
    relations: Vec<Vec<Poly>>,
}

impl ModulePresentation {
    pub fn new(over: &FpAlgebra, gens: Vec<String>, relations: Vec<Vec<Poly>>) -> Result<Self> {
        for (i, g) in gens.iter().enumerate() {
            if gens[..i].contains(g) || over.names().contains(g) {
                return Err(Error::DuplicateName(g.clone()));
            }
            if !valid_name(g) {
                return Err(Error::MalformedRelation(format!("`{g}` is not a valid generator name")));
            }
        }
        for r in &relations {
            if r.len() != gens.len() || r.iter().any(|c| c.ring() != over.ring()) {
                return Err(Error::MalformedRelation("module relation has the wrong shape".into()));
            }
        }
        Ok(ModulePresentation { over: over.clone(), gens, relations })
    }

    /// Relations written as linear forms in the module generators, e.g. `3*m`.
    pub fn parse(over: &FpAlgebra, gens: &[&str], relations: &[&str]) -> Result<Self> {
        let gens: Vec<String> = gens.iter().map(|s| s.to_string()).collect();
        let mut all = over.names().to_vec();
        all.extend(gens.iter().cloned());
        let ring = PolyRing::new(all.len(), over.base());
        let mut rels = Vec::new();
        for r in relations {
            let p = parse_poly(r, &all, ring)?;
            rels.push(split_linear(&p, over, gens.len())?);
        }
        ModulePresentation::new(over, gens, rels)
    }

    pub fn over(&self) -> &FpAlgebra {
        &self.over
    }

    pub fn gens(&self) -> &[String] {
        &self.gens
    }

    pub fn relations(&self) -> &[Vec<Poly>] {
        &self.relations
    }

    /// The `j`-th relation as a linear form in the combined ring `A[m]`.
    pub fn relation_as_poly(&self, j: usize, ring: PolyRing) -> Poly {
        let n = self.over.nvars();
        let map: Vec<usize> = (0..n).collect();
        let mut acc = Poly::zero(ring);
        for (k, c) in self.relations[j].iter().enumerate() {
            acc = acc.add(&c.embed(ring, &map).mul(&Poly::var(ring, n + k)));
        }
        acc
    }
}

/// Splits `sum c_k(x) m_k` into its coefficient vector; fails if not linear in `m`.
fn split_linear(p: &Poly, over: &FpAlgebra, k: usize) -> Result<Vec<Poly>> {
    let n = over.nvars();
    let ring = over.ring();
    let mut out = vec![Poly::zero(ring); k];
    for (m, c) in p.terms() {
        let mdeg: u32 = m.0[n..].iter().sum();
        if mdeg != 1 {
            return Err(Error::MalformedRelation("module relation must be linear in the generators".into()));
        }
        let j = (0..k).find(|&j| m.0[n + j] == 1).unwrap();
        let mono = crate::kernel::Monomial(m.0[..n].to_vec());
        out[j] = out[j].add(&Poly::monomial(ring, mono, c.clone()));
    }
    Ok(out)
}

/// Ideal of the graph of `u` in `target_vars + source_vars`, over the target base.
/// `extra` target polynomials are added on the target side.
fn graph_ideal(u: &RingMorphism, extra: &[Poly], domain: Domain) -> Result<IdealGens> {
    let b = u.target();
    let a = u.source();
    let nb = b.nvars();
    let na = a.nvars();
    let ring = PolyRing::new(nb + na, domain);
    let bmap: Vec<usize> = (0..nb).collect();
    let mut gens = Vec::new();
    let lift = |p: &Poly| -> Poly {
        let q = p.to_domain(domain).expect("coefficients map into the working domain");
        q.embed(ring, &bmap)
    };
    for r in b.relations() {
        gens.push(lift(r));
    }
    for e in extra {
        gens.push(lift(e));
    }
    if let Domain::ModP(p) = b.base() {
        if domain == Domain::Int {
            gens.push(Poly::from_i64(ring, p as i64));
        }
    }
    for (j, im) in u.images().iter().enumerate() {
        gens.push(Poly::var(ring, nb + j).sub(&lift(im)));
    }
    IdealGens::new(ring, gens)
}

/// `u^{-1}(J)` for an ideal `J` of the target.
pub fn contract_ideal(u: &RingMorphism, j: &IdealSpec) -> Result<IdealSpec> {
    if j.ambient() != u.target() {
        return Err(Error::ContextMismatch("ideal is not in the target of the morphism".into()));
    }
    let a = u.source();
    let na = a.nvars();
    let nb = u.target().nvars();
    let keep: Vec<usize> = (nb..nb + na).collect();
    let (sb, tb) = (a.base(), u.target().base());
    let gens: Vec<Poly> = match (sb, tb) {
        (Domain::Int, Domain::Rat) => {
            // contract over QQ, then intersect with ZZ[x] by saturating
            let g = graph_ideal(u, j.gens(), Domain::Rat)?;
            let k = eliminate(&g, &keep)?;
            let kq = groebner(&k)?;
            if kq.is_unit() {
                vec![Poly::one(a.ring())]
            } else {
                let zring = PolyRing::new(na, Domain::Int);
                let ints: Vec<Poly> = kq.basis().iter().map(|p| p.clear_denominators()).collect();
                let n = ints
                    .iter()
                    .fold(num_bigint::BigInt::from(1), |acc, p| {
                        num_integer::Integer::lcm(&acc, p.lc().unwrap().numer())
                    });
                let ideal = IdealGens::new(zring, ints)?;
                let nf = Poly::constant(zring, num_rational::BigRational::from_integer(n));
                saturate(&ideal, &nf)?.into_gens()
            }
        }
        (Domain::Int, Domain::ModP(_)) => {
            let g = graph_ideal(u, j.gens(), Domain::Int)?;
            eliminate(&g, &keep)?.into_gens()
        }
        _ => {
            let g = graph_ideal(u, j.gens(), sb)?;
            eliminate(&g, &keep)?.into_gens()
        }
    };
    let ring = a.ring();
    let gens: Vec<Poly> = gens.into_iter().map(|p| a.reduce(&p.with_order(ring.order))).filter(|p| !p.is_zero()).collect();
    IdealSpec::new(a, gens)
}

/// Surjectivity: every target generator is congruent to a polynomial in the
/// images, tested by elimination-order normal forms.
pub fn is_surjective(u: &RingMorphism) -> Result<bool> {
    let b = u.target();
    if b.is_zero_ring() {
        return Ok(true);
    }
    let (sb, tb) = (u.source().base(), b.base());
    if sb == Domain::Int && tb == Domain::Rat {
        // 1/2 is never reached from ZZ in a nonzero QQ-algebra
        return Ok(false);
    }
    let domain = tb;
    let g = graph_ideal(u, &[], domain)?;
    let nb = b.nvars();
    let ring = g.ring().with_order(MonomialOrder::Block(nb));
    let gb = groebner(&g.with_order(ring.order))?;
    for i in 0..nb {
        let r = gb.normal_form(&Poly::var(ring, i))?;
        if (0..nb).any(|k| r.uses_var(k)) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A preimage of `f` under `u`, if `f` lies in the image. Over the integers
/// this relies on normal forms being canonical for strong bases.
pub fn preimage_of(u: &RingMorphism, f: &Poly) -> Result<Option<Poly>> {
    let b = u.target();
    let a = u.source();
    let (sb, tb) = (a.base(), b.base());
    let domain = match (sb, tb) {
        (Domain::Int, Domain::Rat) => {
            return Err(Error::UnsupportedSource("image membership from ZZ into a QQ-algebra".into()))
        }
        (Domain::Int, Domain::ModP(_)) => Domain::Int,
        _ => tb,
    };
    let g = graph_ideal(u, &[], domain)?;
    let nb = b.nvars();
    let na = a.nvars();
    let ring = g.ring().with_order(MonomialOrder::Block(nb));
    let gb = groebner(&g.with_order(ring.order))?;
    let map: Vec<usize> = (0..nb).collect();
    let lifted = f.to_domain(domain).expect("coefficients map into the working domain").embed(ring, &map);
    let r = gb.normal_form(&lifted)?;
    if (0..nb).any(|k| r.uses_var(k)) {
        return Ok(None);
    }
    let keep: Vec<usize> = (nb..nb + na).collect();
    let back = r.restrict(&keep).expect("only source generators remain");
    let back = back.to_domain(sb).expect("source base receives the coefficients").with_order(a.ring().order);
    Ok(Some(a.reduce(&back)))
}


#[cfg(test)]
mod props {
    use super::*;
    use proptest::prelude::*;

    fn terms() -> impl Strategy<Value = Vec<(i64, u32, u32)>> {
        prop::collection::vec((-3i64..=3, 0u32..3, 0u32..3), 0..4)
    }

    fn build(ring: PolyRing, terms: &[(i64, u32, u32)]) -> Poly {
        let mut p = Poly::zero(ring);
        for &(c, a, b) in terms {
            let m = crate::kernel::Monomial(vec![a, b]);
            p = p.add(&Poly::monomial(ring, m, num_rational::BigRational::from_integer(c.into())));
        }
        p
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn compose_preserves_validity(f in terms(), g in terms()) {
            let a = FpAlgebra::parse(Domain::Int, &["x", "y"], &["y^2 + 1"]).unwrap();
            let b = FpAlgebra::parse(Domain::Int, &["i", "t"], &["i^2 + 1"]).unwrap();
            let c = FpAlgebra::parse(Domain::Int, &["j", "s"], &["j^2 + 1"]).unwrap();
            let u = RingMorphism::new(a, b.clone(), vec![build(b.ring(), &f), b.var(0)]).unwrap();
            let v = RingMorphism::new(b, c.clone(), vec![c.var(0).neg(), build(c.ring(), &g)]).unwrap();
            let w = compose(&u, &v).unwrap();
            prop_assert!(RingMorphism::new(w.source().clone(), w.target().clone(), w.images().to_vec()).is_ok());
            prop_assert_eq!(&w.images()[0], &v.apply(&u.images()[0]));
        }
    }
}
