//! Quotients, localizations, tensor products, finite products, idealization
//! and polynomial extension of presentations and morphisms.

use super::{fresh_name, FpAlgebra, IdealSpec, ModulePresentation, RingMorphism};
use crate::error::{Error, Result};
use crate::kernel::groebner::{groebner, IdealGens};
use crate::kernel::monomial::MonomialOrder;
use crate::kernel::{Domain, Poly, PolyRing};

/// Adds generators `extra` after the existing ones; relations are carried over.
fn extend_vars(a: &FpAlgebra, extra: &[String]) -> (Vec<String>, PolyRing, Vec<Poly>) {
    let mut names = a.names().to_vec();
    names.extend(extra.iter().cloned());
    let ring = PolyRing::new(names.len(), a.base());
    let map: Vec<usize> = (0..a.nvars()).collect();
    let rels = a.relations().iter().map(|r| r.embed(ring, &map)).collect();
    (names, ring, rels)
}

fn embed_into(p: &Poly, ring: PolyRing, map: &[usize]) -> Poly {
    let q = p.to_domain(ring.domain).expect("coefficients map into the new base");
    q.embed(ring, map)
}

/// `A/I -> B/J`, after checking `u(I) ⊆ J`.
pub fn quotient_construction(u: &RingMorphism, i: &IdealSpec, j: &IdealSpec) -> Result<RingMorphism> {
    if i.ambient() != u.source() || j.ambient() != u.target() {
        return Err(Error::ContextMismatch("ideals must live in the source and target".into()));
    }
    let jg = j.gb()?;
    for g in i.gens() {
        if !jg.contains(&u.apply(g))? {
            return Err(Error::ImageNotContained(u.source().show(g)));
        }
    }
    RingMorphism::new(i.quotient()?, j.quotient()?, u.images().to_vec())
}

/// `A[1/s] -> B[1/t]`, when `u(s)` becomes a unit after inverting `t`.
pub fn localize_construction(u: &RingMorphism, s: &Poly, t: &Poly) -> Result<RingMorphism> {
    let a = u.source();
    let b = u.target();
    if s.ring() != a.ring() || t.ring() != b.ring() {
        return Err(Error::ContextMismatch("s must lie in the source and t in the target".into()));
    }
    let us = u.apply(s);
    let n = b.nvars();
    // ring [w, b-vars, z]: z inverts t, w inverts u(s)
    let big = PolyRing::new(n + 2, b.base()).with_order(MonomialOrder::Block(1));
    let shift: Vec<usize> = (1..=n).collect();
    let mut gens: Vec<Poly> = b.relations().iter().map(|r| r.embed(big, &shift)).collect();
    let z = Poly::var(big, n + 1);
    let w = Poly::var(big, 0);
    gens.push(t.embed(big, &shift).mul(&z).sub(&Poly::one(big)));
    let without_w = groebner(&IdealGens::new(big, gens.clone())?)?;
    if !without_w.contains(&us.embed(big, &shift))? {
        let probe = IdealGens::new(big, gens.iter().cloned().chain([us.embed(big, &shift)]).collect())?;
        if !groebner(&probe)?.is_unit() {
            return Err(Error::IncompatibleMultiplicative(format!(
                "{} is not a unit after inverting {}",
                b.show(&us),
                b.show(t)
            )));
        }
    }
    gens.push(us.embed(big, &shift).mul(&w).sub(&Poly::one(big)));
    let gb = groebner(&IdealGens::new(big, gens)?)?;
    let inv = gb.normal_form(&w)?;
    if inv.uses_var(0) {
        return Err(Error::IncompatibleMultiplicative("no inverse found for u(s)".into()));
    }
    let yname = fresh_name("y", a.names());
    let zname = fresh_name("z", b.names());
    let (an, ar, mut arels) = extend_vars(a, &[yname]);
    let amap: Vec<usize> = (0..a.nvars()).collect();
    arels.push(s.embed(ar, &amap).mul(&Poly::var(ar, a.nvars())).sub(&Poly::one(ar)));
    let a2 = FpAlgebra::new(a.base(), an, arels)?;
    let (bn, br, mut brels) = extend_vars(b, &[zname]);
    let bmap: Vec<usize> = (0..n).collect();
    brels.push(t.embed(br, &bmap).mul(&Poly::var(br, n)).sub(&Poly::one(br)));
    let b2 = FpAlgebra::new(b.base(), bn, brels)?;
    let keep: Vec<usize> = (1..n + 2).collect();
    let inv = inv.restrict(&keep).expect("w eliminated").with_order(br.order);
    let mut images: Vec<Poly> = u.images().iter().map(|p| p.embed(br, &bmap)).collect();
    images.push(inv);
    RingMorphism::new(a2, b2, images)
}

/// Join of the bases of two algebras receiving maps from a common source.
fn join_base(x: Domain, y: Domain) -> Result<Domain> {
    match (x, y) {
        (a, b) if a == b => Ok(a),
        (Domain::Int, b) => Ok(b),
        (a, Domain::Int) => Ok(a),
        _ => Err(Error::BaseIncompatible(format!("{x} and {y} share no nonzero algebra"))),
    }
}

/// Names for two generator lists placed side by side; clashing names get
/// `_1` / `_2` suffixes.
fn side_by_side(left: &[String], right: &[String], reserved: &[String]) -> (Vec<String>, Vec<String>) {
    let mut l: Vec<String> = Vec::new();
    let mut r: Vec<String> = Vec::new();
    for n in left {
        if right.contains(n) {
            l.push(format!("{n}_1"));
        } else {
            l.push(n.clone());
        }
    }
    for n in right {
        if left.contains(n) {
            r.push(format!("{n}_2"));
        } else {
            r.push(n.clone());
        }
    }
    let mut taken: Vec<String> = reserved.to_vec();
    for v in l.iter_mut().chain(r.iter_mut()) {
        let f = fresh_name(v, &taken);
        *v = f.clone();
        taken.push(f);
    }
    (l, r)
}

/// `B ⊗_A C` with its coprojections.
#[derive(Clone, Debug)]
pub struct Tensor {
    pub algebra: FpAlgebra,
    pub left: RingMorphism,
    pub right: RingMorphism,
    /// `x ⊗ 1 - 1 ⊗ x` for each generator when both factors are the same map.
    pub kernel: Vec<Poly>,
}

/// Tensor product of `ub: A -> B` and `uc: A -> C` over `A`.
pub fn tensor_over(ub: &RingMorphism, uc: &RingMorphism) -> Result<Tensor> {
    if ub.source() != uc.source() {
        return Err(Error::ContextMismatch("structure maps have different sources".into()));
    }
    let (b, c) = (ub.target(), uc.target());
    let base = join_base(b.base(), c.base())?;
    let (ln, rn) = side_by_side(b.names(), c.names(), &[]);
    let nb = b.nvars();
    let nc = c.nvars();
    let mut names = ln.clone();
    names.extend(rn.iter().cloned());
    let ring = PolyRing::new(nb + nc, base);
    let lmap: Vec<usize> = (0..nb).collect();
    let rmap: Vec<usize> = (nb..nb + nc).collect();
    let mut rels = Vec::new();
    for r in b.relations() {
        rels.push(embed_into(r, ring, &lmap));
    }
    for r in c.relations() {
        rels.push(embed_into(r, ring, &rmap));
    }
    for (x, y) in ub.images().iter().zip(uc.images()) {
        rels.push(embed_into(x, ring, &lmap).sub(&embed_into(y, ring, &rmap)));
    }
    let d = FpAlgebra::new(base, names, rels)?;
    let left = RingMorphism::new(b.clone(), d.clone(), (0..nb).map(|i| Poly::var(ring, i)).collect())?;
    let right = RingMorphism::new(c.clone(), d.clone(), (0..nc).map(|i| Poly::var(ring, nb + i)).collect())?;
    let kernel = if ub == uc {
        (0..nb).map(|i| Poly::var(ring, i).sub(&Poly::var(ring, nb + i))).collect()
    } else {
        Vec::new()
    };
    Ok(Tensor { algebra: d, left, right, kernel })
}

/// `B × C` with its projections.
#[derive(Clone, Debug)]
pub struct Product {
    pub algebra: FpAlgebra,
    pub first: RingMorphism,
    pub second: RingMorphism,
}

/// Base of a product and the extra relation each factor needs when its
/// prime field is rewritten over the integers.
fn product_base(x: Domain, y: Domain) -> Result<(Domain, Option<u64>, Option<u64>)> {
    match (x, y) {
        (a, b) if a == b => Ok((a, None, None)),
        (Domain::Int, Domain::ModP(q)) => Ok((Domain::Int, None, Some(q))),
        (Domain::ModP(p), Domain::Int) => Ok((Domain::Int, Some(p), None)),
        (Domain::ModP(p), Domain::ModP(q)) => Ok((Domain::Int, Some(p), Some(q))),
        _ => Err(Error::ContextMismatch(format!("no common base for {x} and {y}"))),
    }
}

/// `B × C` presented with an idempotent `e` (`e = 1` on the first factor).
pub fn product_construction(b: &FpAlgebra, c: &FpAlgebra) -> Result<Product> {
    let (base, pb, pc) = product_base(b.base(), c.base())?;
    let mut taken = b.names().to_vec();
    taken.extend(c.names().iter().cloned());
    let e_name = fresh_name("e", &taken);
    let (ln, rn) = side_by_side(b.names(), c.names(), std::slice::from_ref(&e_name));
    let nb = b.nvars();
    let nc = c.nvars();
    let mut names = vec![e_name];
    names.extend(ln);
    names.extend(rn);
    let ring = PolyRing::new(1 + nb + nc, base);
    let e = Poly::var(ring, 0);
    let one = Poly::one(ring);
    let f = one.sub(&e);
    let lmap: Vec<usize> = (1..=nb).collect();
    let rmap: Vec<usize> = (1 + nb..1 + nb + nc).collect();
    let mut rels = vec![e.mul(&e).sub(&e)];
    for i in 0..nb {
        rels.push(f.mul(&Poly::var(ring, 1 + i)));
    }
    for j in 0..nc {
        rels.push(e.mul(&Poly::var(ring, 1 + nb + j)));
    }
    for r in b.relations() {
        rels.push(e.mul(&embed_into(r, ring, &lmap)));
    }
    if let Some(p) = pb {
        rels.push(e.scale(&Domain::Int.from_i64(p as i64)));
    }
    for r in c.relations() {
        rels.push(f.mul(&embed_into(r, ring, &rmap)));
    }
    if let Some(q) = pc {
        rels.push(f.scale(&Domain::Int.from_i64(q as i64)));
    }
    let d = FpAlgebra::new(base, names, rels)?;
    let br = b.ring();
    let cr = c.ring();
    let mut first = vec![Poly::one(br)];
    first.extend((0..nb).map(|i| Poly::var(br, i)));
    first.extend((0..nc).map(|_| Poly::zero(br)));
    let mut second = vec![Poly::zero(cr)];
    second.extend((0..nb).map(|_| Poly::zero(cr)));
    second.extend((0..nc).map(|j| Poly::var(cr, j)));
    Ok(Product {
        first: RingMorphism::new(d.clone(), b.clone(), first)?,
        second: RingMorphism::new(d.clone(), c.clone(), second)?,
        algebra: d,
    })
}

/// The diagonal `A -> B × C`, `a ↦ (ub(a), uc(a))`.
pub fn diagonal(ub: &RingMorphism, uc: &RingMorphism) -> Result<(Product, RingMorphism)> {
    if ub.source() != uc.source() {
        return Err(Error::ContextMismatch("diagonal needs a shared source".into()));
    }
    let prod = product_construction(ub.target(), uc.target())?;
    let ring = prod.algebra.ring();
    let nb = ub.target().nvars();
    let nc = uc.target().nvars();
    let e = Poly::var(ring, 0);
    let f = Poly::one(ring).sub(&e);
    let lmap: Vec<usize> = (1..=nb).collect();
    let rmap: Vec<usize> = (1 + nb..1 + nb + nc).collect();
    let images = ub
        .images()
        .iter()
        .zip(uc.images())
        .map(|(x, y)| e.mul(&embed_into(x, ring, &lmap)).add(&f.mul(&embed_into(y, ring, &rmap))))
        .collect();
    let w = RingMorphism::new(ub.source().clone(), prod.algebra.clone(), images)?;
    Ok((prod, w))
}

/// `A(+)M` with the canonical map from `A`.
pub fn idealization(a: &FpAlgebra, m: &ModulePresentation) -> Result<(FpAlgebra, RingMorphism)> {
    if m.over() != a {
        return Err(Error::ContextMismatch("module is over another algebra".into()));
    }
    let (names, ring, mut rels) = extend_vars(a, m.gens());
    let n = a.nvars();
    let k = m.gens().len();
    for j in 0..m.relations().len() {
        rels.push(m.relation_as_poly(j, ring));
    }
    for x in 0..k {
        for y in x..k {
            rels.push(Poly::var(ring, n + x).mul(&Poly::var(ring, n + y)));
        }
    }
    let d = FpAlgebra::new(a.base(), names, rels)?;
    let images = (0..n).map(|i| Poly::var(ring, i)).collect();
    let u = RingMorphism::new(a.clone(), d.clone(), images)?;
    Ok((d, u))
}

/// `u ⊗ A[X] : A[X] -> B[X]`.
pub fn polynomial_extension(u: &RingMorphism) -> Result<RingMorphism> {
    let a = u.source();
    let b = u.target();
    let xa = fresh_name("X", a.names());
    let xb = fresh_name("X", b.names());
    let (an, _, arels) = extend_vars(a, &[xa]);
    let (bn, br, brels) = extend_vars(b, &[xb]);
    let a2 = FpAlgebra::new(a.base(), an, arels)?;
    let b2 = FpAlgebra::new(b.base(), bn, brels)?;
    let map: Vec<usize> = (0..b.nvars()).collect();
    let mut images: Vec<Poly> = u.images().iter().map(|p| p.embed(br, &map)).collect();
    images.push(Poly::var(br, b.nvars()));
    RingMorphism::new(a2, b2, images)
}
