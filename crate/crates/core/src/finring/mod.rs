//! Small finite commutative rings as explicit tables, with exhaustive
//! ideal, prime and A-prime enumeration.

mod random;

pub use random::{random_chain, random_diagonal, random_instance, random_ring};

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};

use crate::error::{Error, Result};
use crate::kernel::groebner::{GroebnerBasis, IdealGens};
use crate::kernel::ideal::quotient_basis;
use crate::kernel::primes::prime_factors;
use crate::kernel::{Domain, Monomial, Poly, PolyRing};
use crate::rings::{FpAlgebra, RingMorphism};

pub const DEFAULT_BOUND: usize = 4096;

/// Index of an element in a [`FiniteRing`]; `0` is always the zero element.
pub type Elem = u16;

/// Coordinates of elements over the monomials that survive reduction by a
/// strong Gröbner basis over the integers.
#[derive(Clone, Debug)]
struct Carrier {
    algebra: FpAlgebra,
    gb: GroebnerBasis,
    monomials: Vec<Monomial>,
    moduli: Vec<i64>,
    position: HashMap<Monomial, usize>,
}

impl Carrier {
    fn coords(&self, p: &Poly) -> Vec<i64> {
        let mut v = vec![0i64; self.monomials.len()];
        for (m, c) in p.terms() {
            let k = self.position[m];
            v[k] = c.to_integer().to_i64().expect("small coefficient");
        }
        v
    }

    fn encode(&self, v: &[i64]) -> Elem {
        let mut idx = 0usize;
        for k in (0..v.len()).rev() {
            idx = idx * self.moduli[k] as usize + v[k] as usize;
        }
        idx as Elem
    }

    fn decode(&self, mut x: usize) -> Vec<i64> {
        let mut v = Vec::with_capacity(self.moduli.len());
        for &q in &self.moduli {
            v.push((x % q as usize) as i64);
            x /= q as usize;
        }
        v
    }

    fn poly_of(&self, v: &[i64]) -> Poly {
        let ring = self.algebra.ring();
        let terms = self
            .monomials
            .iter()
            .zip(v)
            .filter(|(_, c)| **c != 0)
            .map(|(m, c)| (m.clone(), BigRational::from_integer(BigInt::from(*c))))
            .collect();
        Poly::from_terms(ring, terms)
    }
}

#[derive(Clone, Debug)]
enum Kind {
    Presented(Box<Carrier>),
    Table,
    Product(Box<FiniteRing>, Box<FiniteRing>),
}

/// A finite commutative ring stored as addition and multiplication tables.
#[derive(Clone, Debug)]
pub struct FiniteRing {
    size: usize,
    add: Vec<Elem>,
    mul: Vec<Elem>,
    neg: Vec<Elem>,
    one: Elem,
    kind: Kind,
}

impl PartialEq for FiniteRing {
    fn eq(&self, other: &Self) -> bool {
        self.size == other.size && self.one == other.one && self.add == other.add && self.mul == other.mul
    }
}

impl Eq for FiniteRing {}

fn check_bound(size: u128, bound: usize) -> Result<usize> {
    let bound = bound.min(Elem::MAX as usize);
    if size > bound as u128 {
        return Err(Error::TooLarge { size, bound });
    }
    Ok(size as usize)
}

/// `a` over the integers, with the characteristic of a prime field made explicit.
fn integral_presentation(a: &FpAlgebra) -> Result<FpAlgebra> {
    match a.base() {
        Domain::Int => Ok(a.clone()),
        Domain::ModP(p) => {
            let ring = PolyRing::new(a.nvars(), Domain::Int);
            let mut rels: Vec<Poly> = a
                .relations()
                .iter()
                .map(|r| r.to_domain(Domain::Int).expect("residues are integers"))
                .collect();
            rels.push(Poly::from_i64(ring, p as i64));
            FpAlgebra::new(Domain::Int, a.names().to_vec(), rels)
        }
        Domain::Rat if a.is_zero_ring() => Ok(FpAlgebra::zero_ring(Domain::Int)),
        Domain::Rat => Err(Error::NotFiniteQuotient(format!("{a} is a nonzero QQ-algebra"))),
    }
}

impl FiniteRing {
    fn zero_ring(kind: Kind) -> FiniteRing {
        FiniteRing { size: 1, add: vec![0], mul: vec![0], neg: vec![0], one: 0, kind }
    }

    /// Builds the ring presented by `a`, which must be finite with at most
    /// `bound` elements.
    pub fn from_algebra(a: &FpAlgebra, bound: usize) -> Result<FiniteRing> {
        let alg = integral_presentation(a)?;
        let gb = alg.gb().clone();
        let ring = alg.ring();
        let empty = |gb: GroebnerBasis, alg: FpAlgebra| Carrier {
            algebra: alg,
            gb,
            monomials: Vec::new(),
            moduli: Vec::new(),
            position: HashMap::new(),
        };
        if gb.is_unit() {
            return Ok(FiniteRing::zero_ring(Kind::Presented(Box::new(empty(gb, alg)))));
        }
        let c = gb
            .integer_part()
            .ok_or_else(|| Error::NotFiniteQuotient(format!("{a} has characteristic zero")))?;
        let primes = prime_factors(&c).ok_or_else(|| Error::ResourceLimit(format!("cannot factor {c}")))?;
        for p in primes {
            let rp = ring.with_domain(Domain::ModP(p));
            let rels = alg.relations().iter().filter_map(|r| r.to_domain(Domain::ModP(p))).collect();
            if quotient_basis(&IdealGens::new(rp, rels)?)?.dim().is_none() {
                return Err(Error::NotFiniteQuotient(format!("{a} is infinite modulo {p}")));
            }
        }
        let modulus = |m: &Monomial| -> i64 {
            gb.basis()
                .iter()
                .filter(|g| g.lm().unwrap().divides(m))
                .map(|g| g.lc().unwrap().numer().abs())
                .min()
                .expect("the characteristic divides every monomial")
                .to_i64()
                .unwrap_or(i64::MAX)
        };
        let n = ring.nvars;
        let mut queue = VecDeque::from([Monomial::one(n)]);
        let mut seen: BTreeSet<Vec<u32>> = BTreeSet::new();
        let mut carrier: Vec<(Monomial, i64)> = Vec::new();
        let mut size: u128 = 1;
        while let Some(m) = queue.pop_front() {
            if !seen.insert(m.0.clone()) {
                continue;
            }
            let q = modulus(&m);
            if q == 1 {
                continue;
            }
            size = size.saturating_mul(q as u128);
            carrier.push((m.clone(), q));
            for i in 0..n {
                queue.push_back(m.mul(&Monomial::var(n, i, 1)));
            }
        }
        let size = check_bound(size, bound)?;
        carrier.sort_by(|a, b| ring.order.cmp(&b.0, &a.0));
        let position = carrier.iter().enumerate().map(|(k, (m, _))| (m.clone(), k)).collect();
        let car = Carrier {
            monomials: carrier.iter().map(|(m, _)| m.clone()).collect(),
            moduli: carrier.iter().map(|(_, q)| *q).collect(),
            position,
            algebra: alg,
            gb,
        };
        build_tables(car, size)
    }

    /// Builds a ring from explicit tables, checking every ring axiom.
    pub fn from_tables(add: &[Vec<usize>], mul: &[Vec<usize>]) -> Result<FiniteRing> {
        let n = add.len();
        if n == 0 || n > Elem::MAX as usize {
            return Err(Error::NotARing(format!("{n} elements")));
        }
        if mul.len() != n || add.iter().chain(mul).any(|row| row.len() != n || row.iter().any(|&x| x >= n)) {
            return Err(Error::NotARing("tables must be square over the same carrier".into()));
        }
        let zero = (0..n)
            .find(|&z| (0..n).all(|x| add[z][x] == x))
            .ok_or_else(|| Error::NotARing("no additive identity".into()))?;
        let one = (0..n)
            .find(|&e| (0..n).all(|x| mul[e][x] == x))
            .ok_or_else(|| Error::NotARing("no multiplicative identity".into()))?;
        // relabel so that zero is element 0
        let perm = |x: usize| -> usize {
            if x == zero {
                0
            } else if x == 0 {
                zero
            } else {
                x
            }
        };
        let mut at = vec![0 as Elem; n * n];
        let mut mt = vec![0 as Elem; n * n];
        for a in 0..n {
            for b in 0..n {
                at[perm(a) * n + perm(b)] = perm(add[a][b]) as Elem;
                mt[perm(a) * n + perm(b)] = perm(mul[a][b]) as Elem;
            }
        }
        let mut neg = vec![0 as Elem; n];
        for a in 0..n {
            neg[a] = (0..n)
                .find(|&b| at[a * n + b] == 0)
                .ok_or_else(|| Error::NotARing(format!("element {a} has no additive inverse")))? as Elem;
        }
        let r = FiniteRing { size: n, add: at, mul: mt, neg, one: perm(one) as Elem, kind: Kind::Table };
        r.check_axioms()?;
        Ok(r)
    }

    fn check_axioms(&self) -> Result<()> {
        let n = self.size as Elem;
        for a in 0..n {
            for b in 0..n {
                if self.add(a, b) != self.add(b, a) {
                    return Err(Error::NotARing(format!("addition not commutative at ({a}, {b})")));
                }
                if self.mul(a, b) != self.mul(b, a) {
                    return Err(Error::NotARing(format!("multiplication not commutative at ({a}, {b})")));
                }
                for c in 0..n {
                    if self.add(self.add(a, b), c) != self.add(a, self.add(b, c)) {
                        return Err(Error::NotARing(format!("addition not associative at ({a}, {b}, {c})")));
                    }
                    if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)) {
                        return Err(Error::NotARing(format!("multiplication not associative at ({a}, {b}, {c})")));
                    }
                    if self.mul(a, self.add(b, c)) != self.add(self.mul(a, b), self.mul(a, c)) {
                        return Err(Error::NotARing(format!("distributivity fails at ({a}, {b}, {c})")));
                    }
                }
            }
        }
        Ok(())
    }

    /// `self × other`; element `(i, j)` has index `i * |other| + j`.
    pub fn product(&self, other: &FiniteRing, bound: usize) -> Result<FiniteRing> {
        let size = check_bound(self.size as u128 * other.size as u128, bound)?;
        let m = other.size;
        let split = |x: usize| ((x / m) as Elem, (x % m) as Elem);
        let join = |a: Elem, b: Elem| (a as usize * m + b as usize) as Elem;
        let mut add = vec![0; size * size];
        let mut mul = vec![0; size * size];
        let mut neg = vec![0; size];
        for x in 0..size {
            let (a, b) = split(x);
            neg[x] = join(self.neg(a), other.neg(b));
            for y in 0..size {
                let (c, d) = split(y);
                add[x * size + y] = join(self.add(a, c), other.add(b, d));
                mul[x * size + y] = join(self.mul(a, c), other.mul(b, d));
            }
        }
        Ok(FiniteRing {
            size,
            add,
            mul,
            neg,
            one: join(self.one, other.one),
            kind: Kind::Product(Box::new(self.clone()), Box::new(other.clone())),
        })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        0..self.size as Elem
    }

    pub fn zero(&self) -> Elem {
        0
    }

    pub fn one(&self) -> Elem {
        self.one
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        self.add[a as usize * self.size + b as usize]
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        self.mul[a as usize * self.size + b as usize]
    }

    pub fn neg(&self, a: Elem) -> Elem {
        self.neg[a as usize]
    }

    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    /// `k · 1` for an integer `k`.
    pub fn from_int(&self, k: i64) -> Elem {
        let mut acc = 0;
        for _ in 0..k.unsigned_abs() {
            acc = self.add(acc, self.one);
        }
        if k < 0 {
            self.neg(acc)
        } else {
            acc
        }
    }

    /// Additive order of `1`.
    pub fn characteristic(&self) -> u64 {
        let mut acc = self.one;
        let mut k = 1;
        while acc != 0 {
            acc = self.add(acc, self.one);
            k += 1;
        }
        k
    }

    pub fn is_zero_ring(&self) -> bool {
        self.size == 1
    }

    pub fn is_unit(&self, a: Elem) -> bool {
        self.elements().any(|b| self.mul(a, b) == self.one)
    }

    pub fn is_field(&self) -> bool {
        self.size > 1 && self.elements().skip(1).all(|a| self.is_unit(a))
    }

    pub fn idempotents(&self) -> Vec<Elem> {
        self.elements().filter(|&a| self.mul(a, a) == a).collect()
    }

    /// The presentation (over the integers) this ring was built from.
    pub fn algebra(&self) -> Option<&FpAlgebra> {
        match &self.kind {
            Kind::Presented(c) => Some(&c.algebra),
            _ => None,
        }
    }

    /// Canonical representative of an element in the integral presentation.
    pub fn element_poly(&self, x: Elem) -> Option<Poly> {
        match &self.kind {
            Kind::Presented(c) => Some(c.poly_of(&c.decode(x as usize))),
            _ => None,
        }
    }

    /// The element represented by a polynomial of the presentation (over
    /// its own base or over the integers).
    pub fn element_of(&self, p: &Poly) -> Result<Elem> {
        let Kind::Presented(c) = &self.kind else {
            return Err(Error::ContextMismatch("ring has no presentation".into()));
        };
        if self.size == 1 {
            return Ok(0);
        }
        let ring = c.algebra.ring();
        let q = p
            .to_domain(Domain::Int)
            .ok_or_else(|| Error::ContextMismatch("polynomial has non-integral coefficients".into()))?
            .with_order(ring.order);
        if q.nvars() != ring.nvars {
            return Err(Error::ContextMismatch("polynomial outside the presentation".into()));
        }
        Ok(c.encode(&c.coords(&c.gb.normal_form(&q)?)))
    }

    pub fn label(&self, x: Elem) -> String {
        match &self.kind {
            Kind::Presented(c) => c.algebra.show(&c.poly_of(&c.decode(x as usize))),
            Kind::Table => format!("#{x}"),
            Kind::Product(a, b) => {
                let m = b.size;
                format!("({}, {})", a.label((x as usize / m) as Elem), b.label((x as usize % m) as Elem))
            }
        }
    }

    /// Ideal generated by the given elements.
    pub fn ideal_generated(&self, gens: &[Elem]) -> FiniteIdeal {
        let mut acc = FiniteIdeal::zero(self.size);
        for &g in gens {
            if !acc.contains(g) {
                acc = self.ideal_sum(&acc, &self.principal(g));
            }
        }
        acc
    }

    pub fn principal(&self, a: Elem) -> FiniteIdeal {
        let mut i = FiniteIdeal::empty(self.size);
        for r in self.elements() {
            i.insert(self.mul(a, r));
        }
        i
    }

    pub fn ideal_sum(&self, i: &FiniteIdeal, j: &FiniteIdeal) -> FiniteIdeal {
        let mut s = FiniteIdeal::empty(self.size);
        let je: Vec<Elem> = j.elements().collect();
        for a in i.elements() {
            for &b in &je {
                s.insert(self.add(a, b));
            }
        }
        s
    }

    pub fn unit_ideal(&self) -> FiniteIdeal {
        let mut i = FiniteIdeal::empty(self.size);
        for a in self.elements() {
            i.insert(a);
        }
        i
    }

    /// A small generating set for an ideal.
    pub fn ideal_gens(&self, i: &FiniteIdeal) -> Vec<Elem> {
        let mut gens = Vec::new();
        let mut acc = FiniteIdeal::zero(self.size);
        for a in i.elements() {
            if !acc.contains(a) {
                gens.push(a);
                acc = self.ideal_sum(&acc, &self.principal(a));
            }
        }
        gens
    }
}

fn build_tables(car: Carrier, size: usize) -> Result<FiniteRing> {
    let s = car.monomials.len();
    let ring = car.algebra.ring();
    let int = |k: i64| BigRational::from_integer(BigInt::from(k));
    // carries: q_k * m_k rewritten on smaller monomials
    let carries: Vec<Vec<i64>> = (0..s)
        .map(|k| {
            let p = Poly::monomial(ring, car.monomials[k].clone(), int(car.moduli[k]));
            car.coords(&car.gb.normal_form(&p).expect("same ring"))
        })
        .collect();
    let normalize = |v: &mut Vec<i64>| {
        for k in 0..s {
            let q = car.moduli[k];
            let t = v[k].div_euclid(q);
            if t != 0 {
                v[k] -= t * q;
                for j in k + 1..s {
                    v[j] += t * carries[k][j];
                }
            }
        }
    };
    let structure: Vec<Vec<Vec<i64>>> = (0..s)
        .map(|k| {
            (0..s)
                .map(|l| {
                    let m = car.monomials[k].mul(&car.monomials[l]);
                    let p = Poly::monomial(ring, m, int(1));
                    car.coords(&car.gb.normal_form(&p).expect("same ring"))
                })
                .collect()
        })
        .collect();
    let digits: Vec<Vec<i64>> = (0..size).map(|x| car.decode(x)).collect();
    let mut add = vec![0 as Elem; size * size];
    let mut neg = vec![0 as Elem; size];
    for a in 0..size {
        let mut v: Vec<i64> = digits[a].iter().map(|x| -x).collect();
        normalize(&mut v);
        neg[a] = car.encode(&v);
        for b in a..size {
            let mut v: Vec<i64> = digits[a].iter().zip(&digits[b]).map(|(x, y)| x + y).collect();
            normalize(&mut v);
            let e = car.encode(&v);
            add[a * size + b] = e;
            add[b * size + a] = e;
        }
    }
    // a * m_l for every element and carrier monomial
    let mut times_monomial = vec![0 as Elem; size * s];
    for a in 0..size {
        for l in 0..s {
            let mut v = vec![0i64; s];
            for k in 0..s {
                let d = digits[a][k];
                if d != 0 {
                    for j in 0..s {
                        v[j] += d * structure[k][l][j];
                    }
                }
            }
            normalize(&mut v);
            times_monomial[a * s + l] = car.encode(&v);
        }
    }
    let mut mul = vec![0 as Elem; size * size];
    for a in 0..size {
        for b in a..size {
            let mut acc: Elem = 0;
            for l in 0..s {
                let t = times_monomial[a * s + l];
                for _ in 0..digits[b][l] {
                    acc = add[acc as usize * size + t as usize];
                }
            }
            mul[a * size + b] = acc;
            mul[b * size + a] = acc;
        }
    }
    let one = car.encode(&car.coords(&car.gb.normal_form(&Poly::one(ring)).expect("same ring")));
    Ok(FiniteRing { size, add, mul, neg, one, kind: Kind::Presented(Box::new(car)) })
}

impl fmt::Display for FiniteRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            Kind::Presented(c) => write!(f, "{} ({} elements)", c.algebra, self.size),
            Kind::Table => write!(f, "table ring ({} elements)", self.size),
            Kind::Product(a, b) => write!(f, "{a} x {b}"),
        }
    }
}

/// A subset of a finite ring, stored as a bitset.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FiniteIdeal {
    bits: Vec<u64>,
    len: usize,
}

impl FiniteIdeal {
    fn empty(n: usize) -> Self {
        FiniteIdeal { bits: vec![0; n.div_ceil(64)], len: 0 }
    }

    pub fn zero(n: usize) -> Self {
        let mut i = FiniteIdeal::empty(n);
        i.insert(0);
        i
    }

    fn insert(&mut self, x: Elem) {
        let (w, b) = (x as usize / 64, x as usize % 64);
        if self.bits[w] & (1 << b) == 0 {
            self.bits[w] |= 1 << b;
            self.len += 1;
        }
    }

    pub fn contains(&self, x: Elem) -> bool {
        self.bits[x as usize / 64] & (1 << (x as usize % 64)) != 0
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> + '_ {
        self.bits.iter().enumerate().flat_map(|(w, &word)| {
            (0..64).filter(move |b| word & (1 << b) != 0).map(move |b| (w * 64 + b) as Elem)
        })
    }

    pub fn is_subset(&self, other: &FiniteIdeal) -> bool {
        self.bits.iter().zip(&other.bits).all(|(a, b)| a & !b == 0)
    }
}

/// All ideals of `r`, smallest first; includes `(0)` and `r`.
pub fn enumerate_ideals(r: &FiniteRing) -> Vec<FiniteIdeal> {
    let mut principal: Vec<FiniteIdeal> = r.elements().map(|a| r.principal(a)).collect();
    principal.sort();
    principal.dedup();
    let mut found: BTreeSet<FiniteIdeal> = principal.iter().cloned().collect();
    let mut queue: VecDeque<FiniteIdeal> = principal.iter().cloned().collect();
    while let Some(i) = queue.pop_front() {
        for p in &principal {
            if p.is_subset(&i) {
                continue;
            }
            let s = r.ideal_sum(&i, p);
            if found.insert(s.clone()) {
                queue.push_back(s);
            }
        }
    }
    let mut all: Vec<FiniteIdeal> = found.into_iter().collect();
    all.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    all
}

/// `ab ∈ I ⇒ a ∈ I or b ∈ I`, over all pairs; `I` must be proper.
pub fn is_prime_ideal_finite(r: &FiniteRing, i: &FiniteIdeal) -> bool {
    if i.len() == r.size() {
        return false;
    }
    let outside: Vec<Elem> = r.elements().filter(|&a| !i.contains(a)).collect();
    outside.iter().all(|&a| outside.iter().all(|&b| !i.contains(r.mul(a, b))))
}

pub fn prime_ideals(r: &FiniteRing) -> Vec<FiniteIdeal> {
    enumerate_ideals(r).into_iter().filter(|i| is_prime_ideal_finite(r, i)).collect()
}

/// A ring morphism between finite rings, checked on all pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteMorphism {
    source: Arc<FiniteRing>,
    target: Arc<FiniteRing>,
    map: Vec<Elem>,
    presentation: Option<RingMorphism>,
}

impl FiniteMorphism {
    /// Checks `u(1) = 1` and additivity and multiplicativity on every pair.
    pub fn new(source: Arc<FiniteRing>, target: Arc<FiniteRing>, map: Vec<Elem>) -> Result<Self> {
        if map.len() != source.size() || map.iter().any(|&y| y as usize >= target.size()) {
            return Err(Error::NotAMorphism("map is not total on the source".into()));
        }
        if map[source.one() as usize] != target.one() {
            return Err(Error::NotAMorphism("1 is not sent to 1".into()));
        }
        for a in source.elements() {
            for b in source.elements() {
                let (x, y) = (map[a as usize], map[b as usize]);
                if map[source.add(a, b) as usize] != target.add(x, y) {
                    return Err(Error::NotAMorphism(format!(
                        "u({} + {}) differs from u({}) + u({})",
                        source.label(a),
                        source.label(b),
                        source.label(a),
                        source.label(b)
                    )));
                }
                if map[source.mul(a, b) as usize] != target.mul(x, y) {
                    return Err(Error::NotAMorphism(format!(
                        "u({} * {}) differs from u({}) * u({})",
                        source.label(a),
                        source.label(b),
                        source.label(a),
                        source.label(b)
                    )));
                }
            }
        }
        Ok(FiniteMorphism { source, target, map, presentation: None })
    }

    /// Extends images given on generators of the source by closure under
    /// the ring operations.
    pub fn from_generators(source: Arc<FiniteRing>, target: Arc<FiniteRing>, images: &[(Elem, Elem)]) -> Result<Self> {
        let n = source.size();
        let mut map: Vec<Option<Elem>> = vec![None; n];
        let assign = |map: &mut Vec<Option<Elem>>, a: Elem, y: Elem, queue: &mut Vec<Elem>| -> Result<()> {
            match map[a as usize] {
                Some(z) if z != y => Err(Error::NotAMorphism(format!(
                    "{} would map to both {} and {}",
                    source.label(a),
                    target.label(z),
                    target.label(y)
                ))),
                Some(_) => Ok(()),
                None => {
                    map[a as usize] = Some(y);
                    queue.push(a);
                    Ok(())
                }
            }
        };
        let mut queue = Vec::new();
        assign(&mut map, 0, 0, &mut queue)?;
        assign(&mut map, source.one(), target.one(), &mut queue)?;
        for &(a, y) in images {
            assign(&mut map, a, y, &mut queue)?;
        }
        let mut known: Vec<Elem> = Vec::new();
        while let Some(a) = queue.pop() {
            known.push(a);
            let ya = map[a as usize].unwrap();
            for &b in &known.clone() {
                let yb = map[b as usize].unwrap();
                assign(&mut map, source.add(a, b), target.add(ya, yb), &mut queue)?;
                assign(&mut map, source.mul(a, b), target.mul(ya, yb), &mut queue)?;
            }
            assign(&mut map, source.neg(a), target.neg(ya), &mut queue)?;
        }
        let map = map
            .into_iter()
            .enumerate()
            .map(|(a, y)| y.ok_or_else(|| Error::NotAMorphism(format!("{} is not reached from the generators", source.label(a as Elem)))))
            .collect::<Result<Vec<_>>>()?;
        FiniteMorphism::new(source, target, map)
    }

    /// The finite morphism underlying a morphism of finite presentations.
    pub fn from_ring_morphism(u: &RingMorphism, bound: usize) -> Result<Self> {
        let a = Arc::new(FiniteRing::from_algebra(u.source(), bound)?);
        let b = Arc::new(FiniteRing::from_algebra(u.target(), bound)?);
        let Kind::Presented(car) = &a.kind else { unreachable!() };
        let imgs: Vec<Elem> = car
            .monomials
            .iter()
            .map(|m| {
                let p = Poly::monomial(u.source().ring(), m.clone(), BigRational::from_integer(1.into()));
                b.element_of(&u.apply(&p))
            })
            .collect::<Result<_>>()?;
        let mut map = Vec::with_capacity(a.size());
        for x in a.elements() {
            let d = car.decode(x as usize);
            let mut acc = 0;
            for (k, &c) in d.iter().enumerate() {
                for _ in 0..c {
                    acc = b.add(acc, imgs[k]);
                }
            }
            map.push(acc);
        }
        let mut f = FiniteMorphism::new(a, b, map)?;
        f.presentation = Some(u.clone());
        Ok(f)
    }

    pub fn identity(r: Arc<FiniteRing>) -> Self {
        let map = r.elements().collect();
        FiniteMorphism { source: r.clone(), target: r, map, presentation: None }
    }

    pub fn source(&self) -> &FiniteRing {
        &self.source
    }

    pub fn target(&self) -> &FiniteRing {
        &self.target
    }

    pub fn source_arc(&self) -> Arc<FiniteRing> {
        self.source.clone()
    }

    pub fn target_arc(&self) -> Arc<FiniteRing> {
        self.target.clone()
    }

    pub fn presentation(&self) -> Option<&RingMorphism> {
        self.presentation.as_ref()
    }

    pub fn with_presentation(mut self, u: RingMorphism) -> Self {
        self.presentation = Some(u);
        self
    }

    pub fn apply(&self, a: Elem) -> Elem {
        self.map[a as usize]
    }

    pub fn map(&self) -> &[Elem] {
        &self.map
    }

    /// `v ∘ self`.
    pub fn then(&self, v: &FiniteMorphism) -> Result<FiniteMorphism> {
        if *self.target != *v.source {
            return Err(Error::ContextMismatch("morphisms are not composable".into()));
        }
        let map = self.map.iter().map(|&b| v.apply(b)).collect();
        let presentation = match (&self.presentation, &v.presentation) {
            (Some(x), Some(y)) => crate::rings::compose(x, y).ok(),
            _ => None,
        };
        Ok(FiniteMorphism { source: self.source.clone(), target: v.target.clone(), map, presentation })
    }

    pub fn is_surjective(&self) -> bool {
        let mut hit = vec![false; self.target.size()];
        for &y in &self.map {
            hit[y as usize] = true;
        }
        hit.into_iter().all(|h| h)
    }

    pub fn is_injective(&self) -> bool {
        self.source.elements().skip(1).all(|a| self.apply(a) != 0)
    }

    pub fn is_identity(&self) -> bool {
        *self.source == *self.target && self.map.iter().enumerate().all(|(a, &y)| a == y as usize)
    }

    /// `u⁻¹(J)`.
    pub fn contract(&self, j: &FiniteIdeal) -> FiniteIdeal {
        let mut i = FiniteIdeal::empty(self.source.size());
        for a in self.source.elements() {
            if j.contains(self.apply(a)) {
                i.insert(a);
            }
        }
        i
    }

    /// The ideal of the target generated by `u(I)`.
    pub fn extend(&self, i: &FiniteIdeal) -> FiniteIdeal {
        let gens: Vec<Elem> = i.elements().map(|a| self.apply(a)).collect();
        self.target.ideal_generated(&gens)
    }
}

/// Proper ideals `I` of the target with `u(a)b ∈ I ⇒ u(a) ∈ I or b ∈ I`.
pub fn a_primes_finite(u: &FiniteMorphism) -> Vec<FiniteIdeal> {
    let b = u.target();
    let images: BTreeSet<Elem> = u.source().elements().map(|a| u.apply(a)).collect();
    enumerate_ideals(b)
        .into_iter()
        .filter(|i| i.len() < b.size())
        .filter(|i| {
            images.iter().filter(|&&x| !i.contains(x)).all(|&x| b.elements().all(|y| i.contains(y) || !i.contains(b.mul(x, y))))
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Status {
    pub psi: bool,
    pub strong: bool,
}

/// PSI and strong PSI straight from the definitions: every A-prime ideal
/// is prime, and every prime has a trivial residue field extension.
pub fn bruteforce_status(u: &FiniteMorphism) -> Status {
    let b = u.target();
    let psi = a_primes_finite(u).iter().all(|i| is_prime_ideal_finite(b, i));
    let strong = psi
        && prime_ideals(b).iter().all(|q| {
            let p = u.contract(q);
            let residue_a = u.source().size() / p.len();
            let residue_b = b.size() / q.len();
            if residue_a != residue_b {
                return false;
            }
            let mut hit = FiniteIdeal::empty(b.size());
            for a in u.source().elements() {
                let ua = u.apply(a);
                for x in q.elements() {
                    hit.insert(b.add(ua, x));
                }
            }
            hit.len() == b.size()
        });
    Status { psi, strong }
}

/// The fiber `B/PB` at every prime `P` of the source: PSI iff each is zero
/// or a field, strong iff each nonzero one has as many elements as `A/P`.
pub fn fiber_status(u: &FiniteMorphism) -> Status {
    let mut psi = true;
    let mut strong = true;
    for p in prime_ideals(u.source()) {
        let j = u.extend(&p);
        if j.len() == u.target().size() {
            continue;
        }
        if !is_prime_ideal_finite(u.target(), &j) {
            psi = false;
            strong = false;
        } else if u.target().size() / j.len() != u.source().size() / p.len() {
            strong = false;
        }
    }
    Status { psi, strong }
}

/// Contractions of the primes of the target, in the order of `prime_ideals`.
pub fn contracted_primes(u: &FiniteMorphism) -> Vec<FiniteIdeal> {
    prime_ideals(u.target()).iter().map(|q| u.contract(q)).collect()
}

/// Whether `Q ↦ u⁻¹(Q)` is injective on prime ideals.
pub fn spectral_map_injective(u: &FiniteMorphism) -> bool {
    let c = contracted_primes(u);
    let set: BTreeSet<&FiniteIdeal> = c.iter().collect();
    set.len() == c.len()
}

/// Builds a finite ring from a presentation with the default bound.
pub fn build_finite(a: &FpAlgebra) -> Result<FiniteRing> {
    FiniteRing::from_algebra(a, DEFAULT_BOUND)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(gens: &[&str], rels: &[&str]) -> FiniteRing {
        build_finite(&FpAlgebra::parse(Domain::Int, gens, rels).unwrap()).unwrap()
    }

    /// Tables of `ℤ/n` written out by hand.
    fn zmod_tables(n: usize) -> (Vec<Vec<usize>>, Vec<Vec<usize>>) {
        let add = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        let mul = (0..n).map(|a| (0..n).map(|b| (a * b) % n).collect()).collect();
        (add, mul)
    }

    #[test]
    fn build_examples() {
        let r = ring(&["x"], &["2", "x^2 + x"]);
        assert_eq!(r.size(), 4);
        assert_eq!(r.idempotents().len(), 4);
        assert!(!r.is_field());
        let z4 = ring(&[], &["4"]);
        assert_eq!(z4.size(), 4);
        assert_eq!(z4.characteristic(), 4);
        let f4 = ring(&["x"], &["2", "x^2 + x + 1"]);
        assert_eq!(f4.size(), 4);
        assert!(f4.is_field());
        let (add, mul) = zmod_tables(4);
        assert_eq!(FiniteRing::from_tables(&add, &mul).unwrap(), z4);
    }

    #[test]
    fn tables_match_a_hand_model() {
        // Z/4[x]/(x^2 - 2): elements a + b x, (a + bx)(c + dx) = ac + 2bd + (ad + bc) x
        let r = ring(&["x"], &["4", "x^2 - 2"]);
        assert_eq!(r.size(), 16);
        let enc = |a: i64, b: i64| r.element_of(&FpAlgebra::parse(Domain::Int, &["x"], &[]).unwrap().poly(&format!("{a} + {b}*x")).unwrap()).unwrap();
        for a in 0..4 {
            for b in 0..4 {
                for c in 0..4 {
                    for d in 0..4 {
                        let x = enc(a, b);
                        let y = enc(c, d);
                        assert_eq!(r.add(x, y), enc((a + c) % 4, (b + d) % 4));
                        assert_eq!(r.mul(x, y), enc((a * c + 2 * b * d) % 4, (a * d + b * c) % 4));
                    }
                }
            }
        }
    }

    #[test]
    fn bad_tables_are_rejected() {
        let (add, mut mul) = zmod_tables(3);
        mul[1][2] = 0;
        assert!(matches!(FiniteRing::from_tables(&add, &mul), Err(Error::NotARing(_))));
    }

    #[test]
    fn too_large_and_infinite() {
        let big = FpAlgebra::parse(Domain::Int, &["x"], &["3", "x^9"]).unwrap();
        assert!(matches!(FiniteRing::from_algebra(&big, 4096), Err(Error::TooLarge { .. })));
        let inf = FpAlgebra::parse(Domain::Int, &["x"], &["4", "2*x"]).unwrap();
        assert!(matches!(build_finite(&inf), Err(Error::NotFiniteQuotient(_))));
        let zz = FpAlgebra::base_ring(Domain::Int);
        assert!(matches!(build_finite(&zz), Err(Error::NotFiniteQuotient(_))));
    }

    #[test]
    fn ideal_examples() {
        let split = ring(&["x"], &["2", "x^2 + x"]);
        assert_eq!(enumerate_ideals(&split).len(), 4);
        let f4 = ring(&["x"], &["2", "x^2 + x + 1"]);
        assert_eq!(enumerate_ideals(&f4).len(), 2);
        let z4 = ring(&[], &["4"]);
        let ideals = enumerate_ideals(&z4);
        assert_eq!(ideals.iter().map(|i| i.len()).collect::<Vec<_>>(), vec![1, 2, 4]);
        assert!(!is_prime_ideal_finite(&split, &FiniteIdeal::zero(4)));
        assert!(is_prime_ideal_finite(&z4, &ideals[1]));
        assert!(is_prime_ideal_finite(&f4, &FiniteIdeal::zero(4)));
    }

    #[test]
    fn a_prime_examples() {
        let f2 = FpAlgebra::parse(Domain::Int, &[], &["2"]).unwrap();
        let split = FpAlgebra::parse(Domain::Int, &["x"], &["2", "x^2 + x"]).unwrap();
        let u = FiniteMorphism::from_ring_morphism(&RingMorphism::new(f2.clone(), split, vec![]).unwrap(), 64).unwrap();
        let ap = a_primes_finite(&u);
        assert!(ap.contains(&FiniteIdeal::zero(4)));
        assert_eq!(bruteforce_status(&u), Status { psi: false, strong: false });
        let f4 = FpAlgebra::parse(Domain::Int, &["x"], &["2", "x^2 + x + 1"]).unwrap();
        let v = FiniteMorphism::from_ring_morphism(&RingMorphism::new(f2, f4.clone(), vec![]).unwrap(), 64).unwrap();
        assert_eq!(bruteforce_status(&v), Status { psi: true, strong: false });
        let id = FiniteMorphism::identity(v.target_arc());
        assert_eq!(a_primes_finite(&id), vec![FiniteIdeal::zero(4)]);
        let id4 = FiniteMorphism::identity(Arc::new(ring(&[], &["4"])));
        assert_eq!(a_primes_finite(&id4).iter().map(|i| i.len()).collect::<Vec<_>>(), vec![2]);
    }

    #[test]
    fn surjections_are_psi() {
        let z4 = FpAlgebra::parse(Domain::Int, &["x"], &["4", "x^2"]).unwrap();
        let f2 = FpAlgebra::parse(Domain::Int, &["y"], &["2", "y^2 + y + 1"]).unwrap();
        let z8 = FpAlgebra::parse(Domain::Int, &["x"], &["8", "x^2 + x + 1"]).unwrap();
        let u = RingMorphism::parse(&z8, &f2, &[("x", "y")]).unwrap();
        let f = FiniteMorphism::from_ring_morphism(&u, 4096).unwrap();
        assert!(f.is_surjective());
        assert!(bruteforce_status(&f).psi);
        let w = RingMorphism::parse(&z4, &FpAlgebra::parse(Domain::Int, &[], &["2"]).unwrap(), &[("x", "0")]).unwrap();
        assert!(bruteforce_status(&FiniteMorphism::from_ring_morphism(&w, 64).unwrap()).psi);
    }

    #[test]
    fn from_generators_extends_and_rejects() {
        let z4 = Arc::new(ring(&[], &["4"]));
        let z2 = Arc::new(ring(&[], &["2"]));
        let u = FiniteMorphism::from_generators(z4.clone(), z2.clone(), &[]).unwrap();
        assert!(u.is_surjective());
        assert!(matches!(FiniteMorphism::from_generators(z2, z4, &[]), Err(Error::NotAMorphism(_))));
    }

    #[test]
    fn products_and_labels() {
        let f2 = ring(&[], &["2"]);
        let p = f2.product(&f2, 64).unwrap();
        assert_eq!(p.size(), 4);
        assert_eq!(p.idempotents().len(), 4);
        assert_eq!(enumerate_ideals(&p).len(), 4);
        assert_eq!(p.label(p.one()), "(1, 1)");
        let split = ring(&["x"], &["2", "x^2 + x"]);
        assert_eq!(split.label(split.one()), "1");
    }
}
