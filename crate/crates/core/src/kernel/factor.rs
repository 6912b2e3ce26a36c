//! Univariate factorization over prime fields and the rationals.
//!
//! Over 𝔽_p: squarefree decomposition, distinct-degree and equal-degree
//! splitting. Over ℚ: a good prime, linear Hensel lifting and subset
//! recombination.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::coeff::Domain;
use super::poly::{Poly, PolyRing};
use super::primes::is_prime_u64;
use super::upoly::{zpoly, UPoly};
use crate::error::{Error, Result};

/// `f = lc * prod(factor^mult)`, factors monic irreducible, sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub lc: BigRational,
    pub factors: Vec<(UPoly, u32)>,
}

impl Factorization {
    pub fn is_irreducible(&self) -> bool {
        self.factors.len() == 1 && self.factors[0].1 == 1
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|(_, m)| *m == 1)
    }

    /// Product of the distinct factors.
    pub fn radical(&self, d: Domain) -> UPoly {
        self.factors.iter().fold(UPoly::one(d), |acc, (f, _)| acc.mul(f))
    }

    pub fn expand(&self, d: Domain) -> UPoly {
        let mut acc = UPoly::constant(d, self.lc.clone());
        for (f, m) in &self.factors {
            for _ in 0..*m {
                acc = acc.mul(f);
            }
        }
        acc
    }
}

/// Canonical ordering: by degree, then coefficients from the constant term up.
fn sort_factors(v: &mut [(UPoly, u32)]) {
    v.sort_by(|a, b| a.0.deg().cmp(&b.0.deg()).then_with(|| a.0.c.cmp(&b.0.c)).then(a.1.cmp(&b.1)));
}

/// Factors a nonzero univariate polynomial (a `Poly` in one variable over
/// `Rat` or `ModP`).
pub fn univ_factor(f: &Poly) -> Result<Factorization> {
    if f.nvars() != 1 {
        return Err(Error::ContextMismatch("univ_factor expects a one-variable ring".into()));
    }
    if !f.domain().is_field() {
        return Err(Error::ContextMismatch("univ_factor expects a field domain".into()));
    }
    let u = UPoly::from_poly(f, 0).unwrap();
    factor_upoly(&u)
}

/// Factorization of a dense univariate polynomial over a field domain.
pub fn factor_upoly(f: &UPoly) -> Result<Factorization> {
    assert!(!f.is_zero(), "cannot factor zero");
    let mut out = match f.d {
        Domain::ModP(p) => factor_mod_p(f, p),
        Domain::Rat => factor_rat(f)?,
        Domain::Int => return Err(Error::ContextMismatch("integer polynomial; use Rat".into())),
    };
    sort_factors(&mut out.factors);
    Ok(out)
}

/// Lifts back to a `Poly` in a one-variable ring.
pub fn factor_to_poly(u: &UPoly, ring: PolyRing) -> Poly {
    u.to_poly(ring, 0)
}

fn rng() -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(0x5eed_f00d)
}

// ---- prime fields ----

fn squarefree_mod_p(f: &UPoly, p: u64) -> Vec<(UPoly, u32)> {
    let d = f.d;
    let f = f.monic();
    let mut out = Vec::new();
    if f.deg() == 0 {
        return out;
    }
    let df = f.derivative();
    let mut c = f.gcd(&df);
    let mut w = f.quo(&c);
    let mut i = 1;
    while !w.is_one() {
        let y = w.gcd(&c);
        let z = w.quo(&y);
        if z.deg() > 0 {
            out.push((z, i));
        }
        i += 1;
        w = y;
        c = c.quo(&w);
    }
    if c.deg() > 0 {
        // c is a p-th power
        let root: Vec<BigRational> = c.c.iter().step_by(p as usize).cloned().collect();
        let root = UPoly::new(d, root);
        for (g, m) in squarefree_mod_p(&root, p) {
            out.push((g, m * p as u32));
        }
    }
    out
}

fn distinct_degree(f: &UPoly, p: u64) -> Vec<(UPoly, usize)> {
    let d = f.d;
    let mut out = Vec::new();
    let mut f = f.clone();
    let x = UPoly::x(d);
    let mut h = x.rem(&f);
    let pe = BigUint::from(p);
    let mut deg = 1;
    while f.deg() >= 2 * deg {
        h = h.powmod(&pe, &f);
        let g = h.sub(&x).gcd(&f);
        if g.deg() > 0 {
            f = f.quo(&g);
            h = h.rem(&f);
            out.push((g, deg));
        }
        deg += 1;
    }
    if f.deg() > 0 {
        let n = f.deg();
        out.push((f, n));
    }
    out
}

fn equal_degree(f: &UPoly, k: usize, p: u64, rng: &mut ChaCha8Rng) -> Vec<UPoly> {
    let d = f.d;
    let n = f.deg();
    if n == k {
        return vec![f.clone()];
    }
    loop {
        let a = UPoly::new(
            d,
            (0..n).map(|_| BigRational::from_integer(rng.gen_range(0..p).into())).collect(),
        );
        if a.deg() == 0 {
            continue;
        }
        let b = if p == 2 {
            // trace map from F_{2^k} to F_2
            let mut t = a.rem(f);
            let mut acc = t.clone();
            for _ in 1..k {
                t = t.mul(&t).rem(f);
                acc = acc.add(&t);
            }
            acc
        } else {
            let e = (BigUint::from(p).pow(k as u32) - 1u32) / 2u32;
            a.powmod(&e, f).sub(&UPoly::one(d))
        };
        let g = b.gcd(f);
        if g.deg() > 0 && g.deg() < n {
            let mut out = equal_degree(&g, k, p, rng);
            out.extend(equal_degree(&f.quo(&g), k, p, rng));
            return out;
        }
    }
}

fn factor_mod_p(f: &UPoly, p: u64) -> Factorization {
    let lc = f.lc();
    let mut rng = rng();
    let mut factors = Vec::new();
    for (g, m) in squarefree_mod_p(f, p) {
        for (h, k) in distinct_degree(&g, p) {
            for irr in equal_degree(&h, k, p, &mut rng) {
                factors.push((irr.monic(), m));
            }
        }
    }
    Factorization { lc, factors }
}

// ---- rationals ----

/// Yun's squarefree decomposition in characteristic zero.
fn squarefree_rat(f: &UPoly) -> Vec<(UPoly, u32)> {
    let f = f.monic();
    let mut out = Vec::new();
    if f.deg() == 0 {
        return out;
    }
    let df = f.derivative();
    let a0 = f.gcd(&df);
    let mut b = f.quo(&a0);
    let mut c = df.quo(&a0);
    let mut dd = c.sub(&b.derivative());
    let mut i = 1;
    while b.deg() > 0 {
        let a = b.gcd(&dd);
        if a.deg() > 0 {
            out.push((a.clone(), i));
        }
        b = b.quo(&a);
        c = dd.quo(&a);
        dd = c.sub(&b.derivative());
        i += 1;
    }
    out
}

/// Primitive integer polynomial with positive leading coefficient.
fn to_primitive_int(f: &UPoly) -> Vec<BigInt> {
    let l = f.c.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = f.c.iter().map(|c| c.numer() * (&l / c.denom())).collect();
    zpoly::primitive(&ints)
}

fn int_to_monic_rat(g: &[BigInt]) -> UPoly {
    zpoly::to_upoly(g, Domain::Rat).monic()
}

fn isqrt_ceil(n: &BigInt) -> BigInt {
    let r = n.sqrt();
    if &(&r * &r) < n {
        r + 1
    } else {
        r
    }
}

/// Lifts `f = g h (mod p)` with `g` monic to a factorization mod `p^k`,
/// one power of `p` at a time.
fn hensel_lift(f: &[BigInt], g: &[BigInt], h: &[BigInt], p: u64, k: u32) -> (Vec<BigInt>, Vec<BigInt>) {
    let d = Domain::ModP(p);
    let pb = BigInt::from(p);
    let gp = zpoly::to_upoly(g, d);
    let hp = zpoly::to_upoly(h, d);
    let (one, s, t) = gp.xgcd(&hp);
    debug_assert!(one.is_one());
    let _ = s;
    let mut g = g.to_vec();
    let mut h = h.to_vec();
    let mut pk = pb.clone();
    for _ in 1..k {
        let next = &pk * &pb;
        let err = zpoly::modulo(&zpoly::sub(f, &zpoly::mul(&g, &h)), &next);
        let e: Vec<BigInt> = err.iter().map(|x| x / &pk).collect();
        let e = zpoly::to_upoly(&e, d);
        let sigma = t.mul(&e).rem(&gp);
        let tau = e.sub(&hp.mul(&sigma)).quo(&gp);
        g = zpoly::modulo(&zpoly::add(&g, &zpoly::scale(&zpoly::from_upoly(&sigma), &pk)), &next);
        h = zpoly::modulo(&zpoly::add(&h, &zpoly::scale(&zpoly::from_upoly(&tau), &pk)), &next);
        pk = next;
    }
    (g, h)
}

fn choose_prime(f: &[BigInt]) -> (u64, Vec<UPoly>) {
    let lc = f.last().unwrap();
    let mut p = 3u64;
    loop {
        if is_prime_u64(p) && !(lc % BigInt::from(p)).is_zero() {
            let fp = zpoly::to_upoly(f, Domain::ModP(p));
            if fp.gcd(&fp.derivative()).deg() == 0 {
                let fac = factor_mod_p(&fp, p);
                return (p, fac.factors.into_iter().map(|(g, _)| g).collect());
            }
        }
        p += 2;
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Irreducible factors over ℤ of a squarefree primitive polynomial.
fn zassenhaus(f: &[BigInt]) -> Result<Vec<Vec<BigInt>>> {
    let n = f.len() - 1;
    if n <= 1 {
        return Ok(vec![f.to_vec()]);
    }
    let (p, modp) = choose_prime(f);
    if modp.len() == 1 {
        return Ok(vec![f.to_vec()]);
    }
    if modp.len() > 16 {
        return Err(Error::ResourceLimit(format!("{} modular factors to recombine", modp.len())));
    }
    let lc = f.last().unwrap().clone();
    let norm2: BigInt = f.iter().map(|c| c * c).sum();
    let bound = BigInt::from(2) * lc.abs() * (BigInt::one() << n) * isqrt_ceil(&norm2);
    let mut k = 1u32;
    let mut pk = BigInt::from(p);
    while pk <= bound {
        pk *= p;
        k += 1;
    }
    // peel one factor at a time off the lifted cofactor
    let mut lifted = Vec::new();
    let mut rest = f.to_vec();
    let dp = Domain::ModP(p);
    for i in 0..modp.len() - 1 {
        let gi = zpoly::from_upoly(&modp[i]);
        let cof = modp[i + 1..]
            .iter()
            .fold(UPoly::constant(dp, BigRational::from_integer(lc.clone())), |acc, g| acc.mul(g));
        let (g, h) = hensel_lift(&rest, &gi, &zpoly::from_upoly(&cof), p, k);
        lifted.push(g);
        rest = h;
    }
    let lcinv = lc.mod_floor(&pk).extended_gcd(&pk).x.mod_floor(&pk);
    lifted.push(zpoly::modulo(&zpoly::scale(&rest, &lcinv), &pk));

    let mut remaining: Vec<Vec<BigInt>> = lifted;
    let mut cur = f.to_vec();
    let mut found = Vec::new();
    let mut s = 1;
    while 2 * s <= remaining.len() {
        let mut hit = None;
        for sub in subsets(remaining.len(), s) {
            let lcc = cur.last().unwrap().clone();
            let mut prod = vec![lcc];
            for &i in &sub {
                prod = zpoly::modulo(&zpoly::mul(&prod, &remaining[i]), &pk);
            }
            let cand = zpoly::primitive(&zpoly::symmetric(&prod, &pk));
            if cand.len() < 2 {
                continue;
            }
            if let Some(q) = zpoly::div_exact(&cur, &cand) {
                hit = Some((sub, cand, q));
                break;
            }
        }
        match hit {
            Some((sub, cand, q)) => {
                found.push(cand);
                cur = zpoly::primitive(&q);
                remaining = remaining
                    .into_iter()
                    .enumerate()
                    .filter(|(i, _)| !sub.contains(i))
                    .map(|(_, g)| g)
                    .collect();
            }
            None => s += 1,
        }
    }
    if cur.len() > 1 {
        found.push(cur);
    }
    Ok(found)
}

fn factor_rat(f: &UPoly) -> Result<Factorization> {
    let lc = f.lc();
    let mut factors = Vec::new();
    for (g, m) in squarefree_rat(f) {
        let gi = to_primitive_int(&g);
        for h in zassenhaus(&gi)? {
            factors.push((int_to_monic_rat(&h), m));
        }
    }
    Ok(Factorization { lc, factors })
}

/// True when the polynomial has no repeated factor.
pub fn is_squarefree(f: &UPoly) -> bool {
    f.gcd(&f.derivative()).deg() == 0
}

/// Degree as `u32` for callers that index exponents.
pub fn degree_u32(f: &UPoly) -> u32 {
    f.deg().to_u32().unwrap_or(u32::MAX)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::expr::parse_poly;
    use proptest::prelude::*;

    fn fac(s: &str, d: Domain) -> Factorization {
        let ring = PolyRing::new(1, d);
        let p = parse_poly(s, &["x".to_string()], ring).unwrap();
        univ_factor(&p).unwrap()
    }

    fn show(f: &Factorization) -> Vec<(String, u32)> {
        let ring = PolyRing::new(1, Domain::Rat);
        f.factors
            .iter()
            .map(|(g, m)| (UPoly::new(Domain::Rat, g.c.clone()).to_poly(ring, 0).display(&["x".into()]).to_string(), *m))
            .collect()
    }

    #[test]
    fn splits_mod_five() {
        let f = fac("x^2 + 1", Domain::ModP(5));
        assert_eq!(show(&f), vec![("x + 2".to_string(), 1), ("x + 3".to_string(), 1)]);
    }

    #[test]
    fn rational_examples() {
        assert!(fac("x^2 + 1", Domain::Rat).is_irreducible());
        assert_eq!(show(&fac("x^2 - 1", Domain::Rat)), vec![("x - 1".to_string(), 1), ("x + 1".to_string(), 1)]);
    }

    #[test]
    fn swinnerton_dyer_style_recombination() {
        // x^4 - 10x^2 + 1 is irreducible but splits into quadratics mod every prime
        assert!(fac("x^4 - 10*x^2 + 1", Domain::Rat).is_irreducible());
        let f = fac("(x^2 - 2)*(x^2 - 3)*(x - 1)^2", Domain::Rat);
        assert_eq!(f.factors.len(), 3);
        assert!(!f.is_squarefree());
    }

    #[test]
    fn characteristic_two_and_pth_powers() {
        let f = fac("x^4 + 1", Domain::ModP(2));
        assert_eq!(show(&f), vec![("x + 1".to_string(), 4)]);
        let f = fac("x^2 + x + 1", Domain::ModP(2));
        assert!(f.is_irreducible());
        let f = fac("x^3 + x", Domain::ModP(3));
        // x (x^2 + 1), irreducible quadratic mod 3
        assert_eq!(f.factors.len(), 2);
    }

    fn small_poly(d: Domain) -> impl Strategy<Value = UPoly> {
        prop::collection::vec(-6i64..=6, 1..7).prop_filter_map("nonzero", move |c| {
            let u = UPoly::from_i64s(d, &c);
            (!u.is_zero()).then_some(u)
        })
    }

    fn check_product_and_irreducibility(f: &UPoly) {
        let fa = factor_upoly(f).unwrap();
        assert_eq!(fa.expand(f.d), *f);
        for (g, _) in &fa.factors {
            assert_eq!(g.lc(), BigRational::one());
            // no proper factor of degree <= deg/2 on re-factorization
            let again = factor_upoly(g).unwrap();
            assert!(again.is_irreducible(), "{g:?}");
        }
    }

    proptest! {
        #[test]
        fn product_reexpands_mod_p(f in small_poly(Domain::ModP(7))) {
            check_product_and_irreducibility(&f);
        }

        #[test]
        fn product_reexpands_mod_2(f in small_poly(Domain::ModP(2))) {
            check_product_and_irreducibility(&f);
        }

        #[test]
        fn product_reexpands_rat(a in small_poly(Domain::Rat), b in small_poly(Domain::Rat)) {
            let f = a.mul(&b);
            check_product_and_irreducibility(&f);
        }

        #[test]
        fn irreducible_factors_have_no_roots_mod_p(f in small_poly(Domain::ModP(5))) {
            let fa = factor_upoly(&f).unwrap();
            for (g, _) in fa.factors {
                if g.deg() > 1 {
                    for r in 0..5 {
                        prop_assert!(!g.eval(&BigRational::from_integer(r.into())).is_zero());
                    }
                }
            }
        }
    }
}
