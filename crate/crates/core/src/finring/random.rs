//! Seeded generators of small finite instances for the oracle fuzzer.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Elem, FiniteMorphism, FiniteRing};
use crate::error::Result;
use crate::kernel::primes::prime_factors_u64;
use crate::kernel::{Domain, Poly};
use crate::rings::{product_construction, FpAlgebra, RingMorphism};

const TRIES: usize = 64;

fn zmod(n: u64) -> FpAlgebra {
    FpAlgebra::parse(Domain::Int, &[], &[&n.to_string()]).expect("valid presentation")
}

fn fits(a: &FpAlgebra, bound: usize) -> Option<FiniteRing> {
    FiniteRing::from_algebra(a, bound).ok().filter(|r| !r.is_zero_ring())
}

/// `ℤ/p^k` or `ℤ/n[t]/(f)` with `f` monic of degree 2 or 3.
fn basic_ring(rng: &mut ChaCha8Rng, var: &str) -> FpAlgebra {
    if rng.gen_bool(0.3) {
        let (p, k) = *[(2u64, 1u32), (2, 2), (2, 3), (3, 1), (3, 2), (5, 1), (7, 1)].choose(rng).unwrap();
        return zmod(p.pow(k));
    }
    let n = *[2u64, 2, 3, 3, 4, 5, 6, 8, 9].choose(rng).unwrap();
    let deg = rng.gen_range(2..=3);
    let mut f = format!("{var}^{deg}");
    for e in (0..deg).rev() {
        let c = rng.gen_range(0..n);
        if c != 0 {
            f.push_str(&format!(" + {c}*{var}^{e}"));
        }
    }
    FpAlgebra::parse(Domain::Int, &[var], &[&n.to_string(), &f]).expect("valid presentation")
}

/// A random finite ring with at most `bound` elements, or `ℤ/2` when
/// nothing else fits.
pub fn random_ring(rng: &mut ChaCha8Rng, var: &str, bound: usize) -> FpAlgebra {
    for _ in 0..TRIES {
        let a = if rng.gen_bool(0.25) {
            let b = basic_ring(rng, var);
            let c = basic_ring(rng, var);
            match product_construction(&b, &c) {
                Ok(p) => p.algebra,
                Err(_) => continue,
            }
        } else {
            basic_ring(rng, var)
        };
        if fits(&a, bound).is_some() {
            return a;
        }
    }
    zmod(2)
}

fn eval(r: &FiniteRing, coeffs: &[i64], x: Elem) -> Elem {
    let mut acc = r.zero();
    for &c in coeffs.iter().rev() {
        acc = r.add(r.mul(acc, x), r.from_int(c));
    }
    acc
}

/// A map `A → B` hitting a random element `b`: `A = ℤ[var]/(n, f)` with
/// `f(b) = 0` and `var ↦ b`, or `A = ℤ/n`, where `n` is a multiple of the
/// characteristic of `B`.
fn random_source(rng: &mut ChaCha8Rng, b: &FpAlgebra, var: &str, bound: usize) -> Result<RingMorphism> {
    let br = FiniteRing::from_algebra(b, bound)?;
    let ch = br.characteristic();
    for _ in 0..TRIES {
        let n = if rng.gen_bool(0.2) {
            ch * *prime_factors_u64(ch).choose(rng).unwrap_or(&2)
        } else {
            ch
        };
        if rng.gen_bool(0.15) {
            if fits(&zmod(n), bound).is_some() {
                return RingMorphism::new(zmod(n), b.clone(), Vec::new());
            }
            continue;
        }
        let x = rng.gen_range(0..br.size()) as Elem;
        let deg = rng.gen_range(1..=3usize);
        if (n as u128).pow(deg as u32) > bound as u128 {
            continue;
        }
        for _ in 0..TRIES {
            let mut coeffs: Vec<i64> = (0..deg).map(|_| rng.gen_range(0..n as i64)).collect();
            coeffs.push(1);
            if eval(&br, &coeffs, x) != br.zero() {
                continue;
            }
            let mut f = format!("{var}^{deg}");
            for (e, c) in coeffs.iter().enumerate().take(deg).rev() {
                if *c != 0 {
                    f.push_str(&format!(" + {c}*{var}^{e}"));
                }
            }
            let a = FpAlgebra::parse(Domain::Int, &[var], &[&n.to_string(), &f])?;
            let image: Poly = br.element_poly(x).expect("presented ring");
            return RingMorphism::new(a, b.clone(), vec![image]);
        }
    }
    RingMorphism::new(zmod(ch), b.clone(), Vec::new())
}

/// A seeded finite instance `u : A → B` with both sides of size at most `bound`.
pub fn random_instance(seed: u64, bound: usize) -> Result<FiniteMorphism> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let b = random_ring(&mut rng, "t", bound);
    let u = random_source(&mut rng, &b, "s", bound)?;
    FiniteMorphism::from_ring_morphism(&u, bound)
}

/// A seeded composable pair `A → B → C`.
pub fn random_chain(seed: u64, bound: usize) -> Result<(FiniteMorphism, FiniteMorphism)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let c = random_ring(&mut rng, "z", bound);
    let v = random_source(&mut rng, &c, "y", bound)?;
    let u = random_source(&mut rng, v.source(), "x", bound)?;
    Ok((FiniteMorphism::from_ring_morphism(&u, bound)?, FiniteMorphism::from_ring_morphism(&v, bound)?))
}

/// A seeded pair `A → B`, `A → C` sharing a source, obtained by mapping
/// into `B × C` and projecting.
pub fn random_diagonal(seed: u64, bound: usize) -> Result<(FiniteMorphism, FiniteMorphism)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..TRIES {
        let b = random_ring(&mut rng, "y", bound);
        let c = random_ring(&mut rng, "z", bound);
        let Ok(prod) = product_construction(&b, &c) else { continue };
        if fits(&prod.algebra, bound).is_none() {
            continue;
        }
        let u = random_source(&mut rng, &prod.algebra, "x", bound)?;
        let ub = u.then(&prod.first)?;
        let uc = u.then(&prod.second)?;
        return Ok((FiniteMorphism::from_ring_morphism(&ub, bound)?, FiniteMorphism::from_ring_morphism(&uc, bound)?));
    }
    let f2 = zmod(2);
    let id = RingMorphism::identity(&f2);
    Ok((FiniteMorphism::from_ring_morphism(&id, bound)?, FiniteMorphism::from_ring_morphism(&id, bound)?))
}
