//! Reduction modulo an ideal shared by source and target, and the
//! quadratic-order family.

use std::collections::{BTreeSet, VecDeque};

use num_traits::{One, Signed};

use super::decide::{decide_reduced, PsiVerdict};
use super::Property;
use crate::error::{Error, Result};
use crate::finring::{self, FiniteMorphism};
use crate::kernel::primes::{is_perfect_square, is_squarefree};
use crate::kernel::{Domain, Monomial, Poly};
use crate::rings::{contract_ideal, preimage_of, FpAlgebra, IdealSpec, RingMorphism};

const MODULE_GENERATOR_LIMIT: usize = 4096;

/// `A/I → B/I` for an ideal `I` of `B` contained in the image of `A`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reduction {
    /// `u⁻¹(I)`.
    pub source_ideal: IdealSpec,
    pub target_ideal: IdealSpec,
    pub morphism: RingMorphism,
    pub finite: FiniteMorphism,
}

/// Monomials spanning the target over its base ring: those not divisible by
/// a leading monomial with unit leading coefficient.
fn module_generators(b: &FpAlgebra) -> Result<Vec<Monomial>> {
    let unit_lms: Vec<Monomial> = b
        .gb()
        .basis()
        .iter()
        .filter(|g| b.base().is_field() || g.lc().expect("nonzero").numer().abs().is_one())
        .map(|g| g.lm().expect("nonzero").clone())
        .collect();
    let n = b.nvars();
    let not_finite = || Error::NotCommonIdeal(format!("{b} is not finite over its base ring, so B*I cannot be enumerated"));
    for k in 0..n {
        if !unit_lms.iter().any(|m| m.pure_power().is_some_and(|(v, _)| v == k)) {
            return Err(not_finite());
        }
    }
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    let mut queue = VecDeque::from([Monomial::one(n)]);
    while let Some(m) = queue.pop_front() {
        if !seen.insert(m.0.clone()) || unit_lms.iter().any(|l| l.divides(&m)) {
            continue;
        }
        out.push(m.clone());
        if out.len() > MODULE_GENERATOR_LIMIT {
            return Err(not_finite());
        }
        for k in 0..n {
            queue.push_back(m.mul(&Monomial::var(n, k, 1)));
        }
    }
    Ok(out)
}

/// Checks that `i` is a common ideal of the extension `u` and passes to the
/// finite quotients.
pub fn common_ideal_reduce(u: &RingMorphism, i: &IdealSpec) -> Result<Reduction> {
    let (a, b) = (u.source(), u.target());
    if i.ambient() != b {
        return Err(Error::ContextMismatch("ideal is not in the target of the morphism".into()));
    }
    if !i.is_proper()? {
        return Err(Error::NotCommonIdeal(format!("{i} is not proper")));
    }
    let kernel = contract_ideal(u, &IdealSpec::zero(b))?;
    if let Some(g) = kernel.gens().first() {
        return Err(Error::NotCommonIdeal(format!("the map is not injective: {} maps to 0", a.show(g))));
    }
    let one = num_rational::BigRational::one();
    for m in module_generators(b)? {
        let m = Poly::monomial(b.ring(), m, one.clone());
        for g in i.gens() {
            let x = b.reduce(&g.mul(&m));
            if preimage_of(u, &x)?.is_none() {
                return Err(Error::NotCommonIdeal(format!("{} lies in {i} but not in the image of the source", b.show(&x))));
            }
        }
    }
    let source_ideal = contract_ideal(u, i)?;
    let a2 = source_ideal.quotient()?;
    let b2 = i.quotient()?;
    let morphism = RingMorphism::new(a2, b2, u.images().to_vec())?;
    let finite = FiniteMorphism::from_ring_morphism(&morphism, finring::DEFAULT_BOUND)?;
    Ok(Reduction { source_ideal, target_ideal: i.clone(), morphism, finite })
}

/// `ℤ[√d] ⊆ ℤ[(1+√d)/2]` for squarefree `d ≡ 1 (mod 4)` other than 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QuadraticInstance {
    d: i64,
}

impl QuadraticInstance {
    pub fn new(d: i64) -> Result<Self> {
        if d.rem_euclid(4) != 1 {
            return Err(Error::InvalidD(d, "d must be 1 modulo 4".into()));
        }
        if is_perfect_square(d) {
            return Err(Error::InvalidD(d, "d must not be a square".into()));
        }
        if !is_squarefree(d) {
            return Err(Error::InvalidD(d, "d must be squarefree".into()));
        }
        Ok(QuadraticInstance { d })
    }

    pub fn d(&self) -> i64 {
        self.d
    }
}

/// `c` written as a trailing signed term, e.g. `- 4` or `+ 2`.
fn signed(c: i64) -> String {
    if c < 0 {
        format!("+ {}", -c)
    } else {
        format!("- {c}")
    }
}

/// The inclusion `ℤ[x]/(x² - d) → ℤ[w]/(w² - w - (d-1)/4)`, `x ↦ 2w - 1`.
pub fn quadratic_order(inst: QuadraticInstance) -> Result<RingMorphism> {
    let d = inst.d;
    let a = FpAlgebra::parse(Domain::Int, &["x"], &[&format!("x^2 {}", signed(d))])?;
    let b = FpAlgebra::parse(Domain::Int, &["w"], &[&format!("w^2 - w {}", signed((d - 1) / 4))])?;
    RingMorphism::parse(&a, &b, &[("x", "2*w - 1")])
}

/// The reduction modulo `2B`, which lies in `ℤ[√d]`.
pub fn quadratic_reduction(inst: QuadraticInstance) -> Result<Reduction> {
    let u = quadratic_order(inst)?;
    let i = IdealSpec::parse(u.target(), &["2"])?;
    common_ideal_reduce(&u, &i)
}

/// PSI for the quadratic order, decided on the reduction modulo `2B`.
pub fn quadratic_order_psi(inst: QuadraticInstance) -> Result<PsiVerdict> {
    let u = quadratic_order(inst)?;
    let red = quadratic_reduction(inst)?;
    let arg = format!(
        "2B is a common ideal; {} -> {} decided by exhaustion",
        red.morphism.source(),
        red.morphism.target()
    );
    decide_reduced(&u, &red, Property::Psi, &arg)
}
