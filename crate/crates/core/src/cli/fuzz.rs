//! Random finite instances checked against the definitions and the
//! closure rules.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::Result;
use crate::finring::{
    bruteforce_status, contracted_primes, fiber_status, random_chain, random_diagonal, random_instance,
    spectral_map_injective, FiniteMorphism, Status,
};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FuzzSummary {
    pub seed: u64,
    pub count: usize,
    pub bound: usize,
    pub instances: usize,
    pub discrepancies: usize,
    pub injectivity_checked: usize,
    pub injectivity_violations: usize,
    pub pairs: usize,
    pub psi_closure_violations: usize,
    pub strong_closure_violations: usize,
    pub diagonals: usize,
    pub diagonal_violations: usize,
    /// Generator failures; not counted as checks.
    pub skipped: usize,
    pub counterexamples: Vec<String>,
}

impl FuzzSummary {
    pub fn passed(&self) -> bool {
        self.discrepancies == 0
            && self.injectivity_violations == 0
            && self.psi_closure_violations == 0
            && self.strong_closure_violations == 0
            && self.diagonal_violations == 0
    }
}

impl fmt::Display for FuzzSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "fuzz seed {}, count {}, size bound {}", self.seed, self.count, self.bound)?;
        writeln!(
            f,
            "instances: {} checked, {} discrepancies between the definition and the fibers",
            self.instances, self.discrepancies
        )?;
        writeln!(
            f,
            "spectral injectivity: {} PSI instances checked, {} violations",
            self.injectivity_checked, self.injectivity_violations
        )?;
        writeln!(
            f,
            "composition: {} pairs checked, {} PSI closure violations, {} strong closure violations",
            self.pairs, self.psi_closure_violations, self.strong_closure_violations
        )?;
        writeln!(f, "diagonals: {} checked, {} violations", self.diagonals, self.diagonal_violations)?;
        if self.skipped > 0 {
            writeln!(f, "skipped: {} samples the generator could not build", self.skipped)?;
        }
        for c in &self.counterexamples {
            writeln!(f, "counterexample: {c}")?;
        }
        write!(f, "result: {}", if self.passed() { "ok" } else { "FAILED" })
    }
}

#[derive(Default)]
struct Sample {
    instance: Option<(bool, Option<bool>)>,
    pair: Option<(bool, bool)>,
    diagonal: Option<bool>,
    skipped: usize,
    counterexamples: Vec<String>,
}

fn describe(u: &FiniteMorphism) -> String {
    match u.presentation() {
        Some(p) => p.to_string(),
        None => format!("{} -> {}", u.source(), u.target()),
    }
}

fn show(s: Status) -> String {
    format!("psi={} strong={}", s.psi, s.strong)
}

/// `A → B × C` from `A → B` and `A → C`, built on the tables.
fn finite_diagonal(b: &FiniteMorphism, c: &FiniteMorphism, bound: usize) -> Result<FiniteMorphism> {
    let prod = b.target().product(c.target(), bound)?;
    let m = c.target().size();
    let map = b.source().elements().map(|a| (b.apply(a) as usize * m + c.apply(a) as usize) as _).collect();
    FiniteMorphism::new(b.source_arc(), Arc::new(prod), map)
}

fn sample(i: usize, seeds: [u64; 3], bound: usize) -> Sample {
    let mut out = Sample::default();
    match random_instance(seeds[0], bound) {
        Ok(u) => {
            let bf = bruteforce_status(&u);
            let fs = fiber_status(&u);
            let agree = bf == fs;
            if !agree {
                out.counterexamples.push(format!(
                    "sample {i}, instance seed {}: {}: definition {}, fibers {}",
                    seeds[0],
                    describe(&u),
                    show(bf),
                    show(fs)
                ));
            }
            let injective = bf.psi.then(|| spectral_map_injective(&u));
            if injective == Some(false) {
                out.counterexamples.push(format!(
                    "sample {i}, instance seed {}: {} is PSI with a non-injective spectral map",
                    seeds[0],
                    describe(&u)
                ));
            }
            out.instance = Some((agree, injective));
        }
        Err(_) => out.skipped += 1,
    }
    match random_chain(seeds[1], bound).and_then(|(u, v)| Ok((u.then(&v)?, u, v))) {
        Ok((vu, u, v)) => {
            let (su, sv, svu) = (bruteforce_status(&u), bruteforce_status(&v), bruteforce_status(&vu));
            // both closed under composition, and P(v ∘ u) forces P(v)
            let psi_ok = !(su.psi && sv.psi && !svu.psi) && !(svu.psi && !sv.psi);
            let strong_ok = !(su.strong && sv.strong && !svu.strong) && !(svu.strong && !sv.strong);
            if !psi_ok || !strong_ok {
                out.counterexamples.push(format!(
                    "sample {i}, chain seed {}: u = {} ({}), v = {} ({}), v.u {}",
                    seeds[1],
                    describe(&u),
                    show(su),
                    describe(&v),
                    show(sv),
                    show(svu)
                ));
            }
            out.pair = Some((psi_ok, strong_ok));
        }
        Err(_) => out.skipped += 1,
    }
    match random_diagonal(seeds[2], bound).and_then(|(b, c)| Ok((finite_diagonal(&b, &c, bound)?, b, c))) {
        Ok((w, b, c)) => {
            let (sb, sc, sw) = (bruteforce_status(&b), bruteforce_status(&c), bruteforce_status(&w));
            let pb: BTreeSet<_> = contracted_primes(&b).into_iter().collect();
            let pc: BTreeSet<_> = contracted_primes(&c).into_iter().collect();
            let disjoint = pb.is_disjoint(&pc);
            let ok = sw.psi == (sb.psi && sc.psi && disjoint) && sw.strong == (sb.strong && sc.strong && disjoint);
            if !ok {
                out.counterexamples.push(format!(
                    "sample {i}, diagonal seed {}: b = {} ({}), c = {} ({}), disjoint images {disjoint}, diagonal {}",
                    seeds[2],
                    describe(&b),
                    show(sb),
                    describe(&c),
                    show(sc),
                    show(sw)
                ));
            }
            out.diagonal = Some(ok);
        }
        Err(_) => out.skipped += 1,
    }
    out
}

/// Deterministic for a given `(seed, count, bound)`: samples are drawn from
/// one seeded stream and merged in order.
pub fn oracle_fuzz(seed: u64, count: usize, bound: usize) -> FuzzSummary {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let seeds: Vec<[u64; 3]> = (0..count).map(|_| [rng.gen(), rng.gen(), rng.gen()]).collect();
    let samples: Vec<Sample> = seeds.par_iter().enumerate().map(|(i, s)| sample(i, *s, bound)).collect();
    let mut sum = FuzzSummary { seed, count, bound, ..Default::default() };
    for s in samples {
        if let Some((agree, inj)) = s.instance {
            sum.instances += 1;
            sum.discrepancies += usize::from(!agree);
            if let Some(inj) = inj {
                sum.injectivity_checked += 1;
                sum.injectivity_violations += usize::from(!inj);
            }
        }
        if let Some((p, st)) = s.pair {
            sum.pairs += 1;
            sum.psi_closure_violations += usize::from(!p);
            sum.strong_closure_violations += usize::from(!st);
        }
        if let Some(ok) = s.diagonal {
            sum.diagonals += 1;
            sum.diagonal_violations += usize::from(!ok);
        }
        sum.skipped += s.skipped;
        sum.counterexamples.extend(s.counterexamples);
    }
    sum
}
