use proptest::prelude::*;

use super::*;
use crate::finring::{self, random_chain, random_diagonal, FiniteMorphism};
use crate::kernel::Domain;
use crate::psi::{decide_psi, decide_strong, quadratic_order, strong_at, QuadraticInstance, DEFAULT_SEARCH_BOUND};
use crate::rings::{base_prime, FpAlgebra, RingMorphism};

fn structure(b: &FpAlgebra) -> RingMorphism {
    RingMorphism::structure(Domain::Int, b).unwrap()
}

fn zz() -> FpAlgebra {
    FpAlgebra::base_ring(Domain::Int)
}

fn zi() -> FpAlgebra {
    FpAlgebra::parse(Domain::Int, &["i"], &["i^2 + 1"]).unwrap()
}

fn f2() -> FpAlgebra {
    FpAlgebra::parse(Domain::Int, &[], &["2"]).unwrap()
}

fn half() -> RingMorphism {
    structure(&FpAlgebra::parse(Domain::Int, &["y"], &["2*y - 1"]).unwrap())
}

fn with(e: MorphismExpr, tags: Vec<FactTag>) -> MorphismExpr {
    tags.into_iter().fold(e, |e, t| attach_fact(e, Fact::asserted(t)).unwrap())
}

fn with_image(e: MorphismExpr) -> MorphismExpr {
    let u = e.morphism().presented().unwrap().clone();
    let img = spectral_image(&u).unwrap().unwrap();
    attach_fact(e, Fact::computed(FactTag::SpectraImage(img), "leading coefficients")).unwrap()
}

fn proved(c: Certificate) -> ProofTrace {
    match c {
        Certificate::Proved(t) => t,
        other => panic!("expected a proof, got {other:?}"),
    }
}

fn rules(t: &ProofTrace) -> Vec<&str> {
    t.steps.iter().map(|s| s.rule.as_str()).collect()
}

#[test]
fn fraction_map_then_field_extension() {
    let q = FpAlgebra::base_ring(Domain::Rat);
    let u = with(MorphismExpr::atom("u", structure(&q)), vec![FactTag::FractionMap]);
    let qi = FpAlgebra::parse(Domain::Rat, &["i"], &["i^2 + 1"]).unwrap();
    let vm = RingMorphism::structure(Domain::Rat, &qi).unwrap();
    assert!(decide_psi(&vm, DEFAULT_SEARCH_BOUND).unwrap().is_yes());
    let v = attach_fact(MorphismExpr::atom("v", vm), Fact::computed(FactTag::KnownPsi, "decide_psi")).unwrap();
    let e = MorphismExpr::compose(u, v).unwrap();
    let t = proved(certify(&e, Goal::Psi).unwrap());
    assert_eq!(rules(&t), ["R1", "R3"]);
    assert!(t.conditional);
    let text = explain(&t).unwrap();
    assert_eq!(
        text,
        "step 1: [R1] u is PSI by Proposition 9 (iv) from steps [] given u: fraction map (asserted)\n\
         step 2: [R3] compose(u, v) is PSI by Theorem 8 (i) from steps [1] given v: PSI (computed by decide_psi)\n"
    );
}

#[test]
fn finite_not_surjective_is_not_strong() {
    let um = structure(&zi());
    let p2 = base_prime(&zz(), 2).unwrap();
    let ns = non_surjectivity_from_fiber(&um, &p2).unwrap().expect("fiber of dimension 2");
    assert!(!ns.is_asserted());
    let e = attach_fact(with(MorphismExpr::atom("u", um.clone()), vec![FactTag::Finite]), ns).unwrap();
    let t = proved(certify(&e, Goal::NotStrong).unwrap());
    assert_eq!(rules(&t), ["R11"]);
    assert_eq!(t.steps[0].citation, "Corollary 300");
    let p0 = base_prime(&zz(), 0).unwrap();
    assert!(!strong_at(&um, &p0).unwrap().is_yes());
    assert!(matches!(certify(&e, Goal::Strong).unwrap(), Certificate::Refuted(_)));
}

#[test]
fn computed_finiteness_refutes_strong() {
    let e = MorphismExpr::atom("u", structure(&zi()));
    let c = certify(&e, Goal::NotStrong).unwrap();
    let t = proved(c);
    assert!(!t.conditional);
}

#[test]
fn polynomial_extension_of_strong() {
    let f2m = structure(&f2());
    let d = crate::rings::diagonal(&half(), &f2m).unwrap().1;
    assert!(decide_strong(&d, DEFAULT_SEARCH_BOUND).unwrap().is_yes());
    let a = attach_fact(MorphismExpr::atom("d", d), Fact::computed(FactTag::KnownStrong, "decide_strong")).unwrap();
    let e = MorphismExpr::poly_ext(a).unwrap();
    let t = proved(certify(&e, Goal::Psi).unwrap());
    assert_eq!(rules(&t), ["R6"]);
    assert_eq!(t.steps[0].citation, "Theorem 16 (iv)");
    assert!(!t.conditional);
}

#[test]
fn polynomial_extension_of_non_strong_is_refuted() {
    let q = FpAlgebra::base_ring(Domain::Rat);
    let qi = FpAlgebra::parse(Domain::Rat, &["i"], &["i^2 + 1"]).unwrap();
    let u = RingMorphism::structure(Domain::Rat, &qi).unwrap();
    assert_eq!(u.source(), &q);
    let e = MorphismExpr::poly_ext(MorphismExpr::atom("u", u)).unwrap();
    match certify(&e, Goal::Psi).unwrap() {
        Certificate::Refuted(t) => assert!(t.steps.iter().any(|s| s.rule == "R6")),
        other => panic!("{other:?}"),
    }
}

fn diagonal_expr() -> MorphismExpr {
    let b = with_image(with(MorphismExpr::atom("half", half()), vec![FactTag::FractionMap]));
    let c = with_image(with(MorphismExpr::atom("f2", structure(&f2())), vec![FactTag::Surjective]));
    MorphismExpr::diagonal(b, c).unwrap()
}

#[test]
fn diagonal_of_epimorphisms() {
    let e = diagonal_expr();
    let t = proved(certify(&e, Goal::Strong).unwrap());
    assert_eq!(rules(&t), ["R2", "R2", "R9"]);
    let text = explain(&t).unwrap();
    for cite in ["Proposition 9 (iv)", "Proposition 14", "Proposition 170"] {
        assert!(text.contains(cite), "{text}");
    }
    assert!(text.contains("spectrum image {(0)} + primes except {2}"), "{text}");
    assert!(text.contains("spectrum image {(2)}"), "{text}");
    proved(certify(&e, Goal::Psi).unwrap());
    proved(certify(&e, Goal::Epi).unwrap());
}

#[test]
fn overlapping_spectra_refute_the_diagonal() {
    let third = FpAlgebra::parse(Domain::Int, &["y"], &["3*y - 1"]).unwrap();
    let b = with_image(MorphismExpr::atom("third", structure(&third)));
    let c = with_image(MorphismExpr::atom("zi", structure(&zi())));
    let e = MorphismExpr::diagonal(b, c).unwrap();
    match certify(&e, Goal::Psi).unwrap() {
        Certificate::Refuted(t) => {
            assert_eq!(rules(&t), ["R9"]);
            assert!(t.steps[0].given.iter().any(|g| g.contains("(0)")));
            assert!(!t.conditional);
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn idealization_rule() {
    let m = ModulePresentation::parse(&zz(), &["m"], &["3*m"]).unwrap();
    let e = MorphismExpr::idealize("i3", zz(), m).unwrap();
    match certify(&e, Goal::Strong).unwrap() {
        Certificate::Refuted(t) => assert_eq!(rules(&t), ["R10"]),
        other => panic!("{other:?}"),
    }
    let zero = ModulePresentation::parse(&zz(), &["m"], &["m"]).unwrap();
    let e = MorphismExpr::idealize("i0", zz(), zero).unwrap();
    assert_eq!(rules(&proved(certify(&e, Goal::Strong).unwrap())), ["R10"]);
    let two = ModulePresentation::parse(&zz(), &["m", "n"], &["2*m", "3*n", "m + n"]).unwrap();
    let e = MorphismExpr::idealize("i6", zz(), two).unwrap();
    assert_eq!(rules(&proved(certify(&e, Goal::Strong).unwrap())), ["R10"]);
}

#[test]
fn common_ideal_rule() {
    let u = quadratic_order(QuadraticInstance::new(5).unwrap()).unwrap();
    let i = IdealSpec::parse(u.target(), &["2"]).unwrap();
    let inner = attach_fact(MorphismExpr::atom("u", u), Fact::asserted(FactTag::KnownPsi)).unwrap();
    let e = MorphismExpr::common_ideal_reduce(inner, i).unwrap();
    let t = proved(certify(&e, Goal::Psi).unwrap());
    assert_eq!(rules(&t), ["R8"]);
    assert!(t.conditional);
}

#[test]
fn minimal_extension_rule() {
    let u = quadratic_order(QuadraticInstance::new(-3).unwrap()).unwrap();
    let m = IdealSpec::parse(u.source(), &["2", "x + 1"]).unwrap();
    let e = with(MorphismExpr::atom("u", u.clone()), vec![FactTag::MinimalExtension { crucial: m.clone(), finite: true }]);
    let t = proved(certify(&e, Goal::Psi).unwrap());
    assert_eq!(rules(&t), ["R14"]);
    assert!(t.conditional);
    let v = quadratic_order(QuadraticInstance::new(17).unwrap()).unwrap();
    let m = IdealSpec::parse(v.source(), &["2", "x + 1"]).unwrap();
    let e = with(MorphismExpr::atom("v", v), vec![FactTag::MinimalExtension { crucial: m, finite: true }]);
    assert!(matches!(certify(&e, Goal::Psi).unwrap(), Certificate::Refuted(_)));
}

#[test]
fn no_rule_means_inconclusive() {
    let u = structure(&zi());
    let i = IdealSpec::parse(u.source(), &["3"]).unwrap();
    let j = IdealSpec::parse(u.target(), &["3"]).unwrap();
    let e = MorphismExpr::quotient(MorphismExpr::atom("u", u), i, j).unwrap();
    assert_eq!(certify(&e, Goal::Psi).unwrap(), Certificate::Inconclusive);
}

#[test]
fn atoms_are_decided_directly() {
    let e = MorphismExpr::atom("u", structure(&zi()));
    match certify(&e, Goal::Psi).unwrap() {
        Certificate::Refuted(t) => {
            assert_eq!(rules(&t), ["R0"]);
            assert!(t.steps[0].given[0].contains("(5)"), "{:?}", t.steps[0]);
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn attach_fact_checks() {
    let e = MorphismExpr::atom("u", structure(&zi()));
    let e = attach_fact(e, Fact::asserted(FactTag::Finite)).unwrap();
    assert_eq!(e.facts()[0].provenance, Provenance::Computed("finiteness check".into()));
    let e2 = attach_fact(e.clone(), Fact::asserted(FactTag::FractionMap)).unwrap();
    assert_eq!(e2.facts().len(), 2);
    let z4 = FpAlgebra::parse(Domain::Int, &[], &["4"]).unwrap();
    let onto = RingMorphism::new(z4, f2(), Vec::new()).unwrap();
    let f = FiniteMorphism::from_ring_morphism(&onto, 64).unwrap();
    let s = attach_fact(MorphismExpr::finite_atom("s", f.clone()), Fact::asserted(FactTag::Surjective)).unwrap();
    assert_eq!(s.facts()[0].provenance, Provenance::Computed("exhaustion".into()));
    let ns = attach_fact(MorphismExpr::finite_atom("s", f), Fact::asserted(FactTag::NotSurjective));
    assert!(matches!(ns, Err(Error::MeaninglessFact(_))));
    let p = crate::rings::verify_prime(&IdealSpec::parse(&zi(), &["i + 2"]).unwrap()).unwrap();
    let r = attach_fact(e.clone(), Fact::asserted(FactTag::ResidueTrivialAt(p)));
    assert!(matches!(r, Err(Error::MeaninglessFact(_))));
    let c = MorphismExpr::compose(e.clone(), MorphismExpr::atom("id", RingMorphism::identity(&zi()))).unwrap();
    assert!(matches!(attach_fact(c, Fact::asserted(FactTag::Finite)), Err(Error::MeaninglessFact(_))));
    let q = MorphismExpr::atom("q", structure(&FpAlgebra::base_ring(Domain::Rat)));
    assert!(attach_fact(q, Fact::asserted(FactTag::FractionMap)).is_ok());
}

#[test]
fn ill_typed_expressions() {
    let u = MorphismExpr::atom("u", structure(&zi()));
    let v = MorphismExpr::atom("v", structure(&f2()));
    assert!(matches!(MorphismExpr::compose(u.clone(), v.clone()), Err(Error::IllTypedExpression(_))));
    let w = MorphismExpr::atom("w", RingMorphism::identity(&zi()));
    assert!(matches!(MorphismExpr::diagonal(u, w), Err(Error::IllTypedExpression(_))));
}

#[test]
fn explain_edge_cases() {
    let empty = ProofTrace { goal: "x is PSI".into(), steps: Vec::new(), conditional: false };
    assert!(matches!(explain(&empty), Err(Error::InvalidTrace(_))));
    let one = ProofTrace {
        goal: "u is PSI".into(),
        steps: vec![TraceStep {
            rule: "R1".into(),
            citation: "Proposition 9 (iii)".into(),
            conclusion: "u is PSI".into(),
            premises: Vec::new(),
            given: vec!["u: surjective (asserted)".into()],
        }],
        conditional: true,
    };
    let text = explain(&one).unwrap();
    assert_eq!(text.lines().count(), 1);
    assert!(text.contains("Proposition 9"));
    let mut dangling = one.clone();
    dangling.steps[0].premises = vec![2];
    assert!(matches!(explain(&dangling), Err(Error::InvalidTrace(_))));
}

#[test]
fn traces_replay_identically() {
    let a = explain(certify(&diagonal_expr(), Goal::Strong).unwrap().trace().unwrap()).unwrap();
    let b = explain(certify(&diagonal_expr(), Goal::Strong).unwrap().trace().unwrap()).unwrap();
    assert_eq!(a, b);
}

#[test]
fn fixed_goal_names() {
    for g in [Goal::Psi, Goal::Strong, Goal::Epi, Goal::NotPsi, Goal::NotStrong] {
        assert_eq!(g.to_string().parse::<Goal>().unwrap(), g);
    }
    assert!("maybe".parse::<Goal>().is_err());
}

/// Whether a certificate is consistent with the exhaustive status.
fn agrees(c: &Certificate, holds: bool) -> bool {
    match c {
        Certificate::Proved(_) => holds,
        Certificate::Refuted(_) => !holds,
        Certificate::Inconclusive => true,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn composition_certificates_are_sound(seed in 0u64..100_000) {
        let (u, v) = random_chain(seed, 64).unwrap();
        let truth = finring::bruteforce_status(&u.then(&v).unwrap());
        let e = MorphismExpr::compose(MorphismExpr::finite_atom("u", u), MorphismExpr::finite_atom("v", v)).unwrap();
        let psi = certify(&e, Goal::Psi).unwrap();
        prop_assert!(agrees(&psi, truth.psi));
        let strong = certify(&e, Goal::Strong).unwrap();
        prop_assert!(agrees(&strong, truth.strong));
        if matches!(strong, Certificate::Proved(_)) {
            prop_assert!(matches!(certify(&e, Goal::Psi).unwrap(), Certificate::Proved(_)));
        }
    }

    #[test]
    fn diagonal_certificates_are_sound(seed in 0u64..100_000) {
        let (b, c) = random_diagonal(seed, 64).unwrap();
        let (Some(ub), Some(uc)) = (b.presentation().cloned(), c.presentation().cloned()) else { return Ok(()) };
        let e = MorphismExpr::diagonal(MorphismExpr::atom("b", ub), MorphismExpr::atom("c", uc)).unwrap();
        let flat = e.morphism().finite().unwrap();
        let truth = finring::bruteforce_status(&flat);
        prop_assert!(agrees(&certify(&e, Goal::Psi).unwrap(), truth.psi));
        prop_assert!(agrees(&certify(&e, Goal::Strong).unwrap(), truth.strong));
    }
}
