//! Invariants across the public API.

use proptest::prelude::*;

use psikit::finring::{bruteforce_status, fiber_status, random_instance};
use psikit::kernel::{groebner, parse_poly, Domain, IdealGens, PolyRing};
use psikit::psi::{quadratic_order_psi, QuadraticInstance};

fn names() -> Vec<String> {
    ["x", "y"].iter().map(|s| s.to_string()).collect()
}

fn domain() -> impl Strategy<Value = Domain> {
    prop_oneof![Just(Domain::Int), Just(Domain::Rat), Just(Domain::ModP(5))]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    // Every combination a*f + b*g of the generators reduces to zero.
    #[test]
    fn ideal_members_reduce_to_zero(
        d in domain(),
        c in -3i64..=3, e in -3i64..=3,
        a in "(x|y|x\\*y|x - 1|2\\*y \\+ 3)", b in "(1|x|y\\^2|x - y)",
    ) {
        let ring = PolyRing::new(2, d);
        let f = parse_poly(&format!("x^2 - {c}*y"), &names(), ring).unwrap();
        let g = parse_poly(&format!("x*y + {e}"), &names(), ring).unwrap();
        let gb = groebner(&IdealGens::new(ring, vec![f.clone(), g.clone()]).unwrap()).unwrap();
        let pa = parse_poly(&a, &names(), ring).unwrap();
        let pb = parse_poly(&b, &names(), ring).unwrap();
        let m = pa.mul(&f).add(&pb.mul(&g));
        prop_assert!(gb.contains(&m).unwrap());
        prop_assert!(gb.contains(&f).unwrap() && gb.contains(&g).unwrap());
    }

    // The fiber classification agrees with the definition on finite rings.
    #[test]
    fn finite_fibers_match_the_definition(seed in any::<u64>()) {
        if let Ok(u) = random_instance(seed, 64) {
            prop_assert_eq!(bruteforce_status(&u), fiber_status(&u));
        }
    }

    #[test]
    fn quadratic_orders_follow_five_mod_eight(k in -200i64..200) {
        let d = 4 * k + 1;
        if let Ok(inst) = QuadraticInstance::new(d) {
            let v = quadratic_order_psi(inst).unwrap();
            prop_assert_eq!(v.is_yes(), d.rem_euclid(8) == 5, "d = {}", d);
        }
    }
}
