use proptest::prelude::*;

use super::*;
use crate::deduce::Goal;
use crate::error::Error;
use crate::kernel::expr::PolyExpr;
use crate::psi::Status;

const ORDER_17: &str = "\
# Z[sqrt 17] inside its integral closure
ring A = ZZ[x] / (x^2 - 17)
ring B = ZZ[w] / (w^2 - w - 4)
map u : A -> B { x -> 2*w - 1 }
";

const GAUSSIAN: &str = "\
ring Z = ZZ
ring G = ZZ[i] / (i^2 + 1)
map u : Z -> G
prime P3 in Z = (3)
prime P2 in Z = (2)
check psi u
fiber u P3
";

fn run_all(text: &str) -> Vec<Report> {
    run(&parse_script(text).unwrap(), &Selection::All, &RunOptions::default())
}

#[test]
fn quadratic_script_shape() {
    let s = parse_script(ORDER_17).unwrap();
    assert_eq!(s.count(Kind::Ring), 2);
    assert_eq!(s.count(Kind::Map), 1);
    assert_eq!(s.stmts.len(), 3);
    assert_eq!(s.lines, vec![2, 3, 4]);
}

#[test]
fn empty_and_comment_only_scripts() {
    assert!(parse_script("").unwrap().stmts.is_empty());
    assert!(parse_script("# nothing\n\n   \n").unwrap().stmts.is_empty());
}

#[test]
fn dangling_parenthesis_is_located() {
    let err = parse_script("ring A = ZZ[x] / (x^2 -").unwrap_err();
    assert_eq!(err, Error::Syntax { line: 1, col: 18, msg: "unclosed '('".into() });
    let err = parse_script("ring A = ZZ[x]\nmap u : A -> A { x -> (x + 1").unwrap_err();
    assert!(matches!(err, Error::Syntax { line: 2, col: 16, .. }), "{err:?}");
}

#[test]
fn syntax_errors_carry_positions() {
    match parse_script("ring A = ZZ[x]\nbogus A").unwrap_err() {
        Error::Syntax { line, col, msg } => {
            assert_eq!((line, col), (2, 1));
            assert!(msg.contains("bogus"));
        }
        e => panic!("{e:?}"),
    }
    match parse_script("ring A = ZZ\ncheck psu A").unwrap_err() {
        Error::Syntax { line, col, .. } => assert_eq!((line, col), (2, 7)),
        e => panic!("{e:?}"),
    }
    assert!(matches!(parse_script("ring A = ZZ extra"), Err(Error::Syntax { line: 1, col: 13, .. })));
    assert!(matches!(parse_script("ring A = Fp(4"), Err(Error::Syntax { line: 1, col: 12, .. })));
}

#[test]
fn names_resolve_in_order() {
    assert!(matches!(parse_script("check psi u"), Err(Error::UnknownName(_))));
    let late = "ring A = ZZ\ncheck psi u\nmap u : A -> A";
    assert!(matches!(parse_script(late), Err(Error::UnknownName(n)) if n.contains("line 2")));
    assert!(matches!(parse_script("ring A = ZZ\nring A = QQ"), Err(Error::DuplicateName(_))));
    assert!(matches!(parse_script("ring A = ZZ\ncheck psi A"), Err(Error::Syntax { .. })));
    assert!(matches!(
        parse_script("ring A = ZZ\nmap u : A -> A\nexpr e = compose(u, v)"),
        Err(Error::UnknownName(_))
    ));
}

#[test]
fn every_statement_form_round_trips() {
    let text = "\
ring A = ZZ[x, y] / (x^2 - y, 3*x*y + 1)
ring Q = QQ
ring F = Fp(5)[t] / (t^2 - 2)
ring Z = ZZ
module M over Z = [m] / (3*m)
map u : Z -> A
map v : A -> A { x -> -x, y -> (x - 1)^2 }
prime P in A = (2, x + 1)
ideal I in A = (x)
fact u finite
fact u not surjective at P
fact u spectrum {(0)} + primes except {2, 3}
fact u spectrum {(0), (7)}
fact u spectrum primes
fact u spectrum computed
fact v residue_trivial P
fact v minimal I infinite
fact v compositum u u
fact u not psi
expr e = compose(u, polyext(v))
expr f = quotient(v, I, P)
expr g = localize(v, x, x^2)
expr h = diagonal(u, u)
expr k = idealize(Z, M)
expr r = reduce(e, I)
expr b = basechange(u, u)
check epi e
check strong u
fiber v P
certify not strong e
certify epi r
sweep -31 33
fuzz 7 10 64
";
    let s = parse_script(text).unwrap();
    assert_eq!(s.stmts.len(), 33);
    let again = parse_script(&s.render()).unwrap();
    assert_eq!(again, s);
    assert_eq!(again.render(), s.render());
}

#[test]
fn gaussian_integers_fail_at_five() {
    let r = run_all(GAUSSIAN);
    assert_eq!(r.len(), 2);
    assert_eq!(r[0].verdict, "no");
    assert!(r[0].witness.as_ref().unwrap().starts_with("fiber at (5)"));
    assert_eq!(r[0].engine, Engine::Symbolic);
    assert_eq!(r[1].verdict, "Field(2)");
    assert_eq!(overall_exit(&r), 0);
}

#[test]
fn quadratic_order_fails_at_the_crucial_prime() {
    let text = format!("{ORDER_17}prime P in A = (2, x + 1)\ncheck psi u\nfiber u P\n");
    let r = run_all(&text);
    assert_eq!(r[0].verdict, "no");
    assert_eq!(r[1].verdict, "NotField");
    assert!(r[1].witness.as_ref().unwrap().contains("idempotent"));
}

#[test]
fn unsupported_sources_exit_with_two() {
    let text = "\
ring A = ZZ[x, y]
ring B = ZZ[x, y, z] / (z^2 - x*y)
map u : A -> B { x -> x, y -> y }
check psi u
check strong u
";
    let r = run_all(text);
    assert_eq!(r.len(), 2, "errors are reported per command");
    assert!(r.iter().all(|x| x.verdict == "error"));
    assert_eq!(overall_exit(&r), 2);
}

#[test]
fn failing_declarations_are_reported() {
    let text = "\
ring A = ZZ[x] / (x^2 + 1)
prime P in A = (x)
map u : A -> A { x -> x^2 }
ring F = Fp(6)
";
    let r = run_all(text);
    assert_eq!(r.len(), 3);
    assert!(r[0].witness.as_ref().unwrap().contains("not proper") || r[0].witness.as_ref().unwrap().contains("prime"));
    assert!(r[1].witness.as_ref().unwrap().contains("relation not preserved"));
    assert!(r[2].witness.as_ref().unwrap().contains("prime modulus"));
    assert!(r.iter().all(|x| x.exit == 1 && x.engine == Engine::Script));
}

#[test]
fn exit_codes_follow_the_error_class() {
    assert_eq!(exit_code(&Error::UnsupportedFiber("x".into())), 2);
    assert_eq!(exit_code(&Error::UnsupportedSource("x".into())), 2);
    assert_eq!(exit_code(&Error::ResourceLimit("x".into())), 3);
    assert_eq!(exit_code(&Error::TooLarge { size: 9000, bound: 4096 }), 3);
    assert_eq!(exit_code(&Error::NotPrime("x".into())), 1);
    assert_eq!(overall_exit(&[]), 0);
}

#[test]
fn certify_through_a_script() {
    let text = "\
ring Z = ZZ
ring G = ZZ[i] / (i^2 + 1)
map u : Z -> G
prime P2 in Z = (2)
fact u finite
fact u not surjective at P2
certify not strong u
";
    let r = run_all(text);
    assert_eq!(r.len(), 1);
    assert_eq!(r[0].verdict, "proved");
    assert_eq!(r[0].engine, Engine::Deduction);
    assert!(r[0].trace[0].contains("Corollary 300"));
    assert!(r[0].witness.is_none(), "every premise was computed");
    let s = parse_script(text).unwrap();
    let r = certify_script(&s, None, Goal::NotStrong, &RunOptions::default());
    assert_eq!(r.last().unwrap().verdict, "proved");
    let r = certify_script(&s, Some("u"), Goal::Psi, &RunOptions::default());
    assert_eq!(r.last().unwrap().verdict, "refuted");
}

#[test]
fn facts_apply_in_script_order() {
    let text = "\
ring Z = ZZ
ring G = ZZ[i] / (i^2 + 1)
map u : Z -> G
certify not strong u
fact u not surjective
fact u finite
certify not strong u
";
    let r = run_all(text);
    assert_eq!(r.len(), 2);
    assert_eq!(r[1].verdict, "proved");
}

#[test]
fn contradicted_facts_are_errors() {
    let text = "\
ring Z = ZZ
ring G = ZZ[i] / (i^2 + 1)
map u : Z -> G
fact u surjective
";
    let r = run_all(text);
    assert_eq!(r.len(), 1);
    assert!(r[0].witness.as_ref().unwrap().contains("contradicted"));
}

#[test]
fn selection_limits_commands() {
    let s = parse_script(GAUSSIAN).unwrap();
    assert!(run(&s, &Selection::DeclarationsOnly, &RunOptions::default()).is_empty());
    let only = run(&s, &Selection::Only(vec![6]), &RunOptions::default());
    assert_eq!(only.len(), 1);
    assert_eq!(only[0].command, "fiber u P3");
}

#[test]
fn json_and_text_carry_the_same_content() {
    for r in run_all(GAUSSIAN) {
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        let text = r.to_string();
        assert!(text.contains(v["command"].as_str().unwrap()));
        assert!(text.contains(v["verdict"].as_str().unwrap()));
        if let Some(w) = v["witness"].as_str() {
            assert!(text.contains(w));
        }
        for t in v["trace"].as_array().unwrap() {
            assert!(text.contains(t.as_str().unwrap()));
        }
        assert!(text.contains(&format!("{} ms", v["millis"])));
        assert!(text.contains(v["engine"].as_str().unwrap()));
    }
}

#[test]
fn sweep_marks_five_mod_eight() {
    let rows = sweep_quadratic(-31, 33, false).unwrap();
    let yes: Vec<i64> = rows.iter().filter(|r| r.verdict == Status::Yes).map(|r| r.d).collect();
    assert_eq!(yes, vec![-19, -11, -3, 5, 13, 21, 29]);
    assert!(rows.iter().all(|r| r.verdict != Status::Unknown));
    assert!(!rows.iter().any(|r| r.d == -27 || r.d == 9 || r.d == 25), "non-squarefree or square d are skipped");
    assert_eq!(rows, sweep_quadratic(-31, 33, true).unwrap());
    let one = sweep_quadratic(5, 5, false).unwrap();
    assert_eq!(to_csv(&one), "d,residue_mod_8,verdict\n5,5,yes\n");
    assert_eq!(to_csv(&sweep_quadratic(17, 17, false).unwrap()), "d,residue_mod_8,verdict\n17,1,no\n");
    assert_eq!(to_csv(&sweep_quadratic(2, 4, false).unwrap()), "d,residue_mod_8,verdict\n");
}

#[test]
fn sweep_command_in_a_script() {
    let r = run_all("sweep 5 17");
    assert_eq!(r[0].verdict, "2 yes, 1 no");
    assert_eq!(r[0].trace, vec!["d,residue_mod_8,verdict", "5,5,yes", "13,5,yes", "17,1,no"]);
}

#[test]
fn fuzz_is_deterministic() {
    let a = oracle_fuzz(7, 12, 64);
    let b = oracle_fuzz(7, 12, 64);
    assert_eq!(a.to_string(), b.to_string());
    assert!(a.passed(), "{a}");
    assert_eq!(a.instances + a.pairs + a.diagonals + a.skipped, 36);
    let tiny = oracle_fuzz(1, 1, 2);
    assert!(tiny.passed(), "{tiny}");
    assert!(tiny.to_string().ends_with("result: ok"));
}

#[test]
fn fuzz_command_in_a_script() {
    let r = run_all("fuzz 3 5 32");
    assert_eq!(r[0].verdict, "ok");
    assert_eq!(r[0].trace.last().unwrap(), "result: ok");
}

fn poly_expr() -> impl Strategy<Value = PolyExpr> {
    let leaf = prop_oneof![
        (0u32..50).prop_map(|n| PolyExpr::Int(n.into())),
        prop::sample::select(vec!["x", "y", "w"]).prop_map(|v| PolyExpr::Var(v.into())),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|a| PolyExpr::Neg(Box::new(a))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| PolyExpr::Add(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| PolyExpr::Sub(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| PolyExpr::Mul(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| PolyExpr::Div(Box::new(a), Box::new(b))),
            (inner, 0u32..4).prop_map(|(a, e)| PolyExpr::Pow(Box::new(a), e)),
        ]
    })
}

fn expr_spec() -> impl Strategy<Value = ExprSpec> {
    let leaf = prop::sample::select(vec!["u", "v"]).prop_map(|n| ExprSpec::Name(n.into()));
    leaf.prop_recursive(3, 12, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| ExprSpec::Compose(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| ExprSpec::Diagonal(Box::new(a), Box::new(b))),
            inner.clone().prop_map(|a| ExprSpec::PolyExt(Box::new(a))),
            inner.clone().prop_map(|a| ExprSpec::Reduce(Box::new(a), "I".into())),
            inner.clone().prop_map(|a| ExprSpec::Quotient(Box::new(a), "I".into(), "P".into())),
            inner.clone().prop_map(|a| ExprSpec::BaseChange(Box::new(a), "u".into())),
            (inner, poly_expr(), poly_expr()).prop_map(|(a, s, t)| ExprSpec::Localize(Box::new(a), s, t)),
        ]
    })
}

fn spectrum() -> impl Strategy<Value = SpectrumSpec> {
    (any::<bool>(), prop::collection::btree_set(prop::sample::select(vec![2u64, 3, 5, 7, 11]), 0..3), any::<bool>())
        .prop_map(|(generic, primes, cofinite)| SpectrumSpec::Primes {
            generic: generic || (!cofinite && primes.is_empty()),
            primes: primes.into_iter().collect(),
            cofinite,
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rendering_round_trips(
        rels in prop::collection::vec(poly_expr(), 0..3),
        img in poly_expr(),
        gens in prop::collection::vec(poly_expr(), 1..3),
        e in expr_spec(),
        spec in spectrum(),
        d in -100i64..100,
    ) {
        let s = Script {
            stmts: vec![
                Stmt::Ring { name: "A".into(), base: Base::ZZ, vars: vec!["x".into(), "y".into()], rels: rels.clone() },
                Stmt::Ring { name: "B".into(), base: Base::Fp(7), vars: vec!["w".into()], rels },
                Stmt::Map { name: "u".into(), source: "A".into(), target: "A".into(),
                    images: vec![("x".into(), img.clone()), ("y".into(), img)] },
                Stmt::Map { name: "v".into(), source: "A".into(), target: "B".into(), images: Vec::new() },
                Stmt::Ideal { name: "I".into(), ring: "A".into(), gens: gens.clone() },
                Stmt::Prime { name: "P".into(), ring: "A".into(), gens },
                Stmt::Fact { target: "u".into(), fact: FactSpec::Spectrum(spec) },
                Stmt::Expr { name: "e".into(), expr: e },
                Stmt::Certify { goal: Goal::NotStrong, target: "e".into() },
                Stmt::Sweep { from: d, to: d + 10 },
            ],
            lines: Vec::new(),
        };
        let text = s.render();
        let back = parse_script(&text).map_err(|err| TestCaseError::fail(format!("{err}\n{text}")))?;
        prop_assert_eq!(back, s);
    }
}
