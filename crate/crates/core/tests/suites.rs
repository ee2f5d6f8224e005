use qcross::catalog;
use qcross::suites::{run_suite, run_validate, Suite, SuiteOptions, XiKind};

fn docs(names: &[&str]) -> Vec<qcross::format::SpecDocument> {
    names.iter().map(|n| catalog::document(n).unwrap()).collect()
}

fn opts() -> SuiteOptions {
    SuiteOptions {
        threads: 1,
        ..SuiteOptions::default()
    }
}

#[test]
fn schur_on_regular_z2_with_exact_vector() {
    let o = SuiteOptions {
        vectors: vec![XiKind::Folner],
        ..opts()
    };
    let r = run_suite(Suite::Schur, &docs(&["action:regular_z2"]), &o).unwrap();
    assert!(r.body.pass);
    let max = r.body.records.iter().map(|c| c.residual).fold(0.0, f64::max);
    assert!(max <= 1e-9, "{max:e}");
    assert!(r.body.records.iter().any(|c| c.check == "action:regular_z2/xi=folner/schur"));
}

#[test]
fn entropy_ledger_on_swap_to_horizon_six() {
    let r = run_suite(Suite::EntropyLedger, &docs(&["action:z2_swap"]), &opts()).unwrap();
    assert!(r.body.pass, "{:?}", r.body.records.iter().filter(|c| !c.pass).collect::<Vec<_>>());
    assert!(r.body.records.iter().any(|c| c.check.ends_with("ledger-c-folner:N=6:eps=0.5")));
}

#[test]
fn corrupted_quantum_group_fails_by_name() {
    let r = run_suite(Suite::QgAxioms, &docs(&["corrupt:fn_group:Z2"]), &opts()).unwrap();
    assert!(!r.body.pass);
    let failed: Vec<&str> = r.body.records.iter().filter(|c| !c.pass).map(|c| c.check.as_str()).collect();
    assert!(failed.contains(&"corrupt:fn_group:Z2/coassociativity"), "{failed:?}");
}

#[test]
fn corrupted_action_and_cocycle_fail() {
    let r = run_validate(&docs(&["corrupt:action:z2_swap", "corrupt:cocycle:z2z2_bichar"]), &opts()).unwrap();
    assert!(!r.body.pass);
    let failed = |p: &str| r.body.records.iter().any(|c| !c.pass && c.check.starts_with(p));
    assert!(failed("corrupt:action:z2_swap/action/"));
    assert!(failed("corrupt:cocycle:z2z2_bichar/cocycle/"));
}

#[test]
fn suites_refuse_the_wrong_kind() {
    assert!(run_suite(Suite::Twist, &docs(&["action:z2_swap"]), &opts()).is_err());
    assert!(run_suite(Suite::Crossed, &docs(&["kac_paljutkin"]), &opts()).is_err());
}

#[test]
fn refused_constructions_become_failing_records() {
    // passes neither (invcou) nor injectivity, so the crossed product is never built
    let r = run_suite(Suite::Crossed, &docs(&["counterexample:character_collapse"]), &opts()).unwrap();
    assert!(!r.body.pass);
    assert!(r.body.records.iter().any(|c| c.check.ends_with("action/injective") && !c.pass));
}

#[test]
fn bodies_do_not_depend_on_threads() {
    let names = ["action:z2_swap", "action:trivial_z2", "action:translation_z3"];
    let a = run_suite(Suite::Crossed, &docs(&names), &opts()).unwrap();
    let b = run_suite(
        Suite::Crossed,
        &docs(&names),
        &SuiteOptions {
            threads: 3,
            ..SuiteOptions::default()
        },
    )
    .unwrap();
    assert_eq!(a.body_json(), b.body_json());
    let ids: Vec<&String> = a.body.records.iter().map(|c| &c.check).collect();
    let mut sorted = ids.clone();
    sorted.sort();
    assert_eq!(ids, sorted);
}

#[test]
fn bicharacter_twist_values() {
    let r = run_suite(Suite::Twist, &docs(&["cocycle:z2z2_bichar"]), &opts()).unwrap();
    assert!(r.body.pass);
    assert_eq!(r.body.values["cocycle:z2z2_bichar/dim"], 4.0);
    assert_eq!(r.body.values["cocycle:z2z2_bichar/center-dim"], 1.0);
}
