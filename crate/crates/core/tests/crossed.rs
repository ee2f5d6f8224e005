use qcross::action::{
    build_crossed_product, expectation_report, extend_commuting_map, validate_action, ActionContext,
};
use qcross::catalog;

const TOL: f64 = 1e-9;

fn context(name: &str) -> ActionContext {
    ActionContext::new(catalog::action(name).unwrap(), TOL).unwrap()
}

fn crossed_shape(name: &str) -> (usize, Vec<usize>) {
    let ctx = context(name);
    let cp = build_crossed_product(&ctx.rep, &ctx.dual, TOL).unwrap();
    assert!(cp.report.all_pass(), "{name}: {:?}", cp.report.failures());
    (cp.dim(), cp.wedderburn.rep.shape().blocks().to_vec())
}

#[test]
fn every_catalog_action_validates() {
    for name in catalog::ACTIONS.iter().filter(|n| n.starts_with("action:")) {
        let ctx = context(name);
        let rv = ctx.rep.validate(&ctx.qg, TOL);
        assert!(rv.all_pass(), "{name}: {:?}", rv.failures());
        for (g, gamma) in &ctx.data.commuting {
            let r = qcross::action::commutation_residual(&ctx.data.qg, &ctx.data.alpha, gamma).unwrap();
            assert!(r < TOL, "{name}/{g}: {r}");
        }
    }
}

#[test]
fn z2_swap_crossed_product_is_m2() {
    assert_eq!(crossed_shape("action:z2_swap"), (4, vec![2]));
}

#[test]
fn regular_actions_give_full_matrix_algebras() {
    assert_eq!(crossed_shape("action:regular_z2"), (4, vec![2]));
    assert_eq!(crossed_shape("action:regular_s3"), (36, vec![6]));
    assert_eq!(crossed_shape("action:regular_group_alg_s3"), (36, vec![6]));
    assert_eq!(crossed_shape("action:regular_kp"), (64, vec![8]));
}

#[test]
fn z2_inner_action_on_m2() {
    assert_eq!(crossed_shape("action:z2_ad_m2"), (8, vec![2, 2]));
}

#[test]
fn translation_z3_is_m3() {
    assert_eq!(crossed_shape("action:translation_z3"), (9, vec![3]));
}

#[test]
fn trivial_action_gives_dual() {
    let ctx = context("action:trivial_z2");
    let cp = build_crossed_product(&ctx.rep, &ctx.dual, TOL).unwrap();
    assert_eq!(cp.dim(), ctx.dual.dim());
    assert_eq!(cp.wedderburn.rep.shape().blocks(), ctx.dual.shape().blocks());
    let (d, blocks) = crossed_shape("action:trivial_kp");
    assert_eq!(d, 8);
    assert_eq!(blocks, vec![1, 1, 1, 1, 2]);
}

#[test]
fn expectation_certificates() {
    for name in ["action:z2_swap", "action:z2_ad_m2", "action:translation_z3", "action:regular_s3"] {
        let ctx = context(name);
        let cp = build_crossed_product(&ctx.rep, &ctx.dual, TOL).unwrap();
        let rep = expectation_report(&ctx.rep, &cp, TOL);
        assert!(rep.all_pass(), "{name}: {:?}", rep.failures());
    }
}

#[test]
fn canonical_extensions_agree_with_slice_route() {
    for name in ["action:z2_swap", "action:z2_ad_m2", "action:translation_z3", "action:regular_z2"] {
        let ctx = context(name);
        let cp = build_crossed_product(&ctx.rep, &ctx.dual, TOL).unwrap();
        for (g, gamma) in &ctx.data.commuting {
            let ext = extend_commuting_map(&ctx.data.qg, &ctx.data.alpha, &ctx.rep, &ctx.dual, &cp, gamma, TOL).unwrap();
            assert!(ext.consistency < 1e-8, "{name}/{g}");
            assert!(ext.slice_agreement < 1e-8, "{name}/{g}");
        }
    }
}

#[test]
fn non_commuting_map_is_rejected() {
    let ctx = context("action:z2_ad_m2");
    let cp = build_crossed_product(&ctx.rep, &ctx.dual, TOL).unwrap();
    // Ad of a Hadamard rotation
    let m2 = ctx.data.target.clone();
    let h = qcross::linalg::CMat::from_fn(2, 2, |r, s| {
        qcross::linalg::cr(if r == 1 && s == 1 { -1.0 } else { 1.0 } / 2f64.sqrt())
    });
    let gamma = qcross::algebra::LinearMap::from_fn(&m2, &m2, |b| {
        qcross::algebra::Element::from_blocks(&m2, vec![&h * b.block(0) * h.adjoint()]).unwrap()
    })
    .unwrap();
    let err = extend_commuting_map(&ctx.data.qg, &ctx.data.alpha, &ctx.rep, &ctx.dual, &cp, &gamma, TOL);
    assert!(matches!(err, Err(qcross::Error::NotCommuting(_))));
}

#[test]
fn collapse_counterexamples() {
    for name in ["counterexample:character_collapse", "counterexample:idempotent_collapse"] {
        let data = catalog::action(name).unwrap();
        let rep = validate_action(&data.qg, &data.target, &data.alpha, TOL).unwrap();
        assert!(rep.get("coaction").unwrap().pass, "{name}");
        assert!(rep.get("homomorphism").unwrap().pass, "{name}");
        assert!(!rep.get("counit-invariance").unwrap().pass, "{name}");
        assert!(!rep.get("injective").unwrap().pass, "{name}");
        assert!(rep.get("counit-invariance-iff-injective").unwrap().pass, "{name}");
        assert!(ActionContext::new(data, TOL).is_err());
    }
}
