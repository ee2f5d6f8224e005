use proptest::prelude::*;
use qcross::action::{build_crossed_product, extend_commuting_map, ActionContext};
use qcross::algebra::{AlgebraShape, Element, LinearMap, Representation};
use qcross::catalog;
use qcross::entropy::*;
use qcross::factorization::{approximation_defect, folner_vector, FactorizationPair, FolnerVector};
use qcross::linalg::{cr, CMat};
use std::sync::Arc;

const TOL: f64 = 1e-9;

fn c2() -> Representation {
    Representation::defining(&AlgebraShape::commutative(2))
}

fn swap_op(b: &CMat) -> CMat {
    CMat::from_diagonal(&nalgebra::DVector::from_vec(vec![b[(1, 1)], b[(0, 0)]]))
}

#[test]
fn orbit_sets() {
    let r = c2();
    let omega = ObservationSet::new(vec![r.image(0).clone()]);
    assert_eq!(orbit_set(|b: &CMat| b.clone(), &omega, 5).len(), 1);
    assert_eq!(orbit_set(swap_op, &omega, 1).len(), 1);
    let two = orbit_set(swap_op, &omega, 2);
    assert_eq!(two.len(), 2);
    assert!((&two.elements[1] - r.image(1)).norm() < 1e-15);
}

#[test]
fn identity_and_compression_triples() {
    let m2 = Representation::defining(&AlgebraShape::full(2));
    let cands = native_candidates(&m2, "M2", TOL);
    let omega = ObservationSet::new(m2.images().to_vec());
    let full = cands.iter().find(|t| t.n == 2).unwrap();
    assert!(triple_valid(full, &omega, 1e-12));
    assert_eq!(rcp_upper(&omega, 0.1, &cands), Some(2));

    // compression of C^2 onto the first coordinate
    let r = c2();
    let rr = Arc::new(r.clone());
    let r1 = rr.clone();
    let into: OpMap = Arc::new(move |y: &CMat| CMat::from_element(1, 1, r1.coords(y)[0]));
    let r2 = rr.clone();
    let outof: OpMap = Arc::new(move |t: &CMat| r2.image(0) * t[(0, 0)]);
    let t = CpaTriple::certify("compress", 1, &r, into, outof, TOL);
    assert!(t.certified);
    let omega = ObservationSet::new(r.images().to_vec());
    assert!((t.residual(&omega) - 1.0).abs() < 1e-12);
    assert!(!triple_valid(&t, &omega, 0.5));
}

#[test]
fn rcp_bounds_for_small_algebras() {
    let r = c2();
    let cands = native_candidates(&r, "C2", TOL);
    let omega = ObservationSet::new(r.images().to_vec());
    for eps in [0.1, 0.25, 0.5, 0.9] {
        assert!(rcp_upper(&omega, eps, &cands).unwrap() <= 2);
    }
    // the trace triple misses each minimal projection by 1/2
    assert_eq!(rcp_upper(&omega, 0.5, &cands), Some(2));
    assert_eq!(rcp_upper(&omega, 0.6, &cands), Some(1));

    let ctx = ActionContext::new(catalog::action("action:z2_swap").unwrap(), TOL).unwrap();
    let cp = build_crossed_product(&ctx.rep, &ctx.dual, TOL).unwrap();
    let cands = native_candidates(&cp.wedderburn.rep, "cp", TOL);
    let omega = ObservationSet::new(cp.basis().to_vec());
    assert!(rcp_upper(&omega, 0.1, &cands).unwrap() <= 2);
}

#[test]
fn entropy_estimates_of_c2() {
    let r = c2();
    let cands = native_candidates(&r, "C2", TOL);
    let omega = ObservationSet::new(r.images().to_vec());
    let target = 2f64.ln() / 8.0;
    let id = ht_estimate(|b: &CMat| b.clone(), &omega, 0.1, 8, &cands).unwrap();
    let sw = ht_estimate(swap_op, &omega, 0.1, 8, &cands).unwrap();
    assert!((id - target).abs() < 1e-15);
    assert!((sw - target).abs() < 1e-15);
    let long = ht_estimate(swap_op, &omega, 0.1, 64, &cands).unwrap();
    assert!(long <= 2f64.ln() / 64.0 + 1e-15);
}

#[test]
fn rcp_is_monotone_in_omega_and_antitone_in_eps() {
    let ctx = ActionContext::new(catalog::action("action:z2_ad_m2").unwrap(), TOL).unwrap();
    let cp = build_crossed_product(&ctx.rep, &ctx.dual, TOL).unwrap();
    let cands = native_candidates(&cp.wedderburn.rep, "cp", TOL);
    let all = cp.basis().to_vec();
    let mut prev = 0;
    for k in 1..=all.len() {
        let omega = ObservationSet::new(all[..k].to_vec());
        let mut last = usize::MAX;
        for eps in [0.05, 0.1, 0.25, 0.5, 0.75, 1.5] {
            let r = rcp_upper(&omega, eps, &cands).unwrap();
            assert!(r <= last);
            last = r;
        }
        let r = rcp_upper(&omega, 0.1, &cands).unwrap();
        assert!(r >= prev);
        prev = r;
    }
}

#[test]
fn transport_keeps_size_and_validity() {
    let ctx = ActionContext::new(catalog::action("action:z2_swap").unwrap(), TOL).unwrap();
    let cp = build_crossed_product(&ctx.rep, &ctx.dual, TOL).unwrap();
    let act = Arc::new(ctx.rep.clone());
    let omega = ObservationSet::new(cp.basis().to_vec());

    let exact = Arc::new(FactorizationPair::new(&ctx.qg, &ctx.rep, folner_vector(&ctx.qg, &ctx.dual, TOL).unwrap()).unwrap());
    let phi_omega = omega.map(|y| exact.phi(&act, y));
    for inner in native_candidates(&exact.codomain, "MB", TOL) {
        let up = transport_triple(&inner, &exact, &act, &cp.wedderburn.rep, TOL);
        assert_eq!(up.n, inner.n);
        assert!(up.certified);
        for eps in [0.1, 0.25, 0.5] {
            if triple_valid(&inner, &phi_omega, eps) {
                assert!(triple_valid(&up, &omega, eps), "{}", inner.label);
            }
        }
    }

    // identity inner triple: the transported residual is Ψ∘Φ − id
    let delta = FolnerVector::delta(&ctx.qg, &ctx.dual, TOL).unwrap();
    let pair = Arc::new(FactorizationPair::new(&ctx.qg, &ctx.rep, delta).unwrap());
    let inner = native_candidates(&pair.codomain, "MB", TOL)
        .into_iter()
        .max_by_key(|t| t.n)
        .unwrap();
    let up = transport_triple(&inner, &pair, &act, &cp.wedderburn.rep, TOL);
    let expected = approximation_defect(&pair, &act, &cp);
    assert!((up.residual(&omega) - expected).abs() < 1e-9);
    assert!(expected > 0.1);
}

#[test]
fn trivial_group_transport_is_identity() {
    let ctx = ActionContext::new(catalog::action("action:trivial_group_c2").unwrap(), TOL).unwrap();
    let cp = build_crossed_product(&ctx.rep, &ctx.dual, TOL).unwrap();
    let act = Arc::new(ctx.rep.clone());
    let pair = Arc::new(FactorizationPair::new(&ctx.qg, &ctx.rep, folner_vector(&ctx.qg, &ctx.dual, TOL).unwrap()).unwrap());
    assert!(approximation_defect(&pair, &act, &cp) < 1e-14);
    for y in cp.basis() {
        let p = pair.phi(&act, y);
        assert!((&p - y).norm() < 1e-12);
        assert!((pair.psi(&act, &p) - y).norm() < 1e-12);
    }
}

#[test]
fn composed_certificates_match_direct_ones() {
    for name in ["action:z2_swap", "action:translation_z3"] {
        let ctx = ActionContext::new(catalog::action(name).unwrap(), TOL).unwrap();
        let cp = build_crossed_product(&ctx.rep, &ctx.dual, TOL).unwrap();
        let act = Arc::new(ctx.rep.clone());
        let pair = Arc::new(FactorizationPair::new(&ctx.qg, &ctx.rep, folner_vector(&ctx.qg, &ctx.dual, TOL).unwrap()).unwrap());
        let cp_rep = &cp.wedderburn.rep;
        let conn = Connectors::new(&pair, &act, cp_rep, TOL);
        assert!(conn.certificates().iter().all(|(_, c)| c.holds(TOL)), "{name}");
        let omega_cp = ObservationSet::new(cp.basis().to_vec());
        let omega_b = ObservationSet::new(act.target.images().to_vec());
        let omega_d = omega_cp.map(|y| pair.phi(&act, y));
        for inner in native_candidates(&pair.codomain, "MB", TOL) {
            let (a, b) = (conn.transport(&inner), transport_triple(&inner, &pair, &act, cp_rep, TOL));
            assert_eq!(a.certified, b.certified, "{}", a.label);
            assert!((a.residual(&omega_cp) - b.residual(&omega_cp)).abs() < 1e-12);
        }
        for inner in native_candidates(cp_rep, "crossed", TOL) {
            let (a, b) = (conn.pullback(&inner), pullback_triple(&inner, &pair, &act, TOL));
            assert_eq!(a.certified, b.certified, "{}", a.label);
            assert!((a.residual(&omega_d) - b.residual(&omega_d)).abs() < 1e-12);
            let (a, b) = (conn.condition(&inner), condition_triple(&inner, &act, TOL));
            assert_eq!(a.certified, b.certified, "{}", a.label);
            assert!((a.residual(&omega_b) - b.residual(&omega_b)).abs() < 1e-12);
        }
        for inner in native_candidates(&act.target, "B", TOL) {
            let (a, b) = (conn.lift(&inner), lift_triple(&inner, &act, cp_rep, TOL));
            assert_eq!(a.certified, b.certified, "{}", a.label);
            assert!(a.into_norm >= b.into_norm - 1e-12 && a.outof_norm >= b.outof_norm - 1e-12);
            assert!((a.residual(&omega_cp) - b.residual(&omega_cp)).abs() < 1e-12);
        }
    }
}

fn run_ledger(name: &str, gamma: Option<&str>) -> LedgerReport {
    let ctx = ActionContext::new(catalog::action(name).unwrap(), TOL).unwrap();
    let cp = build_crossed_product(&ctx.rep, &ctx.dual, TOL).unwrap();
    let g = match gamma {
        Some(g) => ctx.commuting_map(g).unwrap().clone(),
        None => LinearMap::identity(&ctx.data.target),
    };
    let ext = extend_commuting_map(&ctx.data.qg, &ctx.data.alpha, &ctx.rep, &ctx.dual, &cp, &g, TOL).unwrap();
    let pair = FactorizationPair::new(&ctx.qg, &ctx.rep, folner_vector(&ctx.qg, &ctx.dual, TOL).unwrap()).unwrap();
    ledger_check(&ctx, &cp, &g, &ext, pair, &LedgerConfig::default())
}

#[test]
fn ledger_regular_z2_identity() {
    let l = run_ledger("action:regular_z2", None);
    assert!(l.report.all_pass(), "{:?}", l.report.failures());
    for row in &l.rows {
        assert_eq!(row.ht_gamma, row.ht_gamma_hat);
    }
}

#[test]
fn ledger_swap_and_markov() {
    for g in ["swap", "markov"] {
        let l = run_ledger("action:z2_swap", Some(g));
        assert!(l.report.all_pass(), "{g}: {:?}", l.report.failures());
        assert_eq!(l.rows.len(), 18);
    }
}

#[test]
fn ledger_inner_and_translation() {
    for (a, g) in [("action:z2_ad_m2", "pinch"), ("action:z2_ad_m2", "phase"), ("action:translation_z3", "markov")] {
        let l = run_ledger(a, Some(g));
        assert!(l.report.all_pass(), "{a}/{g}: {:?}", l.report.failures());
    }
}

#[test]
fn ledger_trivial_group_degenerates() {
    let l = run_ledger("action:trivial_group_c2", Some("swap"));
    assert!(l.report.all_pass(), "{:?}", l.report.failures());
    for row in &l.rows {
        assert_eq!(row.rcp_crossed, row.rcp_matrix);
        assert_eq!(row.rcp_b, row.rcp_alpha_b);
    }
}

#[test]
fn ledger_with_a_delta_vector_still_holds() {
    let ctx = ActionContext::new(catalog::action("action:z2_swap").unwrap(), TOL).unwrap();
    let cp = build_crossed_product(&ctx.rep, &ctx.dual, TOL).unwrap();
    let g = ctx.commuting_map("swap").unwrap().clone();
    let ext = extend_commuting_map(&ctx.data.qg, &ctx.data.alpha, &ctx.rep, &ctx.dual, &cp, &g, TOL).unwrap();
    let pair = FactorizationPair::new(&ctx.qg, &ctx.rep, FolnerVector::delta(&ctx.qg, &ctx.dual, TOL).unwrap()).unwrap();
    let cfg = LedgerConfig { horizon: 3, ..LedgerConfig::default() };
    let l = ledger_check(&ctx, &cp, &g, &ext, pair, &cfg);
    assert!(l.delta > 0.1);
    assert!(l.report.all_pass(), "{:?}", l.report.failures());
    assert!(l.report.checks.iter().all(|c| !c.check.starts_with("ledger-c-folner")));
}

fn random_unital_cp(rng_vals: &[f64], shape: &AlgebraShape) -> LinearMap {
    // a convex mix of the identity, a unitary conjugation and the trace state
    let (p, q) = (rng_vals[0], rng_vals[1] * (1.0 - rng_vals[0]));
    let theta = rng_vals[2] * 6.0;
    let n = shape.blocks()[0];
    let mut u = CMat::identity(n, n);
    if n > 1 {
        u[(0, 0)] = cr(theta.cos());
        u[(0, 1)] = cr(-theta.sin());
        u[(1, 0)] = cr(theta.sin());
        u[(1, 1)] = cr(theta.cos());
    }
    let s = shape.clone();
    LinearMap::from_fn(shape, shape, move |b| {
        let conj = Element::from_blocks(&s, b.blocks().iter().map(|m| if m.nrows() == n { &u * m * u.adjoint() } else { m.clone() }).collect()).unwrap();
        let tr: qcross::C64 = b.to_matrix().trace() / cr(s.hilbert_dim() as f64);
        let state = Element::identity(&s).scale(tr);
        &(&b.scale(cr(p)) + &conj.scale(cr(q))) + &state.scale(cr(1.0 - p - q))
    })
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]
    #[test]
    fn amplification_does_not_change_estimates(
        vals in proptest::collection::vec(0.0f64..1.0, 3),
        k in 1usize..4,
        which in 0usize..3,
        eps_i in 0usize..3,
    ) {
        let shape = [AlgebraShape::full(2), AlgebraShape::commutative(3), AlgebraShape::new(vec![1, 2]).unwrap()][which].clone();
        let gamma = random_unital_cp(&vals, &shape);
        let b = Representation::defining(&shape);
        let mk = Representation::defining(&AlgebraShape::full(k)).tensor(&b);
        let gb = |x: &CMat| b.apply(&gamma.apply(&b.element(x)).unwrap());
        let gk = |y: &CMat| qcross::linalg::ampliate(y, k, |blk| gb(blk));
        let native_b = native_candidates(&b, "B", TOL);
        let native_k = native_candidates(&mk, "MkB", TOL);
        let mut cands_k = native_k.clone();
        cands_k.extend(native_b.iter().map(|t| corner_lift(t, k, &mk, TOL)));
        let mut cands_b = native_b.clone();
        cands_b.extend(native_k.iter().map(|t| corner_restrict(t, k, &b, TOL)));
        prop_assert!(cands_k.iter().chain(&cands_b).all(|t| t.certified));
        let omega_b = ObservationSet::new(b.images().to_vec());
        let e11 = qcross::linalg::matrix_unit(k, 0, 0);
        let omega_k = omega_b.map(|x| qcross::linalg::kron(&e11, x));
        let eps = DEFAULT_EPSILONS[eps_i];
        for n in 1..=4 {
            let hb = ht_estimate(gb, &omega_b, eps, n, &cands_b);
            let hk = ht_estimate(gk, &omega_k, eps, n, &cands_k);
            prop_assert!(hb.is_some());
            prop_assert_eq!(hb, hk);
        }
    }
}
