use qcross::algebra::{AlgebraShape, Element, LinearMap};
use qcross::catalog;
use qcross::cocycle::*;
use qcross::linalg::{c, cr, identity, CMat};
use qcross::Error;

const TOL: f64 = 1e-9;

fn ctx(name: &str) -> CocycleContext {
    CocycleContext::new(catalog::cocycle(name).unwrap(), TOL).unwrap()
}

#[test]
fn catalog_cocycles_validate() {
    for name in catalog::COCYCLES {
        let data = catalog::cocycle(name).unwrap();
        let rep = validate_cocycle_action(&data.qg, &data.target, &data.alpha, &data.u, TOL).unwrap();
        for id in ["twact1", "twact2", "u-unitary", "adv", "adv-unitary"] {
            let check = rep.get(id).unwrap();
            assert!(check.pass, "{name} {id} {:e}", check.residual);
        }
    }
}

#[test]
fn klein_bicharacter_is_a_two_cocycle() {
    // independent: u(g,h)u(gh,k) = u(h,k)u(g,hk) on Z2×Z2 written additively
    let u = |g: (u8, u8), h: (u8, u8)| if g.1 * h.0 == 1 { -1 } else { 1 };
    let add = |g: (u8, u8), h: (u8, u8)| ((g.0 + h.0) % 2, (g.1 + h.1) % 2);
    let all = [(0, 0), (0, 1), (1, 0), (1, 1)];
    for g in all {
        for h in all {
            for k in all {
                assert_eq!(u(g, h) * u(add(g, h), k), u(h, k) * u(g, add(h, k)));
            }
        }
    }
    // and not a coboundary: u(g,h)/u(h,g) is nontrivial
    assert_eq!(u((0, 1), (1, 0)) * u((1, 0), (0, 1)), -1);
}

#[test]
fn bicharacter_twist_over_c_is_m2() {
    let cx = ctx("cocycle:z2z2_bichar");
    let tcp = build_twisted_crossed_product(&cx.qg, &cx.system, TOL).unwrap();
    assert!(tcp.report.all_pass(), "{:?}", tcp.report.failures());
    assert_eq!(tcp.dim(), 4);
    assert_eq!(tcp.center_dim(), 1);
    assert_eq!(tcp.wedderburn.rep.shape().blocks(), &[2]);
}

#[test]
fn bicharacter_twist_over_c2() {
    let cx = ctx("cocycle:z2z2_bichar_c2");
    let tcp = build_twisted_crossed_product(&cx.qg, &cx.system, TOL).unwrap();
    assert!(tcp.report.all_pass());
    assert_eq!(tcp.dim(), 8);
    assert_eq!(tcp.wedderburn.rep.shape().blocks(), &[2, 2]);
    let swap = cx.commuting_map("swap").unwrap();
    let ext = extend_commuting_map_twisted(&cx.data.qg, &cx.system, &tcp, swap, TOL).unwrap();
    assert!(ext.report("swap", TOL).all_pass());
}

#[test]
fn unit_cocycles_collapse_to_untwisted() {
    for name in ["cocycle:unit_z2_swap", "cocycle:unit_z2_ad_m2", "cocycle:unit_trivial_group"] {
        let cx = ctx(name);
        assert!(cx.is_untwisted(0.0));
        let tcp = build_twisted_crossed_product(&cx.qg, &cx.system, TOL).unwrap();
        let rep = collapse_report(&cx, &tcp, TOL).unwrap();
        assert!(rep.all_pass(), "{name}: {:?}", rep.failures());
        assert!(rep.get("collapse-crossed-product").unwrap().residual <= TOL);
    }
}

#[test]
fn trivial_group_twisted_product_is_b() {
    let cx = ctx("cocycle:unit_trivial_group");
    let tcp = build_twisted_crossed_product(&cx.qg, &cx.system, TOL).unwrap();
    assert_eq!(tcp.dim(), cx.data.target.dim());
    let cx = ctx("cocycle:inner_trivial_group");
    let tcp = build_twisted_crossed_product(&cx.qg, &cx.system, TOL).unwrap();
    assert_eq!(tcp.dim(), 4);
}

#[test]
fn identity_extends_to_identity() {
    let cx = ctx("cocycle:z2z2_bichar");
    let tcp = build_twisted_crossed_product(&cx.qg, &cx.system, TOL).unwrap();
    let id = LinearMap::identity(&cx.data.target);
    let ext = extend_commuting_map_twisted(&cx.data.qg, &cx.system, &tcp, &id, TOL).unwrap();
    for (y, gy) in tcp.basis().iter().zip(&ext.extension.images) {
        assert!((y - gy).norm() < 1e-12);
    }
}

#[test]
fn perturbed_cocycle_breaks_twact2() {
    let data = catalog::cocycle("cocycle:z2z2_bichar").unwrap();
    let mut coords = data.u.coords();
    coords[0] += cr(0.1);
    let u = Element::from_coords(data.u.shape(), &coords).unwrap();
    let rep = validate_cocycle_action(&data.qg, &data.target, &data.alpha, &u, TOL).unwrap();
    assert!(rep.get("twact2").unwrap().residual >= 0.01);
    let bad = qcross::cocycle::CocycleData { u, ..data };
    assert!(matches!(CocycleContext::new(bad, TOL), Err(Error::InvalidCocycle(_))));
}

#[test]
fn non_normalized_cocycle_fixes_the_adjoint_convention() {
    // α = Ad w*, U = w*: (ε⊗id)α(b) = w* b w = V b V* with V = w*
    let data = catalog::cocycle("cocycle:inner_trivial_group").unwrap();
    let v = counit_counit_slice(&data.qg, &data.target, &data.u).unwrap();
    let w = CMat::from_diagonal(&nalgebra::DVector::from_vec(vec![cr(1.0), c(0.0, 1.0)]));
    assert!((v.block(0) - w.adjoint()).norm() < 1e-15);
    let rep = validate_cocycle_action(&data.qg, &data.target, &data.alpha, &data.u, TOL).unwrap();
    assert!(rep.get("adv").unwrap().pass);
    // the opposite reading V* b V fails on an off-diagonal unit
    let m2 = AlgebraShape::full(2);
    let e01 = Element::basis(&m2, 1);
    let lhs = data.alpha.apply(&e01).unwrap();
    let opposite = v.star().checked_mul(&e01).unwrap().checked_mul(&v).unwrap();
    assert!((lhs.block(0) - opposite.block(0)).norm() > 1.0);
}

#[test]
fn modular_conjugation_certificates() {
    for qg in ["fn_group:Z2", "fn_group:Z2xZ2", "fn_group:S3", "group_alg:S3", "kac_paljutkin"] {
        let q = qcross::quantum_group::FiniteQuantumGroup::new(catalog::quantum_group(qg).unwrap(), TOL).unwrap();
        let d = qcross::quantum_group::DualQuantumGroup::new(&q, TOL).unwrap();
        let (j, rep) = modular_conjugation(&q, &d, TOL).unwrap();
        assert!(rep.all_pass(), "{qg}: {:?}", rep.failures());
        assert!(j.involution_residual() <= J_TOL);
        assert!(j.antiunitarity_residual() <= J_TOL);
    }
}

#[test]
fn modular_conjugation_inverts_group_elements() {
    // on C(S3) the conjugation sends δ_g to δ_{g⁻¹}
    let g = catalog::FiniteGroup::s3();
    let q = qcross::quantum_group::FiniteQuantumGroup::new(catalog::function_algebra(&g), TOL).unwrap();
    let d = qcross::quantum_group::DualQuantumGroup::new(&q, TOL).unwrap();
    let (j, _) = modular_conjugation(&q, &d, TOL).unwrap();
    for x in 0..6 {
        for y in 0..6 {
            let expect = if y == g.inv[x] { 1.0 } else { 0.0 };
            assert!((j.linear[(y, x)] - cr(expect)).norm() < 1e-12, "({y},{x})");
        }
    }
}

#[test]
fn stabilization_for_every_catalog_cocycle() {
    for name in catalog::COCYCLES {
        let cx = ctx(name);
        let st = stabilizer_x(&cx.qg, &cx.dual, &cx.system, TOL).unwrap();
        assert!(st.report.all_pass(), "{name}: {:?}", st.report.failures());
        assert!(st.stabeq <= TOL, "{name}: {:e}", st.stabeq);
        let tr = ad_x_transport(&cx.qg, &cx.dual, &st, &cx.data.commuting, TOL).unwrap();
        assert!(tr.report.all_pass(), "{name}: {:?}", tr.report.failures());
        assert_eq!(tr.cp_beta.dim(), tr.twisted.dim());
    }
}

#[test]
fn amplified_bicharacter_product_is_m8() {
    let cx = ctx("cocycle:z2z2_bichar");
    let st = stabilizer_x(&cx.qg, &cx.dual, &cx.system, TOL).unwrap();
    let tr = ad_x_transport(&cx.qg, &cx.dual, &st, &[], TOL).unwrap();
    // (Â ⋉ C) ⊗ K(H_φ) with H_φ = C^4
    assert_eq!(tr.twisted.dim(), 4 * 16);
    assert_eq!(tr.cp_beta.center_dim(), 1);
}

#[test]
fn trivial_group_unit_cocycle_gives_identity_stabilizer() {
    let cx = ctx("cocycle:unit_trivial_group");
    let st = stabilizer_x(&cx.qg, &cx.dual, &cx.system, TOL).unwrap();
    assert!((&st.x - identity(st.x.nrows())).norm() < 1e-14);
    assert_eq!(st.stabeq, 0.0);
}

#[test]
fn non_commuting_map_is_rejected() {
    let cx = ctx("cocycle:unit_z2_ad_m2");
    let tcp = build_twisted_crossed_product(&cx.qg, &cx.system, TOL).unwrap();
    let m2 = AlgebraShape::full(2);
    let h = CMat::from_row_slice(2, 2, &[cr(1.0), cr(1.0), cr(1.0), cr(-1.0)]) * cr(0.5f64.sqrt());
    let had = LinearMap::from_fn(&m2, &m2, |b| {
        Element::from_blocks(&m2, vec![&h * b.block(0) * h.adjoint()]).unwrap()
    })
    .unwrap();
    let err = extend_commuting_map_twisted(&cx.data.qg, &cx.system, &tcp, &had, TOL).unwrap_err();
    assert!(matches!(err, Error::NotCommuting(_)));
}
