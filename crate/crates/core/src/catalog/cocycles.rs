//! Catalog cocycle actions.

use super::actions;
use super::groups::{function_algebra, FiniteGroup};
use crate::algebra::{AlgebraShape, Element, LinearMap};
use crate::cocycle::CocycleData;
use crate::linalg::{c, cr, CMat};
use crate::quantum_group::QuantumGroupData;

/// `Σ_{g,h} u(g,h) δ_g ⊗ δ_h ⊗ 1_B` for a scalar 2-cocycle `u` on `G`.
fn scalar_cocycle<F>(qg: &QuantumGroupData, n: usize, target: &AlgebraShape, u: F) -> Element
where
    F: Fn(usize, usize) -> f64,
{
    let a = &qg.shape;
    let one = Element::identity(target);
    let mut out = Element::zero(&a.tensor(a).tensor(target));
    for g in 0..n {
        for h in 0..n {
            let term = Element::basis(a, g)
                .tensor(&Element::basis(a, h))
                .tensor(&one)
                .scale(cr(u(g, h)));
            out = &out + &term;
        }
    }
    out
}

/// `u((a,b),(c,d)) = (−1)^{bc}` with `(a, b)` stored at `2a + b`.
fn klein_bicharacter(g: usize, h: usize) -> f64 {
    if (g & 1) * (h >> 1) == 1 {
        -1.0
    } else {
        1.0
    }
}

fn unit_cocycle(qg: &QuantumGroupData, target: &AlgebraShape) -> Element {
    Element::identity(&qg.shape.tensor(&qg.shape).tensor(target))
}

fn swap_c2() -> LinearMap {
    let c2 = AlgebraShape::commutative(2);
    LinearMap::from_fn(&c2, &c2, |b| {
        Element::from_blocks(&c2, vec![b.block(1).clone(), b.block(0).clone()]).expect("C^2")
    })
    .expect("C^2")
}

pub fn build(name: &str) -> Option<CocycleData> {
    let c2 = AlgebraShape::commutative(2);
    let entry = match name {
        "cocycle:z2z2_bichar" => {
            let g = FiniteGroup::klein();
            let qg = function_algebra(&g);
            let t = AlgebraShape::full(1);
            CocycleData {
                name: name.into(),
                alpha: actions::trivial_action(&qg, &t),
                u: scalar_cocycle(&qg, 4, &t, klein_bicharacter),
                target: t,
                qg,
                commuting: vec![("id".into(), LinearMap::identity(&AlgebraShape::full(1)))],
            }
        }
        "cocycle:z2z2_bichar_c2" => {
            // second factor of Z2×Z2 swaps the two points
            let g = FiniteGroup::klein();
            let qg = function_algebra(&g);
            let swap = swap_c2();
            let sw = swap.clone();
            let alpha = actions::function_algebra_action(&g, &c2, move |x, b| {
                if x & 1 == 1 {
                    sw.apply(b).expect("C^2")
                } else {
                    b.clone()
                }
            });
            CocycleData {
                name: name.into(),
                u: scalar_cocycle(&qg, 4, &c2, klein_bicharacter),
                alpha,
                target: c2,
                qg,
                commuting: vec![("swap".into(), swap)],
            }
        }
        "cocycle:unit_z2_swap" => {
            let base = actions::build("action:z2_swap").expect("catalog action");
            let swap = base.commuting[0].clone();
            CocycleData {
                name: name.into(),
                u: unit_cocycle(&base.qg, &base.target),
                qg: base.qg,
                target: base.target,
                alpha: base.alpha,
                commuting: vec![swap],
            }
        }
        "cocycle:unit_z2_ad_m2" => {
            let base = actions::build("action:z2_ad_m2").expect("catalog action");
            let phase = base.commuting[0].clone();
            CocycleData {
                name: name.into(),
                u: unit_cocycle(&base.qg, &base.target),
                qg: base.qg,
                target: base.target,
                alpha: base.alpha,
                commuting: vec![phase],
            }
        }
        "cocycle:unit_trivial_group" => {
            let qg = function_algebra(&FiniteGroup::cyclic(1));
            CocycleData {
                name: name.into(),
                alpha: actions::trivial_action(&qg, &c2),
                u: unit_cocycle(&qg, &c2),
                target: c2,
                qg,
                commuting: vec![("swap".into(), swap_c2())],
            }
        }
        "cocycle:inner_trivial_group" => {
            // α = Ad w* on M_2 with U = w*, so V = w* and (ε⊗id)α = V·V*
            let qg = function_algebra(&FiniteGroup::cyclic(1));
            let m2 = AlgebraShape::full(2);
            let w = CMat::from_diagonal(&nalgebra::DVector::from_vec(vec![cr(1.0), c(0.0, 1.0)]));
            let ws = w.adjoint();
            let one = Element::identity(&qg.shape);
            let alpha = LinearMap::from_fn(&m2, &qg.shape.tensor(&m2), |b| {
                let inner = Element::from_blocks(&m2, vec![&ws * b.block(0) * &w]).expect("M_2");
                one.tensor(&inner)
            })
            .expect("M_2");
            let u = one
                .tensor(&one)
                .tensor(&Element::from_blocks(&m2, vec![ws.clone()]).expect("M_2"));
            CocycleData {
                name: name.into(),
                qg,
                target: m2,
                alpha,
                u,
                commuting: vec![],
            }
        }
        _ => return None,
    };
    Some(entry)
}

pub const COCYCLES: &[&str] = &[
    "cocycle:z2z2_bichar",
    "cocycle:z2z2_bichar_c2",
    "cocycle:unit_z2_swap",
    "cocycle:unit_z2_ad_m2",
    "cocycle:unit_trivial_group",
    "cocycle:inner_trivial_group",
];
