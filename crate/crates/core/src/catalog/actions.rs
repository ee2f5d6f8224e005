//! Catalog actions and the maps that commute with them.

use super::groups::{function_algebra, group_algebra, kac_paljutkin, FiniteGroup};
use crate::action::ActionData;
use crate::algebra::{AlgebraShape, Element, LinearMap};
use crate::linalg::{c, cr, CMat, C64};
use crate::quantum_group::QuantumGroupData;
use std::f64::consts::PI;

fn linear<F>(domain: &AlgebraShape, codomain: &AlgebraShape, f: F) -> LinearMap
where
    F: Fn(&Element) -> Element,
{
    LinearMap::from_fn(domain, codomain, f).expect("catalog maps are well shaped")
}

/// `b ↦ 1 ⊗ b`.
pub fn trivial_action(qg: &QuantumGroupData, target: &AlgebraShape) -> LinearMap {
    let one = Element::identity(&qg.shape);
    linear(target, &qg.shape.tensor(target), |b| one.tensor(b))
}

/// `α(b) = Σ_g δ_g ⊗ α̃_g(b)` for `C(G)`; `α̃` must satisfy `α̃_{gh} = α̃_h α̃_g`.
pub fn function_algebra_action<F>(g: &FiniteGroup, target: &AlgebraShape, act: F) -> LinearMap
where
    F: Fn(usize, &Element) -> Element,
{
    let a = AlgebraShape::commutative(g.order());
    linear(target, &a.tensor(target), |b| {
        let mut out = Element::zero(&a.tensor(target));
        for x in 0..g.order() {
            out = &out + &Element::basis(&a, x).tensor(&act(x, b));
        }
        out
    })
}

/// `γ_ω = (id ⊗ ω)Δ` for a functional `ω` given on the matrix units.
pub fn right_convolution(qg: &QuantumGroupData, omega: &[C64]) -> LinearMap {
    let a = &qg.shape;
    linear(a, a, |x| {
        let dx = qg.coproduct.apply(x).expect("domain").coords();
        let mut out = CMat::zeros(a.dim(), 1);
        for t in 0..a.tensor(a).dim() {
            let (l, r) = a.tensor_split(a, t);
            out[(l, 0)] += dx[t] * omega[r];
        }
        Element::from_coords(a, &out.column(0).into_owned()).expect("dimension")
    })
}

/// The functional `a ↦ a_{(i,0,0)}` on a one-dimensional block.
pub fn block_character(shape: &AlgebraShape, block: usize) -> Vec<C64> {
    let mut w = vec![cr(0.0); shape.dim()];
    w[shape.offset(block)] = cr(1.0);
    w
}

fn mix(p: f64, a: &[C64], b: &[C64]) -> Vec<C64> {
    a.iter().zip(b).map(|(x, y)| x * cr(p) + y * cr(1.0 - p)).collect()
}

fn swap_c2(b: &Element) -> Element {
    let s = b.shape().clone();
    Element::from_blocks(&s, vec![b.block(1).clone(), b.block(0).clone()]).expect("C^2")
}

fn conj_m2(u: &CMat, b: &Element) -> Element {
    Element::from_blocks(b.shape(), vec![u * b.block(0) * u.adjoint()]).expect("M_2")
}

pub fn regular(name: &str, qg: QuantumGroupData, commuting: Vec<(String, LinearMap)>) -> ActionData {
    ActionData {
        name: name.to_string(),
        target: qg.shape.clone(),
        alpha: qg.coproduct.clone(),
        qg,
        commuting,
    }
}

pub fn build(name: &str) -> Option<ActionData> {
    let c2 = AlgebraShape::commutative(2);
    let entry = match name {
        "action:trivial_z2" => {
            let qg = function_algebra(&FiniteGroup::cyclic(2));
            let t = AlgebraShape::full(1);
            ActionData {
                name: name.into(),
                alpha: trivial_action(&qg, &t),
                target: t,
                qg,
                commuting: vec![],
            }
        }
        "action:trivial_z2_c2" => {
            let qg = function_algebra(&FiniteGroup::cyclic(2));
            ActionData {
                name: name.into(),
                alpha: trivial_action(&qg, &c2),
                target: c2.clone(),
                qg,
                commuting: vec![("swap".into(), linear(&c2, &c2, swap_c2))],
            }
        }
        "action:trivial_kp" => {
            let qg = kac_paljutkin();
            let t = AlgebraShape::full(1);
            ActionData {
                name: name.into(),
                alpha: trivial_action(&qg, &t),
                target: t,
                qg,
                commuting: vec![],
            }
        }
        "action:trivial_group_c2" => {
            let qg = function_algebra(&FiniteGroup::cyclic(1));
            ActionData {
                name: name.into(),
                alpha: trivial_action(&qg, &c2),
                target: c2.clone(),
                qg,
                commuting: vec![("swap".into(), linear(&c2, &c2, swap_c2))],
            }
        }
        "action:regular_z2" => {
            let qg = function_algebra(&FiniteGroup::cyclic(2));
            let e = block_character(&qg.shape, 0);
            let g = block_character(&qg.shape, 1);
            let translate = right_convolution(&qg, &g);
            let markov = right_convolution(&qg, &mix(0.7, &e, &g));
            regular(
                name,
                qg,
                vec![("translate".into(), translate), ("markov".into(), markov)],
            )
        }
        "action:regular_s3" => {
            let qg = function_algebra(&FiniteGroup::s3());
            let s = block_character(&qg.shape, 3);
            let translate = right_convolution(&qg, &s);
            regular(name, qg, vec![("translate".into(), translate)])
        }
        "action:regular_group_alg_s3" => {
            let qg = group_algebra(&FiniteGroup::s3());
            let sign = block_character(&qg.shape, 1);
            let gamma = right_convolution(&qg, &sign);
            regular(name, qg, vec![("sign".into(), gamma)])
        }
        "action:regular_kp" => {
            let qg = kac_paljutkin();
            let chi = block_character(&qg.shape, 1);
            let gamma = right_convolution(&qg, &chi);
            regular(name, qg, vec![("character".into(), gamma)])
        }
        "action:z2_swap" => {
            let g = FiniteGroup::cyclic(2);
            let qg = function_algebra(&g);
            let alpha = function_algebra_action(&g, &c2, |x, b| if x == 0 { b.clone() } else { swap_c2(b) });
            let swap = linear(&c2, &c2, swap_c2);
            let markov = linear(&c2, &c2, |b| &b.scale(cr(0.75)) + &swap_c2(b).scale(cr(0.25)));
            ActionData {
                name: name.into(),
                qg,
                target: c2.clone(),
                alpha,
                commuting: vec![("swap".into(), swap), ("markov".into(), markov)],
            }
        }
        "action:z2_ad_m2" => {
            let g = FiniteGroup::cyclic(2);
            let qg = function_algebra(&g);
            let m2 = AlgebraShape::full(2);
            let u = CMat::from_diagonal(&nalgebra::DVector::from_vec(vec![cr(1.0), cr(-1.0)]));
            let v = CMat::from_diagonal(&nalgebra::DVector::from_vec(vec![cr(1.0), c(0.0, 1.0)]));
            let uu = u.clone();
            let alpha = function_algebra_action(&g, &m2, move |x, b| if x == 0 { b.clone() } else { conj_m2(&uu, b) });
            let ad_v = linear(&m2, &m2, |b| conj_m2(&v, b));
            let pinch = linear(&m2, &m2, |b| &b.scale(cr(0.5)) + &conj_m2(&u, b).scale(cr(0.5)));
            ActionData {
                name: name.into(),
                qg,
                target: m2,
                alpha,
                commuting: vec![("phase".into(), ad_v), ("pinch".into(), pinch)],
            }
        }
        "action:translation_z3" => translation(name, 3),
        "counterexample:character_collapse" => {
            // α'(b) = 1 ⊗ χ(b)1 satisfies (act) but neither (invcou) nor injectivity
            let qg = function_algebra(&FiniteGroup::cyclic(2));
            let one_ab = Element::identity(&qg.shape.tensor(&c2));
            let alpha = linear(&c2, &qg.shape.tensor(&c2), |b| one_ab.scale(b.block(0)[(0, 0)]));
            ActionData {
                name: name.into(),
                qg,
                target: c2.clone(),
                alpha,
                commuting: vec![],
            }
        }
        "counterexample:idempotent_collapse" => {
            // α∘θ for the trivial action and the idempotent θ(b) = (b0, b1, b1)
            let qg = function_algebra(&FiniteGroup::cyclic(2));
            let c3 = AlgebraShape::commutative(3);
            let theta = |b: &Element| {
                Element::from_blocks(&c3, vec![b.block(0).clone(), b.block(1).clone(), b.block(1).clone()])
                    .expect("C^3")
            };
            let one = Element::identity(&qg.shape);
            let alpha = linear(&c3, &qg.shape.tensor(&c3), |b| one.tensor(&theta(b)));
            ActionData {
                name: name.into(),
                qg,
                target: c3.clone(),
                alpha,
                commuting: vec![],
            }
        }
        _ => return None,
    };
    Some(entry)
}

/// `C*(Z_n)` on `C(Z_n)` by `α(c_k) = λ_k ⊗ c_k` for the characters `c_k`.
fn translation(name: &str, n: usize) -> ActionData {
    let g = FiniteGroup::cyclic(n);
    let qg = group_algebra(&g);
    let cn = AlgebraShape::commutative(n);
    let w = |t: f64| c(t.cos(), t.sin());
    let lam = |k: usize| {
        Element::from_blocks(&qg.shape, g.irreps.iter().map(|p| p[k].clone()).collect()).expect("blocks")
    };
    let chr = |k: usize| {
        let v = (0..n)
            .map(|x| w(2.0 * PI * (k * x) as f64 / n as f64))
            .collect::<Vec<_>>();
        Element::from_coords(&cn, &nalgebra::DVector::from_vec(v)).expect("C^n")
    };
    let ab = qg.shape.tensor(&cn);
    let alpha = linear(&cn, &ab, |b| {
        // b = Σ_x b_x δ_x and δ_x = (1/n) Σ_k ω^{-kx} c_k
        let mut out = Element::zero(&ab);
        for x in 0..n {
            let bx = b.block(x)[(0, 0)];
            if bx.norm() == 0.0 {
                continue;
            }
            for k in 0..n {
                let z = bx * w(-2.0 * PI * (k * x) as f64 / n as f64) * cr(1.0 / n as f64);
                out = &out + &lam(k).tensor(&chr(k)).scale(z);
            }
        }
        out
    });
    let shift = |b: &Element| {
        Element::from_blocks(&cn, (0..n).map(|x| b.block((x + 1) % n).clone()).collect()).expect("C^n")
    };
    let translate = linear(&cn, &cn, shift);
    let markov = linear(&cn, &cn, |b| &b.scale(cr(0.6)) + &shift(b).scale(cr(0.4)));
    ActionData {
        name: name.into(),
        qg,
        target: cn,
        alpha,
        commuting: vec![("translate".into(), translate), ("markov".into(), markov)],
    }
}

pub const ACTIONS: &[&str] = &[
    "action:trivial_z2",
    "action:trivial_z2_c2",
    "action:trivial_kp",
    "action:trivial_group_c2",
    "action:regular_z2",
    "action:regular_s3",
    "action:regular_group_alg_s3",
    "action:regular_kp",
    "action:z2_swap",
    "action:z2_ad_m2",
    "action:translation_z3",
];

/// Well-formed maps that violate the action axioms on purpose.
pub const COUNTEREXAMPLES: &[&str] = &[
    "counterexample:character_collapse",
    "counterexample:idempotent_collapse",
];
