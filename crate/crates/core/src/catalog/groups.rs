//! Finite groups, their function algebras and group algebras, and the
//! Kac–Paljutkin quantum group.

use crate::algebra::{AlgebraShape, Element, LinearMap};
use crate::error::{Error, Result};
use crate::linalg::{c, cr, CMat, C64};
use crate::quantum_group::QuantumGroupData;
use std::f64::consts::PI;

/// A finite group by its multiplication table; element 0 is the identity.
#[derive(Clone, Debug)]
pub struct FiniteGroup {
    pub name: String,
    pub mul: Vec<Vec<usize>>,
    pub inv: Vec<usize>,
    /// Unitary irreducible representations, trivial first.
    pub irreps: Vec<Vec<CMat>>,
}

impl FiniteGroup {
    pub fn order(&self) -> usize {
        self.mul.len()
    }

    fn from_table(name: &str, mul: Vec<Vec<usize>>, irreps: Vec<Vec<CMat>>) -> Self {
        let n = mul.len();
        let inv = (0..n)
            .map(|g| (0..n).find(|&h| mul[g][h] == 0).expect("group"))
            .collect();
        FiniteGroup {
            name: name.to_string(),
            mul,
            inv,
            irreps,
        }
    }

    pub fn cyclic(n: usize) -> Self {
        let mul = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        let irreps = (0..n)
            .map(|k| {
                (0..n)
                    .map(|g| {
                        let t = 2.0 * PI * (k * g) as f64 / n as f64;
                        CMat::from_element(1, 1, c(t.cos(), t.sin()))
                    })
                    .collect()
            })
            .collect();
        Self::from_table(&format!("Z{n}"), mul, irreps)
    }

    /// `Z2 × Z2` with `(a, b)` stored at `2a + b`.
    pub fn klein() -> Self {
        let mul = (0..4)
            .map(|x: usize| (0..4).map(|y: usize| x ^ y).collect())
            .collect();
        let irreps = (0..4usize)
            .map(|chi| {
                (0..4usize)
                    .map(|g| {
                        let sign = if (chi & g).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
                        CMat::from_element(1, 1, cr(sign))
                    })
                    .collect()
            })
            .collect();
        Self::from_table("Z2xZ2", mul, irreps)
    }

    /// `S3` with `r^a s^b` stored at `a + 3b`, `s r s = r^{-1}`.
    pub fn s3() -> Self {
        let idx = |a: usize, b: usize| a % 3 + 3 * (b % 2);
        let mul = (0..6)
            .map(|x| {
                (0..6)
                    .map(|y| {
                        let (a, b) = (x % 3, x / 3);
                        let (c2, d) = (y % 3, y / 3);
                        let a2 = if b == 0 { a + c2 } else { a + 3 - c2 };
                        idx(a2, b + d)
                    })
                    .collect()
            })
            .collect();
        let t = 2.0 * PI / 3.0;
        let rot = CMat::from_row_slice(2, 2, &[cr(t.cos()), cr(-t.sin()), cr(t.sin()), cr(t.cos())]);
        let refl = CMat::from_row_slice(2, 2, &[cr(1.0), cr(0.0), cr(0.0), cr(-1.0)]);
        let two: Vec<CMat> = (0..6)
            .map(|x| {
                let (a, b) = (x % 3, x / 3);
                let mut m = CMat::identity(2, 2);
                for _ in 0..a {
                    m = &m * &rot;
                }
                if b == 1 {
                    m = &m * &refl;
                }
                m
            })
            .collect();
        let trivial = (0..6).map(|_| CMat::from_element(1, 1, cr(1.0))).collect();
        let sign = (0..6)
            .map(|x| CMat::from_element(1, 1, cr(if x / 3 == 0 { 1.0 } else { -1.0 })))
            .collect();
        Self::from_table("S3", mul, vec![trivial, sign, two])
    }

    pub fn by_name(name: &str) -> Result<Self> {
        match name {
            "Z1" => Ok(Self::cyclic(1)),
            "Z2" => Ok(Self::cyclic(2)),
            "Z3" => Ok(Self::cyclic(3)),
            "Z4" => Ok(Self::cyclic(4)),
            "Z2xZ2" => Ok(Self::klein()),
            "S3" => Ok(Self::s3()),
            _ => Err(Error::UnknownEntry(format!("group {name}"))),
        }
    }
}

fn map_from<F>(domain: &AlgebraShape, codomain: &AlgebraShape, f: F) -> LinearMap
where
    F: Fn(usize) -> Element,
{
    let mut m = CMat::zeros(codomain.dim(), domain.dim());
    for a in 0..domain.dim() {
        m.set_column(a, &f(a).coords());
    }
    LinearMap::new(domain, codomain, m).expect("sizes agree")
}

fn scalar(z: C64) -> Element {
    Element::from_blocks(&AlgebraShape::full(1), vec![CMat::from_element(1, 1, z)]).expect("C")
}

/// `C(G)` with `Δδ_g = Σ_{hk=g} δ_h ⊗ δ_k`.
pub fn function_algebra(g: &FiniteGroup) -> QuantumGroupData {
    let n = g.order();
    let shape = AlgebraShape::commutative(n);
    let aa = shape.tensor(&shape);
    let delta = map_from(&shape, &aa, |x| {
        let mut e = Element::zero(&aa);
        for h in 0..n {
            for k in 0..n {
                if g.mul[h][k] == x {
                    e = &e + &Element::basis(&aa, shape.tensor_index(&shape, h, k));
                }
            }
        }
        e
    });
    let eps = map_from(&shape, &AlgebraShape::full(1), |x| {
        scalar(cr(if x == 0 { 1.0 } else { 0.0 }))
    });
    let s = map_from(&shape, &shape, |x| Element::basis(&shape, g.inv[x]));
    QuantumGroupData::new(&format!("fn_group:{}", g.name), shape, delta, eps, s).expect("shapes")
}

/// `C*(G) ≅ ⊕_π M_{d_π}` with `Δλ_g = λ_g ⊗ λ_g`.
pub fn group_algebra(g: &FiniteGroup) -> QuantumGroupData {
    let n = g.order();
    let shape = AlgebraShape::new(g.irreps.iter().map(|p| p[0].nrows()).collect()).expect("irreps");
    let aa = shape.tensor(&shape);
    let lam: Vec<Element> = (0..n)
        .map(|x| Element::from_blocks(&shape, g.irreps.iter().map(|p| p[x].clone()).collect()).expect("blocks"))
        .collect();
    // e^π_{rs} = (d_π/|G|) Σ_g conj(π(g)_{rs}) λ_g
    let unit_coeffs = |a: usize| -> Vec<C64> {
        let (i, r, s) = shape.locate(a);
        let d = shape.blocks()[i] as f64;
        (0..n)
            .map(|x| g.irreps[i][x][(r, s)].conj() * cr(d / n as f64))
            .collect()
    };
    let delta = map_from(&shape, &aa, |a| {
        let w = unit_coeffs(a);
        let mut e = Element::zero(&aa);
        for x in 0..n {
            e = &e + &lam[x].tensor(&lam[x]).scale(w[x]);
        }
        e
    });
    let eps = map_from(&shape, &AlgebraShape::full(1), |a| {
        scalar(unit_coeffs(a).iter().sum())
    });
    let s = map_from(&shape, &shape, |a| {
        let w = unit_coeffs(a);
        let mut e = Element::zero(&shape);
        for x in 0..n {
            e = &e + &lam[g.inv[x]].scale(w[x]);
        }
        e
    });
    QuantumGroupData::new(&format!("group_alg:{}", g.name), shape, delta, eps, s).expect("shapes")
}

/// The eight-dimensional Kac–Paljutkin quantum group on `C^4 ⊕ M_2`.
pub fn kac_paljutkin() -> QuantumGroupData {
    let i1 = c(0.0, 1.0);
    kac_paljutkin_with([i1, i1, -i1, -i1], 1.0)
}

/// `p` are the phases of the `e⊗a21`, `a21⊗e` terms of `Δ(a12)`; `Δ(a21)` is
/// its adjoint. `sgn` fixes the imaginary terms of `Δ(e2)`, `Δ(e3)`.
fn kac_paljutkin_with(p: [C64; 4], sgn: f64) -> QuantumGroupData {
    let shape = AlgebraShape::new(vec![1, 1, 1, 1, 2]).expect("shape");
    let aa = shape.tensor(&shape);
    // e1..e4 are 0..3; a_ij is 4 + 2i + j (zero based)
    let e = |k: usize| k - 1;
    let a = |i: usize, j: usize| 4 + 2 * (i - 1) + (j - 1);
    let h = 0.5;
    let i1 = c(0.0, 1.0);
    let one = cr(1.0);
    let half = cr(h);
    let terms: Vec<Vec<(C64, usize, usize)>> = vec![
        // Δ(e1)
        vec![
            (one, e(1), e(1)),
            (one, e(2), e(2)),
            (one, e(3), e(3)),
            (one, e(4), e(4)),
            (half, a(1, 1), a(1, 1)),
            (half, a(1, 2), a(1, 2)),
            (half, a(2, 1), a(2, 1)),
            (half, a(2, 2), a(2, 2)),
        ],
        // Δ(e2)
        vec![
            (one, e(1), e(2)),
            (one, e(2), e(1)),
            (one, e(3), e(4)),
            (one, e(4), e(3)),
            (half, a(1, 1), a(2, 2)),
            (half, a(2, 2), a(1, 1)),
            (i1 * half * sgn, a(2, 1), a(1, 2)),
            (-i1 * half * sgn, a(1, 2), a(2, 1)),
        ],
        // Δ(e3)
        vec![
            (one, e(1), e(3)),
            (one, e(3), e(1)),
            (one, e(2), e(4)),
            (one, e(4), e(2)),
            (half, a(1, 1), a(2, 2)),
            (half, a(2, 2), a(1, 1)),
            (-i1 * half * sgn, a(2, 1), a(1, 2)),
            (i1 * half * sgn, a(1, 2), a(2, 1)),
        ],
        // Δ(e4)
        vec![
            (one, e(1), e(4)),
            (one, e(4), e(1)),
            (one, e(2), e(3)),
            (one, e(3), e(2)),
            (half, a(1, 1), a(1, 1)),
            (half, a(2, 2), a(2, 2)),
            (-half, a(1, 2), a(1, 2)),
            (-half, a(2, 1), a(2, 1)),
        ],
        // Δ(a11)
        vec![
            (one, e(1), a(1, 1)),
            (one, a(1, 1), e(1)),
            (one, e(2), a(2, 2)),
            (one, a(2, 2), e(3)),
            (one, e(3), a(2, 2)),
            (one, a(2, 2), e(2)),
            (one, e(4), a(1, 1)),
            (one, a(1, 1), e(4)),
        ],
        // Δ(a12)
        vec![
            (one, e(1), a(1, 2)),
            (one, a(1, 2), e(1)),
            (p[0], e(2), a(2, 1)),
            (p[1], a(2, 1), e(3)),
            (p[2], e(3), a(2, 1)),
            (p[3], a(2, 1), e(2)),
            (-one, e(4), a(1, 2)),
            (-one, a(1, 2), e(4)),
        ],
        // Δ(a21)
        vec![
            (one, e(1), a(2, 1)),
            (one, a(2, 1), e(1)),
            (p[0].conj(), e(2), a(1, 2)),
            (p[1].conj(), a(1, 2), e(3)),
            (p[2].conj(), e(3), a(1, 2)),
            (p[3].conj(), a(1, 2), e(2)),
            (-one, e(4), a(2, 1)),
            (-one, a(2, 1), e(4)),
        ],
        // Δ(a22)
        vec![
            (one, e(1), a(2, 2)),
            (one, a(2, 2), e(1)),
            (one, e(2), a(1, 1)),
            (one, a(1, 1), e(3)),
            (one, e(3), a(1, 1)),
            (one, a(1, 1), e(2)),
            (one, e(4), a(2, 2)),
            (one, a(2, 2), e(4)),
        ],
    ];
    let delta = map_from(&shape, &aa, |x| {
        let mut el = Element::zero(&aa);
        for &(z, l, r) in &terms[x] {
            el = &el + &Element::basis(&aa, shape.tensor_index(&shape, l, r)).scale(z);
        }
        el
    });
    let eps = map_from(&shape, &AlgebraShape::full(1), |x| {
        scalar(cr(if x == 0 { 1.0 } else { 0.0 }))
    });
    let s = map_from(&shape, &shape, |x| {
        let (blk, r, col) = shape.locate(x);
        Element::basis(&shape, shape.index(blk, col, r))
    });
    QuantumGroupData::new("kac_paljutkin", shape, delta, eps, s).expect("shapes")
}
