use super::QuantumGroupData;
use crate::algebra::{AlgebraShape, Element, Representation};
use crate::linalg::{cr, embed_legs, identity, kron, CMat, CVec};
use crate::report::{Check, ValidationReport};

/// GNS space of the Haar state with orthonormal basis
/// `f_α = Λ(e_α)/√w_{i(α)}`, indexed like the matrix units.
#[derive(Clone, Debug)]
pub struct Gns {
    pub shape: AlgebraShape,
    /// `√w` of the block containing each matrix unit.
    pub sqrt_w: Vec<f64>,
    /// Left multiplication.
    pub pi: Representation,
}

impl Gns {
    pub fn new(shape: &AlgebraShape, weights: &[f64]) -> Gns {
        let d = shape.dim();
        let sqrt_w = (0..d).map(|a| weights[shape.locate(a).0].sqrt()).collect();
        let images = (0..d)
            .map(|a| {
                let (i, r, s) = shape.locate(a);
                let n = shape.blocks()[i];
                let mut m = CMat::zeros(d, d);
                for t in 0..n {
                    m[(shape.index(i, r, t), shape.index(i, s, t))] = cr(1.0);
                }
                m
            })
            .collect();
        Gns {
            shape: shape.clone(),
            sqrt_w,
            pi: Representation::new(shape, images).expect("left regular representation"),
        }
    }

    pub fn dim(&self) -> usize {
        self.shape.dim()
    }

    pub fn lambda(&self, a: &Element) -> CVec {
        let c = a.coords();
        CVec::from_fn(self.dim(), |k, _| c[k] * self.sqrt_w[k])
    }

    /// `Λ(1)`, the cyclic vector.
    pub fn cyclic(&self) -> CVec {
        self.lambda(&Element::identity(&self.shape))
    }

    /// `π ⊗ π` on `H ⊗ H`.
    pub fn pi2(&self) -> Representation {
        self.pi.tensor(&self.pi)
    }
}

/// `W ∈ B(H ⊗ H)` with `W*(Λ(a) ⊗ Λ(b)) = (Λ⊗Λ)(Δ(b)(a⊗1))`.
#[derive(Clone, Debug)]
pub struct MultiplicativeUnitary {
    pub matrix: CMat,
}

impl MultiplicativeUnitary {
    pub fn new(data: &QuantumGroupData, gns: &Gns) -> MultiplicativeUnitary {
        let a = &data.shape;
        let d = a.dim();
        let one = Element::identity(a);
        let mut w_star = CMat::zeros(d * d, d * d);
        for alpha in 0..d {
            let left = Element::basis(a, alpha).tensor(&one);
            for beta in 0..d {
                let db = data.coproduct.apply(&Element::basis(a, beta)).expect("domain");
                let prod = (&db * &left).coords();
                let scale = 1.0 / (gns.sqrt_w[alpha] * gns.sqrt_w[beta]);
                let col = alpha * d + beta;
                for t in 0..d * d {
                    if prod[t] == cr(0.0) {
                        continue;
                    }
                    let (g, h) = a.tensor_split(a, t);
                    w_star[(g * d + h, col)] += prod[t] * cr(scale * gns.sqrt_w[g] * gns.sqrt_w[h]);
                }
            }
        }
        MultiplicativeUnitary {
            matrix: w_star.adjoint(),
        }
    }

    pub fn dim(&self) -> usize {
        (self.matrix.nrows() as f64).sqrt().round() as usize
    }

    /// `Δ(x) = W*(1⊗x)W` on operators.
    pub fn coproduct_op(&self, x: &CMat) -> CMat {
        let d = self.dim();
        self.matrix.adjoint() * kron(&identity(d), x) * &self.matrix
    }

    pub fn report(&self, data: &QuantumGroupData, gns: &Gns, tol: f64) -> ValidationReport {
        const ANCHOR: &str = "multiplicative-unitary";
        let mut rep = ValidationReport::default();
        let d = self.dim();
        let w = &self.matrix;
        rep.push(Check::new(
            "w-unitary",
            ANCHOR,
            (w.adjoint() * w - identity(d * d)).norm(),
            tol,
        ));
        let dims = [d, d, d];
        let w12 = embed_legs(w, &dims, &[0, 1]);
        let w13 = embed_legs(w, &dims, &[0, 2]);
        let w23 = embed_legs(w, &dims, &[1, 2]);
        rep.push(Check::new(
            "w-pentagon",
            ANCHOR,
            (&w12 * &w13 * &w23 - &w23 * &w12).norm(),
            tol,
        ));
        let pi2 = gns.pi2();
        let mut implement = 0.0f64;
        for a in 0..d {
            let lhs = pi2.apply(&data.coproduct.apply(&Element::basis(&data.shape, a)).expect("domain"));
            implement = implement.max((lhs - self.coproduct_op(gns.pi.image(a))).norm());
        }
        rep.push(Check::new("w-implements-coproduct", ANCHOR, implement, tol));
        let mut leg = 0.0f64;
        for i in 0..data.shape.num_blocks() {
            let z = kron(&gns.pi.central_projection(i), &identity(d));
            leg = leg.max((&z * w - w * &z).norm());
        }
        rep.push(Check::new("w-first-leg-in-algebra", ANCHOR, leg, tol));
        let mut gns_res = 0.0f64;
        let shape = &data.shape;
        let h = |x: &Element| -> crate::linalg::C64 {
            x.blocks()
                .iter()
                .enumerate()
                .map(|(i, blk)| blk.trace() * cr(gns.sqrt_w[shape.offset(i)].powi(2)))
                .sum()
        };
        for a in 0..d {
            for b in 0..d {
                let ea = Element::basis(&data.shape, a);
                let eb = Element::basis(&data.shape, b);
                let lhs = gns.lambda(&ea).dotc(&gns.lambda(&eb));
                gns_res = gns_res.max((lhs - h(&(&ea.star() * &eb))).norm());
            }
        }
        rep.push(Check::new("gns-inner-product", "haar-state", gns_res, tol));
        rep
    }
}
