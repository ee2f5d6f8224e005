//! Completely positive factorization of Schur-type multipliers on the crossed
//! product through `B(z_F H_φ) ⊗ B`, and exact Følner vectors.

use crate::action::{
    coproduct_first_leg, coproduct_first_leg_w, ActionContext, CanonicalExtension, CrossedProduct,
    RepresentedAction,
};
use crate::algebra::{choi_of_operator_map, AlgebraShape, LinearMap, Representation};
use crate::error::{Error, Result};
use crate::linalg::{
    ampliate, cr, identity, kron, mul, mul3, nullspace, op_norm, slice_first, CMat, CVec, C64, RANK_TOL,
};
use crate::quantum_group::{convolution_apply, DualQuantumGroup, FiniteQuantumGroup};
use crate::report::{Check, ValidationReport};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const ANCHOR: &str = "schur-factorization";

/// A unit vector in `z_F H_φ` and how far `T_{ω_ξ}` is from the identity.
#[derive(Clone, Debug)]
pub struct FolnerVector {
    pub xi: CVec,
    /// Blocks of `A` making up `F`.
    pub support: Vec<usize>,
    /// `max_x ‖T_{ω_ξ}(x) − x‖` over the orthonormal basis of `Â`.
    pub defect: f64,
}

impl FolnerVector {
    /// Checks `‖ξ‖ = 1` and `z_F ξ = ξ`, then computes the defect.
    pub fn new(qg: &FiniteQuantumGroup, dual: &DualQuantumGroup, xi: CVec, support: Vec<usize>, tol: f64) -> Result<Self> {
        let z = qg.support_projection(&support)?;
        if xi.len() != qg.dim() {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} on a GNS space of dimension {}",
                xi.len(),
                qg.dim()
            )));
        }
        let norm_res = (xi.norm() - 1.0).abs();
        let supp_res = (&z * &xi - &xi).norm();
        if norm_res > tol || supp_res > tol {
            return Err(Error::NotUnitInSupport(format!(
                "norm defect {norm_res:e}, support defect {supp_res:e}"
            )));
        }
        let defect = folner_defect(dual, &xi);
        Ok(FolnerVector { xi, support, defect })
    }

    /// The GNS vector of the counit block, `δ_e` for `C(G)`.
    pub fn delta(qg: &FiniteQuantumGroup, dual: &DualQuantumGroup, tol: f64) -> Result<Self> {
        Self::new(qg, dual, qg.counit_vector(), vec![qg.counit_block], tol)
    }

    /// A seeded random unit vector on a random nonempty block set.
    pub fn random(qg: &FiniteQuantumGroup, dual: &DualQuantumGroup, seed: u64, tol: f64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let shape = qg.shape();
        let k = shape.num_blocks();
        let mut support: Vec<usize> = (0..k).filter(|_| rng.random_bool(0.5)).collect();
        if support.is_empty() {
            support.push(rng.random_range(0..k));
        }
        let z = qg.support_projection(&support)?;
        let v = CVec::from_fn(qg.dim(), |i, _| {
            if z[(i, i)].re > 0.5 {
                C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
            } else {
                cr(0.0)
            }
        });
        let n = v.norm();
        Self::new(qg, dual, v / cr(n), support, tol)
    }
}

/// `max_x ‖T_{ω_ξ}(x) − x‖_op` over the orthonormal basis of `Â`.
pub fn folner_defect(dual: &DualQuantumGroup, xi: &CVec) -> f64 {
    dual.basis()
        .iter()
        .map(|x| op_norm(&(convolution_apply(dual, xi, xi, x) - x)))
        .fold(0.0, f64::max)
}

/// The exact Følner vector: the joint eigenvector `xξ = ε̂(x)ξ` of `Â`,
/// which realizes `ε̂` as a vector state. Phase fixed so that the largest
/// entry is real and positive.
pub fn folner_vector(qg: &FiniteQuantumGroup, dual: &DualQuantumGroup, tol: f64) -> Result<FolnerVector> {
    let d = qg.dim();
    let basis = dual.basis();
    let mut stacked = CMat::zeros(d * basis.len(), d);
    for (k, x) in basis.iter().enumerate() {
        let shifted = x - identity(d) * dual.counit(x);
        stacked.view_mut((k * d, 0), (d, d)).copy_from(&shifted);
    }
    let ns = nullspace(&stacked, RANK_TOL);
    if ns.ncols() != 1 {
        return Err(Error::Numerical(format!(
            "counit eigenspace of the dual has dimension {}",
            ns.ncols()
        )));
    }
    let mut xi: CVec = ns.column(0).into_owned();
    let (imax, _) = xi
        .iter()
        .enumerate()
        .fold((0, -1.0), |acc, (i, z)| if z.norm() > acc.1 + 1e-12 { (i, z.norm()) } else { acc });
    let phase = xi[imax] / cr(xi[imax].norm());
    xi /= phase;
    xi /= cr(xi.norm());
    let support = (0..qg.shape().num_blocks()).collect();
    let v = FolnerVector::new(qg, dual, xi, support, tol.max(1e-10))?;
    if v.defect > tol {
        return Err(Error::Numerical(format!("Følner defect {:e}", v.defect)));
    }
    Ok(v)
}

/// `Φ_F` and `Ψ_ξ` for one action, one block set and one unit vector.
#[derive(Clone, Debug)]
pub struct FactorizationPair {
    pub xi: FolnerVector,
    /// Isometry `H_F → H_φ` whose columns are the chosen basis `(e_p)`.
    pub basis: CMat,
    /// `λ(ω_{ξ,e_p})` for each `p`.
    pub lambdas: Vec<CMat>,
    /// The row operator `V_ξ: H_F ⊗ H_φ → H_φ`.
    pub v_xi: CMat,
    /// `M_m ⊗ B` on `C^m ⊗ H_B`.
    pub codomain: Representation,
}

impl FactorizationPair {
    /// Canonical GNS basis of `z_F H_φ`.
    pub fn new(qg: &FiniteQuantumGroup, act: &RepresentedAction, xi: FolnerVector) -> Result<Self> {
        let order = support_indices(qg.shape(), &xi.support);
        Self::with_basis(qg, act, xi, &order)
    }

    /// The basis `(f_{order[p]})`; `order` must enumerate the support.
    pub fn with_basis(qg: &FiniteQuantumGroup, act: &RepresentedAction, xi: FolnerVector, order: &[usize]) -> Result<Self> {
        let mut expected = support_indices(qg.shape(), &xi.support);
        let mut given = order.to_vec();
        expected.sort_unstable();
        given.sort_unstable();
        if expected != given {
            return Err(Error::Input("basis order must enumerate the support".into()));
        }
        let d = qg.dim();
        let m = order.len();
        let mut basis = CMat::zeros(d, m);
        for (p, &a) in order.iter().enumerate() {
            basis[(a, p)] = cr(1.0);
        }
        let w = &qg.w.matrix;
        let lambdas: Vec<CMat> = (0..m)
            .map(|p| slice_first(w, &xi.xi, &basis.column(p).into_owned()))
            .collect();
        let mut v_xi = CMat::zeros(d, m * d);
        for (p, l) in lambdas.iter().enumerate() {
            v_xi.view_mut((0, p * d), (d, d)).copy_from(l);
        }
        let codomain = Representation::defining(&AlgebraShape::full(m)).tensor(&act.target);
        Ok(FactorizationPair {
            xi,
            basis,
            lambdas,
            v_xi,
            codomain,
        })
    }

    pub fn m(&self) -> usize {
        self.basis.ncols()
    }

    /// `‖V_ξ V_ξ* − I‖`.
    pub fn coisometry_residual(&self) -> f64 {
        (&self.v_xi * self.v_xi.adjoint() - identity(self.v_xi.nrows())).norm()
    }

    /// `Φ_F(y) = (z_F ⊗ I) y (z_F ⊗ I)`, as an operator on `H_F ⊗ H_B`.
    pub fn phi(&self, act: &RepresentedAction, y: &CMat) -> CMat {
        let j = kron(&self.basis, &identity(act.dim_b()));
        mul3(&j.adjoint(), y, &j)
    }

    /// `Ψ_ξ = R_{V_ξ} ∘ (id ⊗ α)` for `t` on `H_F ⊗ H_B`.
    pub fn psi(&self, act: &RepresentedAction, t: &CMat) -> CMat {
        let (m, db, n) = (self.m(), act.dim_b(), act.hilbert_dim());
        let i = identity(db);
        let legs: Vec<CMat> = self.lambdas.iter().map(|l| kron(l, &i)).collect();
        let mut out = CMat::zeros(n, n);
        for q in 0..m {
            // Σ_p (λ_p ⊗ 1) α(t_pq)
            let mut col: Option<CMat> = None;
            for (p, leg) in legs.iter().enumerate() {
                let blk = t.view((p * db, q * db), (db, db));
                if blk.norm() != 0.0 {
                    let term = mul(leg, &act.apply_op(&blk.into_owned()));
                    match &mut col {
                        Some(c) => *c += term,
                        None => col = Some(term),
                    }
                }
            }
            if let Some(c) = col {
                out += mul(&c, &legs[q].adjoint());
            }
        }
        out
    }

    /// `Ψ_ξ` straight from the definition, through `(id ⊗ α)` on all of `H_F ⊗ H_B`.
    pub fn psi_literal(&self, act: &RepresentedAction, t: &CMat) -> CMat {
        self.row_compress(act, &ampliate(t, self.m(), |blk| act.apply_op(blk)))
    }

    /// `R_{V_ξ}(T) = (V_ξ ⊗ I) T (V_ξ* ⊗ I)` for `T` on `H_F ⊗ H_φ ⊗ H_B`.
    pub fn row_compress(&self, act: &RepresentedAction, t: &CMat) -> CMat {
        let m = self.m();
        let n = act.hilbert_dim();
        let vb = kron(&self.v_xi, &identity(act.dim_b()));
        let mut left = CMat::zeros(n, m * n);
        for p in 0..m {
            let vp = vb.view((0, p * n), (n, n));
            for q in 0..m {
                let blk = t.view((p * n, q * n), (n, n));
                if blk.norm() != 0.0 {
                    let mut target = left.view_mut((0, q * n), (n, n));
                    target += mul(&vp.into_owned(), &blk.into_owned());
                }
            }
        }
        mul(&left, &vb.adjoint())
    }

    /// `Ψ_ξ(e_pq ⊗ b) = (λ(ω_{ξ,e_p}) ⊗ I) α(b) (λ(ω_{ξ,e_q})* ⊗ I)`.
    pub fn psi_matrix_unit(&self, act: &RepresentedAction, p: usize, q: usize, b: &CMat) -> CMat {
        let i = identity(act.dim_b());
        kron(&self.lambdas[p], &i) * act.apply_op(b) * kron(&self.lambdas[q].adjoint(), &i)
    }

    /// `(id_{B(H_F)} ⊗ γ)(t)`.
    pub fn ampliate_map(&self, act: &RepresentedAction, gamma: &LinearMap, t: &CMat) -> CMat {
        ampliate(t, self.m(), |blk| {
            let b = act.target.element(blk);
            act.target.apply(&gamma.apply(&b).expect("domain"))
        })
    }
}

/// GNS indices of the blocks in `support`, in canonical order.
pub fn support_indices(shape: &AlgebraShape, support: &[usize]) -> Vec<usize> {
    let mut blocks = support.to_vec();
    blocks.sort_unstable();
    blocks.dedup();
    blocks
        .iter()
        .flat_map(|&i| {
            let n = shape.blocks()[i];
            let o = shape.offset(i);
            o..o + n * n
        })
        .collect()
}

/// `max_y ‖(Ψ∘Φ)(y) − y‖_op` over the orthonormal basis of the crossed product.
pub fn approximation_defect(pair: &FactorizationPair, act: &RepresentedAction, cp: &CrossedProduct) -> f64 {
    cp.basis()
        .iter()
        .map(|y| op_norm(&(pair.psi(act, &pair.phi(act, y)) - y)))
        .fold(0.0, f64::max)
}

/// Certificates for one factorization pair. `extensions` holds the canonical
/// extensions of the commuting maps to check equivariance for.
pub fn verify_schur(
    ctx: &ActionContext,
    cp: &CrossedProduct,
    pair: &FactorizationPair,
    extensions: &[(String, &LinearMap, CanonicalExtension)],
    tol: f64,
) -> ValidationReport {
    let act = &ctx.rep;
    let qg = &ctx.qg;
    let dual = &ctx.dual;
    let m = pair.m();
    let d = qg.dim();
    let db = act.dim_b();
    let xi = &pair.xi.xi;
    let mut rep = ValidationReport::default();

    rep.push(Check::new("coisometry", ANCHOR, pair.coisometry_residual(), tol.min(1e-12)));

    // Φ_F
    let mut phi_image = 0.0f64;
    let mut phi_act = 0.0f64;
    let j = &pair.basis;
    let zf = j * j.adjoint();
    for (g, &(t, k)) in cp.generators.iter().zip(&cp.generator_index) {
        let img = pair.phi(act, g);
        phi_image = phi_image.max(pair.codomain.residual(&img));
        let x = &dual.basis()[k];
        let rhs = mul3(
            &kron(&j.adjoint(), &identity(db)),
            &mul(&act.images[t], &act.dual_leg(&(&zf * x * &zf))),
            &kron(j, &identity(db)),
        );
        phi_act = phi_act.max(op_norm(&(img - rhs)));
    }
    rep.push(Check::new("phi-image-in-matrix-algebra", ANCHOR, phi_image, tol));
    rep.push(Check::new("phi-compression", ANCHOR, phi_act, tol));
    let phi_choi = choi_of_operator_map(&cp.wedderburn.rep, &identity(m * db), |y| pair.phi(act, y));
    rep.push(Check::new("phi-unital", ANCHOR, phi_choi.unital_residual, tol));
    rep.push(Check::new("phi-cp", ANCHOR, (-phi_choi.min_eigenvalue).max(0.0), tol));

    // Ψ_ξ
    let mut psi_range = 0.0f64;
    let mut matun = 0.0f64;
    let bshape = act.target.shape();
    for p in 0..m {
        for q in 0..m {
            for t in 0..bshape.dim() {
                let b = act.target.image(t);
                let unit = kron(&crate::linalg::matrix_unit(m, p, q), b);
                let a = pair.psi(act, &unit);
                psi_range = psi_range.max(cp.algebra.residual(&a));
                matun = matun.max(op_norm(&(a - pair.psi_matrix_unit(act, p, q, b))));
            }
        }
    }
    rep.push(Check::new("psi-range-in-crossed-product", ANCHOR, psi_range, tol));
    rep.push(Check::new("psi-matrix-units", ANCHOR, matun, tol));
    let n = act.hilbert_dim();
    let psi_choi = choi_of_operator_map(&pair.codomain, &identity(n), |t| pair.psi(act, t));
    rep.push(Check::new("psi-unital", ANCHOR, psi_choi.unital_residual, tol));
    rep.push(Check::new("psi-cp", ANCHOR, (-psi_choi.min_eigenvalue).max(0.0), tol));

    // the multiplier identity and the three intermediate identities
    let mut schur = 0.0f64;
    let mut psi_routes = 0.0f64;
    for (g, &(t, k)) in cp.generators.iter().zip(&cp.generator_index) {
        let phi_g = pair.phi(act, g);
        let lhs = pair.psi(act, &phi_g);
        psi_routes = psi_routes.max(op_norm(&(&lhs - pair.psi_literal(act, &phi_g))));
        let tx = convolution_apply(dual, xi, xi, &dual.basis()[k]);
        let rhs = &act.images[t] * act.dual_leg(&tx);
        schur = schur.max(op_norm(&(lhs - rhs)));
    }
    rep.push(Check::new("schur", ANCHOR, schur, tol));
    rep.push(Check::new("psi-two-routes", ANCHOR, psi_routes, tol));

    let mut xapprox = 0.0f64;
    for x in dual.basis() {
        let compressed = j.adjoint() * x * j;
        let lhs = mul3(&pair.v_xi, &kron(&compressed, &identity(d)), &pair.v_xi.adjoint());
        xapprox = xapprox.max(op_norm(&(lhs - convolution_apply(dual, xi, xi, x))));
    }
    rep.push(Check::new("xapprox", ANCHOR, xapprox, tol));

    let mut zfact = 0.0f64;
    let mut long = 0.0f64;
    let jb = kron(j, &identity(db));
    let j3 = kron(j, &identity(d * db));
    let vb = kron(&pair.v_xi, &identity(db));
    for a in &act.images {
        let lhs = ampliate(&mul3(&jb.adjoint(), a, &jb), m, |blk| act.apply_op(blk));
        let (delta, _) = coproduct_first_leg(qg, a);
        let rhs = mul3(&j3.adjoint(), &delta, &j3);
        zfact = zfact.max(op_norm(&(lhs - rhs)));
        let delta_w = coproduct_first_leg_w(qg, a);
        let l = mul(&vb, &mul3(&j3.adjoint(), &delta_w, &j3));
        long = long.max(op_norm(&(l - mul(a, &vb))));
    }
    rep.push(Check::new("zfact", ANCHOR, zfact, tol));
    rep.push(Check::new("long", ANCHOR, long, tol));

    // Ψ∘Φ does not depend on the basis of H_F
    let mut reversed = support_indices(qg.shape(), &pair.xi.support);
    reversed.reverse();
    let basis_res = match FactorizationPair::with_basis(qg, act, pair.xi.clone(), &reversed) {
        Ok(other) => cp
            .basis()
            .iter()
            .map(|y| {
                let a = pair.psi(act, &pair.phi(act, y));
                let b = other.psi(act, &other.phi(act, y));
                op_norm(&(a - b))
            })
            .fold(0.0, f64::max),
        Err(_) => f64::INFINITY,
    };
    rep.push(Check::new("basis-independence", ANCHOR, basis_res, tol));

    for (name, gamma, ext) in extensions {
        let mut phi_eq = 0.0f64;
        for y in cp.basis() {
            let lhs = pair.phi(act, &ext.apply(cp, y));
            let rhs = pair.ampliate_map(act, gamma, &pair.phi(act, y));
            phi_eq = phi_eq.max(op_norm(&(lhs - rhs)));
        }
        let mut psi_eq = 0.0f64;
        for p in 0..m {
            for q in 0..m {
                for t in 0..bshape.dim() {
                    let unit = kron(&crate::linalg::matrix_unit(m, p, q), act.target.image(t));
                    let lhs = pair.psi(act, &pair.ampliate_map(act, gamma, &unit));
                    let rhs = ext.apply(cp, &pair.psi(act, &unit));
                    psi_eq = psi_eq.max(op_norm(&(lhs - rhs)));
                }
            }
        }
        rep.push(Check::new(format!("phi-equivariance:{name}"), ANCHOR, phi_eq, tol));
        rep.push(Check::new(format!("psi-equivariance:{name}"), ANCHOR, psi_eq, tol));
    }
    rep
}
