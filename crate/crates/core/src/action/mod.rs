//! Actions `α: B → A ⊗ B` of finite quantum groups, their realization on
//! `H_φ ⊗ H_B`, reduced crossed products, the conditional expectation onto
//! `α(B)` and canonical extensions of commuting maps.

mod crossed;

pub use crossed::{
    build_crossed_product, conditional_expectation, expectation_report, extend_commuting_map,
    slice_extension, CanonicalExtension, CrossedProduct,
};

use crate::algebra::{AlgebraShape, Element, LinearMap, Property, Representation};
use crate::error::{Error, Result};
use crate::linalg::{ampliate, kron, identity, rank, slice_first, CMat, CVec, RANK_TOL};
use crate::quantum_group::{DualQuantumGroup, FiniteQuantumGroup, QuantumGroupData};
use crate::report::{Check, ValidationReport};

/// An action together with the maps declared to commute with it.
#[derive(Clone, Debug)]
pub struct ActionData {
    pub name: String,
    pub qg: QuantumGroupData,
    pub target: AlgebraShape,
    /// `B → A ⊗ B`.
    pub alpha: LinearMap,
    pub commuting: Vec<(String, LinearMap)>,
}

/// Certify (act), (invcou), injectivity and the *-homomorphism property.
pub fn validate_action(qg: &QuantumGroupData, target: &AlgebraShape, alpha: &LinearMap, tol: f64) -> Result<ValidationReport> {
    const ANCHOR: &str = "action-axioms";
    let ab = qg.shape.tensor(target);
    if alpha.domain() != target || alpha.codomain() != &ab {
        return Err(Error::DimensionMismatch("action must map B to A⊗B".into()));
    }
    let mut rep = ValidationReport::default();
    let id_a = LinearMap::identity(&qg.shape);
    let id_b = LinearMap::identity(target);
    let lhs = qg.coproduct.tensor(&id_b).compose(alpha)?;
    let rhs = id_a.tensor(alpha).compose(alpha)?;
    rep.push(Check::new("coaction", ANCHOR, lhs.sub(&rhs)?.fro_norm(), tol));

    let invcou = qg.counit.tensor(&id_b).compose(alpha)?;
    let invcou_res = (invcou.matrix() - id_b.matrix()).norm();
    rep.push(Check::new("counit-invariance", ANCHOR, invcou_res, tol));

    let nullity = target.dim() - rank(alpha.matrix(), RANK_TOL);
    rep.push(Check::new("injective", ANCHOR, nullity as f64, 0.0));
    rep.push(Check::new(
        "homomorphism",
        ANCHOR,
        alpha.property_residual(Property::StarHomomorphic),
        tol,
    ));
    // under (act), (invcou) and injectivity must agree
    let act_ok = rep.checks[0].pass;
    let agree = !act_ok || ((invcou_res <= tol) == (nullity == 0));
    rep.push(Check::fact("counit-invariance-iff-injective", ANCHOR, agree));
    Ok(rep)
}

/// An action realized on `H_φ ⊗ H_B` by the images of the matrix units of `B`.
#[derive(Clone, Debug)]
pub struct RepresentedAction {
    pub dim_phi: usize,
    pub target: Representation,
    pub images: Vec<CMat>,
    /// GNS vector of the counit block; `ε = ω_{f_ε}` on `π(A)`.
    pub counit_vector: CVec,
    entries: Vec<Vec<(usize, crate::linalg::C64)>>,
}

impl RepresentedAction {
    pub fn new(qg: &FiniteQuantumGroup, target: Representation, alpha: &LinearMap) -> Self {
        let big = qg.gns.pi.tensor(&target);
        let images = (0..target.shape().dim())
            .map(|t| {
                let img = alpha
                    .apply(&Element::basis(target.shape(), t))
                    .expect("domain");
                big.apply(&img)
            })
            .collect();
        Self::from_images(qg, target, images)
    }

    /// From operator images directly, for actions built at operator level.
    pub fn from_images(qg: &FiniteQuantumGroup, target: Representation, images: Vec<CMat>) -> Self {
        RepresentedAction {
            dim_phi: qg.dim(),
            target,
            entries: crate::linalg::nonzero_entries(&images),
            images,
            counit_vector: qg.counit_vector(),
        }
    }

    pub fn dim_b(&self) -> usize {
        self.target.dim()
    }

    pub fn hilbert_dim(&self) -> usize {
        self.dim_phi * self.target.dim()
    }

    pub fn apply_coords(&self, v: &CVec) -> CMat {
        let n = self.hilbert_dim();
        crate::linalg::combine_entries(&self.entries, v, n, n)
    }

    /// `α(b)` for `b` given as an operator on `H_B`.
    pub fn apply_op(&self, b: &CMat) -> CMat {
        self.apply_coords(&self.target.coords(b))
    }

    /// `(ε ⊗ id)(y)`.
    pub fn counit_slice(&self, y: &CMat) -> CMat {
        slice_first(y, &self.counit_vector, &self.counit_vector)
    }

    /// `(id ⊗ α)(Y)` for `Y` on `H_φ ⊗ H_B`.
    pub fn ampliate(&self, y: &CMat) -> CMat {
        ampliate(y, self.dim_phi, |blk| self.apply_op(blk))
    }

    /// `Â ⊗ 1` embedded on `H_φ ⊗ H_B`.
    pub fn dual_leg(&self, x: &CMat) -> CMat {
        kron(x, &identity(self.dim_b()))
    }

    /// Operator-level (act), (invcou), injectivity and homomorphism checks.
    pub fn validate(&self, qg: &FiniteQuantumGroup, tol: f64) -> ValidationReport {
        const ANCHOR: &str = "action-axioms";
        let mut rep = ValidationReport::default();
        let mut act = 0.0f64;
        let mut route = 0.0f64;
        let mut leg = 0.0f64;
        let mut invcou = 0.0f64;
        let mut hom = 0.0f64;
        let shape = self.target.shape();
        for (t, img) in self.images.iter().enumerate() {
            let (lhs, res) = coproduct_first_leg(qg, img);
            leg = leg.max(res);
            let rhs = self.ampliate(img);
            act = act.max((&lhs - &rhs).norm());
            route = route.max((&lhs - coproduct_first_leg_w(qg, img)).norm());
            invcou = invcou.max((self.counit_slice(img) - self.target.image(t)).norm());
            let (i, r, s) = shape.locate(t);
            hom = hom.max((img.adjoint() - &self.images[shape.index(i, s, r)]).norm());
            for (u, img2) in self.images.iter().enumerate() {
                let (j, r2, s2) = shape.locate(u);
                let prod = img * img2;
                let expect = if i == j && s == r2 {
                    (&prod - &self.images[shape.index(i, r, s2)]).norm()
                } else {
                    prod.norm()
                };
                hom = hom.max(expect);
            }
        }
        let unit = self.apply_op(&self.target.unit());
        hom = hom.max((unit - identity(self.hilbert_dim())).norm());
        let m = crate::linalg::stack_columns(&self.images, self.hilbert_dim() * self.hilbert_dim());
        let nullity = shape.dim() - rank(&m, RANK_TOL);
        rep.push(Check::new("first-leg-in-algebra", ANCHOR, leg, tol));
        rep.push(Check::new("coaction", ANCHOR, act, tol));
        rep.push(Check::new("coproduct-two-routes", ANCHOR, route, tol));
        rep.push(Check::new("counit-invariance", ANCHOR, invcou, tol));
        rep.push(Check::new("injective", ANCHOR, nullity as f64, 0.0));
        rep.push(Check::new("homomorphism", ANCHOR, hom, tol));
        rep
    }
}

/// `(Δ ⊗ id)(Y)` for `Y ∈ π(A) ⊗ B(K)`, by expanding the first leg in the
/// matrix units of `A`. Also returns the distance of the first leg from `π(A)`.
pub fn coproduct_first_leg(qg: &FiniteQuantumGroup, y: &CMat) -> (CMat, f64) {
    let d = qg.dim();
    let k = y.nrows() / d;
    let pi = &qg.gns.pi;
    let pi2 = qg.gns.pi2();
    let shape = qg.shape();
    // Y = Σ_{pq} E_pq ⊗ Y_pq; first-leg coordinates of each E_pq
    let mut legs: Vec<CMat> = vec![CMat::zeros(k, k); shape.dim()];
    let mut rebuilt = CMat::zeros(y.nrows(), y.ncols());
    for p in 0..d {
        for q in 0..d {
            let blk = crate::linalg::block(y, d, p, q);
            if blk.norm() == 0.0 {
                continue;
            }
            let e = crate::linalg::matrix_unit(d, p, q);
            let coords = pi.coords(&e);
            for (a, c) in coords.iter().enumerate() {
                if c.norm() != 0.0 {
                    legs[a] += &blk * *c;
                }
            }
        }
    }
    let mut out = CMat::zeros(d * d * k, d * d * k);
    for (a, leg) in legs.iter().enumerate() {
        if leg.norm() == 0.0 {
            continue;
        }
        rebuilt += kron(pi.image(a), leg);
        let da = pi2.apply(&qg.data.coproduct.apply(&Element::basis(shape, a)).expect("domain"));
        out += kron(&da, leg);
    }
    (out, (y - rebuilt).norm())
}

/// `(Δ ⊗ id)(Y) = (W* ⊗ 1)(1 ⊗ Y)(W ⊗ 1)`.
pub fn coproduct_first_leg_w(qg: &FiniteQuantumGroup, y: &CMat) -> CMat {
    let d = qg.dim();
    let k = y.nrows() / d;
    let w1 = kron(&qg.w.matrix, &identity(k));
    crate::linalg::mul3(&w1.adjoint(), &kron(&identity(d), y), &w1)
}

/// A validated action with everything needed downstream.
#[derive(Clone, Debug)]
pub struct ActionContext {
    pub data: ActionData,
    pub qg: FiniteQuantumGroup,
    pub dual: DualQuantumGroup,
    pub rep: RepresentedAction,
    pub validation: ValidationReport,
}

impl ActionContext {
    pub fn new(data: ActionData, tol: f64) -> Result<Self> {
        let validation = validate_action(&data.qg, &data.target, &data.alpha, tol)?;
        if !validation.all_pass() {
            let failed: Vec<String> = validation
                .failures()
                .iter()
                .map(|c| format!("{} ({:e})", c.check, c.residual))
                .collect();
            return Err(Error::InvalidAction(failed.join(", ")));
        }
        let qg = FiniteQuantumGroup::new(data.qg.clone(), tol)?;
        let dual = DualQuantumGroup::new(&qg, tol)?;
        let rep = RepresentedAction::new(&qg, Representation::defining(&data.target), &data.alpha);
        Ok(ActionContext {
            data,
            qg,
            dual,
            rep,
            validation,
        })
    }

    pub fn commuting_map(&self, name: &str) -> Result<&LinearMap> {
        self.data
            .commuting
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, m)| m)
            .ok_or_else(|| Error::UnknownEntry(format!("commuting map {name}")))
    }
}

/// `‖(id ⊗ γ)α − αγ‖` in the canonical bases.
pub fn commutation_residual(qg: &QuantumGroupData, alpha: &LinearMap, gamma: &LinearMap) -> Result<f64> {
    let lhs = LinearMap::identity(&qg.shape).tensor(gamma).compose(alpha)?;
    let rhs = alpha.compose(gamma)?;
    Ok(lhs.sub(&rhs)?.fro_norm())
}
