//! Finite quantum groups: Hopf *-algebra axioms, Haar state, the GNS space,
//! the multiplicative unitary and the dual quantum group.

mod dual;
mod gns;

pub use dual::{convolution_apply, convolution_t, DualQuantumGroup};
pub use gns::{Gns, MultiplicativeUnitary};

use crate::algebra::{AlgebraShape, Element, LinearMap, Property, StateFunctional};
use crate::error::{Error, Result};
use crate::linalg::{cr, nullspace, CMat, CVec, C64, RANK_TOL};
use crate::report::{Check, ValidationReport};

/// Structure maps of a candidate finite quantum group on a multimatrix algebra.
#[derive(Clone, Debug)]
pub struct QuantumGroupData {
    pub name: String,
    pub shape: AlgebraShape,
    /// `A → A ⊗ A`.
    pub coproduct: LinearMap,
    /// `A → C`, codomain shape `[1]`.
    pub counit: LinearMap,
    /// `A → A`.
    pub antipode: LinearMap,
}

impl QuantumGroupData {
    pub fn new(
        name: &str,
        shape: AlgebraShape,
        coproduct: LinearMap,
        counit: LinearMap,
        antipode: LinearMap,
    ) -> Result<Self> {
        let aa = shape.tensor(&shape);
        let one = AlgebraShape::full(1);
        if coproduct.domain() != &shape || coproduct.codomain() != &aa {
            return Err(Error::DimensionMismatch("coproduct must map A to A⊗A".into()));
        }
        if counit.domain() != &shape || counit.codomain() != &one {
            return Err(Error::DimensionMismatch("counit must map A to C".into()));
        }
        if antipode.domain() != &shape || antipode.codomain() != &shape {
            return Err(Error::DimensionMismatch("antipode must map A to A".into()));
        }
        Ok(QuantumGroupData {
            name: name.to_string(),
            shape,
            coproduct,
            counit,
            antipode,
        })
    }
}

/// Certify the Hopf *-algebra axioms and the existence of a Haar state.
pub fn validate_quantum_group(data: &QuantumGroupData, tol: f64) -> ValidationReport {
    const ANCHOR: &str = "finite-quantum-group-axioms";
    let mut rep = ValidationReport::default();
    let a = &data.shape;
    let id = LinearMap::identity(a);
    let delta = &data.coproduct;
    let eps = &data.counit;

    let left = delta.tensor(&id).compose(delta).expect("shapes");
    let right = id.tensor(delta).compose(delta).expect("shapes");
    rep.push(Check::new(
        "coassociativity",
        ANCHOR,
        left.sub(&right).expect("shapes").fro_norm(),
        tol,
    ));

    // C ⊗ A and A ⊗ C have the same canonical basis as A
    let ce = eps.tensor(&id).compose(delta).expect("shapes");
    let ec = id.tensor(eps).compose(delta).expect("shapes");
    let counit_res = (ce.matrix() - id.matrix())
        .norm()
        .max((ec.matrix() - id.matrix()).norm());
    rep.push(Check::new("counit-property", ANCHOR, counit_res, tol));

    rep.push(Check::new(
        "coproduct-homomorphism",
        ANCHOR,
        delta.property_residual(Property::StarHomomorphic),
        tol,
    ));
    rep.push(Check::new(
        "counit-character",
        ANCHOR,
        eps.property_residual(Property::StarHomomorphic),
        tol,
    ));

    let m = LinearMap::multiplication(a);
    let unit_eps = LinearMap::unit(a).compose(eps).expect("shapes");
    let s = &data.antipode;
    let sl = m
        .compose(&s.tensor(&id))
        .and_then(|x| x.compose(delta))
        .expect("shapes");
    let sr = m
        .compose(&id.tensor(s))
        .and_then(|x| x.compose(delta))
        .expect("shapes");
    let anti = (sl.matrix() - unit_eps.matrix())
        .norm()
        .max((sr.matrix() - unit_eps.matrix()).norm());
    rep.push(Check::new("antipode-property", ANCHOR, anti, tol));

    let s2 = s.compose(s).expect("shapes");
    rep.push(Check::new(
        "antipode-involutive",
        ANCHOR,
        (s2.matrix() - id.matrix()).norm(),
        tol,
    ));

    rep.push(Check::new(
        "cancellation",
        ANCHOR,
        cancellation_deficiency(data) as f64,
        0.0,
    ));

    let haar_anchor = "haar-state";
    match compute_haar(a, delta, tol) {
        Ok(h) => {
            rep.push(Check::new("haar-exists", haar_anchor, 0.0, tol));
            let w = h.trace_weights(tol.max(1e-10));
            rep.push(Check::fact("haar-tracial", haar_anchor, w.is_some()));
            rep.push(Check::fact("haar-faithful", haar_anchor, h.is_faithful(0.0)));
        }
        Err(Error::HaarNotFound(k)) => {
            rep.push(Check::new(
                "haar-exists",
                haar_anchor,
                (k as f64 - 1.0).abs().max(1.0),
                tol,
            ));
        }
        Err(_) => rep.push(Check::new("haar-exists", haar_anchor, 1.0, tol)),
    }
    rep
}

/// `dim(A)^2 − dim span{Δ(a)(1⊗b)}`; zero for a quantum group.
fn cancellation_deficiency(data: &QuantumGroupData) -> usize {
    let a = &data.shape;
    let d = a.dim();
    let one = Element::identity(a);
    let mut cols = CMat::zeros(d * d, d * d);
    let images: Vec<Element> = (0..d)
        .map(|x| data.coproduct.apply(&Element::basis(a, x)).expect("domain"))
        .collect();
    let mut k = 0;
    for img in &images {
        for y in 0..d {
            let v = (img * &one.tensor(&Element::basis(a, y))).coords();
            cols.set_column(k, &v);
            k += 1;
        }
    }
    d * d - crate::linalg::rank(&cols, RANK_TOL)
}

/// The unique left and right invariant state, if there is exactly one.
pub fn compute_haar(shape: &AlgebraShape, coproduct: &LinearMap, tol: f64) -> Result<StateFunctional> {
    let d = shape.dim();
    let one = Element::identity(shape).coords();
    let mut sys = CMat::zeros(2 * d * d, d);
    let dm = coproduct.matrix();
    for alpha in 0..d {
        for t in 0..d * d {
            let v = dm[(t, alpha)];
            if v == C64::new(0.0, 0.0) {
                continue;
            }
            let (g, b) = shape.tensor_split(shape, t);
            // (id ⊗ h)Δ(e_α), coordinate γ
            sys[(alpha * d + g, b)] += v;
            // (h ⊗ id)Δ(e_α), coordinate β
            sys[(d * d + alpha * d + b, g)] += v;
        }
        for g in 0..d {
            sys[(alpha * d + g, alpha)] -= one[g];
            sys[(d * d + alpha * d + g, alpha)] -= one[g];
        }
    }
    let null = nullspace(&sys, RANK_TOL);
    if null.ncols() != 1 {
        return Err(Error::HaarNotFound(null.ncols()));
    }
    let h: CVec = null.column(0).into_owned();
    let norm = (0..d).map(|a| h[a] * one[a]).sum::<C64>();
    if norm.norm() < 1e-12 {
        return Err(Error::HaarNotFound(0));
    }
    let h = h / norm;
    StateFunctional::from_values(shape, &h, tol.max(1e-9))
}

/// Solve `m(S⊗id)Δ = m(id⊗S)Δ = ηε` for `S`.
pub fn solve_antipode(shape: &AlgebraShape, coproduct: &LinearMap, counit: &LinearMap) -> Result<LinearMap> {
    let d = shape.dim();
    let one = Element::identity(shape).coords();
    let dm = coproduct.matrix();
    // unknown s[(δ, β)] stored at δ * d + β
    let mut sys = CMat::zeros(2 * d * d, d * d);
    let mut rhs = CVec::zeros(2 * d * d);
    for alpha in 0..d {
        let e = counit.matrix()[(0, alpha)];
        for g in 0..d {
            rhs[alpha * d + g] = e * one[g];
            rhs[d * d + alpha * d + g] = e * one[g];
        }
        for t in 0..d * d {
            let v = dm[(t, alpha)];
            if v == C64::new(0.0, 0.0) {
                continue;
            }
            let (b, g) = shape.tensor_split(shape, t);
            let (gi, gr, gs) = shape.locate(g);
            let (bi, br, bs) = shape.locate(b);
            for delta in 0..d {
                let (di, dr, ds) = shape.locate(delta);
                // S(e_β) e_γ
                if di == gi && ds == gr {
                    sys[(alpha * d + shape.index(di, dr, gs), delta * d + b)] += v;
                }
                // e_β S(e_γ)
                if bi == di && bs == dr {
                    sys[(d * d + alpha * d + shape.index(bi, br, ds), delta * d + g)] += v;
                }
            }
        }
    }
    let sol = crate::linalg::lstsq(&sys, &rhs, 1e-10);
    let res = (&sys * &sol - &rhs).norm();
    if res > 1e-8 {
        return Err(Error::InvalidQuantumGroup(format!("no antipode (residual {res:e})")));
    }
    let mut m = CMat::zeros(d, d);
    for delta in 0..d {
        for b in 0..d {
            m[(delta, b)] = sol[delta * d + b];
        }
    }
    LinearMap::new(shape, shape, m)
}

/// A validated finite quantum group with its Haar state and GNS data.
#[derive(Clone, Debug)]
pub struct FiniteQuantumGroup {
    pub data: QuantumGroupData,
    pub haar: StateFunctional,
    /// `h = Σ_i w_i Tr_i`.
    pub weights: Vec<f64>,
    /// The one-dimensional block on which the counit lives.
    pub counit_block: usize,
    pub gns: Gns,
    pub w: MultiplicativeUnitary,
}

impl FiniteQuantumGroup {
    pub fn new(data: QuantumGroupData, tol: f64) -> Result<Self> {
        let report = validate_quantum_group(&data, tol);
        if !report.all_pass() {
            let failed: Vec<String> = report
                .failures()
                .iter()
                .map(|c| format!("{} ({:e})", c.check, c.residual))
                .collect();
            return Err(Error::InvalidQuantumGroup(failed.join(", ")));
        }
        let haar = compute_haar(&data.shape, &data.coproduct, tol)?;
        let weights = haar
            .trace_weights(tol.max(1e-10))
            .ok_or_else(|| Error::InvalidQuantumGroup("Haar state is not tracial".into()))?;
        let counit_block = (0..data.shape.num_blocks())
            .find(|&i| {
                data.shape.blocks()[i] == 1
                    && (data.counit.matrix()[(0, data.shape.offset(i))] - cr(1.0)).norm() < 1e-9
            })
            .ok_or_else(|| Error::InvalidQuantumGroup("counit is not a block character".into()))?;
        let gns = Gns::new(&data.shape, &weights);
        let w = MultiplicativeUnitary::new(&data, &gns);
        Ok(FiniteQuantumGroup {
            data,
            haar,
            weights,
            counit_block,
            gns,
            w,
        })
    }

    pub fn shape(&self) -> &AlgebraShape {
        &self.data.shape
    }

    pub fn dim(&self) -> usize {
        self.data.shape.dim()
    }

    /// GNS index of the counit's minimal central projection.
    pub fn counit_vector(&self) -> CVec {
        crate::linalg::unit_vector(self.dim(), self.data.shape.offset(self.counit_block))
    }

    /// Projection onto the GNS vectors of the blocks in `support`.
    pub fn support_projection(&self, support: &[usize]) -> Result<CMat> {
        if support.is_empty() {
            return Err(Error::EmptySupport);
        }
        let d = self.dim();
        let mut p = CMat::zeros(d, d);
        for &i in support {
            if i >= self.data.shape.num_blocks() {
                return Err(Error::Input(format!("block {i} out of range")));
            }
            let n = self.data.shape.blocks()[i];
            for k in 0..n * n {
                let a = self.data.shape.offset(i) + k;
                p[(a, a)] = cr(1.0);
            }
        }
        Ok(p)
    }

    /// `(id ⊗ h)Δ(x) = h(x)1 = (h ⊗ id)Δ(x)` on the basis, and `h(1) = 1`.
    pub fn haar_report(&self, tol: f64) -> ValidationReport {
        const ANCHOR: &str = "haar-state";
        let a = self.shape();
        let d = a.dim();
        let h = self.haar.as_functional();
        let one = Element::identity(a).coords();
        let (mut left, mut right) = (0.0f64, 0.0f64);
        for x in 0..d {
            let dx = self.data.coproduct.apply(&Element::basis(a, x)).expect("domain").coords();
            let mut l = CVec::zeros(d);
            let mut r = CVec::zeros(d);
            for t in 0..d * d {
                let (i, j) = a.tensor_split(a, t);
                l[i] += dx[t] * h[j];
                r[j] += dx[t] * h[i];
            }
            left = left.max((l - &one * h[x]).norm());
            right = right.max((r - &one * h[x]).norm());
        }
        let mut rep = ValidationReport::default();
        rep.push(Check::new("haar-invariance-id-h", ANCHOR, left, tol));
        rep.push(Check::new("haar-invariance-h-id", ANCHOR, right, tol));
        rep.push(Check::new("haar-normalized", ANCHOR, (one.dot(&h) - cr(1.0)).norm(), tol));
        rep
    }

    /// Certificates for the multiplicative unitary and the GNS space.
    pub fn unitary_report(&self, tol: f64) -> ValidationReport {
        self.w.report(&self.data, &self.gns, tol)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn haar_of_c_z2_is_uniform() {
        let qg = catalog::quantum_group("fn_group:Z2").unwrap();
        let h = compute_haar(&qg.shape, &qg.coproduct, 1e-9).unwrap();
        let v = h.as_functional();
        assert!((v[0] - cr(0.5)).norm() < 1e-12);
        assert!((v[1] - cr(0.5)).norm() < 1e-12);
    }

    #[test]
    fn antipode_solver_recovers_catalog_antipode() {
        for name in ["fn_group:S3", "group_alg:S3", "kac_paljutkin"] {
            let qg = catalog::quantum_group(name).unwrap();
            let s = solve_antipode(&qg.shape, &qg.coproduct, &qg.counit).unwrap();
            assert!((s.matrix() - qg.antipode.matrix()).norm() < 1e-9, "{name}");
        }
    }

    #[test]
    fn support_projection_rejects_empty() {
        let qg = FiniteQuantumGroup::new(catalog::quantum_group("fn_group:Z2").unwrap(), 1e-9).unwrap();
        assert!(matches!(qg.support_projection(&[]), Err(Error::EmptySupport)));
        let p = qg.support_projection(&[1]).unwrap();
        assert_eq!(p.trace(), cr(1.0));
    }

    #[test]
    fn catalog_quantum_groups_validate() {
        for name in [
            "fn_group:Z1",
            "fn_group:Z2",
            "fn_group:Z3",
            "fn_group:S3",
            "group_alg:Z2",
            "group_alg:S3",
            "kac_paljutkin",
        ] {
            let rep = validate_quantum_group(&catalog::quantum_group(name).unwrap(), 1e-9);
            assert!(rep.all_pass(), "{name}: {:?}", rep.failures());
        }
    }

    #[test]
    fn kac_paljutkin_haar_weights() {
        let qg = FiniteQuantumGroup::new(catalog::kac_paljutkin(), 1e-9).unwrap();
        let expected = [0.125, 0.125, 0.125, 0.125, 0.25];
        for (w, e) in qg.weights.iter().zip(expected) {
            assert!((w - e).abs() < 1e-12);
        }
    }

    #[test]
    fn w_of_c_z2_is_controlled_translation() {
        // W(f_g ⊗ f_h) = f_g ⊗ f_{gh}
        let qg = FiniteQuantumGroup::new(catalog::quantum_group("fn_group:Z2").unwrap(), 1e-9).unwrap();
        let mut expected = CMat::zeros(4, 4);
        for g in 0..2 {
            for h in 0..2 {
                expected[(g * 2 + (g ^ h), g * 2 + h)] = cr(1.0);
            }
        }
        assert!((&qg.w.matrix - expected).norm() < 1e-12);
        assert!(qg.unitary_report(1e-9).all_pass());
    }

    #[test]
    fn unitary_certificates_hold_across_catalog() {
        for name in ["fn_group:S3", "group_alg:S3", "kac_paljutkin"] {
            let qg = FiniteQuantumGroup::new(catalog::quantum_group(name).unwrap(), 1e-9).unwrap();
            let rep = qg.unitary_report(1e-9);
            assert!(rep.all_pass(), "{name}: {:?}", rep.failures());
        }
    }

    #[test]
    fn dual_quantum_groups_validate() {
        for name in ["fn_group:Z2", "fn_group:S3", "group_alg:S3", "kac_paljutkin"] {
            let qg = FiniteQuantumGroup::new(catalog::quantum_group(name).unwrap(), 1e-9).unwrap();
            let dual = DualQuantumGroup::new(&qg, 1e-9).unwrap();
            let rep = dual.report(&qg, 1e-9);
            assert!(rep.all_pass(), "{name}: {:?}", rep.failures());
        }
    }

    #[test]
    fn dual_of_c_s3_has_group_algebra_shape() {
        let qg = FiniteQuantumGroup::new(catalog::quantum_group("fn_group:S3").unwrap(), 1e-9).unwrap();
        let dual = DualQuantumGroup::new(&qg, 1e-9).unwrap();
        assert_eq!(dual.shape().blocks(), &[1, 1, 2]);
    }
}
