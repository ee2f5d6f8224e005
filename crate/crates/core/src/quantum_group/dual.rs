use super::{compute_haar, solve_antipode, validate_quantum_group, FiniteQuantumGroup, QuantumGroupData};
use crate::algebra::{
    AlgebraShape, ConcreteAlgebra, LinearMap, Representation, StateFunctional, Wedderburn,
};
use crate::error::{Error, Result};
use crate::linalg::{flip, identity, kron, slice_first, slice_second, unit_vector, CMat, CVec, C64};
use crate::report::{Check, ValidationReport};

/// The dual quantum group `Â`, realized on the GNS space of `A` and spanned by
/// the slices `λ(ω) = (ω ⊗ id)(W)`.
#[derive(Clone, Debug)]
pub struct DualQuantumGroup {
    pub hilbert_dim: usize,
    /// `λ(ω_{e_p, e_q})` stored at `p * d + q`.
    pub generators: Vec<CMat>,
    pub algebra: ConcreteAlgebra,
    /// `ε̂` on the orthonormal basis of `algebra`.
    pub counit_basis: CVec,
    /// Size of `ε̂` on generator combinations that vanish; zero when `ε̂`
    /// is well defined by `ε̂(λ(ω)) = ω(1)`.
    pub counit_consistency: f64,
    pub wedderburn: Wedderburn,
    /// `Ŵ = Σ W* Σ`.
    pub w_hat: CMat,
    /// Multimatrix model with coproduct, counit and solved antipode.
    pub data: QuantumGroupData,
    /// Distance of `Δ̂` applied to the model basis from `Â ⊗ Â`.
    pub coproduct_residual: f64,
    pub haar: StateFunctional,
}

impl DualQuantumGroup {
    pub fn new(qg: &FiniteQuantumGroup, tol: f64) -> Result<Self> {
        let w = &qg.w.matrix;
        let d = qg.dim();
        let mut generators = Vec::with_capacity(d * d);
        for p in 0..d {
            for q in 0..d {
                generators.push(slice_first(w, &unit_vector(d, p), &unit_vector(d, q)));
            }
        }
        let algebra = ConcreteAlgebra::from_generators(&generators);
        let span = algebra.span();
        let delta = |j: usize| if j / d == j % d { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) };
        let counit_basis = CVec::from_fn(span.dim(), |k, _| {
            (0..d * d).map(|j| span.coeffs[(j, k)] * delta(j)).sum()
        });
        let counit_consistency = (0..span.null.ncols())
            .map(|c| (0..d * d).map(|j| span.null[(j, c)] * delta(j)).sum::<C64>().norm())
            .fold(0.0, f64::max);
        let wedderburn = algebra.decompose()?;
        let s = flip(d);
        let w_hat = &s * w.adjoint() * &s;

        let rep = &wedderburn.rep;
        let shape = rep.shape().clone();
        let rep2 = rep.tensor(rep);
        let mut cop = CMat::zeros(shape.tensor(&shape).dim(), shape.dim());
        let mut coproduct_residual = 0.0f64;
        for a in 0..shape.dim() {
            let y = w_hat.adjoint() * kron(&identity(d), rep.image(a)) * &w_hat;
            coproduct_residual = coproduct_residual.max(rep2.residual(&y));
            cop.set_column(a, &rep2.coords(&y));
        }
        let coproduct = LinearMap::new(&shape, &shape.tensor(&shape), cop)?;
        let mut eps = CMat::zeros(1, shape.dim());
        for a in 0..shape.dim() {
            eps[(0, a)] = counit_on(&algebra, &counit_basis, rep.image(a));
        }
        let counit = LinearMap::new(&shape, &AlgebraShape::full(1), eps)?;
        let antipode = solve_antipode(&shape, &coproduct, &counit)?;
        let data = QuantumGroupData::new(
            &format!("dual({})", qg.data.name),
            shape.clone(),
            coproduct,
            counit,
            antipode,
        )?;
        let haar = compute_haar(&shape, &data.coproduct, tol)?;
        Ok(DualQuantumGroup {
            hilbert_dim: d,
            generators,
            algebra,
            counit_basis,
            counit_consistency,
            wedderburn,
            w_hat,
            data,
            coproduct_residual,
            haar,
        })
    }

    pub fn rep(&self) -> &Representation {
        &self.wedderburn.rep
    }

    pub fn shape(&self) -> &AlgebraShape {
        self.wedderburn.rep.shape()
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    pub fn basis(&self) -> &[CMat] {
        self.algebra.basis()
    }

    /// `λ(ω_{ξ,η}) = (⟨ξ| ⊗ I) W (|η⟩ ⊗ I)`.
    pub fn lambda(&self, w: &CMat, xi: &CVec, eta: &CVec) -> CMat {
        slice_first(w, xi, eta)
    }

    pub fn counit(&self, x: &CMat) -> C64 {
        counit_on(&self.algebra, &self.counit_basis, x)
    }

    /// `Δ̂(x) = Ŵ*(1 ⊗ x)Ŵ`.
    pub fn coproduct(&self, x: &CMat) -> CMat {
        self.w_hat.adjoint() * kron(&identity(self.hilbert_dim), x) * &self.w_hat
    }

    pub fn haar_value(&self, x: &CMat) -> C64 {
        self.haar
            .eval(&self.rep().element(x))
            .expect("element of the dual")
    }

    pub fn report(&self, qg: &FiniteQuantumGroup, tol: f64) -> ValidationReport {
        const ANCHOR: &str = "dual-quantum-group";
        let mut rep = ValidationReport::default();
        rep.push(Check::new("dual-closure", ANCHOR, self.algebra.closure_residual(), tol));
        rep.push(Check::new(
            "dual-dimension",
            ANCHOR,
            (self.dim() as f64 - qg.dim() as f64).abs(),
            0.0,
        ));
        rep.push(Check::new(
            "dual-wedderburn",
            ANCHOR,
            self.wedderburn
                .relation_residual
                .max(self.wedderburn.membership_residual),
            tol,
        ));
        rep.push(Check::new("dual-counit-well-defined", ANCHOR, self.counit_consistency, tol));
        rep.push(Check::new("dual-coproduct-lands", ANCHOR, self.coproduct_residual, tol));
        // the dual route for T_ω: (ω ⊗ id)(W(x ⊗ 1)W*)
        let d = self.hilbert_dim;
        let w = &qg.w.matrix;
        let xi = sample_vector(d, 1);
        let mut t_res = 0.0f64;
        for b in self.basis() {
            let lhs = slice_second(&self.coproduct(b), &xi, &xi);
            let rhs = slice_first(&(w * kron(b, &identity(d)) * w.adjoint()), &xi, &xi);
            t_res = t_res.max((lhs - rhs).norm());
        }
        rep.push(Check::new("convolution-two-routes", ANCHOR, t_res, tol));
        rep.extend(validate_quantum_group(&self.data, tol).prefixed("dual"));
        rep
    }
}

fn counit_on(algebra: &ConcreteAlgebra, counit_basis: &CVec, x: &CMat) -> C64 {
    algebra
        .span()
        .coords(x)
        .iter()
        .zip(counit_basis.iter())
        .map(|(a, b)| a * b)
        .sum()
}

/// A fixed unit vector with generic entries.
pub(crate) fn sample_vector(d: usize, salt: usize) -> CVec {
    let v = CVec::from_fn(d, |i, _| {
        let t = (i + 1) as f64 * (salt as f64 + 0.7);
        C64::new(t.sin() + 1.3, (1.7 * t).cos())
    });
    let n = v.norm();
    v / C64::new(n, 0.0)
}

/// `T_ω(x) = (id ⊗ ω)Δ̂(x)` for `ω = ω_{ξ,η}`, as a map on the multimatrix
/// model of `Â`.
pub fn convolution_t(dual: &DualQuantumGroup, xi: &CVec, eta: &CVec) -> Result<LinearMap> {
    if xi.len() != dual.hilbert_dim || eta.len() != dual.hilbert_dim {
        return Err(Error::DimensionMismatch("vector length differs from the GNS space".into()));
    }
    let rep = dual.rep();
    let shape = rep.shape();
    let mut m = CMat::zeros(shape.dim(), shape.dim());
    for a in 0..shape.dim() {
        let y = slice_second(&dual.coproduct(rep.image(a)), xi, eta);
        m.set_column(a, &rep.coords(&y));
    }
    LinearMap::new(shape, shape, m)
}

/// Convenience: `T_ω` applied to a single operator of `Â`.
pub fn convolution_apply(dual: &DualQuantumGroup, xi: &CVec, eta: &CVec, x: &CMat) -> CMat {
    slice_second(&dual.coproduct(x), xi, eta)
}
