use super::{commutation_residual, RepresentedAction};
use crate::algebra::{choi_of_operator_map, ConcreteAlgebra, Element, LinearMap, Wedderburn};
use crate::error::{Error, Result};
use crate::linalg::{ampliate, identity, CMat, Span, RANK_TOL};
use crate::quantum_group::{DualQuantumGroup, QuantumGroupData};
use crate::report::{Check, ValidationReport};

/// The reduced crossed product, the closed span of `α(b)(x ⊗ 1)` for
/// `b ∈ B` and `x ∈ Â`.
#[derive(Clone, Debug)]
pub struct CrossedProduct {
    pub algebra: ConcreteAlgebra,
    /// `(t, j)` for the generator `α(e_t)(x_j ⊗ 1)`.
    pub generator_index: Vec<(usize, usize)>,
    pub generators: Vec<CMat>,
    pub wedderburn: Wedderburn,
    pub report: ValidationReport,
}

impl CrossedProduct {
    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    pub fn basis(&self) -> &[CMat] {
        self.algebra.basis()
    }

    pub fn center_dim(&self) -> usize {
        self.wedderburn.rep.shape().num_blocks()
    }
}

pub fn build_crossed_product(act: &RepresentedAction, dual: &DualQuantumGroup, tol: f64) -> Result<CrossedProduct> {
    if dual.hilbert_dim != act.dim_phi {
        return Err(Error::DimensionMismatch("dual and action live on different GNS spaces".into()));
    }
    const ANCHOR: &str = "reduced-crossed-product";
    let dual_ops: Vec<CMat> = dual.basis().iter().map(|x| act.dual_leg(x)).collect();
    let mut generators = Vec::new();
    let mut generator_index = Vec::new();
    let mut reversed = Vec::new();
    for (t, a) in act.images.iter().enumerate() {
        for (j, x) in dual_ops.iter().enumerate() {
            generators.push(a * x);
            reversed.push(x * a);
            generator_index.push((t, j));
        }
    }
    let algebra = ConcreteAlgebra::from_generators(&generators);
    let mut report = ValidationReport::default();
    let algebra_gens: Vec<CMat> = act.images.iter().chain(&dual_ops).cloned().collect();
    report.push(Check::new("closure", ANCHOR, algebra.closure_residual_with(&algebra_gens), tol));
    let other = Span::from_generators(&reversed, RANK_TOL);
    report.push(Check::new(
        "two-sided-span",
        ANCHOR,
        algebra.span().distance(&other),
        tol,
    ));
    let contains_b = act
        .images
        .iter()
        .map(|a| algebra.residual(a))
        .fold(0.0, f64::max);
    report.push(Check::new("contains-action-image", ANCHOR, contains_b, tol));
    let contains_dual = dual_ops
        .iter()
        .map(|x| algebra.residual(x))
        .fold(0.0, f64::max);
    report.push(Check::new("contains-dual", ANCHOR, contains_dual, tol));
    let wedderburn = algebra.decompose()?;
    report.push(Check::new(
        "wedderburn",
        ANCHOR,
        wedderburn
            .relation_residual
            .max(wedderburn.membership_residual),
        tol,
    ));
    Ok(CrossedProduct {
        algebra,
        generator_index,
        generators,
        wedderburn,
        report,
    })
}

/// `E = α ∘ (ε ⊗ id)`.
pub fn conditional_expectation(act: &RepresentedAction, y: &CMat) -> CMat {
    act.apply_op(&act.counit_slice(y))
}

/// Certificates for `E`: idempotent, onto `α(B)`, `α(B)`-bimodular, unital
/// and completely positive.
pub fn expectation_report(act: &RepresentedAction, cp: &CrossedProduct, tol: f64) -> ValidationReport {
    const ANCHOR: &str = "conditional-expectation";
    let mut rep = ValidationReport::default();
    let alpha_span = Span::from_generators(&act.images, RANK_TOL);
    let mut idem = 0.0f64;
    let mut range = 0.0f64;
    let mut bimod = 0.0f64;
    for y in cp.basis() {
        let ey = conditional_expectation(act, y);
        idem = idem.max((conditional_expectation(act, &ey) - &ey).norm());
        range = range.max(alpha_span.residual(&ey));
    }
    for a in &act.images {
        for y in cp.basis().iter().take(16) {
            for c in act.images.iter().take(4) {
                let lhs = conditional_expectation(act, &(a * y * c));
                let rhs = a * conditional_expectation(act, y) * c;
                bimod = bimod.max((lhs - rhs).norm());
            }
        }
    }
    let fixes = act
        .images
        .iter()
        .map(|a| (conditional_expectation(act, a) - a).norm())
        .fold(0.0, f64::max);
    rep.push(Check::new("expectation-idempotent", ANCHOR, idem, tol));
    rep.push(Check::new("expectation-range", ANCHOR, range, tol));
    rep.push(Check::new("expectation-fixes-range", ANCHOR, fixes, tol));
    rep.push(Check::new("expectation-bimodule", ANCHOR, bimod, tol));
    let n = act.hilbert_dim();
    let choi = choi_of_operator_map(&cp.wedderburn.rep, &identity(n), |y| conditional_expectation(act, y));
    rep.push(Check::new("expectation-unital", ANCHOR, choi.unital_residual, tol));
    rep.push(Check::new(
        "expectation-cp",
        ANCHOR,
        (-choi.min_eigenvalue).max(0.0),
        tol,
    ));
    rep
}

/// The canonical extension `γ̂` of a commuting map to the crossed product,
/// `γ̂(α(b)(x ⊗ 1)) = α(γ(b))(x ⊗ 1)`.
#[derive(Clone, Debug)]
pub struct CanonicalExtension {
    /// Images of the orthonormal basis of the crossed product.
    pub images: Vec<CMat>,
    /// Largest image of a vanishing generator combination.
    pub consistency: f64,
    /// Largest disagreement with `id_{B(H_φ)} ⊗ γ`.
    pub slice_agreement: f64,
    pub commutation: f64,
}

impl CanonicalExtension {
    pub fn apply(&self, cp: &CrossedProduct, y: &CMat) -> CMat {
        let coords = cp.algebra.span().coords(y);
        let mut out = CMat::zeros(y.nrows(), y.ncols());
        for (c, img) in coords.iter().zip(&self.images) {
            out += img * *c;
        }
        out
    }
}

/// `(id_{B(H_φ)} ⊗ γ)(y)`.
pub fn slice_extension(act: &RepresentedAction, gamma: &LinearMap, y: &CMat) -> CMat {
    ampliate(y, act.dim_phi, |blk| {
        let b = act.target.element(blk);
        act.target.apply(&gamma.apply(&b).expect("domain"))
    })
}

pub fn extend_commuting_map(
    qg: &QuantumGroupData,
    alpha: &LinearMap,
    act: &RepresentedAction,
    dual: &DualQuantumGroup,
    cp: &CrossedProduct,
    gamma: &LinearMap,
    tol: f64,
) -> Result<CanonicalExtension> {
    if gamma.domain() != act.target.shape() || gamma.codomain() != act.target.shape() {
        return Err(Error::ShapeMismatch("commuting map must act on B".into()));
    }
    let commutation = commutation_residual(qg, alpha, gamma)?;
    if commutation > tol {
        return Err(Error::NotCommuting(format!("residual {commutation:e}")));
    }
    let shape = act.target.shape();
    let gamma_images: Vec<CMat> = (0..shape.dim())
        .map(|t| {
            let g = gamma.apply(&Element::basis(shape, t)).expect("domain");
            act.apply_coords(&g.coords())
        })
        .collect();
    let dual_ops: Vec<CMat> = dual.basis().iter().map(|x| act.dual_leg(x)).collect();
    let mapped: Vec<CMat> = cp
        .generator_index
        .iter()
        .map(|&(t, j)| &gamma_images[t] * &dual_ops[j])
        .collect();
    let span = cp.algebra.span();
    let combine = |col: &dyn Fn(usize) -> crate::linalg::C64| -> CMat {
        let mut out = CMat::zeros(span.rows, span.cols);
        for (j, m) in mapped.iter().enumerate() {
            let c = col(j);
            if c.norm() != 0.0 {
                out += m * c;
            }
        }
        out
    };
    let images: Vec<CMat> = (0..span.dim())
        .map(|k| combine(&|j| span.coeffs[(j, k)]))
        .collect();
    let consistency = (0..span.null.ncols())
        .map(|c| combine(&|j| span.null[(j, c)]).norm())
        .fold(0.0, f64::max);
    let slice_agreement = span
        .basis
        .iter()
        .zip(&images)
        .map(|(y, img)| (slice_extension(act, gamma, y) - img).norm())
        .fold(0.0, f64::max);
    Ok(CanonicalExtension {
        images,
        consistency,
        slice_agreement,
        commutation,
    })
}
