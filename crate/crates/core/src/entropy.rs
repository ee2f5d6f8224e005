//! CPA triples, `rcp` upper bounds over candidate catalogs, orbit sets and
//! finite-horizon entropy estimates, plus the ledger comparing the crossed
//! product with `B` and with `B(z_F H_φ) ⊗ B`.
//!
//! `rcp_upper` is the least size among the valid candidates handed to it, so
//! it bounds the true `rcp` from above. Finite-dimensional systems have zero
//! entropy; the ledger checks the inequalities between triple sizes at each
//! finite horizon instead of limits.

use crate::action::{ActionContext, CanonicalExtension, CrossedProduct, RepresentedAction};
use crate::algebra::{choi_of_operator_map, AlgebraShape, LinearMap, Representation};
use crate::factorization::{approximation_defect, FactorizationPair};
use crate::linalg::{cr, direct_sum, identity, op_norm, CMat, CVec};
use crate::report::{Check, ValidationReport};
use std::sync::Arc;

pub type OpMap = Arc<dyn Fn(&CMat) -> CMat + Send + Sync>;

/// Duplicate threshold for orbit sets (Hilbert–Schmidt distance).
pub const ORBIT_DEDUP: f64 = 1e-10;

pub const DEFAULT_EPSILONS: [f64; 3] = [0.1, 0.25, 0.5];
pub const DEFAULT_HORIZON: usize = 6;

/// A finite set of operators in one represented algebra.
#[derive(Clone, Debug, Default)]
pub struct ObservationSet {
    pub elements: Vec<CMat>,
}

impl ObservationSet {
    pub fn new(elements: Vec<CMat>) -> Self {
        let mut out = ObservationSet::default();
        for e in elements {
            out.insert(e);
        }
        out
    }

    /// Adds `y` unless it is within `ORBIT_DEDUP` of an element already present.
    pub fn insert(&mut self, y: CMat) -> bool {
        if self.elements.iter().any(|e| (e - &y).norm() < ORBIT_DEDUP) {
            return false;
        }
        self.elements.push(y);
        true
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn map<F: Fn(&CMat) -> CMat>(&self, f: F) -> ObservationSet {
        ObservationSet::new(self.elements.iter().map(f).collect())
    }
}

/// `Ω^{(n)} = ∪_{j<n} γ^j(Ω)`.
pub fn orbit_set<F: Fn(&CMat) -> CMat>(gamma: F, omega: &ObservationSet, n: usize) -> ObservationSet {
    let mut out = omega.clone();
    let mut layer = omega.elements.clone();
    for _ in 1..n.max(1) {
        layer = layer.iter().map(&gamma).collect();
        for y in &layer {
            out.insert(y.clone());
        }
    }
    out
}

/// A pair of maps `C → M_n → C` with Choi certificates for both legs.
#[derive(Clone)]
pub struct CpaTriple {
    pub n: usize,
    pub label: String,
    pub into: OpMap,
    pub outof: OpMap,
    pub into_min_eig: f64,
    pub outof_min_eig: f64,
    pub into_norm: f64,
    pub outof_norm: f64,
    pub certified: bool,
}

impl std::fmt::Debug for CpaTriple {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CpaTriple")
            .field("n", &self.n)
            .field("label", &self.label)
            .field("certified", &self.certified)
            .finish()
    }
}

impl CpaTriple {
    /// Certifies both legs: CP by Choi positivity, contractive by `‖L(1)‖ ≤ 1`.
    pub fn certify(label: impl Into<String>, n: usize, domain: &Representation, into: OpMap, outof: OpMap, tol: f64) -> Self {
        let a = choi_of_operator_map(domain, &identity(n), |y| into(y));
        let mn = Representation::defining(&AlgebraShape::full(n));
        let b = choi_of_operator_map(&mn, &domain.unit(), |t| outof(t));
        let certified = a.is_cp(tol) && b.is_cp(tol) && a.is_contractive(tol) && b.is_contractive(tol);
        CpaTriple {
            n,
            label: label.into(),
            into,
            outof,
            into_min_eig: a.min_eigenvalue,
            outof_min_eig: b.min_eigenvalue,
            into_norm: a.unit_image_norm,
            outof_norm: b.unit_image_norm,
            certified,
        }
    }

    /// `max_{b∈Ω} ‖outof(into(b)) − b‖`.
    pub fn residual(&self, omega: &ObservationSet) -> f64 {
        omega
            .elements
            .iter()
            .map(|b| op_norm(&((self.outof)(&(self.into)(b)) - b)))
            .fold(0.0, f64::max)
    }
}

/// Certified and within `eps` (strictly) on all of `Ω`.
pub fn triple_valid(t: &CpaTriple, omega: &ObservationSet, eps: f64) -> bool {
    t.certified && t.residual(omega) < eps
}

/// Least size among the valid candidates, or `None` if none is valid.
pub fn rcp_upper(omega: &ObservationSet, eps: f64, candidates: &[CpaTriple]) -> Option<usize> {
    let mut sorted: Vec<&CpaTriple> = candidates.iter().collect();
    sorted.sort_by_key(|t| t.n);
    sorted
        .into_iter()
        .find(|t| triple_valid(t, omega, eps))
        .map(|t| t.n)
}

/// Residuals of a candidate catalog on a growing observation set. Each
/// element is evaluated once, so callers must pass nested sets.
pub struct ResidualCache<'a> {
    triples: &'a [CpaTriple],
    seen: ObservationSet,
    residuals: Vec<f64>,
}

impl<'a> ResidualCache<'a> {
    pub fn new(triples: &'a [CpaTriple]) -> Self {
        ResidualCache {
            triples,
            seen: ObservationSet::default(),
            residuals: vec![0.0; triples.len()],
        }
    }

    pub fn extend(&mut self, omega: &ObservationSet) {
        for y in &omega.elements {
            if !self.seen.insert(y.clone()) {
                continue;
            }
            for (t, r) in self.triples.iter().zip(&mut self.residuals) {
                if t.certified {
                    *r = r.max(op_norm(&((t.outof)(&(t.into)(y)) - y)));
                }
            }
        }
    }

    pub fn valid(&self, i: usize, eps: f64) -> bool {
        self.triples[i].certified && self.residuals[i] < eps
    }

    /// Same as [`rcp_upper`] on the union of everything seen.
    pub fn rcp(&self, eps: f64) -> Option<usize> {
        (0..self.triples.len())
            .filter(|&i| self.valid(i, eps))
            .map(|i| self.triples[i].n)
            .min()
    }
}

fn min_some(xs: &[Option<usize>]) -> Option<usize> {
    xs.iter().flatten().copied().min()
}

/// `(1/N) log rcp_upper(Ω^{(N)}, ε)`.
pub fn ht_estimate<F: Fn(&CMat) -> CMat>(
    gamma: F,
    omega: &ObservationSet,
    eps: f64,
    horizon: usize,
    candidates: &[CpaTriple],
) -> Option<f64> {
    let orbit = orbit_set(gamma, omega, horizon);
    rcp_upper(&orbit, eps, candidates).map(|n| (n as f64).ln() / horizon as f64)
}

/// Block `i` of an element given by its coordinates.
fn block_matrix(shape: &AlgebraShape, c: &CVec, i: usize) -> CMat {
    let n = shape.blocks()[i];
    CMat::from_fn(n, n, |r, s| c[shape.index(i, r, s)])
}

fn embed_block(rep: &Representation, t: &CMat, i: usize) -> CMat {
    let shape = rep.shape();
    let n = shape.blocks()[i];
    let mut v = CVec::zeros(shape.dim());
    for r in 0..n {
        for s in 0..n {
            v[shape.index(i, r, s)] = t[(r, s)];
        }
    }
    rep.apply_coords(&v)
}

/// Block-compression triples for every nonempty set of Wedderburn blocks, and
/// the one-dimensional trace triple. The complement blocks are filled with the
/// normalized trace of `M_n`, so every `outof` is unital.
pub fn native_candidates(rep: &Representation, label: &str, tol: f64) -> Vec<CpaTriple> {
    let shape = rep.shape().clone();
    let k = shape.num_blocks();
    let rep = Arc::new(rep.clone());
    let mut out = Vec::new();
    let dim_h = rep.dim() as f64;
    {
        let r = rep.clone();
        let into: OpMap = Arc::new(move |y: &CMat| CMat::from_element(1, 1, y.trace() / cr(dim_h)));
        let r2 = r.clone();
        let outof: OpMap = Arc::new(move |t: &CMat| r2.unit() * t[(0, 0)]);
        out.push(CpaTriple::certify(format!("{label}/trace"), 1, &r, into, outof, tol));
    }
    if k > 12 {
        // subsets would explode; the full identity triple is always present
        let all: Vec<usize> = (0..k).collect();
        out.push(block_triple(&rep, &all, label, tol));
        return out;
    }
    for mask in 1u32..(1 << k) {
        let set: Vec<usize> = (0..k).filter(|i| mask & (1 << i) != 0).collect();
        out.push(block_triple(&rep, &set, label, tol));
    }
    out
}

fn block_triple(rep: &Arc<Representation>, set: &[usize], label: &str, tol: f64) -> CpaTriple {
    let shape = rep.shape().clone();
    let sizes: Vec<usize> = set.iter().map(|&i| shape.blocks()[i]).collect();
    let n: usize = sizes.iter().sum();
    let r1 = rep.clone();
    let s1 = set.to_vec();
    let into: OpMap = Arc::new(move |y: &CMat| {
        let c = r1.coords(y);
        let blocks: Vec<CMat> = s1.iter().map(|&i| block_matrix(r1.shape(), &c, i)).collect();
        direct_sum(&blocks)
    });
    let r2 = rep.clone();
    let s2 = set.to_vec();
    let mut rest = CMat::zeros(rep.dim(), rep.dim());
    for j in (0..shape.num_blocks()).filter(|i| !set.contains(i)) {
        rest += rep.central_projection(j);
    }
    let outof: OpMap = Arc::new(move |t: &CMat| {
        let mut acc = CMat::zeros(r2.dim(), r2.dim());
        let mut off = 0;
        for &i in &s2 {
            let ni = r2.shape().blocks()[i];
            let blk = t.view((off, off), (ni, ni)).into_owned();
            acc += embed_block(&r2, &blk, i);
            off += ni;
        }
        acc += &rest * (t.trace() / cr(n as f64));
        acc
    });
    let name = format!(
        "{label}/blocks[{}]",
        set.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(",")
    );
    CpaTriple::certify(name, n, rep, into, outof, tol)
}

/// Triples for the crossed product from triples for `B(z_F H_φ) ⊗ B`:
/// `(into ∘ Φ_F, Ψ_ξ ∘ outof)`.
pub fn transport_triple(
    inner: &CpaTriple,
    pair: &Arc<FactorizationPair>,
    act: &Arc<RepresentedAction>,
    domain: &Representation,
    tol: f64,
) -> CpaTriple {
    let (p1, a1, i1) = (pair.clone(), act.clone(), inner.into.clone());
    let into: OpMap = Arc::new(move |y: &CMat| i1(&p1.phi(&a1, y)));
    let (p2, a2, o2) = (pair.clone(), act.clone(), inner.outof.clone());
    let outof: OpMap = Arc::new(move |t: &CMat| p2.psi(&a2, &o2(t)));
    CpaTriple::certify(format!("transport({})", inner.label), inner.n, domain, into, outof, tol)
}

/// Triples for the crossed product from triples for `B`:
/// `(into ∘ (ε ⊗ id), α ∘ outof)`.
pub fn lift_triple(inner: &CpaTriple, act: &Arc<RepresentedAction>, domain: &Representation, tol: f64) -> CpaTriple {
    let (a1, i1) = (act.clone(), inner.into.clone());
    let into: OpMap = Arc::new(move |y: &CMat| i1(&a1.counit_slice(y)));
    let (a2, o2) = (act.clone(), inner.outof.clone());
    let outof: OpMap = Arc::new(move |t: &CMat| a2.apply_op(&o2(t)));
    CpaTriple::certify(format!("lift({})", inner.label), inner.n, domain, into, outof, tol)
}

/// Triples for `B ≅ α(B)` from triples for the crossed product:
/// `(into ∘ α, (ε ⊗ id) ∘ outof)`, i.e. `α^{-1} ∘ E ∘ outof`.
pub fn condition_triple(inner: &CpaTriple, act: &Arc<RepresentedAction>, tol: f64) -> CpaTriple {
    let (a1, i1) = (act.clone(), inner.into.clone());
    let into: OpMap = Arc::new(move |b: &CMat| i1(&a1.apply_op(b)));
    let (a2, o2) = (act.clone(), inner.outof.clone());
    let outof: OpMap = Arc::new(move |t: &CMat| a2.counit_slice(&o2(t)));
    CpaTriple::certify(format!("condition({})", inner.label), inner.n, &act.target, into, outof, tol)
}

/// Triples for `M_k ⊗ C` from triples for `C`, through the `E_11` corner.
pub fn corner_lift(inner: &CpaTriple, k: usize, domain: &Representation, tol: f64) -> CpaTriple {
    let i1 = inner.into.clone();
    let into: OpMap = Arc::new(move |y: &CMat| {
        let d = y.nrows() / k;
        i1(&y.view((0, 0), (d, d)).into_owned())
    });
    let o2 = inner.outof.clone();
    let outof: OpMap = Arc::new(move |t: &CMat| {
        let b = o2(t);
        let d = b.nrows();
        let mut out = CMat::zeros(k * d, k * d);
        out.view_mut((0, 0), (d, d)).copy_from(&b);
        out
    });
    CpaTriple::certify(format!("corner({})", inner.label), inner.n, domain, into, outof, tol)
}

/// Triples for `C` from triples for `M_k ⊗ C`, through the `E_11` corner.
pub fn corner_restrict(inner: &CpaTriple, k: usize, domain: &Representation, tol: f64) -> CpaTriple {
    let i1 = inner.into.clone();
    let into: OpMap = Arc::new(move |b: &CMat| {
        let d = b.nrows();
        let mut y = CMat::zeros(k * d, k * d);
        y.view_mut((0, 0), (d, d)).copy_from(b);
        i1(&y)
    });
    let o2 = inner.outof.clone();
    let outof: OpMap = Arc::new(move |t: &CMat| {
        let y = o2(t);
        let d = y.nrows() / k;
        y.view((0, 0), (d, d)).into_owned()
    });
    CpaTriple::certify(format!("restrict({})", inner.label), inner.n, domain, into, outof, tol)
}

/// One ledger row: the estimates at one horizon and one `ε`.
#[derive(Clone, Debug, serde::Serialize)]
pub struct LedgerRow {
    pub horizon: usize,
    pub eps: f64,
    /// `rcp_upper` of the crossed product at `(Ω̂^{(N)}, ε + 2δ)`.
    pub rcp_crossed: Option<usize>,
    /// `rcp_upper` of `B(z_F H_φ) ⊗ B` at `(Φ(Ω̂^{(N)}), ε)`.
    pub rcp_matrix: Option<usize>,
    /// `rcp_upper` of `B` at `(Ω_B^{(N)}, ε)`.
    pub rcp_b: Option<usize>,
    /// `rcp_upper` of the crossed product at `(α(Ω_B^{(N)}), ε)`.
    pub rcp_alpha_b: Option<usize>,
    /// Estimate for `id ⊗ γ` on `B(z_F H_φ) ⊗ B`.
    pub ht_gamma: Option<f64>,
    /// Estimate for `γ̂` on the crossed product.
    pub ht_gamma_hat: Option<f64>,
}

#[derive(Clone, Debug)]
pub struct LedgerReport {
    pub rows: Vec<LedgerRow>,
    pub delta: f64,
    pub report: ValidationReport,
}

pub struct LedgerConfig {
    pub epsilons: Vec<f64>,
    pub horizon: usize,
    pub tol: f64,
}

impl Default for LedgerConfig {
    fn default() -> Self {
        LedgerConfig {
            epsilons: DEFAULT_EPSILONS.to_vec(),
            horizon: DEFAULT_HORIZON,
            tol: crate::DEFAULT_TOLERANCE,
        }
    }
}

const ANCHOR: &str = "entropy-ledger";

fn fmt_key(kind: &str, n: usize, eps: f64) -> String {
    format!("{kind}:N={n}:eps={eps}")
}

fn le(a: Option<usize>, b: Option<usize>) -> bool {
    match (a, b) {
        (Some(x), Some(y)) => x <= y,
        (_, None) => true,
        (None, Some(_)) => false,
    }
}

/// Choi certificate of one connecting map.
#[derive(Clone, Copy, Debug)]
pub struct MapCertificate {
    pub min_eig: f64,
    /// `‖L(1)‖`.
    pub norm: f64,
}

impl MapCertificate {
    pub fn of<F: Fn(&CMat) -> CMat>(domain: &Representation, codomain_unit: &CMat, f: F) -> Self {
        let ch = choi_of_operator_map(domain, codomain_unit, f);
        MapCertificate {
            min_eig: ch.min_eigenvalue,
            norm: ch.unit_image_norm,
        }
    }

    pub fn holds(&self, tol: f64) -> bool {
        self.min_eig >= -tol && self.norm <= 1.0 + tol
    }
}

impl CpaTriple {
    /// `(into ∘ pre, post ∘ outof)`. Composites of CP contractions are CP
    /// contractions, so the certificate comes from the three factors.
    pub fn compose(
        &self,
        label: String,
        pre: (OpMap, MapCertificate),
        post: (OpMap, MapCertificate),
        tol: f64,
    ) -> CpaTriple {
        let (f, i1) = (pre.0, self.into.clone());
        let into: OpMap = Arc::new(move |y: &CMat| i1(&f(y)));
        let (g, o2) = (post.0, self.outof.clone());
        let outof: OpMap = Arc::new(move |t: &CMat| g(&o2(t)));
        CpaTriple {
            n: self.n,
            label,
            into,
            outof,
            into_min_eig: self.into_min_eig.min(pre.1.min_eig),
            outof_min_eig: self.outof_min_eig.min(post.1.min_eig),
            into_norm: self.into_norm * pre.1.norm,
            outof_norm: self.outof_norm * post.1.norm,
            certified: self.certified && pre.1.holds(tol) && post.1.holds(tol),
        }
    }
}

/// `Φ_F`, `Ψ_ξ`, `α` and `ε ⊗ id` as operator maps, each certified once.
pub struct Connectors {
    phi: (OpMap, MapCertificate),
    psi: (OpMap, MapCertificate),
    alpha: (OpMap, MapCertificate),
    slice: (OpMap, MapCertificate),
    tol: f64,
}

impl Connectors {
    pub fn new(pair: &Arc<FactorizationPair>, act: &Arc<RepresentedAction>, cp_rep: &Representation, tol: f64) -> Self {
        let (p, a) = (pair.clone(), act.clone());
        let phi: OpMap = Arc::new(move |y: &CMat| p.phi(&a, y));
        let (p, a) = (pair.clone(), act.clone());
        let psi: OpMap = Arc::new(move |t: &CMat| p.psi(&a, t));
        let a = act.clone();
        let alpha: OpMap = Arc::new(move |b: &CMat| a.apply_op(b));
        let a = act.clone();
        let slice: OpMap = Arc::new(move |y: &CMat| a.counit_slice(y));
        let n = act.hilbert_dim();
        let phi_cert = MapCertificate::of(cp_rep, &pair.codomain.unit(), |y| phi(y));
        let psi_cert = MapCertificate::of(&pair.codomain, &identity(n), |t| psi(t));
        let alpha_cert = MapCertificate::of(&act.target, &identity(n), |b| alpha(b));
        let slice_cert = MapCertificate::of(cp_rep, &act.target.unit(), |y| slice(y));
        Connectors {
            phi: (phi, phi_cert),
            psi: (psi, psi_cert),
            alpha: (alpha, alpha_cert),
            slice: (slice, slice_cert),
            tol,
        }
    }

    /// The four certificates, by map name.
    pub fn certificates(&self) -> [(&'static str, MapCertificate); 4] {
        [
            ("phi", self.phi.1),
            ("psi", self.psi.1),
            ("alpha", self.alpha.1),
            ("slice", self.slice.1),
        ]
    }

    /// Same maps as [`transport_triple`].
    pub fn transport(&self, inner: &CpaTriple) -> CpaTriple {
        inner.compose(format!("transport({})", inner.label), self.phi.clone(), self.psi.clone(), self.tol)
    }

    /// Same maps as [`pullback_triple`].
    pub fn pullback(&self, inner: &CpaTriple) -> CpaTriple {
        inner.compose(format!("pullback({})", inner.label), self.psi.clone(), self.phi.clone(), self.tol)
    }

    /// Same maps as [`lift_triple`].
    pub fn lift(&self, inner: &CpaTriple) -> CpaTriple {
        inner.compose(format!("lift({})", inner.label), self.slice.clone(), self.alpha.clone(), self.tol)
    }

    /// Same maps as [`condition_triple`].
    pub fn condition(&self, inner: &CpaTriple) -> CpaTriple {
        inner.compose(format!("condition({})", inner.label), self.alpha.clone(), self.slice.clone(), self.tol)
    }
}

/// Triples for `B(z_F H_φ) ⊗ B` from triples for the crossed product:
/// `(into ∘ Ψ_ξ, Φ_F ∘ outof)`. Only useful when `Ψ_ξ ∘ Φ_F = id`.
pub fn pullback_triple(
    inner: &CpaTriple,
    pair: &Arc<FactorizationPair>,
    act: &Arc<RepresentedAction>,
    tol: f64,
) -> CpaTriple {
    let (p1, a1, i1) = (pair.clone(), act.clone(), inner.into.clone());
    let into: OpMap = Arc::new(move |t: &CMat| i1(&p1.psi(&a1, t)));
    let (p2, a2, o2) = (pair.clone(), act.clone(), inner.outof.clone());
    let outof: OpMap = Arc::new(move |t: &CMat| p2.phi(&a2, &o2(t)));
    CpaTriple::certify(format!("pullback({})", inner.label), inner.n, &pair.codomain, into, outof, tol)
}

/// The inequality chain for one commuting map `γ` and one factorization pair.
///
/// (a) transport through `Φ_F`, `Ψ_ξ` keeps sizes, so
///     `rcp(Ω̂^{(N)}, ε + 2δ) ≤ rcp(Φ(Ω̂^{(N)}), ε)`;
/// (b) conditioning by `E` keeps sizes, so `rcp_B(Ω_B^{(N)}) ≤ rcp(α(Ω_B^{(N)}))`;
/// (c) for `δ = 0` both sides of (a) coincide at every horizon, and lifting
///     through `ε ⊗ id` makes both sides of (b) coincide.
pub fn ledger_check(
    ctx: &ActionContext,
    cp: &CrossedProduct,
    gamma: &LinearMap,
    ext: &CanonicalExtension,
    pair: FactorizationPair,
    cfg: &LedgerConfig,
) -> LedgerReport {
    let tol = cfg.tol;
    let act = Arc::new(ctx.rep.clone());
    let delta_basis = approximation_defect(&pair, &act, cp);
    let exact = delta_basis <= tol;
    let pair = Arc::new(pair);
    let cp_rep = &cp.wedderburn.rep;
    let b_rep = &act.target;
    let d_rep = &pair.codomain;

    let gamma_b = |b: &CMat| b_rep.apply(&gamma.apply(&b_rep.element(b)).expect("domain"));
    let gamma_hat = |y: &CMat| ext.apply(cp, y);
    let gamma_d = |t: &CMat| pair.ampliate_map(&act, gamma, t);

    let omega_b = ObservationSet::new(b_rep.images().to_vec());
    let mut hat0 = omega_b.map(|b| act.apply_op(b));
    for x in ctx.dual.basis() {
        hat0.insert(act.dual_leg(x));
    }

    // candidate catalogs
    let conn = Connectors::new(&pair, &act, cp_rep, tol);
    let native_b = native_candidates(b_rep, "B", tol);
    let mut cands_cp = native_candidates(cp_rep, "crossed", tol);
    cands_cp.extend(native_b.iter().map(|t| conn.lift(t)));
    let mut cands_d = native_candidates(d_rep, "MB", tol);
    if exact {
        cands_d.extend(cands_cp.iter().map(|t| conn.pullback(t)));
    }
    let transported: Vec<CpaTriple> = cands_d.iter().map(|t| conn.transport(t)).collect();
    let mut cands_b = native_b.clone();
    for t in cands_cp.iter().chain(&transported) {
        cands_b.push(conn.condition(t));
    }
    let lifted_b: Vec<CpaTriple> = cands_b.iter().map(|t| conn.lift(t)).collect();

    let mut rep = ValidationReport::default();
    for (name, c) in conn.certificates() {
        rep.push(Check::new(format!("connector-cp:{name}"), ANCHOR, (-c.min_eig).max(0.0), tol));
        rep.push(Check::new(format!("connector-contractive:{name}"), ANCHOR, (c.norm - 1.0).max(0.0), tol));
    }
    let sizes_ok = cands_d.iter().zip(&transported).all(|(a, b)| a.n == b.n);
    rep.push(Check::fact("transport-preserves-size", ANCHOR, sizes_ok));
    let certified = cands_d
        .iter()
        .chain(&transported)
        .chain(&cands_b)
        .chain(&cands_cp)
        .chain(&lifted_b)
        .all(|t| t.certified);
    rep.push(Check::fact("candidates-certified", ANCHOR, certified));

    // Ω̂^{(N)}, Φ(Ω̂^{(N)}), Ω_B^{(N)} and α(Ω_B^{(N)}) all grow with N
    let mut d_on_phi = ResidualCache::new(&cands_d);
    let mut cp_on_hat = ResidualCache::new(&cands_cp);
    let mut tr_on_hat = ResidualCache::new(&transported);
    let mut b_on_b = ResidualCache::new(&cands_b);
    let mut cp_on_alpha = ResidualCache::new(&cands_cp);
    let mut tr_on_alpha = ResidualCache::new(&transported);
    let mut lb_on_alpha = ResidualCache::new(&lifted_b);
    let n_native_b = native_b.len();

    let mut rows = Vec::new();
    let mut delta = delta_basis;
    for n in 1..=cfg.horizon {
        let hat_n = orbit_set(gamma_hat, &hat0, n);
        let b_n = orbit_set(gamma_b, &omega_b, n);
        let alpha_b_n = b_n.map(|b| act.apply_op(b));
        // Φ(Ω̂^{(N)}) two ways: image of the orbit, orbit of the image
        let phi_n = hat_n.map(|y| pair.phi(&act, y));
        let phi_orbit = orbit_set(gamma_d, &hat0.map(|y| pair.phi(&act, y)), n);
        let eq = phi_n
            .elements
            .iter()
            .map(|y| {
                phi_orbit
                    .elements
                    .iter()
                    .map(|z| (y - z).norm())
                    .fold(f64::INFINITY, f64::min)
            })
            .fold(0.0, f64::max);
        rep.push(Check::new(format!("orbit-equivariance:N={n}"), ANCHOR, eq, 1e-8));
        let delta_n = hat_n
            .elements
            .iter()
            .map(|y| op_norm(&(pair.psi(&act, &pair.phi(&act, y)) - y)))
            .fold(0.0, f64::max);
        delta = delta.max(delta_n);
        let d = if exact { 0.0 } else { delta_basis.max(delta_n) };

        d_on_phi.extend(&phi_n);
        cp_on_hat.extend(&hat_n);
        tr_on_hat.extend(&hat_n);
        b_on_b.extend(&b_n);
        cp_on_alpha.extend(&alpha_b_n);
        tr_on_alpha.extend(&alpha_b_n);
        lb_on_alpha.extend(&alpha_b_n);

        for &eps in &cfg.epsilons {
            let shifted = eps + 2.0 * d + if exact { 0.0 } else { tol };
            let rcp_matrix = d_on_phi.rcp(eps);
            let transport_ok = (0..cands_d.len()).all(|i| !d_on_phi.valid(i, eps) || tr_on_hat.valid(i, shifted));
            rep.push(Check::fact(fmt_key("transport-valid", n, eps), ANCHOR, transport_ok));
            let rcp_crossed = min_some(&[cp_on_hat.rcp(shifted), tr_on_hat.rcp(shifted)]);
            rep.push(Check::fact(
                fmt_key("ledger-a-downward", n, eps),
                ANCHOR,
                rcp_crossed.is_some() && le(rcp_crossed, rcp_matrix),
            ));

            let from_transport = if exact { tr_on_alpha.rcp(eps) } else { None };
            let rcp_alpha_b = min_some(&[cp_on_alpha.rcp(eps), lb_on_alpha.rcp(eps), from_transport]);
            let rcp_b = b_on_b.rcp(eps);
            // cands_b = native ++ condition(cands_cp ++ transported), in order
            let mut cond_ok = true;
            let sources = (0..cands_cp.len())
                .map(|i| (cands_cp[i].n, cp_on_alpha.valid(i, eps)))
                .chain((0..transported.len()).map(|i| (transported[i].n, tr_on_alpha.valid(i, eps))));
            for (k, (size, valid)) in sources.enumerate() {
                let c = n_native_b + k;
                if valid && (cands_b[c].n != size || !b_on_b.valid(c, eps)) {
                    cond_ok = false;
                }
            }
            rep.push(Check::fact(fmt_key("expectation-transport", n, eps), ANCHOR, cond_ok));
            rep.push(Check::fact(
                fmt_key("ledger-b-upward", n, eps),
                ANCHOR,
                rcp_b.is_some() && le(rcp_b, rcp_alpha_b),
            ));
            let ht = |r: Option<usize>| r.map(|k| (k as f64).ln() / n as f64);
            rep.push(Check::fact(
                fmt_key("ledger-c-alpha-b", n, eps),
                ANCHOR,
                rcp_b.is_some() && rcp_b == rcp_alpha_b,
            ));
            if exact {
                rep.push(Check::fact(
                    fmt_key("ledger-c-folner", n, eps),
                    ANCHOR,
                    rcp_crossed.is_some() && rcp_crossed == rcp_matrix,
                ));
            }
            rows.push(LedgerRow {
                horizon: n,
                eps,
                rcp_crossed,
                rcp_matrix,
                rcp_b,
                rcp_alpha_b,
                ht_gamma: ht(rcp_matrix),
                ht_gamma_hat: ht(rcp_crossed),
            });
        }
    }
    LedgerReport { rows, delta, report: rep }
}
