//! Suite runner: turns documents into reports.
//!
//! Malformed or inconsistent documents are input errors. Everything that
//! goes wrong after the document has been read, including constructions
//! refused on mathematical grounds, becomes a failing record so that the
//! verdict is a check failure rather than an input error.

use crate::action::{
    build_crossed_product, expectation_report, extend_commuting_map, validate_action, ActionContext, ActionData,
};
use crate::algebra::LinearMap;
use crate::cocycle::{
    ad_x_transport, build_twisted_crossed_product, collapse_report, extend_commuting_map_twisted, stabilizer_x,
    validate_cocycle_action, CocycleContext, CocycleData,
};
use crate::entropy::{ledger_check, LedgerConfig, DEFAULT_EPSILONS, DEFAULT_HORIZON};
use crate::error::{Error, Result};
use crate::factorization::{approximation_defect, folner_vector, verify_schur, FactorizationPair, FolnerVector};
use crate::format::SpecDocument;
use crate::linalg::{cr, CVec};
use crate::quantum_group::{validate_quantum_group, DualQuantumGroup, FiniteQuantumGroup, QuantumGroupData};
use crate::report::{Check, Environment, Report, ValidationReport};
use std::collections::BTreeMap;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

/// Seed of the random unit vector in the schur suite.
pub const RANDOM_XI_SEED: u64 = 7;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    QgAxioms,
    ActionAxioms,
    CocycleAxioms,
    Crossed,
    Schur,
    Folner,
    EntropyLedger,
    Twist,
    Stabilize,
}

impl Suite {
    pub const ALL: [Suite; 9] = [
        Suite::QgAxioms,
        Suite::ActionAxioms,
        Suite::CocycleAxioms,
        Suite::Crossed,
        Suite::Schur,
        Suite::Folner,
        Suite::EntropyLedger,
        Suite::Twist,
        Suite::Stabilize,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Suite::QgAxioms => "qg-axioms",
            Suite::ActionAxioms => "action-axioms",
            Suite::CocycleAxioms => "cocycle-axioms",
            Suite::Crossed => "crossed",
            Suite::Schur => "schur",
            Suite::Folner => "folner",
            Suite::EntropyLedger => "entropy-ledger",
            Suite::Twist => "twist",
            Suite::Stabilize => "stabilize",
        }
    }

    pub fn from_id(id: &str) -> Result<Suite> {
        Suite::ALL
            .into_iter()
            .find(|s| s.id() == id)
            .ok_or_else(|| Error::Input(format!("unknown suite {id}")))
    }

    /// Document kinds the suite runs on.
    pub fn accepts(self, kind: &str) -> bool {
        match self {
            Suite::QgAxioms => kind == "quantum_group",
            Suite::Folner => kind == "quantum_group" || kind == "action",
            Suite::ActionAxioms | Suite::Crossed | Suite::Schur | Suite::EntropyLedger => kind == "action",
            Suite::CocycleAxioms | Suite::Twist | Suite::Stabilize => kind == "cocycle_action",
        }
    }

    /// The catalog entries the suite runs on by default.
    pub fn default_inputs(self) -> Vec<&'static str> {
        use crate::catalog::{ACTIONS, COCYCLES, QUANTUM_GROUPS};
        match self {
            Suite::QgAxioms | Suite::Folner => QUANTUM_GROUPS.to_vec(),
            Suite::ActionAxioms | Suite::Crossed | Suite::Schur | Suite::EntropyLedger => ACTIONS.to_vec(),
            Suite::CocycleAxioms | Suite::Twist | Suite::Stabilize => COCYCLES.to_vec(),
        }
    }

    /// The validator for a document kind, as used by `validate`.
    pub fn validator_for(kind: &str) -> Result<Suite> {
        match kind {
            "quantum_group" => Ok(Suite::QgAxioms),
            "action" => Ok(Suite::ActionAxioms),
            "cocycle_action" => Ok(Suite::CocycleAxioms),
            other => Err(Error::Input(format!("no validator for {other} documents"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum XiKind {
    Folner,
    Delta,
    Random,
}

impl XiKind {
    pub const ALL: [XiKind; 3] = [XiKind::Folner, XiKind::Delta, XiKind::Random];

    pub fn id(self) -> &'static str {
        match self {
            XiKind::Folner => "folner",
            XiKind::Delta => "delta",
            XiKind::Random => "random",
        }
    }

    pub fn from_id(id: &str) -> Result<XiKind> {
        XiKind::ALL
            .into_iter()
            .find(|x| x.id() == id)
            .ok_or_else(|| Error::Input(format!("unknown vector kind {id}")))
    }

    pub fn build(self, qg: &FiniteQuantumGroup, dual: &DualQuantumGroup, tol: f64) -> Result<FolnerVector> {
        match self {
            XiKind::Folner => folner_vector(qg, dual, tol),
            XiKind::Delta => FolnerVector::delta(qg, dual, tol),
            XiKind::Random => FolnerVector::random(qg, dual, RANDOM_XI_SEED, tol),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SuiteOptions {
    pub tolerance: f64,
    pub horizon: usize,
    pub epsilons: Vec<f64>,
    pub vectors: Vec<XiKind>,
    /// Restrict to one commuting map.
    pub gamma: Option<String>,
    /// Worker threads for multi-document runs.
    pub threads: usize,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            tolerance: crate::DEFAULT_TOLERANCE,
            horizon: DEFAULT_HORIZON,
            epsilons: DEFAULT_EPSILONS.to_vec(),
            vectors: XiKind::ALL.to_vec(),
            gamma: None,
            threads: std::thread::available_parallelism().map_or(1, |n| n.get()),
        }
    }
}

/// Records and named quantities of one document.
#[derive(Clone, Debug, Default)]
pub struct Outcome {
    pub report: ValidationReport,
    pub values: BTreeMap<String, f64>,
}

impl Outcome {
    fn push(&mut self, c: Check) {
        self.report.push(c);
    }

    fn extend(&mut self, prefix: &str, rep: ValidationReport) {
        self.report.extend(if prefix.is_empty() { rep } else { rep.prefixed(prefix) });
    }

    fn value(&mut self, key: impl Into<String>, v: f64) {
        self.values.insert(key.into(), v);
    }

    /// Record a failed construction and hand back `None`.
    fn stage<T>(&mut self, stage: &str, r: Result<T>) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                let mut c = Check::fact(format!("construct:{stage}"), "construction", false);
                c.note = Some(e.to_string());
                self.push(c);
                None
            }
        }
    }

    fn ok(&self) -> bool {
        self.report.all_pass()
    }
}

/// A document converted to the data its suite needs.
enum Input {
    QuantumGroup(QuantumGroupData),
    Action(ActionData),
    Cocycle(CocycleData),
}

fn load(suite: Suite, doc: &SpecDocument) -> Result<Input> {
    if !suite.accepts(doc.kind()) {
        return Err(Error::Input(format!(
            "suite {} does not run on {} documents ({})",
            suite.id(),
            doc.kind(),
            doc.name
        )));
    }
    Ok(match doc.kind() {
        "quantum_group" => Input::QuantumGroup(doc.quantum_group()?),
        "action" => Input::Action(doc.action()?),
        _ => Input::Cocycle(doc.cocycle()?),
    })
}

/// Run a suite over documents. Records are prefixed with the document name
/// and sorted; timing stays out of the body.
pub fn run_suite(suite: Suite, docs: &[SpecDocument], opts: &SuiteOptions) -> Result<Report> {
    let start = Instant::now();
    let inputs: Vec<(String, Input)> = docs
        .iter()
        .map(|d| load(suite, d).map(|i| (d.name.clone(), i)))
        .collect::<Result<_>>()?;
    let outcomes = run_parallel(&inputs, opts.threads.max(1), |input| run_one(suite, input, opts));
    let mut records = Vec::new();
    let mut values = BTreeMap::new();
    for ((name, _), out) in inputs.iter().zip(outcomes) {
        records.extend(out.report.prefixed(name).checks);
        for (k, v) in out.values {
            values.insert(format!("{name}/{k}"), v);
        }
    }
    let env = Environment {
        tolerance: opts.tolerance,
        horizon: opts.horizon,
        epsilons: opts.epsilons.clone(),
        input: docs.iter().map(|d| d.name.as_str()).collect::<Vec<_>>().join(","),
    };
    let ms = start.elapsed().as_secs_f64() * 1e3;
    Ok(Report::new(suite.id(), env, records, values, ms))
}

fn run_parallel<F>(inputs: &[(String, Input)], threads: usize, f: F) -> Vec<Outcome>
where
    F: Fn(&Input) -> Outcome + Sync,
{
    let next = AtomicUsize::new(0);
    let slots: Mutex<Vec<Option<Outcome>>> = Mutex::new(vec![None; inputs.len()]);
    std::thread::scope(|s| {
        for _ in 0..threads.min(inputs.len()) {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::SeqCst);
                if i >= inputs.len() {
                    break;
                }
                let out = f(&inputs[i].1);
                slots.lock().expect("no poisoning")[i] = Some(out);
            });
        }
    });
    slots
        .into_inner()
        .expect("no poisoning")
        .into_iter()
        .map(|o| o.expect("every slot filled"))
        .collect()
}

fn run_one(suite: Suite, input: &Input, opts: &SuiteOptions) -> Outcome {
    let mut out = Outcome::default();
    match (suite, input) {
        (Suite::QgAxioms, Input::QuantumGroup(q)) => qg_axioms(&mut out, q, opts),
        (Suite::Folner, Input::QuantumGroup(q)) => {
            let act = regular_action(q);
            folner(&mut out, &act, opts)
        }
        (Suite::Folner, Input::Action(a)) => folner(&mut out, a, opts),
        (Suite::ActionAxioms, Input::Action(a)) => {
            action_axioms(&mut out, a, opts);
        }
        (Suite::Crossed, Input::Action(a)) => crossed(&mut out, a, opts),
        (Suite::Schur, Input::Action(a)) => schur(&mut out, a, opts),
        (Suite::EntropyLedger, Input::Action(a)) => entropy(&mut out, a, opts),
        (Suite::CocycleAxioms, Input::Cocycle(c)) => {
            cocycle_axioms(&mut out, c, opts);
        }
        (Suite::Twist, Input::Cocycle(c)) => twist(&mut out, c, opts),
        (Suite::Stabilize, Input::Cocycle(c)) => stabilize(&mut out, c, opts),
        _ => unreachable!("inputs are checked by load"),
    }
    out
}

fn regular_action(q: &QuantumGroupData) -> ActionData {
    ActionData {
        name: format!("regular({})", q.name),
        qg: q.clone(),
        target: q.shape.clone(),
        alpha: q.coproduct.clone(),
        commuting: vec![],
    }
}

fn qg_axioms(out: &mut Outcome, q: &QuantumGroupData, opts: &SuiteOptions) {
    let tol = opts.tolerance;
    out.extend("", validate_quantum_group(q, tol));
    out.value("dim", q.shape.dim() as f64);
    if !out.ok() {
        return;
    }
    let Some(fq) = out.stage("finite-quantum-group", FiniteQuantumGroup::new(q.clone(), tol)) else {
        return;
    };
    out.extend("", fq.haar_report(tol));
    out.extend("", fq.unitary_report(tol));
    if let Some(dual) = out.stage("dual", DualQuantumGroup::new(&fq, tol)) {
        out.value("dual-dim", dual.dim() as f64);
        out.extend("dual", dual.report(&fq, tol));
    }
}

/// Quantum group, then action axioms. Returns whether both passed.
fn action_axioms(out: &mut Outcome, a: &ActionData, opts: &SuiteOptions) -> bool {
    let tol = opts.tolerance;
    out.extend("qg", validate_quantum_group(&a.qg, tol));
    if let Some(rep) = out.stage("action-axioms", validate_action(&a.qg, &a.target, &a.alpha, tol)) {
        out.extend("action", rep);
    }
    out.ok()
}

fn cocycle_axioms(out: &mut Outcome, c: &CocycleData, opts: &SuiteOptions) -> bool {
    let tol = opts.tolerance;
    out.extend("qg", validate_quantum_group(&c.qg, tol));
    if let Some(rep) = out.stage(
        "cocycle-axioms",
        validate_cocycle_action(&c.qg, &c.target, &c.alpha, &c.u, tol),
    ) {
        out.extend("cocycle", rep);
    }
    out.ok()
}

fn selected<'a>(maps: &'a [(String, LinearMap)], opts: &SuiteOptions) -> Vec<&'a (String, LinearMap)> {
    maps.iter()
        .filter(|(n, _)| opts.gamma.as_ref().is_none_or(|g| g == n))
        .collect()
}

fn context(out: &mut Outcome, a: &ActionData, opts: &SuiteOptions) -> Option<ActionContext> {
    if !action_axioms(out, a, opts) {
        return None;
    }
    out.stage("action-context", ActionContext::new(a.clone(), opts.tolerance))
}

fn is_identity_map(m: &LinearMap, other: &LinearMap) -> bool {
    m.domain() == other.domain() && m.codomain() == other.codomain() && (m.matrix() - other.matrix()).norm() == 0.0
}

fn crossed(out: &mut Outcome, a: &ActionData, opts: &SuiteOptions) {
    const ANCHOR: &str = "crossed-product";
    let tol = opts.tolerance;
    let Some(ctx) = context(out, a, opts) else { return };
    let Some(cp) = out.stage("crossed-product", build_crossed_product(&ctx.rep, &ctx.dual, tol)) else {
        return;
    };
    out.extend("crossed", cp.report.clone());
    out.extend("expectation", expectation_report(&ctx.rep, &cp, tol));
    let d = ctx.qg.dim();
    let blocks = cp.wedderburn.rep.shape().blocks().to_vec();
    out.value("dim", cp.dim() as f64);
    out.value("center-dim", cp.center_dim() as f64);
    out.value("blocks", blocks.len() as f64);
    out.value("largest-block", blocks.iter().copied().max().unwrap_or(0) as f64);

    // α = Δ: a full matrix algebra over H_φ
    if a.target == a.qg.shape && is_identity_map(&a.alpha, &a.qg.coproduct) {
        out.push(Check::fact("regular-dimension", ANCHOR, cp.dim() == d * d));
        out.push(Check::fact("regular-factor", ANCHOR, blocks == vec![d]));
    }
    // α(b) = 1 ⊗ b: the product is Â ⊗ B
    let trivial = crate::catalog::trivial_action(&a.qg, &a.target);
    if is_identity_map(&a.alpha, &trivial) {
        let mut inside = 0.0f64;
        for x in ctx.dual.basis() {
            for img in &ctx.rep.images {
                inside = inside.max(cp.algebra.residual(&(ctx.rep.dual_leg(x) * img)));
            }
        }
        out.push(Check::new("trivial-contains-dual-tensor-b", ANCHOR, inside, tol));
        out.push(Check::fact(
            "trivial-dimension",
            ANCHOR,
            cp.dim() == ctx.dual.dim() * a.target.dim(),
        ));
    }

    for (name, gamma) in selected(&a.commuting, opts) {
        let ext = extend_commuting_map(&ctx.data.qg, &ctx.data.alpha, &ctx.rep, &ctx.dual, &cp, gamma, tol);
        if let Some(ext) = out.stage(&format!("extension:{name}"), ext) {
            out.push(Check::new(format!("extension-commutation:{name}"), ANCHOR, ext.commutation, tol));
            out.push(Check::new(format!("extension-consistency:{name}"), ANCHOR, ext.consistency, tol));
            out.push(Check::new(format!("extension-slice-agreement:{name}"), ANCHOR, ext.slice_agreement, tol));
        }
    }
}

fn schur(out: &mut Outcome, a: &ActionData, opts: &SuiteOptions) {
    let tol = opts.tolerance;
    let Some(ctx) = context(out, a, opts) else { return };
    let Some(cp) = out.stage("crossed-product", build_crossed_product(&ctx.rep, &ctx.dual, tol)) else {
        return;
    };
    let mut exts = Vec::new();
    for (name, gamma) in selected(&a.commuting, opts) {
        let ext = extend_commuting_map(&ctx.data.qg, &ctx.data.alpha, &ctx.rep, &ctx.dual, &cp, gamma, tol);
        if let Some(e) = out.stage(&format!("extension:{name}"), ext) {
            exts.push((name.clone(), gamma, e));
        }
    }
    for kind in &opts.vectors {
        let label = format!("xi={}", kind.id());
        let Some(xi) = out.stage(&label, kind.build(&ctx.qg, &ctx.dual, tol)) else {
            continue;
        };
        out.value(format!("{label}/folner-defect"), xi.defect);
        let exact = xi.defect <= tol;
        let Some(pair) = out.stage(&format!("{label}/pair"), FactorizationPair::new(&ctx.qg, &ctx.rep, xi)) else {
            continue;
        };
        out.extend(&label, verify_schur(&ctx, &cp, &pair, &exts, tol));
        let defect = approximation_defect(&pair, &ctx.rep, &cp);
        out.value(format!("{label}/approximation-defect"), defect);
        if exact {
            out.push(Check::new(
                format!("{label}/approximation-defect"),
                "schur-factorization",
                defect,
                tol,
            ));
        }
    }
}

fn phase_distance(a: &CVec, b: &CVec) -> f64 {
    let ip = a.dotc(b);
    let ph = if ip.norm() > 0.0 { ip / cr(ip.norm()) } else { cr(1.0) };
    (a * ph - b).norm()
}

fn folner(out: &mut Outcome, a: &ActionData, opts: &SuiteOptions) {
    const ANCHOR: &str = "folner-vector";
    let tol = opts.tolerance;
    out.extend("qg", validate_quantum_group(&a.qg, tol));
    if !out.ok() {
        return;
    }
    let Some(q) = out.stage("finite-quantum-group", FiniteQuantumGroup::new(a.qg.clone(), tol)) else {
        return;
    };
    let Some(dual) = out.stage("dual", DualQuantumGroup::new(&q, tol)) else {
        return;
    };
    let Some(xi) = out.stage("folner-vector", folner_vector(&q, &dual, tol)) else {
        return;
    };
    out.push(Check::new("folner-defect", ANCHOR, xi.defect, tol));
    out.push(Check::new("folner-is-cyclic-vector", ANCHOR, phase_distance(&xi.xi, &q.gns.cyclic()), tol));
    if a.qg.shape.blocks().iter().all(|&n| n == 1) {
        let d = q.dim();
        let flat = CVec::from_element(d, cr(1.0 / (d as f64).sqrt()));
        out.push(Check::new("folner-constant", ANCHOR, phase_distance(&xi.xi, &flat), tol));
    }
    let Some(rep) = out.stage("action-axioms", validate_action(&a.qg, &a.target, &a.alpha, tol)) else {
        return;
    };
    out.extend("action", rep);
    if !out.ok() {
        return;
    }
    let Some(ctx) = out.stage("action-context", ActionContext::new(a.clone(), tol)) else {
        return;
    };
    let Some(cp) = out.stage("crossed-product", build_crossed_product(&ctx.rep, &ctx.dual, tol)) else {
        return;
    };
    let Some(pair) = out.stage("pair", FactorizationPair::new(&ctx.qg, &ctx.rep, xi)) else {
        return;
    };
    out.push(Check::new("coisometry", ANCHOR, pair.coisometry_residual(), tol.min(1e-12)));
    out.push(Check::new(
        "approximation-defect",
        ANCHOR,
        approximation_defect(&pair, &ctx.rep, &cp),
        tol,
    ));
}

fn entropy(out: &mut Outcome, a: &ActionData, opts: &SuiteOptions) {
    let tol = opts.tolerance;
    let Some(ctx) = context(out, a, opts) else { return };
    let Some(cp) = out.stage("crossed-product", build_crossed_product(&ctx.rep, &ctx.dual, tol)) else {
        return;
    };
    let mut maps: Vec<(String, LinearMap)> = selected(&a.commuting, opts).into_iter().cloned().collect();
    if a.commuting.is_empty() && opts.gamma.as_ref().is_none_or(|g| g == "id") {
        maps.push(("id".into(), LinearMap::identity(&a.target)));
    }
    let cfg = LedgerConfig {
        epsilons: opts.epsilons.clone(),
        horizon: opts.horizon,
        tol,
    };
    for (name, gamma) in &maps {
        let label = format!("gamma={name}");
        let ext = extend_commuting_map(&ctx.data.qg, &ctx.data.alpha, &ctx.rep, &ctx.dual, &cp, gamma, tol);
        let Some(ext) = out.stage(&format!("{label}/extension"), ext) else {
            continue;
        };
        let Some(xi) = out.stage(&format!("{label}/folner-vector"), folner_vector(&ctx.qg, &ctx.dual, tol)) else {
            continue;
        };
        let Some(pair) = out.stage(&format!("{label}/pair"), FactorizationPair::new(&ctx.qg, &ctx.rep, xi)) else {
            continue;
        };
        let ledger = ledger_check(&ctx, &cp, gamma, &ext, pair, &cfg);
        out.value(format!("{label}/delta"), ledger.delta);
        for row in &ledger.rows {
            let key = format!("{label}/N={}:eps={}", row.horizon, row.eps);
            let put = |out: &mut Outcome, k: &str, v: Option<f64>| {
                if let Some(v) = v {
                    out.value(format!("{key}/{k}"), v);
                }
            };
            put(out, "rcp-crossed", row.rcp_crossed.map(|x| x as f64));
            put(out, "rcp-matrix", row.rcp_matrix.map(|x| x as f64));
            put(out, "rcp-b", row.rcp_b.map(|x| x as f64));
            put(out, "rcp-alpha-b", row.rcp_alpha_b.map(|x| x as f64));
            put(out, "ht-gamma", row.ht_gamma);
            put(out, "ht-gamma-hat", row.ht_gamma_hat);
        }
        out.extend(&label, ledger.report);
    }
}

fn cocycle_context(out: &mut Outcome, c: &CocycleData, opts: &SuiteOptions) -> Option<CocycleContext> {
    if !cocycle_axioms(out, c, opts) {
        return None;
    }
    out.stage("cocycle-context", CocycleContext::new(c.clone(), opts.tolerance))
}

fn twist(out: &mut Outcome, c: &CocycleData, opts: &SuiteOptions) {
    let tol = opts.tolerance;
    let Some(ctx) = cocycle_context(out, c, opts) else { return };
    let Some(tcp) = out.stage("twisted", build_twisted_crossed_product(&ctx.qg, &ctx.system, tol)) else {
        return;
    };
    out.extend("twisted", tcp.report.clone());
    out.value("dim", tcp.dim() as f64);
    out.value("center-dim", tcp.center_dim() as f64);
    if ctx.is_untwisted(tol) {
        if let Some(rep) = out.stage("collapse", collapse_report(&ctx, &tcp, tol)) {
            out.extend("", rep);
        }
    }
    for (name, gamma) in selected(&c.commuting, opts) {
        let ext = extend_commuting_map_twisted(&c.qg, &ctx.system, &tcp, gamma, tol);
        if let Some(ext) = out.stage(&format!("extension:{name}"), ext) {
            out.extend("", ext.report(name, tol));
        }
    }
}

fn stabilize(out: &mut Outcome, c: &CocycleData, opts: &SuiteOptions) {
    let tol = opts.tolerance;
    let Some(ctx) = cocycle_context(out, c, opts) else { return };
    let Some(st) = out.stage("stabilizer", stabilizer_x(&ctx.qg, &ctx.dual, &ctx.system, tol)) else {
        return;
    };
    out.value("stabeq", st.stabeq);
    out.extend("", st.report.clone());
    if !out.ok() {
        return;
    }
    let commuting: Vec<(String, LinearMap)> = selected(&c.commuting, opts).into_iter().cloned().collect();
    if let Some(tr) = out.stage("ad-x", ad_x_transport(&ctx.qg, &ctx.dual, &st, &commuting, tol)) {
        out.value("cp-beta-dim", tr.cp_beta.dim() as f64);
        out.value("twisted-amplified-dim", tr.twisted.dim() as f64);
        out.extend("", tr.report);
    }
}

/// Each document through the validator of its kind, merged into one report.
pub fn run_validate(docs: &[SpecDocument], opts: &SuiteOptions) -> Result<Report> {
    let start = Instant::now();
    let mut records = Vec::new();
    let mut values = BTreeMap::new();
    for kind in ["quantum_group", "action", "cocycle_action", "observation_set"] {
        let group: Vec<SpecDocument> = docs.iter().filter(|d| d.kind() == kind).cloned().collect();
        if group.is_empty() {
            continue;
        }
        let r = run_suite(Suite::validator_for(kind)?, &group, opts)?;
        records.extend(r.body.records);
        values.extend(r.body.values);
    }
    let env = Environment {
        tolerance: opts.tolerance,
        horizon: opts.horizon,
        epsilons: opts.epsilons.clone(),
        input: docs.iter().map(|d| d.name.as_str()).collect::<Vec<_>>().join(","),
    };
    let ms = start.elapsed().as_secs_f64() * 1e3;
    Ok(Report::new("validate", env, records, values, ms))
}
