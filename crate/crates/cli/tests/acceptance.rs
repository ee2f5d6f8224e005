//! Acceptance run: one line per criterion, nonzero exit if any fails.
//!
//! Run with `cargo test -p qcross-cli --test acceptance`.

use qcross::catalog::{self, ACTIONS, COCYCLES, QUANTUM_GROUPS};
use qcross::format::{Body, SpecDocument};
use qcross::report::{Check, Report};
use qcross::suites::{run_suite, run_validate, Suite, SuiteOptions, XiKind};
use std::collections::BTreeSet;
use std::process::{Command, ExitCode};
use std::time::Instant;

const TOL: f64 = 1e-9;
const COISOMETRY_TOL: f64 = 1e-12;
const QG_SECONDS: f64 = 5.0;
const LEDGER_SECONDS: f64 = 20.0;

/// Failures collected while checking one criterion.
#[derive(Default)]
struct Verdict {
    problems: Vec<String>,
    checked: usize,
}

impl Verdict {
    fn fail(&mut self, msg: impl Into<String>) {
        self.problems.push(msg.into());
    }

    fn expect(&mut self, ok: bool, msg: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.fail(msg());
        }
    }

    /// The record `id` exists, passes, and has residual at most `tol`.
    fn record(&mut self, report: &Report, id: &str, tol: f64) {
        match report.body.records.iter().find(|c| c.check == id) {
            Some(c) => self.within(c, tol),
            None => {
                self.checked += 1;
                self.fail(format!("missing record {id}"));
            }
        }
    }

    fn within(&mut self, c: &Check, tol: f64) {
        self.expect(c.pass && c.residual <= tol, || {
            format!("{} residual {:.3e} (pass={}, bound {tol:.0e})", c.check, c.residual, c.pass)
        });
    }

    /// Every record whose id starts with `prefix` passes at `tol`; returns how many.
    fn all_with_prefix(&mut self, report: &Report, prefix: &str, tol: f64) -> usize {
        let hits: Vec<&Check> = report.body.records.iter().filter(|c| c.check.starts_with(prefix)).collect();
        for c in &hits {
            self.within(c, tol);
        }
        hits.len()
    }

    fn value(&mut self, report: &Report, key: &str, want: f64) {
        let got = report.body.values.get(key).copied();
        self.expect(got == Some(want), || format!("{key} = {got:?}, expected {want}"));
    }

    fn finish(self, n: usize, what: &str, failed: &mut bool) {
        if self.problems.is_empty() {
            println!("criterion {n}: PASS  {what} ({} checks)", self.checked);
        } else {
            *failed = true;
            println!("criterion {n}: FAIL  {what} ({} of {} checks failed)", self.problems.len(), self.checked);
            for p in self.problems.iter().take(20) {
                println!("    {p}");
            }
        }
    }
}

fn doc(name: &str) -> SpecDocument {
    catalog::document(name).unwrap_or_else(|e| panic!("{name}: {e}"))
}

fn opts() -> SuiteOptions {
    SuiteOptions {
        threads: 1,
        ..SuiteOptions::default()
    }
}

fn run(suite: Suite, names: &[&str], o: &SuiteOptions, v: &mut Verdict) -> Option<Report> {
    let docs: Vec<SpecDocument> = names.iter().map(|n| doc(n)).collect();
    match run_suite(suite, &docs, o) {
        Ok(r) => Some(r),
        Err(e) => {
            v.fail(format!("{} on {names:?}: {e}", suite.id()));
            None
        }
    }
}

fn commuting_names(d: &SpecDocument) -> Vec<String> {
    match &d.body {
        Body::Action(s) => s.commuting.iter().map(|m| m.name.clone()).collect(),
        Body::CocycleAction(s) => s.commuting.iter().map(|m| m.name.clone()).collect(),
        _ => Vec::new(),
    }
}

fn shape_dim(shape: &[usize]) -> usize {
    shape.iter().map(|n| n * n).sum()
}

fn criterion_1(failed: &mut bool) {
    let mut v = Verdict::default();
    let ids = [
        "coassociativity",
        "counit-property",
        "counit-character",
        "antipode-property",
        "haar-invariance-id-h",
        "haar-invariance-h-id",
        "antipode-involutive",
        "w-pentagon",
        "w-unitary",
        "w-implements-coproduct",
    ];
    let mut slowest = (0.0, "");
    for name in QUANTUM_GROUPS {
        let start = Instant::now();
        let Some(r) = run(Suite::QgAxioms, &[name], &opts(), &mut v) else { continue };
        let secs = start.elapsed().as_secs_f64();
        if secs > slowest.0 {
            slowest = (secs, name);
        }
        v.expect(secs <= QG_SECONDS, || format!("{name} took {secs:.2} s"));
        for id in ids {
            v.record(&r, &format!("{name}/{id}"), TOL);
        }
        v.expect(r.body.pass, || format!("{name} has failing records"));
    }
    let what = format!("quantum-group axioms, slowest {} in {:.2} s", slowest.1, slowest.0);
    v.finish(1, &what, failed);
}

fn criterion_2(failed: &mut bool) {
    let mut v = Verdict::default();
    let o = SuiteOptions {
        vectors: XiKind::ALL.to_vec(),
        ..opts()
    };
    for name in ACTIONS {
        let Some(r) = run(Suite::Schur, &[name], &o, &mut v) else { continue };
        let gammas = commuting_names(&doc(name));
        for xi in XiKind::ALL {
            let p = format!("{name}/xi={}", xi.id());
            v.record(&r, &format!("{p}/coisometry"), COISOMETRY_TOL);
            for id in ["phi-unital", "phi-cp", "psi-unital", "psi-cp", "schur", "xapprox", "zfact", "long"] {
                v.record(&r, &format!("{p}/{id}"), TOL);
            }
            for g in &gammas {
                v.record(&r, &format!("{p}/phi-equivariance:{g}"), TOL);
                v.record(&r, &format!("{p}/psi-equivariance:{g}"), TOL);
            }
        }
        v.expect(r.body.pass, || format!("{name} has failing records"));
    }
    v.finish(2, "factorization through Φ_F and Ψ_ξ for every action and ξ", failed);
}

fn criterion_3(failed: &mut bool) {
    let mut v = Verdict::default();
    if let Some(r) = run(Suite::Folner, QUANTUM_GROUPS, &opts(), &mut v) {
        for name in QUANTUM_GROUPS {
            v.record(&r, &format!("{name}/folner-defect"), TOL);
            v.record(&r, &format!("{name}/approximation-defect"), TOL);
            if name.starts_with("fn_group:") {
                v.record(&r, &format!("{name}/folner-constant"), TOL);
            }
        }
        v.expect(r.body.pass, || "folner suite has failing records".into());
    }
    v.finish(3, "exact Følner vectors and zero approximation defect", failed);
}

fn criterion_4(failed: &mut bool) {
    let mut v = Verdict::default();
    if let Some(r) = run(Suite::Crossed, ACTIONS, &opts(), &mut v) {
        for name in ACTIONS {
            let Body::Action(s) = doc(name).body else { unreachable!() };
            let dim_a = shape_dim(&s.quantum_group.spec.shape);
            let dim_b = shape_dim(&s.target);
            let n = v.all_with_prefix(&r, &format!("{name}/expectation/"), TOL);
            v.expect(n >= 6, || format!("{name}: only {n} expectation records"));
            if name.starts_with("action:regular_") {
                v.value(&r, &format!("{name}/dim"), (dim_a * dim_a) as f64);
                v.value(&r, &format!("{name}/center-dim"), 1.0);
                v.record(&r, &format!("{name}/regular-dimension"), TOL);
                v.record(&r, &format!("{name}/regular-factor"), TOL);
            }
            if name.starts_with("action:trivial_") {
                v.value(&r, &format!("{name}/dim"), (dim_a * dim_b) as f64);
                v.record(&r, &format!("{name}/trivial-contains-dual-tensor-b"), TOL);
                v.record(&r, &format!("{name}/trivial-dimension"), TOL);
            }
        }
        v.value(&r, "action:z2_swap/dim", 4.0);
        v.value(&r, "action:z2_swap/center-dim", 1.0);
        v.expect(r.body.pass, || "crossed suite has failing records".into());
    }
    v.finish(4, "crossed-product dimensions, centers and the expectation", failed);
}

fn criterion_5(failed: &mut bool) {
    let mut v = Verdict::default();
    let o = opts();
    let start = Instant::now();
    let report = run(Suite::EntropyLedger, ACTIONS, &o, &mut v);
    let secs = start.elapsed().as_secs_f64();
    v.expect(o.horizon == 6 && o.epsilons == [0.1, 0.25, 0.5], || "default ledger grid changed".into());
    v.expect(secs <= LEDGER_SECONDS, || format!("ledger took {secs:.2} s"));
    if let Some(r) = report {
        for name in ACTIONS {
            let gammas: BTreeSet<&str> = r
                .body
                .records
                .iter()
                .filter_map(|c| c.check.strip_prefix(name)?.strip_prefix("/gamma=")?.split('/').next())
                .collect();
            v.expect(!gammas.is_empty(), || format!("{name}: no ledger"));
            for g in gammas {
                let p = format!("{name}/gamma={g}");
                v.record(&r, &format!("{p}/transport-preserves-size"), 0.0);
                for n in 1..=o.horizon {
                    for e in &o.epsilons {
                        for id in ["transport-valid", "ledger-a-downward", "expectation-transport", "ledger-b-upward", "ledger-c-folner"] {
                            v.record(&r, &format!("{p}/{id}:N={n}:eps={e}"), 0.0);
                        }
                        let key = |k: &str| format!("{p}/N={n}:eps={e}/{k}");
                        let (a, b) = (r.body.values.get(&key("ht-gamma")), r.body.values.get(&key("ht-gamma-hat")));
                        v.expect(a.is_some() && a == b, || format!("{p} N={n} eps={e}: ht {a:?} vs {b:?}"));
                    }
                }
            }
        }
        v.expect(r.body.pass, || "entropy ledger has failing records".into());
    }
    v.finish(5, &format!("finite-horizon entropy ledger in {secs:.2} s"), failed);
}

fn criterion_6(failed: &mut bool) {
    let mut v = Verdict::default();
    if let Some(r) = run(Suite::Twist, COCYCLES, &opts(), &mut v) {
        for name in COCYCLES {
            for id in ["twact1", "twact2", "adv"] {
                v.record(&r, &format!("{name}/cocycle/{id}"), TOL);
            }
            if name.starts_with("cocycle:unit_") {
                v.record(&r, &format!("{name}/collapse-crossed-product"), TOL);
                v.record(&r, &format!("{name}/collapse-lambda-tilde"), TOL);
                for g in commuting_names(&doc(name)) {
                    v.record(&r, &format!("{name}/collapse-extension:{g}"), TOL);
                }
            }
        }
        v.value(&r, "cocycle:z2z2_bichar/dim", 4.0);
        v.value(&r, "cocycle:z2z2_bichar/center-dim", 1.0);
        v.expect(r.body.pass, || "twist suite has failing records".into());
    }
    if let Some(r) = run(Suite::Stabilize, COCYCLES, &opts(), &mut v) {
        for name in COCYCLES {
            v.record(&r, &format!("{name}/stabeq:legs(A,B,K):X=V31*U312*"), TOL);
            for id in ["x-unitary", "ad-x-dimension", "ad-x-isometric", "ad-x-multiplicative", "ad-x-onto"] {
                v.record(&r, &format!("{name}/{id}"), TOL);
            }
            for g in commuting_names(&doc(name)) {
                v.record(&r, &format!("{name}/gamma-covariance:{g}"), TOL);
            }
        }
        v.expect(r.body.pass, || "stabilize suite has failing records".into());
    }
    v.finish(6, "cocycle identities, U = 1 collapse and stabilization", failed);
}

fn criterion_7(failed: &mut bool) {
    let mut v = Verdict::default();
    for name in QUANTUM_GROUPS.iter().chain(ACTIONS).chain(COCYCLES) {
        let bad = format!("{}{name}", catalog::CORRUPT_PREFIX);
        let out = Command::new(env!("CARGO_BIN_EXE_qcross"))
            .args(["validate", &bad])
            .output()
            .expect("qcross runs");
        let stdout = String::from_utf8_lossy(&out.stdout);
        let named = stdout
            .lines()
            .filter_map(|l| l.strip_prefix("FAIL  "))
            .find(|l| l.starts_with(&format!("{bad}/")));
        v.expect(out.status.code() == Some(1), || format!("{bad}: exit {:?}", out.status.code()));
        v.expect(named.is_some(), || format!("{bad}: no named failing check"));
    }
    // the uncorrupted entries still pass
    let clean: Vec<SpecDocument> = QUANTUM_GROUPS.iter().chain(ACTIONS).chain(COCYCLES).map(|n| doc(n)).collect();
    match run_validate(&clean, &opts()) {
        Ok(r) => v.expect(r.body.pass, || "clean catalog fails validation".into()),
        Err(e) => v.fail(e.to_string()),
    }
    v.finish(7, "corrupted variants rejected with exit code 1", failed);
}

fn report_body(path: &std::path::Path) -> Option<String> {
    let text = std::fs::read_to_string(path).ok()?;
    let json: serde_json::Value = serde_json::from_str(&text).ok()?;
    Some(json.get("body")?.to_string())
}

fn criterion_8(failed: &mut bool) {
    let mut v = Verdict::default();
    let dir = std::env::temp_dir().join(format!("qcross-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).expect("temp dir");
    let runs: [&[&str]; 7] = [
        &["validate"],
        &["crossed"],
        &["schur", "action:z2_swap", "action:regular_s3", "action:translation_z3"],
        &["folner"],
        &["entropy", "action:z2_swap", "action:z2_ad_m2"],
        &["twist"],
        &["stabilize"],
    ];
    for args in runs {
        let mut bodies = Vec::new();
        for k in 0..2 {
            let path = dir.join(format!("{}-{k}.json", args[0]));
            let status = Command::new(env!("CARGO_BIN_EXE_qcross"))
                .args(args)
                .arg("--report")
                .arg(&path)
                .output()
                .expect("qcross runs")
                .status;
            v.expect(status.success(), || format!("{args:?} exit {:?}", status.code()));
            bodies.push(report_body(&path));
        }
        v.expect(bodies[0].is_some() && bodies[0] == bodies[1], || format!("{args:?}: bodies differ"));
    }
    let _ = std::fs::remove_dir_all(&dir);
    v.finish(8, "report bodies byte-identical across two runs", failed);
}

fn main() -> ExitCode {
    let mut failed = false;
    let criteria: [fn(&mut bool); 8] = [
        criterion_1,
        criterion_2,
        criterion_3,
        criterion_4,
        criterion_5,
        criterion_6,
        criterion_7,
        criterion_8,
    ];
    for c in criteria {
        c(&mut failed);
    }
    if failed {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
