//! `qcross`: run verification suites on catalog entries or document files.
//!
//! Exit status: 0 when every check passes, 1 when a check fails, 2 on an
//! input error.

use clap::{Parser, Subcommand};
use qcross::format::{parse_spec, serialize_spec, SpecDocument};
use qcross::report::Report;
use qcross::suites::{run_suite, run_validate, Suite, SuiteOptions, XiKind};
use qcross::{catalog, Error};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "qcross", version, about = "Verification suites for finite quantum group actions")]
struct Cli {
    /// Residual tolerance for structural checks.
    #[arg(long, global = true, env = "QCROSS_TOLERANCE", default_value_t = qcross::DEFAULT_TOLERANCE)]
    tolerance: f64,
    /// Write the full report (JSON) to this path.
    #[arg(long, global = true)]
    report: Option<PathBuf>,
    /// Largest orbit length N for the entropy ledger.
    #[arg(long, global = true, default_value_t = qcross::entropy::DEFAULT_HORIZON)]
    horizon: usize,
    /// Comma-separated ε grid for the entropy ledger.
    #[arg(long, global = true, value_delimiter = ',', default_values_t = qcross::entropy::DEFAULT_EPSILONS)]
    eps: Vec<f64>,
    /// Restrict to one commuting map by name.
    #[arg(long, global = true)]
    gamma: Option<String>,
    /// Worker threads when several inputs are given (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    /// Print every record, not only failures.
    #[arg(long, short, global = true)]
    verbose: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the axioms of quantum groups, actions and cocycle actions.
    Validate { inputs: Vec<String> },
    /// Build crossed products and certify their structure.
    Crossed { inputs: Vec<String> },
    /// Schur multiplier factorization through Φ and Ψ.
    Schur {
        inputs: Vec<String>,
        /// Comma-separated vector kinds: folner, delta, random.
        #[arg(long, value_delimiter = ',', default_values = ["folner", "delta", "random"])]
        xi: Vec<String>,
    },
    /// Exact Følner vectors and the approximation defect.
    Folner { inputs: Vec<String> },
    /// Finite-horizon entropy ledger.
    Entropy { inputs: Vec<String> },
    /// Twisted crossed products of cocycle actions.
    Twist { inputs: Vec<String> },
    /// Stabilization by the unitary X and transport through Ad_X.
    Stabilize { inputs: Vec<String> },
    /// Inspect the built-in catalog.
    Catalog {
        #[command(subcommand)]
        action: CatalogCommand,
    },
}

#[derive(Subcommand)]
enum CatalogCommand {
    /// List built-in entries.
    List,
    /// Print an entry as a document.
    Show { name: String },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn load(input: &str) -> Result<SpecDocument, Error> {
    let path = Path::new(input);
    if path.is_file() {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Input(format!("{input}: {e}")))?;
        return parse_spec(&text);
    }
    catalog::document(input)
}

fn load_all(inputs: &[String], suite: Option<Suite>) -> Result<Vec<SpecDocument>, Error> {
    if inputs.is_empty() {
        let names: Vec<&str> = match suite {
            Some(s) => s.default_inputs(),
            None => Suite::QgAxioms
                .default_inputs()
                .into_iter()
                .chain(Suite::ActionAxioms.default_inputs())
                .chain(Suite::CocycleAxioms.default_inputs())
                .collect(),
        };
        return names.into_iter().map(catalog::document).collect();
    }
    inputs.iter().map(|i| load(i)).collect()
}

fn options(cli: &Cli) -> Result<SuiteOptions, Error> {
    if !(cli.tolerance.is_finite() && cli.tolerance > 0.0) {
        return Err(Error::Input(format!("tolerance must be positive, got {}", cli.tolerance)));
    }
    if cli.horizon == 0 {
        return Err(Error::Input("horizon must be at least 1".into()));
    }
    if cli.eps.is_empty() || cli.eps.iter().any(|e| !(e.is_finite() && *e > 0.0)) {
        return Err(Error::Input("eps must be a nonempty list of positive numbers".into()));
    }
    let mut opts = SuiteOptions {
        tolerance: cli.tolerance,
        horizon: cli.horizon,
        epsilons: cli.eps.clone(),
        gamma: cli.gamma.clone(),
        ..SuiteOptions::default()
    };
    if cli.threads > 0 {
        opts.threads = cli.threads;
    }
    Ok(opts)
}

fn run(cli: &Cli) -> Result<ExitCode, Error> {
    let mut opts = options(cli)?;
    let (suite, inputs) = match &cli.command {
        Command::Catalog { action } => {
            catalog_command(action)?;
            return Ok(ExitCode::SUCCESS);
        }
        Command::Validate { inputs } => {
            let docs = load_all(inputs, None)?;
            return finish(cli, &run_validate(&docs, &opts)?);
        }
        Command::Crossed { inputs } => (Suite::Crossed, inputs),
        Command::Schur { inputs, xi } => {
            opts.vectors = xi.iter().map(|x| XiKind::from_id(x)).collect::<Result<_, _>>()?;
            (Suite::Schur, inputs)
        }
        Command::Folner { inputs } => (Suite::Folner, inputs),
        Command::Entropy { inputs } => (Suite::EntropyLedger, inputs),
        Command::Twist { inputs } => (Suite::Twist, inputs),
        Command::Stabilize { inputs } => (Suite::Stabilize, inputs),
    };
    let docs = load_all(inputs, Some(suite))?;
    finish(cli, &run_suite(suite, &docs, &opts)?)
}

fn catalog_command(cmd: &CatalogCommand) -> Result<(), Error> {
    match cmd {
        CatalogCommand::List => {
            for name in catalog::names() {
                let doc = catalog::document(name)?;
                println!("{name:<36} {:<15} {}", doc.kind(), doc.description);
            }
            println!("(prefix any name with `{}` for a variant perturbed by {})", catalog::CORRUPT_PREFIX, catalog::CORRUPTION);
        }
        CatalogCommand::Show { name } => print!("{}", serialize_spec(&catalog::document(name)?)),
    }
    Ok(())
}

fn finish(cli: &Cli, report: &Report) -> Result<ExitCode, Error> {
    let body = &report.body;
    for r in &body.records {
        if cli.verbose || !r.pass {
            let verdict = if r.pass { "pass" } else { "FAIL" };
            let note = r.note.as_deref().map(|n| format!("  ({n})")).unwrap_or_default();
            println!(
                "{verdict}  {}  residual={:.3e}  tolerance={:.1e}  [{}]{note}",
                r.check, r.residual, r.tolerance, r.anchor
            );
        }
    }
    let failed = body.records.iter().filter(|r| !r.pass).count();
    println!(
        "{}: {} ({} checks, {} failed, {:.0} ms)",
        body.suite,
        if body.pass { "PASS" } else { "FAIL" },
        body.records.len(),
        failed,
        report.timing_ms
    );
    if let Some(path) = &cli.report {
        std::fs::write(path, report.to_json() + "\n")
            .map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
    }
    Ok(if body.pass { ExitCode::SUCCESS } else { ExitCode::from(1) })
}
