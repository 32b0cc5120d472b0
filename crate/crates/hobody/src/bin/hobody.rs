//! Verification CLI: runs the inequality suites over the body catalog and
//! reports one pass/fail row per check.
//!
//! Exit codes: 0 all checks pass, 1 any check failed (or an internal
//! numerical error), 2 usage error, 3 input error (unreadable or malformed
//! catalog/config/output paths).

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use hobody::harness::{
    run_suite, write_report, BodySpec, HarnessError, ReportFormat, SuiteConfig, SuiteReport,
    SUITE_NAMES,
};

const USAGE_EXIT: u8 = 2;
const INPUT_EXIT: u8 = 3;

#[derive(Parser)]
#[command(name = "hobody", version, about = "Higher-order convex-body verification suites")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run one verification suite, or `all`.
    Verify(VerifyArgs),
    /// Inspect the body catalog.
    Bodies {
        #[command(subcommand)]
        cmd: BodiesCmd,
    },
}

#[derive(Args)]
struct VerifyArgs {
    /// Suite name (see `hobody verify --help` for the list) or `all`.
    #[arg(value_name = "SUITE")]
    suite: String,
    /// Restrict the (n, m) grid to dimension N.
    #[arg(long)]
    n: Option<usize>,
    /// Restrict the (n, m) grid to order M.
    #[arg(long)]
    m: Option<usize>,
    /// Base Monte Carlo budget; suites scale it per check.
    #[arg(long)]
    samples: Option<u64>,
    /// Base seed; overrides the HOBODY_SEED environment variable.
    #[arg(long)]
    seed: Option<u64>,
    /// Per-suite relative tolerance floor, e.g. `--tol zhang=0.02`; repeatable.
    #[arg(long = "tol", value_name = "SUITE=VAL")]
    tol: Vec<String>,
    /// JSON catalog file; defaults to the built-in catalog.
    #[arg(long)]
    catalog: Option<PathBuf>,
    /// Write the report to this path.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Report format for --out (default json).
    #[arg(long, value_enum)]
    format: Option<ReportFormat>,
    /// JSON config file preloading any flag; explicit flags win.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Subcommand)]
enum BodiesCmd {
    /// List the catalog bodies.
    List {
        /// JSON catalog file; defaults to the built-in catalog.
        #[arg(long)]
        catalog: Option<PathBuf>,
    },
}

/// Config-file schema: every field optional so precedence stays explicit.
#[derive(serde::Deserialize, Default)]
#[serde(default, deny_unknown_fields)]
struct FileConfig {
    n: Option<usize>,
    m: Option<usize>,
    samples: Option<u64>,
    seed: Option<u64>,
    tolerances: Option<BTreeMap<String, f64>>,
    catalog: Option<PathBuf>,
    out: Option<PathBuf>,
    format: Option<ReportFormat>,
}

fn main() -> ExitCode {
    match Cli::parse().cmd {
        Cmd::Verify(args) => verify(args),
        Cmd::Bodies {
            cmd: BodiesCmd::List { catalog },
        } => bodies_list(catalog),
    }
}

fn fail(code: u8, message: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {message}");
    ExitCode::from(code)
}

fn exit_for(err: &HarnessError) -> u8 {
    match err {
        HarnessError::UnknownSuite(_) | HarnessError::Config(_) => USAGE_EXIT,
        HarnessError::Catalog { .. } | HarnessError::Io { .. } => INPUT_EXIT,
        HarnessError::Body(_) | HarnessError::Quadrature(_) => 1,
    }
}

/// Flags override the config file, the file overrides HOBODY_SEED.
fn resolve_config(args: &VerifyArgs) -> Result<SuiteConfig, ExitCode> {
    let mut cfg = SuiteConfig::default();
    if let Ok(seed) = std::env::var("HOBODY_SEED") {
        cfg.seed = seed
            .parse()
            .map_err(|_| fail(USAGE_EXIT, format!("HOBODY_SEED `{seed}` is not a u64")))?;
    }
    if let Some(path) = &args.config {
        let text = std::fs::read_to_string(path)
            .map_err(|e| fail(INPUT_EXIT, format!("config {}: {e}", path.display())))?;
        let file: FileConfig = serde_json::from_str(&text).map_err(|e| {
            fail(
                INPUT_EXIT,
                format!(
                    "config {}: line {}, column {}: {e}",
                    path.display(),
                    e.line(),
                    e.column()
                ),
            )
        })?;
        cfg.n = file.n.or(cfg.n);
        cfg.m = file.m.or(cfg.m);
        cfg.samples = file.samples.unwrap_or(cfg.samples);
        cfg.seed = file.seed.unwrap_or(cfg.seed);
        cfg.tolerances = file.tolerances.unwrap_or(cfg.tolerances);
        cfg.catalog = file.catalog.or(cfg.catalog);
        cfg.out = file.out.or(cfg.out);
        cfg.format = file.format.unwrap_or(cfg.format);
    }
    cfg.n = args.n.or(cfg.n);
    cfg.m = args.m.or(cfg.m);
    cfg.samples = args.samples.unwrap_or(cfg.samples);
    cfg.seed = args.seed.unwrap_or(cfg.seed);
    cfg.catalog = args.catalog.clone().or(cfg.catalog);
    cfg.out = args.out.clone().or(cfg.out);
    cfg.format = args.format.unwrap_or(cfg.format);
    for spec in &args.tol {
        let Some((suite, value)) = spec.split_once('=') else {
            return Err(fail(USAGE_EXIT, format!("--tol `{spec}` is not SUITE=VAL")));
        };
        let value: f64 = value
            .parse()
            .map_err(|_| fail(USAGE_EXIT, format!("--tol `{spec}`: bad value")))?;
        cfg.tolerances.insert(suite.to_string(), value);
    }
    cfg.validate().map_err(|e| fail(exit_for(&e), e))?;
    Ok(cfg)
}

fn verify(args: VerifyArgs) -> ExitCode {
    let cfg = match resolve_config(&args) {
        Ok(cfg) => cfg,
        Err(code) => return code,
    };
    let names: Vec<&str> = if args.suite == "all" {
        SUITE_NAMES.to_vec()
    } else {
        match SUITE_NAMES.iter().find(|n| **n == args.suite) {
            Some(n) => vec![n],
            None => {
                return fail(
                    USAGE_EXIT,
                    HarnessError::UnknownSuite(args.suite.clone()),
                )
            }
        }
    };
    let started = Instant::now();
    let mut reports: Vec<SuiteReport> = Vec::new();
    for name in names {
        match run_suite(name, &cfg) {
            Ok(report) => {
                print_report(&report);
                reports.push(report);
            }
            Err(e) => return fail(exit_for(&e), format!("suite {name}: {e}")),
        }
    }
    let checks: usize = reports.iter().map(|r| r.rows.len()).sum();
    let failures: usize = reports.iter().map(|r| r.failures().count()).sum();
    println!(
        "total: {checks} checks, {} passed, {failures} failed ({:.1} s)",
        checks - failures,
        started.elapsed().as_secs_f64()
    );
    if let Some(path) = &cfg.out {
        if let Err(e) = write_report(&reports, cfg.format, path) {
            return fail(exit_for(&e), e);
        }
        println!("report written to {}", path.display());
    }
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn print_report(report: &SuiteReport) {
    for r in &report.rows {
        println!(
            "{:<20} {:<34} n={} m={} value {:>13.6e} \u{00b1} {:>9.3e}  ref {:>13.6e}  {:<19} {}  {} ms",
            r.suite,
            r.body,
            r.n,
            r.m,
            r.value,
            r.std_error,
            r.reference,
            r.provenance.as_str(),
            if r.pass { "PASS" } else { "FAIL" },
            r.wall_ms
        );
    }
    let failures = report.failures().count();
    println!(
        "suite {}: {} checks, {} passed, {} failed",
        report.suite,
        report.rows.len(),
        report.rows.len() - failures,
        failures
    );
}

fn describe(spec: &BodySpec) -> String {
    match spec {
        BodySpec::Simplex { n } => format!("simplex, n={n}"),
        BodySpec::Cube { n } => format!("cube, n={n}"),
        BodySpec::CrossPolytope { n } => format!("cross-polytope, n={n}"),
        BodySpec::RegularPolygon { sides } => format!("regular {sides}-gon, n=2"),
        BodySpec::RandomPolytope { n, points, seed } => {
            format!("random polytope, n={n}, {points} points, seed {seed}")
        }
        BodySpec::Ball { n } => format!("unit ball, n={n}"),
        BodySpec::Ellipsoid { semiaxes } => format!("ellipsoid, semiaxes {semiaxes:?}"),
    }
}

fn bodies_list(catalog: Option<PathBuf>) -> ExitCode {
    let cfg = SuiteConfig {
        catalog,
        ..SuiteConfig::default()
    };
    match cfg.load_catalog() {
        Ok(cat) => {
            for e in &cat.entries {
                println!("{:<14} {}", e.name, describe(&e.spec));
            }
            ExitCode::SUCCESS
        }
        Err(e) => fail(exit_for(&e), e),
    }
}
