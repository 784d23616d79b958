//! `einstein-gap` command-line front end.
//!
//! Exit codes: 0 success, 1 usage or I/O error, 2 a mathematical check failed.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use einstein_gap::char_numbers::{
    betti_from_chi_tau, einstein_obstructed, hitchin_thorpe_status, sw_lower_bound, CharNumbers,
    HtStatus, HtVerdict, ObstructionReport,
};
use einstein_gap::curvature_lab::{
    glue_report_csv, run_glue_lab, CutoffProfile, GlueReport, GluingConfig,
};
use einstein_gap::geography::{
    catalog_to_csv, catalog_to_json, fermat_family_catalog_with, CatalogRow, KPolicy,
};
use einstein_gap::lattice::{build_blowup_lattice, lattice_sweep, SweepSummary};
use einstein_gap::Error;

const THREADS_ENV: &str = "EINSTEIN_GAP_THREADS";

#[derive(Parser, Debug)]
#[command(
    name = "einstein-gap",
    version,
    about = "Einstein-metric obstructions for blown-up surfaces of general type"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Emit the Fermat-family catalog of obstructed blow-ups.
    Catalog(CatalogArgs),
    /// Hitchin-Thorpe status and obstruction verdict for given invariants.
    Check(CheckArgs),
    /// Monte-Carlo check of the polarization inequality chain.
    LatticeVerify(LatticeArgs),
    /// Scaling study of the glued Burns metric.
    GlueLab(GlueArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum TableFormat {
    Csv,
    Json,
    Table,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ReportFormat {
    Table,
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Policy {
    Min,
    Max,
}

#[derive(Args, Debug)]
struct CatalogArgs {
    #[arg(long, default_value_t = 20)]
    j_max: u32,
    #[arg(long, value_enum, default_value_t = TableFormat::Table)]
    format: TableFormat,
    #[arg(long, value_enum, default_value_t = Policy::Min)]
    k_policy: Policy,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct CheckArgs {
    /// Euler characteristic of M.
    #[arg(long, allow_negative_numbers = true)]
    chi: i64,
    /// Signature of M.
    #[arg(long, allow_negative_numbers = true)]
    tau: i64,
    /// Number of blow-ups.
    #[arg(long, default_value_t = 0)]
    k: u64,
    /// Also report (b+, b-), assuming b1 = 0.
    #[arg(long)]
    betti: bool,
    #[arg(long, value_enum, default_value_t = ReportFormat::Table)]
    format: ReportFormat,
}

#[derive(Args, Debug)]
struct LatticeArgs {
    #[arg(long, default_value_t = 1000)]
    trials: usize,
    #[arg(long, default_value_t = 4)]
    k: usize,
    /// c1^2 of the minimal model X.
    #[arg(long, default_value_t = 5)]
    c1sq: i64,
    #[arg(long, default_value_t = 1.0)]
    boost_scale: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// b+ of X (default: Fermat quintic).
    #[arg(long, default_value_t = 9)]
    b_plus: usize,
    /// b- of X (default: Fermat quintic).
    #[arg(long, default_value_t = 44)]
    b_minus: usize,
    /// Relative tolerance for chain comparisons.
    #[arg(long, default_value_t = 1e-9)]
    tolerance: f64,
    #[arg(long, value_enum, default_value_t = ReportFormat::Table)]
    format: ReportFormat,
}

#[derive(Args, Debug)]
struct GlueArgs {
    /// Comma-separated gluing scales.
    #[arg(long = "t", value_delimiter = ',', default_values_t = [0.4, 0.2, 0.1, 0.05])]
    t_grid: Vec<f64>,
    /// Quadrature nodes per coordinate (radius, eta, xi1, xi2).
    #[arg(long, value_delimiter = ',', num_args = 1.., default_values_t = [16, 4, 4, 4])]
    resolution: Vec<usize>,
    /// Finite-difference step relative to the radius.
    #[arg(long, default_value_t = 1e-3)]
    fd_step: f64,
    /// Odd smoothstep degree of the cutoff.
    #[arg(long, default_value_t = 5)]
    cutoff_degree: u32,
    #[arg(long, value_enum, default_value_t = TableFormat::Json)]
    format: TableFormat,
    #[arg(long)]
    output: Option<PathBuf>,
}

enum Failure {
    Usage(String),
    Math(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InternalInconsistency(_) => Failure::Math(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

type Outcome = std::result::Result<(), Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let outcome = configure_threads().and_then(|()| match cli.command {
        Command::Catalog(a) => catalog(a),
        Command::Check(a) => check(a),
        Command::LatticeVerify(a) => lattice_verify(a),
        Command::GlueLab(a) => glue_lab(a),
    });
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Math(msg)) => {
            eprintln!("check failed: {msg}");
            ExitCode::from(2)
        }
    }
}

fn configure_threads() -> Outcome {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = raw.trim().parse().ok().filter(|n| *n > 0).ok_or_else(|| {
        Failure::Usage(format!("{THREADS_ENV}={raw:?} is not a positive integer"))
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::Usage(format!("thread pool: {e}")))
}

fn emit(text: &str, output: Option<&PathBuf>) -> Outcome {
    match output {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
    s.push('\n');
    s
}

fn catalog(a: CatalogArgs) -> Outcome {
    if a.j_max == 0 {
        return Err(Failure::Usage("--j-max must be at least 1".into()));
    }
    let policy = match a.k_policy {
        Policy::Min => KPolicy::Min,
        Policy::Max => KPolicy::Max,
    };
    let rows = fermat_family_catalog_with(a.j_max, policy)?;
    let text = match a.format {
        TableFormat::Csv => catalog_to_csv(&rows)?,
        TableFormat::Json => {
            let mut s = catalog_to_json(&rows);
            s.push('\n');
            s
        }
        TableFormat::Table => catalog_table(&rows),
    };
    emit(&text, a.output.as_ref())?;
    let bad: Vec<u32> = rows
        .iter()
        .filter(|r| !r.obstructed || r.ht_margin <= 0)
        .map(|r| r.j)
        .collect();
    if bad.is_empty() {
        Ok(())
    } else {
        Err(Failure::Math(format!(
            "rows j = {bad:?} are unobstructed or violate Hitchin-Thorpe"
        )))
    }
}

fn catalog_table(rows: &[CatalogRow]) -> String {
    let mut out = format!(
        "{:>4} {:>5} {:>12} {:>12} {:>10} {:>10} {:>10} {:>12} {:>12} {:>10} {:>10}\n",
        "j",
        "m",
        "chi_X",
        "tau_X",
        "c1sq",
        "k_min",
        "k_max",
        "chi_M",
        "tau_M",
        "ht_margin",
        "obstructed"
    );
    for r in rows {
        let _ = writeln!(
            out,
            "{:>4} {:>5} {:>12} {:>12} {:>10} {:>10} {:>10} {:>12} {:>12} {:>10} {:>10}",
            r.j,
            r.m,
            r.chi_x,
            r.tau_x,
            r.c1sq,
            r.k_min,
            r.k_max,
            r.chi_m,
            r.tau_m,
            r.ht_margin,
            r.obstructed
        );
    }
    out
}

#[derive(Serialize)]
struct Betti {
    b_plus: i64,
    b_minus: i64,
}

#[derive(Serialize)]
struct CheckReport {
    chi: i64,
    tau: i64,
    k: u64,
    hitchin_thorpe: HtStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    betti: Option<Betti>,
    /// 2χ + 3τ + k, the c1² of the minimal model; absent when k = 0.
    #[serde(skip_serializing_if = "Option::is_none")]
    c1sq_x: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    obstruction: Option<ObstructionReport>,
    /// The scalar-curvature bound is `sw_multiplier × 32π²`.
    #[serde(skip_serializing_if = "Option::is_none")]
    sw_multiplier: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    sw_bound: Option<f64>,
    verdict: String,
}

fn ht_phrase(ht: &HtStatus) -> String {
    match ht.verdict {
        HtVerdict::StrictlySatisfied => {
            format!("strict Hitchin-Thorpe holds (margin {})", ht.margin())
        }
        HtVerdict::Equality => "Hitchin-Thorpe holds with equality (margin 0)".into(),
        HtVerdict::Violated => format!("Hitchin-Thorpe fails (margin {})", ht.margin()),
    }
}

fn check(a: CheckArgs) -> Outcome {
    let m = CharNumbers::new(a.chi, a.tau);
    let ht = hitchin_thorpe_status(m);
    let betti = if a.betti {
        let (b_plus, b_minus) = betti_from_chi_tau(m)?;
        Some(Betti { b_plus, b_minus })
    } else {
        None
    };
    let mut report = CheckReport {
        chi: a.chi,
        tau: a.tau,
        k: a.k,
        hitchin_thorpe: ht,
        betti,
        c1sq_x: None,
        obstruction: None,
        sw_multiplier: None,
        sw_bound: None,
        verdict: String::new(),
    };
    let k = i64::try_from(a.k).map_err(|_| Failure::Usage(format!("k = {} is too large", a.k)))?;
    report.verdict = if k == 0 {
        format!("{}; obstruction requires k > 0", ht_phrase(&ht))
    } else {
        let n = m.c1sq() + k;
        report.c1sq_x = Some(n);
        if n <= 0 {
            format!("not applicable: 2χ+3τ+k = {n}, X not general type")
        } else {
            let sw = sw_lower_bound(m, a.k)?;
            report.sw_multiplier = Some(sw.multiplier);
            report.sw_bound = Some(sw.value());
            let obstruction = einstein_obstructed(n, k)?;
            let verdict = if obstruction.obstructed() {
                format!("obstructed; {}", ht_phrase(&ht))
            } else {
                format!(
                    "not obstructed: 3k = {} < 2c1^2(X) = {}; {}",
                    3 * k,
                    2 * n,
                    ht_phrase(&ht)
                )
            };
            report.obstruction = Some(obstruction);
            verdict
        }
    };
    let text = match a.format {
        ReportFormat::Json => to_json(&report),
        ReportFormat::Table => check_text(&report),
    };
    emit(&text, None)
}

fn check_text(r: &CheckReport) -> String {
    let ht = &r.hitchin_thorpe;
    let mut out = format!("M: chi = {}, tau = {}, k = {}\n", r.chi, r.tau, r.k);
    let _ = writeln!(
        out,
        "Hitchin-Thorpe: 2chi+3tau = {}, 2chi-3tau = {} ({:?})",
        ht.margin_plus, ht.margin_minus, ht.verdict
    );
    if let Some(b) = &r.betti {
        let _ = writeln!(out, "betti: b+ = {}, b- = {}", b.b_plus, b.b_minus);
    }
    if let Some(c) = r.c1sq_x {
        let _ = writeln!(out, "c1^2(X) = 2chi+3tau+k = {c}");
    }
    if let (Some(n), Some(v)) = (r.sw_multiplier, r.sw_bound) {
        let _ = writeln!(
            out,
            "scalar-curvature bound: int s^2 dmu > {n} × 32π² = {v:.6}"
        );
    }
    if let Some(o) = &r.obstruction {
        let _ = writeln!(out, "criterion: {}", o.reason);
    }
    let _ = writeln!(out, "{}", r.verdict);
    out
}

fn lattice_verify(a: LatticeArgs) -> Outcome {
    if a.trials == 0 {
        return Err(Failure::Usage("--trials must be at least 1".into()));
    }
    let lat = build_blowup_lattice(a.c1sq, a.b_plus, a.b_minus, a.k)?;
    let summary = lattice_sweep(&lat, a.trials, a.boost_scale, a.seed, a.tolerance)?;
    let text = match a.format {
        ReportFormat::Json => to_json(&summary),
        ReportFormat::Table => sweep_text(&summary),
    };
    emit(&text, None)?;
    if summary.degenerate == summary.trials {
        return Err(Failure::Usage(
            "every sampled polarization was degenerate; lower --boost-scale".into(),
        ));
    }
    if summary.violations > 0 || summary.inconsistencies > 0 {
        return Err(Failure::Math(format!(
            "{} chain violations, {} inconsistent equality cases",
            summary.violations, summary.inconsistencies
        )));
    }
    Ok(())
}

fn sweep_text(s: &SweepSummary) -> String {
    format!(
        "trials: {}\nboost scale: {}\nseed: {}\nmin (lhs - rhs): {:e}\nmax identity residual: {:e}\n\
         equality candidates: {}\nviolations: {}\ninconsistencies: {}\ndegenerate (skipped): {}\n",
        s.trials,
        s.boost_scale,
        s.seed,
        s.min_gap,
        s.max_identity_residual,
        s.equality_candidates,
        s.violations,
        s.inconsistencies,
        s.degenerate
    )
}

fn glue_lab(a: GlueArgs) -> Outcome {
    let quad_resolution: [usize; 4] = a.resolution.as_slice().try_into().map_err(|_| {
        Failure::Usage("--resolution needs exactly 4 comma-separated values".into())
    })?;
    let cfg = GluingConfig {
        t_grid: a.t_grid,
        fd_step: a.fd_step,
        quad_resolution,
        cutoff: CutoffProfile::new(a.cutoff_degree)?,
        ..GluingConfig::default()
    };
    cfg.validate_for_scaling()?;
    let report = run_glue_lab(&cfg)?;
    let text = match a.format {
        TableFormat::Json => to_json(&report),
        TableFormat::Csv => glue_report_csv(&report),
        TableFormat::Table => glue_text(&report),
    };
    emit(&text, a.output.as_ref())?;
    let failed: Vec<&str> = report
        .checks
        .iter()
        .filter(|c| !c.passed)
        .map(|c| c.name.as_str())
        .collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Math(format!(
            "threshold checks failed: {}",
            failed.join(", ")
        )))
    }
}

fn glue_text(r: &GlueReport) -> String {
    let mut out = format!(
        "{:>8} {:>12} {:>12} {:>12} {:>12} {:>14} {:>14}\n",
        "t", "norm0", "norm1", "norm2", "max|s|", "annulus", "burns region"
    );
    for row in &r.rows {
        let _ = writeln!(
            out,
            "{:>8} {:>12.5e} {:>12.5e} {:>12.5e} {:>12.5e} {:>14.5e} {:>14.5e}",
            row.t,
            row.norm0,
            row.norm1,
            row.norm2,
            row.max_abs_s,
            row.annulus_integral,
            row.burns_region_integral
        );
    }
    let e = &r.exponents;
    let _ = writeln!(
        out,
        "exponents: norm0 {:.3}, norm1 {:.3}, norm2 {:.3}, integral {:.3}, max|s| {:.3}",
        e.norm0, e.norm1, e.norm2, e.annulus_integral, e.max_abs_s
    );
    for c in &r.checks {
        let _ = writeln!(
            out,
            "[{}] {}: {}",
            if c.passed { "ok" } else { "FAIL" },
            c.name,
            c.detail
        );
    }
    out
}
