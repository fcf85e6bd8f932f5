//! Command-line verification harness.
//!
//! Subcommands: `verify` runs identity suites in parallel over grid points
//! and emits a JSON/CSV report; `eval` prints one special-function value
//! with an error estimate; `resolve` fits the oracle subtraction brackets
//! and reports every resolved convention; `report` reads a JSON report
//! back, summarizes it, and optionally converts it.
//!
//! Exit codes: 0 when all records pass, 1 when any fail (or a computation
//! aborts), 2 on usage or configuration errors.

mod config;
mod grid;
mod reports;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rayon::prelude::*;
use zeta_mellin::lambda::{
    lambda1, lambda2, subtraction_poly, LambdaConfig, LambdaKind, Provenance, SeriesSign,
    SubtractionPolynomial,
};
use zeta_mellin::mellin::{
    ensure_oracle_polys, resolve_conventions, resolved_sign, verify_identity, ConventionMode,
    ConventionResolution, VerifyOptions,
};
use zeta_mellin::report::{
    all_pass, sort_records, summary_lines, write_csv, write_json, JsonValue, VerificationRecord,
};
use zeta_mellin::specialfn::{digamma, stieltjes, xi_critical, zeta};
use zeta_mellin::IdentityId;

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Parser)]
#[command(
    name = "zeta-mellin-cli",
    version,
    about = "Verification harness for Mellin-transform identities of the Riemann zeta function"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Verify identities over point grids and emit a report.
    Verify(VerifyArgs),
    /// Evaluate one function value with an error estimate.
    Eval(EvalArgs),
    /// Fit the oracle subtraction brackets and resolve all conventions.
    Resolve(ResolveArgs),
    /// Summarize a JSON report, optionally converting its format.
    Report(ReportArgs),
}

#[derive(Args)]
struct VerifyArgs {
    /// Identity id (repeatable, comma lists allowed); default: full suite.
    #[arg(long = "id", value_name = "ID", value_delimiter = ',')]
    ids: Vec<String>,
    /// s grid for transform identities: `lo:hi:n` (inclusive) or one number.
    #[arg(long)]
    s: Option<String>,
    /// x grid for series/integral identities, same syntax.
    #[arg(long)]
    x: Option<String>,
    /// Relative tolerance for pass/fail (default 1e-6).
    #[arg(long)]
    tol: Option<f64>,
    /// Which subtraction/sign conventions to run (default both).
    #[arg(long, value_enum)]
    convention: Option<ConventionArg>,
    /// Report format (default json).
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
    /// Write the report here instead of stdout.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Worker threads for grid evaluation (>= 1; default: all cores).
    #[arg(long, value_name = "N")]
    workers: Option<usize>,
    /// JSON config file; command-line flags override its entries.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct EvalArgs {
    /// What to evaluate.
    #[arg(value_enum)]
    target: EvalTarget,
    /// Argument for lambda1 / lambda2 / digamma.
    #[arg(long)]
    x: Option<f64>,
    /// Argument for zeta (the point evaluated is s + 0i).
    #[arg(long)]
    s: Option<f64>,
    /// Argument for xi (height on the critical line).
    #[arg(long)]
    t: Option<f64>,
    /// Index for stieltjes.
    #[arg(long)]
    n: Option<usize>,
    /// Subtraction bracket used for lambda1 / lambda2.
    #[arg(long, value_enum, default_value_t = EvalConvention::Oracle)]
    convention: EvalConvention,
}

#[derive(Args)]
struct ResolveArgs {
    /// Write the resolution report here instead of stdout.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ReportArgs {
    /// JSON report to read.
    input: PathBuf,
    /// Convert the report to this format (default json when --out is set).
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
    /// Write the converted report here.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ConventionArg {
    Paper,
    Oracle,
    Both,
}

impl ConventionArg {
    fn mode(self) -> ConventionMode {
        match self {
            ConventionArg::Paper => ConventionMode::Paper,
            ConventionArg::Oracle => ConventionMode::Oracle,
            ConventionArg::Both => ConventionMode::Both,
        }
    }

    fn as_str(self) -> &'static str {
        match self {
            ConventionArg::Paper => "paper",
            ConventionArg::Oracle => "oracle",
            ConventionArg::Both => "both",
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

impl FormatArg {
    fn as_str(self) -> &'static str {
        match self {
            FormatArg::Json => "json",
            FormatArg::Csv => "csv",
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum EvalTarget {
    Lambda1,
    Lambda2,
    Xi,
    Zeta,
    Digamma,
    Stieltjes,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum EvalConvention {
    Paper,
    Oracle,
}

enum CliError {
    /// Bad flags, config, or out-of-domain points: exit 2.
    Usage(String),
    /// A computation failed or an artifact could not be written: exit 1.
    Run(String),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.cmd {
        Cmd::Verify(args) => run_verify(args),
        Cmd::Eval(args) => run_eval(args).map(|()| true),
        Cmd::Resolve(args) => run_resolve(args).map(|()| true),
        Cmd::Report(args) => run_report(args),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_FAIL),
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(CliError::Run(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_FAIL)
        }
    }
}

fn require<T>(v: Option<T>, msg: &str) -> Result<T, CliError> {
    v.ok_or_else(|| CliError::Usage(msg.to_string()))
}

/// Domain-level library errors are the caller's fault (exit 2); everything
/// else is a computation failure (exit 1).
fn classify(e: zeta_mellin::Error) -> CliError {
    use zeta_mellin::Error as E;
    match e {
        E::Domain(_) | E::GammaPole(_) | E::ZetaPole | E::StripViolation { .. } => {
            CliError::Usage(e.to_string())
        }
        other => CliError::Run(other.to_string()),
    }
}

fn parse_value_enum<T: ValueEnum>(s: &str, what: &str) -> Result<T, CliError> {
    T::from_str(s, true).map_err(|_| CliError::Usage(format!("unknown {what} '{s}'")))
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::Run(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

// ---------------------------------------------------------------- verify --

fn run_verify(args: VerifyArgs) -> Result<bool, CliError> {
    let file = match &args.config {
        Some(path) => config::FileConfig::load(path).map_err(CliError::Usage)?,
        None => config::FileConfig::default(),
    };

    let id_names: Vec<String> = if !args.ids.is_empty() {
        args.ids.clone()
    } else if let Some(ids) = file.id.clone() {
        ids
    } else {
        IdentityId::ALL.iter().map(|id| id.as_str().to_string()).collect()
    };
    let mut ids: Vec<IdentityId> = Vec::new();
    for name in &id_names {
        let id = IdentityId::from_str(name).map_err(|e| CliError::Usage(e.to_string()))?;
        if !ids.contains(&id) {
            ids.push(id);
        }
    }
    ids.sort();

    let tol = args.tol.or(file.tol).unwrap_or(1e-6);
    if !(tol.is_finite() && tol > 0.0) {
        return Err(CliError::Usage("tolerance must be positive and finite".into()));
    }
    let convention = match args.convention {
        Some(c) => c,
        None => match &file.convention {
            Some(s) => parse_value_enum(s, "convention")?,
            None => ConventionArg::Both,
        },
    };
    let format = match args.format {
        Some(f) => f,
        None => match &file.format {
            Some(s) => parse_value_enum(s, "format")?,
            None => FormatArg::Json,
        },
    };
    let out: Option<PathBuf> = args.out.clone().or_else(|| file.out.clone().map(PathBuf::from));
    if let Some(n) = args.workers.or(file.workers) {
        if n == 0 {
            return Err(CliError::Usage("worker count must be >= 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Run(format!("cannot configure worker pool: {e}")))?;
    }

    let s_spec = args.s.clone().or_else(|| file.s.clone());
    let x_spec = args.x.clone().or_else(|| file.x.clone());
    let mut grids: Vec<(IdentityId, Vec<f64>)> = Vec::new();
    for &id in &ids {
        let spec = if id.grid_is_x() {
            x_spec.as_deref()
        } else {
            s_spec.as_deref()
        }
        .unwrap_or_else(|| grid::default_spec(id));
        let points = grid::parse_grid(spec).map_err(CliError::Usage)?;
        grid::check_domain(id, &points).map_err(CliError::Usage)?;
        grids.push((id, points));
    }

    let opts = VerifyOptions {
        tol,
        mode: convention.mode(),
        ..VerifyOptions::default()
    };

    // Resolve conventions up front when any selected identity needs them:
    // this warms the oracle-bracket cache once and feeds the report meta.
    let needs_resolution = opts
        .mode
        .provenances()
        .contains(&Provenance::OracleResolved)
        && ids.iter().any(|id| id.convention_dependent());
    let resolution = if needs_resolution {
        Some(
            resolve_conventions(&opts)
                .map_err(|e| CliError::Run(format!("convention resolution failed: {e}")))?,
        )
    } else {
        None
    };

    // Coarse-grained parallelism over (identity, point); records are
    // re-sorted afterwards, so the output is worker-count independent.
    let jobs: Vec<(IdentityId, f64)> = grids
        .iter()
        .flat_map(|(id, pts)| pts.iter().map(move |&p| (*id, p)))
        .collect();
    let nested: Result<Vec<Vec<VerificationRecord>>, zeta_mellin::Error> = jobs
        .par_iter()
        .map(|&(id, p)| verify_identity(id, &[p], &opts))
        .collect();
    let mut records: Vec<VerificationRecord> = nested
        .map_err(|e| CliError::Run(format!("verification aborted: {e}")))?
        .into_iter()
        .flatten()
        .collect();
    sort_records(&mut records);

    let meta = verify_meta(&ids, &grids, tol, convention, format, resolution.as_ref());
    let rendered = match format {
        FormatArg::Json => write_json(&meta, &records),
        FormatArg::Csv => {
            let lines: Vec<String> = meta
                .iter()
                .map(|(k, v)| format!("{k} = {}", v.to_json_string()))
                .collect();
            write_csv(&lines, &records)
        }
    };
    emit(&rendered, out.as_deref())?;
    Ok(all_pass(&records))
}

/// Config echo for the report meta. Deliberately excludes the worker count
/// and output path: neither changes a single byte of the records, and the
/// report must be identical across worker counts.
fn verify_meta(
    ids: &[IdentityId],
    grids: &[(IdentityId, Vec<f64>)],
    tol: f64,
    convention: ConventionArg,
    format: FormatArg,
    resolution: Option<&ConventionResolution>,
) -> Vec<(String, JsonValue)> {
    let mut meta = vec![
        ("command".to_string(), JsonValue::str("verify")),
        (
            "ids".to_string(),
            JsonValue::Arr(ids.iter().map(|id| JsonValue::str(id.as_str())).collect()),
        ),
        ("tol".to_string(), JsonValue::number(tol)),
        ("convention".to_string(), JsonValue::str(convention.as_str())),
        ("format".to_string(), JsonValue::str(format.as_str())),
        (
            "grids".to_string(),
            JsonValue::Obj(
                grids
                    .iter()
                    .map(|(id, pts)| {
                        (
                            id.as_str().to_string(),
                            JsonValue::Arr(pts.iter().map(|&p| JsonValue::shortest(p)).collect()),
                        )
                    })
                    .collect(),
            ),
        ),
    ];
    if let Some(res) = resolution {
        meta.push((
            "conventions".to_string(),
            JsonValue::Obj(resolution_pairs(res)),
        ));
    }
    meta
}

fn resolution_pairs(res: &ConventionResolution) -> Vec<(String, JsonValue)> {
    let coeffs = |p: &SubtractionPolynomial| {
        JsonValue::Arr(p.coeffs.iter().map(|&c| JsonValue::number(c)).collect())
    };
    let row =
        |r: &[f64; 4]| JsonValue::Arr(r.iter().map(|&c| JsonValue::number(c)).collect());
    vec![
        ("lambda1_oracle".to_string(), coeffs(&res.oracle[0])),
        ("lambda1_printed".to_string(), coeffs(&res.paper[0])),
        ("lambda1_delta".to_string(), row(&res.delta[0])),
        ("lambda2_oracle".to_string(), coeffs(&res.oracle[1])),
        ("lambda2_printed".to_string(), coeffs(&res.paper[1])),
        ("lambda2_delta".to_string(), row(&res.delta[1])),
        (
            "sigma_eq1_3".to_string(),
            JsonValue::int(res.sigma_eq1_3.as_i8() as i64),
        ),
        (
            "sigma_ps2".to_string(),
            JsonValue::int(res.sigma_ps2.as_i8() as i64),
        ),
        (
            "sigma_intrep".to_string(),
            JsonValue::int(res.sigma_intrep.as_i8() as i64),
        ),
        (
            "sigma_eq2_3".to_string(),
            JsonValue::int(res.sigma_eq2_3.as_i8() as i64),
        ),
        (
            "eq2_2_measured_ratio".to_string(),
            JsonValue::number(res.eq2_ratio[0]),
        ),
        (
            "eq2_3_measured_ratio".to_string(),
            JsonValue::number(res.eq2_ratio[1]),
        ),
    ]
}

// ------------------------------------------------------------------ eval --

fn run_eval(args: EvalArgs) -> Result<(), CliError> {
    let lcfg = LambdaConfig::default();
    let (value, est) = match args.target {
        EvalTarget::Zeta => {
            let s = require(args.s, "eval zeta requires --s")?;
            let v = zeta(Complex64::new(s, 0.0)).map_err(classify)?;
            (v.re, 1e-14 * (1.0 + v.norm()))
        }
        EvalTarget::Digamma => {
            let x = require(args.x, "eval digamma requires --x")?;
            let v = digamma(x).map_err(classify)?;
            (v, 1e-14 * (1.0 + v.abs()))
        }
        EvalTarget::Xi => {
            let t = require(args.t, "eval xi requires --t")?;
            let v = xi_critical(t).map_err(classify)?;
            (v, 1e-13 * (1.0 + v.abs()))
        }
        EvalTarget::Stieltjes => {
            let n = require(args.n, "eval stieltjes requires --n")?;
            let v = stieltjes(n).map_err(classify)?;
            (v, 1e-12)
        }
        EvalTarget::Lambda1 | EvalTarget::Lambda2 => {
            let x = require(args.x, "eval lambda1/lambda2 requires --x")?;
            let kind = if args.target == EvalTarget::Lambda1 {
                LambdaKind::One
            } else {
                LambdaKind::Two
            };
            let (poly, sign) = match args.convention {
                EvalConvention::Paper => (
                    subtraction_poly(kind, Provenance::PaperPrinted).map_err(classify)?,
                    SeriesSign::Plus,
                ),
                EvalConvention::Oracle => {
                    ensure_oracle_polys().map_err(classify)?;
                    let poly =
                        subtraction_poly(kind, Provenance::OracleResolved).map_err(classify)?;
                    let sign = resolved_sign(kind, &lcfg).map_err(classify)?;
                    (poly, sign)
                }
            };
            let v = match kind {
                LambdaKind::One => lambda1(x, &poly, sign, &lcfg),
                LambdaKind::Two => lambda2(x, &poly, sign, &lcfg),
            }
            .map_err(classify)?;
            (v, lcfg.tail_tol + 1e-14 * v.abs())
        }
    };
    println!("{}  (err <= {:.1e})", sig15(value), est);
    Ok(())
}

/// Plain-decimal formatting with 15 significant digits; falls back to
/// scientific notation outside a readable exponent range.
fn sig15(v: f64) -> String {
    if !v.is_finite() {
        return format!("{v}");
    }
    if v == 0.0 {
        return "0".to_string();
    }
    let exp = v.abs().log10().floor() as i32;
    if (-4..15).contains(&exp) {
        let decimals = (14 - exp).max(0) as usize;
        format!("{v:.decimals$}")
    } else {
        format!("{v:.14e}")
    }
}

// --------------------------------------------------------------- resolve --

fn run_resolve(args: ResolveArgs) -> Result<(), CliError> {
    let opts = VerifyOptions::default();
    let res = resolve_conventions(&opts)
        .map_err(|e| CliError::Run(format!("convention resolution failed: {e}")))?;
    let mut meta = vec![("command".to_string(), JsonValue::str("resolve"))];
    meta.extend(resolution_pairs(&res));
    let doc = write_json(&meta, &[]);
    emit(&doc, args.out.as_deref())
}

// ---------------------------------------------------------------- report --

fn run_report(args: ReportArgs) -> Result<bool, CliError> {
    let text = std::fs::read_to_string(&args.input)
        .map_err(|e| CliError::Usage(format!("cannot read report {}: {e}", args.input.display())))?;
    let doc: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| CliError::Usage(format!("invalid JSON report: {e}")))?;
    let records = reports::records_from_json(&doc).map_err(CliError::Usage)?;
    let summary = summary_lines(&records);

    let format = args.format.or(if args.out.is_some() {
        Some(FormatArg::Json)
    } else {
        None
    });
    match format {
        Some(fmt) => {
            let rendered = match fmt {
                FormatArg::Json => write_json(&reports::meta_pairs(&doc), &records),
                FormatArg::Csv => write_csv(&reports::meta_csv_lines(&doc), &records),
            };
            if let Some(path) = args.out.as_deref() {
                emit(&rendered, Some(path))?;
                for line in &summary {
                    println!("{line}");
                }
            } else {
                // The converted document owns stdout; the summary moves
                // to stderr so the output stays machine-readable.
                for line in &summary {
                    eprintln!("{line}");
                }
                print!("{rendered}");
            }
        }
        None => {
            for line in &summary {
                println!("{line}");
            }
        }
    }
    Ok(all_pass(&records))
}

#[cfg(test)]
mod tests {
    use super::sig15;

    #[test]
    fn fifteen_significant_digits() {
        assert_eq!(sig15(-1.4603545088095868), "-1.46035450880959");
        assert_eq!(sig15(0.497_120_778_159_566_1), "0.497120778159566");
        assert_eq!(sig15(0.0), "0");
        assert_eq!(sig15(3e20), "3.00000000000000e20");
    }
}
