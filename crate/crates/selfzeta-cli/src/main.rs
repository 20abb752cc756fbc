//! Command line front door for the library.
//!
//! Four subcommands: `eval` prints a completed transform at a point or
//! over a grid, `verify` runs one named residual check, `sample` draws
//! from a density or runs the sampled self-reciprocity check, and
//! `suite` runs every registered check.  Reports go to stdout as
//! one-line summaries and, with `--out`, to a CSV or JSON file written
//! atomically (temp file plus rename).  Exit codes: 0 all passed, 1 a
//! check failed, 2 usage or configuration problems, 3 numeric failures.
//!
//! Reruns with the same arguments and seed produce byte-identical
//! reports; wall-clock timing lives in a separate `meta` field that
//! `--no-meta` drops entirely for byte-comparison workflows.
//! `SELFZETA_THREADS` caps the worker pool.  A `--config` file supplies
//! `key = value` defaults for any flag not given on the command line.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde_json::{json, Value};

use selfzeta::density::{MixingDensity, SRDensity};
use selfzeta::grid::SGrid;
use selfzeta::mellin::XiFunction;
use selfzeta::montecarlo::{check_sr_empirical, sample_density, sample_mixing, SrBandReport};
use selfzeta::theta::ThetaSeries;
use selfzeta::verify::{all_checks, run_check, run_suite, RunOptions, VerificationReport};
use selfzeta::Error;

#[derive(Parser)]
#[command(
    name = "selfzeta",
    version,
    about = "Self-reciprocal densities, their completed transforms, and residual checks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a completed transform at a point or over a grid.
    Eval(EvalArgs),
    /// Run one named verification check.
    Verify(VerifyArgs),
    /// Draw from a density, or check the sampled characteristic function.
    Sample(SampleArgs),
    /// Run every registered verification check.
    Suite(SuiteArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct EvalArgs {
    /// Which transform: riemann | cosh | beta | bessel-quotient |
    /// psi:<source> | factor:<family>.  Sources and families:
    /// gaussian, cosh, sinh-z, cosh-h1, cosh-t, gig, levy, ggc.
    #[arg(long)]
    xi: Option<String>,
    /// A single point "re,im" (the ",im" part may be omitted).
    #[arg(long, allow_hyphen_values = true)]
    s: Option<String>,
    /// A grid spec: standard | real:a:b:step | critline:t0:t1:n |
    /// rect:re0:re1:im0:im1:n_re:n_im.
    #[arg(long)]
    grid: Option<String>,
    #[command(flatten)]
    family: FamilyArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct VerifyArgs {
    /// Registered check name; see --list.
    #[arg(long)]
    check: Option<String>,
    /// List every registered check and exit.
    #[arg(long, conflicts_with = "check")]
    list: bool,
    /// Grid spec overriding the check's default grid.
    #[arg(long)]
    grid: Option<String>,
    /// Tolerance overriding the check's default.
    #[arg(long)]
    tol: Option<f64>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct SampleArgs {
    /// Density family: gaussian | cosh | sinh-z | cosh-h1 | cosh-t |
    /// gig | levy | ggc.
    #[arg(long)]
    family: Option<String>,
    /// Number of draws.
    #[arg(long)]
    n: Option<usize>,
    /// Stream seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Draw from the mixing density itself instead of the mixture.
    #[arg(long)]
    mixing: bool,
    /// Instead of emitting draws, compare the empirical characteristic
    /// function against sqrt(2 pi) f(t) within the 4/sqrt(n) band.
    #[arg(long)]
    check_cf: bool,
    /// t grid for --check-cf, as a real grid spec.
    #[arg(long)]
    t_grid: Option<String>,
    #[command(flatten)]
    family_params: FamilyArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct SuiteArgs {
    /// Run the default suite (the only mode; accepted for clarity).
    #[arg(long)]
    default: bool,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct FamilyArgs {
    /// Parameter a of the Bessel-normalized and two-sided exponential
    /// families.
    #[arg(long)]
    a: Option<f64>,
    /// Exponent alpha of the two-sided exponential family.
    #[arg(long)]
    alpha: Option<f64>,
    /// Parameter lambda of the stable-subordinator family.
    #[arg(long)]
    lambda: Option<f64>,
}

#[derive(Args)]
struct OutputArgs {
    /// Report file; written atomically.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Report format for --out.
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Drop the meta field (timings) so reruns are byte-identical.
    #[arg(long)]
    no_meta: bool,
    /// key = value file supplying defaults for flags not given here.
    #[arg(long)]
    config: Option<PathBuf>,
}

/// Failures that terminate the process, with their exit codes.
enum Failure {
    /// Bad flags, specs, config keys, unknown names: exit 2.
    Usage(String),
    /// Evaluation errors from the numeric layer: exit 3.
    Numeric(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Numeric(_) => 3,
        }
    }
    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Numeric(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Usage { .. } | Error::Config { .. } => Failure::Usage(e.to_string()),
            other => Failure::Numeric(other.to_string()),
        }
    }
}

fn io_failure(path: &Path, e: std::io::Error) -> Failure {
    Failure::Usage(format!("{}: {e}", path.display()))
}

fn main() -> ExitCode {
    if let Err(f) = init_threads() {
        eprintln!("selfzeta: {}", f.message());
        return ExitCode::from(f.code());
    }
    let cli = Cli::parse();
    match run(cli) {
        Ok(all_passed) => ExitCode::from(if all_passed { 0 } else { 1 }),
        Err(f) => {
            eprintln!("selfzeta: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

fn init_threads() -> Result<(), Failure> {
    match std::env::var("SELFZETA_THREADS") {
        Err(_) => Ok(()),
        Ok(raw) => {
            let n: usize = raw.parse().map_err(|_| {
                Failure::Usage(format!("SELFZETA_THREADS must be a positive integer, got {raw:?}"))
            })?;
            if n == 0 {
                return Err(Failure::Usage(
                    "SELFZETA_THREADS must be a positive integer, got 0".into(),
                ));
            }
            rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global()
                .map_err(|e| Failure::Usage(format!("thread pool: {e}")))
        }
    }
}

fn run(cli: Cli) -> Result<bool, Failure> {
    match cli.command {
        Command::Eval(args) => run_eval(args),
        Command::Verify(args) => run_verify(args),
        Command::Sample(args) => run_sample(args),
        Command::Suite(args) => run_suite_cmd(args),
    }
}

// ---------------------------------------------------------------- config

/// key = value lines; # starts a comment.  Keys mirror the long flags.
fn load_config(path: &Path) -> Result<BTreeMap<String, String>, Failure> {
    let text = fs::read_to_string(path).map_err(|e| io_failure(path, e))?;
    let mut map = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(Failure::Usage(format!(
                "{}:{}: expected key = value, got {raw:?}",
                path.display(),
                lineno + 1
            )));
        };
        map.insert(key.trim().to_string(), value.trim().to_string());
    }
    Ok(map)
}

/// Fill a missing option from the config map, parsing with FromStr.
fn fill<T: FromStr>(
    slot: &mut Option<T>,
    map: &BTreeMap<String, String>,
    key: &str,
) -> Result<(), Failure>
where
    T::Err: std::fmt::Display,
{
    if slot.is_none() {
        if let Some(raw) = map.get(key) {
            let parsed = raw
                .parse::<T>()
                .map_err(|e| Failure::Usage(format!("config key {key} = {raw:?}: {e}")))?;
            *slot = Some(parsed);
        }
    }
    Ok(())
}

fn config_format(
    slot: &mut Option<Format>,
    map: &BTreeMap<String, String>,
) -> Result<(), Failure> {
    if slot.is_none() {
        if let Some(raw) = map.get("format") {
            *slot = Some(match raw.as_str() {
                "csv" => Format::Csv,
                "json" => Format::Json,
                other => {
                    return Err(Failure::Usage(format!(
                        "config key format must be csv or json, got {other:?}"
                    )))
                }
            });
        }
    }
    Ok(())
}

// ---------------------------------------------------------------- parsing

fn parse_point(raw: &str) -> Result<Complex64, Failure> {
    let (re, im) = match raw.split_once(',') {
        Some((a, b)) => (a.trim(), Some(b.trim())),
        None => (raw.trim(), None),
    };
    let re: f64 = re
        .parse()
        .map_err(|_| Failure::Usage(format!("bad point {raw:?}: real part not a number")))?;
    let im: f64 = match im {
        Some(b) => b
            .parse()
            .map_err(|_| Failure::Usage(format!("bad point {raw:?}: imag part not a number")))?,
        None => 0.0,
    };
    Ok(Complex64::new(re, im))
}

fn parse_grid(raw: &str) -> Result<SGrid, Failure> {
    SGrid::from_str(raw).map_err(Failure::from)
}

struct FamilyParams {
    a: f64,
    alpha: f64,
    lambda: f64,
}

impl FamilyParams {
    fn resolve(args: &FamilyArgs) -> Self {
        FamilyParams {
            a: args.a.unwrap_or(1.0),
            alpha: args.alpha.unwrap_or(0.5),
            lambda: args.lambda.unwrap_or(1.0),
        }
    }
}

fn parse_mixing(name: &str, p: &FamilyParams) -> Result<MixingDensity, Failure> {
    Ok(match name {
        "sinh-z" => MixingDensity::sinh_z(),
        "cosh-h1" => MixingDensity::cosh_h1(),
        "cosh-t" => MixingDensity::cosh_t(),
        "gig" => MixingDensity::gig(p.a)?,
        "levy" => MixingDensity::levy(p.lambda)?,
        "ggc" => MixingDensity::ggc_alpha(p.a, p.alpha)?,
        other => {
            return Err(Failure::Usage(format!(
                "unknown mixing family {other:?}; expected sinh-z, cosh-h1, cosh-t, gig, levy, or ggc"
            )))
        }
    })
}

fn parse_source(name: &str, p: &FamilyParams) -> Result<SRDensity, Failure> {
    Ok(match name {
        "gaussian" => SRDensity::GaussianDirect,
        "cosh" => SRDensity::CoshDirect,
        other => SRDensity::Mixture(parse_mixing(other, p)?),
    })
}

fn parse_xi(spec: &str, p: &FamilyParams) -> Result<XiFunction, Failure> {
    if let Some(source) = spec.strip_prefix("psi:") {
        let f = parse_source(source, p)?;
        return Ok(XiFunction::FromPsi(Arc::new(ThetaSeries::new(f))));
    }
    if let Some(family) = spec.strip_prefix("factor:") {
        let g = parse_mixing(family, p)?;
        return Ok(XiFunction::MixingFactor(Arc::new(g)));
    }
    Ok(match spec {
        "riemann" => XiFunction::Riemann,
        "cosh" => XiFunction::CoshClosed,
        "beta" => XiFunction::BetaClosed,
        "bessel-quotient" => XiFunction::BesselQuotient { a: p.a },
        other => {
            return Err(Failure::Usage(format!(
                "unknown transform {other:?}; expected riemann, cosh, beta, bessel-quotient, psi:<source>, or factor:<family>"
            )))
        }
    })
}

// ---------------------------------------------------------------- output

/// Shortest round-trip decimal, the same digits the JSON encoder emits.
fn fmt_f64(x: f64) -> String {
    let mut s = String::new();
    write!(s, "{}", serde_json::Number::from_f64(x).map_or_else(|| x.to_string(), |n| n.to_string()))
        .unwrap();
    s
}

fn fmt_complex(v: Complex64) -> String {
    if v.im == 0.0 {
        fmt_f64(v.re)
    } else if v.im < 0.0 {
        format!("{}-{}i", fmt_f64(v.re), fmt_f64(-v.im))
    } else {
        format!("{}+{}i", fmt_f64(v.re), fmt_f64(v.im))
    }
}

fn write_atomic(path: &Path, contents: &str) -> Result<(), Failure> {
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, contents).map_err(|e| io_failure(&tmp, e))?;
    fs::rename(&tmp, path).map_err(|e| io_failure(path, e))
}

fn write_report(
    out: &OutputArgs,
    json_body: Value,
    csv_body: impl FnOnce() -> String,
    meta: Value,
) -> Result<(), Failure> {
    let Some(path) = &out.out else { return Ok(()) };
    let format = out.format.unwrap_or(Format::Json);
    let contents = match format {
        Format::Csv => csv_body(),
        Format::Json => {
            let mut doc = json_body;
            if !out.no_meta {
                doc["meta"] = meta;
            }
            let mut text = serde_json::to_string_pretty(&doc)
                .map_err(|e| Failure::Usage(format!("serialize: {e}")))?;
            text.push('\n');
            text
        }
    };
    write_atomic(path, &contents)
}

fn report_json(reports: &[VerificationReport]) -> Value {
    let rows: Vec<Value> = reports
        .iter()
        .map(|r| {
            json!({
                "check": r.check,
                "detail": r.detail,
                "grid": r.grid,
                "tolerance": r.tolerance,
                "points": r.residuals.iter().map(|&(s, v)| json!({
                    "s_re": s.re,
                    "s_im": s.im,
                    "residual": v,
                })).collect::<Vec<_>>(),
                "failures": r.failures,
                "max_residual": r.max_residual,
                "passed": r.passed,
            })
        })
        .collect();
    json!({ "reports": rows })
}

fn report_csv(reports: &[VerificationReport]) -> String {
    let mut text = String::from("check,s_re,s_im,residual,passed\n");
    for r in reports {
        for &(s, v) in &r.residuals {
            let _ = writeln!(
                text,
                "{},{},{},{},{}",
                r.check,
                fmt_f64(s.re),
                fmt_f64(s.im),
                fmt_f64(v),
                r.passed
            );
        }
    }
    text
}

fn report_meta(reports: &[VerificationReport]) -> Value {
    json!({
        "wall_ms": reports.iter().map(|r| json!({
            "check": r.check,
            "ms": r.wall.as_secs_f64() * 1e3,
        })).collect::<Vec<_>>(),
    })
}

fn summarize(r: &VerificationReport) {
    println!(
        "{}: max residual {} (tol {}, {} points, {:.1} ms) {}",
        r.check,
        fmt_f64(r.max_residual),
        fmt_f64(r.tolerance),
        r.residuals.len(),
        r.wall.as_secs_f64() * 1e3,
        if r.passed { "pass" } else { "FAIL" }
    );
    for failure in r.failures.iter().take(5) {
        println!("  error at {failure}");
    }
    if r.failures.len() > 5 {
        println!("  ... {} more evaluation errors", r.failures.len() - 5);
    }
}

// ---------------------------------------------------------------- eval

fn run_eval(mut args: EvalArgs) -> Result<bool, Failure> {
    if let Some(path) = &args.output.config {
        let map = load_config(path)?;
        fill(&mut args.xi, &map, "xi")?;
        fill(&mut args.s, &map, "s")?;
        fill(&mut args.grid, &map, "grid")?;
        fill(&mut args.family.a, &map, "a")?;
        fill(&mut args.family.alpha, &map, "alpha")?;
        fill(&mut args.family.lambda, &map, "lambda")?;
        fill(&mut args.output.out, &map, "out")?;
        config_format(&mut args.output.format, &map)?;
    }
    let Some(spec) = &args.xi else {
        return Err(Failure::Usage("eval needs --xi <transform>".into()));
    };
    let params = FamilyParams::resolve(&args.family);
    let xi = parse_xi(spec, &params)?;

    let points: Vec<Complex64> = match (&args.s, &args.grid) {
        (Some(_), Some(_)) => {
            return Err(Failure::Usage("give either --s or --grid, not both".into()))
        }
        (Some(raw), None) => vec![parse_point(raw)?],
        (None, Some(raw)) => parse_grid(raw)?.points().to_vec(),
        (None, None) => return Err(Failure::Usage("eval needs --s or --grid".into())),
    };

    let mut rows = Vec::with_capacity(points.len());
    for &s in &points {
        let v = xi.eval(s).map_err(Failure::from)?;
        rows.push((s, v));
    }

    if args.s.is_some() {
        println!("{}", fmt_complex(rows[0].1));
    } else {
        for &(s, v) in &rows {
            println!(
                "{},{},{},{}",
                fmt_f64(s.re),
                fmt_f64(s.im),
                fmt_f64(v.re),
                fmt_f64(v.im)
            );
        }
    }

    let json_body = json!({
        "transform": xi.label(),
        "points": rows.iter().map(|&(s, v)| json!({
            "s_re": s.re,
            "s_im": s.im,
            "value_re": v.re,
            "value_im": v.im,
        })).collect::<Vec<_>>(),
    });
    let csv_body = || {
        let mut text = String::from("s_re,s_im,value_re,value_im\n");
        for &(s, v) in &rows {
            let _ = writeln!(
                text,
                "{},{},{},{}",
                fmt_f64(s.re),
                fmt_f64(s.im),
                fmt_f64(v.re),
                fmt_f64(v.im)
            );
        }
        text
    };
    write_report(&args.output, json_body, csv_body, json!({}))?;
    Ok(true)
}

// ---------------------------------------------------------------- verify

fn run_verify(mut args: VerifyArgs) -> Result<bool, Failure> {
    if let Some(path) = &args.output.config {
        let map = load_config(path)?;
        fill(&mut args.check, &map, "check")?;
        fill(&mut args.grid, &map, "grid")?;
        fill(&mut args.tol, &map, "tol")?;
        fill(&mut args.output.out, &map, "out")?;
        config_format(&mut args.output.format, &map)?;
    }
    if args.list {
        for info in all_checks() {
            println!(
                "{}: {} (tol {}, grid {})",
                info.name,
                info.summary,
                fmt_f64(info.tolerance),
                info.grid
            );
        }
        return Ok(true);
    }
    let Some(name) = &args.check else {
        return Err(Failure::Usage("verify needs --check <name> (or --list)".into()));
    };
    let opts = RunOptions {
        grid: args.grid.as_deref().map(parse_grid).transpose()?,
        tolerance: args.tol,
    };
    let report = run_check(name, &opts).map_err(Failure::from)?;
    summarize(&report);
    let reports = [report];
    write_report(
        &args.output,
        report_json(&reports),
        || report_csv(&reports),
        report_meta(&reports),
    )?;
    Ok(reports[0].passed)
}

// ---------------------------------------------------------------- sample

fn run_sample(mut args: SampleArgs) -> Result<bool, Failure> {
    if let Some(path) = &args.output.config {
        let map = load_config(path)?;
        fill(&mut args.family, &map, "family")?;
        fill(&mut args.n, &map, "n")?;
        fill(&mut args.seed, &map, "seed")?;
        fill(&mut args.t_grid, &map, "t-grid")?;
        fill(&mut args.family_params.a, &map, "a")?;
        fill(&mut args.family_params.alpha, &map, "alpha")?;
        fill(&mut args.family_params.lambda, &map, "lambda")?;
        fill(&mut args.output.out, &map, "out")?;
        config_format(&mut args.output.format, &map)?;
    }
    let Some(family) = &args.family else {
        return Err(Failure::Usage("sample needs --family <name>".into()));
    };
    let params = FamilyParams::resolve(&args.family_params);
    let n = args.n.unwrap_or(100_000);
    let seed = args.seed.unwrap_or(0);
    if n == 0 {
        return Err(Failure::Usage("--n must be positive".into()));
    }

    if args.check_cf {
        if args.mixing {
            return Err(Failure::Usage(
                "--check-cf compares the mixture density; drop --mixing".into(),
            ));
        }
        let f = parse_source(family, &params)?;
        let t_spec = args.t_grid.as_deref().unwrap_or("real:0:5:0.5");
        let t_grid = parse_grid(t_spec)?;
        let mut ts = Vec::with_capacity(t_grid.len());
        for &p in t_grid.points() {
            if p.im != 0.0 {
                return Err(Failure::Usage(format!(
                    "--t-grid must be real, got point {p}"
                )));
            }
            ts.push(p.re);
        }
        let report = check_sr_empirical(&f, seed, n, &ts).map_err(Failure::from)?;
        print_band_summary(&report);
        let check_name = format!("sampled-cf[{}]", report.label);
        let json_body = json!({
            "check": check_name,
            "seed": report.seed,
            "n": report.n,
            "band": report.band,
            "points": report.rows.iter().map(|row| json!({
                "s_re": row.t,
                "s_im": 0.0,
                "empirical": row.empirical,
                "expected": row.expected,
                "residual": row.deviation,
            })).collect::<Vec<_>>(),
            "max_residual": report.max_deviation,
            "passed": report.passed,
        });
        let csv_body = || {
            let mut text = String::from("check,s_re,s_im,residual,passed\n");
            for row in &report.rows {
                let _ = writeln!(
                    text,
                    "{},{},0,{},{}",
                    check_name,
                    fmt_f64(row.t),
                    fmt_f64(row.deviation),
                    report.passed
                );
            }
            text
        };
        write_report(&args.output, json_body, csv_body, json!({}))?;
        return Ok(report.passed);
    }

    let (label, draws) = if args.mixing {
        let g = parse_mixing(family, &params)?;
        (g.label(), sample_mixing(&g, seed, n).map_err(Failure::from)?)
    } else {
        let f = parse_source(family, &params)?;
        (f.label(), sample_density(&f, seed, n).map_err(Failure::from)?)
    };

    if args.output.out.is_none() {
        for x in &draws {
            println!("{}", fmt_f64(*x));
        }
    } else {
        eprintln!("sampled {} draws from {label} (seed {seed})", draws.len());
    }
    let json_body = json!({
        "family": label,
        "seed": seed,
        "n": n,
        "samples": draws.clone(),
    });
    let csv_body = || {
        let mut text = String::from("index,value\n");
        for (i, x) in draws.iter().enumerate() {
            let _ = writeln!(text, "{i},{}", fmt_f64(*x));
        }
        text
    };
    write_report(&args.output, json_body, csv_body, json!({}))?;
    Ok(true)
}

fn print_band_summary(report: &SrBandReport) {
    println!(
        "sampled-cf[{}]: max deviation {} (band {}, n {}, seed {}) {}",
        report.label,
        fmt_f64(report.max_deviation),
        fmt_f64(report.band),
        report.n,
        report.seed,
        if report.passed { "pass" } else { "FAIL" }
    );
}

// ---------------------------------------------------------------- suite

fn run_suite_cmd(mut args: SuiteArgs) -> Result<bool, Failure> {
    if let Some(path) = &args.output.config {
        let map = load_config(path)?;
        fill(&mut args.output.out, &map, "out")?;
        config_format(&mut args.output.format, &map)?;
    }
    let reports = run_suite(&RunOptions::default()).map_err(Failure::from)?;
    for r in &reports {
        summarize(r);
    }
    let passed = reports.iter().filter(|r| r.passed).count();
    println!("suite: {passed}/{} checks passed", reports.len());
    write_report(
        &args.output,
        report_json(&reports),
        || report_csv(&reports),
        report_meta(&reports),
    )?;
    Ok(passed == reports.len())
}
