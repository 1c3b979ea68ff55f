//! The `varexp` command-line front end.
//!
//! Exit status: 0 success, 1 a requested check failed, 2 bad input or usage,
//! 3 a norm did not reach its tolerance, 4 an I/O failure.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::builder::PossibleValuesParser;
use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exponent::{ExponentFunction, ExponentSequence};
use crate::hilbert::{discrete_hilbert, HilbertMethod, HilbertOptions};
use crate::multiplier::{apply_multiplier, mikhlin_check, min_grid_size, Symbol};
use crate::space::{luxemburg_norm_seq, luxemburg_norm_step, ComplexSequence, NormResult, Sequence, StepFunction, DEFAULT_TOL};
use crate::verify::{estimate_operator_norm_with, EstimateConfig, EstimateMethod, ExponentFamily, Suite, SuiteConfig};
use crate::window::Window;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECKS_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_TOLERANCE: i32 = 3;
pub const EXIT_IO: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "varexp", version, about = "Variable-exponent sequence spaces: norms, transforms, multipliers and checks")]
pub struct Cli {
    /// TOML file with defaults; command-line flags take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Tolerance on the modular at the computed norm.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Luxemburg norm of a sequence or step-function file.
    Norm(NormArgs),
    /// Discrete Hilbert transform of a sequence file.
    Hilbert(HilbertArgs),
    /// Apply a Fourier multiplier to a sequence file.
    Multiplier(MultiplierArgs),
    /// Check the derivative bounds of a symbol.
    Mikhlin(MikhlinArgs),
    /// Run a check suite and write its report.
    Verify(VerifyArgs),
    /// Operator-norm lower bounds over exponent families and windows.
    Sweep(SweepArgs),
}

#[derive(Debug, Args)]
pub struct NormArgs {
    /// Sequence JSON, or step-function JSON (detected by its `breakpoints` key).
    pub input: PathBuf,
    /// A number, an exponent JSON file, or a family such as `alternating:1.5:3`.
    #[arg(long, short = 'p')]
    pub exponent: Option<String>,
}

#[derive(Debug, Args)]
pub struct HilbertArgs {
    pub input: PathBuf,
    #[arg(long, value_enum, default_value_t = MethodArg::Fft)]
    pub method: MethodArg,
    /// Output indices `lo:hi`, inclusive; defaults to the input window.
    #[arg(long, allow_hyphen_values = true)]
    pub window: Option<String>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum MethodArg {
    Direct,
    Fft,
}

#[derive(Debug, Args)]
pub struct MultiplierArgs {
    pub input: PathBuf,
    /// `one`, `shift[:k]`, `sgn`, `riesz_tau:<t>`, `linear`, `hilbert` or `grid:<path>`.
    #[arg(long)]
    pub symbol: String,
    /// Power of two, at least twice the input length.
    #[arg(long)]
    pub grid: Option<usize>,
}

#[derive(Debug, Args)]
pub struct MikhlinArgs {
    #[arg(long)]
    pub symbol: String,
    #[arg(long)]
    pub bound: f64,
    #[arg(long, default_value_t = 4096)]
    pub grid: usize,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(value_parser = PossibleValuesParser::new(Suite::ALL.map(Suite::id)))]
    pub suite: String,
    /// Override the saturation windows, e.g. `--windows 1024,2048,4096`.
    #[arg(long, value_delimiter = ',')]
    pub windows: Option<Vec<i64>>,
    #[arg(long)]
    pub trials: Option<usize>,
    /// Record the wall-clock time in the report.
    #[arg(long)]
    pub timestamp: bool,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, value_delimiter = ',')]
    pub families: Option<Vec<ExponentFamily>>,
    #[arg(long, value_delimiter = ',')]
    pub windows: Option<Vec<i64>>,
    #[arg(long)]
    pub trials: Option<usize>,
}

/// Contents of a `--config` file.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub seed: Option<u64>,
    pub tol: Option<f64>,
    pub format: Option<Format>,
    pub out: Option<PathBuf>,
    pub exponent: Option<String>,
    pub suite: SuiteConfig,
    pub sweep: SweepConfig,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepConfig {
    pub families: Vec<ExponentFamily>,
    pub windows: Vec<i64>,
    pub estimate: EstimateConfig,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            families: ["constant:2", "alternating:1.5:3", "log_decay:2", "uniform:1.3:4"]
                .iter()
                .map(|s| s.parse().expect("built-in family"))
                .collect(),
            windows: vec![64, 128, 256],
            estimate: EstimateConfig::default(),
        }
    }
}

/// One line of `sweep` output.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub family: String,
    pub half_width: i64,
    pub lower_bound: f64,
    pub method: EstimateMethod,
    pub trials: usize,
}

/// A command's result in both output formats.
struct Output {
    json: String,
    csv: String,
}

struct Settings {
    seed: u64,
    tol: f64,
    format: Format,
    out: Option<PathBuf>,
    exponent: Option<String>,
}

/// Parses `args` (including the program name), runs the command and returns
/// the exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            if !e.use_stderr() {
                return EXIT_OK;
            }
            if !e.to_string().contains("Usage:") {
                eprintln!("\n{}", usage_for(&args));
            }
            return EXIT_USAGE;
        }
    };
    match execute(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

/// Usage of the subcommand named in `args`, or of the whole program.
fn usage_for(args: &[OsString]) -> String {
    let mut cmd = Cli::command();
    let name = args
        .iter()
        .skip(1)
        .filter_map(|a| a.to_str())
        .find(|a| cmd.find_subcommand(a).is_some())
        .map(str::to_owned);
    match name.and_then(|n| cmd.find_subcommand_mut(&n).map(|c| c.render_usage())) {
        Some(usage) => usage.to_string().replacen("Usage: ", "Usage: varexp ", 1),
        None => cmd.render_usage().to_string(),
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Io(_) => EXIT_IO,
        Error::Json(j) if j.is_io() => EXIT_IO,
        _ => EXIT_USAGE,
    }
}

fn execute(cli: Cli) -> Result<i32> {
    let file = match &cli.config {
        Some(path) => {
            let text = fs::read_to_string(path)?;
            toml::from_str::<RunConfig>(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?
        }
        None => RunConfig::default(),
    };
    let settings = Settings {
        seed: cli.seed.or(file.seed).unwrap_or(file.suite.seed),
        tol: cli.tol.or(file.tol).unwrap_or(DEFAULT_TOL),
        format: cli.format.or(file.format).unwrap_or_default(),
        out: cli.out.clone().or(file.out.clone()),
        exponent: file.exponent.clone(),
    };
    if !(settings.tol > 0.0 && settings.tol.is_finite()) {
        return Err(Error::Parse(format!("--tol must be positive, got {}", settings.tol)));
    }

    let (output, code) = match cli.command {
        Command::Norm(a) => cmd_norm(&a, &settings)?,
        Command::Hilbert(a) => cmd_hilbert(&a)?,
        Command::Multiplier(a) => cmd_multiplier(&a)?,
        Command::Mikhlin(a) => cmd_mikhlin(&a)?,
        Command::Verify(a) => cmd_verify(&a, &settings, file.suite)?,
        Command::Sweep(a) => cmd_sweep(&a, &settings, file.sweep)?,
    };
    emit(&output, &settings)?;
    Ok(code)
}

fn emit(output: &Output, settings: &Settings) -> Result<()> {
    let text = match settings.format {
        Format::Json => &output.json,
        Format::Csv => &output.csv,
    };
    match &settings.out {
        Some(path) => fs::write(path, text)?,
        None => io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path, what: &str) -> Result<T> {
    let text = fs::read_to_string(path)?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{what} `{}`: {e}", path.display())))
}

fn to_json<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

fn csv_rows<T: Serialize>(rows: impl IntoIterator<Item = T>) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row).map_err(crate::verify::csv_error)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// A number is a constant exponent, an existing file is exponent JSON, and
/// anything else must name a family, realized on `window`.
pub fn parse_exponent(spec: &str, window: Window, seed: u64) -> Result<ExponentSequence> {
    if let Ok(q) = spec.trim().parse::<f64>() {
        return ExponentSequence::constant(q);
    }
    let path = Path::new(spec);
    if path.is_file() {
        return read_json(path, "exponent file");
    }
    let family: ExponentFamily = spec
        .parse()
        .map_err(|_| Error::Parse(format!("--exponent: `{spec}` is neither a number, a file nor a family")))?;
    family.realize(window, seed)
}

fn parse_exponent_function(spec: &str) -> Result<ExponentFunction> {
    if let Ok(q) = spec.trim().parse::<f64>() {
        return ExponentFunction::constant(q);
    }
    let path = Path::new(spec);
    if path.is_file() {
        return read_json(path, "exponent file");
    }
    Err(Error::Parse(format!("--exponent: `{spec}` is neither a number nor a file")))
}

/// `lo:hi`, both ends included.
pub fn parse_window(spec: &str) -> Result<Window> {
    let bad = || Error::Parse(format!("--window: expected `lo:hi`, got `{spec}`"));
    let (lo, hi) = spec.split_once(':').ok_or_else(bad)?;
    let lo: i64 = lo.trim().parse().map_err(|_| bad())?;
    let hi: i64 = hi.trim().parse().map_err(|_| bad())?;
    if hi < lo {
        return Err(bad());
    }
    Ok(Window::inclusive(lo, hi))
}

#[derive(Serialize)]
struct RealRow {
    index: i64,
    value: f64,
}

#[derive(Serialize)]
struct ComplexRow {
    index: i64,
    re: f64,
    im: f64,
}

fn cmd_norm(a: &NormArgs, s: &Settings) -> Result<(Output, i32)> {
    let text = fs::read_to_string(&a.input)?;
    let raw: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| Error::Parse(format!("input `{}`: {e}", a.input.display())))?;
    let spec = a
        .exponent
        .clone()
        .or_else(|| s.exponent.clone())
        .ok_or_else(|| Error::Parse("--exponent is required".into()))?;
    let result: NormResult = if raw.get("breakpoints").is_some() {
        let f: StepFunction =
            serde_json::from_value(raw).map_err(|e| Error::Parse(format!("input `{}`: {e}", a.input.display())))?;
        luxemburg_norm_step(&f, &parse_exponent_function(&spec)?, s.tol)?
    } else {
        let b: Sequence =
            serde_json::from_value(raw).map_err(|e| Error::Parse(format!("input `{}`: {e}", a.input.display())))?;
        let p = parse_exponent(&spec, b.window(), s.seed)?;
        luxemburg_norm_seq(&b, &p, s.tol)?
    };
    let code = if result.tolerance_met { EXIT_OK } else { EXIT_TOLERANCE };
    if code != EXIT_OK {
        eprintln!("error: modular at the computed norm is {}, outside tolerance {}", result.modular_at_value, s.tol);
    }
    Ok((Output { json: to_json(&result)?, csv: csv_rows([result])? }, code))
}

fn cmd_hilbert(a: &HilbertArgs) -> Result<(Output, i32)> {
    let b: Sequence = read_json(&a.input, "input")?;
    let opts = match a.method {
        MethodArg::Direct => HilbertOptions::direct(),
        MethodArg::Fft => HilbertOptions { method: HilbertMethod::Fft, fft_padding: 0 },
    };
    let hb = match &a.window {
        Some(w) => discrete_hilbert(&b, parse_window(w)?, &opts)?,
        None if b.window().is_empty() => b.clone(),
        None => discrete_hilbert(&b, b.window(), &opts)?,
    };
    let csv = csv_rows(hb.iter().map(|(index, value)| RealRow { index, value }))?;
    Ok((Output { json: to_json(&hb)?, csv }, EXIT_OK))
}

fn cmd_multiplier(a: &MultiplierArgs) -> Result<(Output, i32)> {
    let b: Sequence = read_json(&a.input, "input")?;
    let m = Symbol::parse(&a.symbol)?;
    let grid = a.grid.unwrap_or_else(|| min_grid_size(b.window().len).max(1024));
    let c: ComplexSequence = apply_multiplier(&m, &b, grid)?;
    let csv = csv_rows(c.iter().map(|(index, v)| ComplexRow { index, re: v.re, im: v.im }))?;
    Ok((Output { json: to_json(&c)?, csv }, EXIT_OK))
}

#[derive(Serialize)]
struct MikhlinRow {
    order: usize,
    sup: f64,
    at_xi: f64,
    bound: f64,
}

fn cmd_mikhlin(a: &MikhlinArgs) -> Result<(Output, i32)> {
    let m = Symbol::parse(&a.symbol)?;
    if !(a.bound > 0.0) {
        return Err(Error::Parse(format!("--bound must be positive, got {}", a.bound)));
    }
    let report = mikhlin_check(&m, a.bound, a.grid);
    let csv = csv_rows((0..report.max_ratio_per_order.len()).map(|j| MikhlinRow {
        order: j,
        sup: report.max_ratio_per_order[j],
        at_xi: report.worst_xi_per_order[j],
        bound: report.bound,
    }))?;
    let code = if report.passed { EXIT_OK } else { EXIT_CHECKS_FAILED };
    Ok((Output { json: to_json(&report)?, csv }, code))
}

fn cmd_verify(a: &VerifyArgs, s: &Settings, mut cfg: SuiteConfig) -> Result<(Output, i32)> {
    cfg.seed = s.seed;
    if let Some(w) = &a.windows {
        cfg.windows = w.clone();
    }
    if let Some(t) = a.trials {
        cfg.trials = t;
    }
    let mut report = crate::verify::run_suite(&a.suite, &cfg)?;
    if a.timestamp {
        report.stamp();
    }
    for c in report.failures() {
        eprintln!("FAILED {}: observed {}, bound {}, margin {}", c.name, c.observed, c.bound, c.margin);
    }
    let code = if report.passed { EXIT_OK } else { EXIT_CHECKS_FAILED };
    let mut json = report.to_json()?;
    json.push('\n');
    Ok((Output { json, csv: report.to_csv()? }, code))
}

fn cmd_sweep(a: &SweepArgs, s: &Settings, mut cfg: SweepConfig) -> Result<(Output, i32)> {
    if let Some(f) = &a.families {
        cfg.families = f.clone();
    }
    if let Some(w) = &a.windows {
        cfg.windows = w.clone();
    }
    if let Some(t) = a.trials {
        cfg.estimate.trials = t;
    }
    let mut windows = cfg.windows.clone();
    windows.sort_unstable();
    windows.dedup();
    let largest = Window::symmetric(*windows.last().ok_or_else(|| Error::Parse("sweep needs at least one window".into()))?);
    if windows[0] < 0 {
        return Err(Error::Parse("sweep windows must be non-negative".into()));
    }
    let mut rows = Vec::new();
    for family in &cfg.families {
        let p = family.realize(largest, s.seed)?;
        let mut warm = None;
        for &h in &windows {
            let est_cfg = EstimateConfig { seed: s.seed, warm_start: warm.take(), ..cfg.estimate.clone() };
            let est = estimate_operator_norm_with(&p, Window::symmetric(h), &est_cfg)?;
            rows.push(SweepRow {
                family: family.to_string(),
                half_width: h,
                lower_bound: est.lower_bound,
                method: est.method,
                trials: est.trials,
            });
            warm = Some(est.witness);
        }
    }
    Ok((Output { json: to_json(&rows)?, csv: csv_rows(rows.iter())? }, EXIT_OK))
}
