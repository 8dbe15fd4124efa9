//! Command-line front end.
//!
//! Settings are resolved in the order: command-line flags, then the JSON
//! config file given by `--config`, then built-in defaults. Reports are
//! written as pretty JSON (or CSV for sampled curves) to `--out` or stdout.
//!
//! Exit codes: 0 success, 1 a verification failed, 2 usage or input error,
//! 3 a numerical invariant was violated.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::cutlocus::{
    search_minimizers, uniqueness_case_checks, verify_antidiagonal_not_cut, verify_l_subset_cutlocus, VelocityGrid,
    DEFAULT_EPS_HIT, DEFAULT_EPS_V,
};
use crate::distribution::{
    bracket_generating_rank, montgomery_for_stiefel, strongly_bracket_summary, BracketReport, MontgomeryReport,
    StrongBracketSummary, DEFAULT_STRONG_SAMPLES,
};
use crate::error::Error;
use crate::geodesic::{sample_times, verify_closed_forms, write_csv, GeodesicFlow, GeodesicSpec, SuiteResult};
use crate::homspace::{BlockVelocity, MatrixRecord, StiefelPoint};
use crate::matcore::{install_tolerances, CMatrix, Field, Tolerances};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFICATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

pub const WORKERS_ENV: &str = "SR_STIEFEL_WORKERS";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(
    name = "sr-stiefel",
    version,
    about = "Sub-Riemannian geodesics and cut loci on Stiefel manifolds"
)]
pub struct Cli {
    /// JSON run configuration; command-line flags take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Worker threads (default: logical cores).
    #[arg(long, global = true, env = WORKERS_ENV)]
    pub workers: Option<usize>,
    /// Output file (default: stdout).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Default, Args)]
pub struct Common {
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long, value_enum)]
    pub mode: Option<Field>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Sample or trial count.
    #[arg(long, visible_alias = "trials")]
    pub samples: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate or check geodesics.
    Geodesic {
        #[command(subcommand)]
        cmd: GeodesicCmd,
    },
    /// Bracket-generation report; `bracket check` is the same command.
    #[command(args_conflicts_with_subcommands = true)]
    Bracket {
        #[command(subcommand)]
        cmd: Option<BracketCmd>,
        #[command(flatten)]
        common: Common,
    },
    /// Cut-locus experiments.
    Cutlocus {
        #[command(subcommand)]
        cmd: CutlocusCmd,
    },
    #[command(flatten)]
    Experiment(CutlocusCmd),
}

#[derive(Debug, Subcommand)]
pub enum GeodesicCmd {
    /// Sample the geodesic of a velocity at evenly spaced times.
    Eval {
        #[command(flatten)]
        common: Common,
        /// Velocity as JSON `{n, k, mode, re, im}` (the n×n generator), or `@path`.
        #[arg(long)]
        velocity: Option<String>,
        #[arg(long)]
        t_max: Option<f64>,
    },
    /// Compare the closed forms with the generic geodesic.
    Verify {
        #[command(flatten)]
        common: Common,
        #[arg(long, hide = true)]
        inject_sign_flip: bool,
    },
}

#[derive(Debug, Subcommand)]
pub enum BracketCmd {
    Check {
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Debug, Subcommand)]
pub enum CutlocusCmd {
    /// Search for minimizing geodesics to a target.
    #[command(alias = "cutlocus-search")]
    Search {
        #[command(flatten)]
        common: Common,
        /// Target point as JSON `{n, k, mode, re, im}`, or `@path`.
        #[arg(long)]
        target: Option<String>,
        /// Velocity grid as JSON, or `@path`.
        #[arg(long)]
        grid: Option<String>,
        #[arg(long)]
        eps_hit: Option<f64>,
        #[arg(long)]
        eps_v: Option<f64>,
    },
    /// Mirrored geodesics reach block-diagonal points at equal length.
    #[command(name = "verify-l", alias = "verify-L")]
    VerifyL {
        #[command(flatten)]
        common: Common,
    },
    /// Antidiagonal points of V(2k,k) are reached by a unique geodesic.
    VerifyAntidiagonal {
        #[command(flatten)]
        common: Common,
    },
    /// Analytic facts behind uniqueness off the set L on V(n,1).
    Uniqueness {
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ToleranceConfig {
    pub sym: Option<f64>,
    pub unit: Option<f64>,
    pub eq: Option<f64>,
    pub eps_hit: Option<f64>,
    pub eps_v: Option<f64>,
}

/// Contents of a `--config` file. Every field is optional.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// If present, must name the command being run, e.g. `"cutlocus search"`.
    pub command: Option<String>,
    pub n: Option<usize>,
    pub k: Option<usize>,
    pub mode: Option<Field>,
    pub seed: Option<u64>,
    pub samples: Option<usize>,
    pub tolerances: Option<ToleranceConfig>,
    pub grid: Option<VelocityGrid>,
    pub velocity: Option<MatrixRecord>,
    pub target: Option<MatrixRecord>,
    pub t_max: Option<f64>,
    pub output_path: Option<PathBuf>,
    pub format: Option<Format>,
    pub workers: Option<usize>,
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Numerical(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        if e.is_numerical() {
            CliError::Numerical(e.to_string())
        } else {
            CliError::Usage(e.to_string())
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

/// Inline JSON, or `@path` to read it from a file.
fn read_json_arg<T: serde::de::DeserializeOwned>(what: &str, arg: &str) -> CliResult<T> {
    let text = match arg.strip_prefix('@') {
        Some(path) => fs::read_to_string(path).map_err(|e| usage(format!("cannot read {what} file {path}: {e}")))?,
        None => arg.to_string(),
    };
    serde_json::from_str(&text).map_err(|e| usage(format!("malformed {what}: {e}")))
}

/// Well-formed records that break a matrix invariant are numerical errors, not usage errors.
fn matrix_input<T: TryFrom<MatrixRecord, Error = Error>>(
    what: &str,
    arg: Option<String>,
    fallback: &Option<MatrixRecord>,
) -> CliResult<Option<T>> {
    let record = match arg {
        Some(s) => read_json_arg::<MatrixRecord>(what, &s)?,
        None => match fallback {
            Some(r) => r.clone(),
            None => return Ok(None),
        },
    };
    Ok(Some(T::try_from(record)?))
}

struct Resolved {
    n: Option<usize>,
    k: Option<usize>,
    mode: Field,
    seed: u64,
    samples: Option<usize>,
}

fn resolve(common: &Common, cfg: &RunConfig) -> Resolved {
    Resolved {
        n: common.n.or(cfg.n),
        k: common.k.or(cfg.k),
        mode: common.mode.or(cfg.mode).unwrap_or(Field::Complex),
        seed: common.seed.or(cfg.seed).unwrap_or(0),
        samples: common.samples.or(cfg.samples),
    }
}

fn require(value: Option<usize>, flag: &str) -> CliResult<usize> {
    value.ok_or_else(|| usage(format!("missing required --{flag}")))
}

struct Output {
    path: Option<PathBuf>,
    format: Option<Format>,
}

impl Output {
    fn write_bytes(&self, bytes: &[u8]) -> CliResult<()> {
        match &self.path {
            Some(p) => write_file(p, bytes),
            None => std::io::stdout()
                .write_all(bytes)
                .map_err(|e| usage(format!("cannot write output: {e}"))),
        }
    }

    fn json<T: Serialize>(&self, value: &T) -> CliResult<()> {
        if self.format == Some(Format::Csv) {
            return Err(usage("this command only writes JSON"));
        }
        let mut text = serde_json::to_string_pretty(value).map_err(|e| usage(e.to_string()))?;
        text.push('\n');
        self.write_bytes(text.as_bytes())
    }
}

fn write_file(path: &Path, bytes: &[u8]) -> CliResult<()> {
    fs::write(path, bytes).map_err(|e| usage(format!("cannot write {}: {e}", path.display())))
}

#[derive(Serialize)]
struct ClosedFormOutput {
    suites: Vec<SuiteResult>,
    warnings: Vec<String>,
    pass: bool,
}

#[derive(Serialize)]
struct BracketOutput {
    #[serde(flatten)]
    report: BracketReport,
    montgomery: Option<MontgomeryReport>,
    strongly_generating: Option<StrongBracketSummary>,
    pass: bool,
}

/// Runs the command line and returns the process exit code.
pub fn run() -> i32 {
    run_from(std::env::args_os())
}

pub fn run_from<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli) {
        Ok(true) => EXIT_OK,
        Ok(false) => EXIT_VERIFICATION,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            EXIT_USAGE
        }
        Err(CliError::Numerical(msg)) => {
            eprintln!("numerical error: {msg}");
            EXIT_NUMERICAL
        }
    }
}

fn command_name(cmd: &Command) -> &'static str {
    match cmd {
        Command::Geodesic {
            cmd: GeodesicCmd::Eval { .. },
        } => "geodesic eval",
        Command::Geodesic {
            cmd: GeodesicCmd::Verify { .. },
        } => "geodesic verify",
        Command::Bracket { .. } => "bracket check",
        Command::Cutlocus { cmd } | Command::Experiment(cmd) => match cmd {
            CutlocusCmd::Search { .. } => "cutlocus search",
            CutlocusCmd::VerifyL { .. } => "cutlocus verify-l",
            CutlocusCmd::VerifyAntidiagonal { .. } => "cutlocus verify-antidiagonal",
            CutlocusCmd::Uniqueness { .. } => "cutlocus uniqueness",
        },
    }
}

/// `"cutlocus verify-L"`, `"verify-l"` and `"cutlocus_verify_l"` name the same command.
fn canonical_command(name: &str) -> String {
    let words = name.to_lowercase().replace(['_', '-'], " ");
    let words: Vec<&str> = words.split_whitespace().collect();
    let words = match words.as_slice() {
        ["cutlocus", rest @ ..] if !rest.is_empty() => rest,
        ["bracket", "check"] => &words[..1],
        w => w,
    };
    words.join(" ")
}

/// Returns whether every verification passed.
fn execute(cli: Cli) -> CliResult<bool> {
    let cfg: RunConfig = match &cli.config {
        Some(path) => {
            let text =
                fs::read_to_string(path).map_err(|e| usage(format!("cannot read config {}: {e}", path.display())))?;
            serde_json::from_str(&text).map_err(|e| usage(format!("malformed config: {e}")))?
        }
        None => RunConfig::default(),
    };
    if let Some(c) = &cfg.command {
        if canonical_command(c) != canonical_command(command_name(&cli.command)) {
            return Err(usage(format!(
                "config is for `{c}`, not `{}`",
                command_name(&cli.command)
            )));
        }
    }
    let tol_cfg = cfg.tolerances.clone().unwrap_or_default();
    if tol_cfg.sym.is_some() || tol_cfg.unit.is_some() || tol_cfg.eq.is_some() {
        let d = Tolerances::default();
        install_tolerances(Tolerances {
            sym: tol_cfg.sym.unwrap_or(d.sym),
            unit: tol_cfg.unit.unwrap_or(d.unit),
            eq: tol_cfg.eq.unwrap_or(d.eq),
        })?;
    }
    let out = Output {
        path: cli.out.clone().or(cfg.output_path.clone()),
        format: cli.format.or(cfg.format),
    };
    let workers = cli.workers.or(cfg.workers).unwrap_or(0);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| usage(format!("cannot start workers: {e}")))?;
    pool.install(|| dispatch(cli.command, &cfg, &tol_cfg, &out))
}

fn dispatch(cmd: Command, cfg: &RunConfig, tol: &ToleranceConfig, out: &Output) -> CliResult<bool> {
    match cmd {
        Command::Geodesic { cmd } => match cmd {
            GeodesicCmd::Eval {
                common,
                velocity,
                t_max,
            } => geodesic_eval(&common, velocity, t_max, cfg, out),
            GeodesicCmd::Verify {
                common,
                inject_sign_flip,
            } => {
                let r = resolve(&common, cfg);
                let trials = r.samples.unwrap_or(1000);
                let suites = verify_closed_forms(trials, r.seed, inject_sign_flip)?;
                let mut warnings = Vec::new();
                if trials == 0 {
                    let w = "zero trials: the comparison is vacuous".to_string();
                    eprintln!("warning: {w}");
                    warnings.push(w);
                }
                let pass = suites.iter().all(|s| s.pass);
                out.json(&ClosedFormOutput { suites, warnings, pass })?;
                Ok(pass)
            }
        },
        Command::Bracket { cmd, common } => {
            let common = match cmd {
                Some(BracketCmd::Check { common }) => common,
                None => common,
            };
            let r = resolve(&common, cfg);
            let n = require(r.n, "n")?;
            let k = r.k.unwrap_or(1);
            let report = bracket_generating_rank(n, k, r.mode)?;
            let montgomery = montgomery_for_stiefel(n, k, r.mode).ok();
            let strongly_generating = if k == 1 && r.mode == Field::Complex {
                Some(strongly_bracket_summary(
                    n,
                    r.samples.unwrap_or(DEFAULT_STRONG_SAMPLES),
                    r.seed,
                )?)
            } else {
                None
            };
            let pass = report.generating && strongly_generating.as_ref().is_none_or(|s| s.pass);
            out.json(&BracketOutput {
                report,
                montgomery,
                strongly_generating,
                pass,
            })?;
            Ok(pass)
        }
        Command::Cutlocus { cmd } | Command::Experiment(cmd) => match cmd {
            CutlocusCmd::Search {
                common,
                target,
                grid,
                eps_hit,
                eps_v,
            } => {
                let r = resolve(&common, cfg);
                let target = match matrix_input::<StiefelPoint>("target", target, &cfg.target)? {
                    Some(t) => t,
                    None => default_target(require(r.n, "n")?, r.k.unwrap_or(1), r.mode)?,
                };
                check_dims(&target, r.n, r.k, common.mode.or(cfg.mode))?;
                let mut grid = match grid {
                    Some(s) => read_json_arg::<VelocityGrid>("grid", &s)?,
                    None => cfg.grid.clone().unwrap_or_default(),
                };
                if let Some(seed) = common.seed.or(cfg.seed) {
                    grid.seed = seed;
                }
                let eps_hit = eps_hit.or(tol.eps_hit).unwrap_or(DEFAULT_EPS_HIT);
                let eps_v = eps_v.or(tol.eps_v).unwrap_or(DEFAULT_EPS_V);
                let report = search_minimizers(&target, &grid, eps_hit, eps_v)?;
                let pass = report.pass;
                out.json(&report)?;
                Ok(pass)
            }
            CutlocusCmd::VerifyL { common } => {
                let r = resolve(&common, cfg);
                let n = require(r.n, "n")?;
                let k = r.k.unwrap_or(1);
                let s = verify_l_subset_cutlocus(n, k, r.mode, r.samples.unwrap_or(50), r.seed)?;
                out.json(&s)?;
                Ok(s.pass)
            }
            CutlocusCmd::VerifyAntidiagonal { common } => {
                let r = resolve(&common, cfg);
                let k = require(r.k, "k")?;
                if let Some(n) = r.n {
                    if n != 2 * k {
                        return Err(usage(format!("antidiagonal checks need n = 2k, got n={n}, k={k}")));
                    }
                }
                let s = verify_antidiagonal_not_cut(k, r.mode, r.samples.unwrap_or(100), r.seed)?;
                out.json(&s)?;
                Ok(s.pass)
            }
            CutlocusCmd::Uniqueness { common } => {
                let r = resolve(&common, cfg);
                if r.k.is_some_and(|k| k != 1) {
                    return Err(usage("uniqueness checks are for k = 1"));
                }
                if r.mode != Field::Complex {
                    return Err(usage("uniqueness checks are for complex mode"));
                }
                let s = uniqueness_case_checks(r.n.unwrap_or(2), r.samples.unwrap_or(1000), r.seed)?;
                out.json(&s)?;
                Ok(s.pass)
            }
        },
    }
}

/// A block-diagonal target: `-I_k` on top, zeros below.
fn default_target(n: usize, k: usize, mode: Field) -> CliResult<StiefelPoint> {
    if k == 0 || k >= n {
        return Err(Error::KOutOfRange { n, k }.into());
    }
    let cols = -CMatrix::identity(n, k);
    Ok(StiefelPoint::new(cols, mode)?)
}

fn check_dims(p: &StiefelPoint, n: Option<usize>, k: Option<usize>, mode: Option<Field>) -> CliResult<()> {
    if n.is_some_and(|n| n != p.n()) || k.is_some_and(|k| k != p.k()) || mode.is_some_and(|m| m != p.field()) {
        return Err(usage(format!(
            "flags disagree with the input: it lives in V({},{}) ({})",
            p.n(),
            p.k(),
            p.field().as_str()
        )));
    }
    Ok(())
}

fn geodesic_eval(
    common: &Common,
    velocity: Option<String>,
    t_max: Option<f64>,
    cfg: &RunConfig,
    out: &Output,
) -> CliResult<bool> {
    let r = resolve(common, cfg);
    let n = require(r.n, "n")?;
    let k = r.k.unwrap_or(1);
    let v = matrix_input::<BlockVelocity>("velocity", velocity, &cfg.velocity)?
        .ok_or_else(|| usage("missing required --velocity"))?;
    if v.n() != n || v.k() != k || common.mode.or(cfg.mode).is_some_and(|m| m != v.field()) {
        return Err(usage(format!(
            "velocity is for V({},{}) ({}), flags ask for V({n},{k})",
            v.n(),
            v.k(),
            v.field().as_str()
        )));
    }
    let t_max = t_max.or(cfg.t_max).unwrap_or(1.0);
    if !(t_max.is_finite() && t_max >= 0.0) {
        return Err(usage(format!("t-max must be finite and non-negative, got {t_max}")));
    }
    let times = sample_times(t_max, r.samples.unwrap_or(10));
    let flow = GeodesicFlow::new(GeodesicSpec::new(v));
    match out.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut buf = Vec::new();
            write_csv(&flow, &times, &mut buf)?;
            out.write_bytes(&buf)?;
        }
        Format::Json => {
            let samples = times.iter().map(|&t| flow.sample(t)).collect::<Result<Vec<_>, _>>()?;
            let mut text = serde_json::to_string_pretty(&samples).map_err(|e| usage(e.to_string()))?;
            text.push('\n');
            out.write_bytes(text.as_bytes())?;
        }
    }
    Ok(true)
}

/// JSON for the `V_{n,1}` velocity with `A = [[iλ]]` and row `B`, as accepted by `--velocity`.
pub fn vn1_velocity_json(lambda: f64, b: &[Complex64]) -> Result<String, Error> {
    Ok(serde_json::to_string(&BlockVelocity::vn1(lambda, b)?)?)
}
