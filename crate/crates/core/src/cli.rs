//! Command-line front end: argument validation, dispatch and output formatting.

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::error::Error;
use crate::harness::{verify_lieb_extension, Grid, Signal, DEFAULT_DT, DEFAULT_SUPPORT};
use crate::oracle::{verify_oracle, DEFAULT_TRUNCATION};
use crate::regimes::{classify, ProblemParams};
use crate::solver::{optimize, sample_profile};
use crate::weight::{Profile, ProfileMeta};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_NONCONVERGENCE: i32 = 3;
pub const EXIT_VERIFICATION: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "tfloc", version, about = "Sharp bounds for Gaussian localization operators with L^p ∩ L^q weights")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Report the regime, both thresholds and the sharp bound.
    Classify(Flags),
    /// Solve for the optimal weight.
    Solve(Flags),
    /// Tabulate the optimal radial profile as CSV.
    Profile(Flags),
    /// Cross-check the bound against the eigenvalue and norm oracles.
    VerifyOracle(Flags),
    /// Measure a spectrogram in L^p + L^q against the sharp constant.
    VerifyLieb(Flags),
}

#[derive(Debug, Args)]
struct Flags {
    #[arg(long, default_value_t = 1)]
    d: u32,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    q: Option<f64>,
    #[arg(long = "A")]
    a: Option<f64>,
    #[arg(long = "B")]
    b: Option<f64>,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    #[arg(long, default_value_t = 3.0)]
    rmax: f64,
    #[arg(long, default_value_t = 301)]
    n: usize,
    #[arg(long = "grid-r", default_value_t = 4.0)]
    grid_r: f64,
    #[arg(long = "grid-h", default_value_t = 0.0625)]
    grid_h: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "-")]
    out: String,
    /// gaussian, hermite or random.
    #[arg(long, default_value = "gaussian")]
    signal: String,
    /// Hermite index, mixture order, or eigenvalue truncation.
    #[arg(long)]
    k: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SubcommandKind {
    Classify,
    Solve,
    Profile,
    VerifyOracle,
    VerifyLieb,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignalKind {
    Gaussian,
    Hermite(usize),
    RandomMixture { seed: u64, order: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Output {
    Stdout,
    File(PathBuf),
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub subcommand: SubcommandKind,
    /// For `verify-lieb` the budgets are fixed to `A = B = 1`.
    pub params: ProblemParams,
    pub tol: f64,
    pub rmax: f64,
    pub n: usize,
    pub grid: Grid,
    pub seed: u64,
    pub signal: SignalKind,
    /// Eigenvalue truncation for `verify-oracle`.
    pub k_max: usize,
    pub out: Output,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn invalid(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_INVALID,
            message: message.into(),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::NonConvergence { .. } | Error::NoBracket { .. } | Error::Quadrature { .. } => EXIT_NONCONVERGENCE,
            _ => EXIT_INVALID,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

fn check(flag: &str, value: f64, ok: bool, requirement: &str) -> Result<(), CliError> {
    if ok {
        Ok(())
    } else {
        Err(CliError::invalid(format!("invalid value for --{flag}: {value} ({requirement})")))
    }
}

fn required(flag: &str, value: Option<f64>) -> Result<f64, CliError> {
    value.ok_or_else(|| CliError::invalid(format!("missing required flag --{flag}")))
}

/// Parses `argv` (including the program name) into a validated configuration.
pub fn parse_and_validate<I, T>(argv: I) -> Result<RunConfig, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(argv).map_err(|e| {
        let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
        CliError {
            code,
            message: e.to_string(),
        }
    })?;
    let (subcommand, f) = match cli.command {
        Command::Classify(f) => (SubcommandKind::Classify, f),
        Command::Solve(f) => (SubcommandKind::Solve, f),
        Command::Profile(f) => (SubcommandKind::Profile, f),
        Command::VerifyOracle(f) => (SubcommandKind::VerifyOracle, f),
        Command::VerifyLieb(f) => (SubcommandKind::VerifyLieb, f),
    };
    let lieb = subcommand == SubcommandKind::VerifyLieb;
    check("d", f64::from(f.d), f.d >= 1, "must be at least 1")?;
    if lieb {
        check("d", f64::from(f.d), f.d == 1, "spectrogram experiments need d = 1")?;
    }
    let p = required("p", f.p)?;
    let q = required("q", f.q)?;
    check("p", p, p > 1.0 && p.is_finite(), "must be a finite exponent > 1")?;
    check("q", q, q > 1.0 && q.is_finite(), "must be a finite exponent > 1")?;
    let (a, b) = if lieb {
        (f.a.unwrap_or(1.0), f.b.unwrap_or(1.0))
    } else {
        (required("A", f.a)?, required("B", f.b)?)
    };
    check("A", a, a > 0.0 && a.is_finite(), "must be positive")?;
    check("B", b, b > 0.0 && b.is_finite(), "must be positive")?;
    check("tol", f.tol, f.tol > 0.0 && f.tol < 1.0, "must lie in (0, 1)")?;
    check("rmax", f.rmax, f.rmax > 0.0 && f.rmax.is_finite(), "must be positive")?;
    check("n", f.n as f64, f.n >= 2, "need at least 2 samples")?;
    check("grid-r", f.grid_r, f.grid_r > 0.0 && f.grid_r.is_finite(), "must be positive")?;
    check("grid-h", f.grid_h, f.grid_h > 0.0 && f.grid_h <= f.grid_r, "must lie in (0, grid-r]")?;
    let cells = 2.0 * f.grid_r / f.grid_h;
    check("grid-h", f.grid_h, (cells - cells.round()).abs() <= 1e-9 * cells, "must divide 2·grid-r")?;
    let signal = match f.signal.as_str() {
        "gaussian" => SignalKind::Gaussian,
        "hermite" => SignalKind::Hermite(f.k.unwrap_or(1)),
        "random" => SignalKind::RandomMixture {
            seed: f.seed,
            order: f.k.unwrap_or(6),
        },
        other => {
            return Err(CliError::invalid(format!(
                "invalid value for --signal: {other} (expected gaussian, hermite or random)"
            )))
        }
    };
    let params = ProblemParams::new(f.d, p, q, a, b)?;
    Ok(RunConfig {
        subcommand,
        params,
        tol: f.tol,
        rmax: f.rmax,
        n: f.n,
        grid: Grid {
            half_width: f.grid_r,
            step: f.grid_h,
        },
        seed: f.seed,
        signal,
        k_max: f.k.unwrap_or(DEFAULT_TRUNCATION),
        out: if f.out == "-" {
            Output::Stdout
        } else {
            Output::File(PathBuf::from(f.out))
        },
    })
}

/// Rounds to 12 significant digits.
pub fn round12(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

/// 12-significant-digit rendering used in CSV output; zero prints as `0`.
pub fn format_number(x: f64) -> String {
    let r = round12(x);
    if r == 0.0 {
        "0".to_string()
    } else if (1e-4..1e15).contains(&r.abs()) {
        format!("{r}")
    } else {
        format!("{r:e}")
    }
}

fn round_json(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => n.as_f64().map(|x| json!(round12(x))).unwrap_or(Value::Null),
        Value::Array(a) => Value::Array(a.into_iter().map(round_json).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, v)| (k, round_json(v))).collect()),
        other => other,
    }
}

fn to_document(v: Value) -> String {
    let mut s = serde_json::to_string_pretty(&round_json(v)).unwrap_or_default();
    s.push('\n');
    s
}

/// Result of one command: its exit code and the emitted document.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub code: i32,
    pub document: String,
}

fn weight_json(profile: &Profile) -> Value {
    match profile {
        Profile::Gaussian { amplitude, decay } => json!({"kind": "gaussian", "amplitude": amplitude, "decay": decay}),
        _ => json!({"kind": "optimal_psi"}),
    }
}

/// Runs a validated configuration.
pub fn dispatch(config: &RunConfig) -> Result<Outcome, CliError> {
    let params = &config.params;
    let ok = |v: Value| Outcome {
        code: EXIT_OK,
        document: to_document(v),
    };
    match config.subcommand {
        SubcommandKind::Classify => {
            let d = classify(params);
            let opt = optimize(params, config.tol)?;
            Ok(ok(json!({
                "regime": d.regime,
                "threshold_lower": d.threshold_lower,
                "threshold_upper": d.threshold_upper,
                "ratio": d.ratio,
                "bound": opt.bound,
            })))
        }
        SubcommandKind::Solve => {
            let opt = optimize(params, config.tol)?;
            let s = opt.solution.as_ref();
            Ok(ok(json!({
                "regime": opt.decision.regime,
                "lambda1": s.map(|s| s.lambda1),
                "lambda2": s.map(|s| s.lambda2),
                "c1": s.map(|s| s.c1),
                "c2": s.map(|s| s.c2),
                "T": s.map(|s| s.t_end),
                "bound": opt.bound,
                "residual_p": s.map(|s| s.residual_p),
                "residual_q": s.map(|s| s.residual_q),
                "iterations": s.map(|s| s.iterations),
                "weight": weight_json(&opt.weight.profile),
            })))
        }
        SubcommandKind::Profile => {
            let opt = optimize(params, config.tol)?;
            let table = sample_profile(&opt.weight, config.rmax, config.n)?;
            let Profile::Tabulated(t) = &table.profile else {
                unreachable!("sample_profile always tabulates")
            };
            let mut csv = format!("# regime={}\n", opt.decision.regime);
            match t.meta {
                Some(ProfileMeta::Multipliers { lambda1, lambda2, t_end }) => csv.push_str(&format!(
                    "# lambda1={} lambda2={} T={}\n",
                    format_number(lambda1),
                    format_number(lambda2),
                    format_number(t_end)
                )),
                Some(ProfileMeta::Gaussian { amplitude, decay }) => csv.push_str(&format!(
                    "# amplitude={} decay={}\n",
                    format_number(amplitude),
                    format_number(decay)
                )),
                None => {}
            }
            csv.push_str(&format!("# bound={}\n", format_number(opt.bound)));
            csv.push_str("r,F\n");
            for (r, f) in t.r.iter().zip(&t.f) {
                csv.push_str(&format!("{},{}\n", format_number(*r), format_number(*f)));
            }
            Ok(Outcome {
                code: EXIT_OK,
                document: csv,
            })
        }
        SubcommandKind::VerifyOracle => {
            let report = verify_oracle(params, config.tol, config.k_max)?;
            let d = classify(params);
            let pass = report.pass;
            let doc = json!({
                "regime": d.regime,
                "checks": report.checks,
                "pass": pass,
            });
            Ok(Outcome {
                code: if pass { EXIT_OK } else { EXIT_VERIFICATION },
                document: to_document(doc),
            })
        }
        SubcommandKind::VerifyLieb => {
            let (lo, hi) = DEFAULT_SUPPORT;
            let reach = config.grid.half_width + crate::harness::WINDOW_REACH + 1.0;
            let support = (lo.min(-reach), hi.max(reach));
            let signal = match config.signal {
                SignalKind::Gaussian => Signal::gaussian(support, DEFAULT_DT)?,
                SignalKind::Hermite(k) => Signal::hermite(k, support, DEFAULT_DT)?,
                SignalKind::RandomMixture { seed, order } => Signal::random_mixture(seed, order, support, DEFAULT_DT)?,
            };
            let report = verify_lieb_extension(&signal, params.p, params.q, config.grid, 1e-3)?;
            let pass = report.pass;
            Ok(Outcome {
                code: if pass { EXIT_OK } else { EXIT_VERIFICATION },
                document: to_document(serde_json::to_value(&report).unwrap_or(Value::Null)),
            })
        }
    }
}

/// Full command-line entry point; returns the process exit code.
pub fn run<I, T, O: Write, E: Write>(argv: I, stdout: &mut O, stderr: &mut E) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let config = match parse_and_validate(argv) {
        Ok(c) => c,
        Err(e) => {
            let mut message = e.message;
            if !message.ends_with('\n') {
                message.push('\n');
            }
            let _ = if e.code == EXIT_OK {
                stdout.write_all(message.as_bytes())
            } else {
                stderr.write_all(message.as_bytes())
            };
            return e.code;
        }
    };
    let outcome = match dispatch(&config) {
        Ok(o) => o,
        Err(e) => {
            let _ = writeln!(stderr, "error: {}", e.message);
            return e.code;
        }
    };
    let written = match &config.out {
        Output::Stdout => stdout.write_all(outcome.document.as_bytes()),
        Output::File(path) => fs::write(path, &outcome.document),
    };
    if let Err(e) = written {
        let _ = writeln!(stderr, "error: cannot write output: {e}");
        return EXIT_INVALID;
    }
    outcome.code
}
