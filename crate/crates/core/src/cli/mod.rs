//! Command-line front end.
//!
//! Exit codes: 0 success, 1 failed check or other error, 2 parse error,
//! 3 validation or input error, 4 non-integrable complex structure,
//! 5 zero direction, 6 algebra not of complex-group type.

mod commands;
mod report;
mod source;

use std::ffi::OsString;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::algebra::STRUCTURAL_TOL;
use crate::classify::{ClassifyOptions, TOL_CLS};
use crate::error::{Error, Result};
use crate::norm::{DiffConfig, DiffMode, NormSpec, TOL_JET_DUAL, TOL_JET_FD};

pub use commands::{parse_grid, SweepRow, OPERATOR_TOL};
pub use report::{render, Format, Report, Residual, Status};
pub use source::{parse_vector, InputDigest};

/// Environment variable read by `env_logger`.
pub const LOG_ENV: &str = "FINSLER_LIE_LOG";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum DiffArg {
    Dual,
    Fd,
}

#[derive(Args, Clone, Debug, Serialize)]
pub struct RunConfig {
    /// Classification and theorem tolerance.
    #[arg(long = "tol", global = true, default_value_t = TOL_CLS)]
    pub tol_cls: f64,
    /// Antisymmetry, Jacobi and conjugation tolerance.
    #[arg(long, global = true, default_value_t = STRUCTURAL_TOL)]
    pub tol_structural: f64,
    /// Euler-identity tolerance [default: 1e-8 dual, 1e-5 fd].
    #[arg(long, global = true)]
    pub tol_jet: Option<f64>,
    #[arg(long, global = true, value_enum, default_value_t = DiffArg::Dual)]
    pub diff: DiffArg,
    /// Base finite-difference step; scaled by max(1, |v|).
    #[arg(long, global = true)]
    pub fd_step: Option<f64>,
    /// Random directions per run (classify) or per grid point (sweep).
    #[arg(long, global = true, default_value_t = 16)]
    pub samples: usize,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Worker threads for sweep rows [default: available cores].
    #[arg(long, global = true)]
    #[serde(skip)]
    pub jobs: Option<usize>,
}

impl RunConfig {
    fn validate(&self) -> Result<()> {
        for (name, t) in [
            ("--tol", Some(self.tol_cls)),
            ("--tol-structural", Some(self.tol_structural)),
            ("--tol-jet", self.tol_jet),
            ("--fd-step", self.fd_step),
        ] {
            if let Some(t) = t {
                if !(t > 0.0 && t.is_finite()) {
                    return Err(Error::Parameter(format!("{name} must be positive, got {t}")));
                }
            }
        }
        if self.samples == 0 {
            return Err(Error::Parameter("--samples must be at least 1".into()));
        }
        if self.jobs == Some(0) {
            return Err(Error::Parameter("--jobs must be at least 1".into()));
        }
        Ok(())
    }

    pub fn diff_config(&self) -> DiffConfig {
        DiffConfig {
            mode: match self.diff {
                DiffArg::Dual => DiffMode::Dual,
                DiffArg::Fd => DiffMode::Fd,
            },
            fd_step: self.fd_step,
            ..DiffConfig::default()
        }
    }

    pub fn tol_jet(&self, norm: &NormSpec) -> f64 {
        self.tol_jet.unwrap_or(match self.diff_config().effective_mode(norm) {
            DiffMode::Dual => TOL_JET_DUAL,
            DiffMode::Fd => TOL_JET_FD,
        })
    }

    pub fn classify_options(&self) -> ClassifyOptions {
        ClassifyOptions {
            diff: self.diff_config(),
            tol: self.tol_cls,
            samples: self.samples,
            seed: self.seed,
            ..ClassifyOptions::default()
        }
    }

    fn jobs(&self) -> usize {
        self.jobs
            .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "finsler-lie",
    version,
    about = "Curvature and classification of left-invariant complex Finsler metrics on Lie groups"
)]
struct Cli {
    #[command(flatten)]
    config: RunConfig,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check antisymmetry, Jacobi and (for real files with I) integrability.
    Validate { algebra: String },
    /// Complexify a real algebra with an integrable complex structure.
    Complexify {
        algebra: String,
        /// Basis weights w_i in E_i = w_i (f_i - √-1 I f_i).
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        weights: Option<Vec<f64>>,
        /// Also write the complexified algebra file here.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Holomorphic sectional curvature K(v) and optionally B(v, w).
    Curvature {
        algebra: String,
        norm: String,
        /// Direction as re:im pairs, e.g. 1:0,0:0 or 1,0.
        #[arg(long, allow_hyphen_values = true)]
        v: String,
        #[arg(long, allow_hyphen_values = true)]
        w: Option<String>,
    },
    /// Kähler, weakly Kähler and Berwald residuals and verdicts.
    Classify { algebra: String, norm: String },
    /// Rigidity checks for algebras with vanishing mixed brackets.
    VerifyTheorems { algebra: String, norm: String },
    /// K range over unit directions at every grid point. Templates use
    /// `{key}` placeholders, e.g. `builtin:ch2?beta={beta}&gamma={gamma}`.
    Sweep {
        algebra: String,
        norm: String,
        /// Axis `key=v1,v2,...`; repeat or join with `;`.
        #[arg(long, required = true, allow_hyphen_values = true)]
        grid: Vec<String>,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Validate { .. } => "validate",
            Command::Complexify { .. } => "complexify",
            Command::Curvature { .. } => "curvature",
            Command::Classify { .. } => "classify",
            Command::VerifyTheorems { .. } => "verify-theorems",
            Command::Sweep { .. } => "sweep",
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse { .. } => 2,
        Error::Input(_) | Error::Parameter(_) | Error::Closure(_) => 3,
        Error::Integrability { .. } => 4,
        Error::ZeroDirection => 5,
        Error::NotComplexGroup { .. } => 6,
        Error::StronglyPseudoconvexViolation { .. } | Error::Singular(_) | Error::Differentiation(_) => 1,
    }
}

/// Result of one invocation.
#[derive(Debug)]
pub struct Run {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

fn execute(cli: &Cli) -> Result<commands::Outcome> {
    let cfg = &cli.config;
    cfg.validate()?;
    match &cli.command {
        Command::Validate { algebra } => commands::validate(cfg, algebra),
        Command::Complexify {
            algebra,
            weights,
            output,
        } => commands::complexify_cmd(cfg, algebra, weights.as_deref(), output.as_deref()),
        Command::Curvature { algebra, norm, v, w } => commands::curvature(cfg, algebra, norm, v, w.as_deref()),
        Command::Classify { algebra, norm } => commands::classify_cmd(cfg, algebra, norm),
        Command::VerifyTheorems { algebra, norm } => commands::verify_theorems(cfg, algebra, norm),
        Command::Sweep { algebra, norm, grid } => commands::sweep(cfg, algebra, norm, grid),
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Run
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Run {
                    code: 2,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Run {
                    code: 0,
                    stdout: text,
                    stderr: String::new(),
                }
            };
        }
    };
    let start = Instant::now();
    match execute(&cli) {
        Ok(outcome) => {
            let report = Report {
                subcommand: cli.command.name().into(),
                command: args.iter().map(|a| a.to_string_lossy().into_owned()).collect(),
                inputs: outcome.inputs.clone(),
                config: serde_json::to_value(&cli.config).expect("config serializes"),
                status: outcome.status(),
                payload: outcome.payload,
                residuals: outcome.residuals,
                duration_ms: start.elapsed().as_secs_f64() * 1e3,
            };
            Run {
                code: outcome.code,
                stdout: render(&report, cli.config.format),
                stderr: outcome.message.map(|m| format!("{m}\n")).unwrap_or_default(),
            }
        }
        Err(e) => {
            let hint = match e {
                Error::NotComplexGroup { .. } => "\nthe rigidity theorems need all mixed brackets [e_j, ē_k] to vanish",
                _ => "",
            };
            Run {
                code: exit_code(&e),
                stdout: String::new(),
                stderr: format!("error: {e}{hint}\n"),
            }
        }
    }
}

/// Entry point for the binary; returns the process exit code.
pub fn main() -> i32 {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or(LOG_ENV, "warn")).init();
    let out = run(std::env::args_os());
    print!("{}", out.stdout);
    eprint!("{}", out.stderr);
    out.code
}
