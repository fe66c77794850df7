//! Command-line front end: property-check suites, bracket evaluation,
//! structure-matrix emission, reduction checks and flow runs.
//!
//! Global `--seed`, `--tol` and `--fd-step` flags apply to every
//! subcommand; a JSON file named by the `GLPOISSON_CONFIG` environment
//! variable supplies defaults underneath the flags.

use crate::brackets::{structure_matrix, BracketSpec};
use crate::error::{Error, Result};
use crate::fields::MatrixField;
use crate::flows::{integrate, trajectory_to_csv, FlowConfig};
use crate::matcore::SquareMatrix;
use crate::rmat::{apply_r_part, RMatrixKind, RPart};
use crate::suites::{run_all, run_reduce_check, run_suite, RunConfig, SuiteReport};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use std::path::{Path, PathBuf};

#[derive(Parser, Debug)]
#[command(
    name = "glpoisson",
    version,
    about = "r-matrix Poisson brackets on gl(n,R): checks, flows and reductions"
)]
pub struct Cli {
    /// RNG seed for randomized suites.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Residual tolerance override (suites resolve their own defaults).
    #[arg(long, global = true)]
    tol: Option<f64>,

    /// Central-difference step override.
    #[arg(long = "fd-step", global = true)]
    fd_step: Option<f64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run a named verification suite and report pass/fail.
    Check {
        /// One of: mcybe, jacobi, hierarchy, lie-derivative, proposition,
        /// lemma, theorem, tangency, all.
        suite: String,
        /// Matrix dimension (each suite resolves its own default).
        #[arg(long)]
        n: Option<usize>,
        /// Number of random trials.
        #[arg(long)]
        trials: Option<usize>,
        /// Report format.
        #[arg(long, value_enum)]
        format: Option<FormatArg>,
    },
    /// Apply an r-matrix operator to a matrix file.
    Rmat {
        #[command(subcommand)]
        cmd: RmatCmd,
    },
    /// Evaluate brackets and structure matrices on gl(n,R).
    Bracket {
        #[command(subcommand)]
        cmd: BracketCmd,
    },
    /// Cotangent-bundle reduction checks.
    Reduce {
        #[command(subcommand)]
        cmd: ReduceCmd,
    },
    /// Integrate Lax flows.
    Flow {
        #[command(subcommand)]
        cmd: FlowCmd,
    },
}

#[derive(Subcommand, Debug)]
enum RmatCmd {
    /// Apply R, R' or R'' (or a symmetric/antisymmetric part) to a matrix.
    Apply {
        #[arg(long, value_enum)]
        kind: KindArg,
        #[arg(long, value_enum, default_value = "full")]
        part: PartArg,
        /// Input matrix (.json or .csv).
        #[arg(long)]
        input: PathBuf,
        /// Output path; stdout when omitted.
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
enum BracketCmd {
    /// Print {f,h} at a point as a decimal scalar.
    Eval {
        #[arg(long)]
        degree: u8,
        #[arg(long, value_enum, default_value = "qu")]
        rkind: KindArg,
        /// Field descriptor: hk:<k>, coord:<i>,<j> (1-based) or lin:<path>.
        #[arg(long)]
        f: String,
        #[arg(long)]
        h: String,
        /// Evaluation point (.json or .csv matrix).
        #[arg(long)]
        at: PathBuf,
    },
    /// Emit the n^2 x n^2 structure matrix as JSON with index metadata.
    Structure {
        #[arg(long)]
        degree: u8,
        #[arg(long, value_enum, default_value = "qu")]
        rkind: KindArg,
        #[arg(long)]
        at: PathBuf,
    },
}

#[derive(Subcommand, Debug)]
enum ReduceCmd {
    /// Compare the reduced bracket at (1_n, L) against the direct bracket.
    Check {
        #[arg(long)]
        degree: u8,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long, value_enum)]
        format: Option<FormatArg>,
    },
    /// Check the slice relations for invariant extensions.
    Lemma {
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long, value_enum)]
        format: Option<FormatArg>,
    },
}

#[derive(Subcommand, Debug)]
enum FlowCmd {
    /// Integrate dL/dt = [R(L^k), L] with RK4 and log invariants.
    Run {
        #[arg(long, value_enum, default_value = "qu")]
        rkind: KindArg,
        #[arg(long, default_value_t = 1)]
        k: u32,
        #[arg(long, default_value_t = 1e-3)]
        dt: f64,
        /// Final time.
        #[arg(long = "t", default_value_t = 10.0)]
        t_end: f64,
        /// Initial matrix (.json or .csv).
        #[arg(long)]
        init: PathBuf,
        /// CSV output path; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Log every this many steps.
        #[arg(long, default_value_t = 100)]
        stride: usize,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum KindArg {
    Qu,
    Prime,
    Skew,
}

impl From<KindArg> for RMatrixKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Qu => RMatrixKind::Qu,
            KindArg::Prime => RMatrixKind::Prime,
            KindArg::Skew => RMatrixKind::Skew,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum PartArg {
    Full,
    A,
    S,
}

impl From<PartArg> for RPart {
    fn from(p: PartArg) -> Self {
        match p {
            PartArg::Full => RPart::Full,
            PartArg::A => RPart::Antisymmetric,
            PartArg::S => RPart::Symmetric,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    #[default]
    Json,
    Csv,
}

/// Defaults loaded from the file named by `GLPOISSON_CONFIG`.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    n: Option<usize>,
    seed: Option<u64>,
    tol: Option<f64>,
    fd_step: Option<f64>,
    trials: Option<usize>,
    format: Option<String>,
}

impl FileConfig {
    fn load() -> Result<Self> {
        match std::env::var_os("GLPOISSON_CONFIG") {
            None => Ok(Self::default()),
            Some(path) => {
                let text = std::fs::read_to_string(&path)?;
                serde_json::from_str(&text).map_err(|e| {
                    Error::Parse(format!(
                        "bad config file {}: {e}",
                        Path::new(&path).display()
                    ))
                })
            }
        }
    }

    fn format(&self) -> Result<Option<FormatArg>> {
        match self.format.as_deref() {
            None => Ok(None),
            Some("json") => Ok(Some(FormatArg::Json)),
            Some("csv") => Ok(Some(FormatArg::Csv)),
            Some(other) => Err(Error::Parse(format!("unknown output format {other:?}"))),
        }
    }
}

/// Parses a CLI field descriptor; indices are 1-based on the wire.
pub fn parse_field_spec(spec: &str) -> Result<MatrixField> {
    if let Some(k) = spec.strip_prefix("hk:") {
        let k: u32 = k
            .parse()
            .map_err(|_| Error::Parse(format!("bad trace power {spec:?}")))?;
        if k == 0 {
            return Err(Error::Parse("trace power index must be >= 1".into()));
        }
        return Ok(MatrixField::trace_power(k));
    }
    if let Some(indices) = spec.strip_prefix("coord:") {
        let (i, j) = indices
            .split_once(',')
            .ok_or_else(|| Error::Parse(format!("expected coord:<i>,<j>, got {spec:?}")))?;
        let i: usize = i
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad row index in {spec:?}")))?;
        let j: usize = j
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad column index in {spec:?}")))?;
        if i == 0 || j == 0 {
            return Err(Error::Parse("coordinate indices are 1-based".into()));
        }
        return Ok(MatrixField::coordinate(i - 1, j - 1));
    }
    if let Some(path) = spec.strip_prefix("lin:") {
        let a = SquareMatrix::from_path(Path::new(path))?;
        return Ok(MatrixField::linear_pair(a));
    }
    Err(Error::Parse(format!(
        "unknown field descriptor {spec:?}; expected hk:<k>, coord:<i>,<j> or lin:<path>"
    )))
}

fn write_or_print(path: Option<&Path>, content: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, content)?,
        None => print!("{content}"),
    }
    Ok(())
}

fn emit_report(report: &SuiteReport, format: FormatArg) -> Result<i32> {
    match format {
        FormatArg::Json => println!("{}", serde_json::to_string_pretty(report)?),
        FormatArg::Csv => print!("{}", report.to_csv()),
    }
    Ok(if report.pass { 0 } else { 1 })
}

/// Parses arguments from the environment, executes, and returns the
/// process exit code: 0 on pass, 1 on a failed check, 2 on errors.
pub fn run() -> i32 {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

fn execute(cli: Cli) -> Result<i32> {
    let file = FileConfig::load()?;
    let file_format = file.format()?;
    let config = RunConfig {
        n: None,
        seed: cli.seed.or(file.seed).unwrap_or(0),
        tol: cli.tol.or(file.tol),
        fd_step: cli.fd_step.or(file.fd_step),
        trials: None,
    };

    match cli.command {
        Command::Check {
            suite,
            n,
            trials,
            format,
        } => {
            let config = RunConfig {
                n: n.or(file.n),
                trials: trials.or(file.trials),
                ..config
            };
            let format = format.or(file_format).unwrap_or_default();
            if suite == "all" {
                let reports = run_all(&config)?;
                let pass = reports.iter().all(|r| r.pass);
                match format {
                    FormatArg::Json => println!("{}", serde_json::to_string_pretty(&reports)?),
                    FormatArg::Csv => {
                        for report in &reports {
                            print!("{}", report.to_csv());
                        }
                    }
                }
                Ok(if pass { 0 } else { 1 })
            } else {
                let report = run_suite(&suite, &config)?;
                emit_report(&report, format)
            }
        }
        Command::Rmat {
            cmd:
                RmatCmd::Apply {
                    kind,
                    part,
                    input,
                    output,
                },
        } => {
            let x = SquareMatrix::from_path(&input)?;
            let result = apply_r_part(kind.into(), part.into(), &x);
            write_or_print(output.as_deref(), &(result.to_json() + "\n"))?;
            Ok(0)
        }
        Command::Bracket { cmd } => match cmd {
            BracketCmd::Eval {
                degree,
                rkind,
                f,
                h,
                at,
            } => {
                let spec = BracketSpec::new(degree, rkind.into())?;
                let f = parse_field_spec(&f)?;
                let h = parse_field_spec(&h)?;
                let l = SquareMatrix::from_path(&at)?;
                println!("{}", spec.evaluate(&f, &h, &l)?);
                Ok(0)
            }
            BracketCmd::Structure { degree, rkind, at } => {
                let spec = BracketSpec::new(degree, rkind.into())?;
                let l = SquareMatrix::from_path(&at)?;
                let sm = structure_matrix(spec, &l)?;
                let n = sm.n();
                let labels: Vec<String> = (0..n * n)
                    .map(|flat| format!("L{}_{}", flat / n + 1, flat % n + 1))
                    .collect();
                let payload = serde_json::json!({
                    "n": n,
                    "degree": degree,
                    "rkind": RMatrixKind::from(rkind),
                    "index_order": "row-major: coordinate L_ij maps to flat index (i-1)*n + (j-1)",
                    "labels": labels,
                    "entries": sm.rows(),
                });
                println!("{}", serde_json::to_string_pretty(&payload)?);
                Ok(0)
            }
        },
        Command::Reduce { cmd } => match cmd {
            ReduceCmd::Check {
                degree,
                n,
                trials,
                format,
            } => {
                let config = RunConfig {
                    n: n.or(file.n),
                    trials: trials.or(file.trials),
                    ..config
                };
                let report = run_reduce_check(degree, &config)?;
                emit_report(&report, format.or(file_format).unwrap_or_default())
            }
            ReduceCmd::Lemma { n, trials, format } => {
                let config = RunConfig {
                    n: n.or(file.n),
                    trials: trials.or(file.trials),
                    ..config
                };
                let report = run_suite("lemma", &config)?;
                emit_report(&report, format.or(file_format).unwrap_or_default())
            }
        },
        Command::Flow {
            cmd:
                FlowCmd::Run {
                    rkind,
                    k,
                    dt,
                    t_end,
                    init,
                    out,
                    stride,
                },
        } => {
            let l0 = SquareMatrix::from_path(&init)?;
            let config = FlowConfig::new(rkind.into(), k, dt, t_end)?.with_stride(stride);
            let traj = integrate(&config, &l0)?;
            write_or_print(out.as_deref(), &trajectory_to_csv(&traj))?;
            Ok(0)
        }
    }
}
