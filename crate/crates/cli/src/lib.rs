//! Command-line front end for `gns-core`.
//!
//! Exit status: 0 when the computed check passes, 1 when it fails, 2 for bad
//! input (parse errors, mismatched or oversized channels, I/O), 3 when the
//! numerics refuse (non-Hermitian, not PSD, no convergence).

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use gns_core::RankPolicy;

pub mod commands;
pub mod error;
pub mod files;
pub mod report;

pub use commands::{Kind, DEFAULT_MAX_N};
pub use error::CliError;
pub use files::ChannelFile;
pub use report::{Format, Report, Value};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "gns",
    version,
    about = "Index and GNS-correspondence checks for completely positive maps"
)]
pub struct Cli {
    /// Absolute eigenvalue threshold for numerical rank (default: dim*eps*max(lambda_max, 1)).
    #[arg(long, global = true, value_name = "REAL")]
    pub tol_abs: Option<f64>,

    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a channel file.
    Make {
        #[arg(value_enum)]
        kind: Kind,
        /// Matrix size n.
        n: usize,
        /// Number of Kraus operators (random only).
        count: Option<usize>,
        /// Generator seed (random only, default 0).
        #[arg(long)]
        seed: Option<u64>,
        /// Output path; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compute d(P) from the Kraus span, the Choi matrix and the Gram matrix of F_P.
    Index {
        channel: PathBuf,
        /// Write the report here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare the Gram matrices of F_P and of the corner space, and check rank = d(P).
    #[command(name = "verify-theorem1")]
    VerifyTheorem1 {
        channel: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check that the two-step Gram matrix factors as a permuted Kronecker product.
    VerifyCompose {
        first: PathBuf,
        second: PathBuf,
        /// Largest n accepted (the Gram matrix is n^4 x n^4).
        #[arg(long, default_value_t = DEFAULT_MAX_N)]
        max_n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write the isometry C^d -> F_P and report V*GV - I.
    Witness {
        channel: PathBuf,
        /// Matrix file for the n^2 x d isometry.
        #[arg(long)]
        out: PathBuf,
    },
}

/// Captured result of one invocation.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
    pub report: Option<Report>,
}

impl Outcome {
    fn error(err: &CliError) -> Self {
        Self {
            code: err.exit_code(),
            stdout: String::new(),
            stderr: format!("error: {err}\n"),
            report: None,
        }
    }
}

fn policy(tol_abs: Option<f64>) -> Result<RankPolicy, CliError> {
    match tol_abs {
        Some(t) if !(t.is_finite() && t >= 0.0) => Err(CliError::Input(format!(
            "--tol-abs must be a finite non-negative number, got {t}"
        ))),
        other => Ok(RankPolicy { absolute: other }),
    }
}

fn emit(report: Report, format: Format, out: Option<PathBuf>) -> Result<Outcome, CliError> {
    let text = report.render(format);
    let code = if report.pass { EXIT_PASS } else { EXIT_FAIL };
    let stdout = match out {
        Some(path) => {
            std::fs::write(&path, &text)
                .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))?;
            String::new()
        }
        None => text,
    };
    Ok(Outcome {
        code,
        stdout,
        stderr: String::new(),
        report: Some(report),
    })
}

pub fn execute(cli: Cli) -> Outcome {
    let format = cli.format;
    let result = policy(cli.tol_abs).and_then(|policy| match cli.command {
        Command::Make {
            kind,
            n,
            count,
            seed,
            out,
        } => {
            let file = commands::make(kind, n, count, seed)?;
            let stdout = match out {
                Some(path) => {
                    file.write(&path)?;
                    String::new()
                }
                None => file.render(),
            };
            Ok(Outcome {
                code: EXIT_PASS,
                stdout,
                stderr: String::new(),
                report: None,
            })
        }
        Command::Index { channel, out } => emit(commands::index(&channel, policy)?, format, out),
        Command::VerifyTheorem1 { channel, out } => {
            emit(commands::verify_theorem1(&channel, policy)?, format, out)
        }
        Command::VerifyCompose {
            first,
            second,
            max_n,
            out,
        } => emit(
            commands::verify_compose(&first, &second, policy, max_n)?,
            format,
            out,
        ),
        Command::Witness { channel, out } => emit(
            commands::write_witness(&channel, policy, &out)?,
            format,
            None,
        ),
    });
    result.unwrap_or_else(|e| Outcome::error(&e))
}

/// Parses arguments (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => execute(cli),
        Err(e) => {
            let code = match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    EXIT_PASS
                }
                _ => EXIT_INPUT,
            };
            let rendered = e.render().to_string();
            let (stdout, stderr) = if code == EXIT_PASS {
                (rendered, String::new())
            } else {
                (String::new(), rendered)
            };
            Outcome {
                code,
                stdout,
                stderr,
                report: None,
            }
        }
    }
}
