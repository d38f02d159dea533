mod commands;
mod input;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("membership failure: {0}")]
    Membership(String),
    #[error("incomplete: {0}")]
    Incomplete(String),
    #[error("insufficient precision: {0}")]
    Precision(String),
    #[error("check failed: {0}")]
    Check(String),
    #[error("i/o error on {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Check(_) => 1,
            CliError::Incomplete(_) => 2,
            CliError::Precision(_) => 3,
            CliError::Config(_) | CliError::Io { .. } => 64,
            CliError::Membership(_) => 65,
        }
    }
}

impl From<cmforms::error::Error> for CliError {
    fn from(e: cmforms::error::Error) -> Self {
        use cmforms::error::Error as E;
        let msg = e.to_string();
        match e {
            E::Incomplete { .. } | E::Inconclusive { .. } | E::Resource(_) => CliError::Incomplete(msg),
            E::Precision(_) => CliError::Precision(msg),
            E::Invariant(_) => CliError::Check(msg),
            E::NotCoprime(_) => CliError::Membership(msg),
            _ => CliError::Config(msg),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

/// Form class groups over totally real fields as ray class groups of CM-fields.
#[derive(Debug, Parser)]
#[command(name = "cmforms", version)]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Global {
    /// Base field `Q`, `Q(sqrt2)`, `Q(sqrt5)` or `Q(sqrt13)`; checked against the CM-field.
    #[arg(long, global = true)]
    pub field: Option<String>,
    /// Built-in name (gauss, sqrt-23, zeta5, zeta8, sqrt13-i), a JSON file, or inline JSON.
    #[arg(long = "cm-field", global = true)]
    pub cm_field: Option<String>,
    #[arg(short = 'N', long = "level", global = true, default_value_t = 1)]
    pub n: u64,
    #[arg(long = "norm-bound", global = true)]
    pub norm_bound: Option<u64>,
    /// Working precision in bits.
    #[arg(long, global = true, default_value_t = 256)]
    pub prec: usize,
    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    pub json: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Node budget for principality searches.
    #[arg(long, global = true, default_value_t = cmforms::ideals::DEFAULT_BUDGET)]
    pub budget: u64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Computes the form class group and checks it against the ray class group.
    Classgroup {
        /// Also emit a verified Γ₁(N) certificate for every product in the table.
        #[arg(long)]
        verify: bool,
    },
    /// Composes two forms under the transported law.
    Compose { q1: String, q2: String },
    /// Decides equivalence of two forms and returns a certificate.
    FormEquiv { q1: String, q2: String },
    /// Fractional ideal arithmetic.
    Ideal {
        #[command(subcommand)]
        op: IdealOp,
    },
    /// Reflex CM type of a Galois datum.
    Reflex {
        /// File or inline JSON `{order, table, H, T, rho}`, or Z/2, Z/4, Z/2xZ/2.
        #[arg(long)]
        galois: String,
    },
    /// Siegel–Ramachandra invariants and the class polynomial.
    Siegel,
    /// Rechecks the exact invariant setup on every ray class and on random ideals.
    SetupVerify {
        #[arg(long, default_value_t = 8)]
        samples: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum IdealOp {
    Mul { a: String, b: String },
    Inv { a: String },
    Reduce { a: String },
    /// Whether two ideals lie in the same class of `C(N·O_K)`.
    ClassTest { a: String, b: String },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 64 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("cmforms: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
