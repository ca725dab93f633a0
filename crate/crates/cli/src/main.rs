mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use algcomm::scalar::parse_rational;
use algcomm::Rational;
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "algcomm", version, about = "Exact runs and lower-bound certificates for algebraic communication protocols")]
pub struct Cli {
    #[command(flatten)]
    pub config: ConfigArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct ConfigArgs {
    /// Master seed for sampling and rank witnesses.
    #[arg(long, global = true, env = "ALGCOMM_SEED", default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[arg(long, global = true, default_value_t = 16)]
    pub max_vars: usize,
    #[arg(long, global = true, default_value_t = 32)]
    pub max_degree: u32,
    #[arg(long, global = true, default_value_t = 8)]
    pub knapsack_cap: usize,
    /// Correctness threshold for probabilistic protocols.
    #[arg(long, global = true, default_value = "2/3", value_parser = parse_threshold)]
    pub threshold: Rational,
    /// Term order: `default` or a comma-separated permutation of 0-based indices.
    #[arg(long, global = true, default_value = "default")]
    pub order: String,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

fn parse_threshold(s: &str) -> Result<Rational, String> {
    let t = parse_rational(s).ok_or_else(|| format!("{s:?} is not a rational"))?;
    if t <= Rational::from_integer(0.into()) || t >= Rational::from_integer(1.into()) {
        return Err("threshold must lie strictly between 0 and 1".into());
    }
    Ok(t)
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Parse and check a protocol file.
    Validate { file: PathBuf },
    /// Run a deterministic protocol on an exact input.
    Run {
        file: PathBuf,
        /// Comma-separated coordinates, e.g. "1,-2/3,0.5" (complex: "1+2i").
        #[arg(long, allow_hyphen_values = true)]
        input: String,
    },
    /// Run a real protocol at a signed infinitesimal point.
    RunInf {
        file: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        signs: String,
        /// Interpret the signs in the XZ frame.
        #[arg(long)]
        xz: bool,
    },
    /// Exact acceptance probability of a family on an input.
    Prob {
        file: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        input: String,
    },
    /// Monte Carlo agreement with a set oracle on Gaussian inputs.
    Mc {
        file: PathBuf,
        /// Set name, or a JSON set descriptor.
        #[arg(long)]
        set: String,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        n_y: Option<usize>,
        #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
        trials: u64,
    },
    /// Built-in protocols.
    Zoo {
        #[command(subcommand)]
        action: ZooAction,
    },
    Certify {
        #[command(subcommand)]
        action: CertifyAction,
    },
    Adversary {
        #[command(subcommand)]
        action: AdversaryAction,
    },
    /// Hyperplane audit of a probabilistic family.
    Audit {
        file: PathBuf,
        #[arg(long, value_enum)]
        target: AuditTarget,
        #[arg(long, default_value_t = 4)]
        trials: usize,
    },
    /// Closed-form determinant of M(l), checked against elimination.
    #[command(name = "detM")]
    DetM {
        #[arg(long, value_delimiter = ',', required = true)]
        l: Vec<u64>,
    },
}

#[derive(Subcommand, Debug)]
pub enum ZooAction {
    /// Print a zoo protocol as JSON.
    Emit {
        name: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        n_y: Option<usize>,
        /// Build over the complex field (arrangement, emptiness, knapsack).
        #[arg(long)]
        complex: bool,
        /// For orthant-prob: sample this many members instead of all.
        #[arg(long)]
        members: Option<usize>,
    },
}

#[derive(Subcommand, Debug)]
pub enum CertifyAction {
    /// Certified Hessian rank of a polynomial.
    Rank {
        /// Polynomial document `{n_x, n_y, terms}`.
        file: Option<PathBuf>,
        /// Expression such as "X1*Y1 + X2*Y2".
        #[arg(long, conflicts_with = "file")]
        poly: Option<String>,
        #[arg(long)]
        n_x: Option<usize>,
        #[arg(long)]
        n_y: Option<usize>,
        #[arg(long, default_value_t = 4)]
        trials: usize,
        /// Also compute the rank over the function field for small matrices.
        #[arg(long)]
        exact: bool,
    },
    /// Rank bound for H(f^m h) with f the inner product.
    Divisor {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: u32,
        #[arg(long, allow_hyphen_values = true)]
        h: String,
        #[arg(long, default_value_t = 4)]
        trials: usize,
    },
}

#[derive(Subcommand, Debug)]
pub enum AdversaryAction {
    /// Search for a fooling pair against a claimed orthant protocol.
    Orthant { file: PathBuf },
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum AuditTarget {
    /// Polyhedron {x_i + y_i > 0}.
    #[value(name = "S", alias = "s")]
    S,
    /// Arrangement of the hyperplanes {x_i + y_i = 0}.
    #[value(name = "R", alias = "r")]
    R,
}

/// Failure of a command, mapped to an exit code.
#[derive(Debug)]
pub enum Failure {
    /// Bad arguments or unreadable input; exit 2.
    Usage(String),
    /// A check ran and did not hold; exit 1.
    Violated(String),
}

impl Failure {
    pub fn usage(e: impl ToString) -> Self {
        Failure::Usage(e.to_string())
    }

    pub fn violated(e: impl ToString) -> Self {
        Failure::Violated(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::dispatch(&cli) {
        Ok(report) => {
            print!("{}", output::render(&report, cli.config.format));
            ExitCode::SUCCESS
        }
        Err(commands::Halt { report, failure }) => {
            if let Some(report) = report {
                print!("{}", output::render(&report, cli.config.format));
            }
            match failure {
                Failure::Usage(m) => {
                    eprintln!("error: {m}");
                    ExitCode::from(2)
                }
                Failure::Violated(m) => {
                    eprintln!("check failed: {m}");
                    ExitCode::from(1)
                }
            }
        }
    }
}
