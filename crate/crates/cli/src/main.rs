//! `lnat`: command-line front end for exact L♮-convex epigraph tools.
//!
//! Exit codes: 0 on success, 1 when a checked property fails (the report
//! carries the witness), 2 on usage, parse or validation errors.

mod commands;
mod instance;
mod report;

use std::fmt::Display;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use lnat::{parse_rational, Rational};

use report::Status;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("cannot read {0}: {1}")]
    Io(String, std::io::Error),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("validation error in `{field}`: {msg}")]
    Validation { field: String, msg: String },
    #[error("usage error: {0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] lnat::Error),
}

impl CliError {
    pub fn validation(field: &str, msg: impl Display) -> Self {
        CliError::Validation { field: field.into(), msg: msg.to_string() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "lnat", version, about = "Exact cutting planes and hulls for L-natural-convex epigraphs")]
struct Cli {
    /// Report format; `json` mirrors the text report field by field.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Add display-only decimal approximations next to exact values.
    #[arg(long, global = true)]
    decimal: bool,
    /// Seed for randomized commands.
    #[arg(long, default_value_t = 0, global = true)]
    seed: u64,
    /// Worker threads for randomized commands.
    #[arg(long, default_value_t = 1, global = true, value_parser = clap::value_parser!(u16).range(1..))]
    jobs: u16,
    #[command(subcommand)]
    command: Command,
}

fn rat_arg(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|_| format!("invalid rational {s:?}"))
}

fn int_arg(s: &str) -> Result<i64, String> {
    s.trim().parse().map_err(|_| format!("invalid integer {s:?}"))
}

fn index_arg(s: &str) -> Result<usize, String> {
    s.trim().parse().map_err(|_| format!("invalid index {s:?}"))
}

/// An arc `j-k`.
fn arc_arg(s: &str) -> Result<(usize, usize), String> {
    let (j, k) = s.split_once('-').ok_or_else(|| format!("invalid arc {s:?}, expected j-k"))?;
    Ok((index_arg(j)?, index_arg(k)?))
}

/// A row of a 0/1 matrix, e.g. `1100`.
fn row_arg(s: &str) -> Result<Vec<u8>, String> {
    s.trim()
        .chars()
        .map(|c| match c {
            '0' => Ok(0),
            '1' => Ok(1),
            _ => Err(format!("invalid matrix entry {c:?}")),
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PropertyArg {
    /// Discrete midpoint convexity (L♮-convexity).
    Lnat,
    LatticeSubmodular,
    TranslationSubmodular,
    LConvex,
    IntegrallyConvex,
}

/// A cube `(p, delta)`; `delta` is 1-based.
#[derive(Debug, Clone, clap::Args)]
pub struct CubeArgs {
    #[arg(long, value_delimiter = ',', value_parser = int_arg, allow_hyphen_values = true)]
    p: Vec<i64>,
    #[arg(long, value_delimiter = ',', value_parser = index_arg)]
    delta: Vec<usize>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the canonical serialization of an instance file.
    Fmt {
        file: PathBuf,
        /// Exit 1 if the file is not already canonical.
        #[arg(long)]
        check: bool,
    },
    /// Check a structural property on the (work)box; exit 1 with a witness on failure.
    Check {
        #[arg(long, value_enum, default_value_t = PropertyArg::Lnat)]
        property: PropertyArg,
        file: PathBuf,
    },
    /// Greedy epigraph inequalities.
    #[command(subcommand)]
    Sepi(SepiCmd),
    /// Cutting-plane minimization of `c_w f(x) + c_x.x` over the workbox.
    Minimize {
        file: PathBuf,
        #[arg(long, value_parser = rat_arg, allow_hyphen_values = true)]
        cw: Rational,
        #[arg(long, value_delimiter = ',', value_parser = rat_arg, allow_hyphen_values = true)]
        cx: Vec<Rational>,
    },
    /// The integer mixing set.
    #[command(subcommand)]
    Mixing(MixingCmd),
    /// Joint epigraphs of several functions.
    #[command(subcommand)]
    Joint(JointCmd),
    /// Mixed-integer inequalities for `max_i h^i(x) - y_i`.
    #[command(subcommand)]
    Misepi(MisepiCmd),
    /// Randomized comparison against brute-force references.
    #[command(subcommand)]
    Oracle(OracleCmd),
}

#[derive(Debug, Subcommand)]
enum SepiCmd {
    /// Most violated inequality at `(x, w)`.
    Separate {
        file: PathBuf,
        #[arg(long, value_delimiter = ',', value_parser = rat_arg, allow_hyphen_values = true)]
        x: Vec<Rational>,
        #[arg(long, value_parser = rat_arg, allow_hyphen_values = true)]
        w: Rational,
    },
    /// All distinct inequalities over the workbox, plus its bounds.
    Hull { file: PathBuf },
}

#[derive(Debug, Subcommand)]
enum MixingCmd {
    /// The mixing index set `K` selected by a cube.
    Buildk {
        file: PathBuf,
        #[command(flatten)]
        cube: CubeArgs,
    },
    /// Compare a cube's inequality with its mixing inequality; exit 1 if they differ.
    Roundtrip {
        file: PathBuf,
        #[command(flatten)]
        cube: CubeArgs,
    },
}

#[derive(Debug, Subcommand)]
enum JointCmd {
    /// Violated cuts for every function at a shared cube.
    Separate {
        file: PathBuf,
        #[command(flatten)]
        point: JointPointArgs,
    },
    /// Hull membership, cross-checked against enumeration; exit 1 on disagreement.
    Member {
        file: PathBuf,
        #[command(flatten)]
        point: JointPointArgs,
    },
}

#[derive(Debug, Clone, clap::Args)]
pub struct JointPointArgs {
    #[arg(long, value_delimiter = ',', value_parser = rat_arg, allow_hyphen_values = true)]
    w: Vec<Rational>,
    #[arg(long, value_delimiter = ',', value_parser = rat_arg, allow_hyphen_values = true)]
    x: Vec<Rational>,
    /// Values of the linked functions (linked instances only).
    #[arg(long, value_delimiter = ',', value_parser = rat_arg, allow_hyphen_values = true)]
    eta: Option<Vec<Rational>>,
}

/// Weights given directly or as a 0/1 matrix `B` with `u = B^{-1} 1`.
#[derive(Debug, Clone, clap::Args)]
pub struct WeightArgs {
    #[arg(long, value_parser = rat_arg, default_value = "1")]
    u0: Rational,
    #[arg(long, value_delimiter = ',', value_parser = rat_arg, conflicts_with = "matrix")]
    u: Option<Vec<Rational>>,
    /// Rows of `B`, e.g. `1100,1010,1001,0111`; the support is its leading indices.
    #[arg(long, value_delimiter = ',', value_parser = row_arg)]
    matrix: Option<Vec<Vec<u8>>>,
}

#[derive(Debug, Subcommand)]
enum MisepiCmd {
    /// Most violated inequality with `u0 = 1` at `(w, y, x)`.
    Separate {
        file: PathBuf,
        #[arg(long, value_parser = rat_arg, allow_hyphen_values = true)]
        w: Rational,
        /// Defaults to zero.
        #[arg(long, value_delimiter = ',', value_parser = rat_arg, allow_hyphen_values = true)]
        y: Option<Vec<Rational>>,
        #[arg(long, value_delimiter = ',', value_parser = rat_arg, allow_hyphen_values = true)]
        x: Vec<Rational>,
    },
    /// All distinct inequalities over the finite weight family and workbox.
    Hull { file: PathBuf },
    /// Build an inequality and certify it as a facet; exit 1 if the rank check fails.
    Facet {
        file: PathBuf,
        #[command(flatten)]
        weights: WeightArgs,
        #[command(flatten)]
        cube: CubeArgs,
    },
    /// Cycle inequalities and their weight/cube representation; exit 1 on mismatch.
    Cycle {
        file: PathBuf,
        /// 1-based arcs `j-k,...`; defaults to the cycles in the file.
        #[arg(long, value_delimiter = ',', value_parser = arc_arg)]
        arcs: Option<Vec<(usize, usize)>>,
    },
    /// Cutting-plane minimization of `c_w w + c_y.y + c_x.x`.
    Minimize {
        file: PathBuf,
        #[arg(long, value_parser = rat_arg, allow_hyphen_values = true)]
        cw: Rational,
        #[arg(long, value_delimiter = ',', value_parser = rat_arg, allow_hyphen_values = true)]
        cy: Vec<Rational>,
        #[arg(long, value_delimiter = ',', value_parser = rat_arg, allow_hyphen_values = true)]
        cx: Vec<Rational>,
    },
}

#[derive(Debug, Subcommand)]
enum OracleCmd {
    /// Compare the exact routines with enumeration on random queries; exit 1 on a mismatch.
    Compare {
        file: PathBuf,
        #[arg(long, default_value_t = 20)]
        trials: usize,
    },
}

fn read(path: &PathBuf) -> Result<String, CliError> {
    let name = path.display().to_string();
    if name == "-" {
        let mut s = String::new();
        std::io::Read::read_to_string(&mut std::io::stdin(), &mut s).map_err(|e| CliError::Io(name, e))?;
        return Ok(s);
    }
    std::fs::read_to_string(path).map_err(|e| CliError::Io(name, e))
}

fn load(path: &PathBuf) -> Result<instance::Instance, CliError> {
    instance::parse_instance(&read(path)?)
}

fn run(cli: &Cli) -> Result<report::Report, CliError> {
    use commands as c;
    let opts = c::Options { seed: cli.seed, jobs: cli.jobs as usize };
    match &cli.command {
        Command::Fmt { file, check } => {
            let text = read(file)?;
            let canon = instance::to_canonical(&instance::parse_instance(&text)?.file);
            Ok(c::fmt(&text, &canon, *check))
        }
        Command::Check { property, file } => c::check(&load(file)?, *property),
        Command::Sepi(SepiCmd::Separate { file, x, w }) => c::sepi_separate(&load(file)?, x, w),
        Command::Sepi(SepiCmd::Hull { file }) => c::sepi_hull(&load(file)?),
        Command::Minimize { file, cw, cx } => c::minimize(&load(file)?, cw, cx),
        Command::Mixing(MixingCmd::Buildk { file, cube }) => c::mixing_buildk(&load(file)?, cube),
        Command::Mixing(MixingCmd::Roundtrip { file, cube }) => c::mixing_roundtrip(&load(file)?, cube),
        Command::Joint(JointCmd::Separate { file, point }) => c::joint_separate(&load(file)?, point),
        Command::Joint(JointCmd::Member { file, point }) => c::joint_member(&load(file)?, point),
        Command::Misepi(MisepiCmd::Separate { file, w, y, x }) => c::misepi_separate(&load(file)?, w, y.as_deref(), x),
        Command::Misepi(MisepiCmd::Hull { file }) => c::misepi_hull(&load(file)?),
        Command::Misepi(MisepiCmd::Facet { file, weights, cube }) => c::misepi_facet(&load(file)?, weights, cube),
        Command::Misepi(MisepiCmd::Cycle { file, arcs }) => c::misepi_cycle(&load(file)?, arcs.as_deref()),
        Command::Misepi(MisepiCmd::Minimize { file, cw, cy, cx }) => c::misepi_minimize(&load(file)?, cw, cy, cx),
        Command::Oracle(OracleCmd::Compare { file, trials }) => c::oracle_compare(&load(file)?, *trials, &opts),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(rep) => {
            match cli.format {
                Format::Text => print!("{}", rep.to_text(cli.decimal)),
                Format::Json => println!("{}", serde_json::to_string_pretty(&rep.to_json(cli.decimal)).expect("json")),
            }
            match rep.status {
                Status::Ok => ExitCode::SUCCESS,
                Status::Fail => ExitCode::from(1),
            }
        }
        Err(e) => {
            match cli.format {
                Format::Text => eprintln!("error: {e}"),
                Format::Json => {
                    let v = serde_json::json!({ "status": "error", "error": e.to_string() });
                    println!("{}", serde_json::to_string_pretty(&v).expect("json"));
                }
            }
            ExitCode::from(2)
        }
    }
}
