//! Curve files, command dispatch, reports and lattice diagrams for the
//! `valbasis` command-line tool.

pub mod commands;
pub mod diagram;
pub mod error;
pub mod format;

use std::path::PathBuf;
use std::str::FromStr;

use clap::{Parser, Subcommand};
use valbasis_core::ValueVector;

pub use commands::{run, Command, Options, Target};
pub use error::CliError;
pub use format::{parse_curve_file, render_curve_file, CurveFile, IdealGenerator};

#[derive(Debug, Parser)]
#[command(name = "valbasis", version, about = "Standard bases and value semirings of algebroid curves")]
pub struct Cli {
    #[command(subcommand)]
    pub command: CliCommand,
    /// Emit JSON with sorted keys instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Minimum working precision on every branch.
    #[arg(long, global = true, value_name = "N")]
    pub precision: Option<i64>,
    /// Bound for the basis algorithms, e.g. `31,31`.
    #[arg(long, global = true, value_name = "V1,...,VR", allow_hyphen_values = true)]
    pub rho: Option<String>,
    /// Also write the diagram as SVG.
    #[arg(long, global = true, value_name = "FILE")]
    pub svg: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum CliCommand {
    /// Minimal standard basis, value semiring generators and conductor.
    RingBasis { file: PathBuf },
    /// Standard basis and value semimodule of the fractional ideal in the file.
    IdealBasis { file: PathBuf },
    /// Standard basis and value semimodule of the Kähler differentials.
    Kahler { file: PathBuf },
    /// Decides membership of a value vector, e.g. `25,inf`.
    Member {
        #[arg(allow_hyphen_values = true)]
        gamma: String,
        file: PathBuf,
        /// The value set to query.
        #[arg(long, value_enum, default_value = "ring")]
        of: Target,
    },
    /// Plots the value semiring of a two-branch curve.
    Diagram {
        file: PathBuf,
        /// Upper corner of the box, e.g. `31,31`; defaults to the conductor.
        #[arg(long = "box", value_name = "A,B")]
        corner: Option<String>,
    },
}

fn vector(text: &str, what: &str) -> Result<ValueVector, CliError> {
    ValueVector::from_str(text).map_err(|e| CliError::Argument(format!("{} `{}`: {}", what, text, e)))
}

fn read(path: &PathBuf) -> Result<CurveFile, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_curve_file(&text)
}

/// Runs a parsed command line, returning the report.
pub fn execute(cli: &Cli) -> Result<String, CliError> {
    let opts = Options {
        json: cli.json,
        precision: cli.precision,
        rho: cli.rho.as_deref().map(|r| vector(r, "rho")).transpose()?,
        svg: cli.svg.clone(),
    };
    let (command, path) = match &cli.command {
        CliCommand::RingBasis { file } => (Command::RingBasis, file),
        CliCommand::IdealBasis { file } => (Command::IdealBasis, file),
        CliCommand::Kahler { file } => (Command::Kahler, file),
        CliCommand::Member { gamma, file, of } => (
            Command::Member {
                gamma: vector(gamma, "value vector")?,
                target: *of,
            },
            file,
        ),
        CliCommand::Diagram { file, corner } => {
            let corner = match corner {
                None => None,
                Some(c) => {
                    let v = vector(c, "box corner")?;
                    match (v.len(), v.get(0).finite(), v.get(v.len() - 1).finite()) {
                        (2, Some(a), Some(b)) => Some((a, b)),
                        _ => return Err(CliError::Semantic(format!("box corner `{}` needs two finite entries", c))),
                    }
                }
            };
            (Command::Diagram { corner }, file)
        }
    };
    let file = read(path)?;
    run(&command, &file, &opts)
}
