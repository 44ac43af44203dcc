//! `lateral`: command-line front end for Delta-Notch network analysis.
//!
//! JSON goes to stdout, errors go to stderr as
//! `{"error": {"kind": ..., "message": ...}}` with a nonzero exit code.

mod commands;
mod render;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] lateral::Error),

    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },

    #[error("{0}")]
    Usage(String),
}

impl CliError {
    fn kind(&self) -> &'static str {
        use lateral::Error as E;
        match self {
            CliError::Io { .. } => "io",
            CliError::Usage(_) => "usage",
            CliError::Core(e) => match e {
                E::MalformedGraph(_) => "malformed-graph",
                E::EmptyGraph => "empty-graph",
                E::CellOutOfRange { .. } => "cell-out-of-range",
                E::SelfLoop(_) => "self-loop",
                E::DuplicateEdge(..) => "duplicate-edge",
                E::Disconnected { .. } => "disconnected",
                E::InvalidGenerator(_) => "invalid-generator",
                E::InvalidThreshold(_) => "invalid-threshold",
                E::DimensionMismatch { .. } => "dimension-mismatch",
                E::InvalidState(_) => "invalid-state",
                E::InvalidSubspace(_) => "invalid-subspace",
                E::LimitExceeded { .. } => "limit-exceeded",
                E::NotFixedPoint(_) => "not-fixed-point",
                E::NotTrapSpace(_) => "not-trap-space",
                E::Unsupported(_) => "unsupported",
                E::Precondition(_) => "precondition",
                E::WitnessReplay { .. } => "witness-replay",
            },
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Core(lateral::Error::LimitExceeded { .. }) => {
                format!("{self}; raise it with --limit or LATERAL_LIMIT")
            }
            CliError::Core(lateral::Error::Disconnected { .. }) => {
                format!("{self}; pass --allow-disconnected to analyse it anyway")
            }
            _ => self.to_string(),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

#[derive(Parser, Debug)]
#[command(name = "lateral", version, about = "Boolean Delta-Notch lateral inhibition on cell graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Model {
    Full,
    Reduced,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Out {
    Json,
    Dot,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BasinModeArg {
    Weak,
    Strong,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum VarsArg {
    Notch,
    Delta,
    Both,
}

/// Options shared by every analysis subcommand.
#[derive(Args, Debug)]
pub struct Common {
    /// Graph document: {"L": n, "edges": [[i, j], ...]}, 1-based.
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long, value_enum, default_value_t = Model::Full)]
    pub model: Model,
    /// Notch activation threshold.
    #[arg(long, default_value_t = 1)]
    pub k: usize,
    /// Largest state-space dimension explored exhaustively.
    #[arg(long, env = "LATERAL_LIMIT")]
    pub limit: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Accept graphs with several connected components.
    #[arg(long)]
    pub allow_disconnected: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print a generated graph document.
    Gen {
        #[command(subcommand)]
        shape: Shape,
    },
    /// List the stable patterns.
    FixedPoints {
        #[command(flatten)]
        common: Common,
    },
    /// Check, enumerate or construct trap spaces.
    TrapSpaces(commands::TrapSpacesArgs),
    /// Patterns or states reachable from a state.
    Reach(commands::ReachArgs),
    /// Weak or strong basin of a pattern.
    Basins(commands::BasinsArgs),
    /// Perturb a pattern and report the outcome.
    Perturb(commands::PerturbArgs),
    /// Export the asynchronous state transition graph.
    Stg {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = Out::Json)]
        out: Out,
    },
    /// Verify that the threshold energy decreases along every transition of
    /// the reduced network.
    EnergyCheck {
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Subcommand, Debug)]
pub enum Shape {
    Path {
        #[arg(long)]
        cells: usize,
    },
    Cycle {
        #[arg(long)]
        cells: usize,
    },
    Grid {
        #[arg(long)]
        rows: usize,
        #[arg(long)]
        cols: usize,
    },
    Hexgrid {
        #[arg(long)]
        rows: usize,
        #[arg(long)]
        cols: usize,
    },
}

/// What a subcommand produced.
pub enum Output {
    Json(serde_json::Value),
    Text(String),
}

fn run(cli: Cli) -> CliResult<(Output, Format)> {
    let json = Format::Json;
    Ok(match cli.command {
        Command::Gen { shape } => (commands::generate(shape)?, json),
        Command::FixedPoints { common } => (commands::fixed_points(&common)?, common.format),
        Command::TrapSpaces(args) => (commands::trap_spaces(&args)?, args.common.format),
        Command::Reach(args) => (commands::reach(&args)?, args.common.format),
        Command::Basins(args) => (commands::basins(&args)?, args.common.format),
        Command::Perturb(args) => (commands::perturb(&args)?, args.common.format),
        Command::Stg { common, out } => (commands::stg(&common, out)?, common.format),
        Command::EnergyCheck { common } => (commands::energy_check(&common)?, common.format),
    })
}

fn report(kind: &str, message: &str) {
    let doc = json!({ "error": { "kind": kind, "message": message } });
    eprintln!("{doc}");
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            report("usage", e.render().to_string().trim());
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok((Output::Text(text), _)) => {
            print!("{text}");
            if !text.ends_with('\n') {
                println!();
            }
            ExitCode::SUCCESS
        }
        Ok((Output::Json(value), Format::Json)) => {
            println!("{}", serde_json::to_string_pretty(&value).expect("JSON values serialize"));
            ExitCode::SUCCESS
        }
        Ok((Output::Json(value), Format::Table)) => {
            print!("{}", render::table(&value));
            ExitCode::SUCCESS
        }
        Err(e) => {
            report(e.kind(), &e.message());
            ExitCode::FAILURE
        }
    }
}
