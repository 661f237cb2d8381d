//! The `hydra` command line: load a map spec, run one analysis, print a report.

mod commands;
mod report;

use std::ops::RangeInclusive;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hydra_numen::{ErrorKind, Place};

pub use commands::dispatch;
pub use report::{format_report, Report, SCHEMA_VERSION};

#[derive(Debug, Parser)]
#[command(name = "hydra", version, about = "Numen, cycle and Fourier reports for Hydra maps")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Solve,
    Estimate,
}

#[derive(Debug, Args)]
pub struct MapArg {
    /// Map-spec JSON file.
    #[arg(long = "map")]
    pub path: PathBuf,
}

#[derive(Debug, Args)]
pub struct Bounds {
    #[arg(long, default_value_t = 10_000)]
    pub max_steps: usize,
    /// Orbits leaving `|x| <= escape` are reported as escaped.
    #[arg(long = "escape", default_value_t = 1e18)]
    pub escape: f64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classification and convergence guarantees.
    Analyze {
        #[command(flatten)]
        map: MapArg,
        #[arg(long, value_delimiter = ',', default_value = "inf", value_parser = parse_place)]
        places: Vec<Place>,
    },
    /// Forward orbit of one integer.
    Orbit {
        #[command(flatten)]
        map: MapArg,
        #[arg(long, allow_hyphen_values = true)]
        start: i64,
        #[command(flatten)]
        bounds: Bounds,
    },
    /// Cycles reached from a range of starts.
    Cycles {
        #[command(flatten)]
        map: MapArg,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_range)]
        range: RangeInclusive<i64>,
        #[command(flatten)]
        bounds: Bounds,
    },
    /// Values of the numen.
    Numen {
        #[command(flatten)]
        map: MapArg,
        /// Integer argument; nonnegative unless `--depth` is given.
        #[arg(long, allow_hyphen_values = true, conflicts_with = "at_rational")]
        at: Option<String>,
        /// Rational p-adic integer argument.
        #[arg(long, allow_hyphen_values = true)]
        at_rational: Option<String>,
        /// Evaluate the depth-N truncation instead.
        #[arg(long)]
        depth: Option<u32>,
        #[arg(long, value_parser = parse_place)]
        place: Option<Place>,
    },
    /// Characteristic function table.
    Charfn {
        #[command(flatten)]
        map: MapArg,
        #[arg(long, value_parser = parse_place)]
        place: Place,
        #[arg(long, default_value_t = 1)]
        level: u32,
        #[arg(long, value_enum, default_value_t = Method::Solve)]
        method: Method,
        #[arg(long, default_value_t = 18)]
        depth: u32,
        /// Archimedean sample points.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        grid: Vec<f64>,
        #[arg(long)]
        force: bool,
        #[arg(long)]
        allow_large: bool,
    },
    /// Residue distribution mod q^n by Fourier inversion.
    Dist {
        #[command(flatten)]
        map: MapArg,
        #[arg(long, value_parser = parse_place)]
        place: Place,
        #[arg(long, default_value_t = 1)]
        exponent: u32,
        #[arg(long)]
        compare_empirical: bool,
        #[arg(long, default_value_t = 20)]
        depth: u32,
        #[arg(long)]
        allow_large: bool,
    },
    /// Cycle certificates through the numen and the reverse string scan.
    Correspond {
        #[command(flatten)]
        map: MapArg,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_range, default_value = "-100:100")]
        range: RangeInclusive<i64>,
        #[arg(long, value_parser = parse_place)]
        place: Option<Place>,
        #[arg(long, default_value_t = 12)]
        max_len: usize,
        #[command(flatten)]
        bounds: Bounds,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Analyze { .. } => "analyze",
            Command::Orbit { .. } => "orbit",
            Command::Cycles { .. } => "cycles",
            Command::Numen { .. } => "numen",
            Command::Charfn { .. } => "charfn",
            Command::Dist { .. } => "dist",
            Command::Correspond { .. } => "correspond",
        }
    }
}

fn parse_place(s: &str) -> Result<Place, String> {
    s.parse().map_err(|e: hydra_numen::Error| e.to_string())
}

/// `A:B`, inclusive.
pub fn parse_range(s: &str) -> Result<RangeInclusive<i64>, String> {
    let (a, b) = s.split_once(':').ok_or_else(|| format!("expected A:B, got {s:?}"))?;
    let a: i64 = a.trim().parse().map_err(|_| format!("bad range start {a:?}"))?;
    let b: i64 = b.trim().parse().map_err(|_| format!("bad range end {b:?}"))?;
    if a > b {
        return Err(format!("empty range {s}"));
    }
    Ok(a..=b)
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] hydra_numen::Error),
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("{0}")]
    Usage(String),
    #[error("cannot format report: {0}")]
    Format(String),
}

impl CliError {
    /// 2 spec error, 3 failed precondition, 4 resource guard, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) => match e.kind() {
                ErrorKind::Spec => 2,
                ErrorKind::Precondition => 3,
                ErrorKind::Resource => 4,
                ErrorKind::Other => 1,
            },
            CliError::Io { .. } | CliError::Usage(_) => 2,
            CliError::Format(_) => 1,
        }
    }
}

/// Parses, dispatches and formats; returns the text to print.
pub fn run(cli: &Cli) -> Result<String, CliError> {
    let report = dispatch(&cli.command)?;
    format_report(&report, cli.format)
}
