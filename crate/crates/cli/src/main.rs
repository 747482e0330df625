mod analyze;
mod config;
mod expand;
mod render;
mod sweep;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};
use serde::Serialize;

pub use config::{CliError, RunConfig};

pub const GRAMMAR: &str = "\
POLYNOMIAL GRAMMAR (one variable t, whitespace ignored):
    poly  := ['+'|'-'] term (('+'|'-') term)*
    term  := coeff ['*'] power | coeff | power
    coeff := uint ['/' uint] | '(' ['+'|'-'] uint ['/' uint] ')'
    power := 't' ['^' uint]
Examples: \"t^4 + t^2 + t\", \"t^8 - t^7 - 3/4 t^6 + 7/2*t^5\", \"(-1/2)t^2 + 1\".

EXIT CODES:
    0  success
    1  other failure (missing data, I/O)
    2  parse error (command line, polynomial text, transcript file)
    3  invalid input polynomial (odd degree, square, non-square lead, ...)
    4  internal invariant violation

ENVIRONMENT:
    PELLCF_THREADS    worker count for sweeps and the parallel analyses
    PELLCF_CACHE_DIR  directory for cached transcripts and the default sweep store";

#[derive(Parser, Debug)]
#[command(
    name = "pellcf",
    version,
    about = "Exact continued fractions of sqrt(D(t)) over the rationals",
    after_long_help = GRAMMAR
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Expand sqrt(D) and write a resumable JSON-lines transcript.
    Expand(expand::ExpandArgs),
    /// Run one analysis on a polynomial or a stored transcript.
    #[command(subcommand)]
    Analyze(analyze::AnalyzeCommand),
    /// Coefficients of the Laurent series of sqrt(D) at infinity.
    Series(analyze::SeriesArgs),
    /// Expand a one-parameter family over a grid, appending to a result store.
    Sweep(sweep::SweepArgs),
    /// Print the man page (roff) to standard output.
    Man,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    #[default]
    Table,
    Gnuplot,
}

/// Where the radicand comes from.
#[derive(Args, Debug, Clone, Default)]
pub struct InputArgs {
    /// Radicand D(t) as text (see the grammar in --help).
    #[arg(long, short = 'p', allow_hyphen_values = true)]
    pub poly: Option<String>,
    /// File holding the radicand text.
    #[arg(long, conflicts_with = "poly")]
    pub poly_file: Option<PathBuf>,
    /// Stored transcript to analyze instead of expanding.
    #[arg(long, conflicts_with_all = ["poly", "poly_file"])]
    pub transcript: Option<PathBuf>,
    /// Last record index N (records 0..=N). Default 100, or the length of
    /// the transcript.
    #[arg(long, short = 'n')]
    pub steps: Option<usize>,
    /// Work with the monic radicand E(u) = D(u + shift) / lead(D) that has no
    /// u^(2d-1) term. Reports, probes and transcripts then refer to u.
    #[arg(long, conflicts_with = "transcript")]
    pub normalize: bool,
}

#[derive(Args, Debug, Clone)]
pub struct OutputArgs {
    #[arg(long, short = 'f', value_enum, default_value_t = Format::Table)]
    pub format: Format,
    /// Write the report here instead of standard output.
    #[arg(long, short = 'o')]
    pub out: Option<PathBuf>,
    /// Directory for cached transcripts.
    #[arg(long, env = "PELLCF_CACHE_DIR")]
    pub cache_dir: Option<PathBuf>,
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Expand(args) => expand::run(args),
        Command::Analyze(cmd) => analyze::run(cmd),
        Command::Series(args) => analyze::run_series(args),
        Command::Sweep(args) => sweep::run(args),
        Command::Man => {
            let man = clap_mangen::Man::new(Cli::command());
            man.render(&mut std::io::stdout())
                .map_err(|e| CliError::Io("stdout".into(), e))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    // Sizes the pool used by the parallel analyses; sweeps build their own.
    if let Some(n) = std::env::var("PELLCF_THREADS").ok().and_then(|v| v.trim().parse::<usize>().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
