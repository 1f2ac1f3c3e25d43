use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use stairdim::cli::{deliver, execute, Action, Invocation};
use stairdim::config::OutputFormat;

/// Thermodynamic formalism for conformal iterated function systems:
/// pressure tables, dimension reports, devil's staircases, and
/// Hölder-quotient diagnostics, driven by a JSON configuration file.
#[derive(Parser)]
#[command(name = "stairdim", version, about)]
struct CliArgs {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// JSON run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Override the configured enumeration depth.
    #[arg(long)]
    depth: Option<usize>,
    /// Write the document here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format (default csv, or whatever the config says).
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Check the standing hypotheses of the configured system.
    Validate(Common),
    /// Per-level pressure table of the configured potential (or t*phi).
    Pressure {
        #[command(flatten)]
        common: Common,
        /// Use the potential t*phi instead of the configured one.
        #[arg(long)]
        t: Option<f64>,
    },
    /// The exchange function beta_alpha over a t-grid, anchors included.
    BetaCurve {
        #[command(flatten)]
        common: Common,
        #[arg(long = "t-min")]
        t_min: f64,
        #[arg(long = "t-max")]
        t_max: f64,
        #[arg(long)]
        steps: usize,
    },
    /// delta, the measure dimension, and the non-differentiability
    /// dimension with its per-letter solutions.
    Dimensions(Common),
    /// Devil's-staircase sample of the Gibbs distribution function.
    Staircase {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        level: usize,
    },
    /// Block events and oscillation scores along one coded point.
    ScanPoint {
        #[command(flatten)]
        common: Common,
        /// Point as PREFIX/TAIL, e.g. "0,1/cycle:0,1" or "/const:2".
        #[arg(long)]
        point: Option<String>,
        /// Scan a synthesized point whose block scores stay bounded.
        #[arg(long)]
        synthesize_blocks: bool,
    },
}

fn invocation(common: Common, action: Action) -> Invocation {
    Invocation {
        config: common.config,
        depth: common.depth,
        out: common.out,
        format: common.format.map(|f| match f {
            FormatArg::Csv => OutputFormat::Csv,
            FormatArg::Json => OutputFormat::Json,
        }),
        action,
    }
}

fn main() -> ExitCode {
    let args = CliArgs::parse();
    let invocation = match args.command {
        Command::Validate(common) => invocation(common, Action::Validate),
        Command::Pressure { common, t } => invocation(common, Action::Pressure { t }),
        Command::BetaCurve {
            common,
            t_min,
            t_max,
            steps,
        } => invocation(
            common,
            Action::BetaCurve {
                t_min,
                t_max,
                steps,
            },
        ),
        Command::Dimensions(common) => invocation(common, Action::Dimensions),
        Command::Staircase { common, level } => invocation(common, Action::Staircase { level }),
        Command::ScanPoint {
            common,
            point,
            synthesize_blocks,
        } => invocation(
            common,
            Action::ScanPoint {
                point,
                synthesize: synthesize_blocks,
            },
        ),
    };
    match execute(&invocation).and_then(|execution| deliver(&execution)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error[{}]: {err}", err.class().name());
            ExitCode::from(err.class().exit_code() as u8)
        }
    }
}
