use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod config;
mod csvout;
mod experiments;

/// Batch experiment runner for Gaussian measures on affine subspaces, the
/// Gaussian Radon transform, and support-theorem pipelines.
///
/// Exit codes: 0 success, 2 config error, 3 proof-step failure, 4 numeric
/// tolerance failure.
#[derive(Parser)]
#[command(name = "gaussradon", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct RunArgs {
    /// Experiment config file (JSON)
    #[arg(long)]
    config: PathBuf,
    /// Override the config's master seed
    #[arg(long)]
    seed: Option<u64>,
    /// Override the output directory
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Draw samples from an affine Gaussian measure
    #[command(name = "sample")]
    Sample(RunArgs),
    /// Evaluate the Gaussian Radon transform over one hyperplane
    #[command(name = "transform")]
    Transform(RunArgs),
    /// Check the disintegration identity (full transform vs nested slices)
    #[command(name = "disintegrate")]
    Disintegrate(RunArgs),
    /// Recover a point value along a shrinking sequence of affine subspaces
    #[command(name = "recover")]
    Recover(RunArgs),
    /// Estimate complement tail mass along an adapted sequence
    #[command(name = "tails")]
    Tails(RunArgs),
    /// Run the end-to-end support-theorem experiment
    #[command(name = "support")]
    Support(RunArgs),
    /// Planar line-grid support sanity check
    #[command(name = "helgason2d")]
    Helgason2d(RunArgs),
    /// Brownian moment checks for the Wiener instance
    #[command(name = "wiener-sanity")]
    WienerSanity(RunArgs),
    /// List registered norm models, functionals, bodies, and path functionals
    #[command(name = "list")]
    List,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (kind, args) = match cli.command {
        Command::List => {
            print!("{}", experiments::list());
            return ExitCode::SUCCESS;
        }
        Command::Sample(a) => ("sample", a),
        Command::Transform(a) => ("transform", a),
        Command::Disintegrate(a) => ("disintegrate", a),
        Command::Recover(a) => ("recover", a),
        Command::Tails(a) => ("tails", a),
        Command::Support(a) => ("support", a),
        Command::Helgason2d(a) => ("helgason2d", a),
        Command::WienerSanity(a) => ("wiener-sanity", a),
    };
    match experiments::run(kind, &args.config, args.seed, args.out) {
        Ok(outcome) => {
            println!("{}", outcome.summary);
            ExitCode::SUCCESS
        }
        Err(err) => {
            let report = serde_json::json!({
                "error": err.kind(),
                "experiment": kind,
                "message": err.message(),
                "exit_code": err.exit_code(),
            });
            eprintln!("{report}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
