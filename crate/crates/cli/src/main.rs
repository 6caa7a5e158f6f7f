//! `graph-influence` command-line driver.
//!
//! Every subcommand accepts either explicit flags or `--manifest <file>`
//! (a manifest written by an earlier run) and writes its resolved manifest
//! next to its primary output as `<stem>.manifest.json`.
//!
//! Exit codes: 0 success, 1 data or validation error, 2 usage error.

mod commands;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::*;

/// Environment variable naming the directory for outputs when `--out` is
/// not given.
pub const OUT_DIR_ENV: &str = "GRAPH_INFLUENCE_OUT_DIR";

#[derive(Parser, Debug)]
#[command(name = "graph-influence", version, about = "Influence estimation on neighborhood graphs")]
struct Cli {
    /// Cap on worker threads (1 forces serial execution).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a k-NN graph from a feature CSV and write it as an edge list.
    BuildGraph(BuildGraphArgs),
    /// High-pass filter a node signal and score nodes by influence.
    Influence(InfluenceArgs),
    /// Graph Fourier spectrum of a node signal.
    Spectrum(SpectrumArgs),
    /// Select prototypes and criticisms with the MMD node function.
    Prototypes(PrototypesArgs),
    /// Rank samples by how likely their label was flipped.
    NoisyLabels(NoisyLabelsArgs),
    /// Samples closest to a model's decision boundary in latent space.
    Confusing(ConfusingArgs),
    /// Compare flagged and unflagged samples by MMD or KDE influence.
    Adversarial(AdversarialArgs),
    /// Choose a labelling budget of nodes from an embedding signal.
    Sample(SampleArgs),
    /// Flip a fraction of binary labels per class.
    CorruptLabels(CorruptLabelsArgs),
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => e.exit(),
    };
    if let Some(n) = cli.threads {
        if n == 0 {
            eprintln!("error: --threads must be at least 1");
            return ExitCode::from(2);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    let result = match cli.command {
        Command::BuildGraph(a) => execute(a),
        Command::Influence(a) => execute(a),
        Command::Spectrum(a) => execute(a),
        Command::Prototypes(a) => execute(a),
        Command::NoisyLabels(a) => execute(a),
        Command::Confusing(a) => execute(a),
        Command::Adversarial(a) => execute(a),
        Command::Sample(a) => execute(a),
        Command::CorruptLabels(a) => execute(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}\n\nRun with --help for usage.");
            ExitCode::from(2)
        }
        Err(CliError::Data(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
