use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use sflab::{run, CliError, Command, Config};

#[derive(Parser)]
#[command(name = "sflab", version, about = "Spectral graph filter experiments")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(clap::Args)]
struct Common {
    /// INI configuration file.
    #[arg(long)]
    config: PathBuf,
    /// Overrides `[experiment] seed`.
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate a synthetic labelled graph dataset.
    Gen(Common),
    /// Slice-wise least-squares errors on random graphs.
    SliceApprox(Common),
    /// Learn target filters from filtered random signals.
    FilterLearn(Common),
    /// Check the slice and construction-error bounds.
    VerifyBounds(Common),
    /// Write propagated features for a dataset.
    Precompute(Common),
    /// Train node classifiers.
    Train(Common),
    /// Evaluate a saved checkpoint.
    Eval(Common),
}

fn init_threads() -> Result<(), CliError> {
    let Ok(v) = std::env::var("SFLAB_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::config(format!("SFLAB_THREADS = '{v}' is not a positive integer")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::config(e.to_string()))
}

fn main_inner(cli: Cli) -> Result<(), CliError> {
    init_threads()?;
    let (command, args) = match cli.command {
        Cmd::Gen(a) => (Command::Gen, a),
        Cmd::SliceApprox(a) => (Command::SliceApprox, a),
        Cmd::FilterLearn(a) => (Command::FilterLearn, a),
        Cmd::VerifyBounds(a) => (Command::VerifyBounds, a),
        Cmd::Precompute(a) => (Command::Precompute, a),
        Cmd::Train(a) => (Command::Train, a),
        Cmd::Eval(a) => (Command::Eval, a),
    };
    let mut cfg = Config::load(&args.config)?;
    if let Some(seed) = args.seed {
        cfg.experiment.seed = seed;
    }
    let result = run(command, &cfg, &args.out)?;
    for note in &result.notes {
        println!("# {note}");
    }
    for row in &result.rows {
        let labels: Vec<String> = row.labels.iter().map(|(k, v)| format!("{k}={v}")).collect();
        println!("{} [{}] {:.6e} +- {:.3e} (n={})", row.name, labels.join(" "), row.mean, row.std, row.values.len());
    }
    println!("wrote {}", args.out.join(format!("{}.json", result.task)).display());
    Ok(())
}

fn main() -> ExitCode {
    match main_inner(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
