//! The `sflab` subcommands. Each returns an [`ExperimentResult`]; [`run`]
//! times the command and writes the result files.

use std::path::Path;
use std::str::FromStr;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::config::Config;
use crate::error::{CliError, Result};
use crate::result::ExperimentResult;

mod gen;
mod node;
mod spectral;

pub use gen::{gen, generate_dataset};
pub use node::{eval, precompute, train, CHECKPOINT_FILE};
pub use spectral::{filter_learn, slice_approx, verify_bounds};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Gen,
    SliceApprox,
    FilterLearn,
    VerifyBounds,
    Precompute,
    Train,
    Eval,
}

impl Command {
    pub const ALL: [Command; 7] = [
        Command::Gen,
        Command::SliceApprox,
        Command::FilterLearn,
        Command::VerifyBounds,
        Command::Precompute,
        Command::Train,
        Command::Eval,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Gen => "gen",
            Command::SliceApprox => "slice-approx",
            Command::FilterLearn => "filter-learn",
            Command::VerifyBounds => "verify-bounds",
            Command::Precompute => "precompute",
            Command::Train => "train",
            Command::Eval => "eval",
        }
    }
}

impl FromStr for Command {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        Command::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| CliError::config(format!("unknown command '{s}'")))
    }
}

/// Runs `command`, stamps the wall-clock time and writes
/// `<out>/<task>.json` and `<out>/<task>.csv`.
pub fn run(command: Command, cfg: &Config, out: &Path) -> Result<ExperimentResult> {
    let start = Instant::now();
    let mut result = match command {
        Command::Gen => gen(cfg, out)?,
        Command::SliceApprox => slice_approx(cfg)?,
        Command::FilterLearn => filter_learn(cfg)?,
        Command::VerifyBounds => verify_bounds(cfg)?,
        Command::Precompute => precompute(cfg, out)?,
        Command::Train => train(cfg, out)?,
        Command::Eval => eval(cfg, out)?,
    };
    result.wall_clock_seconds = start.elapsed().as_secs_f64();
    result.write(out)?;
    Ok(result)
}

/// Independent random stream `stream` for experiment seed `seed`.
pub(crate) fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

pub(crate) fn new_result(task: &str, cfg: &Config, notes: Vec<String>) -> Result<ExperimentResult> {
    Ok(ExperimentResult {
        task: task.to_string(),
        notes,
        config: serde_json::to_value(cfg)?,
        rows: Vec::new(),
        details: serde_json::Value::Null,
        wall_clock_seconds: 0.0,
    })
}

pub(crate) fn pi_multiple(x: f64) -> String {
    format!("{:.4}pi", x / std::f64::consts::PI)
}
