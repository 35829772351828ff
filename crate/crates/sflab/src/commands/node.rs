use std::path::{Path, PathBuf};

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;
use sflab_core::model::{
    evaluate, load_checkpoint, save_checkpoint, train as fit, Mlp, ModelInput, Targets, TfgnnModel, TrainConfig,
    TrainData, Variant,
};
use sflab_core::{feature_file_len, normalized_laplacian, precompute as propagate, save_features, CsrMatrix, PropagatedFeatures};

use super::{new_result, pi_multiple, stream_rng};
use crate::config::Config;
use crate::dataset::{load_dataset, Dataset, Split};
use crate::error::{CliError, Result};
use crate::result::{ExperimentResult, MetricRow};

pub const CHECKPOINT_FILE: &str = "model.ckpt";

/// Metadata stored next to the weights in a checkpoint.
#[derive(Debug, Serialize, Deserialize)]
struct CheckpointEcho {
    seed: u64,
    split: Split,
    order: usize,
    omega: f64,
    degree: usize,
    hidden: usize,
}

/// Laplacian and, for the large variant, the propagated features.
struct Inputs {
    lap: CsrMatrix<f64>,
    feats: Option<PropagatedFeatures<f64>>,
}

impl Inputs {
    fn new(data: &Dataset, variant: Variant, degree: usize) -> Result<Self> {
        let lap = normalized_laplacian::<f64>(&data.graph);
        let feats = match variant {
            Variant::Large => Some(propagate(&lap, &data.features, degree)?),
            Variant::Medium => None,
        };
        Ok(Self { lap, feats })
    }

    fn model_input<'a>(&'a self, data: &'a Dataset) -> ModelInput<'a, f64> {
        match &self.feats {
            Some(f) => ModelInput::Precomputed(f),
            None => ModelInput::Graph {
                laplacian: &self.lap,
                features: &data.features,
            },
        }
    }
}

struct RunOutcome {
    val_accuracy: f64,
    test_accuracy: f64,
    best_epoch: usize,
    model: TfgnnModel<f64>,
}

fn train_config(cfg: &Config, seed: u64) -> TrainConfig {
    let t = &cfg.train;
    TrainConfig {
        learning_rate: t.learning_rate,
        weight_decay: t.weight_decay,
        dropout: t.dropout,
        max_epochs: t.max_epochs,
        patience: t.patience,
        seed,
        decay_filter: t.decay_filter,
        orders: t.orders.clone(),
        omegas: t.omegas.clone(),
        degree: t.degree,
    }
}

#[allow(clippy::too_many_arguments)]
fn run_once(
    cfg: &Config,
    data: &Dataset,
    inputs: &Inputs,
    variant: Variant,
    split: &Split,
    order: usize,
    omega: f64,
    seed: u64,
) -> Result<RunOutcome> {
    let mut rng = stream_rng(seed, 31);
    let dims = [data.features.cols(), cfg.train.hidden, data.classes];
    let mlp = Mlp::new(&dims, cfg.train.dropout, &mut rng)?;
    let mut model = TfgnnModel::new(variant, mlp, order, omega, cfg.train.degree)?;
    let input = inputs.model_input(data);
    let targets = Targets::Labels(&data.labels);
    let train_data = TrainData {
        input,
        targets,
        train: &split.train,
        val: &split.val,
    };
    let history = fit(&mut model, &train_data, &train_config(cfg, rng.gen()))?;
    let (_, test) = evaluate(&model, input, targets, &split.test)?;
    Ok(RunOutcome {
        val_accuracy: history.best_val_accuracy.unwrap_or(f64::NAN),
        test_accuracy: test.unwrap_or(f64::NAN),
        best_epoch: history.best_epoch,
        model,
    })
}

/// Per-run seed for split `i`, initialization `j`.
fn run_seed(base: u64, i: usize, j: usize) -> u64 {
    base.wrapping_mul(1_000_003).wrapping_add((i * 1000 + j) as u64)
}

/// Node classification: grid search of (K, ω) on the first split by
/// validation accuracy, then splits × inits runs at the chosen point.
pub fn train(cfg: &Config, out: &Path) -> Result<ExperimentResult> {
    let data = load_dataset(cfg.dataset_path()?)?;
    let variant = cfg.variant()?;
    let t = &cfg.train;
    if t.splits == 0 || t.inits == 0 || t.orders.is_empty() || t.omegas.is_empty() {
        return Err(CliError::config("[train] splits, inits, orders and omegas must be non-empty"));
    }
    let seed = cfg.experiment.seed;
    let splits = data.splits(t.splits, seed);
    let inputs = Inputs::new(&data, variant, t.degree)?;

    let grid: Vec<(usize, f64)> = t.orders.iter().flat_map(|&k| t.omegas.iter().map(move |&w| (k, w))).collect();
    let (order, omega, grid_scores) = if grid.len() == 1 {
        (grid[0].0, grid[0].1, Vec::new())
    } else {
        let scores: Vec<f64> = grid
            .par_iter()
            .map(|&(k, w)| run_once(cfg, &data, &inputs, variant, &splits[0], k, w, run_seed(seed, 0, 0)).map(|r| r.val_accuracy))
            .collect::<Result<_>>()?;
        let best = (0..grid.len()).fold(0, |b, i| if scores[i] > scores[b] { i } else { b });
        (grid[best].0, grid[best].1, scores)
    };

    let runs: Vec<(usize, usize)> = (0..t.splits).flat_map(|i| (0..t.inits).map(move |j| (i, j))).collect();
    let outcomes: Vec<RunOutcome> = runs
        .par_iter()
        .map(|&(i, j)| run_once(cfg, &data, &inputs, variant, &splits[i], order, omega, run_seed(seed, i, j)))
        .collect::<Result<_>>()?;

    let echo = CheckpointEcho {
        seed,
        split: splits[0].clone(),
        order,
        omega,
        degree: t.degree,
        hidden: t.hidden,
    };
    std::fs::create_dir_all(out).map_err(|e| CliError::io(out, e))?;
    save_checkpoint(&outcomes[0].model, &serde_json::to_string(&echo)?, out.join(CHECKPOINT_FILE))?;

    let single_class = data.is_single_class();
    let mut notes = vec![
        format!(
            "node classification: {} nodes, {} classes, {} splits x {} initializations, 60/20/20 splits",
            data.nodes(),
            data.classes,
            t.splits,
            t.inits
        ),
        "grid search covers the order K and base frequency omega only; learning rate, weight decay and dropout are fixed".into(),
    ];
    if data.fixed_splits.is_some() {
        notes.push("splits read from the dataset directory".into());
    }
    if single_class {
        notes.push("degenerate dataset: every node has the same label".into());
    }
    let mut result = new_result("train", cfg, notes)?;
    let labels = [
        ("variant", variant.name().to_string()),
        ("order", order.to_string()),
        ("omega", pi_multiple(omega)),
    ];
    let pick = |f: fn(&RunOutcome) -> f64| runs.iter().enumerate().map(|(r, _)| (r as u64, f(&outcomes[r]))).collect();
    result.rows.push(MetricRow::new("test_accuracy", &labels, pick(|o| o.test_accuracy)));
    result.rows.push(MetricRow::new("val_accuracy", &labels, pick(|o| o.val_accuracy)));
    result.details = json!({
        "order": order,
        "omega": omega,
        "degenerate_single_class": single_class,
        "grid": grid.iter().zip(&grid_scores).map(|(&(k, w), s)| json!({"order": k, "omega": w, "val_accuracy": s})).collect::<Vec<_>>(),
        "runs": runs.iter().zip(&outcomes).map(|(&(i, j), o)| json!({
            "split": i, "init": j, "best_epoch": o.best_epoch,
            "val_accuracy": o.val_accuracy, "test_accuracy": o.test_accuracy,
        })).collect::<Vec<_>>(),
        "checkpoint": CHECKPOINT_FILE,
    });
    Ok(result)
}

/// Writes `[X, L X, …, L^D X]` for the dataset to `<out>/<file>`.
pub fn precompute(cfg: &Config, out: &Path) -> Result<ExperimentResult> {
    let data = load_dataset(cfg.dataset_path()?)?;
    let degree = cfg.precompute.degree;
    let feats = propagate(&normalized_laplacian::<f64>(&data.graph), &data.features, degree)?;
    std::fs::create_dir_all(out).map_err(|e| CliError::io(out, e))?;
    let path = out.join(&cfg.precompute.file);
    save_features(&feats, &path)?;
    let bytes = std::fs::metadata(&path).map_err(|e| CliError::io(&path, e))?.len();
    let mut result = new_result("precompute", cfg, vec![format!("propagated features up to degree {degree}")])?;
    result.details = json!({
        "file": cfg.precompute.file,
        "nodes": data.nodes(),
        "width": data.features.cols(),
        "degree": degree,
        "bytes": bytes,
        "expected_bytes": feature_file_len(data.nodes(), data.features.cols(), degree),
    });
    Ok(result)
}

/// Test accuracy of a saved checkpoint on the split it was trained with.
pub fn eval(cfg: &Config, out: &Path) -> Result<ExperimentResult> {
    let data = load_dataset(cfg.dataset_path()?)?;
    let path: PathBuf = cfg.eval.checkpoint.clone().unwrap_or_else(|| out.join(CHECKPOINT_FILE));
    let (model, echo) = load_checkpoint::<f64>(&path)?;
    let echo: CheckpointEcho = serde_json::from_str(&echo)?;
    if model.mlp.input_width() != data.features.cols() || model.mlp.output_width() != data.classes {
        return Err(CliError::Data(format!(
            "checkpoint expects {} features and {} classes, dataset has {} and {}",
            model.mlp.input_width(),
            model.mlp.output_width(),
            data.features.cols(),
            data.classes
        )));
    }
    echo.split
        .validate(data.nodes())
        .map_err(|m| CliError::Data(format!("checkpoint split: {m}")))?;
    let inputs = Inputs::new(&data, model.variant, model.degree())?;
    let targets = Targets::Labels(&data.labels);
    let (loss, acc) = evaluate(&model, inputs.model_input(&data), targets, &echo.split.test)?;
    let (_, val) = evaluate(&model, inputs.model_input(&data), targets, &echo.split.val)?;
    let mut result = new_result("eval", cfg, vec![format!("checkpoint evaluated on its training split ({} test nodes)", echo.split.test.len())])?;
    let labels = [
        ("variant", model.variant.name().to_string()),
        ("order", echo.order.to_string()),
        ("omega", pi_multiple(echo.omega)),
    ];
    result.rows.push(MetricRow::new("test_accuracy", &labels, vec![(echo.seed, acc.unwrap_or(f64::NAN))]));
    result.rows.push(MetricRow::new("val_accuracy", &labels, vec![(echo.seed, val.unwrap_or(f64::NAN))]));
    result.details = json!({ "test_loss": loss, "degree": echo.degree, "hidden": echo.hidden });
    Ok(result)
}
