use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::loss::{accuracy, loss_and_grad, Targets};
use crate::model::optim::Adam;
use crate::model::tfgnn::{ModelInput, TfgnnModel};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub learning_rate: f64,
    pub weight_decay: f64,
    pub dropout: f64,
    pub max_epochs: usize,
    /// Epochs without validation improvement before stopping.
    pub patience: usize,
    pub seed: u64,
    /// Apply weight decay to α and β as well.
    pub decay_filter: bool,
    /// Grid of truncation orders K.
    pub orders: Vec<usize>,
    /// Grid of base frequencies ω.
    pub omegas: Vec<f64>,
    /// Taylor degree D.
    pub degree: usize,
}

impl Default for TrainConfig {
    fn default() -> Self {
        let pi = std::f64::consts::PI;
        Self {
            learning_rate: 0.01,
            weight_decay: 5e-4,
            dropout: 0.5,
            max_epochs: 1000,
            patience: 200,
            seed: 0,
            decay_filter: false,
            orders: vec![2, 4, 6, 8, 10, 15, 20],
            omegas: vec![0.2 * pi, 0.3 * pi, 0.5 * pi, 0.7 * pi],
            degree: 10,
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct TrainData<'a, T> {
    pub input: ModelInput<'a, T>,
    pub targets: Targets<'a, T>,
    pub train: &'a [usize],
    pub val: &'a [usize],
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EpochRecord {
    pub epoch: usize,
    pub train_loss: f64,
    pub val_loss: f64,
    pub val_accuracy: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrainHistory {
    pub epochs: Vec<EpochRecord>,
    pub best_epoch: usize,
    pub best_val_loss: f64,
    pub best_val_accuracy: Option<f64>,
    pub stopped_early: bool,
}

/// Loss and (for classification) accuracy on `rows` without dropout.
pub fn evaluate<T: Scalar>(
    model: &TfgnnModel<T>,
    input: ModelInput<'_, T>,
    targets: Targets<'_, T>,
    rows: &[usize],
) -> Result<(f64, Option<f64>)> {
    let out = model.predict(input)?;
    let (loss, _) = loss_and_grad(&out, targets, rows)?;
    let acc = match targets {
        Targets::Labels(labels) => Some(accuracy(&out, labels, rows)),
        Targets::Values(_) => None,
    };
    Ok((loss.f64(), acc))
}

fn epoch_seed(seed: u64, epoch: usize) -> u64 {
    seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(epoch as u64)
}

/// Full-batch Adam training with early stopping on the validation set.
/// Classification selects by validation accuracy (ties broken by lower
/// loss), regression by validation loss. The best snapshot is restored.
pub fn train<T: Scalar>(model: &mut TfgnnModel<T>, data: &TrainData<'_, T>, config: &TrainConfig) -> Result<TrainHistory> {
    let mut adam = Adam::new(T::c(config.learning_rate), T::c(config.weight_decay));
    let classification = data.targets.is_classification();
    let mut best = model.clone();
    let mut history = TrainHistory {
        epochs: Vec::new(),
        best_epoch: 0,
        best_val_loss: f64::INFINITY,
        best_val_accuracy: None,
        stopped_early: false,
    };
    let mut since_best = 0usize;
    for epoch in 0..config.max_epochs {
        let (out, cache) = model.forward(data.input, true, epoch_seed(config.seed, epoch))?;
        let (loss, grad) = loss_and_grad(&out, data.targets, data.train)?;
        if !loss.is_finite() {
            return Err(Error::DivergenceDetected { epoch, loss: loss.f64() });
        }
        let grads = model.backward(Some(&cache), data.input, &grad)?;
        let g = grads.groups();
        let (params, is_filter) = model.parameter_groups();
        let decay: Vec<bool> = is_filter.iter().map(|&f| !f || config.decay_filter).collect();
        adam.update(params, &g, &decay);

        let (val_loss, val_acc) = evaluate(model, data.input, data.targets, data.val)?;
        history.epochs.push(EpochRecord {
            epoch,
            train_loss: loss.f64(),
            val_loss,
            val_accuracy: val_acc,
        });
        let improved = if classification {
            let acc = val_acc.unwrap_or(0.0);
            let best_acc = history.best_val_accuracy.unwrap_or(-1.0);
            acc > best_acc || (acc == best_acc && val_loss < history.best_val_loss)
        } else {
            val_loss < history.best_val_loss
        };
        if improved {
            history.best_epoch = epoch;
            history.best_val_loss = val_loss;
            history.best_val_accuracy = val_acc;
            best = model.clone();
            since_best = 0;
        } else {
            since_best += 1;
            if since_best >= config.patience {
                history.stopped_early = true;
                break;
            }
        }
    }
    if !history.epochs.is_empty() {
        *model = best;
    }
    Ok(history)
}
