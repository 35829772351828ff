//! Trainable models: the MLP, both decoupled trigonometric GNN variants,
//! the linear filter-learning model, Adam and the training loop.

mod checkpoint;
mod filter_learning;
mod loss;
mod mlp;
mod optim;
mod tfgnn;
mod train;

pub use checkpoint::{load_checkpoint, save_checkpoint};
pub use filter_learning::{basis_blocks, filter_learning_model, learn_filter, FilterLearningConfig, FilterLearningResult};
pub use loss::{accuracy, cross_entropy, loss_and_grad, mse, Targets};
pub use mlp::{Layer, LayerGrad, Mlp, MlpCache};
pub use optim::Adam;
pub use tfgnn::{ForwardCache, Gradients, ModelInput, TfgnnModel, Variant};
pub use train::{evaluate, train, EpochRecord, TrainConfig, TrainData, TrainHistory};
