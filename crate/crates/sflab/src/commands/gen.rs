use std::path::Path;

use rand::Rng;
use rand_distr::StandardNormal;
use serde_json::json;
use sflab_core::{erdos_renyi, Graph, Matrix};

use super::{new_result, stream_rng};
use crate::config::Config;
use crate::dataset::{write_dataset, Dataset, Split};
use crate::error::{CliError, Result};
use crate::result::ExperimentResult;

/// Synthetic labelled graph for `seed`. `csbm` plants the classes in both
/// the edges (`p_in` within, `p_out` across) and the features (a Gaussian
/// class mean scaled by `signal` plus noise); `er` is an unstructured
/// Erdős–Rényi graph with edge probability `p_in`.
pub fn generate_dataset(cfg: &Config, seed: u64) -> Result<Dataset> {
    let g = &cfg.gen;
    if g.classes == 0 {
        return Err(CliError::config("[gen] classes must be positive"));
    }
    let mut rng = stream_rng(seed, 11);
    let labels: Vec<usize> = (0..g.n).map(|_| rng.gen_range(0..g.classes)).collect();
    let graph = match g.kind.as_str() {
        "er" => erdos_renyi(g.n, g.p_in, seed)?,
        _ => {
            let mut edges = Vec::new();
            for i in 0..g.n {
                for j in i + 1..g.n {
                    let p = if labels[i] == labels[j] { g.p_in } else { g.p_out };
                    if rng.gen::<f64>() < p {
                        edges.push((i, j));
                    }
                }
            }
            Graph::new(g.n, edges)?
        }
    };
    let signal = if g.kind == "er" { 0.0 } else { g.signal };
    let means = Matrix::from_fn(g.classes, g.width, |_, _| signal * rng.sample::<f64, _>(StandardNormal));
    let features = Matrix::from_fn(g.n, g.width, |i, j| {
        means.row(labels[i])[j] + g.noise * rng.sample::<f64, _>(StandardNormal)
    });
    Ok(Dataset {
        graph,
        features,
        labels,
        classes: g.classes,
        fixed_splits: g.write_splits.then(|| vec![Split::random(g.n, seed)]),
    })
}

/// Writes a generated dataset into `out`.
pub fn gen(cfg: &Config, out: &Path) -> Result<ExperimentResult> {
    let seed = cfg.experiment.seed;
    let data = generate_dataset(cfg, seed)?;
    write_dataset(out, &data)?;
    let mut result = new_result("gen", cfg, vec![format!("synthetic {} dataset, seed {seed}", cfg.gen.kind)])?;
    result.details = json!({
        "nodes": data.nodes(),
        "edges": data.graph.edge_count(),
        "classes": data.classes,
        "width": data.features.cols(),
        "splits_written": data.fixed_splits.is_some(),
    });
    Ok(result)
}
