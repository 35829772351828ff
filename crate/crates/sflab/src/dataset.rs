//! Node-classification datasets on disk.
//!
//! A dataset directory holds `edges.tsv` (edge list with a `# nodes: n`
//! header), `features.csv` (one comma-separated row per node),
//! `labels.csv` (`node,label` lines) and optionally `splits.json`, either
//! one `{"train": [...], "val": [...], "test": [...]}` object or a list of
//! them. Without `splits.json`, seeded 60/20/20 splits are drawn.

use std::fs;
use std::io::Write;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sflab_core::{Graph, Matrix};

use crate::error::{CliError, Result};

pub const EDGES_FILE: &str = "edges.tsv";
pub const FEATURES_FILE: &str = "features.csv";
pub const LABELS_FILE: &str = "labels.csv";
pub const SPLITS_FILE: &str = "splits.json";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Split {
    pub train: Vec<usize>,
    pub val: Vec<usize>,
    pub test: Vec<usize>,
}

impl Split {
    /// Seeded 60/20/20 partition of `0..n`; each part is sorted.
    pub fn random(n: usize, seed: u64) -> Self {
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        let n_train = (0.6 * n as f64).round() as usize;
        let n_val = ((0.2 * n as f64).round() as usize).min(n - n_train);
        let mut train = order[..n_train].to_vec();
        let mut val = order[n_train..n_train + n_val].to_vec();
        let mut test = order[n_train + n_val..].to_vec();
        train.sort_unstable();
        val.sort_unstable();
        test.sort_unstable();
        Split { train, val, test }
    }

    /// Rejects out-of-range nodes and nodes shared between masks.
    pub fn validate(&self, n: usize) -> std::result::Result<(), String> {
        let mut seen = vec![false; n];
        for &i in self.train.iter().chain(&self.val).chain(&self.test) {
            if i >= n {
                return Err(format!("node {i} out of range for {n} nodes"));
            }
            if std::mem::replace(&mut seen[i], true) {
                return Err(format!("node {i} appears in more than one mask"));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct Dataset {
    pub graph: Graph,
    pub features: Matrix<f64>,
    pub labels: Vec<usize>,
    pub classes: usize,
    /// Splits read from `splits.json`, if present.
    pub fixed_splits: Option<Vec<Split>>,
}

impl Dataset {
    pub fn nodes(&self) -> usize {
        self.graph.node_count()
    }

    /// `count` splits: the stored ones when the dataset ships splits
    /// (cycled if fewer), otherwise random splits seeded `seed + i`.
    pub fn splits(&self, count: usize, seed: u64) -> Vec<Split> {
        match &self.fixed_splits {
            Some(s) if !s.is_empty() => (0..count).map(|i| s[i % s.len()].clone()).collect(),
            _ => (0..count as u64).map(|i| Split::random(self.nodes(), seed + i)).collect(),
        }
    }

    /// Every node carries the same label.
    pub fn is_single_class(&self) -> bool {
        self.labels.windows(2).all(|w| w[0] == w[1])
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

fn data_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

pub fn load_dataset(dir: &Path) -> Result<Dataset> {
    let edges_path = dir.join(EDGES_FILE);
    let graph = Graph::read_edge_list(read(&edges_path)?.as_bytes()).map_err(|e| {
        let msg = e.to_string();
        let line = msg
            .split_once("line ")
            .and_then(|(_, rest)| rest.split(|c: char| !c.is_ascii_digit()).next())
            .and_then(|d| d.parse().ok())
            .unwrap_or(0);
        CliError::dataset(&edges_path, line, msg)
    })?;
    let n = graph.node_count();

    let feat_path = dir.join(FEATURES_FILE);
    let text = read(&feat_path)?;
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (line, l) in data_lines(&text) {
        let row: std::result::Result<Vec<f64>, _> = l.split(',').map(|v| v.trim().parse::<f64>()).collect();
        let row = row.map_err(|_| CliError::dataset(&feat_path, line, format!("non-numeric value in '{l}'")))?;
        if let Some(first) = rows.first() {
            if row.len() != first.len() {
                return Err(CliError::dataset(
                    &feat_path,
                    line,
                    format!("expected {} columns, found {}", first.len(), row.len()),
                ));
            }
        }
        rows.push(row);
    }
    if rows.len() != n {
        return Err(CliError::dataset(
            &feat_path,
            text.lines().count(),
            format!("{} feature rows for a graph with {n} nodes", rows.len()),
        ));
    }
    let features = Matrix::from_rows(&rows).map_err(|e| CliError::dataset(&feat_path, 0, e.to_string()))?;

    let label_path = dir.join(LABELS_FILE);
    let text = read(&label_path)?;
    let mut labels: Vec<Option<usize>> = vec![None; n];
    for (line, l) in data_lines(&text) {
        let (node, label) = l
            .split_once(',')
            .ok_or_else(|| CliError::dataset(&label_path, line, format!("expected 'node,label', got '{l}'")))?;
        let node: usize = node
            .trim()
            .parse()
            .map_err(|_| CliError::dataset(&label_path, line, format!("bad node id '{}'", node.trim())))?;
        let label: usize = label
            .trim()
            .parse()
            .map_err(|_| CliError::dataset(&label_path, line, format!("bad label '{}'", label.trim())))?;
        if node >= n {
            return Err(CliError::dataset(&label_path, line, format!("node id {node} out of range for {n} nodes")));
        }
        if labels[node].replace(label).is_some() {
            return Err(CliError::dataset(&label_path, line, format!("node {node} labelled twice")));
        }
    }
    let labels: Vec<usize> = labels
        .into_iter()
        .enumerate()
        .map(|(i, l)| l.ok_or_else(|| CliError::dataset(&label_path, 0, format!("node {i} has no label"))))
        .collect::<Result<_>>()?;
    let classes = labels.iter().max().map_or(0, |&m| m + 1);

    let split_path = dir.join(SPLITS_FILE);
    let fixed_splits = if split_path.exists() {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum OneOrMany {
            One(Split),
            Many(Vec<Split>),
        }
        let parsed: OneOrMany = serde_json::from_str(&read(&split_path)?)
            .map_err(|e| CliError::dataset(&split_path, e.line(), e.to_string()))?;
        let splits = match parsed {
            OneOrMany::One(s) => vec![s],
            OneOrMany::Many(v) => v,
        };
        for (i, s) in splits.iter().enumerate() {
            s.validate(n).map_err(|m| CliError::dataset(&split_path, 0, format!("split {i}: {m}")))?;
        }
        Some(splits)
    } else {
        None
    };

    Ok(Dataset {
        graph,
        features,
        labels,
        classes,
        fixed_splits,
    })
}

/// Writes `dataset` in the directory layout read by [`load_dataset`].
pub fn write_dataset(dir: &Path, dataset: &Dataset) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let write = |name: &str, body: &[u8]| -> Result<()> {
        let path = dir.join(name);
        let mut f = fs::File::create(&path).map_err(|e| CliError::io(&path, e))?;
        f.write_all(body).map_err(|e| CliError::io(&path, e))
    };
    let mut edges = Vec::new();
    dataset.graph.write_edge_list(&mut edges)?;
    write(EDGES_FILE, &edges)?;

    let mut feats = String::new();
    for i in 0..dataset.features.rows() {
        let row: Vec<String> = dataset.features.row(i).iter().map(|v| v.to_string()).collect();
        feats.push_str(&row.join(","));
        feats.push('\n');
    }
    write(FEATURES_FILE, feats.as_bytes())?;

    let labels: String = dataset.labels.iter().enumerate().map(|(i, l)| format!("{i},{l}\n")).collect();
    write(LABELS_FILE, labels.as_bytes())?;

    let split_path = dir.join(SPLITS_FILE);
    match &dataset.fixed_splits {
        Some(s) => write(SPLITS_FILE, serde_json::to_string_pretty(s)?.as_bytes())?,
        None if split_path.exists() => fs::remove_file(&split_path).map_err(|e| CliError::io(&split_path, e))?,
        None => {}
    }
    Ok(())
}
