use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{CliError, Result};

/// One headline metric across seeds.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricRow {
    pub name: String,
    pub labels: BTreeMap<String, String>,
    pub seeds: Vec<u64>,
    pub values: Vec<f64>,
    pub mean: f64,
    /// Sample standard deviation; zero for a single value.
    pub std: f64,
}

impl MetricRow {
    /// Builds a row from `(seed, value)` pairs, sorted by seed.
    pub fn new(name: impl Into<String>, labels: &[(&str, String)], mut per_seed: Vec<(u64, f64)>) -> Self {
        per_seed.sort_by_key(|&(s, _)| s);
        let values: Vec<f64> = per_seed.iter().map(|&(_, v)| v).collect();
        let (mean, std) = mean_std(&values);
        Self {
            name: name.into(),
            labels: labels.iter().map(|(k, v)| (k.to_string(), v.clone())).collect(),
            seeds: per_seed.iter().map(|&(s, _)| s).collect(),
            values,
            mean,
            std,
        }
    }
}

pub fn mean_std(values: &[f64]) -> (f64, f64) {
    if values.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentResult {
    pub task: String,
    /// Header lines: scale substitutions and measurement conventions.
    pub notes: Vec<String>,
    pub config: Value,
    pub rows: Vec<MetricRow>,
    pub details: Value,
    pub wall_clock_seconds: f64,
}

impl ExperimentResult {
    pub fn row(&self, name: &str, labels: &[(&str, &str)]) -> Option<&MetricRow> {
        self.rows
            .iter()
            .find(|r| r.name == name && labels.iter().all(|(k, v)| r.labels.get(*k).map(String::as_str) == Some(*v)))
    }

    /// The document with every wall-clock field removed.
    pub fn without_timing(&self) -> Value {
        let mut v = serde_json::to_value(self).expect("result serializes");
        strip_timing(&mut v);
        v
    }

    pub fn to_csv(&self) -> String {
        let keys: Vec<&String> = {
            let mut k: Vec<&String> = self.rows.iter().flat_map(|r| r.labels.keys()).collect();
            k.sort();
            k.dedup();
            k
        };
        let mut out = String::from("task,metric");
        for k in &keys {
            out.push(',');
            out.push_str(k);
        }
        out.push_str(",seeds,mean,std\n");
        for r in &self.rows {
            out.push_str(&format!("{},{}", self.task, r.name));
            for k in &keys {
                out.push(',');
                out.push_str(r.labels.get(*k).map(String::as_str).unwrap_or(""));
            }
            out.push_str(&format!(",{},{},{}\n", r.values.len(), r.mean, r.std));
        }
        out
    }

    /// Writes `<task>.json` and `<task>.csv` into `dir`.
    pub fn write(&self, dir: &Path) -> Result<(PathBuf, PathBuf)> {
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
        let json = dir.join(format!("{}.json", self.task));
        let csv = dir.join(format!("{}.csv", self.task));
        let mut body = serde_json::to_string_pretty(self)?;
        body.push('\n');
        fs::write(&json, body).map_err(|e| CliError::io(&json, e))?;
        fs::write(&csv, self.to_csv()).map_err(|e| CliError::io(&csv, e))?;
        Ok((json, csv))
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Ok(serde_json::from_str(&text)?)
    }
}

fn strip_timing(v: &mut Value) {
    match v {
        Value::Object(map) => {
            map.retain(|k, _| !k.contains("wall_clock") && !k.ends_with("_seconds"));
            map.values_mut().for_each(strip_timing);
        }
        Value::Array(items) => items.iter_mut().for_each(strip_timing),
        _ => {}
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn statistics() {
        let (m, s) = mean_std(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(m, 2.5);
        assert!((s - (5.0f64 / 3.0).sqrt()).abs() < 1e-15);
        assert_eq!(mean_std(&[7.0]), (7.0, 0.0));
        assert!(mean_std(&[]).0.is_nan());
    }

    #[test]
    fn rows_sorted_by_seed() {
        let r = MetricRow::new("x", &[("basis", "monomial".into())], vec![(3, 0.3), (1, 0.1), (2, 0.2)]);
        assert_eq!(r.seeds, vec![1, 2, 3]);
        assert_eq!(r.values, vec![0.1, 0.2, 0.3]);
    }

    #[test]
    fn timing_fields_are_stripped() {
        let res = ExperimentResult {
            task: "t".into(),
            notes: vec![],
            config: serde_json::json!({"a": 1}),
            rows: vec![],
            details: serde_json::json!({"runs": [{"train_seconds": 1.5, "acc": 0.9}]}),
            wall_clock_seconds: 2.0,
        };
        let v = res.without_timing();
        assert!(v.get("wall_clock_seconds").is_none());
        assert_eq!(v["details"]["runs"][0], serde_json::json!({"acc": 0.9}));
    }
}
