//! INI experiment configuration.
//!
//! Every key is optional and falls back to the documented default. Unknown
//! sections or keys are rejected so typos do not silently run the defaults.
//! Angles accept a `pi` suffix (`0.3pi`, `pi`).

use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use ini::Ini;
use serde::Serialize;
use sflab_core::model::Variant;
use sflab_core::{Basis, TargetFilter};

use crate::error::{CliError, Result};

#[derive(Clone, Debug, Serialize)]
pub struct ExperimentSection {
    /// First seed; seed `i` of a sweep is `seed + i`.
    pub seed: u64,
    pub seeds: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct GraphSection {
    pub n: usize,
    pub p: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ApproximationSection {
    pub filters: Vec<String>,
    pub bases: Vec<String>,
    pub degree: usize,
    /// Order K of the trigonometric basis.
    pub order: usize,
    pub omega: f64,
    /// Degrees swept by `slice-approx` in addition to `degree`.
    pub degree_sweep: Vec<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct FilterLearningSection {
    pub width: usize,
    /// `random` (uniform in [-1, 1]) or `zero`.
    pub features: String,
    pub epochs: usize,
    pub learning_rates: Vec<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundsSection {
    pub filters: Vec<String>,
    pub sizes: Vec<usize>,
    pub degrees: Vec<usize>,
    pub basis: String,
    pub p: f64,
    pub width: usize,
    pub outputs: usize,
    pub radius: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct DatasetSection {
    pub path: Option<PathBuf>,
}

#[derive(Clone, Debug, Serialize)]
pub struct TrainSection {
    pub variant: String,
    pub hidden: usize,
    pub learning_rate: f64,
    pub weight_decay: f64,
    pub dropout: f64,
    pub max_epochs: usize,
    pub patience: usize,
    pub orders: Vec<usize>,
    pub omegas: Vec<f64>,
    pub degree: usize,
    pub decay_filter: bool,
    pub splits: usize,
    pub inits: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct PrecomputeSection {
    pub degree: usize,
    pub file: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct EvalSection {
    pub checkpoint: Option<PathBuf>,
}

#[derive(Clone, Debug, Serialize)]
pub struct GenSection {
    /// `csbm` (labelled community graph with class-dependent features) or
    /// `er` (unlabelled Erdős–Rényi graph with random features).
    pub kind: String,
    pub n: usize,
    pub classes: usize,
    pub width: usize,
    pub p_in: f64,
    pub p_out: f64,
    pub signal: f64,
    pub noise: f64,
    pub write_splits: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct Config {
    pub experiment: ExperimentSection,
    pub graph: GraphSection,
    pub approximation: ApproximationSection,
    pub filter_learning: FilterLearningSection,
    pub bounds: BoundsSection,
    pub dataset: DatasetSection,
    pub train: TrainSection,
    pub precompute: PrecomputeSection,
    pub eval: EvalSection,
    pub gen: GenSection,
}

impl Default for Config {
    fn default() -> Self {
        let all: Vec<String> = (1..=6).map(|i| format!("f{i}")).collect();
        Self {
            experiment: ExperimentSection { seed: 0, seeds: 10 },
            graph: GraphSection { n: 500, p: 0.5 },
            approximation: ApproximationSection {
                filters: all.clone(),
                bases: ["monomial", "chebyshev", "bernstein", "trig_tpd"].map(String::from).to_vec(),
                degree: 10,
                order: 10,
                omega: 0.2 * PI,
                degree_sweep: Vec::new(),
            },
            filter_learning: FilterLearningSection {
                width: 100,
                features: "random".into(),
                epochs: 1000,
                learning_rates: vec![0.5, 0.1, 0.05, 0.01, 0.005, 0.001],
            },
            bounds: BoundsSection {
                filters: all,
                sizes: vec![20, 50],
                degrees: vec![5, 10],
                basis: "chebyshev".into(),
                p: 0.3,
                width: 8,
                outputs: 4,
                radius: 1.0,
            },
            dataset: DatasetSection { path: None },
            train: TrainSection {
                variant: "medium".into(),
                hidden: 64,
                learning_rate: 0.01,
                weight_decay: 5e-4,
                dropout: 0.5,
                max_epochs: 1000,
                patience: 200,
                orders: vec![2, 4, 6, 8, 10, 15, 20],
                omegas: [0.2, 0.3, 0.5, 0.7].map(|c| c * PI).to_vec(),
                degree: 10,
                decay_filter: false,
                splits: 10,
                inits: 10,
            },
            precompute: PrecomputeSection {
                degree: 10,
                file: "features.bin".into(),
            },
            eval: EvalSection { checkpoint: None },
            gen: GenSection {
                kind: "csbm".into(),
                n: 500,
                classes: 3,
                width: 16,
                p_in: 0.05,
                p_out: 0.005,
                signal: 1.0,
                noise: 1.0,
                write_splits: false,
            },
        }
    }
}

/// Parses a real number with an optional `pi` factor.
pub fn parse_real(s: &str) -> Option<f64> {
    let t = s.trim();
    if let Some(coef) = t.strip_suffix("pi").or_else(|| t.strip_suffix('π')) {
        let coef = coef.trim().trim_end_matches('*').trim();
        return if coef.is_empty() { Some(PI) } else { coef.parse::<f64>().ok().map(|c| c * PI) };
    }
    if let Some(den) = t.strip_prefix("pi/") {
        return den.trim().parse::<f64>().ok().map(|d| PI / d);
    }
    t.parse().ok()
}

struct Section {
    name: &'static str,
    props: BTreeMap<String, String>,
    used: BTreeSet<String>,
}

impl Section {
    fn raw(&mut self, key: &str) -> Option<String> {
        let v = self.props.get(key).cloned();
        if v.is_some() {
            self.used.insert(key.to_string());
        }
        v
    }

    fn err(&self, key: &str, value: &str, what: &str) -> CliError {
        CliError::config(format!("[{}] {key} = '{value}': expected {what}", self.name))
    }

    fn parsed<T: FromStr>(&mut self, key: &str, target: &mut T, what: &str) -> Result<()> {
        if let Some(v) = self.raw(key) {
            *target = v.trim().parse().map_err(|_| self.err(key, &v, what))?;
        }
        Ok(())
    }

    fn real(&mut self, key: &str, target: &mut f64) -> Result<()> {
        if let Some(v) = self.raw(key) {
            *target = parse_real(&v).ok_or_else(|| self.err(key, &v, "a number"))?;
        }
        Ok(())
    }

    fn list<T>(&mut self, key: &str, target: &mut Vec<T>, what: &str, parse: impl Fn(&str) -> Option<T>) -> Result<()> {
        if let Some(v) = self.raw(key) {
            let items: Option<Vec<T>> = v.split(',').map(str::trim).filter(|s| !s.is_empty()).map(&parse).collect();
            *target = items.ok_or_else(|| self.err(key, &v, what))?;
        }
        Ok(())
    }

    fn strings(&mut self, key: &str, target: &mut Vec<String>) -> Result<()> {
        self.list(key, target, "a comma-separated list", |s| Some(s.to_string()))
    }

    fn path(&mut self, key: &str, base: &Path, target: &mut Option<PathBuf>) {
        if let Some(v) = self.raw(key) {
            let p = PathBuf::from(v.trim());
            *target = Some(if p.is_absolute() { p } else { base.join(p) });
        }
    }

    fn finish(self) -> Result<()> {
        match self.props.keys().find(|k| !self.used.contains(*k)) {
            Some(k) => Err(CliError::config(format!("unknown key '{k}' in [{}]", self.name))),
            None => Ok(()),
        }
    }
}

impl Config {
    /// Relative paths inside the file resolve against `base`.
    pub fn from_ini_str(text: &str, base: &Path) -> Result<Self> {
        let ini = Ini::load_from_str(text).map_err(|e| CliError::config(e.to_string()))?;
        const SECTIONS: [&str; 10] = [
            "experiment",
            "graph",
            "approximation",
            "filter_learning",
            "bounds",
            "dataset",
            "train",
            "precompute",
            "eval",
            "gen",
        ];
        for (name, props) in ini.iter() {
            match name {
                None if props.is_empty() => {}
                None => return Err(CliError::config("keys must appear inside a [section]")),
                Some(s) if SECTIONS.contains(&s) => {}
                Some(s) => return Err(CliError::config(format!("unknown section [{s}]"))),
            }
        }
        let section = |name: &'static str| Section {
            name,
            props: ini
                .section(Some(name))
                .map(|p| p.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect())
                .unwrap_or_default(),
            used: BTreeSet::new(),
        };
        let mut c = Config::default();

        let mut s = section("experiment");
        s.parsed("seed", &mut c.experiment.seed, "a non-negative integer")?;
        s.parsed("seeds", &mut c.experiment.seeds, "a non-negative integer")?;
        s.finish()?;

        let mut s = section("graph");
        s.parsed("n", &mut c.graph.n, "a node count")?;
        s.real("p", &mut c.graph.p)?;
        s.finish()?;

        let mut s = section("approximation");
        s.strings("filters", &mut c.approximation.filters)?;
        s.strings("bases", &mut c.approximation.bases)?;
        s.parsed("degree", &mut c.approximation.degree, "a degree")?;
        s.parsed("order", &mut c.approximation.order, "an order")?;
        s.real("omega", &mut c.approximation.omega)?;
        s.list("degree_sweep", &mut c.approximation.degree_sweep, "degrees", |v| v.parse().ok())?;
        s.finish()?;

        let mut s = section("filter_learning");
        s.parsed("width", &mut c.filter_learning.width, "a width")?;
        s.parsed("features", &mut c.filter_learning.features, "random or zero")?;
        s.parsed("epochs", &mut c.filter_learning.epochs, "an epoch count")?;
        s.list("learning_rates", &mut c.filter_learning.learning_rates, "numbers", parse_real)?;
        s.finish()?;

        let mut s = section("bounds");
        s.strings("filters", &mut c.bounds.filters)?;
        s.list("sizes", &mut c.bounds.sizes, "node counts", |v| v.parse().ok())?;
        s.list("degrees", &mut c.bounds.degrees, "degrees", |v| v.parse().ok())?;
        s.parsed("basis", &mut c.bounds.basis, "a basis name")?;
        s.real("p", &mut c.bounds.p)?;
        s.parsed("width", &mut c.bounds.width, "a width")?;
        s.parsed("outputs", &mut c.bounds.outputs, "a width")?;
        s.real("radius", &mut c.bounds.radius)?;
        s.finish()?;

        let mut s = section("dataset");
        s.path("path", base, &mut c.dataset.path);
        s.finish()?;

        let mut s = section("train");
        s.parsed("variant", &mut c.train.variant, "medium or large")?;
        s.parsed("hidden", &mut c.train.hidden, "a width")?;
        s.real("learning_rate", &mut c.train.learning_rate)?;
        s.real("weight_decay", &mut c.train.weight_decay)?;
        s.real("dropout", &mut c.train.dropout)?;
        s.parsed("max_epochs", &mut c.train.max_epochs, "an epoch count")?;
        s.parsed("patience", &mut c.train.patience, "an epoch count")?;
        s.list("orders", &mut c.train.orders, "orders", |v| v.parse().ok())?;
        s.list("omegas", &mut c.train.omegas, "angles", parse_real)?;
        s.parsed("degree", &mut c.train.degree, "a degree")?;
        s.parsed("decay_filter", &mut c.train.decay_filter, "true or false")?;
        s.parsed("splits", &mut c.train.splits, "a count")?;
        s.parsed("inits", &mut c.train.inits, "a count")?;
        s.finish()?;

        let mut s = section("precompute");
        s.parsed("degree", &mut c.precompute.degree, "a degree")?;
        s.parsed("file", &mut c.precompute.file, "a file name")?;
        s.finish()?;

        let mut s = section("eval");
        s.path("checkpoint", base, &mut c.eval.checkpoint);
        s.finish()?;

        let mut s = section("gen");
        s.parsed("kind", &mut c.gen.kind, "csbm or er")?;
        s.parsed("n", &mut c.gen.n, "a node count")?;
        s.parsed("classes", &mut c.gen.classes, "a class count")?;
        s.parsed("width", &mut c.gen.width, "a width")?;
        s.real("p_in", &mut c.gen.p_in)?;
        s.real("p_out", &mut c.gen.p_out)?;
        s.real("signal", &mut c.gen.signal)?;
        s.real("noise", &mut c.gen.noise)?;
        s.parsed("write_splits", &mut c.gen.write_splits, "true or false")?;
        s.finish()?;

        c.validate()?;
        Ok(c)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::config(format!("{}: {e}", path.display())))?;
        Self::from_ini_str(&text, path.parent().unwrap_or(Path::new(".")))
    }

    fn validate(&self) -> Result<()> {
        let prob = |name: &str, p: f64| {
            if (0.0..=1.0).contains(&p) {
                Ok(())
            } else {
                Err(CliError::config(format!("{name} = {p} is not a probability")))
            }
        };
        prob("[graph] p", self.graph.p)?;
        prob("[bounds] p", self.bounds.p)?;
        prob("[gen] p_in", self.gen.p_in)?;
        prob("[gen] p_out", self.gen.p_out)?;
        if !(0.0..1.0).contains(&self.train.dropout) {
            return Err(CliError::config("[train] dropout must lie in [0, 1)"));
        }
        for w in std::iter::once(self.approximation.omega).chain(self.train.omegas.iter().copied()) {
            if !(w > 0.0 && w < PI) {
                return Err(CliError::config(format!("omega = {w} must lie in (0, pi)")));
            }
        }
        if self.graph.n == 0 || self.gen.n == 0 {
            return Err(CliError::config("node counts must be positive"));
        }
        if !matches!(self.filter_learning.features.as_str(), "random" | "zero") {
            return Err(CliError::config("[filter_learning] features must be 'random' or 'zero'"));
        }
        if !matches!(self.gen.kind.as_str(), "csbm" | "er") {
            return Err(CliError::config("[gen] kind must be 'csbm' or 'er'"));
        }
        self.filters(&self.approximation.filters)?;
        self.filters(&self.bounds.filters)?;
        self.bases()?;
        self.bounds_basis()?;
        self.variant()?;
        Ok(())
    }

    pub fn filters(&self, names: &[String]) -> Result<Vec<TargetFilter>> {
        names
            .iter()
            .map(|n| n.parse().map_err(|_| CliError::config(format!("unknown filter '{n}'"))))
            .collect()
    }

    fn basis(&self, name: &str) -> Result<Basis> {
        match name.parse::<Basis>() {
            Ok(Basis::TrigTpd { .. }) => Ok(Basis::TrigTpd {
                order: self.approximation.order,
                omega: self.approximation.omega,
            }),
            Ok(b) => Ok(b),
            Err(_) => Err(CliError::config(format!("unknown basis '{name}'"))),
        }
    }

    /// Bases of `[approximation]`, with the trigonometric family taking its
    /// order and frequency from the same section.
    pub fn bases(&self) -> Result<Vec<Basis>> {
        self.approximation.bases.iter().map(|b| self.basis(b)).collect()
    }

    pub fn bounds_basis(&self) -> Result<Basis> {
        self.basis(&self.bounds.basis)
    }

    pub fn variant(&self) -> Result<Variant> {
        self.train
            .variant
            .parse()
            .map_err(|_| CliError::config(format!("unknown variant '{}'", self.train.variant)))
    }

    pub fn seeds(&self) -> Vec<u64> {
        (0..self.experiment.seeds as u64).map(|i| self.experiment.seed + i).collect()
    }

    pub fn dataset_path(&self) -> Result<&Path> {
        self.dataset
            .path
            .as_deref()
            .ok_or_else(|| CliError::config("[dataset] path is required for this command"))
    }
}
