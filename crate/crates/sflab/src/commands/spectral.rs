use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde_json::json;
use sflab_core::linalg::DEFAULT_DENSE_LIMIT;
use sflab_core::model::{learn_filter, FilterLearningConfig};
use sflab_core::{
    eigendecompose, erdos_renyi, normalized_laplacian, slice_errors, verify_theorem1, Basis, BoundsReport, Matrix,
    TargetFilter,
};

use super::{new_result, pi_multiple, stream_rng};
use crate::config::Config;
use crate::error::Result;
use crate::result::{ExperimentResult, MetricRow};

fn basis_label(b: &Basis) -> String {
    b.name().to_string()
}

fn scale_notes(cfg: &Config) -> Vec<String> {
    vec![format!(
        "random graphs: Erdos-Renyi with n = {} and p = {} over {} seeds (desk scale; the reference setting uses 50000 nodes)",
        cfg.graph.n, cfg.graph.p, cfg.experiment.seeds
    )]
}

fn trig_note(bases: &[Basis]) -> Option<String> {
    bases.iter().find_map(|b| match b {
        Basis::TrigTpd { order, omega } => Some(format!(
            "trig_tpd: order K = {order}, omega = {}, Taylor degree D as listed",
            pi_multiple(*omega)
        )),
        _ => None,
    })
}

/// Bases of one filter ordered by mean metric, best first.
fn ordering(rows: &[MetricRow], name: &str, filter: &str, degree: Option<usize>) -> Vec<(String, f64)> {
    let mut out: Vec<(String, f64)> = rows
        .iter()
        .filter(|r| {
            r.name == name
                && r.labels.get("filter").map(String::as_str) == Some(filter)
                && degree.is_none_or(|d| r.labels.get("degree") == Some(&d.to_string()))
        })
        .map(|r| (r.labels["basis"].clone(), r.mean))
        .collect();
    out.sort_by(|a, b| a.1.total_cmp(&b.1));
    out
}

/// Sum of squared slice errors per (filter, basis, degree), one ER graph
/// per seed.
pub fn slice_approx(cfg: &Config) -> Result<ExperimentResult> {
    let filters = cfg.filters(&cfg.approximation.filters)?;
    let bases = cfg.bases()?;
    let mut degrees = vec![cfg.approximation.degree];
    for &d in &cfg.approximation.degree_sweep {
        if !degrees.contains(&d) {
            degrees.push(d);
        }
    }
    let seeds = cfg.seeds();
    let per_seed: Vec<Vec<f64>> = seeds
        .par_iter()
        .map(|&seed| -> Result<Vec<f64>> {
            let graph = erdos_renyi(cfg.graph.n, cfg.graph.p, seed)?;
            let lambda = eigendecompose(&normalized_laplacian::<f64>(&graph), DEFAULT_DENSE_LIMIT)?.laplacian_spectrum();
            let mut out = Vec::with_capacity(filters.len() * bases.len() * degrees.len());
            for f in &filters {
                for b in &bases {
                    for &d in &degrees {
                        out.push(slice_errors(f, &lambda, *b, d)?.iter().sum());
                    }
                }
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;

    let mut notes = scale_notes(cfg);
    notes.push(
        "slice errors: continuous squared L2 error of each zero-extended slice over [0, 2] by quadrature; SSE sums them over all slices".into(),
    );
    notes.extend(trig_note(&bases));
    let mut result = new_result("slice-approx", cfg, notes)?;
    let mut k = 0;
    for f in &filters {
        for b in &bases {
            for &d in &degrees {
                let values = seeds.iter().zip(&per_seed).map(|(&s, v)| (s, v[k])).collect();
                let labels = [("filter", f.id()), ("basis", basis_label(b)), ("degree", d.to_string())];
                result.rows.push(MetricRow::new("sse", &labels, values));
                k += 1;
            }
        }
    }
    let orderings: Vec<_> = filters
        .iter()
        .map(|f| {
            let order = ordering(&result.rows, "sse", &f.id(), Some(cfg.approximation.degree));
            let mean = |name: &str| order.iter().find(|(b, _)| b == name).map(|p| p.1);
            json!({
                "filter": f.id(),
                "ranking": order.iter().map(|(b, _)| b.clone()).collect::<Vec<_>>(),
                "trig_tpd_le_chebyshev": mean("trig_tpd").zip(mean("chebyshev")).map(|(t, c)| t <= c),
            })
        })
        .collect();
    result.details = json!({ "degrees": degrees, "orderings": orderings });
    Ok(result)
}

/// Input features of the filter-learning task for one seed.
fn learning_features(cfg: &Config, seed: u64) -> Matrix<f64> {
    let (n, m) = (cfg.graph.n, cfg.filter_learning.width);
    if cfg.filter_learning.features == "zero" {
        return Matrix::zeros(n, m);
    }
    let mut rng = stream_rng(seed, 21);
    Matrix::from_fn(n, m, |_, _| rng.sample(StandardNormal))
}

struct LearnOutcome {
    metric: f64,
    learning_rate: f64,
    degenerate: bool,
}

/// Learns every (filter, basis) pair from `(X, U f(λ) Uᵀ X)` and reports
/// `‖p(λ) − f(λ)‖₂`.
pub fn filter_learn(cfg: &Config) -> Result<ExperimentResult> {
    let filters = cfg.filters(&cfg.approximation.filters)?;
    let bases = cfg.bases()?;
    let degree = cfg.approximation.degree;
    let fl = FilterLearningConfig {
        epochs: cfg.filter_learning.epochs,
        learning_rates: cfg.filter_learning.learning_rates.clone(),
    };
    let seeds = cfg.seeds();
    let per_seed: Vec<Vec<LearnOutcome>> = seeds
        .par_iter()
        .map(|&seed| -> Result<Vec<LearnOutcome>> {
            let graph = erdos_renyi(cfg.graph.n, cfg.graph.p, seed)?;
            let lap = normalized_laplacian::<f64>(&graph);
            let eig = eigendecompose(&lap, DEFAULT_DENSE_LIMIT)?;
            let lambda = eig.laplacian_spectrum();
            let x = learning_features(cfg, seed);
            let mut out = Vec::new();
            for f in &filters {
                let response: Vec<f64> = lambda.iter().map(|&l| f.eval_unchecked(l)).collect();
                let y = eig.filter(&response, &x)?;
                for b in &bases {
                    let r = learn_filter(&lap, &lambda, &x, &y, f, *b, degree, &fl)?;
                    out.push(LearnOutcome {
                        metric: r.metric,
                        learning_rate: r.learning_rate,
                        degenerate: r.degenerate,
                    });
                }
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;

    let degenerate = per_seed.iter().flatten().any(|o| o.degenerate);
    let mut notes = scale_notes(cfg);
    notes.push(format!(
        "filter learning: X is {} x {} ({} features), Y = U f(Lambda) U^T X, {} Adam epochs per learning rate, rate chosen by final training loss",
        cfg.graph.n, cfg.filter_learning.width, cfg.filter_learning.features, cfg.filter_learning.epochs
    ));
    notes.push("metric: Euclidean norm of p(lambda) - f(lambda) over the eigenvalues".into());
    if degenerate {
        notes.push("degenerate input: X = 0 carries no information, metrics reflect the initial filter only".into());
    }
    notes.extend(trig_note(&bases));
    let mut result = new_result("filter-learn", cfg, notes)?;
    let mut k = 0;
    let mut rates = Vec::new();
    for f in &filters {
        for b in &bases {
            let values = seeds.iter().zip(&per_seed).map(|(&s, v)| (s, v[k].metric)).collect();
            let labels = [("filter", f.id()), ("basis", basis_label(b)), ("degree", degree.to_string())];
            result.rows.push(MetricRow::new("frobenius", &labels, values));
            rates.push(json!({
                "filter": f.id(),
                "basis": basis_label(b),
                "learning_rates": per_seed.iter().map(|v| v[k].learning_rate).collect::<Vec<_>>(),
            }));
            k += 1;
        }
    }
    let comparisons: Vec<_> = filters
        .iter()
        .map(|f| {
            let order = ordering(&result.rows, "frobenius", &f.id(), None);
            let mean = |name: &str| order.iter().find(|(b, _)| b == name).map(|p| p.1);
            json!({
                "filter": f.id(),
                "ranking": order.iter().map(|(b, _)| b.clone()).collect::<Vec<_>>(),
                "trig_tpd_lt_monomial": mean("trig_tpd").zip(mean("monomial")).map(|(t, m)| t < m),
                "trig_tpd_lt_chebyshev": mean("trig_tpd").zip(mean("chebyshev")).map(|(t, c)| t < c),
            })
        })
        .collect();
    result.details = json!({
        "degenerate": degenerate,
        "comparisons": comparisons,
        "selected_learning_rates": rates,
    });
    Ok(result)
}

const SIDES: [&str; 5] = ["lemma1_left", "lemma1_right", "thm1_left", "thm1_right", "thm1_right_discrete"];

fn sides(r: &BoundsReport) -> [bool; 5] {
    [r.lemma1_left_ok, r.lemma1_right_ok, r.thm1_left_ok, r.thm1_right_ok, r.discrete_bound_ok]
}

/// X uniform in [-1, 1] (full column rank almost surely when m ≤ n) and W
/// rescaled to `‖W‖_F = r`.
pub(crate) fn bounds_inputs(n: usize, m: usize, out: usize, radius: f64, rng: &mut impl Rng) -> (Matrix<f64>, Matrix<f64>) {
    let x = Matrix::from_fn(n, m, |_, _| rng.gen_range(-1.0..1.0));
    let w = Matrix::from_fn(m, out, |_, _| rng.gen_range(-1.0..1.0));
    let norm = w.frobenius_norm();
    let w = if norm > 0.0 { w.scale(radius / norm) } else { w };
    (x, w)
}

/// Checks both sides of the slice lemma and the construction-error theorem
/// over filters × sizes × degrees × seeds.
pub fn verify_bounds(cfg: &Config) -> Result<ExperimentResult> {
    let b = &cfg.bounds;
    let filters: Vec<TargetFilter> = cfg.filters(&b.filters)?;
    let basis = cfg.bounds_basis()?;
    let seeds = cfg.seeds();
    let mut cases = Vec::new();
    for (fi, _) in filters.iter().enumerate() {
        for &n in &b.sizes {
            for &d in &b.degrees {
                for &s in &seeds {
                    cases.push((fi, n, d, s));
                }
            }
        }
    }
    let reports: Vec<BoundsReport> = cases
        .par_iter()
        .enumerate()
        .map(|(i, &(fi, n, d, s))| -> Result<BoundsReport> {
            let graph = erdos_renyi(n, b.p, s)?;
            let (x, w) = bounds_inputs(n, b.width, b.outputs, b.radius, &mut stream_rng(s, 1000 + i as u64));
            Ok(verify_theorem1(&graph, &filters[fi], basis, d, &x, &w, b.radius)?)
        })
        .collect::<Result<_>>()?;

    let notes = vec![
        format!(
            "bounds: Erdos-Renyi graphs with p = {}, X uniform in [-1, 1] of width {}, W rescaled to Frobenius norm r = {}",
            b.p, b.width, b.radius
        ),
        "errors: squared continuous errors; epsilon fits [0, lambda_n]; thm1_right_discrete uses the discrete error at the eigenvalues".into(),
    ];
    let mut result = new_result("verify-bounds", cfg, notes)?;
    for f in &filters {
        for (k, side) in SIDES.iter().enumerate() {
            let values = seeds
                .iter()
                .map(|&s| {
                    let hits: Vec<bool> = cases
                        .iter()
                        .zip(&reports)
                        .filter(|((fi, _, _, cs), _)| filters[*fi].id() == f.id() && *cs == s)
                        .map(|(_, r)| sides(r)[k])
                        .collect();
                    (s, hits.iter().filter(|&&h| h).count() as f64 / hits.len().max(1) as f64)
                })
                .collect();
            result.rows.push(MetricRow::new("pass_rate", &[("filter", f.id()), ("side", side.to_string())], values));
        }
    }
    let overall: Vec<_> = SIDES
        .iter()
        .enumerate()
        .map(|(k, side)| {
            let passed = reports.iter().filter(|r| sides(r)[k]).count();
            json!({ "side": side, "passed": passed, "total": reports.len() })
        })
        .collect();
    let violations: Vec<_> = cases
        .iter()
        .zip(&reports)
        .filter(|(_, r)| sides(r).iter().any(|ok| !ok))
        .map(|(&(fi, n, d, s), r)| {
            json!({
                "filter": filters[fi].id(), "n": n, "degree": d, "seed": s, "basis": basis_label(&basis),
                "p": b.p, "width": b.width, "outputs": b.outputs, "radius": b.radius,
                "failed": SIDES.iter().zip(sides(r)).filter(|(_, ok)| !ok).map(|(s, _)| *s).collect::<Vec<_>>(),
                "squared": r.squared,
            })
        })
        .collect();
    result.details = json!({ "overall": overall, "violations": violations, "reports": reports });
    Ok(result)
}
