//! One-layer linear spectral filter learning: given `Y = f(L) X`, train the
//! filter coefficients of `Z = Σ_d θ_d B_d(L) X` by mean squared error and
//! report how close the learned response is to `f` on the spectrum.
//!
//! The loss is quadratic in θ, so training runs on the Gram reduction
//! `G_de = ⟨B_d X, B_e X⟩ / N`, `b_d = ⟨B_d X, Y⟩ / N` with `N = n·m`. Loss
//! and gradients are identical to a full forward/backward pass on (X, Y),
//! at `O(D²)` cost per epoch.

use serde::{Deserialize, Serialize};

use crate::basis::{basis_row, Basis};
use crate::conv::precompute;
use crate::dense::Matrix;
use crate::error::{Error, Result};
use crate::filters::TargetFilter;
use crate::graph::Graph;
use crate::linalg::{eigendecompose, DEFAULT_DENSE_LIMIT};
use crate::model::optim::Adam;
use crate::scalar::Scalar;
use crate::sparse::{normalized_laplacian, CsrMatrix};
use crate::trig::{eval_power_series, taylor_tables, TrigParams};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FilterLearningConfig {
    pub epochs: usize,
    /// Candidate learning rates; the one with the lowest final training
    /// loss is kept.
    pub learning_rates: Vec<f64>,
}

impl Default for FilterLearningConfig {
    fn default() -> Self {
        Self {
            epochs: 1000,
            learning_rates: vec![0.5, 0.1, 0.05, 0.01, 0.005, 0.001],
        }
    }
}

#[derive(Clone, Debug)]
pub struct FilterLearningResult<T> {
    pub basis: Basis,
    pub degree: usize,
    /// Learned coefficients in the basis' coordinates (monomial coordinates
    /// for the trigonometric family).
    pub coefficients: Vec<T>,
    pub trig: Option<TrigParams<T>>,
    /// Learned response at each eigenvalue.
    pub response: Vec<T>,
    /// `‖p(λ) − f(λ)‖₂` over the eigenvalue multiset.
    pub metric: f64,
    pub train_loss: f64,
    pub learning_rate: f64,
    /// The features carry no information (all zero).
    pub degenerate: bool,
}

/// `[B_0(L) X, …, B_D(L) X]` for a polynomial family.
pub fn basis_blocks<T: Scalar>(lap: &CsrMatrix<T>, x: &Matrix<T>, basis: Basis, degree: usize) -> Result<Vec<Matrix<T>>> {
    match basis {
        Basis::Monomial | Basis::TrigTpd { .. } => Ok(precompute(lap, x, degree)?.blocks().to_vec()),
        Basis::Chebyshev => {
            // T_d(L − I) X by the three-term recurrence.
            let shifted = |p: &Matrix<T>| -> Result<Matrix<T>> {
                let mut q = lap.spmv(p)?;
                q.axpy(-T::one(), p)?;
                Ok(q)
            };
            let mut blocks = vec![x.clone()];
            if degree >= 1 {
                blocks.push(shifted(x)?);
            }
            for d in 2..=degree {
                let mut next = shifted(&blocks[d - 1])?.scale(T::c(2.0));
                next.axpy(-T::one(), &blocks[d - 2])?;
                blocks.push(next);
            }
            Ok(blocks)
        }
        Basis::Bernstein => {
            let half = T::c(0.5);
            let mut blocks = Vec::with_capacity(degree + 1);
            let mut binom = 1.0f64;
            for d in 0..=degree {
                if d > 0 {
                    binom = binom * (degree + 1 - d) as f64 / d as f64;
                }
                let mut p = x.clone();
                for _ in 0..degree - d {
                    // (I − L/2) p
                    let lp = lap.spmv(&p)?;
                    p.axpy(-half, &lp)?;
                }
                for _ in 0..d {
                    p = lap.spmv(&p)?.scale(half);
                }
                blocks.push(p.scale(T::c(binom)));
            }
            Ok(blocks)
        }
    }
}

fn gram<T: Scalar>(blocks: &[Matrix<T>], y: &Matrix<T>) -> Result<(Vec<Vec<f64>>, Vec<f64>, f64)> {
    let n = (y.rows() * y.cols()).max(1) as f64;
    let dot = |a: &Matrix<T>, b: &Matrix<T>| -> Result<f64> {
        if a.shape() != b.shape() {
            return Err(Error::mismatch("filter learning", a.shape(), b.shape()));
        }
        Ok(a.as_slice().iter().zip(b.as_slice()).map(|(&u, &v)| u.f64() * v.f64()).sum::<f64>() / n)
    };
    let k = blocks.len();
    let mut g = vec![vec![0.0; k]; k];
    for i in 0..k {
        for j in i..k {
            let v = dot(&blocks[i], &blocks[j])?;
            g[i][j] = v;
            g[j][i] = v;
        }
    }
    let b = blocks.iter().map(|bl| dot(bl, y)).collect::<Result<Vec<_>>>()?;
    Ok((g, b, dot(y, y)?))
}

/// `(loss, ∂loss/∂θ)` of `θᵀGθ − 2bᵀθ + ‖Y‖²/N`.
fn quadratic(g: &[Vec<f64>], b: &[f64], yy: f64, theta: &[f64]) -> (f64, Vec<f64>) {
    let gt: Vec<f64> = g.iter().map(|row| row.iter().zip(theta).map(|(a, t)| a * t).sum()).collect();
    let loss = theta.iter().zip(&gt).map(|(t, v)| t * v).sum::<f64>() - 2.0 * theta.iter().zip(b).map(|(t, v)| t * v).sum::<f64>() + yy;
    let grad = gt.iter().zip(b).map(|(v, bi)| 2.0 * (v - bi)).collect();
    (loss, grad)
}

fn adam_run(init: &[f64], lr: f64, epochs: usize, grad: impl Fn(&[f64]) -> Vec<f64>) -> Vec<f64> {
    let mut p = init.to_vec();
    let mut adam = Adam::new(lr, 0.0);
    for _ in 0..epochs {
        let g = grad(&p);
        adam.update(vec![&mut p], &[&g], &[false]);
    }
    p
}

/// Trains the filter on `(X, Y)` given the Laplacian and its spectrum.
#[allow(clippy::too_many_arguments)]
pub fn learn_filter<T: Scalar>(
    lap: &CsrMatrix<T>,
    eigenvalues: &[T],
    x: &Matrix<T>,
    y: &Matrix<T>,
    target: &TargetFilter,
    basis: Basis,
    degree: usize,
    config: &FilterLearningConfig,
) -> Result<FilterLearningResult<T>> {
    let blocks = basis_blocks(lap, x, basis, degree)?;
    let (g, b, yy) = gram(&blocks, y)?;
    let degenerate = x.max_abs() == T::zero();

    // The trigonometric family trains (α, β) through c = Γᵀα + Θᵀβ.
    let trig = match basis {
        Basis::TrigTpd { order, omega } => Some((order, T::c(omega), taylor_tables(order, T::c(omega), degree)?.stacked())),
        _ => None,
    };
    let to_coeffs = |p: &[f64]| -> Vec<f64> {
        match &trig {
            Some((_, _, m)) => (0..=degree).map(|d| (0..m.rows()).map(|r| m[(r, d)].f64() * p[r]).sum()).collect(),
            None => p.to_vec(),
        }
    };
    // Every family starts from the all-pass filter p ≡ 1.
    let init: Vec<f64> = match (&trig, basis) {
        (Some((order, _, _)), _) => {
            let mut z = vec![0.0; 2 * (order + 1)];
            z[order + 1] = 1.0;
            z
        }
        (None, Basis::Bernstein) => vec![1.0; degree + 1],
        (None, _) => {
            let mut z = vec![0.0; degree + 1];
            z[0] = 1.0;
            z
        }
    };
    let grad = |p: &[f64]| -> Vec<f64> {
        let (_, gc) = quadratic(&g, &b, yy, &to_coeffs(p));
        match &trig {
            Some((_, _, m)) => (0..m.rows()).map(|r| (0..=degree).map(|d| m[(r, d)].f64() * gc[d]).sum()).collect(),
            None => gc,
        }
    };

    let mut best: Option<(f64, f64, Vec<f64>)> = None;
    for &lr in &config.learning_rates {
        let p = adam_run(&init, lr, config.epochs, grad);
        let (loss, _) = quadratic(&g, &b, yy, &to_coeffs(&p));
        if !loss.is_finite() {
            continue;
        }
        if best.as_ref().is_none_or(|(l, _, _)| loss < *l) {
            best = Some((loss, lr, p));
        }
    }
    let (train_loss, learning_rate, params) = best.ok_or(Error::DivergenceDetected {
        epoch: config.epochs,
        loss: f64::NAN,
    })?;

    let coeffs: Vec<T> = to_coeffs(&params).into_iter().map(T::c).collect();
    let trig_params = match &trig {
        Some((order, omega, _)) => {
            let (a, bt) = params.split_at(order + 1);
            Some(TrigParams::new(*omega, a.iter().map(|&v| T::c(v)).collect(), bt.iter().map(|&v| T::c(v)).collect())?)
        }
        None => None,
    };
    let response: Vec<T> = eigenvalues
        .iter()
        .map(|&l| match basis {
            Basis::Monomial | Basis::TrigTpd { .. } => eval_power_series(&coeffs, l),
            _ => basis_row(basis, degree, l).into_iter().zip(&coeffs).map(|(u, &c)| u * c).sum(),
        })
        .collect();
    let metric = response
        .iter()
        .zip(eigenvalues)
        .map(|(&p, &l)| (p - target.eval_unchecked(l)).f64().powi(2))
        .sum::<f64>()
        .sqrt();
    Ok(FilterLearningResult {
        basis,
        degree,
        coefficients: coeffs,
        trig: trig_params,
        response,
        metric: if metric.is_finite() { metric } else { 0.0 },
        train_loss,
        learning_rate,
        degenerate,
    })
}

/// Convenience wrapper that builds the Laplacian and its spectrum.
pub fn filter_learning_model<T: Scalar>(
    graph: &Graph,
    x: &Matrix<T>,
    y: &Matrix<T>,
    target: &TargetFilter,
    basis: Basis,
    degree: usize,
    config: &FilterLearningConfig,
) -> Result<FilterLearningResult<T>> {
    let lap = normalized_laplacian::<T>(graph);
    let eig = eigendecompose(&lap, DEFAULT_DENSE_LIMIT)?;
    learn_filter(&lap, &eig.laplacian_spectrum(), x, y, target, basis, degree, config)
}
