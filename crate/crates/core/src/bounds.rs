//! Numerical checks of the slice-error sandwich `Σ ε_s ≤ ε ≤ (Σ √ε_s)²`
//! and of the construction-error bounds for a one-layer linear graph
//! convolution `U diag(p(λ)) Uᵀ X W`.
//!
//! Failures are reported as data. Every inequality is evaluated under the
//! squared-error convention (ε = ∫(p − f)²) and again with every error
//! replaced by its square root, so a result never depends silently on the
//! convention.
//!
//! The whole-filter error ε is measured on `[0, λ_n]`, the interval the
//! slices partition. Beyond `λ_n` no slice carries the filter, so an ε taken
//! over all of [0, 2] is not bounded by the slice errors.

use serde::{Deserialize, Serialize};

use crate::basis::Basis;
use crate::dense::Matrix;
use crate::error::{Error, Result};
use crate::filters::TargetFilter;
use crate::fit::{lse_fit_continuous, slice_errors, PolyFit};
use crate::graph::Graph;
use crate::linalg::{eigendecompose, min_singular_value, EigenSystem, DEFAULT_DENSE_LIMIT};
use crate::scalar::Scalar;
use crate::sparse::normalized_laplacian;

/// Relative tolerance applied to every pass flag.
pub const RELATIVE_TOLERANCE: f64 = 1e-9;

/// `ξ = ‖U diag(p(λ) − f(λ)) Uᵀ X W‖_F`, computed densely.
pub fn construction_error<T: Scalar>(
    eig: &EigenSystem<T>,
    fit: &PolyFit<T>,
    filter: &TargetFilter,
    x: &Matrix<T>,
    w: &Matrix<T>,
) -> Result<T> {
    if x.rows() != eig.len() {
        return Err(Error::mismatch("construction_error", (eig.len(), eig.len()), x.shape()));
    }
    let xw = x.matmul(w)?;
    let response: Vec<T> = eig
        .laplacian_spectrum()
        .into_iter()
        .map(|l| fit.eval_unchecked(l) - filter.eval_unchecked(l))
        .collect();
    Ok(eig.filter(&response, &xw)?.frobenius_norm())
}

/// `lhs ≤ rhs` up to the relative tolerance; returns the flag and `rhs − lhs`.
fn side(lhs: f64, rhs: f64) -> (bool, f64) {
    let slack = rhs - lhs;
    let tol = RELATIVE_TOLERANCE * lhs.abs().max(rhs.abs());
    (slack >= -tol, slack)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SandwichCheck {
    pub left_ok: bool,
    pub right_ok: bool,
    /// `ε − Σ ε_s`.
    pub left_slack: f64,
    /// `(Σ √ε_s)² − ε`.
    pub right_slack: f64,
}

impl SandwichCheck {
    fn new(eps: f64, slices: &[f64]) -> Self {
        let sum: f64 = slices.iter().sum();
        let root_sum: f64 = slices.iter().map(|e| e.sqrt()).sum();
        let (left_ok, left_slack) = side(sum, eps);
        let (right_ok, right_slack) = side(eps, root_sum * root_sum);
        Self {
            left_ok,
            right_ok,
            left_slack,
            right_slack,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LemmaReport {
    pub filter: String,
    pub basis: String,
    pub degree: usize,
    /// Squared continuous error of the whole-domain fit.
    pub epsilon: f64,
    pub epsilon_slices: Vec<f64>,
    pub sum_epsilon_slices: f64,
    /// `(Σ √ε_s)²`.
    pub sqrt_sum_squared: f64,
    pub squared: SandwichCheck,
    pub unsquared: SandwichCheck,
}

impl LemmaReport {
    pub fn left_ok(&self) -> bool {
        self.squared.left_ok
    }

    pub fn right_ok(&self) -> bool {
        self.squared.right_ok
    }
}

/// Whole-filter fit on `[0, λ_n]`, the interval the slices partition.
/// `None` when that interval is a single point.
fn covered_fit<T: Scalar>(filter: &TargetFilter, eigenvalues: &[T], basis: Basis, degree: usize) -> Result<Option<PolyFit<T>>> {
    let top = eigenvalues.last().copied().unwrap_or(T::zero());
    if top <= T::zero() {
        return Ok(None);
    }
    lse_fit_continuous(basis, degree, filter, (T::zero(), top)).map(Some)
}

/// ε is the squared error of the best fit on `[0, λ_n]`; each ε_s fits the
/// zero-extended slice on [0, 2].
pub fn verify_lemma1<T: Scalar>(filter: &TargetFilter, eigenvalues: &[T], basis: Basis, degree: usize) -> Result<LemmaReport> {
    let slices = slice_errors(filter, eigenvalues, basis, degree)?;
    let eps = covered_fit(filter, eigenvalues, basis, degree)?.map_or(0.0, |f| f.fit_error.f64());
    Ok(lemma_report(filter, basis, degree, eps, slices.iter().map(|e| e.f64()).collect()))
}

fn lemma_report(filter: &TargetFilter, basis: Basis, degree: usize, epsilon: f64, epsilon_slices: Vec<f64>) -> LemmaReport {
    let roots: Vec<f64> = epsilon_slices.iter().map(|e| e.sqrt()).collect();
    let root_sum: f64 = roots.iter().sum();
    LemmaReport {
        filter: filter.id(),
        basis: basis.to_string(),
        degree,
        epsilon,
        sum_epsilon_slices: epsilon_slices.iter().sum(),
        sqrt_sum_squared: root_sum * root_sum,
        squared: SandwichCheck::new(epsilon, &epsilon_slices),
        unsquared: SandwichCheck::new(epsilon.sqrt(), &roots),
        epsilon_slices,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConventionChecks {
    pub lemma1_left_ok: bool,
    pub lemma1_right_ok: bool,
    pub thm1_left_ok: bool,
    pub thm1_right_ok: bool,
    pub lemma1_left_slack: f64,
    pub lemma1_right_slack: f64,
    /// `ξ − δ_X δ_W Σ e_s`.
    pub thm1_left_slack: f64,
    /// `r ‖X‖_F (Σ √e_s)² − ξ`.
    pub thm1_right_slack: f64,
}

impl ConventionChecks {
    fn new(lemma: &SandwichCheck, slices: &[f64], xi: f64, delta_x: f64, delta_w: f64, r: f64, x_norm: f64) -> Self {
        let sum: f64 = slices.iter().sum();
        let root_sum: f64 = slices.iter().map(|e| e.sqrt()).sum();
        let (thm1_left_ok, thm1_left_slack) = side(delta_x * delta_w * sum, xi);
        let (thm1_right_ok, thm1_right_slack) = side(xi, r * x_norm * root_sum * root_sum);
        Self {
            lemma1_left_ok: lemma.left_ok,
            lemma1_right_ok: lemma.right_ok,
            thm1_left_ok,
            thm1_right_ok,
            lemma1_left_slack: lemma.left_slack,
            lemma1_right_slack: lemma.right_slack,
            thm1_left_slack,
            thm1_right_slack,
        }
    }
}

/// Everything measured for one (graph, filter, basis, X, W) configuration.
/// The top-level flags use the squared convention; `both_conventions`
/// repeats the checks with square-rooted errors.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundsReport {
    pub filter: String,
    pub basis: String,
    pub degree: usize,
    pub n: usize,
    pub epsilon: f64,
    pub epsilon_slices: Vec<f64>,
    pub sum_epsilon_slices: f64,
    pub sqrt_sum_squared: f64,
    pub xi: f64,
    pub xi_squared: f64,
    pub delta_x: f64,
    pub delta_w: f64,
    pub r: f64,
    pub x_norm: f64,
    pub lemma1_left_ok: bool,
    pub lemma1_right_ok: bool,
    pub thm1_left_ok: bool,
    pub thm1_right_ok: bool,
    pub squared: ConventionChecks,
    pub both_conventions: ConventionChecks,
    /// `‖p(λ) − f(λ)‖₂` over the eigenvalues.
    pub epsilon_discrete: f64,
    /// `r · ε_discrete · ‖X‖_F`.
    pub discrete_bound: f64,
    pub discrete_bound_ok: bool,
    /// Continuous slice errors are positive while the discrete error vanishes.
    pub discrete_continuous_mismatch: bool,
    /// X or W has a (numerically) zero singular value.
    pub rank_deficient_inputs: bool,
}

/// Fits `f` on `[0, λ_n]`, builds the one-layer convolution on `graph` and
/// evaluates every bound. Requires `‖W‖_F ≤ r`.
pub fn verify_theorem1<T: Scalar>(
    graph: &Graph,
    filter: &TargetFilter,
    basis: Basis,
    degree: usize,
    x: &Matrix<T>,
    w: &Matrix<T>,
    r: T,
) -> Result<BoundsReport> {
    let w_norm = w.frobenius_norm();
    if w_norm.f64() > r.f64() * (1.0 + RELATIVE_TOLERANCE) {
        return Err(Error::RegularizationViolated {
            norm: w_norm.f64(),
            r: r.f64(),
        });
    }
    let lap = normalized_laplacian::<T>(graph);
    let eig = eigendecompose(&lap, DEFAULT_DENSE_LIMIT)?;
    let lambda = eig.laplacian_spectrum();

    let whole = match covered_fit(filter, &lambda, basis, degree)? {
        Some(fit) => fit,
        None => lse_fit_continuous(basis, degree, filter, (T::zero(), T::c(2.0)))?,
    };
    let slices: Vec<f64> = slice_errors(filter, &lambda, basis, degree)?
        .iter()
        .map(|e| e.f64())
        .collect();
    let eps = if lambda.last().is_some_and(|&t| t > T::zero()) { whole.fit_error.f64() } else { 0.0 };
    let lemma = lemma_report(filter, basis, degree, eps, slices.clone());

    let xi = construction_error(&eig, &whole, filter, x, w)?.f64();
    let delta_x = min_singular_value(x).f64();
    let delta_w = min_singular_value(w).f64();
    let x_norm = x.frobenius_norm().f64();
    let rf = r.f64();
    let eps_disc = lambda
        .iter()
        .map(|&l| (whole.eval_unchecked(l) - filter.eval_unchecked(l)).f64().powi(2))
        .sum::<f64>()
        .sqrt();

    let squared = ConventionChecks::new(&lemma.squared, &slices, xi, delta_x, delta_w, rf, x_norm);
    let roots: Vec<f64> = slices.iter().map(|e| e.sqrt()).collect();
    let unsquared = ConventionChecks::new(&lemma.unsquared, &roots, xi, delta_x, delta_w, rf, x_norm);
    let discrete_bound = rf * eps_disc * x_norm;
    let (discrete_bound_ok, _) = side(xi, discrete_bound);
    let scale = x_norm * w_norm.f64();
    let rank_tol = |m: &Matrix<T>| 1e-12 * m.max_abs().f64() * (m.rows().max(m.cols()) as f64);

    Ok(BoundsReport {
        filter: filter.id(),
        basis: basis.to_string(),
        degree,
        n: graph.node_count(),
        epsilon: lemma.epsilon,
        sum_epsilon_slices: lemma.sum_epsilon_slices,
        sqrt_sum_squared: lemma.sqrt_sum_squared,
        epsilon_slices: slices,
        xi,
        xi_squared: xi * xi,
        delta_x,
        delta_w,
        r: rf,
        x_norm,
        lemma1_left_ok: squared.lemma1_left_ok,
        lemma1_right_ok: squared.lemma1_right_ok,
        thm1_left_ok: squared.thm1_left_ok,
        thm1_right_ok: squared.thm1_right_ok,
        squared,
        both_conventions: unsquared,
        epsilon_discrete: eps_disc,
        discrete_bound,
        discrete_bound_ok,
        discrete_continuous_mismatch: xi <= 1e-12 * scale.max(f64::MIN_POSITIVE) && lemma.sum_epsilon_slices > 0.0,
        rank_deficient_inputs: delta_x <= rank_tol(x) || delta_w <= rank_tol(w),
    })
}
