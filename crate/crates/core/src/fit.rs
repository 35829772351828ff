//! Least-squares polynomial fits in discrete and continuous (quadrature)
//! form, function slicing on an eigenvalue set, and per-slice errors.
//!
//! All errors are squared: a discrete fit reports `Σ (p(x_i) − v_i)²`, a
//! continuous fit reports the quadrature value of `∫ (p − f)²`.

use crate::basis::{basis_row, design_matrix, trig_span, Basis};
use crate::dense::Matrix;
use crate::error::{Error, Result};
use crate::filters::TargetFilter;
use crate::linalg::{least_squares, PivotedQr};
use crate::quadrature::{QuadratureGrid, GAUSS_ORDER, MAX_PANEL_WIDTH};
use crate::scalar::Scalar;
use crate::trig::{eval_power_series, TrigParams};

#[derive(Clone, Debug)]
pub struct PolyFit<T> {
    pub basis: Basis,
    pub degree: usize,
    /// `D + 1` coefficients in the basis' own coordinates; monomial
    /// coordinates for the trigonometric family.
    pub coefficients: Vec<T>,
    /// Raw (α, β) behind the coefficients for the trigonometric family.
    /// When the parameters are not identified this is the minimum-norm choice.
    pub trig: Option<TrigParams<T>>,
    pub fit_error: T,
    pub rank: usize,
    pub rank_deficient: bool,
}

impl<T: Scalar> PolyFit<T> {
    pub fn eval(&self, x: T) -> Result<T> {
        let xf = x.f64();
        if !(0.0..=2.0).contains(&xf) {
            return Err(Error::Domain { x: xf, lo: 0.0, hi: 2.0 });
        }
        Ok(self.eval_unchecked(x))
    }

    pub fn eval_unchecked(&self, x: T) -> T {
        if matches!(self.basis, Basis::Monomial | Basis::TrigTpd { .. }) {
            return eval_power_series(&self.coefficients, x);
        }
        basis_row(self.basis, self.degree, x)
            .into_iter()
            .zip(&self.coefficients)
            .map(|(b, &c)| b * c)
            .sum()
    }
}

/// Columns spanning the fit space at `points`, plus the data needed to map
/// span coordinates back to coefficients.
struct SpanDesign<T> {
    a: Matrix<T>,
    trig: Option<(usize, T, Matrix<T>, PivotedQr<T>)>,
}

fn span_design<T: Scalar>(basis: Basis, degree: usize, points: &[T]) -> Result<SpanDesign<T>> {
    match basis {
        Basis::TrigTpd { order, omega } => {
            let (q, qr) = trig_span::<T>(order, omega, degree)?;
            let a = design_matrix(Basis::Monomial, degree, points).matmul(&q)?;
            Ok(SpanDesign {
                a,
                trig: Some((order, T::c(omega), q, qr)),
            })
        }
        _ => Ok(SpanDesign {
            a: design_matrix(basis, degree, points),
            trig: None,
        }),
    }
}

fn check_points<T: Scalar>(points: &[T]) -> Result<()> {
    for &x in points {
        let xf = x.f64();
        if !(0.0..=2.0).contains(&xf) {
            return Err(Error::Domain { x: xf, lo: 0.0, hi: 2.0 });
        }
    }
    Ok(())
}

/// Minimizes `Σ w_i (p(x_i) − v_i)²` by pivoted QR on the row-scaled design.
fn weighted_fit<T: Scalar>(basis: Basis, degree: usize, points: &[T], weights: &[T], values: &[T]) -> Result<PolyFit<T>> {
    let span = span_design(basis, degree, points)?;
    let mut a = span.a;
    let mut b = Vec::with_capacity(values.len());
    for (i, (&w, &v)) in weights.iter().zip(values).enumerate() {
        let s = w.sqrt();
        a.row_mut(i).iter_mut().for_each(|x| *x *= s);
        b.push(s * v);
    }
    let lsq = least_squares(&a, &b)?;
    let mut fit = PolyFit {
        basis,
        degree,
        coefficients: lsq.solution.clone(),
        trig: None,
        fit_error: lsq.residual_sq,
        rank: lsq.rank,
        rank_deficient: lsq.rank_deficient,
    };
    if let Some((order, omega, q, qr)) = span.trig {
        let y = Matrix::from_vec(lsq.solution.len(), 1, lsq.solution)?;
        let c = q.matmul(&y)?.into_vec();
        let z = qr.solve(&c)?;
        let (alpha, beta) = z.split_at(order + 1);
        fit.trig = Some(TrigParams::new(omega, alpha.to_vec(), beta.to_vec())?);
        fit.coefficients = c;
        fit.rank_deficient |= qr.is_rank_deficient();
    }
    Ok(fit)
}

/// Discrete least squares over `(points, values)`.
pub fn lse_fit_discrete<T: Scalar>(basis: Basis, degree: usize, points: &[T], values: &[T]) -> Result<PolyFit<T>> {
    if points.is_empty() || points.len() != values.len() {
        return Err(Error::mismatch("lse_fit_discrete", (points.len(), 1), (values.len(), 1)));
    }
    check_points(points)?;
    let ones = vec![T::one(); points.len()];
    weighted_fit(basis, degree, points, &ones, values)
}

/// Quadrature grid used for every continuous fit on `[a, b]`.
pub fn fit_grid<T: Scalar>(a: T, b: T, breakpoints: &[T]) -> QuadratureGrid<T> {
    QuadratureGrid::composite(a, b, breakpoints, T::c(MAX_PANEL_WIDTH), GAUSS_ORDER)
}

fn filter_kinks<T: Scalar>(filter: &TargetFilter) -> Vec<T> {
    filter.kinks().into_iter().map(T::c).collect()
}

/// Continuous least squares `min ∫_a^b (p − f)²`.
pub fn lse_fit_continuous<T: Scalar>(basis: Basis, degree: usize, filter: &TargetFilter, interval: (T, T)) -> Result<PolyFit<T>> {
    let (a, b) = interval;
    check_points(&[a, b])?;
    if !(a < b) {
        return Err(Error::InvalidParameter(format!("empty interval [{a}, {b}]")));
    }
    let grid = fit_grid(a, b, &filter_kinks(filter));
    let values: Vec<T> = grid.nodes.iter().map(|&x| filter.eval_zero_extended(x)).collect();
    weighted_fit(basis, degree, &grid.nodes, &grid.weights, &values)
}

/// A filter cut into disjoint pieces at `0 = λ₀ ≤ λ₁ ≤ … ≤ λ_n`. Piece `s`
/// (0-based) lives on `[λ_s, λ_{s+1})`; the last piece is closed.
#[derive(Clone, Debug)]
pub struct SliceSet<T> {
    pub filter: TargetFilter,
    /// `λ₀ = 0` followed by the eigenvalues.
    pub breakpoints: Vec<T>,
}

pub fn slice<T: Scalar>(filter: &TargetFilter, eigenvalues: &[T]) -> Result<SliceSet<T>> {
    check_sorted(eigenvalues)?;
    let mut breakpoints = Vec::with_capacity(eigenvalues.len() + 1);
    breakpoints.push(T::zero());
    breakpoints.extend_from_slice(eigenvalues);
    Ok(SliceSet {
        filter: filter.clone(),
        breakpoints,
    })
}

fn check_sorted<T: Scalar>(eigenvalues: &[T]) -> Result<()> {
    if let Some(i) = eigenvalues.windows(2).position(|w| !(w[0] <= w[1])) {
        return Err(Error::UnsortedInput { index: i + 1 });
    }
    check_points(eigenvalues)
}

impl<T: Scalar> SliceSet<T> {
    pub fn len(&self) -> usize {
        self.breakpoints.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn interval(&self, s: usize) -> (T, T) {
        (self.breakpoints[s], self.breakpoints[s + 1])
    }

    /// True when the piece has zero width.
    pub fn is_degenerate(&self, s: usize) -> bool {
        let (lo, hi) = self.interval(s);
        lo == hi
    }

    /// Index of the piece containing `x`, if any.
    pub fn index_of(&self, x: T) -> Option<usize> {
        let n = self.len();
        if n == 0 || x < self.breakpoints[0] || x > self.breakpoints[n] {
            return None;
        }
        if x == self.breakpoints[n] {
            return Some(n - 1);
        }
        // Number of upper endpoints λ_{s+1} ≤ x is the index of the piece.
        Some(self.breakpoints[1..].partition_point(|&b| b <= x))
    }

    /// `f_s(x)`: the filter on piece `s`, zero elsewhere.
    pub fn eval_slice(&self, s: usize, x: T) -> T {
        if self.index_of(x) == Some(s) {
            self.filter.eval_unchecked(x)
        } else {
            T::zero()
        }
    }

    /// `Σ_s f_s(x)`, summing every piece explicitly.
    pub fn eval_sum(&self, x: T) -> T {
        (0..self.len()).map(|s| self.eval_slice(s, x)).sum()
    }
}

/// Squared continuous error of the best degree-`D` fit to each zero-extended
/// slice over [0, 2]. All slices share one quadrature grid whose panels end
/// at every eigenvalue, so each error is `‖b_s‖² − ‖Qᵀ b_s‖²` for an
/// orthonormal basis `Q` of the weighted fit space.
pub fn slice_errors<T: Scalar>(filter: &TargetFilter, eigenvalues: &[T], basis: Basis, degree: usize) -> Result<Vec<T>> {
    let slices = slice(filter, eigenvalues)?;
    let mut cuts = eigenvalues.to_vec();
    cuts.extend(filter_kinks::<T>(filter));
    let grid = fit_grid(T::zero(), T::c(2.0), &cuts);
    let mut a = span_design(basis, degree, &grid.nodes)?.a;
    let sw: Vec<T> = grid.weights.iter().map(|w| w.sqrt()).collect();
    for (i, &s) in sw.iter().enumerate() {
        a.row_mut(i).iter_mut().for_each(|x| *x *= s);
    }
    let q = PivotedQr::new(&a).range_basis();
    let g: Vec<T> = grid
        .nodes
        .iter()
        .zip(&sw)
        .map(|(&x, &s)| s * filter.eval_unchecked(x))
        .collect();

    let mut out = Vec::with_capacity(slices.len());
    let mut proj = vec![0.0f64; q.cols()];
    for s in 0..slices.len() {
        let (lo, hi) = slices.interval(s);
        // Nodes are interior to panels, so strict bounds select the piece.
        let start = grid.nodes.partition_point(|&x| x <= lo);
        let end = grid.nodes.partition_point(|&x| x < hi);
        if start >= end {
            out.push(T::zero());
            continue;
        }
        proj.iter_mut().for_each(|p| *p = 0.0);
        let mut norm = 0.0f64;
        for i in start..end {
            let gi = g[i].f64();
            norm += gi * gi;
            for (p, &qij) in proj.iter_mut().zip(q.row(i)) {
                *p += qij.f64() * gi;
            }
        }
        let captured: f64 = proj.iter().map(|p| p * p).sum();
        out.push(T::c((norm - captured).max(0.0)));
    }
    Ok(out)
}
