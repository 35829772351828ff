use crate::dense::Matrix;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Supervision for a subset of rows.
#[derive(Clone, Copy, Debug)]
pub enum Targets<'a, T> {
    /// Class index per node.
    Labels(&'a [usize]),
    /// Regression target, same shape as the model output.
    Values(&'a Matrix<T>),
}

impl<T: Scalar> Targets<'_, T> {
    pub fn is_classification(&self) -> bool {
        matches!(self, Targets::Labels(_))
    }
}

/// Mean softmax cross-entropy over `rows` (repeats count with multiplicity);
/// the gradient is zero elsewhere.
pub fn cross_entropy<T: Scalar>(logits: &Matrix<T>, labels: &[usize], rows: &[usize]) -> Result<(T, Matrix<T>)> {
    if labels.len() != logits.rows() {
        return Err(Error::mismatch("cross_entropy", logits.shape(), (labels.len(), 1)));
    }
    let mut grad = Matrix::zeros(logits.rows(), logits.cols());
    if rows.is_empty() {
        return Ok((T::zero(), grad));
    }
    let inv = T::one() / T::from_usize_lossy(rows.len());
    let mut total = T::zero();
    for &i in rows {
        let z = logits.row(i);
        let label = labels[i];
        if label >= z.len() {
            return Err(Error::InvalidParameter(format!("label {label} of node {i} exceeds {} classes", z.len())));
        }
        let max = z.iter().copied().fold(T::neg_infinity(), T::max);
        let sum: T = z.iter().map(|&v| (v - max).exp()).sum();
        let log_sum = sum.ln() + max;
        total += log_sum - z[label];
        let g = grad.row_mut(i);
        for (c, gv) in g.iter_mut().enumerate() {
            *gv += (z[c] - log_sum).exp() * inv;
        }
        g[label] -= inv;
    }
    Ok((total * inv, grad))
}

/// Mean squared error over every entry of `rows`.
pub fn mse<T: Scalar>(out: &Matrix<T>, target: &Matrix<T>, rows: &[usize]) -> Result<(T, Matrix<T>)> {
    if out.shape() != target.shape() {
        return Err(Error::mismatch("mse", out.shape(), target.shape()));
    }
    let mut grad = Matrix::zeros(out.rows(), out.cols());
    if rows.is_empty() || out.cols() == 0 {
        return Ok((T::zero(), grad));
    }
    let count = T::from_usize_lossy(rows.len() * out.cols());
    let mut total = T::zero();
    for &i in rows {
        let g = grad.row_mut(i);
        for ((gv, &o), &t) in g.iter_mut().zip(out.row(i)).zip(target.row(i)) {
            let d = o - t;
            total += d * d;
            *gv += T::c(2.0) * d / count;
        }
    }
    Ok((total / count, grad))
}

pub fn loss_and_grad<T: Scalar>(out: &Matrix<T>, targets: Targets<'_, T>, rows: &[usize]) -> Result<(T, Matrix<T>)> {
    match targets {
        Targets::Labels(labels) => cross_entropy(out, labels, rows),
        Targets::Values(y) => mse(out, y, rows),
    }
}

/// Fraction of `rows` whose arg-max logit equals the label; ties go to the
/// lowest class index.
pub fn accuracy<T: Scalar>(logits: &Matrix<T>, labels: &[usize], rows: &[usize]) -> f64 {
    if rows.is_empty() {
        return 0.0;
    }
    let hits = rows
        .iter()
        .filter(|&&i| {
            let z = logits.row(i);
            let mut best = 0;
            for c in 1..z.len() {
                if z[c] > z[best] {
                    best = c;
                }
            }
            best == labels[i]
        })
        .count();
    hits as f64 / rows.len() as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_logits_cost_log_classes() {
        let z = Matrix::<f64>::zeros(2, 4);
        let (l, g) = cross_entropy(&z, &[1, 3], &[0, 1]).unwrap();
        assert!((l - 4f64.ln()).abs() < 1e-14);
        let row_sum: f64 = g.row(0).iter().sum();
        assert!(row_sum.abs() < 1e-15);
    }

    #[test]
    fn mse_zero_at_target() {
        let y = Matrix::from_fn(3, 2, |i, j| (i + j) as f64);
        let (l, g) = mse(&y, &y, &[0, 2]).unwrap();
        assert_eq!(l, 0.0);
        assert_eq!(g.max_abs(), 0.0);
    }

    #[test]
    fn accuracy_counts_argmax() {
        let z = Matrix::from_rows(&[vec![0.1, 0.9], vec![2.0, -1.0], vec![0.0, 0.0]]).unwrap();
        assert_eq!(accuracy(&z, &[1, 1, 0], &[0, 1, 2]), 2.0 / 3.0);
    }
}
