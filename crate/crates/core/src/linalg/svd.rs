use crate::dense::Matrix;
use crate::scalar::Scalar;

/// Singular values by one-sided Jacobi rotations, descending.
/// Returns `min(rows, cols)` values.
pub fn singular_values<T: Scalar>(a: &Matrix<T>) -> Vec<T> {
    let work = if a.rows() >= a.cols() { a.transpose() } else { a.clone() };
    // Rows of `work` are the columns being orthogonalized.
    let mut w = work;
    let k = w.rows();
    let len = w.cols();
    let tol = T::epsilon() * T::c(len.max(1) as f64);
    for _sweep in 0..60 {
        let mut rotated = false;
        for p in 0..k {
            for q in (p + 1)..k {
                let (mut alpha, mut beta, mut gamma) = (T::zero(), T::zero(), T::zero());
                for t in 0..len {
                    let x = w[(p, t)];
                    let y = w[(q, t)];
                    alpha += x * x;
                    beta += y * y;
                    gamma += x * y;
                }
                if gamma == T::zero() || gamma.abs() <= tol * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (T::c(2.0) * gamma);
                let sign = if zeta >= T::zero() { T::one() } else { -T::one() };
                let t = sign / (zeta.abs() + (T::one() + zeta * zeta).sqrt());
                let c = T::one() / (T::one() + t * t).sqrt();
                let s = c * t;
                for col in 0..len {
                    let x = w[(p, col)];
                    let y = w[(q, col)];
                    w[(p, col)] = c * x - s * y;
                    w[(q, col)] = s * x + c * y;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut sv: Vec<T> = (0..k)
        .map(|i| w.row(i).iter().map(|&v| v * v).sum::<T>().sqrt())
        .collect();
    sv.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
    sv
}

pub fn min_singular_value<T: Scalar>(a: &Matrix<T>) -> T {
    singular_values(a).last().copied().unwrap_or(T::zero())
}
