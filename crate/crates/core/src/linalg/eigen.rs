use crate::dense::Matrix;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::sparse::CsrMatrix;

/// Largest matrix order accepted by the dense eigensolver.
pub const DEFAULT_DENSE_LIMIT: usize = 4000;

const SYMMETRY_TOL: f64 = 1e-12;
const SPECTRUM_CLAMP: f64 = 1e-9;

/// Eigenpairs of a real symmetric matrix. Column `s` of `eigenvectors`
/// pairs with `eigenvalues[s]`; eigenvalues are ascending.
#[derive(Clone, Debug)]
pub struct EigenSystem<T> {
    pub eigenvalues: Vec<T>,
    pub eigenvectors: Matrix<T>,
}

impl<T: Scalar> EigenSystem<T> {
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    /// Eigenvalues with round-off excursions just outside [0, 2] pulled back
    /// onto the interval. Values further out are left untouched.
    pub fn laplacian_spectrum(&self) -> Vec<T> {
        let tol = T::c(SPECTRUM_CLAMP);
        let two = T::c(2.0);
        self.eigenvalues
            .iter()
            .map(|&v| {
                if v < T::zero() && v >= -tol {
                    T::zero()
                } else if v > two && v <= two + tol {
                    two
                } else {
                    v
                }
            })
            .collect()
    }

    /// `U diag(g) Uᵀ X` with the spectral response `g` given per eigenvalue.
    pub fn filter(&self, response: &[T], x: &Matrix<T>) -> Result<Matrix<T>> {
        let n = self.len();
        if response.len() != n || x.rows() != n {
            return Err(Error::mismatch("EigenSystem::filter", (n, n), x.shape()));
        }
        let mut coeffs = self.eigenvectors.t_matmul(x)?;
        for (s, &g) in response.iter().enumerate() {
            for v in coeffs.row_mut(s) {
                *v *= g;
            }
        }
        self.eigenvectors.matmul(&coeffs)
    }

    /// `U diag(λ) Uᵀ`.
    pub fn reconstruct(&self) -> Matrix<T> {
        let u = &self.eigenvectors;
        let scaled = Matrix::from_fn(u.rows(), u.cols(), |i, s| u[(i, s)] * self.eigenvalues[s]);
        scaled.matmul_t(u).expect("square factors")
    }
}

/// Eigendecomposition of a symmetric sparse matrix via a dense solver.
pub fn eigendecompose<T: Scalar>(m: &CsrMatrix<T>, limit: usize) -> Result<EigenSystem<T>> {
    if m.n_rows() != m.n_cols() {
        return Err(Error::mismatch("eigendecompose", m.shape(), (m.n_cols(), m.n_rows())));
    }
    if m.n_rows() > limit {
        return Err(Error::DimensionExceeded {
            n: m.n_rows(),
            limit,
        });
    }
    eigendecompose_dense(&m.to_dense(), limit)
}

/// Householder tridiagonalization followed by implicit QL iterations.
pub fn eigendecompose_dense<T: Scalar>(a: &Matrix<T>, limit: usize) -> Result<EigenSystem<T>> {
    let n = a.rows();
    if a.cols() != n {
        return Err(Error::mismatch("eigendecompose_dense", a.shape(), (n, n)));
    }
    if n > limit {
        return Err(Error::DimensionExceeded { n, limit });
    }
    let scale = a.max_abs().max(T::one());
    for i in 0..n {
        for j in (i + 1)..n {
            let diff = (a[(i, j)] - a[(j, i)]).abs();
            if diff > T::c(SYMMETRY_TOL) * scale {
                return Err(Error::NotSymmetric {
                    row: i,
                    col: j,
                    diff: diff.f64(),
                });
            }
        }
    }
    if n == 0 {
        return Ok(EigenSystem {
            eigenvalues: Vec::new(),
            eigenvectors: Matrix::zeros(0, 0),
        });
    }

    let mut v = a.clone();
    let mut d = vec![T::zero(); n];
    let mut e = vec![T::zero(); n];
    tred2(&mut v, &mut d, &mut e);
    // QL rotations mix columns of V; operate on rows of Vᵀ for locality.
    let mut vt = v.transpose();
    tql2(&mut vt, &mut d, &mut e);

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| d[i].partial_cmp(&d[j]).unwrap_or(std::cmp::Ordering::Equal));
    let eigenvalues = order.iter().map(|&i| d[i]).collect();
    let eigenvectors = Matrix::from_fn(n, n, |row, s| vt[(order[s], row)]);
    Ok(EigenSystem {
        eigenvalues,
        eigenvectors,
    })
}

fn tred2<T: Scalar>(v: &mut Matrix<T>, d: &mut [T], e: &mut [T]) {
    let n = d.len();
    for j in 0..n {
        d[j] = v[(n - 1, j)];
    }
    for i in (1..n).rev() {
        let mut scale = T::zero();
        let mut h = T::zero();
        for k in 0..i {
            scale += d[k].abs();
        }
        if scale == T::zero() {
            e[i] = d[i - 1];
            for j in 0..i {
                d[j] = v[(i - 1, j)];
                v[(i, j)] = T::zero();
                v[(j, i)] = T::zero();
            }
        } else {
            for k in 0..i {
                d[k] /= scale;
                h += d[k] * d[k];
            }
            let mut f = d[i - 1];
            let mut g = h.sqrt();
            if f > T::zero() {
                g = -g;
            }
            e[i] = scale * g;
            h -= f * g;
            d[i - 1] = f - g;
            for ej in e.iter_mut().take(i) {
                *ej = T::zero();
            }
            for j in 0..i {
                f = d[j];
                v[(j, i)] = f;
                g = e[j] + v[(j, j)] * f;
                for k in (j + 1)..i {
                    g += v[(k, j)] * d[k];
                    e[k] += v[(k, j)] * f;
                }
                e[j] = g;
            }
            f = T::zero();
            for j in 0..i {
                e[j] /= h;
                f += e[j] * d[j];
            }
            let hh = f / (h + h);
            for j in 0..i {
                e[j] -= hh * d[j];
            }
            for j in 0..i {
                f = d[j];
                g = e[j];
                for k in j..i {
                    let upd = f * e[k] + g * d[k];
                    v[(k, j)] -= upd;
                }
                d[j] = v[(i - 1, j)];
                v[(i, j)] = T::zero();
            }
        }
        d[i] = h;
    }

    for i in 0..n.saturating_sub(1) {
        v[(n - 1, i)] = v[(i, i)];
        v[(i, i)] = T::one();
        let h = d[i + 1];
        if h != T::zero() {
            for k in 0..=i {
                d[k] = v[(k, i + 1)] / h;
            }
            for j in 0..=i {
                let mut g = T::zero();
                for k in 0..=i {
                    g += v[(k, i + 1)] * v[(k, j)];
                }
                for k in 0..=i {
                    let upd = g * d[k];
                    v[(k, j)] -= upd;
                }
            }
        }
        for k in 0..=i {
            v[(k, i + 1)] = T::zero();
        }
    }
    for j in 0..n {
        d[j] = v[(n - 1, j)];
        v[(n - 1, j)] = T::zero();
    }
    v[(n - 1, n - 1)] = T::one();
    e[0] = T::zero();
}

/// Implicit QL on the tridiagonal (d, e). `vt` holds the transposed
/// accumulated transform, so rotations touch two contiguous rows.
fn tql2<T: Scalar>(vt: &mut Matrix<T>, d: &mut [T], e: &mut [T]) {
    let n = d.len();
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = T::zero();

    let mut f = T::zero();
    let mut tst1 = T::zero();
    let eps = T::epsilon();
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n {
            if e[m].abs() <= eps * tst1 {
                break;
            }
            m += 1;
        }
        if m > l {
            loop {
                let mut g = d[l];
                let mut p = (d[l + 1] - g) / (T::c(2.0) * e[l]);
                let mut r = p.hypot(T::one());
                if p < T::zero() {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for di in d.iter_mut().skip(l + 2) {
                    *di -= h;
                }
                f += h;

                p = d[m];
                let mut c = T::one();
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = T::zero();
                let mut s2 = T::zero();
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    g = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    rotate_rows(vt, i, c, s);
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = T::zero();
    }
}

#[inline]
fn rotate_rows<T: Scalar>(vt: &mut Matrix<T>, i: usize, c: T, s: T) {
    let cols = vt.cols();
    let data = vt.as_mut_slice();
    let (head, tail) = data.split_at_mut((i + 1) * cols);
    let row_i = &mut head[i * cols..];
    let row_next = &mut tail[..cols];
    for (a, b) in row_i.iter_mut().zip(row_next.iter_mut()) {
        let h = *b;
        *b = s * *a + c * h;
        *a = c * *a - s * h;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn orthonormality_error(u: &Matrix<f64>) -> f64 {
        let g = u.t_matmul(u).unwrap();
        g.max_abs_diff(&Matrix::identity(u.cols())).unwrap()
    }

    #[test]
    fn identity_has_unit_spectrum() {
        let es = eigendecompose_dense(&Matrix::<f64>::identity(3), 10).unwrap();
        for &l in &es.eigenvalues {
            assert!((l - 1.0).abs() < 1e-14);
        }
        assert!(orthonormality_error(&es.eigenvectors) < 1e-12);
        let rec = es.reconstruct();
        assert!(rec.sub(&Matrix::identity(3)).unwrap().frobenius_norm() < 1e-12);
    }

    #[test]
    fn triangle_laplacian_spectrum() {
        let l = Matrix::from_rows(&[
            vec![1.0, -0.5, -0.5],
            vec![-0.5, 1.0, -0.5],
            vec![-0.5, -0.5, 1.0],
        ])
        .unwrap();
        let es = eigendecompose_dense(&l, 10).unwrap();
        let expected = [0.0f64, 1.5, 1.5];
        for (a, b) in es.eigenvalues.iter().zip(expected) {
            assert!((a - b).abs() < 1e-12, "{a} vs {b}");
        }
    }

    #[test]
    fn rejects_asymmetric_and_oversized() {
        let a = Matrix::from_rows(&[vec![1.0, 2.0], vec![0.0, 1.0]]).unwrap();
        assert!(matches!(
            eigendecompose_dense(&a, 10),
            Err(Error::NotSymmetric { .. })
        ));
        assert!(matches!(
            eigendecompose_dense(&Matrix::<f64>::identity(5), 4),
            Err(Error::DimensionExceeded { n: 5, limit: 4 })
        ));
    }

    #[test]
    fn single_precision_reconstruction() {
        let a = Matrix::<f32>::from_rows(&[vec![2.0, 1.0], vec![1.0, 2.0]]).unwrap();
        let es = eigendecompose_dense(&a, 10).unwrap();
        assert!((es.eigenvalues[0] - 1.0).abs() < 1e-6);
        assert!((es.eigenvalues[1] - 3.0).abs() < 1e-6);
        assert!(es.reconstruct().sub(&a).unwrap().frobenius_norm() < 1e-5);
    }
}
