use crate::dense::Matrix;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Householder QR with column pivoting, `A P = Q R`.
#[derive(Clone, Debug)]
pub struct PivotedQr<T> {
    rows: usize,
    cols: usize,
    /// R in the upper triangle; entries below the diagonal are unused.
    r: Matrix<T>,
    /// Householder vectors (full length `rows - k`) and their `2 / vᵀv` factors.
    reflectors: Vec<(Vec<T>, T)>,
    perm: Vec<usize>,
    rank: usize,
}

impl<T: Scalar> PivotedQr<T> {
    pub fn new(a: &Matrix<T>) -> Self {
        let (m, n) = a.shape();
        let mut r = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let steps = m.min(n);
        let mut reflectors = Vec::with_capacity(steps);

        for k in 0..steps {
            // Pivot on the largest remaining column norm.
            let mut best = k;
            let mut best_norm = -T::one();
            for j in k..n {
                let s: T = (k..m).map(|i| r[(i, j)] * r[(i, j)]).sum();
                if s > best_norm {
                    best_norm = s;
                    best = j;
                }
            }
            if best != k {
                for i in 0..m {
                    let tmp = r[(i, k)];
                    r[(i, k)] = r[(i, best)];
                    r[(i, best)] = tmp;
                }
                perm.swap(k, best);
            }

            let norm = best_norm.max(T::zero()).sqrt();
            let mut v: Vec<T> = (k..m).map(|i| r[(i, k)]).collect();
            if norm == T::zero() {
                reflectors.push((v, T::zero()));
                continue;
            }
            let alpha = if v[0] > T::zero() { -norm } else { norm };
            v[0] -= alpha;
            let vtv: T = v.iter().map(|&x| x * x).sum();
            let beta = if vtv == T::zero() { T::zero() } else { T::c(2.0) / vtv };
            r[(k, k)] = alpha;
            for i in (k + 1)..m {
                r[(i, k)] = T::zero();
            }
            for j in (k + 1)..n {
                let dot: T = v.iter().enumerate().map(|(t, &vi)| vi * r[(k + t, j)]).sum();
                let s = beta * dot;
                for (t, &vi) in v.iter().enumerate() {
                    r[(k + t, j)] -= s * vi;
                }
            }
            reflectors.push((v, beta));
        }

        let mut qr = Self {
            rows: m,
            cols: n,
            r,
            reflectors,
            perm,
            rank: 0,
        };
        qr.rank = qr.rank_with_tol(T::c(m.max(n).max(1) as f64) * T::epsilon());
        qr
    }

    fn rank_with_tol(&self, rel: T) -> usize {
        let steps = self.rows.min(self.cols);
        if steps == 0 {
            return 0;
        }
        let lead = self.r[(0, 0)].abs();
        if lead == T::zero() {
            return 0;
        }
        (0..steps)
            .take_while(|&k| self.r[(k, k)].abs() > rel * lead)
            .count()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_rank_deficient(&self) -> bool {
        self.rank < self.cols
    }

    pub fn permutation(&self) -> &[usize] {
        &self.perm
    }

    /// Applies `Qᵀ` to `b` in place.
    pub fn apply_qt(&self, b: &mut [T]) {
        for (k, (v, beta)) in self.reflectors.iter().enumerate() {
            if *beta == T::zero() {
                continue;
            }
            let dot: T = v.iter().zip(&b[k..]).map(|(&vi, &bi)| vi * bi).sum();
            let s = *beta * dot;
            for (bi, &vi) in b[k..].iter_mut().zip(v) {
                *bi -= s * vi;
            }
        }
    }

    /// Applies `Q` to `b` in place.
    pub fn apply_q(&self, b: &mut [T]) {
        for (k, (v, beta)) in self.reflectors.iter().enumerate().rev() {
            if *beta == T::zero() {
                continue;
            }
            let dot: T = v.iter().zip(&b[k..]).map(|(&vi, &bi)| vi * bi).sum();
            let s = *beta * dot;
            for (bi, &vi) in b[k..].iter_mut().zip(v) {
                *bi -= s * vi;
            }
        }
    }

    /// Orthonormal basis of the numerical column space (`rows × rank`).
    pub fn range_basis(&self) -> Matrix<T> {
        let mut q = Matrix::zeros(self.rows, self.rank);
        let mut e = vec![T::zero(); self.rows];
        for j in 0..self.rank {
            e.iter_mut().for_each(|x| *x = T::zero());
            e[j] = T::one();
            self.apply_q(&mut e);
            for i in 0..self.rows {
                q[(i, j)] = e[i];
            }
        }
        q
    }

    /// Least-squares solution; minimum norm when rank deficient.
    pub fn solve(&self, b: &[T]) -> Result<Vec<T>> {
        if b.len() != self.rows {
            return Err(Error::mismatch("PivotedQr::solve", (self.rows, self.cols), (b.len(), 1)));
        }
        let mut qtb = b.to_vec();
        self.apply_qt(&mut qtb);
        let r = self.rank;
        let mut y = vec![T::zero(); self.cols];
        if r == self.cols {
            back_substitute(&self.r, &qtb[..r], &mut y[..r]);
        } else if r > 0 {
            // Minimum-norm solution of [R11 R12] y = c via QR of its transpose.
            let top = Matrix::from_fn(self.cols, r, |j, i| if j >= i { self.r[(i, j)] } else { T::zero() });
            let inner = PivotedQr::new(&top);
            let c2: Vec<T> = inner.perm.iter().map(|&p| qtb[p]).collect();
            // Rᵀ w = c2, forward substitution.
            let mut w = vec![T::zero(); self.cols];
            for i in 0..r {
                let mut s = c2[i];
                for k in 0..i {
                    s -= inner.r[(k, i)] * w[k];
                }
                let diag = inner.r[(i, i)];
                w[i] = if diag == T::zero() { T::zero() } else { s / diag };
            }
            inner.apply_q(&mut w);
            y = w;
        }
        let mut x = vec![T::zero(); self.cols];
        for (k, &p) in self.perm.iter().enumerate() {
            x[p] = y[k];
        }
        Ok(x)
    }
}

fn back_substitute<T: Scalar>(r: &Matrix<T>, c: &[T], out: &mut [T]) {
    let n = c.len();
    for i in (0..n).rev() {
        let mut s = c[i];
        for j in (i + 1)..n {
            s -= r[(i, j)] * out[j];
        }
        out[i] = s / r[(i, i)];
    }
}

/// Solution of `min ‖A x − b‖₂` together with diagnostics.
#[derive(Clone, Debug)]
pub struct LeastSquares<T> {
    pub solution: Vec<T>,
    pub residual_sq: T,
    pub rank: usize,
    pub rank_deficient: bool,
}

pub fn least_squares<T: Scalar>(a: &Matrix<T>, b: &[T]) -> Result<LeastSquares<T>> {
    if a.rows() != b.len() {
        return Err(Error::mismatch("least_squares", a.shape(), (b.len(), 1)));
    }
    let qr = PivotedQr::new(a);
    let solution = qr.solve(b)?;
    let residual_sq = (0..a.rows())
        .map(|i| {
            let fit: T = a.row(i).iter().zip(&solution).map(|(&aij, &xj)| aij * xj).sum();
            let d = fit - b[i];
            d * d
        })
        .sum();
    Ok(LeastSquares {
        solution,
        residual_sq,
        rank: qr.rank(),
        rank_deficient: qr.is_rank_deficient(),
    })
}
