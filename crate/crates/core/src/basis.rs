//! Polynomial bases on the spectral domain [0, 2].

use std::fmt;
use std::str::FromStr;

use crate::dense::Matrix;
use crate::error::{Error, Result};
use crate::linalg::PivotedQr;
use crate::scalar::Scalar;
use crate::trig::taylor_tables;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Basis {
    /// `x^d`.
    Monomial,
    /// First-kind Chebyshev `T_d(x − 1)`.
    Chebyshev,
    /// `C(D, d) (x/2)^d (1 − x/2)^{D−d}`.
    Bernstein,
    /// Taylor-decomposed trigonometric filter of order `order`; the fitted
    /// polynomial lives in the span of the decomposed sin/cos terms.
    TrigTpd { order: usize, omega: f64 },
}

impl Basis {
    pub fn name(&self) -> &'static str {
        match self {
            Basis::Monomial => "monomial",
            Basis::Chebyshev => "chebyshev",
            Basis::Bernstein => "bernstein",
            Basis::TrigTpd { .. } => "trig_tpd",
        }
    }
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Basis::TrigTpd { order, omega } => write!(f, "trig_tpd(K={order}, omega={omega})"),
            b => f.write_str(b.name()),
        }
    }
}

/// Parses `monomial`, `chebyshev`, `bernstein`; `trig_tpd` takes the default
/// order 10 and ω = 0.2π unless set afterwards.
impl FromStr for Basis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "monomial" => Ok(Basis::Monomial),
            "chebyshev" => Ok(Basis::Chebyshev),
            "bernstein" => Ok(Basis::Bernstein),
            "trig_tpd" | "trig" => Ok(Basis::TrigTpd {
                order: 10,
                omega: 0.2 * std::f64::consts::PI,
            }),
            other => Err(Error::InvalidParameter(format!("unknown basis '{other}'"))),
        }
    }
}

fn check_domain<T: Scalar>(x: T) -> Result<()> {
    let xf = x.f64();
    if !(0.0..=2.0).contains(&xf) {
        return Err(Error::Domain { x: xf, lo: 0.0, hi: 2.0 });
    }
    Ok(())
}

/// Value of the `d`-th basis function of a degree-`degree` family at `x`.
/// The trigonometric family is expressed in monomial coordinates.
pub fn eval_basis<T: Scalar>(basis: Basis, d: usize, degree: usize, x: T) -> Result<T> {
    check_domain(x)?;
    if d > degree {
        return Err(Error::InvalidParameter(format!("basis index {d} exceeds degree {degree}")));
    }
    Ok(basis_row(basis, degree, x)[d])
}

/// All `degree + 1` basis values at `x`, without a domain check.
pub fn basis_row<T: Scalar>(basis: Basis, degree: usize, x: T) -> Vec<T> {
    let mut row = vec![T::zero(); degree + 1];
    match basis {
        Basis::Monomial | Basis::TrigTpd { .. } => {
            let mut p = T::one();
            for v in row.iter_mut() {
                *v = p;
                p *= x;
            }
        }
        Basis::Chebyshev => {
            let t = x - T::one();
            row[0] = T::one();
            if degree >= 1 {
                row[1] = t;
            }
            for d in 2..=degree {
                row[d] = T::c(2.0) * t * row[d - 1] - row[d - 2];
            }
        }
        Basis::Bernstein => {
            let u = x / T::c(2.0);
            let v = T::one() - u;
            let mut binom = 1.0f64;
            for (d, out) in row.iter_mut().enumerate() {
                if d > 0 {
                    binom = binom * (degree + 1 - d) as f64 / d as f64;
                }
                *out = T::c(binom) * u.powi(d as i32) * v.powi((degree - d) as i32);
            }
        }
    }
    row
}

/// Design matrix with one row per point.
pub fn design_matrix<T: Scalar>(basis: Basis, degree: usize, points: &[T]) -> Matrix<T> {
    let mut a = Matrix::zeros(points.len(), degree + 1);
    for (i, &x) in points.iter().enumerate() {
        a.row_mut(i).copy_from_slice(&basis_row(basis, degree, x));
    }
    a
}

/// For the trigonometric family: an orthonormal basis `Q` (monomial
/// coordinates, `(D+1) × r`) of the polynomials reachable through the
/// Taylor tables, i.e. the range of `[Γ; Θ]ᵀ`.
pub(crate) fn trig_span<T: Scalar>(order: usize, omega: f64, degree: usize) -> Result<(Matrix<T>, PivotedQr<T>)> {
    let tables = taylor_tables(order, T::c(omega), degree)?;
    let mt = tables.stacked().transpose();
    let qr = PivotedQr::new(&mt);
    Ok((qr.range_basis(), qr))
}
