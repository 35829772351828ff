//! Trigonometric graph filter `Σ_k α_k sin(kωλ) + β_k cos(kωλ)` and its
//! Taylor-based parameter decomposition into a plain power series in λ.
//!
//! Every sin/cos term is replaced by its degree-`D` Maclaurin polynomial,
//! so the whole filter collapses to `Σ_d λ^d (α·Γ[:, d] + β·Θ[:, d])` and a
//! convolution needs nothing beyond repeated sparse products with `L`.
//! The truncation is only faithful while `k·ω·λ` stays moderate: the
//! Lagrange remainder of a single term is bounded by `(2kω)^{D+1}/(D+1)!`
//! on [0, 2]. For node classification the useful region is roughly
//! `K·ω ∈ (0.6π, 1.2π)`; beyond it the decomposed polynomial is still a
//! valid filter but no longer tracks the trigonometric series.

use std::fmt::Write as _;
use std::io::Read;
use std::path::Path;

use crate::error::{Error, Result};
use crate::filters::TargetFilter;
use crate::quadrature::{QuadratureGrid, GAUSS_ORDER};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub struct TrigParams<T> {
    order: usize,
    omega: T,
    pub alpha: Vec<T>,
    pub beta: Vec<T>,
}

impl<T: Scalar> TrigParams<T> {
    pub fn new(omega: T, alpha: Vec<T>, beta: Vec<T>) -> Result<Self> {
        validate_omega(omega)?;
        if alpha.is_empty() || alpha.len() != beta.len() {
            return Err(Error::InvalidParameter(format!(
                "alpha and beta must both have K+1 entries (got {} and {})",
                alpha.len(),
                beta.len()
            )));
        }
        Ok(Self {
            order: alpha.len() - 1,
            omega,
            alpha,
            beta,
        })
    }

    pub fn zeros(order: usize, omega: T) -> Result<Self> {
        Self::new(omega, vec![T::zero(); order + 1], vec![T::zero(); order + 1])
    }

    /// β₀ = 1 and everything else zero: the all-pass filter.
    pub fn identity(order: usize, omega: T) -> Result<Self> {
        let mut p = Self::zeros(order, omega)?;
        p.beta[0] = T::one();
        Ok(p)
    }

    /// Truncation order `K`.
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn omega(&self) -> T {
        self.omega
    }

    pub fn parameter_count(&self) -> usize {
        2 * (self.order + 1)
    }

    /// Same filter with `extra` zero-weight harmonics appended.
    pub fn extended(&self, extra: usize) -> Self {
        let mut p = self.clone();
        p.alpha.resize(self.order + 1 + extra, T::zero());
        p.beta.resize(self.order + 1 + extra, T::zero());
        p.order += extra;
        p
    }

    /// Serializes as `key = value` lines.
    pub fn to_kv_string(&self) -> String {
        let list = |v: &[T]| {
            v.iter()
                .map(|x| format!("{:?}", x.f64()))
                .collect::<Vec<_>>()
                .join(", ")
        };
        let mut s = String::new();
        writeln!(s, "# trigonometric filter parameters").unwrap();
        writeln!(s, "K = {}", self.order).unwrap();
        writeln!(s, "omega = {:?}", self.omega.f64()).unwrap();
        writeln!(s, "alpha = [{}]", list(&self.alpha)).unwrap();
        writeln!(s, "beta = [{}]", list(&self.beta)).unwrap();
        s
    }

    pub fn from_kv_str(text: &str) -> Result<Self> {
        let mut order: Option<usize> = None;
        let mut omega: Option<f64> = None;
        let mut alpha: Option<Vec<T>> = None;
        let mut beta: Option<Vec<T>> = None;
        for (lineno, line) in text.lines().enumerate() {
            let t = line.trim();
            if t.is_empty() || t.starts_with('#') {
                continue;
            }
            let (key, value) = t
                .split_once('=')
                .ok_or_else(|| Error::Format(format!("line {}: expected key = value", lineno + 1)))?;
            let bad = || Error::Format(format!("line {}: cannot parse '{}'", lineno + 1, value.trim()));
            let parse_list = |v: &str| -> Result<Vec<T>> {
                let inner = v.trim().strip_prefix('[').and_then(|s| s.strip_suffix(']')).ok_or_else(bad)?;
                if inner.trim().is_empty() {
                    return Ok(Vec::new());
                }
                inner
                    .split(',')
                    .map(|s| s.trim().parse::<f64>().map(T::c).map_err(|_| bad()))
                    .collect()
            };
            match key.trim() {
                "K" => order = Some(value.trim().parse().map_err(|_| bad())?),
                "omega" => omega = Some(value.trim().parse().map_err(|_| bad())?),
                "alpha" => alpha = Some(parse_list(value)?),
                "beta" => beta = Some(parse_list(value)?),
                other => return Err(Error::Format(format!("line {}: unknown key '{other}'", lineno + 1))),
            }
        }
        let missing = |k: &str| Error::Format(format!("missing key '{k}'"));
        let order = order.ok_or_else(|| missing("K"))?;
        let params = Self::new(
            T::c(omega.ok_or_else(|| missing("omega"))?),
            alpha.ok_or_else(|| missing("alpha"))?,
            beta.ok_or_else(|| missing("beta"))?,
        )?;
        if params.order != order {
            return Err(Error::Format(format!(
                "K = {order} but coefficient vectors have {} entries",
                params.order + 1
            )));
        }
        Ok(params)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_kv_string())?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let mut s = String::new();
        std::fs::File::open(path)?.read_to_string(&mut s)?;
        Self::from_kv_str(&s)
    }
}

fn validate_omega<T: Scalar>(omega: T) -> Result<()> {
    if !(omega > T::zero() && omega < T::PI()) {
        return Err(Error::InvalidParameter(format!(
            "base frequency omega = {omega} must lie in (0, π)"
        )));
    }
    Ok(())
}

/// Maclaurin coefficients of `sin(kωλ)` (Γ) and `cos(kωλ)` (Θ), each
/// `(K+1) × (D+1)`, stored row-major by harmonic `k`.
#[derive(Clone, Debug, PartialEq)]
pub struct TaylorTables<T> {
    order: usize,
    degree: usize,
    omega: T,
    gamma: Vec<T>,
    theta: Vec<T>,
}

pub fn taylor_tables<T: Scalar>(order: usize, omega: T, degree: usize) -> Result<TaylorTables<T>> {
    validate_omega(omega)?;
    let width = degree + 1;
    let mut gamma = vec![T::zero(); (order + 1) * width];
    let mut theta = vec![T::zero(); (order + 1) * width];
    for k in 0..=order {
        let kw = T::from_usize_lossy(k) * omega;
        // (kω)^d / d!, built incrementally.
        let mut term = T::one();
        for d in 0..=degree {
            if d > 0 {
                term = term * kw / T::from_usize_lossy(d);
            }
            let sign = if (d / 2) % 2 == 0 { T::one() } else { -T::one() };
            if d % 2 == 1 {
                gamma[k * width + d] = sign * term;
            } else {
                theta[k * width + d] = sign * term;
            }
        }
    }
    Ok(TaylorTables {
        order,
        degree,
        omega,
        gamma,
        theta,
    })
}

impl<T: Scalar> TaylorTables<T> {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn omega(&self) -> T {
        self.omega
    }

    #[inline]
    pub fn gamma(&self, k: usize, d: usize) -> T {
        self.gamma[k * (self.degree + 1) + d]
    }

    #[inline]
    pub fn theta(&self, k: usize, d: usize) -> T {
        self.theta[k * (self.degree + 1) + d]
    }

    fn check(&self, params: &TrigParams<T>) -> Result<()> {
        if params.order != self.order {
            return Err(Error::DegreeMismatch {
                available: self.order,
                required: params.order,
            });
        }
        if params.omega != self.omega {
            return Err(Error::InvalidParameter(format!(
                "tables built for omega = {} but parameters use {}",
                self.omega, params.omega
            )));
        }
        Ok(())
    }

    /// `c_d = α·Γ[:, d] + β·Θ[:, d]`, accumulated in f64 in ascending `k`.
    pub fn effective_coefficients(&self, params: &TrigParams<T>) -> Result<Vec<T>> {
        self.check(params)?;
        Ok((0..=self.degree)
            .map(|d| {
                let mut acc = 0.0f64;
                for k in 0..=self.order {
                    acc += params.alpha[k].f64() * self.gamma(k, d).f64();
                    acc += params.beta[k].f64() * self.theta(k, d).f64();
                }
                T::c(acc)
            })
            .collect())
    }

    /// Chain rule through `c = Γᵀα + Θᵀβ`: maps ∂/∂c to (∂/∂α, ∂/∂β).
    pub fn pullback(&self, grad_c: &[T]) -> (Vec<T>, Vec<T>) {
        let mut ga = vec![T::zero(); self.order + 1];
        let mut gb = vec![T::zero(); self.order + 1];
        for k in 0..=self.order {
            for (d, &g) in grad_c.iter().enumerate().take(self.degree + 1) {
                ga[k] += self.gamma(k, d) * g;
                gb[k] += self.theta(k, d) * g;
            }
        }
        (ga, gb)
    }

    /// The `2(K+1) × (D+1)` map from stacked (α, β) to polynomial coefficients.
    pub fn stacked(&self) -> crate::dense::Matrix<T> {
        let k1 = self.order + 1;
        crate::dense::Matrix::from_fn(2 * k1, self.degree + 1, |r, d| {
            if r < k1 {
                self.gamma(r, d)
            } else {
                self.theta(r - k1, d)
            }
        })
    }
}

/// Horner evaluation of `Σ_d c_d x^d`.
pub fn eval_power_series<T: Scalar>(coeffs: &[T], x: T) -> T {
    coeffs.iter().rev().fold(T::zero(), |acc, &c| acc * x + c)
}

fn check_domain<T: Scalar>(x: T) -> Result<()> {
    let xf = x.f64();
    if !(0.0..=2.0).contains(&xf) {
        return Err(Error::Domain { x: xf, lo: 0.0, hi: 2.0 });
    }
    Ok(())
}

/// Exact trigonometric response with transcendental sin/cos.
pub fn eval_trig_exact<T: Scalar>(params: &TrigParams<T>, x: T) -> Result<T> {
    check_domain(x)?;
    Ok((0..=params.order)
        .map(|k| {
            let arg = T::from_usize_lossy(k) * params.omega * x;
            params.alpha[k] * arg.sin() + params.beta[k] * arg.cos()
        })
        .sum())
}

/// Response of the Taylor-decomposed polynomial.
pub fn eval_trig_tpd<T: Scalar>(params: &TrigParams<T>, tables: &TaylorTables<T>, x: T) -> Result<T> {
    let c = tables.effective_coefficients(params)?;
    Ok(eval_power_series(&c, x))
}

/// Sine and cosine coefficients of `f` for the system `{sin(kωx), cos(kωx)}`
/// on one period `[0, 2π/ω]`, with `f` taken as zero outside its support.
pub fn fourier_coeffs<T: Scalar>(filter: &TargetFilter, omega: T, k_max: usize) -> Result<(Vec<T>, Vec<T>)> {
    validate_omega(omega)?;
    let (lo, hi) = fourier_window(filter, omega);
    let alpha_beta_len = k_max + 1;
    if hi <= lo {
        return Ok((vec![T::zero(); alpha_beta_len], vec![T::zero(); alpha_beta_len]));
    }
    let grid = fourier_grid(lo, hi, omega, k_max);
    let values: Vec<T> = grid.nodes.iter().map(|&x| filter.eval_zero_extended(x)).collect();
    let scale = omega / T::PI();
    let mut alpha = vec![T::zero(); alpha_beta_len];
    let mut beta = vec![T::zero(); alpha_beta_len];
    for k in 0..=k_max {
        let kw = T::from_usize_lossy(k) * omega;
        let (mut sa, mut sb) = (T::zero(), T::zero());
        for ((&x, &w), &fx) in grid.nodes.iter().zip(&grid.weights).zip(&values) {
            let (s, c) = (kw * x).sin_cos();
            sa += w * fx * s;
            sb += w * fx * c;
        }
        alpha[k] = scale * sa;
        beta[k] = scale * sb;
    }
    Ok((alpha, beta))
}

/// Integration window `[0, 2π/ω] ∩ support(f)`.
pub fn fourier_window<T: Scalar>(filter: &TargetFilter, omega: T) -> (T, T) {
    let period = T::c(2.0) * T::PI() / omega;
    let (slo, shi) = filter.support();
    (T::c(slo.max(0.0)), T::c(shi).min(period))
}

pub(crate) fn fourier_grid<T: Scalar>(lo: T, hi: T, omega: T, k_max: usize) -> QuadratureGrid<T> {
    let mut width = T::c(0.02);
    if k_max > 0 {
        width = width.min(T::PI() * omega / T::c(10.0 * k_max as f64));
    }
    QuadratureGrid::composite(lo, hi, &[], width, GAUSS_ORDER)
}

/// Tail maxima `m_j = max_{k ≥ j} max(|α_k|, |β_k|)`.
#[derive(Clone, Debug, PartialEq)]
pub struct DecayReport<T> {
    pub tail_max: Vec<T>,
    /// `m_{K/2} / m_0`, zero when all coefficients vanish.
    pub half_ratio: T,
}

impl<T: Scalar> DecayReport<T> {
    /// `m_j / m_i`, zero when `m_i` is zero.
    pub fn ratio(&self, j: usize, i: usize) -> T {
        let den = self.tail_max[i];
        if den == T::zero() {
            T::zero()
        } else {
            self.tail_max[j] / den
        }
    }
}

pub fn decay_report<T: Scalar>(alpha: &[T], beta: &[T]) -> DecayReport<T> {
    let n = alpha.len().min(beta.len());
    let mut tail_max = vec![T::zero(); n];
    let mut running = T::zero();
    for k in (0..n).rev() {
        running = running.max(alpha[k].abs()).max(beta[k].abs());
        tail_max[k] = running;
    }
    let mut report = DecayReport {
        tail_max,
        half_ratio: T::zero(),
    };
    if n > 0 {
        report.half_ratio = report.ratio((n - 1) / 2, 0);
    }
    report
}
