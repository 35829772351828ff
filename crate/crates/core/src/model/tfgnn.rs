//! Decoupled trigonometric GNN. The medium variant transforms features with
//! the MLP and then convolves (`Z = p(L) · MLP(X)`); the large variant
//! applies the MLP to precomputed propagated features
//! (`Z = MLP(Σ_d c_d L^d X)`). Only α, β and the MLP parameters train;
//! ω, K and the Taylor tables are fixed.

use crate::conv::{power_series_convolve, precompute, PropagatedFeatures};
use crate::dense::Matrix;
use crate::error::{Error, Result};
use crate::model::mlp::{LayerGrad, Mlp, MlpCache};
use crate::scalar::Scalar;
use crate::sparse::CsrMatrix;
use crate::trig::{taylor_tables, TaylorTables, TrigParams};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variant {
    /// Convolution after the MLP.
    Medium,
    /// MLP after precomputed convolution.
    Large,
}

impl std::str::FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "medium" => Ok(Variant::Medium),
            "large" => Ok(Variant::Large),
            other => Err(Error::InvalidParameter(format!("unknown model variant '{other}'"))),
        }
    }
}

impl Variant {
    pub fn name(self) -> &'static str {
        match self {
            Variant::Medium => "medium",
            Variant::Large => "large",
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub enum ModelInput<'a, T> {
    Graph {
        laplacian: &'a CsrMatrix<T>,
        features: &'a Matrix<T>,
    },
    Precomputed(&'a PropagatedFeatures<T>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct TfgnnModel<T> {
    pub variant: Variant,
    pub mlp: Mlp<T>,
    trig: TrigParams<T>,
    tables: TaylorTables<T>,
}

#[derive(Clone, Debug)]
pub struct ForwardCache<T> {
    mlp: MlpCache<T>,
    /// Medium variant: `[H, L H, …, L^D H]` for the MLP output `H`.
    powers: Option<PropagatedFeatures<T>>,
    coeffs: Vec<T>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Gradients<T> {
    pub mlp: Vec<LayerGrad<T>>,
    pub alpha: Vec<T>,
    pub beta: Vec<T>,
}

impl<T: Scalar> Gradients<T> {
    /// Parameter groups in the same order as [`TfgnnModel::parameter_groups`].
    pub fn groups(&self) -> Vec<&[T]> {
        let mut out: Vec<&[T]> = Vec::with_capacity(2 * self.mlp.len() + 2);
        for g in &self.mlp {
            out.push(g.weight.as_slice());
            out.push(&g.bias);
        }
        out.push(&self.alpha);
        out.push(&self.beta);
        out
    }
}

impl<T: Scalar> TfgnnModel<T> {
    /// Model starting from the all-pass filter (β₀ = 1).
    pub fn new(variant: Variant, mlp: Mlp<T>, order: usize, omega: T, degree: usize) -> Result<Self> {
        Ok(Self {
            variant,
            mlp,
            trig: TrigParams::identity(order, omega)?,
            tables: taylor_tables(order, omega, degree)?,
        })
    }

    pub fn trig(&self) -> &TrigParams<T> {
        &self.trig
    }

    pub fn tables(&self) -> &TaylorTables<T> {
        &self.tables
    }

    pub fn degree(&self) -> usize {
        self.tables.degree()
    }

    pub fn set_trig(&mut self, params: TrigParams<T>) -> Result<()> {
        if params.order() != self.tables.order() || params.omega() != self.tables.omega() {
            return Err(Error::InvalidParameter(format!(
                "filter (K = {}, ω = {}) does not match the model (K = {}, ω = {})",
                params.order(),
                params.omega(),
                self.tables.order(),
                self.tables.omega()
            )));
        }
        self.trig = params;
        Ok(())
    }

    /// Number of trainable convolution parameters, `2(K+1)`.
    pub fn filter_parameter_count(&self) -> usize {
        self.trig.parameter_count()
    }

    pub fn parameter_count(&self) -> usize {
        self.mlp.parameter_count() + self.filter_parameter_count()
    }

    /// Mutable parameter groups with a flag telling whether each belongs to
    /// the filter (α, β) rather than the MLP.
    pub fn parameter_groups(&mut self) -> (Vec<&mut [T]>, Vec<bool>) {
        let mut groups: Vec<&mut [T]> = Vec::new();
        let mut is_filter = Vec::new();
        for layer in &mut self.mlp.layers {
            groups.push(layer.weight.as_mut_slice());
            groups.push(&mut layer.bias);
            is_filter.extend([false, false]);
        }
        groups.push(&mut self.trig.alpha);
        groups.push(&mut self.trig.beta);
        is_filter.extend([true, true]);
        (groups, is_filter)
    }

    fn check_input(&self, input: &ModelInput<'_, T>) -> Result<()> {
        match (self.variant, input) {
            (Variant::Medium, ModelInput::Graph { .. }) => Ok(()),
            (Variant::Large, ModelInput::Precomputed(f)) if f.degree() >= self.degree() => Ok(()),
            (Variant::Large, ModelInput::Precomputed(f)) => Err(Error::DegreeMismatch {
                available: f.degree(),
                required: self.degree(),
            }),
            (Variant::Medium, _) => Err(Error::VariantInputMismatch("the medium variant needs the Laplacian and raw features")),
            (Variant::Large, _) => Err(Error::VariantInputMismatch("the large variant needs precomputed propagated features")),
        }
    }

    pub fn forward(&self, input: ModelInput<'_, T>, train: bool, seed: u64) -> Result<(Matrix<T>, ForwardCache<T>)> {
        self.check_input(&input)?;
        let coeffs = self.tables.effective_coefficients(&self.trig)?;
        match input {
            ModelInput::Graph { laplacian, features } => {
                let (h, mlp) = self.mlp.forward(features, train, seed)?;
                let powers = precompute(laplacian, &h, self.degree())?;
                let z = powers.combine(&coeffs)?;
                Ok((
                    z,
                    ForwardCache {
                        mlp,
                        powers: Some(powers),
                        coeffs,
                    },
                ))
            }
            ModelInput::Precomputed(feats) => {
                let x = feats.combine(&coeffs)?;
                let (z, mlp) = self.mlp.forward(&x, train, seed)?;
                Ok((z, ForwardCache { mlp, powers: None, coeffs }))
            }
        }
    }

    pub fn predict(&self, input: ModelInput<'_, T>) -> Result<Matrix<T>> {
        Ok(self.forward(input, false, 0)?.0)
    }

    /// Exact gradients of a loss whose gradient with respect to the model
    /// output is `grad_out`. `L` is symmetric, so the convolution backward
    /// is the same power series applied to `grad_out`.
    pub fn backward(&self, cache: Option<&ForwardCache<T>>, input: ModelInput<'_, T>, grad_out: &Matrix<T>) -> Result<Gradients<T>> {
        let cache = cache.ok_or(Error::NoForwardCache)?;
        self.check_input(&input)?;
        let mut grad_c = vec![T::zero(); self.degree() + 1];
        let mlp = match input {
            ModelInput::Graph { laplacian, .. } => {
                let powers = cache.powers.as_ref().ok_or(Error::NoForwardCache)?;
                for (d, g) in grad_c.iter_mut().enumerate() {
                    *g = powers.block(d).dot(grad_out)?;
                }
                let grad_h = power_series_convolve(laplacian, grad_out, &cache.coeffs)?;
                self.mlp.backward(&cache.mlp, &grad_h)?.0
            }
            ModelInput::Precomputed(feats) => {
                let (layers, grad_x) = self.mlp.backward(&cache.mlp, grad_out)?;
                for (d, g) in grad_c.iter_mut().enumerate() {
                    *g = feats.block(d).dot(&grad_x)?;
                }
                layers
            }
        };
        let (alpha, beta) = self.tables.pullback(&grad_c);
        Ok(Gradients { mlp, alpha, beta })
    }
}
