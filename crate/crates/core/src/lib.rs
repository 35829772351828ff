//! Spectral graph filtering toolkit: normalized Laplacians, polynomial and
//! trigonometric filters, least-squares slice analysis, error-bound checks
//! and decoupled trigonometric GNN models.
//!
//! Every numeric type is generic over [`Scalar`] (`f32` or `f64`); the
//! aliases at the crate root fix the common instantiations.

pub mod basis;
pub mod bounds;
pub mod conv;
pub mod dense;
pub mod error;
pub mod filters;
pub mod fit;
pub mod graph;
pub mod linalg;
pub mod model;
pub mod quadrature;
pub mod scalar;
pub mod sparse;
pub mod trig;

pub use basis::{basis_row, design_matrix, eval_basis, Basis};
pub use bounds::{construction_error, verify_lemma1, verify_theorem1, BoundsReport, LemmaReport};
pub use conv::{
    convolve_from_precomputed, decode_features, feature_file_len, load_features, power_series_convolve, precompute,
    save_features, tpd_convolve, PropagatedFeatures,
};
pub use dense::Matrix;
pub use error::{Error, Result};
pub use filters::{Benchmark, PiecewiseLinear, TargetFilter};
pub use fit::{lse_fit_continuous, lse_fit_discrete, slice, slice_errors, PolyFit, SliceSet};
pub use graph::{erdos_renyi, Graph};
pub use linalg::{eigendecompose, eigendecompose_dense, EigenSystem};
pub use scalar::Scalar;
pub use sparse::{normalized_laplacian, CsrMatrix};
pub use trig::{decay_report, eval_trig_exact, eval_trig_tpd, fourier_coeffs, taylor_tables, DecayReport, TaylorTables, TrigParams};

pub type MatrixF64 = Matrix<f64>;
pub type MatrixF32 = Matrix<f32>;
pub type SparseMatrixF64 = CsrMatrix<f64>;
pub type SparseMatrixF32 = CsrMatrix<f32>;
pub type EigenSystemF64 = EigenSystem<f64>;
pub type PolyFitF64 = PolyFit<f64>;
pub type TrigParamsF64 = TrigParams<f64>;
pub type TaylorTablesF64 = TaylorTables<f64>;
pub type PropagatedFeaturesF64 = PropagatedFeatures<f64>;
pub type MlpF64 = model::Mlp<f64>;
pub type TfgnnModelF64 = model::TfgnnModel<f64>;
