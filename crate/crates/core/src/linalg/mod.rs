//! Dense linear algebra kernels: symmetric eigensolver, pivoted QR least
//! squares and one-sided Jacobi singular values.

mod eigen;
mod qr;
mod svd;

pub use eigen::{eigendecompose, eigendecompose_dense, EigenSystem, DEFAULT_DENSE_LIMIT};
pub use qr::{least_squares, LeastSquares, PivotedQr};
pub use svd::{min_singular_value, singular_values};
