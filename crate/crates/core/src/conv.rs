//! Taylor-decomposed trigonometric graph convolution
//! `Z = Σ_d c_d L^d X` and persistence of propagated features.
//!
//! The sweep keeps one running power `P ← L P`, so a convolution costs
//! `D` sparse products, i.e. `O(m · E · D)` multiply-adds; dense powers of
//! `L` are never formed.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::dense::Matrix;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::sparse::CsrMatrix;
use crate::trig::{TaylorTables, TrigParams};

const MAGIC: &[u8; 8] = b"SFLABPF\0";
const VERSION: u32 = 1;
const HEADER_LEN: usize = 8 + 4 + 3 * 8;

/// `Σ_d coeffs[d] L^d X` in one sweep over the running power.
pub fn power_series_convolve<T: Scalar>(lap: &CsrMatrix<T>, x: &Matrix<T>, coeffs: &[T]) -> Result<Matrix<T>> {
    if lap.n_rows() != lap.n_cols() || lap.n_cols() != x.rows() {
        return Err(Error::mismatch("tpd_convolve", lap.shape(), x.shape()));
    }
    let mut z = Matrix::zeros(x.rows(), x.cols());
    let mut p = x.clone();
    let mut next = Matrix::zeros(x.rows(), x.cols());
    for (d, &c) in coeffs.iter().enumerate() {
        if d > 0 {
            lap.spmv_into(&p, &mut next)?;
            std::mem::swap(&mut p, &mut next);
        }
        z.axpy(c, &p)?;
    }
    Ok(z)
}

/// `Z = Σ_d L^d X (α·Γ[:, d] + β·Θ[:, d])`.
pub fn tpd_convolve<T: Scalar>(
    lap: &CsrMatrix<T>,
    x: &Matrix<T>,
    params: &TrigParams<T>,
    tables: &TaylorTables<T>,
) -> Result<Matrix<T>> {
    let c = tables.effective_coefficients(params)?;
    power_series_convolve(lap, x, &c)
}

/// The blocks `[X, L X, …, L^D X]`.
#[derive(Clone, Debug, PartialEq)]
pub struct PropagatedFeatures<T> {
    blocks: Vec<Matrix<T>>,
}

impl<T: Scalar> PropagatedFeatures<T> {
    pub fn from_blocks(blocks: Vec<Matrix<T>>) -> Result<Self> {
        let first = blocks
            .first()
            .ok_or_else(|| Error::InvalidParameter("propagated features need at least one block".into()))?;
        if let Some(b) = blocks.iter().find(|b| b.shape() != first.shape()) {
            return Err(Error::mismatch("PropagatedFeatures", first.shape(), b.shape()));
        }
        Ok(Self { blocks })
    }

    /// Highest stored power `D`.
    pub fn degree(&self) -> usize {
        self.blocks.len() - 1
    }

    pub fn nodes(&self) -> usize {
        self.blocks[0].rows()
    }

    pub fn width(&self) -> usize {
        self.blocks[0].cols()
    }

    pub fn block(&self, d: usize) -> &Matrix<T> {
        &self.blocks[d]
    }

    pub fn blocks(&self) -> &[Matrix<T>] {
        &self.blocks
    }

    /// `Σ_d coeffs[d] · block d`, accumulated in the same order as the sweep.
    pub fn combine(&self, coeffs: &[T]) -> Result<Matrix<T>> {
        if coeffs.len() > self.blocks.len() {
            return Err(Error::DegreeMismatch {
                available: self.degree(),
                required: coeffs.len().saturating_sub(1),
            });
        }
        let mut z = Matrix::zeros(self.nodes(), self.width());
        for (b, &c) in self.blocks.iter().zip(coeffs) {
            z.axpy(c, b)?;
        }
        Ok(z)
    }

    /// Rows `idx` of every block.
    pub fn select_rows(&self, idx: &[usize]) -> Self {
        Self {
            blocks: self.blocks.iter().map(|b| b.select_rows(idx)).collect(),
        }
    }
}

pub fn precompute<T: Scalar>(lap: &CsrMatrix<T>, x: &Matrix<T>, degree: usize) -> Result<PropagatedFeatures<T>> {
    if lap.n_rows() != lap.n_cols() || lap.n_cols() != x.rows() {
        return Err(Error::mismatch("precompute", lap.shape(), x.shape()));
    }
    let mut blocks = Vec::with_capacity(degree + 1);
    blocks.push(x.clone());
    for d in 1..=degree {
        let next = lap.spmv(&blocks[d - 1])?;
        blocks.push(next);
    }
    Ok(PropagatedFeatures { blocks })
}

pub fn convolve_from_precomputed<T: Scalar>(
    feats: &PropagatedFeatures<T>,
    params: &TrigParams<T>,
    tables: &TaylorTables<T>,
) -> Result<Matrix<T>> {
    if feats.degree() < tables.degree() {
        return Err(Error::DegreeMismatch {
            available: feats.degree(),
            required: tables.degree(),
        });
    }
    let c = tables.effective_coefficients(params)?;
    feats.combine(&c)
}

/// Serialized size in bytes of features with the given shape.
pub fn feature_file_len(n: usize, m: usize, degree: usize) -> usize {
    HEADER_LEN + 8 * (degree + 1) * n * m + 4
}

/// Writes the little-endian binary feature file: magic, version, `n`, `m`,
/// `D`, the row-major f64 blocks, and a trailing CRC32 of everything before it.
pub fn save_features<T: Scalar>(feats: &PropagatedFeatures<T>, path: impl AsRef<Path>) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    let mut crc = crc32fast::Hasher::new();
    let mut put = |w: &mut BufWriter<File>, bytes: &[u8]| -> Result<()> {
        crc.update(bytes);
        w.write_all(bytes)?;
        Ok(())
    };
    put(&mut w, MAGIC)?;
    put(&mut w, &VERSION.to_le_bytes())?;
    for v in [feats.nodes(), feats.width(), feats.degree()] {
        put(&mut w, &(v as u64).to_le_bytes())?;
    }
    for b in &feats.blocks {
        for &v in b.as_slice() {
            put(&mut w, &v.f64().to_le_bytes())?;
        }
    }
    w.write_all(&crc.finalize().to_le_bytes())?;
    w.flush()?;
    Ok(())
}

pub fn load_features<T: Scalar>(path: impl AsRef<Path>) -> Result<PropagatedFeatures<T>> {
    let mut bytes = Vec::new();
    BufReader::new(File::open(path)?).read_to_end(&mut bytes)?;
    decode_features(&bytes)
}

pub fn decode_features<T: Scalar>(bytes: &[u8]) -> Result<PropagatedFeatures<T>> {
    let fmt = |msg: &str| Error::Format(format!("feature file: {msg}"));
    if bytes.len() < HEADER_LEN + 4 {
        return Err(fmt("truncated header"));
    }
    if &bytes[..8] != MAGIC {
        return Err(fmt("bad magic number"));
    }
    let version = u32::from_le_bytes(bytes[8..12].try_into().unwrap());
    if version != VERSION {
        return Err(fmt(&format!("unsupported version {version}")));
    }
    let read_u64 = |at: usize| u64::from_le_bytes(bytes[at..at + 8].try_into().unwrap());
    let dims: Vec<usize> = (0..3)
        .map(|i| usize::try_from(read_u64(12 + 8 * i)).map_err(|_| fmt("dimension overflow")))
        .collect::<Result<_>>()?;
    let (n, m, degree) = (dims[0], dims[1], dims[2]);
    let expected = n
        .checked_mul(m)
        .and_then(|nm| nm.checked_mul(degree.checked_add(1)?))
        .and_then(|c| c.checked_mul(8))
        .and_then(|b| b.checked_add(HEADER_LEN + 4))
        .ok_or_else(|| fmt("dimension overflow"))?;
    if bytes.len() < expected {
        return Err(fmt("truncated data"));
    }
    if bytes.len() > expected {
        return Err(fmt("trailing bytes"));
    }
    let body = &bytes[..expected - 4];
    let stored = u32::from_le_bytes(bytes[expected - 4..].try_into().unwrap());
    if crc32fast::hash(body) != stored {
        return Err(fmt("checksum mismatch"));
    }
    let mut values = body[HEADER_LEN..]
        .chunks_exact(8)
        .map(|c| T::c(f64::from_le_bytes(c.try_into().unwrap())));
    let blocks = (0..=degree)
        .map(|_| Matrix::from_vec(n, m, values.by_ref().take(n * m).collect()))
        .collect::<Result<Vec<_>>>()?;
    Ok(PropagatedFeatures { blocks })
}
