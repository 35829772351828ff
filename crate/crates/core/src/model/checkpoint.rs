//! Versioned binary model checkpoints: magic, version, a JSON config echo,
//! the model layout, every weight as little-endian f64, and a trailing
//! CRC32 of everything before it.

use std::path::Path;

use crate::dense::Matrix;
use crate::error::{Error, Result};
use crate::model::mlp::{Layer, Mlp};
use crate::model::tfgnn::{TfgnnModel, Variant};
use crate::scalar::Scalar;
use crate::trig::TrigParams;

const MAGIC: &[u8; 8] = b"SFLABCK\0";
const VERSION: u32 = 1;

struct Writer(Vec<u8>);

impl Writer {
    fn u64(&mut self, v: usize) {
        self.0.extend_from_slice(&(v as u64).to_le_bytes());
    }

    fn f64(&mut self, v: f64) {
        self.0.extend_from_slice(&v.to_le_bytes());
    }

    fn values<T: Scalar>(&mut self, v: &[T]) {
        v.iter().for_each(|x| self.f64(x.f64()));
    }
}

struct Reader<'a> {
    bytes: &'a [u8],
    at: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        let end = self.at.checked_add(n).filter(|&e| e <= self.bytes.len()).ok_or_else(|| Error::Format("checkpoint: truncated".into()))?;
        let out = &self.bytes[self.at..end];
        self.at = end;
        Ok(out)
    }

    fn u64(&mut self) -> Result<usize> {
        let v = u64::from_le_bytes(self.take(8)?.try_into().unwrap());
        usize::try_from(v).map_err(|_| Error::Format("checkpoint: size overflow".into()))
    }

    fn f64(&mut self) -> Result<f64> {
        Ok(f64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }

    fn values<T: Scalar>(&mut self, n: usize) -> Result<Vec<T>> {
        if n > self.bytes.len() / 8 {
            return Err(Error::Format("checkpoint: truncated".into()));
        }
        (0..n).map(|_| self.f64().map(T::c)).collect()
    }
}

pub fn save_checkpoint<T: Scalar>(model: &TfgnnModel<T>, config_json: &str, path: impl AsRef<Path>) -> Result<()> {
    let mut w = Writer(Vec::new());
    w.0.extend_from_slice(MAGIC);
    w.0.extend_from_slice(&VERSION.to_le_bytes());
    w.u64(config_json.len());
    w.0.extend_from_slice(config_json.as_bytes());
    w.0.push(match model.variant {
        Variant::Medium => 0,
        Variant::Large => 1,
    });
    let trig = model.trig();
    w.u64(trig.order());
    w.f64(trig.omega().f64());
    w.u64(model.degree());
    w.f64(model.mlp.dropout.f64());
    w.u64(model.mlp.layers.len());
    for layer in &model.mlp.layers {
        w.u64(layer.fan_in());
        w.u64(layer.fan_out());
        w.values(layer.weight.as_slice());
        w.values(&layer.bias);
    }
    w.values(&trig.alpha);
    w.values(&trig.beta);
    let crc = crc32fast::hash(&w.0);
    w.0.extend_from_slice(&crc.to_le_bytes());
    std::fs::write(path, w.0)?;
    Ok(())
}

/// Loads a checkpoint; returns the model and the stored config echo.
pub fn load_checkpoint<T: Scalar>(path: impl AsRef<Path>) -> Result<(TfgnnModel<T>, String)> {
    let bytes = std::fs::read(path)?;
    decode(&bytes)
}

fn decode<T: Scalar>(bytes: &[u8]) -> Result<(TfgnnModel<T>, String)> {
    let fmt = |m: &str| Error::Format(format!("checkpoint: {m}"));
    if bytes.len() < 16 {
        return Err(fmt("truncated"));
    }
    let (body, tail) = bytes.split_at(bytes.len() - 4);
    if &body[..8] != MAGIC {
        return Err(fmt("bad magic number"));
    }
    if crc32fast::hash(body) != u32::from_le_bytes(tail.try_into().unwrap()) {
        return Err(fmt("checksum mismatch"));
    }
    let mut r = Reader { bytes: body, at: 8 };
    let version = u32::from_le_bytes(r.take(4)?.try_into().unwrap());
    if version != VERSION {
        return Err(fmt(&format!("unsupported version {version}")));
    }
    let len = r.u64()?;
    let config = String::from_utf8(r.take(len)?.to_vec()).map_err(|_| fmt("config echo is not UTF-8"))?;
    let variant = match r.take(1)?[0] {
        0 => Variant::Medium,
        1 => Variant::Large,
        v => return Err(fmt(&format!("unknown variant tag {v}"))),
    };
    let order = r.u64()?;
    let omega = T::c(r.f64()?);
    let degree = r.u64()?;
    let dropout = T::c(r.f64()?);
    let n_layers = r.u64()?;
    let mut layers = Vec::new();
    for _ in 0..n_layers {
        let (rows, cols) = (r.u64()?, r.u64()?);
        let count = rows.checked_mul(cols).ok_or_else(|| fmt("size overflow"))?;
        let weight = Matrix::from_vec(rows, cols, r.values(count)?)?;
        let bias = r.values(cols)?;
        layers.push(Layer { weight, bias });
    }
    let alpha = r.values(order + 1)?;
    let beta = r.values(order + 1)?;
    if r.at != body.len() {
        return Err(fmt("trailing bytes"));
    }
    let mlp = Mlp::from_layers(layers, dropout)?;
    let mut model = TfgnnModel::new(variant, mlp, order, omega, degree)?;
    model.set_trig(TrigParams::new(omega, alpha, beta)?)?;
    Ok((model, config))
}
