//! Multi-layer perceptron: affine → ReLU → dropout on hidden layers,
//! affine at the output.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::dense::Matrix;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub struct Layer<T> {
    /// `fan_in × fan_out`.
    pub weight: Matrix<T>,
    pub bias: Vec<T>,
}

impl<T: Scalar> Layer<T> {
    pub fn fan_in(&self) -> usize {
        self.weight.rows()
    }

    pub fn fan_out(&self) -> usize {
        self.weight.cols()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Mlp<T> {
    pub layers: Vec<Layer<T>>,
    /// Drop probability applied after every hidden activation.
    pub dropout: T,
}

/// Per-layer activations kept for the backward pass.
#[derive(Clone, Debug)]
pub struct MlpCache<T> {
    /// Input to each layer (post-dropout for hidden layers).
    inputs: Vec<Matrix<T>>,
    /// Pre-activations of hidden layers.
    pre: Vec<Matrix<T>>,
    /// Inverted-dropout multipliers of hidden layers, if applied.
    masks: Vec<Option<Matrix<T>>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LayerGrad<T> {
    pub weight: Matrix<T>,
    pub bias: Vec<T>,
}

impl<T: Scalar> Mlp<T> {
    /// Layers `dims[0] → dims[1] → … → dims[last]`, weights uniform in
    /// `±1/√fan_in`, zero biases.
    pub fn new<R: Rng + ?Sized>(dims: &[usize], dropout: T, rng: &mut R) -> Result<Self> {
        if dims.len() < 2 {
            return Err(Error::InvalidParameter("an MLP needs at least input and output widths".into()));
        }
        if !(dropout >= T::zero() && dropout < T::one()) {
            return Err(Error::InvalidParameter(format!("dropout {dropout} outside [0, 1)")));
        }
        let layers = dims
            .windows(2)
            .map(|w| {
                let bound = 1.0 / (w[0].max(1) as f64).sqrt();
                Layer {
                    weight: Matrix::from_fn(w[0], w[1], |_, _| T::c(rng.gen_range(-bound..=bound))),
                    bias: vec![T::zero(); w[1]],
                }
            })
            .collect();
        Ok(Self { layers, dropout })
    }

    /// One square identity layer.
    pub fn identity(width: usize) -> Self {
        Self {
            layers: vec![Layer {
                weight: Matrix::identity(width),
                bias: vec![T::zero(); width],
            }],
            dropout: T::zero(),
        }
    }

    pub fn from_layers(layers: Vec<Layer<T>>, dropout: T) -> Result<Self> {
        if layers.is_empty() {
            return Err(Error::InvalidParameter("an MLP needs at least one layer".into()));
        }
        for pair in layers.windows(2) {
            if pair[0].fan_out() != pair[1].fan_in() {
                return Err(Error::mismatch("Mlp layer chain", pair[0].weight.shape(), pair[1].weight.shape()));
            }
        }
        for layer in &layers {
            if layer.bias.len() != layer.fan_out() {
                return Err(Error::mismatch("Mlp bias", layer.weight.shape(), (1, layer.bias.len())));
            }
        }
        Ok(Self { layers, dropout })
    }

    pub fn input_width(&self) -> usize {
        self.layers[0].fan_in()
    }

    pub fn output_width(&self) -> usize {
        self.layers.last().unwrap().fan_out()
    }

    pub fn parameter_count(&self) -> usize {
        self.layers.iter().map(|l| l.weight.rows() * l.weight.cols() + l.bias.len()).sum()
    }

    /// Forward pass. Dropout is applied only when `train` is set, with masks
    /// drawn from a generator seeded by `seed`.
    pub fn forward(&self, x: &Matrix<T>, train: bool, seed: u64) -> Result<(Matrix<T>, MlpCache<T>)> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let keep = T::one() - self.dropout;
        let mut cache = MlpCache {
            inputs: Vec::with_capacity(self.layers.len()),
            pre: Vec::new(),
            masks: Vec::new(),
        };
        let mut h = x.clone();
        let last = self.layers.len() - 1;
        for (l, layer) in self.layers.iter().enumerate() {
            let mut a = h.matmul(&layer.weight)?;
            for i in 0..a.rows() {
                for (v, &b) in a.row_mut(i).iter_mut().zip(&layer.bias) {
                    *v += b;
                }
            }
            cache.inputs.push(h);
            if l == last {
                return Ok((a, cache));
            }
            let mut out = a.map(|v| if v < T::zero() { T::zero() } else { v });
            let mask = if train && self.dropout > T::zero() {
                let p = self.dropout.f64();
                let scale = T::one() / keep;
                let m = Matrix::from_fn(out.rows(), out.cols(), |_, _| {
                    if rng.gen::<f64>() < p {
                        T::zero()
                    } else {
                        scale
                    }
                });
                for (o, &k) in out.as_mut_slice().iter_mut().zip(m.as_slice()) {
                    *o *= k;
                }
                Some(m)
            } else {
                None
            };
            cache.pre.push(a);
            cache.masks.push(mask);
            h = out;
        }
        unreachable!("the loop returns at the output layer")
    }

    /// Reverse pass. Returns per-layer gradients and the gradient with
    /// respect to the input.
    pub fn backward(&self, cache: &MlpCache<T>, grad_out: &Matrix<T>) -> Result<(Vec<LayerGrad<T>>, Matrix<T>)> {
        if cache.inputs.len() != self.layers.len() {
            return Err(Error::NoForwardCache);
        }
        let mut grads = Vec::with_capacity(self.layers.len());
        let mut delta = grad_out.clone();
        for (l, layer) in self.layers.iter().enumerate().rev() {
            let input = &cache.inputs[l];
            let weight = input.t_matmul(&delta)?;
            let mut bias = vec![T::zero(); layer.fan_out()];
            for i in 0..delta.rows() {
                for (b, &d) in bias.iter_mut().zip(delta.row(i)) {
                    *b += d;
                }
            }
            grads.push(LayerGrad { weight, bias });
            let mut upstream = delta.matmul_t(&layer.weight)?;
            if l > 0 {
                let pre = &cache.pre[l - 1];
                for (u, &a) in upstream.as_mut_slice().iter_mut().zip(pre.as_slice()) {
                    if a <= T::zero() {
                        *u = T::zero();
                    }
                }
                if let Some(mask) = &cache.masks[l - 1] {
                    for (u, &k) in upstream.as_mut_slice().iter_mut().zip(mask.as_slice()) {
                        *u *= k;
                    }
                }
            }
            delta = upstream;
        }
        grads.reverse();
        Ok((grads, delta))
    }
}
