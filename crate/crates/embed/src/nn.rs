//! Small neural-net building blocks on candle tensors with fully seeded
//! initialization. All parameters are created from an explicit RNG stream
//! so training runs are reproducible bit-for-bit on CPU.

use candle_core::backprop::GradStore;
use candle_core::{DType, Device, Result, Tensor, Var, D};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

/// Parameter registry: every parameter is registered under a unique name in
/// creation order, which is also the checkpoint layout.
pub struct ParamSet {
    pub device: Device,
    params: Vec<(String, Var)>,
}

impl ParamSet {
    pub fn new(device: Device) -> ParamSet {
        ParamSet {
            device,
            params: Vec::new(),
        }
    }

    pub fn register(&mut self, name: &str, var: Var) -> Var {
        assert!(
            !self.params.iter().any(|(n, _)| n == name),
            "duplicate parameter name {name}"
        );
        self.params.push((name.to_string(), var.clone()));
        var
    }

    pub fn vars(&self) -> Vec<Var> {
        self.params.iter().map(|(_, v)| v.clone()).collect()
    }

    pub fn named(&self) -> &[(String, Var)] {
        &self.params
    }

    pub fn n_parameters(&self) -> usize {
        self.params
            .iter()
            .map(|(_, v)| v.as_tensor().elem_count())
            .sum()
    }

    /// Snapshot all parameter values to host memory.
    pub fn snapshot(&self) -> Result<Vec<(String, Vec<f32>, Vec<usize>)>> {
        self.params
            .iter()
            .map(|(n, v)| {
                let t = v.as_tensor();
                Ok((
                    n.clone(),
                    t.flatten_all()?.to_vec1::<f32>()?,
                    t.dims().to_vec(),
                ))
            })
            .collect()
    }

    /// Restore parameter values from a snapshot taken on this set.
    pub fn restore(&self, snap: &[(String, Vec<f32>, Vec<usize>)]) -> Result<()> {
        assert_eq!(snap.len(), self.params.len(), "snapshot layout mismatch");
        for ((name, data, shape), (have, var)) in snap.iter().zip(&self.params) {
            assert_eq!(name, have, "snapshot parameter order mismatch");
            let t = Tensor::from_slice(data.as_slice(), shape.as_slice(), &self.device)?;
            var.set(&t)?;
        }
        Ok(())
    }
}

/// Uniform Xavier/Glorot init for a (fan_in, fan_out) weight.
pub fn xavier_uniform(
    rng: &mut ChaCha8Rng,
    fan_in: usize,
    fan_out: usize,
    device: &Device,
) -> Result<Tensor> {
    let bound = (6.0 / (fan_in + fan_out) as f64).sqrt() as f32;
    let data: Vec<f32> = (0..fan_in * fan_out)
        .map(|_| rng.gen_range(-bound..bound))
        .collect();
    Tensor::from_vec(data, (fan_in, fan_out), device)
}

/// Gaussian init with the given std.
pub fn normal_init(
    rng: &mut ChaCha8Rng,
    shape: (usize, usize),
    std: f64,
    device: &Device,
) -> Result<Tensor> {
    let data: Vec<f32> = (0..shape.0 * shape.1)
        .map(|_| {
            let z: f64 = StandardNormal.sample(rng);
            (z * std) as f32
        })
        .collect();
    Tensor::from_vec(data, shape, device)
}

/// A dense layer with weight stored as (d_in, d_out) so `x.matmul(w)`
/// applies it directly.
pub struct Linear {
    pub w: Var,
    pub b: Var,
}

impl Linear {
    pub fn new(
        ps: &mut ParamSet,
        name: &str,
        d_in: usize,
        d_out: usize,
        rng: &mut ChaCha8Rng,
    ) -> Result<Linear> {
        let w = Var::from_tensor(&xavier_uniform(rng, d_in, d_out, &ps.device)?)?;
        let b = Var::from_tensor(&Tensor::zeros((d_out,), DType::F32, &ps.device)?)?;
        Ok(Linear {
            w: ps.register(&format!("{name}.w"), w),
            b: ps.register(&format!("{name}.b"), b),
        })
    }

    /// Apply to the last dimension of a 2-D or 3-D tensor.
    pub fn forward(&self, x: &Tensor) -> Result<Tensor> {
        let dims = x.dims().to_vec();
        let d_in = *dims.last().unwrap();
        let flat = x.reshape(((), d_in))?;
        let y = flat.matmul(self.w.as_tensor())?;
        let y = y.broadcast_add(self.b.as_tensor())?;
        let mut out_dims = dims;
        *out_dims.last_mut().unwrap() = self.w.as_tensor().dim(1)?;
        y.reshape(out_dims)
    }
}

/// Layer normalization over the last dimension with learned scale and bias.
pub struct LayerNorm {
    pub gamma: Var,
    pub beta: Var,
    eps: f64,
}

impl LayerNorm {
    pub fn new(ps: &mut ParamSet, name: &str, dim: usize) -> Result<LayerNorm> {
        let gamma = Var::from_tensor(&Tensor::ones((dim,), DType::F32, &ps.device)?)?;
        let beta = Var::from_tensor(&Tensor::zeros((dim,), DType::F32, &ps.device)?)?;
        Ok(LayerNorm {
            gamma: ps.register(&format!("{name}.gamma"), gamma),
            beta: ps.register(&format!("{name}.beta"), beta),
            eps: 1e-5,
        })
    }

    pub fn forward(&self, x: &Tensor) -> Result<Tensor> {
        let mean = x.mean_keepdim(D::Minus1)?;
        let centered = x.broadcast_sub(&mean)?;
        let var = centered.sqr()?.mean_keepdim(D::Minus1)?;
        let normed = centered.broadcast_div(&(var + self.eps)?.sqrt()?)?;
        normed
            .broadcast_mul(self.gamma.as_tensor())?
            .broadcast_add(self.beta.as_tensor())
    }
}

/// Multi-head attention. Query/key/value projections plus output projection;
/// `forward` takes separate query and key/value sources so the same block
/// serves self- and cross-attention.
pub struct MultiHeadAttention {
    q: Linear,
    k: Linear,
    v: Linear,
    out: Linear,
    n_heads: usize,
    head_dim: usize,
}

impl MultiHeadAttention {
    pub fn new(
        ps: &mut ParamSet,
        name: &str,
        d_model: usize,
        n_heads: usize,
        rng: &mut ChaCha8Rng,
    ) -> Result<MultiHeadAttention> {
        assert_eq!(d_model % n_heads, 0);
        Ok(MultiHeadAttention {
            q: Linear::new(ps, &format!("{name}.q"), d_model, d_model, rng)?,
            k: Linear::new(ps, &format!("{name}.k"), d_model, d_model, rng)?,
            v: Linear::new(ps, &format!("{name}.v"), d_model, d_model, rng)?,
            out: Linear::new(ps, &format!("{name}.out"), d_model, d_model, rng)?,
            n_heads,
            head_dim: d_model / n_heads,
        })
    }

    /// `query`: (B, Lq, D); `kv`: (B, Lk, D); `mask`: additive, broadcastable
    /// to (B, H, Lq, Lk).
    pub fn forward(&self, query: &Tensor, kv: &Tensor, mask: Option<&Tensor>) -> Result<Tensor> {
        let (b, lq, d) = query.dims3()?;
        let lk = kv.dim(1)?;
        let split = |t: Tensor, l: usize| -> Result<Tensor> {
            t.reshape((b, l, self.n_heads, self.head_dim))?
                .transpose(1, 2)?
                .contiguous()
        };
        let q = split(self.q.forward(query)?, lq)?;
        let k = split(self.k.forward(kv)?, lk)?;
        let v = split(self.v.forward(kv)?, lk)?;
        let scale = 1.0 / (self.head_dim as f64).sqrt();
        let mut scores = (q.matmul(&k.transpose(D::Minus2, D::Minus1)?.contiguous()?)? * scale)?;
        if let Some(mask) = mask {
            scores = scores.broadcast_add(mask)?;
        }
        let attn = candle_nn::ops::softmax(&scores, D::Minus1)?;
        let ctx = attn.matmul(&v)?; // (B, H, Lq, hd)
        let merged = ctx.transpose(1, 2)?.contiguous()?.reshape((b, lq, d))?;
        self.out.forward(&merged)
    }
}

/// Position-wise feed-forward block with GELU.
pub struct FeedForward {
    lin1: Linear,
    lin2: Linear,
}

impl FeedForward {
    pub fn new(
        ps: &mut ParamSet,
        name: &str,
        d_model: usize,
        ff_dim: usize,
        rng: &mut ChaCha8Rng,
    ) -> Result<FeedForward> {
        Ok(FeedForward {
            lin1: Linear::new(ps, &format!("{name}.lin1"), d_model, ff_dim, rng)?,
            lin2: Linear::new(ps, &format!("{name}.lin2"), ff_dim, d_model, rng)?,
        })
    }

    pub fn forward(&self, x: &Tensor) -> Result<Tensor> {
        self.lin2.forward(&self.lin1.forward(x)?.gelu_erf()?)
    }
}

/// Sinusoidal positional encoding table (max_len, d_model).
pub fn sinusoidal_positional_encoding(
    max_len: usize,
    d_model: usize,
    device: &Device,
) -> Result<Tensor> {
    let mut data = vec![0.0f32; max_len * d_model];
    for pos in 0..max_len {
        for i in 0..d_model / 2 {
            let angle = pos as f64 / 10_000f64.powf(2.0 * i as f64 / d_model as f64);
            data[pos * d_model + 2 * i] = angle.sin() as f32;
            data[pos * d_model + 2 * i + 1] = angle.cos() as f32;
        }
    }
    Tensor::from_vec(data, (max_len, d_model), device)
}

/// Additive key-padding mask: 0 where attendable, -1e9 at padded keys.
/// Shape (B, 1, 1, L) for broadcasting over heads and query positions.
pub fn key_padding_mask(lengths: &[usize], max_len: usize, device: &Device) -> Result<Tensor> {
    let b = lengths.len();
    let mut data = vec![0.0f32; b * max_len];
    for (i, &len) in lengths.iter().enumerate() {
        for j in len..max_len {
            data[i * max_len + j] = -1e9;
        }
    }
    Tensor::from_vec(data, (b, 1, 1, max_len), device)
}

/// Additive causal mask of shape (1, 1, L, L).
pub fn causal_mask(len: usize, device: &Device) -> Result<Tensor> {
    let mut data = vec![0.0f32; len * len];
    for i in 0..len {
        for j in (i + 1)..len {
            data[i * len + j] = -1e9;
        }
    }
    Tensor::from_vec(data, (1, 1, len, len), device)
}

/// Seeded inverted-dropout mask applied in place of the framework dropout,
/// so training remains reproducible. No-op when p == 0.
pub fn dropout(x: &Tensor, p: f64, rng: Option<&mut ChaCha8Rng>) -> Result<Tensor> {
    match rng {
        Some(rng) if p > 0.0 => {
            let n = x.elem_count();
            let keep = 1.0 - p;
            let data: Vec<f32> = (0..n)
                .map(|_| {
                    if rng.gen::<f64>() < keep {
                        (1.0 / keep) as f32
                    } else {
                        0.0
                    }
                })
                .collect();
            let mask = Tensor::from_vec(data, x.dims(), x.device())?;
            x.mul(&mask)
        }
        _ => Ok(x.clone()),
    }
}

/// Global-norm gradient clipping: rescale all gradients when the joint norm
/// exceeds `max_norm`. Returns the pre-clip norm.
pub fn clip_grad_norm(vars: &[Var], grads: &mut GradStore, max_norm: f64) -> Result<f64> {
    let mut total_sq = 0.0f64;
    for var in vars {
        if let Some(g) = grads.get(var) {
            let sq = g.sqr()?.sum_all()?.to_scalar::<f32>()? as f64;
            total_sq += sq;
        }
    }
    let norm = total_sq.sqrt();
    if norm > max_norm && norm > 0.0 {
        let scale = max_norm / norm;
        for var in vars {
            if let Some(g) = grads.remove(var) {
                grads.insert(var, (g * scale)?);
            }
        }
    }
    Ok(norm)
}

/// Standard-normal noise tensor from an explicit RNG stream.
pub fn seeded_normal(rng: &mut ChaCha8Rng, shape: &[usize], device: &Device) -> Result<Tensor> {
    let n: usize = shape.iter().product();
    let data: Vec<f32> = (0..n)
        .map(|_| {
            let z: f64 = StandardNormal.sample(rng);
            z as f32
        })
        .collect();
    Tensor::from_vec(data, shape, device)
}
