//! Model and training configuration. Two profiles: the full-scale settings
//! (512-dim model, 20k programs) and a desk-scale profile small enough to
//! train on a laptop CPU while exercising every mechanism.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VaeConfig {
    pub d_model: usize,
    pub n_enc_layers: usize,
    pub n_dec_layers: usize,
    pub n_heads: usize,
    pub ff_dim: usize,
    pub dropout: f64,
    /// Latent dimension per signal block; the full latent is `4 * d_sig`.
    pub d_sig: usize,
    pub max_seq_len: usize,
}

impl VaeConfig {
    /// Desk-scale profile: trains in minutes on CPU.
    pub fn desk() -> VaeConfig {
        VaeConfig {
            d_model: 64,
            n_enc_layers: 2,
            n_dec_layers: 2,
            n_heads: 4,
            ff_dim: 128,
            dropout: 0.0,
            d_sig: 32,
            max_seq_len: 96,
        }
    }

    /// Full-scale profile.
    pub fn full() -> VaeConfig {
        VaeConfig {
            d_model: 512,
            n_enc_layers: 4,
            n_dec_layers: 4,
            n_heads: 8,
            ff_dim: 1024,
            dropout: 0.1,
            d_sig: 32,
            max_seq_len: 96,
        }
    }

    pub fn latent_dim(&self) -> usize {
        4 * self.d_sig
    }

    pub fn validate(&self) -> Result<(), String> {
        if self.d_model % self.n_heads != 0 {
            return Err("d_model must be divisible by n_heads".into());
        }
        if self.d_sig < 1 {
            return Err("d_sig must be at least 1".into());
        }
        if !(0.0..1.0).contains(&self.dropout) {
            return Err("dropout must be in [0, 1)".into());
        }
        if self.max_seq_len < 4 {
            return Err("max_seq_len too small".into());
        }
        Ok(())
    }
}

impl Default for VaeConfig {
    fn default() -> Self {
        VaeConfig::desk()
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TrainConfig {
    pub epochs: usize,
    pub batch_size: usize,
    pub lr: f64,
    pub weight_decay: f64,
    /// KL weight ramps linearly from 0 to this value.
    pub kl_beta_max: f64,
    /// Epochs over which the KL weight anneals.
    pub kl_anneal_epochs: usize,
    pub grad_clip_norm: f64,
    pub seed: u64,
}

impl TrainConfig {
    pub fn desk() -> TrainConfig {
        TrainConfig {
            epochs: 45,
            batch_size: 64,
            lr: 1e-3,
            weight_decay: 1e-5,
            kl_beta_max: 0.02,
            kl_anneal_epochs: 45,
            grad_clip_norm: 1.0,
            seed: 0,
        }
    }

    pub fn full() -> TrainConfig {
        TrainConfig {
            epochs: 50,
            batch_size: 128,
            lr: 1e-4,
            weight_decay: 1e-5,
            kl_beta_max: 0.1,
            kl_anneal_epochs: 50,
            grad_clip_norm: 1.0,
            seed: 0,
        }
    }

    /// KL weight at a given epoch: linear from 0 to `kl_beta_max` over the
    /// first `kl_anneal_epochs` epochs.
    pub fn beta_at(&self, epoch: usize) -> f64 {
        if self.kl_anneal_epochs == 0 {
            return self.kl_beta_max;
        }
        self.kl_beta_max * (epoch as f64 / self.kl_anneal_epochs as f64).min(1.0)
    }

    /// Cosine learning-rate schedule over epochs.
    pub fn lr_at(&self, epoch: usize) -> f64 {
        let e = epoch as f64 / self.epochs.max(1) as f64;
        self.lr * 0.5 * (1.0 + (std::f64::consts::PI * e).cos())
    }

    pub fn validate(&self) -> Result<(), String> {
        if self.epochs == 0 || self.batch_size == 0 {
            return Err("epochs and batch_size must be positive".into());
        }
        if self.lr <= 0.0 || self.weight_decay < 0.0 {
            return Err("lr must be positive, weight_decay nonnegative".into());
        }
        if self.kl_beta_max < 0.0 {
            return Err("kl_beta_max must be nonnegative".into());
        }
        if self.grad_clip_norm <= 0.0 {
            return Err("grad_clip_norm must be positive".into());
        }
        Ok(())
    }
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig::desk()
    }
}
