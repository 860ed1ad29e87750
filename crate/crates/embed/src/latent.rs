//! The strategy latent: a real vector of length `4 * d_sig` with block
//! order [LE, SE, LX, SX].

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StrategyLatent {
    values: Vec<f64>,
    d_sig: usize,
}

impl StrategyLatent {
    pub fn new(values: Vec<f64>, d_sig: usize) -> StrategyLatent {
        assert_eq!(values.len(), 4 * d_sig, "latent must have length 4*d_sig");
        assert!(
            values.iter().all(|v| v.is_finite()),
            "latent entries must be finite"
        );
        StrategyLatent { values, d_sig }
    }

    pub fn d_sig(&self) -> usize {
        self.d_sig
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Block k (0..4) as a slice.
    pub fn block(&self, k: usize) -> &[f64] {
        assert!(k < 4);
        &self.values[k * self.d_sig..(k + 1) * self.d_sig]
    }

    /// Replace block k with the same block from another latent.
    pub fn with_block_from(&self, k: usize, other: &StrategyLatent) -> StrategyLatent {
        assert_eq!(self.d_sig, other.d_sig);
        let mut values = self.values.clone();
        values[k * self.d_sig..(k + 1) * self.d_sig].copy_from_slice(other.block(k));
        StrategyLatent::new(values, self.d_sig)
    }

    pub fn to_f32(&self) -> Vec<f32> {
        self.values.iter().map(|&v| v as f32).collect()
    }

    pub fn from_f32(values: &[f32], d_sig: usize) -> StrategyLatent {
        StrategyLatent::new(values.iter().map(|&v| v as f64).collect(), d_sig)
    }
}
