//! Continuous program embeddings: a transformer VAE whose latent space is
//! split into four blocks, one per signal, in the fixed order LE, SE, LX,
//! SX. A shared encoder maps each signal's token sequence to a diagonal
//! Gaussian block; the four block means concatenate into the strategy
//! latent. A shared decoder regenerates each signal autoregressively with
//! its own block as the only cross-attention memory, so block k is the sole
//! latent input to signal k by construction.

pub mod checkpoint;
pub mod config;
pub mod dataset;
pub mod latent;
pub mod model;
pub mod nn;
pub mod quality;
pub mod train;
pub mod vocab;

pub use config::{TrainConfig, VaeConfig};
pub use dataset::{build_dataset, load_dataset, save_dataset, DatasetError, ProgramDataset};
pub use latent::StrategyLatent;
pub use model::{DecodeFailure, EncodedStrategy, SignalVae};
pub use quality::{latent_quality_report, QualityReport};
pub use train::{train_vae, EpochStats, TrainError, TrainReport};
pub use vocab::{Vocab, VocabError};
