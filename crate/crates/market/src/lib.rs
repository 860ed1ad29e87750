//! Market data plumbing: OHLCV bars, CSV ingestion, a deterministic
//! synthetic-series generator, a precomputed indicator cache, an up/down
//! regime series, and walk-forward fold generation with an embargo gap.

pub mod folds;
pub mod indicators;
pub mod series;
pub mod synth;

pub use folds::{default_folds, generate_folds, FoldSpec, DEFAULT_FOLD_ANCHOR, EMBARGO_DAYS};
pub use indicators::IndicatorSeries;
pub use series::{load_csv, load_csv_reader, Bar, MarketError, MarketSeries, RegimeSeries, REGIME_PERIOD};
pub use synth::{synth_series, SynthParams};
