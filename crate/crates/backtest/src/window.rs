//! Bar-index windows tagged with their role in the walk-forward protocol.

use market::{FoldSpec, MarketSeries};
use serde::{Deserialize, Serialize};

/// What a window is used for. Test windows are fenced off by the access
/// guard during search and training.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Purpose {
    Train,
    Validation,
    Test,
    /// Unrestricted scratch data (unit tests, synthetic probes).
    Scratch,
}

/// A half-open bar-index range `[start, end)` into a series.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Window {
    pub start: usize,
    pub end: usize,
    pub purpose: Purpose,
}

impl Window {
    pub fn new(start: usize, end: usize, purpose: Purpose) -> Window {
        assert!(start <= end, "window must be ordered");
        Window { start, end, purpose }
    }

    pub fn len(&self) -> usize {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.start == self.end
    }

    /// The fold's training window mapped onto series bar indices.
    pub fn train_of(fold: &FoldSpec, series: &MarketSeries) -> Window {
        Window::new(
            series.index_at_or_after(fold.train_start),
            series.index_at_or_after(fold.train_end),
            Purpose::Train,
        )
    }

    pub fn validation_of(fold: &FoldSpec, series: &MarketSeries) -> Window {
        Window::new(
            series.index_at_or_after(fold.val_start),
            series.index_at_or_after(fold.val_end),
            Purpose::Validation,
        )
    }

    pub fn test_of(fold: &FoldSpec, series: &MarketSeries) -> Window {
        Window::new(
            series.index_at_or_after(fold.test_start),
            series.index_at_or_after(fold.test_end),
            Purpose::Test,
        )
    }

    /// Train plus validation as one contiguous window (used by dataset
    /// filtering, which must not touch test data).
    pub fn train_val_of(fold: &FoldSpec, series: &MarketSeries) -> Window {
        Window::new(
            series.index_at_or_after(fold.train_start),
            series.index_at_or_after(fold.val_end),
            Purpose::Train,
        )
    }
}
