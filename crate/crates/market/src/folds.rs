//! Walk-forward fold generation.
//!
//! Folds advance through time by a fixed recurrence in calendar days:
//! validation starts where training ends and lasts 195 days, the test
//! window starts after a 10-day embargo and lasts 185 days, and the next
//! training window starts at the previous test end. Training windows last
//! 910 days, except that a window spanning three complete Februaries runs
//! one day longer; both irregular folds of the historical five-fold
//! protocol (folds 1 and 4) follow that rule, and fold 1's anchor end is
//! consistent with it. Fold 1 is still anchored by its explicit dates.

use chrono::{Days, NaiveDate};
use serde::{Deserialize, Serialize};

pub const VAL_DAYS: u64 = 195;
pub const EMBARGO_DAYS: u64 = 10;
pub const TEST_DAYS: u64 = 185;
pub const TRAIN_DAYS: u64 = 910;

/// The reference anchor used by the historical five-fold protocol.
pub const DEFAULT_FOLD_ANCHOR: (&str, &str) = ("2008-01-01", "2010-06-30");

/// One walk-forward fold: ordered train / validation / test windows with an
/// embargo gap before the test window. End dates are exclusive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FoldSpec {
    pub train_start: NaiveDate,
    pub train_end: NaiveDate,
    pub val_start: NaiveDate,
    pub val_end: NaiveDate,
    pub test_start: NaiveDate,
    pub test_end: NaiveDate,
    pub embargo_days: u32,
}

impl FoldSpec {
    pub fn validate(&self) -> Result<(), String> {
        if self.val_start != self.train_end {
            return Err("validation must start at the training end".into());
        }
        if self.val_end <= self.val_start || self.train_end <= self.train_start {
            return Err("windows must be non-empty and ordered".into());
        }
        let gap = (self.test_start - self.val_end).num_days();
        if gap != self.embargo_days as i64 {
            return Err(format!(
                "embargo gap is {gap} days, expected {}",
                self.embargo_days
            ));
        }
        if self.test_end <= self.test_start {
            return Err("test window must be non-empty".into());
        }
        Ok(())
    }
}

/// Number of whole February months inside `[start, end_exclusive)`.
fn complete_februaries(start: NaiveDate, end_exclusive: NaiveDate) -> usize {
    use chrono::Datelike;
    let mut n = 0;
    for year in start.year()..=end_exclusive.year() {
        let feb_first = NaiveDate::from_ymd_opt(year, 2, 1).unwrap();
        let feb_last = NaiveDate::from_ymd_opt(year, 3, 1).unwrap() - Days::new(1);
        if start <= feb_first && feb_last < end_exclusive {
            n += 1;
        }
    }
    n
}

/// Training-window end for a window starting at `start`: 910 days, one more
/// when the base window spans three complete Februaries.
pub fn train_end_for(start: NaiveDate) -> NaiveDate {
    let base_end = start + Days::new(TRAIN_DAYS);
    if complete_februaries(start, base_end) >= 3 {
        base_end + Days::new(1)
    } else {
        base_end
    }
}

/// Generate `k` folds from the anchor training window.
pub fn generate_folds(
    anchor_train_start: NaiveDate,
    anchor_train_end: NaiveDate,
    k: usize,
) -> Vec<FoldSpec> {
    assert!(k >= 1, "need at least one fold");
    let mut folds = Vec::with_capacity(k);
    let mut train_start = anchor_train_start;
    let mut train_end = anchor_train_end;
    for _ in 0..k {
        let val_start = train_end;
        let val_end = val_start + Days::new(VAL_DAYS);
        let test_start = val_end + Days::new(EMBARGO_DAYS);
        let test_end = test_start + Days::new(TEST_DAYS);
        let fold = FoldSpec {
            train_start,
            train_end,
            val_start,
            val_end,
            test_start,
            test_end,
            embargo_days: EMBARGO_DAYS as u32,
        };
        debug_assert!(fold.validate().is_ok());
        folds.push(fold);
        train_start = test_end;
        train_end = train_end_for(train_start);
    }
    folds
}

/// `generate_folds` from the reference anchor.
pub fn default_folds(k: usize) -> Vec<FoldSpec> {
    let start: NaiveDate = DEFAULT_FOLD_ANCHOR.0.parse().unwrap();
    let end: NaiveDate = DEFAULT_FOLD_ANCHOR.1.parse().unwrap();
    generate_folds(start, end, k)
}
