//! Bars, series validation, CSV ingestion, and the shared indicator cache.

use std::collections::HashMap;
use std::io::Read;
use std::path::Path;
use std::sync::{Arc, Mutex};

use chrono::NaiveDate;
use gptl::{Field, Indicator};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::indicators::{compute_indicator_values, IndicatorSeries};

#[derive(Debug, Error)]
pub enum MarketError {
    #[error("format error: {0}")]
    Format(String),
    #[error("ordering error: {0}")]
    Ordering(String),
    #[error("OHLC violation at row {row}: {detail}")]
    OhlcViolation { row: usize, detail: String },
    #[error("unknown indicator `{0}`")]
    UnknownIndicator(String),
    #[error("bad period {0}: must be in [2, 200]")]
    BadPeriod(u32),
    #[error("series too short: {len} bars, need at least {need}")]
    TooShort { len: usize, need: usize },
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

/// One daily OHLCV bar.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bar {
    pub date: NaiveDate,
    pub open: f64,
    pub high: f64,
    pub low: f64,
    pub close: f64,
    pub volume: f64,
}

impl Bar {
    pub fn field(&self, f: Field) -> f64 {
        match f {
            Field::Open => self.open,
            Field::High => self.high,
            Field::Low => self.low,
            Field::Close => self.close,
            Field::Volume => self.volume,
        }
    }

    fn validate(&self, row: usize) -> Result<(), MarketError> {
        let lo = self.open.min(self.close);
        let hi = self.open.max(self.close);
        if !(self.low <= lo && hi <= self.high) {
            return Err(MarketError::OhlcViolation {
                row,
                detail: format!(
                    "low {} / open {} / close {} / high {}",
                    self.low, self.open, self.close, self.high
                ),
            });
        }
        if self.volume < 0.0 {
            return Err(MarketError::OhlcViolation {
                row,
                detail: format!("negative volume {}", self.volume),
            });
        }
        for v in [self.open, self.high, self.low, self.close, self.volume] {
            if !v.is_finite() {
                return Err(MarketError::Format(format!("non-finite value at row {row}")));
            }
        }
        Ok(())
    }
}

/// Up/down regime: close above its 100-bar moving average. Defined from
/// `defined_from` onward.
#[derive(Debug, Clone)]
pub struct RegimeSeries {
    pub defined_from: usize,
    pub up: Vec<bool>,
}

impl RegimeSeries {
    /// `Some(true)` in an up regime, `None` where the moving average is not
    /// yet defined.
    pub fn at(&self, t: usize) -> Option<bool> {
        if t < self.defined_from || t >= self.up.len() {
            None
        } else {
            Some(self.up[t])
        }
    }
}

pub const REGIME_PERIOD: u32 = 100;

type CacheKey = (Indicator, Field, u32);

/// A validated, date-sorted bar series with a lazily filled indicator cache.
///
/// The cache is behind a mutex: readers either find a complete entry or
/// compute one under the lock, so concurrent readers never observe partial
/// values. Cached series are shared via `Arc`.
#[derive(Debug)]
pub struct MarketSeries {
    bars: Vec<Bar>,
    cache: Mutex<HashMap<CacheKey, Arc<IndicatorSeries>>>,
}

impl MarketSeries {
    pub fn new(mut bars: Vec<Bar>) -> Result<MarketSeries, MarketError> {
        if bars.is_empty() {
            return Err(MarketError::Format("empty series".into()));
        }
        bars.sort_by_key(|b| b.date);
        for w in bars.windows(2) {
            if w[0].date == w[1].date {
                return Err(MarketError::Ordering(format!(
                    "duplicate date {}",
                    w[0].date
                )));
            }
        }
        for (i, bar) in bars.iter().enumerate() {
            bar.validate(i)?;
        }
        Ok(MarketSeries {
            bars,
            cache: Mutex::new(HashMap::new()),
        })
    }

    pub fn bars(&self) -> &[Bar] {
        &self.bars
    }

    pub fn len(&self) -> usize {
        self.bars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bars.is_empty()
    }

    pub fn first_date(&self) -> NaiveDate {
        self.bars[0].date
    }

    pub fn last_date(&self) -> NaiveDate {
        self.bars[self.bars.len() - 1].date
    }

    /// Index of the first bar with date >= `d`.
    pub fn index_at_or_after(&self, d: NaiveDate) -> usize {
        self.bars.partition_point(|b| b.date < d)
    }

    /// Indicator values over the whole series, computed once and cached.
    /// Values at index t depend only on bars at or before t.
    pub fn indicator(
        &self,
        ind: Indicator,
        field: Field,
        period: u32,
    ) -> Result<Arc<IndicatorSeries>, MarketError> {
        if !(2..=200).contains(&period) {
            return Err(MarketError::BadPeriod(period));
        }
        let key = (ind, field, period);
        let mut cache = self.cache.lock().unwrap();
        if let Some(hit) = cache.get(&key) {
            return Ok(Arc::clone(hit));
        }
        let values = Arc::new(compute_indicator_values(&self.bars, ind, field, period));
        cache.insert(key, Arc::clone(&values));
        Ok(values)
    }

    /// The up/down regime series: close strictly above its 100-bar SMA.
    pub fn regime(&self) -> Result<RegimeSeries, MarketError> {
        if self.bars.len() < REGIME_PERIOD as usize {
            return Err(MarketError::TooShort {
                len: self.bars.len(),
                need: REGIME_PERIOD as usize,
            });
        }
        let ma = self.indicator(Indicator::Sma, Field::Close, REGIME_PERIOD)?;
        let up = self
            .bars
            .iter()
            .enumerate()
            .map(|(t, bar)| ma.at(t).is_some_and(|m| bar.close > m))
            .collect();
        Ok(RegimeSeries {
            defined_from: ma.defined_from,
            up,
        })
    }
}

/// Load a series from CSV with header `date,open,high,low,close,volume` and
/// ISO dates. Rows may arrive unsorted; duplicate dates are rejected.
pub fn load_csv(path: &Path) -> Result<MarketSeries, MarketError> {
    let file = std::fs::File::open(path)?;
    load_csv_reader(file)
}

pub fn load_csv_reader<R: Read>(reader: R) -> Result<MarketSeries, MarketError> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(reader);
    {
        let headers = rdr
            .headers()
            .map_err(|e| MarketError::Format(e.to_string()))?;
        let expected = ["date", "open", "high", "low", "close", "volume"];
        let got: Vec<&str> = headers.iter().collect();
        if got != expected {
            return Err(MarketError::Format(format!(
                "expected header {expected:?}, found {got:?}"
            )));
        }
    }
    let mut bars = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| MarketError::Format(format!("row {i}: {e}")))?;
        if rec.len() != 6 {
            return Err(MarketError::Format(format!(
                "row {i}: expected 6 fields, found {}",
                rec.len()
            )));
        }
        let date = NaiveDate::parse_from_str(&rec[0], "%Y-%m-%d")
            .map_err(|e| MarketError::Format(format!("row {i}: bad date `{}`: {e}", &rec[0])))?;
        let mut nums = [0.0f64; 5];
        for (k, n) in nums.iter_mut().enumerate() {
            *n = rec[k + 1]
                .parse()
                .map_err(|e| MarketError::Format(format!("row {i}: bad number `{}`: {e}", &rec[k + 1])))?;
        }
        bars.push(Bar {
            date,
            open: nums[0],
            high: nums[1],
            low: nums[2],
            close: nums[3],
            volume: nums[4],
        });
    }
    MarketSeries::new(bars)
}
