//! Rolling indicator implementations. Every value at index t is a pure
//! function of bars at or before t; the warm-up prefix is undefined.
//!
//! Conventions: SMA/MAX/MIN/STD are defined from index `period - 1`; EMA is
//! seeded with the SMA of the first `period` bars and defined from
//! `period - 1`; RSI uses Wilder smoothing over close-to-close changes and
//! is defined from index `period`. STD is the population standard deviation.

use gptl::{Field, Indicator};

use crate::series::Bar;

/// A full-length value series with an undefined warm-up prefix.
#[derive(Debug, Clone)]
pub struct IndicatorSeries {
    pub defined_from: usize,
    pub values: Vec<f64>,
}

impl IndicatorSeries {
    pub fn at(&self, t: usize) -> Option<f64> {
        if t < self.defined_from || t >= self.values.len() {
            None
        } else {
            Some(self.values[t])
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

pub(crate) fn compute_indicator_values(
    bars: &[Bar],
    ind: Indicator,
    field: Field,
    period: u32,
) -> IndicatorSeries {
    let xs: Vec<f64> = bars.iter().map(|b| b.field(field)).collect();
    let p = period as usize;
    match ind {
        Indicator::Sma => sma(&xs, p),
        Indicator::Ema => ema(&xs, p),
        Indicator::Rsi => rsi(&xs, p),
        Indicator::Max => rolling(&xs, p, |w| w.iter().copied().fold(f64::NEG_INFINITY, f64::max)),
        Indicator::Min => rolling(&xs, p, |w| w.iter().copied().fold(f64::INFINITY, f64::min)),
        Indicator::Std => rolling(&xs, p, pop_std),
    }
}

fn undefined(n: usize) -> Vec<f64> {
    vec![f64::NAN; n]
}

fn rolling(xs: &[f64], p: usize, f: impl Fn(&[f64]) -> f64) -> IndicatorSeries {
    let n = xs.len();
    let mut values = undefined(n);
    if n >= p {
        for t in (p - 1)..n {
            values[t] = f(&xs[t + 1 - p..=t]);
        }
    }
    IndicatorSeries {
        defined_from: (p - 1).min(n),
        values,
    }
}

fn pop_std(w: &[f64]) -> f64 {
    let n = w.len() as f64;
    let mean = w.iter().sum::<f64>() / n;
    let var = w.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n;
    var.sqrt()
}

fn sma(xs: &[f64], p: usize) -> IndicatorSeries {
    // Recompute each window directly; O(n*p) is fine at daily scale and
    // avoids drift from a running-sum formulation.
    rolling(xs, p, |w| w.iter().sum::<f64>() / w.len() as f64)
}

fn ema(xs: &[f64], p: usize) -> IndicatorSeries {
    let n = xs.len();
    let mut values = undefined(n);
    if n >= p {
        let alpha = 2.0 / (p as f64 + 1.0);
        let seed = xs[..p].iter().sum::<f64>() / p as f64;
        values[p - 1] = seed;
        for t in p..n {
            values[t] = alpha * xs[t] + (1.0 - alpha) * values[t - 1];
        }
    }
    IndicatorSeries {
        defined_from: (p - 1).min(n),
        values,
    }
}

fn rsi(xs: &[f64], p: usize) -> IndicatorSeries {
    let n = xs.len();
    let mut values = undefined(n);
    if n > p {
        let mut avg_gain = 0.0;
        let mut avg_loss = 0.0;
        for t in 1..=p {
            let change = xs[t] - xs[t - 1];
            if change > 0.0 {
                avg_gain += change;
            } else {
                avg_loss -= change;
            }
        }
        avg_gain /= p as f64;
        avg_loss /= p as f64;
        values[p] = rsi_value(avg_gain, avg_loss);
        for t in (p + 1)..n {
            let change = xs[t] - xs[t - 1];
            let (gain, loss) = if change > 0.0 {
                (change, 0.0)
            } else {
                (0.0, -change)
            };
            avg_gain = (avg_gain * (p as f64 - 1.0) + gain) / p as f64;
            avg_loss = (avg_loss * (p as f64 - 1.0) + loss) / p as f64;
            values[t] = rsi_value(avg_gain, avg_loss);
        }
    }
    IndicatorSeries {
        defined_from: p.min(n),
        values,
    }
}

fn rsi_value(avg_gain: f64, avg_loss: f64) -> f64 {
    if avg_loss == 0.0 && avg_gain == 0.0 {
        50.0
    } else if avg_loss == 0.0 {
        100.0
    } else if avg_gain == 0.0 {
        0.0
    } else {
        100.0 - 100.0 / (1.0 + avg_gain / avg_loss)
    }
}
