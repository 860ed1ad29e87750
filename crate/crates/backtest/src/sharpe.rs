//! Annualized Sharpe ratio of an equity curve.
//!
//! Daily close-to-close returns, zero risk-free rate, sample standard
//! deviation, annualization by sqrt(252). A zero-volatility curve is
//! reported as 0.0 with the degenerate flag set instead of NaN.

use crate::sim::BacktestError;

pub const ANNUALIZATION: f64 = 252.0;
const STD_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, Copy)]
pub struct Sharpe {
    pub value: f64,
    pub degenerate: bool,
}

pub fn sharpe(equity_curve: &[f64]) -> Result<Sharpe, BacktestError> {
    if equity_curve.len() < 2 {
        return Err(BacktestError::TooShort(equity_curve.len()));
    }
    let mut returns = Vec::with_capacity(equity_curve.len() - 1);
    for w in equity_curve.windows(2) {
        if w[0] > 0.0 {
            returns.push(w[1] / w[0] - 1.0);
        } else {
            // A non-positive equity point has no meaningful return; treat the
            // step as flat so the ratio stays finite and deterministic.
            returns.push(0.0);
        }
    }
    if returns.len() < 2 {
        return Ok(Sharpe {
            value: 0.0,
            degenerate: true,
        });
    }
    let n = returns.len() as f64;
    let mean = returns.iter().sum::<f64>() / n;
    let var = returns.iter().map(|r| (r - mean) * (r - mean)).sum::<f64>() / (n - 1.0);
    let std = var.sqrt();
    if std < STD_FLOOR {
        return Ok(Sharpe {
            value: 0.0,
            degenerate: true,
        });
    }
    Ok(Sharpe {
        value: mean / std * ANNUALIZATION.sqrt(),
        degenerate: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_curve_is_degenerate_zero() {
        let s = sharpe(&[100.0, 100.0, 100.0, 100.0]).unwrap();
        assert_eq!(s.value, 0.0);
        assert!(s.degenerate);
    }

    #[test]
    fn alternating_returns_have_zero_mean() {
        // +1% then -1% alternating: mean return is slightly negative in
        // price terms but symmetric in return terms.
        let mut curve = vec![100.0];
        for i in 0..10 {
            let last = *curve.last().unwrap();
            let r = if i % 2 == 0 { 0.01 } else { -0.01 };
            curve.push(last * (1.0 + r));
        }
        let s = sharpe(&curve).unwrap();
        assert!(s.value.abs() < 1e-12, "sharpe {}", s.value);
    }

    #[test]
    fn too_short_curve_errors() {
        assert!(matches!(sharpe(&[100.0]), Err(BacktestError::TooShort(1))));
    }
}
