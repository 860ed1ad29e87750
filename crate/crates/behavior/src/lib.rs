//! The behavioral embedding: an 8-dimensional summary of an execution
//! trace, the L2 step size between parent and child embeddings, its
//! discretization into size bins, and the behavioral trust region.
//!
//! Components, in order:
//! 1. fraction of bars long in a down regime
//! 2. fraction short in a down regime
//! 3. fraction long in an up regime
//! 4. fraction short in an up regime
//! 5. entry rate (entries per evaluated bar)
//! 6. exit rate
//! 7. mean completed-trade hold, normalized by evaluated bars
//! 8. population std of holds, normalized the same way
//!
//! Regime terms are summed only over bars where the 100-bar moving average
//! is defined; all denominators are the evaluated-bar count T.

use backtest::{BacktestError, BacktestResult, Window};
use market::{MarketSeries, RegimeSeries};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const PHI_DIM: usize = 8;

/// Trust region boundary: parent-child steps with `phi_l2 <= 0.35` are
/// behavior-local. The boundary itself is inside the region even though it
/// bins as `Large`.
pub const TRUST_REGION_MAX: f64 = 0.35;

pub const RHO_TINY_MAX: f64 = 0.05;
pub const RHO_SMALL_MAX: f64 = 0.15;
pub const RHO_MEDIUM_MAX: f64 = 0.35;

#[derive(Debug, Error)]
pub enum BehaviorError {
    #[error("action sequence length {actions} does not match window length {window}")]
    LengthMismatch { actions: usize, window: usize },
    #[error("negative distance {0}")]
    NegativeDistance(f64),
}

/// The 8-component behavioral embedding of one backtest.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BehavioralEmbedding(pub [f64; PHI_DIM]);

impl BehavioralEmbedding {
    pub fn zeros() -> Self {
        BehavioralEmbedding([0.0; PHI_DIM])
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    /// Basic sanity: rates and regime fractions in [0,1], the four regime
    /// fractions sum to at most one, hold stats nonnegative.
    pub fn check_invariants(&self) -> Result<(), String> {
        let p = &self.0;
        for (i, v) in p.iter().enumerate().take(6) {
            if !(0.0..=1.0).contains(v) {
                return Err(format!("phi[{i}] = {v} outside [0,1]"));
            }
        }
        if p[6] < 0.0 || p[7] < 0.0 {
            return Err("hold statistics must be nonnegative".into());
        }
        if p[0] + p[1] + p[2] + p[3] > 1.0 + 1e-12 {
            return Err("regime exposure fractions exceed 1".into());
        }
        Ok(())
    }
}

/// Behavioral step size: Euclidean distance between two embeddings.
pub fn phi_distance(a: &BehavioralEmbedding, b: &BehavioralEmbedding) -> f64 {
    a.0.iter()
        .zip(&b.0)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// Discretized step size.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RhoBin {
    Tiny,
    Small,
    Medium,
    Large,
}

/// Bin a step size: [0,0.05) tiny, [0.05,0.15) small, [0.15,0.35) medium,
/// [0.35,inf) large. Left-closed everywhere.
pub fn rho_bin(d: f64) -> Result<RhoBin, BehaviorError> {
    if d < 0.0 || d.is_nan() {
        return Err(BehaviorError::NegativeDistance(d));
    }
    Ok(if d < RHO_TINY_MAX {
        RhoBin::Tiny
    } else if d < RHO_SMALL_MAX {
        RhoBin::Small
    } else if d < RHO_MEDIUM_MAX {
        RhoBin::Medium
    } else {
        RhoBin::Large
    })
}

/// Inclusive trust-region membership: `d <= 0.35`.
pub fn in_trust_region(d: f64) -> bool {
    d <= TRUST_REGION_MAX
}

/// Compute the behavioral embedding of a backtest over its window.
///
/// Pure function of the action sequence, the regime series, the trade
/// list, and the evaluated-bar count carried by the result.
pub fn compute_phi(
    result: &BacktestResult,
    series: &MarketSeries,
    window: Window,
) -> Result<BehavioralEmbedding, BehaviorError> {
    if result.actions.len() != window.len() {
        return Err(BehaviorError::LengthMismatch {
            actions: result.actions.len(),
            window: window.len(),
        });
    }
    let t_count = result.n_evaluated;
    if t_count == 0 {
        return Ok(BehavioralEmbedding::zeros());
    }
    let t_f = t_count as f64;

    // Regime exposure over bars where the regime is defined.
    let regime: Option<RegimeSeries> = series.regime().ok();
    let mut phi = [0.0f64; PHI_DIM];
    if let Some(regime) = &regime {
        let (mut long_down, mut short_down, mut long_up, mut short_up) = (0u64, 0u64, 0u64, 0u64);
        for (i, &pos) in result.actions.iter().enumerate() {
            let Some(up) = regime.at(window.start + i) else {
                continue;
            };
            match (pos, up) {
                (1, false) => long_down += 1,
                (-1, false) => short_down += 1,
                (1, true) => long_up += 1,
                (-1, true) => short_up += 1,
                _ => {}
            }
        }
        phi[0] = long_down as f64 / t_f;
        phi[1] = short_down as f64 / t_f;
        phi[2] = long_up as f64 / t_f;
        phi[3] = short_up as f64 / t_f;
    }

    // Entry/exit rates. Every entered trade completes (forced liquidation),
    // so both event counts equal the completed-trade count.
    let n_trades = result.trades.len() as f64;
    phi[4] = n_trades / t_f;
    phi[5] = n_trades / t_f;

    // Hold statistics over completed trades; population std so a single
    // trade yields zero spread, and no trades yield zeros.
    if !result.trades.is_empty() {
        let holds: Vec<f64> = result.trades.iter().map(|t| t.hold_bars as f64).collect();
        let mean = holds.iter().sum::<f64>() / holds.len() as f64;
        let var = holds.iter().map(|h| (h - mean) * (h - mean)).sum::<f64>() / holds.len() as f64;
        phi[6] = mean / t_f;
        phi[7] = var.sqrt() / t_f;
    }

    Ok(BehavioralEmbedding(phi))
}
