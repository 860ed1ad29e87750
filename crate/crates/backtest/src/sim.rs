//! The execution state machine and fill ledger.

use gptl::Strategy;
use market::MarketSeries;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::eval::CompiledStrategy;
use crate::guard;
use crate::sharpe::sharpe;
use crate::window::{Purpose, Window};

#[derive(Debug, Error)]
pub enum BacktestError {
    #[error("no bars in the requested window")]
    NoBars,
    #[error("signals undefined at bar {0} (indicator warm-up)")]
    UndefinedIndicatorAt(usize),
    #[error("equity curve too short: {0} points")]
    TooShort(usize),
    #[error("action sequences differ in length: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("test-window access denied outside a sanctioned reporting scope")]
    TestAccessDenied,
    #[error("market error: {0}")]
    Market(String),
}

/// Position held during a bar.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Position {
    Flat,
    Long,
    Short,
}

impl Position {
    pub fn as_i8(self) -> i8 {
        match self {
            Position::Flat => 0,
            Position::Long => 1,
            Position::Short => -1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TradeDirection {
    Long,
    Short,
}

/// One completed round trip. Indices are window-relative fill bars.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Trade {
    pub direction: TradeDirection,
    pub entry_index: usize,
    pub entry_price: f64,
    pub exit_index: usize,
    pub exit_price: f64,
    pub hold_bars: usize,
    pub quantity: f64,
    /// Gross price P&L (before fees), signed.
    pub pnl: f64,
    /// Total fees across both fills.
    pub fees: f64,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct BacktestConfig {
    pub initial_equity: f64,
    pub slippage_rate: f64,
    pub fee_rate: f64,
}

impl Default for BacktestConfig {
    fn default() -> Self {
        BacktestConfig {
            initial_equity: 10_000.0,
            slippage_rate: 0.001,
            fee_rate: 0.0005,
        }
    }
}

impl BacktestConfig {
    pub fn validate(&self) -> Result<(), String> {
        if !(self.initial_equity > 0.0) {
            return Err("initial equity must be positive".into());
        }
        for (name, r) in [("slippage_rate", self.slippage_rate), ("fee_rate", self.fee_rate)] {
            if !(0.0..=0.1).contains(&r) {
                return Err(format!("{name} must be in [0, 0.1]"));
            }
        }
        Ok(())
    }
}

/// Execution record over one window.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BacktestResult {
    /// Mark-to-close equity per window bar.
    pub equity_curve: Vec<f64>,
    /// Position per window bar (after that bar's open fills): -1, 0, +1.
    pub actions: Vec<i8>,
    pub trades: Vec<Trade>,
    /// Annualized Sharpe of daily equity returns; 0.0 when degenerate.
    pub sharpe: f64,
    pub sharpe_degenerate: bool,
    pub n_trades: usize,
    /// Bars with defined signal evaluation (the warm-up prefix excluded).
    pub n_evaluated: usize,
    /// False when the strategy never traded; such results are filtered out
    /// of datasets and get sentinel fitness during search.
    pub valid: bool,
}

#[derive(Debug, Clone, Copy)]
enum PendingOrder {
    EnterLong,
    EnterShort,
    Exit,
}

/// Deterministic simulation of a compiled strategy over a window.
///
/// Decisions happen at bar close and fill at the next bar's open; slippage
/// moves every fill against the trader and a proportional fee is charged
/// per fill. Entries are all-in at the fill price. Exits take priority over
/// entries; when flat and both entries fire, LE wins. New entries whose
/// fill would land on the final bar are suppressed so every trade completes
/// with at least one bar of holding; any position still open at the end is
/// liquidated at the final close.
pub fn simulate(
    compiled: &CompiledStrategy,
    series: &MarketSeries,
    window: Window,
    cfg: &BacktestConfig,
) -> Result<BacktestResult, BacktestError> {
    if window.is_empty() {
        return Err(BacktestError::NoBars);
    }
    assert!(window.end <= series.len(), "window out of series bounds");
    if window.purpose == Purpose::Test && !guard::test_access_allowed() {
        return Err(BacktestError::TestAccessDenied);
    }

    let len = window.len();
    let bars = &series.bars()[window.start..window.end];
    let buy = |price: f64| price * (1.0 + cfg.slippage_rate);
    let sell = |price: f64| price * (1.0 - cfg.slippage_rate);

    let mut cash = cfg.initial_equity;
    let mut position = Position::Flat;
    let mut quantity = 0.0f64;
    let mut entry_price = 0.0f64;
    let mut entry_index = 0usize;
    let mut entry_fee = 0.0f64;
    let mut pending: Option<PendingOrder> = None;

    let mut equity_curve = vec![0.0f64; len];
    let mut actions = vec![0i8; len];
    let mut trades: Vec<Trade> = Vec::new();
    let mut n_evaluated = 0usize;

    for i in 0..len {
        let bar = &bars[i];

        // Fill the order decided on the previous bar at this bar's open.
        if let Some(order) = pending.take() {
            match order {
                PendingOrder::EnterLong => {
                    debug_assert_eq!(position, Position::Flat);
                    let fill = buy(bar.open);
                    quantity = cash / fill;
                    let fee = cfg.fee_rate * quantity * fill;
                    cash -= quantity * fill + fee;
                    position = Position::Long;
                    entry_price = fill;
                    entry_index = i;
                    entry_fee = fee;
                }
                PendingOrder::EnterShort => {
                    debug_assert_eq!(position, Position::Flat);
                    let fill = sell(bar.open);
                    quantity = cash / fill;
                    let fee = cfg.fee_rate * quantity * fill;
                    cash += quantity * fill - fee;
                    position = Position::Short;
                    entry_price = fill;
                    entry_index = i;
                    entry_fee = fee;
                }
                PendingOrder::Exit => {
                    close_position(
                        &mut cash, &mut position, &mut quantity, entry_price, entry_index,
                        entry_fee, i, bar.open, cfg, &mut trades,
                    );
                }
            }
        }

        actions[i] = position.as_i8();
        equity_curve[i] = mark_equity(cash, position, quantity, bar.close);

        // Decide at this bar's close; the last bar has no next open to fill.
        let t = window.start + i;
        let evaluated = t >= compiled.warmup();
        if evaluated {
            n_evaluated += 1;
        }
        if evaluated && i + 1 < len {
            let [le, se, lx, sx] = compiled.evaluate(series, t)?;
            match position {
                Position::Long if lx => pending = Some(PendingOrder::Exit),
                Position::Short if sx => pending = Some(PendingOrder::Exit),
                Position::Flat if i + 2 < len => {
                    // Entry fills at i+1; require a bar after that so the
                    // trade holds at least one bar before forced close.
                    if le {
                        pending = Some(PendingOrder::EnterLong);
                    } else if se {
                        pending = Some(PendingOrder::EnterShort);
                    }
                }
                _ => {}
            }
        }
    }

    // Forced liquidation at the final close.
    if position != Position::Flat {
        let last = len - 1;
        close_position(
            &mut cash, &mut position, &mut quantity, entry_price, entry_index, entry_fee,
            last, bars[last].close, cfg, &mut trades,
        );
        equity_curve[last] = cash;
    }

    let n_trades = trades.len();
    let sharpe_out = sharpe(&equity_curve)?;
    Ok(BacktestResult {
        equity_curve,
        actions,
        trades,
        sharpe: sharpe_out.value,
        sharpe_degenerate: sharpe_out.degenerate,
        n_trades,
        n_evaluated,
        valid: n_trades > 0,
    })
}

#[allow(clippy::too_many_arguments)]
fn close_position(
    cash: &mut f64,
    position: &mut Position,
    quantity: &mut f64,
    entry_price: f64,
    entry_index: usize,
    entry_fee: f64,
    exit_index: usize,
    raw_price: f64,
    cfg: &BacktestConfig,
    trades: &mut Vec<Trade>,
) {
    let (fill, direction) = match *position {
        Position::Long => (raw_price * (1.0 - cfg.slippage_rate), TradeDirection::Long),
        Position::Short => (raw_price * (1.0 + cfg.slippage_rate), TradeDirection::Short),
        Position::Flat => unreachable!("no position to close"),
    };
    let fee = cfg.fee_rate * *quantity * fill;
    match direction {
        TradeDirection::Long => *cash += *quantity * fill - fee,
        TradeDirection::Short => *cash -= *quantity * fill + fee,
    }
    let pnl = match direction {
        TradeDirection::Long => *quantity * (fill - entry_price),
        TradeDirection::Short => *quantity * (entry_price - fill),
    };
    trades.push(Trade {
        direction,
        entry_index,
        entry_price,
        exit_index,
        exit_price: fill,
        hold_bars: exit_index - entry_index,
        quantity: *quantity,
        pnl,
        fees: entry_fee + fee,
    });
    *position = Position::Flat;
    *quantity = 0.0;
}

fn mark_equity(cash: f64, position: Position, quantity: f64, close: f64) -> f64 {
    match position {
        Position::Flat => cash,
        Position::Long => cash + quantity * close,
        Position::Short => cash - quantity * close,
    }
}

/// Compile then simulate; the common entry point.
pub fn simulate_strategy(
    strategy: &Strategy,
    series: &MarketSeries,
    window: Window,
    cfg: &BacktestConfig,
) -> Result<BacktestResult, BacktestError> {
    let compiled = CompiledStrategy::compile(strategy, series)
        .map_err(|e| BacktestError::Market(e.to_string()))?;
    simulate(&compiled, series, window, cfg)
}
