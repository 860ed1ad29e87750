//! Deterministic event-driven backtesting of GPTL strategies.
//!
//! At each bar the four signals are evaluated against the bar's fields and
//! cached indicators; decisions fill at the next bar's open with slippage
//! charged against the trader and a fee per fill. One position at a time,
//! no scaling, exits before entries, LE beats SE when both fire flat.
//! Equity is marked to close every bar and any open position is liquidated
//! at the final close, so every entered trade completes.

pub mod divergence;
pub mod eval;
pub mod guard;
pub mod sharpe;
pub mod sim;
pub mod window;

pub use divergence::action_divergence;
pub use eval::{evaluate_signals, CompiledStrategy};
pub use sharpe::sharpe;
pub use sim::{simulate, BacktestConfig, BacktestError, BacktestResult, Position, Trade, TradeDirection};
pub use window::{Purpose, Window};
