//! Signal evaluation. A `CompiledStrategy` resolves every indicator
//! reference to a cached series once, so per-bar evaluation is a cheap
//! tree walk; warm-up is the latest first-defined index across the
//! referenced indicators.

use std::sync::Arc;

use gptl::{CmpOp, Expr, NumExpr, Strategy};
use market::{IndicatorSeries, MarketError, MarketSeries};

use crate::sim::BacktestError;

enum CompiledNum {
    Field(gptl::Field),
    Const(f64),
    Indicator(Arc<IndicatorSeries>),
}

enum CompiledExpr {
    And(Box<CompiledExpr>, Box<CompiledExpr>),
    Or(Box<CompiledExpr>, Box<CompiledExpr>),
    Not(Box<CompiledExpr>),
    Cmp {
        op: CmpOp,
        lhs: CompiledNum,
        rhs: CompiledNum,
    },
}

/// A strategy bound to one series with all indicator lookups resolved.
pub struct CompiledStrategy {
    signals: [CompiledExpr; 4],
    warmup: usize,
}

impl CompiledStrategy {
    pub fn compile(strategy: &Strategy, series: &MarketSeries) -> Result<CompiledStrategy, MarketError> {
        let mut warmup = 0usize;
        let mut compiled = Vec::with_capacity(4);
        for sig in strategy.signals() {
            compiled.push(compile_expr(sig, series, &mut warmup)?);
        }
        let signals = compiled
            .try_into()
            .unwrap_or_else(|_| unreachable!("four signals"));
        Ok(CompiledStrategy { signals, warmup })
    }

    /// First bar index at which all four signals are defined.
    pub fn warmup(&self) -> usize {
        self.warmup
    }

    /// Evaluate all four signals at bar `t` (absolute series index).
    pub fn evaluate(&self, series: &MarketSeries, t: usize) -> Result<[bool; 4], BacktestError> {
        if t < self.warmup || t >= series.len() {
            return Err(BacktestError::UndefinedIndicatorAt(t));
        }
        let bar = &series.bars()[t];
        let mut out = [false; 4];
        for (k, sig) in self.signals.iter().enumerate() {
            out[k] = eval_expr(sig, bar, t);
        }
        Ok(out)
    }
}

fn compile_expr(
    e: &Expr,
    series: &MarketSeries,
    warmup: &mut usize,
) -> Result<CompiledExpr, MarketError> {
    Ok(match e {
        Expr::And(l, r) => CompiledExpr::And(
            Box::new(compile_expr(l, series, warmup)?),
            Box::new(compile_expr(r, series, warmup)?),
        ),
        Expr::Or(l, r) => CompiledExpr::Or(
            Box::new(compile_expr(l, series, warmup)?),
            Box::new(compile_expr(r, series, warmup)?),
        ),
        Expr::Not(inner) => CompiledExpr::Not(Box::new(compile_expr(inner, series, warmup)?)),
        Expr::Cmp { op, lhs, rhs } => CompiledExpr::Cmp {
            op: *op,
            lhs: compile_num(lhs, series, warmup)?,
            rhs: compile_num(rhs, series, warmup)?,
        },
    })
}

fn compile_num(
    n: &NumExpr,
    series: &MarketSeries,
    warmup: &mut usize,
) -> Result<CompiledNum, MarketError> {
    Ok(match n {
        NumExpr::Field(f) => CompiledNum::Field(*f),
        NumExpr::Const(c) => CompiledNum::Const(c.value()),
        NumExpr::Indicator { ind, field, period } => {
            let values = series.indicator(*ind, *field, period.value() as u32)?;
            *warmup = (*warmup).max(values.defined_from);
            CompiledNum::Indicator(values)
        }
    })
}

fn eval_expr(e: &CompiledExpr, bar: &market::Bar, t: usize) -> bool {
    match e {
        CompiledExpr::And(l, r) => eval_expr(l, bar, t) && eval_expr(r, bar, t),
        CompiledExpr::Or(l, r) => eval_expr(l, bar, t) || eval_expr(r, bar, t),
        CompiledExpr::Not(inner) => !eval_expr(inner, bar, t),
        CompiledExpr::Cmp { op, lhs, rhs } => {
            op.apply(eval_num(lhs, bar, t), eval_num(rhs, bar, t))
        }
    }
}

fn eval_num(n: &CompiledNum, bar: &market::Bar, t: usize) -> f64 {
    match n {
        CompiledNum::Field(f) => bar.field(*f),
        CompiledNum::Const(v) => *v,
        CompiledNum::Indicator(values) => values
            .at(t)
            .expect("indicator defined past warm-up by construction"),
    }
}

/// Convenience wrapper: compile and evaluate one strategy at one bar.
pub fn evaluate_signals(
    strategy: &Strategy,
    series: &MarketSeries,
    t: usize,
) -> Result<[bool; 4], BacktestError> {
    let compiled = CompiledStrategy::compile(strategy, series)
        .map_err(|e| BacktestError::Market(e.to_string()))?;
    compiled.evaluate(series, t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use market::{synth_series, SynthParams};

    #[test]
    fn irreflexive_strict_comparison_is_false() {
        let series = synth_series(1, 50, &SynthParams::default());
        let s = Strategy::from_texts(
            "(close > close)",
            "(close > close)",
            "(close > close)",
            "(close > close)",
        )
        .unwrap();
        for t in 0..series.len() {
            assert_eq!(evaluate_signals(&s, &series, t).unwrap(), [false; 4]);
        }
    }

    #[test]
    fn reflexive_non_strict_comparison_is_true() {
        let series = synth_series(1, 20, &SynthParams::default());
        let s = Strategy::from_texts(
            "(close >= close)",
            "(close >= close)",
            "(close >= close)",
            "(close >= close)",
        )
        .unwrap();
        assert_eq!(evaluate_signals(&s, &series, 5).unwrap(), [true; 4]);
    }

    #[test]
    fn indicator_warmup_blocks_early_bars() {
        let series = synth_series(2, 60, &SynthParams::default());
        let s = Strategy::from_texts(
            "(SMA(close, 20) > close)",
            "(close > 0)",
            "(close > 0)",
            "(close > 0)",
        )
        .unwrap();
        let compiled = CompiledStrategy::compile(&s, &series).unwrap();
        assert_eq!(compiled.warmup(), 19);
        assert!(compiled.evaluate(&series, 18).is_err());
        assert!(compiled.evaluate(&series, 19).is_ok());
    }

    #[test]
    fn sma_comparison_matches_direct_average() {
        let series = synth_series(3, 40, &SynthParams::default());
        let s = Strategy::from_texts(
            "(SMA(close, 5) > close)",
            "(close > 0)",
            "(close > 0)",
            "(close > 0)",
        )
        .unwrap();
        let compiled = CompiledStrategy::compile(&s, &series).unwrap();
        for t in 4..series.len() {
            let bars = series.bars();
            let avg: f64 = bars[t - 4..=t].iter().map(|b| b.close).sum::<f64>() / 5.0;
            let expect = avg > bars[t].close;
            assert_eq!(compiled.evaluate(&series, t).unwrap()[0], expect, "t={t}");
        }
    }
}
