//! Behavioral-embedding checks: the spec'd hand case plus an independent
//! trace-walking oracle over real backtests.

use backtest::{simulate, BacktestConfig, BacktestResult, CompiledStrategy, Purpose, Trade, TradeDirection, Window};
use behavior::{compute_phi, phi_distance, BehavioralEmbedding};
use market::{synth_series, MarketSeries, SynthParams};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn empty_result(len: usize, n_evaluated: usize) -> BacktestResult {
    BacktestResult {
        equity_curve: vec![10_000.0; len],
        actions: vec![0; len],
        trades: vec![],
        sharpe: 0.0,
        sharpe_degenerate: true,
        n_trades: 0,
        n_evaluated,
        valid: false,
    }
}

fn hand_trade(entry: usize, exit: usize) -> Trade {
    Trade {
        direction: TradeDirection::Long,
        entry_index: entry,
        entry_price: 100.0,
        exit_index: exit,
        exit_price: 101.0,
        hold_bars: exit - entry,
        quantity: 1.0,
        pnl: 1.0,
        fees: 0.1,
    }
}

#[test]
fn always_flat_trace_is_all_zeros() {
    let series = synth_series(1, 150, &SynthParams::default());
    let window = Window::new(0, 20, Purpose::Scratch);
    let result = empty_result(20, 20);
    let phi = compute_phi(&result, &series, window).unwrap();
    assert_eq!(phi, BehavioralEmbedding::zeros());
}

#[test]
fn hand_trace_two_trades_matches_hand_sums() {
    // Two completed trades with holds 3 and 5 over T = 20 evaluated bars:
    // entry rate = exit rate = 2/20, mean hold 4/20, population std 1/20.
    let series = synth_series(1, 150, &SynthParams::default());
    let window = Window::new(0, 20, Purpose::Scratch);
    let mut result = empty_result(20, 20);
    result.trades = vec![hand_trade(2, 5), hand_trade(9, 14)];
    for i in 2..5 {
        result.actions[i] = 1;
    }
    for i in 9..14 {
        result.actions[i] = 1;
    }
    result.n_trades = 2;
    result.valid = true;
    let phi = compute_phi(&result, &series, window).unwrap();
    assert!((phi.0[4] - 0.1).abs() < 1e-15);
    assert!((phi.0[5] - 0.1).abs() < 1e-15);
    assert!((phi.0[6] - 0.2).abs() < 1e-15);
    assert!((phi.0[7] - 0.05).abs() < 1e-15);
}

#[test]
fn always_long_in_up_regime_concentrates_phi3() {
    // Monotonically increasing closes: regime is up wherever defined.
    let bars: Vec<market::Bar> = (0..160)
        .map(|i| market::Bar {
            date: chrono::NaiveDate::from_ymd_opt(2020, 1, 1).unwrap()
                + chrono::Days::new(i as u64),
            open: 100.0 + i as f64,
            high: 101.0 + i as f64,
            low: 99.0 + i as f64,
            close: 100.0 + i as f64,
            volume: 1.0,
        })
        .collect();
    let series = MarketSeries::new(bars).unwrap();
    let window = Window::new(0, 160, Purpose::Scratch);
    let mut result = empty_result(160, 160);
    result.actions = vec![1; 160];
    let phi = compute_phi(&result, &series, window).unwrap();
    // Regime defined from bar 99: 61 of 160 bars.
    assert!((phi.0[2] - 61.0 / 160.0).abs() < 1e-15);
    assert_eq!(phi.0[0], 0.0);
    assert_eq!(phi.0[1], 0.0);
    assert_eq!(phi.0[3], 0.0);
}

/// Independent oracle: recompute every component from the raw action
/// sequence, a brute-force 100-bar moving average, and run-length analysis.
fn phi_oracle(result: &BacktestResult, series: &MarketSeries, window: Window) -> [f64; 8] {
    let t_count = result.n_evaluated as f64;
    if result.n_evaluated == 0 {
        return [0.0; 8];
    }
    let closes: Vec<f64> = series.bars().iter().map(|b| b.close).collect();
    let mut phi = [0.0f64; 8];
    for (i, &pos) in result.actions.iter().enumerate() {
        let t = window.start + i;
        if t < 99 {
            continue;
        }
        let ma: f64 = closes[t - 99..=t].iter().sum::<f64>() / 100.0;
        let up = closes[t] > ma;
        match (pos, up) {
            (1, false) => phi[0] += 1.0,
            (-1, false) => phi[1] += 1.0,
            (1, true) => phi[2] += 1.0,
            (-1, true) => phi[3] += 1.0,
            _ => {}
        }
    }
    for k in 0..4 {
        phi[k] /= t_count;
    }
    // Runs of non-flat positions; a run reaching the final bar exits on
    // that bar's close, so its hold is one bar shorter than its length.
    let mut holds: Vec<f64> = Vec::new();
    let mut run_start: Option<usize> = None;
    let n = result.actions.len();
    for i in 0..=n {
        let nonflat = i < n && result.actions[i] != 0;
        match (run_start, nonflat) {
            (None, true) => run_start = Some(i),
            (Some(s), false) => {
                let hold = if i == n { (n - 1 - s) as f64 } else { (i - s) as f64 };
                holds.push(hold);
                run_start = None;
            }
            _ => {}
        }
    }
    let j = holds.len() as f64;
    phi[4] = j / t_count;
    phi[5] = j / t_count;
    if !holds.is_empty() {
        let mean = holds.iter().sum::<f64>() / j;
        let var = holds.iter().map(|h| (h - mean) * (h - mean)).sum::<f64>() / j;
        phi[6] = mean / t_count;
        phi[7] = var.sqrt() / t_count;
    }
    phi
}

#[test]
fn oracle_agrees_on_random_backtests() {
    let series = synth_series(31, 400, &SynthParams::default());
    let cfg = BacktestConfig::default();
    let gen_cfg = gptl::MutationConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let window = Window::new(50, 350, Purpose::Scratch);
    let mut checked = 0;
    while checked < 60 {
        let s = gptl::random_strategy(&gen_cfg, &mut rng);
        let Ok(compiled) = CompiledStrategy::compile(&s, &series) else {
            continue;
        };
        let result = simulate(&compiled, &series, window, &cfg).unwrap();
        let phi = compute_phi(&result, &series, window).unwrap();
        let expect = phi_oracle(&result, &series, window);
        for k in 0..8 {
            assert!(
                (phi.0[k] - expect[k]).abs() <= 1e-12,
                "component {k}: {} vs {}",
                phi.0[k],
                expect[k]
            );
        }
        phi.check_invariants().unwrap();
        checked += 1;
    }
}

#[test]
fn distance_symmetry_and_triangle_on_random_embeddings() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    use rand::Rng;
    for _ in 0..200 {
        let mut make = || {
            let mut p = [0.0f64; 8];
            for v in &mut p {
                *v = rng.gen_range(0.0..0.5);
            }
            BehavioralEmbedding(p)
        };
        let (a, b, c) = (make(), make(), make());
        assert!((phi_distance(&a, &b) - phi_distance(&b, &a)).abs() < 1e-15);
        assert!(phi_distance(&a, &c) <= phi_distance(&a, &b) + phi_distance(&b, &c) + 1e-12);
        assert_eq!(phi_distance(&a, &a), 0.0);
    }
}
