//! Seeded random program generation. Programs are built top-down against a
//! depth budget, so every output is valid and depth-bounded by construction.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::ast::{CmpOp, Expr, NumExpr, Strategy, DEFAULT_MAX_DEPTH, DEFAULT_MIN_DEPTH};
use crate::token::{Field, Indicator, NumId};

/// Weights over the discrete mutation operators.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OpWeights {
    pub subtree_replace: f64,
    pub operator_mutate: f64,
    pub terminal_mutate: f64,
    pub insert: f64,
    pub delete: f64,
}

impl Default for OpWeights {
    fn default() -> Self {
        OpWeights {
            subtree_replace: 0.3,
            operator_mutate: 0.2,
            terminal_mutate: 0.3,
            insert: 0.1,
            delete: 0.1,
        }
    }
}

impl OpWeights {
    pub fn as_array(&self) -> [f64; 5] {
        [
            self.subtree_replace,
            self.operator_mutate,
            self.terminal_mutate,
            self.insert,
            self.delete,
        ]
    }

    pub fn validate(&self) -> Result<(), String> {
        let w = self.as_array();
        if w.iter().any(|&x| x < 0.0 || !x.is_finite()) {
            return Err("mutation weights must be nonnegative and finite".into());
        }
        if w.iter().sum::<f64>() <= 0.0 {
            return Err("mutation weights must sum to a positive value".into());
        }
        Ok(())
    }
}

/// Generation and mutation bounds.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MutationConfig {
    pub max_depth: usize,
    pub min_depth: usize,
    #[serde(default)]
    pub op_weights: OpWeights,
    pub rng_seed: u64,
}

impl Default for MutationConfig {
    fn default() -> Self {
        MutationConfig {
            max_depth: DEFAULT_MAX_DEPTH,
            min_depth: DEFAULT_MIN_DEPTH,
            op_weights: OpWeights::default(),
            rng_seed: 0,
        }
    }
}

impl MutationConfig {
    pub fn validate(&self) -> Result<(), String> {
        if self.min_depth < 1 {
            return Err("min_depth must be at least 1".into());
        }
        if self.max_depth < self.min_depth {
            return Err("max_depth must be >= min_depth".into());
        }
        // A Boolean root is a comparison over leaves at minimum: depth 2.
        if self.max_depth < 2 {
            return Err("max_depth must be at least 2".into());
        }
        self.op_weights.validate()
    }
}

pub(crate) fn random_field<R: Rng>(rng: &mut R) -> Field {
    *Field::ALL.choose(rng).unwrap()
}

pub(crate) fn random_const<R: Rng>(rng: &mut R) -> NumId {
    let i = rng.gen_range(0..crate::token::NUMERIC_TABLE.len());
    NumId::new(i)
}

pub(crate) fn random_period<R: Rng>(rng: &mut R) -> NumId {
    let ids = NumId::period_ids();
    *ids.choose(rng).unwrap()
}

pub(crate) fn random_indicator<R: Rng>(rng: &mut R) -> Indicator {
    *Indicator::ALL.choose(rng).unwrap()
}

pub(crate) fn random_cmp_op<R: Rng>(rng: &mut R) -> CmpOp {
    *CmpOp::ALL.choose(rng).unwrap()
}

/// Numeric expression within a depth budget (`budget >= 1`).
pub(crate) fn gen_num<R: Rng>(budget: usize, rng: &mut R) -> NumExpr {
    debug_assert!(budget >= 1);
    if budget >= 2 {
        match rng.gen_range(0..100) {
            0..=39 => NumExpr::Field(random_field(rng)),
            40..=64 => NumExpr::Const(random_const(rng)),
            _ => NumExpr::Indicator {
                ind: random_indicator(rng),
                field: random_field(rng),
                period: random_period(rng),
            },
        }
    } else {
        if rng.gen_range(0..100) < 60 {
            NumExpr::Field(random_field(rng))
        } else {
            NumExpr::Const(random_const(rng))
        }
    }
}

fn gen_cmp<R: Rng>(budget: usize, rng: &mut R) -> Expr {
    debug_assert!(budget >= 2);
    Expr::Cmp {
        op: random_cmp_op(rng),
        lhs: gen_num(budget - 1, rng),
        rhs: gen_num(budget - 1, rng),
    }
}

/// Boolean expression within a depth budget (`budget >= 2`).
pub(crate) fn gen_bool<R: Rng>(budget: usize, rng: &mut R) -> Expr {
    debug_assert!(budget >= 2);
    if budget >= 3 {
        match rng.gen_range(0..100) {
            0..=24 => Expr::And(
                Box::new(gen_bool(budget - 1, rng)),
                Box::new(gen_bool(budget - 1, rng)),
            ),
            25..=49 => Expr::Or(
                Box::new(gen_bool(budget - 1, rng)),
                Box::new(gen_bool(budget - 1, rng)),
            ),
            50..=59 => Expr::Not(Box::new(gen_bool(budget - 1, rng))),
            _ => gen_cmp(budget, rng),
        }
    } else {
        gen_cmp(budget, rng)
    }
}

/// One random Boolean signal with depth in `[min_depth, max_depth]`.
pub fn random_signal<R: Rng>(cfg: &MutationConfig, rng: &mut R) -> Expr {
    loop {
        let e = gen_bool(cfg.max_depth, rng);
        if e.depth() >= cfg.min_depth {
            return e;
        }
    }
}

/// One random strategy: four independently sampled signals.
pub fn random_strategy<R: Rng>(cfg: &MutationConfig, rng: &mut R) -> Strategy {
    Strategy {
        le: random_signal(cfg, rng),
        se: random_signal(cfg, rng),
        lx: random_signal(cfg, rng),
        sx: random_signal(cfg, rng),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generated_signals_respect_depth_bounds() {
        let cfg = MutationConfig::default();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut saw_min = false;
        let mut saw_max = false;
        for _ in 0..10_000 {
            let e = random_signal(&cfg, &mut rng);
            let d = e.depth();
            assert!(d >= cfg.min_depth && d <= cfg.max_depth, "depth {d}");
            saw_min |= d == cfg.min_depth;
            saw_max |= d == cfg.max_depth;
        }
        assert!(saw_min, "depth distribution never hit the minimum");
        assert!(saw_max, "depth distribution never hit the maximum");
    }

    #[test]
    fn same_seed_same_strategy() {
        let cfg = MutationConfig::default();
        let a = random_strategy(&cfg, &mut ChaCha8Rng::seed_from_u64(42));
        let b = random_strategy(&cfg, &mut ChaCha8Rng::seed_from_u64(42));
        assert_eq!(a, b);
    }
}
