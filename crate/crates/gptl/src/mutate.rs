//! Type-preserving discrete mutation over ASTs.
//!
//! Five operators: subtree replacement, operator mutation, terminal
//! mutation, insertion (wrap a Boolean node in a fresh logical op), and
//! deletion (hoist a logical operand). Sites are collected with their
//! remaining depth budgets so every output respects the configured bounds;
//! an operator with no applicable site falls back to terminal mutation,
//! which always has a site.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::ast::{CmpOp, Expr, NumExpr, SignalId, Strategy};
use crate::generate::{gen_bool, gen_num, MutationConfig};
use crate::token::{Field, NumId};

/// The discrete mutation operators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MutationOp {
    SubtreeReplace,
    OperatorMutate,
    TerminalMutate,
    Insert,
    Delete,
}

impl MutationOp {
    pub const ALL: [MutationOp; 5] = [
        MutationOp::SubtreeReplace,
        MutationOp::OperatorMutate,
        MutationOp::TerminalMutate,
        MutationOp::Insert,
        MutationOp::Delete,
    ];
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum BStep {
    L,
    R,
    Inner,
}

fn bool_at_mut<'a>(root: &'a mut Expr, path: &[BStep]) -> &'a mut Expr {
    let mut cur = root;
    for s in path {
        cur = match (cur, s) {
            (Expr::And(l, _), BStep::L) | (Expr::Or(l, _), BStep::L) => &mut **l,
            (Expr::And(_, r), BStep::R) | (Expr::Or(_, r), BStep::R) => &mut **r,
            (Expr::Not(inner), BStep::Inner) => &mut **inner,
            _ => unreachable!("path does not match tree shape"),
        };
    }
    cur
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Side {
    Lhs,
    Rhs,
}

fn num_at_mut<'a>(root: &'a mut Expr, path: &[BStep], side: Side) -> &'a mut NumExpr {
    match (bool_at_mut(root, path), side) {
        (Expr::Cmp { lhs, .. }, Side::Lhs) => lhs,
        (Expr::Cmp { rhs, .. }, Side::Rhs) => rhs,
        _ => unreachable!("numeric site must address a comparison"),
    }
}

/// A Boolean node position plus the maximum subtree depth allowed there.
#[derive(Debug, Clone)]
struct BoolSite {
    path: Vec<BStep>,
    budget: usize,
}

#[derive(Debug, Clone)]
struct NumSite {
    path: Vec<BStep>,
    side: Side,
    budget: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum TerminalKind {
    FieldName,
    ConstValue,
    IndField,
    IndPeriod,
}

#[derive(Debug, Clone)]
struct TerminalSite {
    path: Vec<BStep>,
    side: Side,
    kind: TerminalKind,
}

#[derive(Default)]
struct Sites {
    bools: Vec<BoolSite>,
    logical: Vec<BoolSite>,
    nots: Vec<BoolSite>,
    cmps: Vec<BoolSite>,
    nums: Vec<NumSite>,
    terminals: Vec<TerminalSite>,
}

fn collect(e: &Expr, level: usize, max_depth: usize, path: &mut Vec<BStep>, out: &mut Sites) {
    let budget = max_depth - level + 1;
    let site = BoolSite {
        path: path.clone(),
        budget,
    };
    out.bools.push(site.clone());
    match e {
        Expr::And(l, r) | Expr::Or(l, r) => {
            out.logical.push(site);
            path.push(BStep::L);
            collect(l, level + 1, max_depth, path, out);
            path.pop();
            path.push(BStep::R);
            collect(r, level + 1, max_depth, path, out);
            path.pop();
        }
        Expr::Not(inner) => {
            out.nots.push(site);
            path.push(BStep::Inner);
            collect(inner, level + 1, max_depth, path, out);
            path.pop();
        }
        Expr::Cmp { lhs, rhs, .. } => {
            out.cmps.push(site);
            for (side, operand) in [(Side::Lhs, lhs), (Side::Rhs, rhs)] {
                out.nums.push(NumSite {
                    path: path.clone(),
                    side,
                    budget: budget - 1,
                });
                match operand {
                    NumExpr::Field(_) => out.terminals.push(TerminalSite {
                        path: path.clone(),
                        side,
                        kind: TerminalKind::FieldName,
                    }),
                    NumExpr::Const(_) => out.terminals.push(TerminalSite {
                        path: path.clone(),
                        side,
                        kind: TerminalKind::ConstValue,
                    }),
                    NumExpr::Indicator { .. } => {
                        out.terminals.push(TerminalSite {
                            path: path.clone(),
                            side,
                            kind: TerminalKind::IndField,
                        });
                        out.terminals.push(TerminalSite {
                            path: path.clone(),
                            side,
                            kind: TerminalKind::IndPeriod,
                        });
                    }
                }
            }
        }
    }
}

fn collect_sites(e: &Expr, max_depth: usize) -> Sites {
    let mut out = Sites::default();
    let mut path = Vec::new();
    collect(e, 1, max_depth, &mut path, &mut out);
    out
}

fn pick_other_field<R: Rng>(current: Field, rng: &mut R) -> Field {
    let others: Vec<Field> = Field::ALL.into_iter().filter(|f| *f != current).collect();
    *others.choose(rng).unwrap()
}

fn pick_other_const<R: Rng>(current: NumId, rng: &mut R) -> NumId {
    let others: Vec<NumId> = NumId::all().filter(|c| *c != current).collect();
    *others.choose(rng).unwrap()
}

fn pick_other_period<R: Rng>(current: NumId, rng: &mut R) -> NumId {
    let others: Vec<NumId> = NumId::period_ids()
        .into_iter()
        .filter(|p| *p != current)
        .collect();
    *others.choose(rng).unwrap()
}

fn apply_terminal_mutate<R: Rng>(e: &mut Expr, sites: &Sites, rng: &mut R) {
    let site = sites.terminals.choose(rng).expect("terminal site exists");
    let num = num_at_mut(e, &site.path, site.side);
    match (site.kind, &mut *num) {
        (TerminalKind::FieldName, NumExpr::Field(f)) => *f = pick_other_field(*f, rng),
        (TerminalKind::ConstValue, NumExpr::Const(c)) => *c = pick_other_const(*c, rng),
        (TerminalKind::IndField, NumExpr::Indicator { field, .. }) => {
            *field = pick_other_field(*field, rng)
        }
        (TerminalKind::IndPeriod, NumExpr::Indicator { period, .. }) => {
            *period = pick_other_period(*period, rng)
        }
        _ => unreachable!("terminal site kind mismatch"),
    }
}

fn apply_operator_mutate<R: Rng>(e: &mut Expr, sites: &Sites, rng: &mut R) -> bool {
    let mut candidates: Vec<&BoolSite> = Vec::new();
    candidates.extend(sites.logical.iter());
    candidates.extend(sites.cmps.iter());
    let Some(site) = candidates.choose(rng) else {
        return false;
    };
    let node = bool_at_mut(e, &site.path);
    match node {
        Expr::And(l, r) => {
            let (l, r) = (std::mem::replace(&mut **l, dummy()), std::mem::replace(&mut **r, dummy()));
            *node = Expr::Or(Box::new(l), Box::new(r));
        }
        Expr::Or(l, r) => {
            let (l, r) = (std::mem::replace(&mut **l, dummy()), std::mem::replace(&mut **r, dummy()));
            *node = Expr::And(Box::new(l), Box::new(r));
        }
        Expr::Cmp { op, .. } => {
            let others: Vec<CmpOp> = CmpOp::ALL.into_iter().filter(|o| o != op).collect();
            *op = *others.choose(rng).unwrap();
        }
        Expr::Not(_) => unreachable!("NOT has no same-arity replacement"),
    }
    true
}

fn dummy() -> Expr {
    Expr::Cmp {
        op: CmpOp::Gt,
        lhs: NumExpr::Field(Field::Close),
        rhs: NumExpr::Field(Field::Close),
    }
}

fn apply_subtree_replace<R: Rng>(e: &mut Expr, sites: &Sites, rng: &mut R) {
    // Boolean and numeric positions are both replaceable.
    let n_bool = sites.bools.len();
    let n_num = sites.nums.len();
    let k = rng.gen_range(0..n_bool + n_num);
    if k < n_bool {
        let site = &sites.bools[k];
        let fresh = gen_bool(site.budget, rng);
        *bool_at_mut(e, &site.path) = fresh;
    } else {
        let site = &sites.nums[k - n_bool];
        let fresh = gen_num(site.budget, rng);
        *num_at_mut(e, &site.path, site.side) = fresh;
    }
}

fn apply_insert<R: Rng>(e: &mut Expr, sites: &Sites, rng: &mut R) -> bool {
    // Wrap a Boolean node in NOT (needs room for one level) or in AND/OR
    // with a freshly sampled sibling (sibling needs depth >= 2).
    let mut eligible: Vec<(&BoolSite, bool)> = Vec::new();
    for site in &sites.bools {
        let d = bool_depth_at(e, &site.path);
        let can_not = d + 1 <= site.budget;
        let can_binary = d.max(2) + 1 <= site.budget;
        if can_not || can_binary {
            eligible.push((site, can_binary));
        }
    }
    let Some((site, can_binary)) = eligible.choose(rng).copied() else {
        return false;
    };
    let node = bool_at_mut(e, &site.path);
    let old = std::mem::replace(node, dummy());
    let choice = if can_binary { rng.gen_range(0..5) } else { 4 };
    *node = match choice {
        0 | 1 | 2 | 3 => {
            let sibling = gen_bool(site.budget - 1, rng);
            let (l, r) = if choice % 2 == 0 {
                (old, sibling)
            } else {
                (sibling, old)
            };
            if choice < 2 {
                Expr::And(Box::new(l), Box::new(r))
            } else {
                Expr::Or(Box::new(l), Box::new(r))
            }
        }
        _ => Expr::Not(Box::new(old)),
    };
    true
}

fn bool_depth_at(e: &Expr, path: &[BStep]) -> usize {
    let mut cur = e;
    for s in path {
        cur = match (cur, s) {
            (Expr::And(l, _), BStep::L) | (Expr::Or(l, _), BStep::L) => l,
            (Expr::And(_, r), BStep::R) | (Expr::Or(_, r), BStep::R) => r,
            (Expr::Not(inner), BStep::Inner) => inner,
            _ => unreachable!("path does not match tree shape"),
        };
    }
    cur.depth()
}

fn apply_delete<R: Rng>(e: &mut Expr, sites: &Sites, min_depth: usize, rng: &mut R) -> bool {
    let mut candidates: Vec<&BoolSite> = Vec::new();
    candidates.extend(sites.logical.iter());
    candidates.extend(sites.nots.iter());
    let Some(site) = candidates.choose(rng) else {
        return false;
    };
    let node = bool_at_mut(e, &site.path);
    let hoisted = match node {
        Expr::And(l, r) | Expr::Or(l, r) => {
            if rng.gen_bool(0.5) {
                std::mem::replace(&mut **l, dummy())
            } else {
                std::mem::replace(&mut **r, dummy())
            }
        }
        Expr::Not(inner) => std::mem::replace(&mut **inner, dummy()),
        Expr::Cmp { .. } => unreachable!("delete site must be logical"),
    };
    *node = hoisted;
    // Deletion can only shrink the tree; reject if it undershoots min depth.
    e.depth() >= min_depth
}

/// Mutate one signal in place with a specific operator. Returns the operator
/// actually applied (an inapplicable choice falls back to terminal mutation).
pub fn mutate_signal<R: Rng>(
    e: &mut Expr,
    cfg: &MutationConfig,
    op: MutationOp,
    rng: &mut R,
) -> MutationOp {
    let sites = collect_sites(e, cfg.max_depth);
    let applied = match op {
        MutationOp::SubtreeReplace => {
            apply_subtree_replace(e, &sites, rng);
            true
        }
        MutationOp::OperatorMutate => apply_operator_mutate(e, &sites, rng),
        MutationOp::TerminalMutate => {
            apply_terminal_mutate(e, &sites, rng);
            true
        }
        MutationOp::Insert => apply_insert(e, &sites, rng),
        MutationOp::Delete => {
            let backup = e.clone();
            if apply_delete(e, &sites, cfg.min_depth, rng) {
                true
            } else {
                *e = backup;
                false
            }
        }
    };
    if applied {
        op
    } else {
        let sites = collect_sites(e, cfg.max_depth);
        apply_terminal_mutate(e, &sites, rng);
        MutationOp::TerminalMutate
    }
}

fn pick_op<R: Rng>(cfg: &MutationConfig, rng: &mut R) -> MutationOp {
    let weights = cfg.op_weights.as_array();
    let total: f64 = weights.iter().sum();
    let mut x = rng.gen_range(0.0..total);
    for (op, w) in MutationOp::ALL.into_iter().zip(weights) {
        if x < w {
            return op;
        }
        x -= w;
    }
    MutationOp::TerminalMutate
}

/// Mutate a strategy: exactly one of the four signals, chosen uniformly, is
/// modified; the operator is drawn from the configured weights.
pub fn mutate_discrete<R: Rng>(s: &Strategy, cfg: &MutationConfig, rng: &mut R) -> Strategy {
    let signal = SignalId::ALL[rng.gen_range(0..4)];
    let op = pick_op(cfg, rng);
    let mut out = s.clone();
    mutate_signal(out.signal_mut(signal), cfg, op, rng);
    debug_assert!(out.check_depth(cfg.max_depth).is_ok());
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{random_signal, random_strategy};
    use crate::parser::parse_signal;
    use crate::serialize::signal_text;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn operator_mutate_on_gt_stays_in_comparison_set() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let mut e = parse_signal("(close > 5)").unwrap();
            mutate_signal(&mut e, &MutationConfig::default(), MutationOp::OperatorMutate, &mut rng);
            match e {
                Expr::Cmp { op, .. } => {
                    assert_ne!(op, CmpOp::Gt);
                    assert!(CmpOp::ALL.contains(&op));
                }
                other => panic!("operator mutation changed shape: {other:?}"),
            }
        }
    }

    #[test]
    fn mutation_closure_holds() {
        let cfg = MutationConfig::default();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..5_000 {
            let parent = random_strategy(&cfg, &mut rng);
            let child = mutate_discrete(&parent, &cfg, &mut rng);
            child.check_depth(cfg.max_depth).unwrap();
            for sig in child.signals() {
                assert!(sig.depth() >= cfg.min_depth);
                // Round-trips through the parser.
                assert_eq!(&parse_signal(&signal_text(sig)).unwrap(), sig);
            }
        }
    }

    #[test]
    fn exactly_one_signal_changes_shape_or_stays() {
        // Mutation touches exactly one signal; the other three are identical.
        let cfg = MutationConfig::default();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..500 {
            let parent = random_strategy(&cfg, &mut rng);
            let child = mutate_discrete(&parent, &cfg, &mut rng);
            let unchanged = SignalId::ALL
                .iter()
                .filter(|&&id| parent.signal(id) == child.signal(id))
                .count();
            assert!(unchanged >= 3, "more than one signal changed");
        }
    }

    #[test]
    fn delete_on_min_depth_trees_falls_back() {
        // All depth-2 trees are bare comparisons over leaves; delete has no
        // site there and must fall back to terminal mutation.
        let cfg = MutationConfig::default();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for op in CmpOp::ALL {
            for lhs_field in crate::token::Field::ALL {
                for rhs in NumId::all() {
                    let mut e = Expr::Cmp {
                        op,
                        lhs: NumExpr::Field(lhs_field),
                        rhs: NumExpr::Const(rhs),
                    };
                    let applied =
                        mutate_signal(&mut e, &cfg, MutationOp::Delete, &mut rng);
                    assert_eq!(applied, MutationOp::TerminalMutate);
                    assert!(e.depth() >= cfg.min_depth);
                }
            }
        }
    }

    #[test]
    fn insert_respects_max_depth() {
        let cfg = MutationConfig::default();
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..2_000 {
            let mut e = random_signal(&cfg, &mut rng);
            mutate_signal(&mut e, &cfg, MutationOp::Insert, &mut rng);
            assert!(e.depth() <= cfg.max_depth);
        }
    }
}
