//! Normalized token-level edit distance, and its average over the four
//! signals as a structural distance between strategies.

use crate::ast::Strategy;
use crate::serialize::signal_tokens;

/// Classic Levenshtein distance (insert/delete/substitute, unit costs).
pub fn levenshtein<T: PartialEq>(a: &[T], b: &[T]) -> usize {
    if a.is_empty() {
        return b.len();
    }
    if b.is_empty() {
        return a.len();
    }
    let mut prev: Vec<usize> = (0..=b.len()).collect();
    let mut cur = vec![0usize; b.len() + 1];
    for (i, ai) in a.iter().enumerate() {
        cur[0] = i + 1;
        for (j, bj) in b.iter().enumerate() {
            let sub = prev[j] + usize::from(ai != bj);
            cur[j + 1] = sub.min(prev[j + 1] + 1).min(cur[j] + 1);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len()]
}

/// Levenshtein distance normalized by the longer sequence; 0 iff equal,
/// and 0 for a pair of empty sequences.
pub fn token_edit_distance<T: PartialEq>(a: &[T], b: &[T]) -> f64 {
    let denom = a.len().max(b.len());
    if denom == 0 {
        return 0.0;
    }
    levenshtein(a, b) as f64 / denom as f64
}

/// Structural distance between two strategies: the per-signal normalized
/// token distance on canonical serializations, averaged over the four
/// signals.
pub fn ast_edit_distance(a: &Strategy, b: &Strategy) -> f64 {
    let sa = a.signals();
    let sb = b.signals();
    let mut total = 0.0;
    for k in 0..4 {
        total += token_edit_distance(&signal_tokens(sa[k]), &signal_tokens(sb[k]));
    }
    total / 4.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ast::Strategy;

    #[test]
    fn identical_sequences_are_zero() {
        assert_eq!(token_edit_distance(&[1, 2, 3], &[1, 2, 3]), 0.0);
        assert_eq!(token_edit_distance::<u8>(&[], &[]), 0.0);
    }

    #[test]
    fn disjoint_equal_length_is_one() {
        assert_eq!(token_edit_distance(&[1, 2, 3], &[4, 5, 6]), 1.0);
    }

    #[test]
    fn hand_dp_three_vs_two() {
        // ["a","b","c"] vs ["a","b"]: one deletion, normalized by 3.
        let d = token_edit_distance(&["a", "b", "c"], &["a", "b"]);
        assert!((d - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn strategy_distance_identity_and_symmetry() {
        let s = Strategy::from_texts(
            "(close > 5)",
            "(open < low)",
            "(high >= 100)",
            "(volume <= 150)",
        )
        .unwrap();
        let t = Strategy::from_texts(
            "(close > 20)",
            "(open < low)",
            "(high >= 100)",
            "(volume <= 150)",
        )
        .unwrap();
        assert_eq!(ast_edit_distance(&s, &s), 0.0);
        assert_eq!(ast_edit_distance(&s, &t), ast_edit_distance(&t, &s));
    }

    #[test]
    fn single_signal_change_scales_by_quarter() {
        // Only LE differs; the strategy distance is a quarter of the LE
        // signal distance.
        let s = Strategy::from_texts(
            "(close > 5)",
            "(open < low)",
            "(high >= 100)",
            "(volume <= 150)",
        )
        .unwrap();
        let t = Strategy::from_texts(
            "(open == 0.5)",
            "(open < low)",
            "(high >= 100)",
            "(volume <= 150)",
        )
        .unwrap();
        let per_signal = token_edit_distance(
            &crate::serialize::signal_tokens(&s.le),
            &crate::serialize::signal_tokens(&t.le),
        );
        assert!(per_signal > 0.0);
        assert!((ast_edit_distance(&s, &t) - per_signal / 4.0).abs() < 1e-15);
    }
}
