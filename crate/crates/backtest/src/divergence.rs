//! Behavioral divergence between two strategies on shared market data:
//! the fraction of bars on which their positions differ.

use crate::sim::BacktestError;

pub fn action_divergence(a: &[i8], b: &[i8]) -> Result<f64, BacktestError> {
    if a.len() != b.len() {
        return Err(BacktestError::LengthMismatch(a.len(), b.len()));
    }
    if a.is_empty() {
        return Ok(0.0);
    }
    let differing = a.iter().zip(b).filter(|(x, y)| x != y).count();
    Ok(differing as f64 / a.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_sequences_are_zero() {
        assert_eq!(action_divergence(&[1, 0, -1], &[1, 0, -1]).unwrap(), 0.0);
    }

    #[test]
    fn negation_without_flats_is_one() {
        let a = [1i8, -1, 1, 1, -1];
        let b: Vec<i8> = a.iter().map(|x| -x).collect();
        assert_eq!(action_divergence(&a, &b).unwrap(), 1.0);
    }

    #[test]
    fn three_of_ten_differ() {
        let a = [0i8, 0, 0, 0, 0, 0, 0, 0, 0, 0];
        let b = [1i8, 1, 1, 0, 0, 0, 0, 0, 0, 0];
        assert_eq!(action_divergence(&a, &b).unwrap(), 0.3);
    }

    #[test]
    fn length_mismatch_errors() {
        assert!(matches!(
            action_divergence(&[1], &[1, 0]),
            Err(BacktestError::LengthMismatch(1, 2))
        ));
    }

    #[test]
    fn pseudometric_properties() {
        let seqs: [&[i8]; 3] = [&[1, 0, -1, 0], &[1, 1, -1, 0], &[0, 1, -1, -1]];
        for a in seqs {
            assert_eq!(action_divergence(a, a).unwrap(), 0.0);
            for b in seqs {
                let d_ab = action_divergence(a, b).unwrap();
                assert_eq!(d_ab, action_divergence(b, a).unwrap());
                for c in seqs {
                    let d_ac = action_divergence(a, c).unwrap();
                    let d_cb = action_divergence(c, b).unwrap();
                    assert!(d_ab <= d_ac + d_cb + 1e-15);
                }
            }
        }
    }
}
