//! When does a processed arc make its head join `V*`?

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PolicyKind {
    /// Recurse exactly when the head's processed in-arc count reaches the threshold.
    Deterministic,
    /// Recurse with probability `min(1 / (threshold + 1 - count), 1)`.
    Randomized,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RecursionPolicy {
    pub kind: PolicyKind,
    /// Only read by the randomized policy.
    pub rng_seed: u64,
}

impl RecursionPolicy {
    pub fn deterministic() -> Self {
        RecursionPolicy {
            kind: PolicyKind::Deterministic,
            rng_seed: 0,
        }
    }

    pub fn randomized(seed: u64) -> Self {
        RecursionPolicy {
            kind: PolicyKind::Randomized,
            rng_seed: seed,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DomainError {
    #[error("count {count} outside [1, {max}]")]
    CountOutOfRange { count: usize, max: usize },
    #[error("outdegree bound must be >= 2, got {0}")]
    CapTooSmall(usize),
}

/// Probability of recursing on a head whose processed in-arc count just
/// became `count_after`, for threshold `threshold`.
pub fn recursion_probability_for_threshold(
    count_after: usize,
    threshold: usize,
) -> Result<f64, DomainError> {
    if count_after == 0 || count_after > threshold {
        return Err(DomainError::CountOutOfRange {
            count: count_after,
            max: threshold,
        });
    }
    Ok((1.0 / (threshold + 1 - count_after) as f64).min(1.0))
}

/// `min(1 / (6d + 1 - count_after), 1)`.
pub fn recursion_probability(count_after: usize, d: usize) -> Result<f64, DomainError> {
    if d < 2 {
        return Err(DomainError::CapTooSmall(d));
    }
    recursion_probability_for_threshold(count_after, 6 * d)
}

/// Stateful decision source: the deterministic rule, or a seeded coin stream.
#[derive(Clone, Debug)]
pub struct RecursionDecider {
    kind: PolicyKind,
    rng: ChaCha8Rng,
    coins: u64,
}

impl RecursionDecider {
    pub fn new(policy: RecursionPolicy) -> Self {
        RecursionDecider {
            kind: policy.kind,
            rng: ChaCha8Rng::seed_from_u64(policy.rng_seed),
            coins: 0,
        }
    }

    pub fn kind(&self) -> PolicyKind {
        self.kind
    }

    /// Coins actually tossed (forced outcomes draw nothing).
    pub fn coins_tossed(&self) -> u64 {
        self.coins
    }

    /// Decide for a head whose count just became `count_after`.
    #[inline]
    pub fn should_recurse(&mut self, count_after: usize, threshold: usize) -> bool {
        match self.kind {
            PolicyKind::Deterministic => count_after >= threshold,
            PolicyKind::Randomized => {
                if count_after >= threshold {
                    return true;
                }
                let p = 1.0 / (threshold + 1 - count_after) as f64;
                self.coins += 1;
                self.rng.random::<f64>() < p
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn probability_examples() {
        assert_eq!(recursion_probability(1, 2).unwrap(), 1.0 / 12.0);
        assert_eq!(recursion_probability(12, 2).unwrap(), 1.0);
        assert_eq!(recursion_probability(10, 3).unwrap(), 1.0 / 9.0);
    }

    #[test]
    fn probability_domain() {
        assert!(matches!(
            recursion_probability(0, 2),
            Err(DomainError::CountOutOfRange { .. })
        ));
        assert!(matches!(
            recursion_probability(13, 2),
            Err(DomainError::CountOutOfRange { .. })
        ));
        assert_eq!(
            recursion_probability(1, 1),
            Err(DomainError::CapTooSmall(1))
        );
    }

    #[test]
    fn deterministic_fires_at_threshold() {
        let mut d = RecursionDecider::new(RecursionPolicy::deterministic());
        assert!((1..12).all(|c| !d.should_recurse(c, 12)));
        assert!(d.should_recurse(12, 12));
    }

    #[test]
    fn randomized_forced_at_threshold_and_seeded() {
        let mut a = RecursionDecider::new(RecursionPolicy::randomized(5));
        assert!(a.should_recurse(12, 12));
        assert_eq!(a.coins_tossed(), 0);
        let mut b = RecursionDecider::new(RecursionPolicy::randomized(5));
        let mut c = RecursionDecider::new(RecursionPolicy::randomized(5));
        let xs: Vec<bool> = (0..200).map(|i| b.should_recurse(1 + i % 11, 12)).collect();
        let ys: Vec<bool> = (0..200).map(|i| c.should_recurse(1 + i % 11, 12)).collect();
        assert_eq!(xs, ys);
    }
}
