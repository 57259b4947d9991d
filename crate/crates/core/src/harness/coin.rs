//! Monte Carlo check of where the first recursion on a single node fires.

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::implicit_color::{RecursionDecider, RecursionPolicy};
use crate::oracle::trigger_pmf_for_threshold;

pub const MIN_TRIALS: u64 = 100_000;
const CHUNKS: u64 = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoinError {
    #[error("d must be >= 2, got {0}")]
    CapTooSmall(usize),
    #[error("need at least {MIN_TRIALS} trials, got {0}")]
    TooFewTrials(u64),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoinExperiment {
    pub d: usize,
    pub trials: u64,
    pub seed: u64,
    /// `counts[j-1]`: trials whose first recursion came at the j-th arc.
    pub counts: Vec<u64>,
    pub empirical: Vec<f64>,
    pub analytic: Vec<f64>,
    pub max_abs_deviation: f64,
}

/// Feed one node `6d` processed in-arcs per trial, tossing the randomized
/// policy's coin after each, and record the arc index of the first heads.
///
/// Trials are split into a fixed number of independently seeded chunks, so
/// the result depends only on `(d, trials, seed)`.
pub fn coin_experiment(d: usize, trials: u64, seed: u64) -> Result<CoinExperiment, CoinError> {
    if d < 2 {
        return Err(CoinError::CapTooSmall(d));
    }
    if trials < MIN_TRIALS {
        return Err(CoinError::TooFewTrials(trials));
    }
    let threshold = 6 * d;
    let counts = (0..CHUNKS)
        .into_par_iter()
        .map(|chunk| {
            let share = trials / CHUNKS + u64::from(chunk < trials % CHUNKS);
            let chunk_seed = seed ^ chunk.wrapping_mul(0x9E37_79B9_7F4A_7C15).rotate_left(17);
            let mut decider = RecursionDecider::new(RecursionPolicy::randomized(chunk_seed));
            let mut local = vec![0u64; threshold];
            for _ in 0..share {
                let first = (1..=threshold)
                    .find(|&j| decider.should_recurse(j, threshold))
                    .expect("the coin at the threshold is forced");
                local[first - 1] += 1;
            }
            local
        })
        .reduce(
            || vec![0u64; threshold],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );
    let empirical: Vec<f64> = counts.iter().map(|&c| c as f64 / trials as f64).collect();
    let analytic = trigger_pmf_for_threshold(threshold);
    let max_abs_deviation = empirical
        .iter()
        .zip(&analytic)
        .map(|(e, a)| (e - a).abs())
        .fold(0.0, f64::max);
    Ok(CoinExperiment {
        d,
        trials,
        seed,
        counts,
        empirical,
        analytic,
        max_abs_deviation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn frequencies_sum_to_one_and_are_seeded() {
        let a = coin_experiment(2, MIN_TRIALS, 1).unwrap();
        assert_eq!(a.counts.len(), 12);
        assert_eq!(a.counts.iter().sum::<u64>(), MIN_TRIALS);
        assert!((a.empirical.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        let b = coin_experiment(2, MIN_TRIALS, 1).unwrap();
        assert_eq!(a, b);
        assert_ne!(a.counts, coin_experiment(2, MIN_TRIALS, 2).unwrap().counts);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert_eq!(
            coin_experiment(1, MIN_TRIALS, 0),
            Err(CoinError::CapTooSmall(1))
        );
        assert_eq!(coin_experiment(2, 10, 0), Err(CoinError::TooFewTrials(10)));
    }
}
