use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{run_trial, StopReason, TrialConfig};
use crate::error::{arg, Result};
use crate::game::SatisfactionGame;
use crate::profile::ActionProfile;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of trial `t` in a batch seeded with `seed`.
///
/// Depends only on `(seed, t)`, so results do not change with the number of
/// worker threads or the order in which trials are scheduled.
pub fn trial_seed(seed: u64, t: u64) -> u64 {
    splitmix64(seed ^ splitmix64(t))
}

/// Trace-free outcome of one trial within a batch.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialSummary {
    pub trial: usize,
    pub seed: u64,
    pub reason: StopReason,
    pub intervals_to_convergence: Option<usize>,
    pub intervals_played: usize,
    pub final_profile: ActionProfile,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BatchStats {
    pub seed: u64,
    pub trials: usize,
    pub converged: usize,
    pub stalled: usize,
    pub budget_exhausted: usize,
    /// `converged / trials`.
    pub fraction: f64,
    /// `histogram[n]` counts trials that converged after exactly `n` intervals.
    pub histogram: Vec<usize>,
    pub results: Vec<TrialSummary>,
}

impl BatchStats {
    pub fn stall_fraction(&self) -> f64 {
        self.stalled as f64 / self.trials as f64
    }
}

/// Runs `trials` independent trials in parallel on the current rayon pool.
/// `config.seed` is the batch seed; trial `t` uses [`trial_seed`].
pub fn run_batch(game: &SatisfactionGame, config: &TrialConfig, trials: usize) -> Result<BatchStats> {
    if trials == 0 {
        return arg("trial count must be positive");
    }
    config.validate()?;
    let results = (0..trials)
        .into_par_iter()
        .map(|t| {
            let seed = trial_seed(config.seed, t as u64);
            let cfg = TrialConfig {
                seed,
                record_trace: false,
                ..config.clone()
            };
            run_trial(game, &cfg).map(|r| TrialSummary {
                trial: t,
                seed,
                reason: r.reason,
                intervals_to_convergence: r.intervals_to_convergence,
                intervals_played: r.intervals_played,
                final_profile: r.final_profile,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let count = |reason| results.iter().filter(|r| r.reason == reason).count();
    let converged = count(StopReason::Converged);
    let stalled = count(StopReason::Stall);
    let budget_exhausted = count(StopReason::Budget);

    let longest = results.iter().filter_map(|r| r.intervals_to_convergence).max();
    let mut histogram = vec![0; longest.map_or(0, |n| n + 1)];
    for n in results.iter().filter_map(|r| r.intervals_to_convergence) {
        histogram[n] += 1;
    }

    Ok(BatchStats {
        seed: config.seed,
        trials,
        converged,
        stalled,
        budget_exhausted,
        fraction: converged as f64 / trials as f64,
        histogram,
        results,
    })
}
