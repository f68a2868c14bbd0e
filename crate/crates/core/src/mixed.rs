//! Mixed extension: satisfaction probabilities, mixed and epsilon equilibria.

use serde::{Deserialize, Serialize};

use crate::error::{arg, Error, Result};
use crate::game::SatisfactionGame;
use crate::profile::ActionProfile;

/// Absolute tolerance for probability comparisons.
pub const PROB_TOL: f64 = 1e-12;
/// Entries above this value are in the support of a distribution.
pub const SUPPORT_TOL: f64 = 1e-12;

/// One probability vector per player.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MixedProfile {
    pub distributions: Vec<Vec<f64>>,
}

impl MixedProfile {
    pub fn new(distributions: Vec<Vec<f64>>) -> Self {
        Self { distributions }
    }

    pub fn uniform(action_counts: &[usize]) -> Self {
        Self {
            distributions: action_counts
                .iter()
                .map(|&n| vec![1.0 / n as f64; n])
                .collect(),
        }
    }

    /// Point mass on each player's action in `a`.
    pub fn degenerate(action_counts: &[usize], a: &ActionProfile) -> Self {
        Self {
            distributions: action_counts
                .iter()
                .zip(a.actions())
                .map(|(&n, &x)| {
                    let mut d = vec![0.0; n];
                    d[x] = 1.0;
                    d
                })
                .collect(),
        }
    }

    pub fn support(&self, k: usize) -> Vec<usize> {
        self.distributions[k]
            .iter()
            .enumerate()
            .filter(|(_, &p)| p > SUPPORT_TOL)
            .map(|(i, _)| i)
            .collect()
    }

    /// Checks dimensions against `game` and that every vector is a
    /// probability distribution.
    pub fn validate(&self, game: &SatisfactionGame) -> Result<()> {
        let counts = game.action_counts();
        if self.distributions.len() != counts.len() {
            return Err(Error::Dimension(format!(
                "mixed profile has {} distributions, game has {} players",
                self.distributions.len(),
                counts.len()
            )));
        }
        for (k, (d, &n)) in self.distributions.iter().zip(counts).enumerate() {
            if d.len() != n {
                return Err(Error::Dimension(format!(
                    "distribution of player {k} has {} entries, expected {n}",
                    d.len()
                )));
            }
            if d.iter().any(|p| !p.is_finite() || *p < 0.0) {
                return arg(format!("distribution of player {k} has a negative or non-finite entry"));
            }
            let total: f64 = d.iter().sum();
            if (total - 1.0).abs() > PROB_TOL {
                return arg(format!("distribution of player {k} sums to {total}"));
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }
}

/// Probability that player `k` is satisfied when all players mix
/// independently according to `pi`. Terms are accumulated in lexicographic
/// profile order.
pub fn satisfaction_probability(game: &SatisfactionGame, pi: &MixedProfile, k: usize) -> Result<f64> {
    game.space().check_player(k)?;
    pi.validate(game)?;
    game.profile_count()?;
    Ok(satisfaction_probability_unchecked(game, pi, k))
}

fn satisfaction_probability_unchecked(game: &SatisfactionGame, pi: &MixedProfile, k: usize) -> f64 {
    let mut total = 0.0;
    for a in game.space().iter() {
        let weight: f64 = a
            .actions()
            .iter()
            .enumerate()
            .map(|(j, &x)| pi.distributions[j][x])
            .product();
        if weight > 0.0 && game.sat(k, a.actions()) {
            total += weight;
        }
    }
    total.min(1.0)
}

fn probabilities(game: &SatisfactionGame, pi: &MixedProfile) -> Result<Vec<f64>> {
    pi.validate(game)?;
    game.profile_count()?;
    Ok((0..game.num_players())
        .map(|k| satisfaction_probability_unchecked(game, pi, k))
        .collect())
}

/// Mixed satisfaction equilibrium: every player satisfied with probability one.
pub fn is_mixed_se(game: &SatisfactionGame, pi: &MixedProfile) -> Result<bool> {
    Ok(probabilities(game, pi)?
        .into_iter()
        .all(|p| p >= 1.0 - PROB_TOL))
}

/// Support characterization of a mixed SE: every profile in
/// `supp(pi_1) x ... x supp(pi_K)` satisfies all players.
pub fn is_mixed_se_by_support(game: &SatisfactionGame, pi: &MixedProfile) -> Result<bool> {
    pi.validate(game)?;
    game.profile_count()?;
    let supports: Vec<Vec<usize>> = (0..game.num_players()).map(|k| pi.support(k)).collect();
    let mut pos = vec![0usize; supports.len()];
    let mut buf: Vec<usize> = supports.iter().map(|s| s[0]).collect();
    loop {
        if !game.all_sat(&buf) {
            return Ok(false);
        }
        let mut k = supports.len();
        loop {
            if k == 0 {
                return Ok(true);
            }
            k -= 1;
            pos[k] += 1;
            if pos[k] < supports[k].len() {
                buf[k] = supports[k][pos[k]];
                break;
            }
            pos[k] = 0;
            buf[k] = supports[k][0];
        }
    }
}

/// Whether every player is satisfied with probability at least `1 - eps`.
pub fn is_epsilon_se(game: &SatisfactionGame, pi: &MixedProfile, eps: f64) -> Result<bool> {
    if !(eps > 0.0 && eps <= 1.0) {
        return arg(format!("epsilon must lie in (0, 1], got {eps}"));
    }
    let floor = 1.0 - eps - PROB_TOL;
    Ok(probabilities(game, pi)?.into_iter().all(|p| p >= floor))
}

/// Whether some epsilon-SE with `epsilon < 1` exists: each player is
/// satisfied at one profile at least.
pub fn epsilon_se_exists(game: &SatisfactionGame) -> Result<bool> {
    game.profile_count()?;
    Ok((0..game.num_players()).all(|k| game.space().iter().any(|a| game.sat(k, a.actions()))))
}

/// The tight epsilon of the uniform profile together with the worst-case
/// value `1 - prod 1/N_j`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UniformEpsilon {
    pub epsilon: f64,
    pub worst_case_bound: f64,
}

/// Smallest epsilon for which the uniform profile is an epsilon-SE.
pub fn uniform_epsilon(game: &SatisfactionGame) -> Result<UniformEpsilon> {
    if !epsilon_se_exists(game)? {
        return Err(Error::Domain(
            "no ε-SE exists: some player is never satisfied".into(),
        ));
    }
    let pi = MixedProfile::uniform(game.action_counts());
    let min_p = probabilities(game, &pi)?
        .into_iter()
        .fold(f64::INFINITY, f64::min);
    let corner: f64 = game.action_counts().iter().map(|&n| 1.0 / n as f64).product();
    // Round-off below the comparison tolerance means "always satisfied".
    let gap = 1.0 - min_p;
    Ok(UniformEpsilon {
        epsilon: if gap <= PROB_TOL { 0.0 } else { gap },
        worst_case_bound: 1.0 - corner,
    })
}
