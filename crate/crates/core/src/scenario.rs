//! Two-link interference channel with discrete power levels.
//!
//! Transmitter `k` picks a power from its grid; receiver `k` sees the other
//! link's power as interference. Player `k` is satisfied when its Shannon rate
//! reaches its target.

use std::io::{self, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::constrained::ConstrainedGame;
use crate::error::{arg, Error, Result};
use crate::ese::{enumerate_ese_bruteforce, CostProfile};
use crate::game::SatisfactionGame;
use crate::profile::{ActionProfile, ProfileSpace};

/// Spacing of the power levels between `0` and `pmax`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GridSpacing {
    #[default]
    Linear,
    /// `0` followed by `N-1` levels log-spaced over three decades up to `pmax`.
    Logarithmic,
}

impl std::str::FromStr for GridSpacing {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "linear" => Ok(Self::Linear),
            "logarithmic" => Ok(Self::Logarithmic),
            other => Err(format!("unknown grid spacing {other:?}")),
        }
    }
}

/// Channel and QoS parameters, as read from a scenario file.
///
/// `gains[k][k]` is the direct gain of link `k`; `gains[k][j]` is the gain from
/// transmitter `j` into receiver `k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Channel {
    pub gains: [[f64; 2]; 2],
    pub noise: [f64; 2],
    pub pmax: [f64; 2],
    pub levels: [usize; 2],
    pub targets: [f64; 2],
    /// Cost offset of the zero-power action. Defaults to `0.01 * max(pmax)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridSpacing>,
}

/// Seed of the shipped golden channel draw (see [`Channel::golden`]).
pub const GOLDEN_SEED: u64 = 92;
/// Seed of the shipped draw satisfying the existence condition.
pub const FEASIBLE_SEED: u64 = 10;

/// Common parameters of the shipped scenarios: 10 dB SNR, 1.5 bit/s/Hz
/// targets and 32 power levels per link.
fn reference_channel(gains: [[f64; 2]; 2]) -> Channel {
    Channel {
        gains,
        noise: [1.0, 1.0],
        pmax: [10.0, 10.0],
        levels: [32, 32],
        targets: [1.5, 1.5],
        delta: None,
        grid: None,
    }
}

impl Channel {
    /// Replaces the gains with independent unit-mean exponential draws
    /// (Rayleigh fading power), in the order `g11, g12, g21, g22`.
    pub fn with_random_gains(mut self, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for row in self.gains.iter_mut() {
            for g in row.iter_mut() {
                let u: f64 = rng.gen();
                *g = -(1.0 - u).ln();
            }
        }
        self
    }

    /// Reference parameters with the gains drawn from `seed`.
    pub fn reference(seed: u64) -> Self {
        reference_channel([[0.0; 2]; 2]).with_random_gains(seed)
    }

    /// Draw in which link 2 has a power level that satisfies it against any
    /// interference, while link 1 cannot be satisfied once link 2 transmits at
    /// full power.
    pub fn golden() -> Self {
        Self::reference(GOLDEN_SEED)
    }

    /// Draw for which both links can always be satisfied.
    pub fn feasible() -> Self {
        Self::reference(FEASIBLE_SEED)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let ch: Channel = serde_json::from_str(text).map_err(|e| {
            Error::Parse(format!("scenario: {e} (line {}, column {})", e.line(), e.column()))
        })?;
        ch.validate()?;
        Ok(ch)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("channel serializes")
    }

    pub fn validate(&self) -> Result<()> {
        for k in 0..2 {
            if self.gains[k].iter().any(|g| !(g.is_finite() && *g >= 0.0)) {
                return arg(format!("gains of receiver {} must be finite and non-negative", k + 1));
            }
            if !(self.noise[k].is_finite() && self.noise[k] > 0.0) {
                return arg(format!("noise of receiver {} must be positive", k + 1));
            }
            if !(self.pmax[k].is_finite() && self.pmax[k] > 0.0) {
                return arg(format!("pmax of transmitter {} must be positive", k + 1));
            }
            if self.levels[k] < 2 {
                return arg(format!("transmitter {} needs at least 2 power levels", k + 1));
            }
            if !(self.targets[k].is_finite() && self.targets[k] >= 0.0) {
                return arg(format!("rate target of link {} must be non-negative", k + 1));
            }
        }
        if let Some(d) = self.delta {
            if !(d.is_finite() && d > 0.0) {
                return arg(format!("delta must be positive, got {d}"));
            }
        }
        Ok(())
    }

    pub fn delta(&self) -> f64 {
        self.delta.unwrap_or(0.01 * self.pmax[0].max(self.pmax[1]))
    }

    pub fn spacing(&self) -> GridSpacing {
        self.grid.unwrap_or_default()
    }

    /// Power levels of transmitter `k`, strictly increasing from `0` to `pmax`.
    pub fn power_grid(&self, k: usize) -> Vec<f64> {
        let n = self.levels[k];
        let pmax = self.pmax[k];
        match self.spacing() {
            GridSpacing::Linear => (0..n)
                .map(|i| if i == n - 1 { pmax } else { i as f64 * pmax / (n - 1) as f64 })
                .collect(),
            GridSpacing::Logarithmic => {
                let mut grid = vec![0.0];
                for i in 1..n {
                    let p = if i == n - 1 || n == 2 {
                        pmax
                    } else {
                        let exponent = -3.0 * (n - 1 - i) as f64 / (n - 2) as f64;
                        pmax * 10f64.powf(exponent)
                    };
                    grid.push(p);
                }
                grid
            }
        }
    }

    fn grids(&self) -> [Vec<f64>; 2] {
        [self.power_grid(0), self.power_grid(1)]
    }

    fn rate_unchecked(&self, k: usize, p_own: f64, p_other: f64) -> f64 {
        let j = 1 - k;
        let sinr = p_own * self.gains[k][k] / (self.noise[k] + p_other * self.gains[k][j]);
        (1.0 + sinr).log2()
    }

    /// Achieved rates of both links at a profile of grid indices.
    pub fn rates(&self, a: &ActionProfile) -> Result<[f64; 2]> {
        self.validate()?;
        let space = ProfileSpace::new(self.levels.to_vec())?;
        space.check_profile(a.actions())?;
        let [g1, g2] = self.grids();
        let (p1, p2) = (g1[a.get(0)], g2[a.get(1)]);
        Ok([self.rate_unchecked(0, p1, p2), self.rate_unchecked(1, p2, p1)])
    }
}

/// Shannon rate of link `k` in bit/s/Hz with own power `p_own` and the other
/// transmitter at `p_other`.
pub fn shannon_rate(ch: &Channel, k: usize, p_own: f64, p_other: f64) -> Result<f64> {
    if k >= 2 {
        return Err(Error::Dimension(format!("link index {k} out of range 0..2")));
    }
    if !(p_own >= 0.0 && p_other >= 0.0) {
        return arg(format!("powers must be non-negative, got {p_own} and {p_other}"));
    }
    Ok(ch.rate_unchecked(k, p_own, p_other))
}

/// Rate tables `rates[k][index(a)]` over the whole grid.
fn rate_tables(ch: &Channel, space: &ProfileSpace) -> [Vec<f64>; 2] {
    let [g1, g2] = ch.grids();
    let (r1, r2) = space
        .iter()
        .map(|a| {
            let (p1, p2) = (g1[a.get(0)], g2[a.get(1)]);
            (ch.rate_unchecked(0, p1, p2), ch.rate_unchecked(1, p2, p1))
        })
        .unzip();
    [r1, r2]
}

/// Satisfaction game where link `k` is satisfied iff its rate is at least
/// its target.
pub fn build_satisfaction_game(ch: &Channel) -> Result<SatisfactionGame> {
    ch.validate()?;
    let space = ProfileSpace::new(ch.levels.to_vec())?;
    let rates = rate_tables(ch, &space);
    let table = (0..2)
        .map(|k| rates[k].iter().map(|&r| r >= ch.targets[k]).collect())
        .collect();
    SatisfactionGame::from_table(ch.levels.to_vec(), table)
}

/// Per-link costs: the power itself, except that staying silent costs
/// `pmax + delta`.
pub fn power_costs(ch: &Channel) -> Result<CostProfile> {
    ch.validate()?;
    let costs = (0..2)
        .map(|k| {
            ch.power_grid(k)
                .into_iter()
                .enumerate()
                .map(|(i, p)| if i == 0 { ch.pmax[k] + ch.delta() } else { p })
                .collect()
        })
        .collect();
    Ok(CostProfile::new(costs))
}

/// Rate-maximization game constrained by the satisfaction correspondence,
/// with a fallback to the zero-power level wherever the correspondence is
/// empty, together with the per-link power costs.
pub fn build_constrained_game(ch: &Channel) -> Result<(ConstrainedGame, CostProfile)> {
    let sat = build_satisfaction_game(ch)?;
    let space = sat.space().clone();
    let mut table = vec![vec![false; space.size() as usize]; 2];
    for a in space.iter() {
        let i = space.index_of(a.actions());
        for (k, row) in table.iter_mut().enumerate() {
            row[i] = if sat.satisfying_actions(k, &a)?.is_empty() {
                a.get(k) == 0
            } else {
                sat.is_satisfied(k, &a)?
            };
        }
    }
    let base = SatisfactionGame::from_table(ch.levels.to_vec(), table)?;
    let rates = rate_tables(ch, &space);
    let game = ConstrainedGame::from_table(base, rates.to_vec())?;
    Ok((game, power_costs(ch)?))
}

/// Sufficient condition for a satisfaction equilibrium: each link can beat
/// its target strictly even when the other link transmits at full power.
pub fn existence_condition(ch: &Channel) -> Result<bool> {
    ch.validate()?;
    Ok((0..2).all(|k| {
        let worst = ch.pmax[1 - k];
        ch.power_grid(k)
            .into_iter()
            .any(|p| ch.rate_unchecked(k, p, worst) > ch.targets[k])
    }))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatePoint {
    pub profile: ActionProfile,
    pub rates: [f64; 2],
}

/// Achievable rate pairs over the full grid, in lexicographic profile order.
pub fn rate_region_sweep(ch: &Channel) -> Result<Vec<RatePoint>> {
    ch.validate()?;
    let space = ProfileSpace::new(ch.levels.to_vec())?;
    let n = space.ensure_within(crate::game::DEFAULT_PROFILE_CAP, "rate sweep")?;
    let [g1, g2] = ch.grids();
    Ok((0..n)
        .into_par_iter()
        .map(|i| {
            let profile = space.profile_at(i);
            let (p1, p2) = (g1[profile.get(0)], g2[profile.get(1)]);
            RatePoint {
                rates: [ch.rate_unchecked(0, p1, p2), ch.rate_unchecked(1, p2, p1)],
                profile,
            }
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub point: RatePoint,
    pub is_se: bool,
    pub is_ese: bool,
    pub is_gne: bool,
}

/// Rate sweep annotated with equilibrium membership.
///
/// `is_se` and `is_gne` refer to the constrained game (with its zero-power
/// fallback), so every GNE row is also an SE row; `is_ese` marks the
/// minimum-cost equilibria of the plain satisfaction game.
pub fn annotated_sweep(ch: &Channel) -> Result<Vec<SweepRow>> {
    let points = rate_region_sweep(ch)?;
    let sat = build_satisfaction_game(ch)?;
    let (cg, costs) = build_constrained_game(ch)?;
    let space = sat.space().clone();
    let mark = |set: Vec<ActionProfile>| {
        let mut flags = vec![false; points.len()];
        for a in set {
            flags[space.index_of(a.actions())] = true;
        }
        flags
    };
    let se = mark(cg.base().enumerate_se()?);
    let ese = mark(enumerate_ese_bruteforce(&sat, &costs)?);
    let gne = mark(cg.enumerate_gne()?);
    Ok(points
        .into_iter()
        .enumerate()
        .map(|(i, point)| SweepRow {
            point,
            is_se: se[i],
            is_ese: ese[i],
            is_gne: gne[i],
        })
        .collect())
}

pub const SWEEP_HEADER: &str = "p1_index,p2_index,u1,u2,is_SE,is_ESE,is_GNE";

/// Writes the sweep as CSV; indices are 0-based and rates use the shortest
/// round-trip decimal form.
pub fn write_sweep_csv<W: Write>(rows: &[SweepRow], mut w: W) -> io::Result<()> {
    writeln!(w, "{SWEEP_HEADER}")?;
    for r in rows {
        writeln!(
            w,
            "{},{},{},{},{},{},{}",
            r.point.profile.get(0),
            r.point.profile.get(1),
            r.point.rates[0],
            r.point.rates[1],
            u8::from(r.is_se),
            u8::from(r.is_ese),
            u8::from(r.is_gne)
        )?;
    }
    Ok(())
}
