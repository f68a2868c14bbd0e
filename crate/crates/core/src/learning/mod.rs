//! Decentralized learning of a satisfaction equilibrium with 1-bit feedback.
//!
//! Each agent observes only whether it was satisfied in the last interval.
//! A satisfied agent repeats its action; an unsatisfied one draws a new action
//! from its exploration distribution. All players move simultaneously once
//! per interval.
//!
//! Randomness comes from a single [`ChaCha8Rng`] per trial. Draws use inverse
//! transform sampling on one `f64` obtained with `Rng::gen::<f64>()` (53 high
//! bits of `next_u64`), consumed in ascending player order and only by players
//! that actually re-draw. This makes traces bit-reproducible across platforms.

mod batch;
mod chain;

pub use batch::{run_batch, trial_seed, BatchStats, TrialSummary};
pub use chain::{analyze_chain, transition_matrix, ChainReport, CHAIN_STATE_CAP};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{arg, Result};
use crate::game::SatisfactionGame;
use crate::profile::ActionProfile;

/// Generator used for every trial.
pub type TrialRng = ChaCha8Rng;

/// How an unsatisfied agent picks its next action.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExplorationPolicy {
    /// `1/N_k` for every action.
    Uniform,
    /// Probability proportional to `1/T_{k,a}`, the inverse play count.
    InverseCount,
}

impl ExplorationPolicy {
    pub fn name(&self) -> &'static str {
        match self {
            ExplorationPolicy::Uniform => "uniform",
            ExplorationPolicy::InverseCount => "inverse-count",
        }
    }
}

impl std::str::FromStr for ExplorationPolicy {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "uniform" => Ok(Self::Uniform),
            "inverse-count" => Ok(Self::InverseCount),
            other => Err(format!("unknown exploration policy {other:?}")),
        }
    }
}

/// Private state of one learning agent.
///
/// Holds no reference to the game: its next action depends only on its own
/// action history, its own feedback bits and the shared random stream.
#[derive(Debug, Clone, PartialEq)]
pub struct AgentState {
    player: usize,
    action: usize,
    counts: Vec<f64>,
    delta: f64,
    policy: ExplorationPolicy,
    satisfied: bool,
}

impl AgentState {
    pub fn new(player: usize, num_actions: usize, policy: ExplorationPolicy, delta: f64) -> Result<Self> {
        if num_actions == 0 {
            return arg(format!("player {player} has no actions"));
        }
        if !(delta > 0.0 && delta.is_finite()) {
            return arg(format!("count offset must be positive, got {delta}"));
        }
        Ok(Self {
            player,
            action: 0,
            counts: vec![delta; num_actions],
            delta,
            policy,
            satisfied: false,
        })
    }

    pub fn player(&self) -> usize {
        self.player
    }

    pub fn action(&self) -> usize {
        self.action
    }

    pub fn counts(&self) -> &[f64] {
        &self.counts
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn policy(&self) -> ExplorationPolicy {
        self.policy
    }

    pub fn satisfied(&self) -> bool {
        self.satisfied
    }

    /// First action, drawn uniformly regardless of policy.
    pub fn initial_draw(&mut self, rng: &mut impl Rng) -> usize {
        let n = self.counts.len();
        self.action = sample(&vec![1.0 / n as f64; n], rng);
        self.counts[self.action] += 1.0;
        self.action
    }

    /// Action for the next interval: repeat when satisfied, otherwise draw
    /// from the exploration distribution. The play count of the chosen
    /// action is incremented in both cases.
    pub fn act(&mut self, rng: &mut impl Rng) -> usize {
        if !self.satisfied {
            let dist = exploration_distribution(self);
            self.action = sample(&dist, rng);
        }
        self.counts[self.action] += 1.0;
        self.action
    }

    /// Records the feedback bit of the interval just played.
    pub fn observe(&mut self, satisfied: bool) {
        self.satisfied = satisfied;
    }
}

/// Exploration distribution of `state`; always strictly positive.
pub fn exploration_distribution(state: &AgentState) -> Vec<f64> {
    let n = state.counts.len();
    match state.policy {
        ExplorationPolicy::Uniform => vec![1.0 / n as f64; n],
        ExplorationPolicy::InverseCount => {
            let inv: Vec<f64> = state.counts.iter().map(|t| 1.0 / t).collect();
            let total: f64 = inv.iter().sum();
            inv.into_iter().map(|x| x / total).collect()
        }
    }
}

fn sample(dist: &[f64], rng: &mut impl Rng) -> usize {
    let u: f64 = rng.gen();
    let mut acc = 0.0;
    for (i, p) in dist.iter().enumerate() {
        acc += p;
        if u < acc {
            return i;
        }
    }
    dist.len() - 1
}

/// The only signal agents receive: bit `k` is 1 iff player `k` is satisfied.
pub fn feedback(game: &SatisfactionGame, a: &ActionProfile) -> Result<Vec<bool>> {
    game.space().check_profile(a.actions())?;
    Ok((0..game.num_players()).map(|k| game.sat(k, a.actions())).collect())
}

/// Outcome of one simultaneous interval.
#[derive(Debug, Clone, PartialEq)]
pub struct StepOutcome {
    pub profile: ActionProfile,
    pub bits: Vec<bool>,
}

/// One interval of play: every agent acts, feedback is computed on the joint
/// profile and delivered back to each agent.
pub fn step(game: &SatisfactionGame, states: &mut [AgentState], rng: &mut impl Rng) -> StepOutcome {
    let actions: Vec<usize> = states.iter_mut().map(|s| s.act(rng)).collect();
    deliver(game, states, actions)
}

fn deliver(game: &SatisfactionGame, states: &mut [AgentState], actions: Vec<usize>) -> StepOutcome {
    let bits: Vec<bool> = (0..states.len()).map(|k| game.sat(k, &actions)).collect();
    for (s, &b) in states.iter_mut().zip(&bits) {
        s.observe(b);
    }
    StepOutcome {
        profile: ActionProfile::new(actions),
        bits,
    }
}

/// Parameters of a single learning run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialConfig {
    pub seed: u64,
    pub max_intervals: usize,
    pub stall_window: usize,
    pub policy: ExplorationPolicy,
    pub delta: f64,
    /// Keep per-interval records in the result.
    #[serde(default = "default_true")]
    pub record_trace: bool,
}

fn default_true() -> bool {
    true
}

impl Default for TrialConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            max_intervals: 10_000,
            stall_window: 100,
            policy: ExplorationPolicy::Uniform,
            delta: 1.0,
            record_trace: true,
        }
    }
}

impl TrialConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_intervals == 0 {
            return arg("max_intervals must be positive");
        }
        if self.stall_window == 0 || self.stall_window > self.max_intervals {
            return arg(format!(
                "stall_window must lie in 1..={}, got {}",
                self.max_intervals, self.stall_window
            ));
        }
        if !(self.delta > 0.0 && self.delta.is_finite()) {
            return arg(format!("delta must be positive, got {}", self.delta));
        }
        Ok(())
    }
}

/// Why a trial ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StopReason {
    /// Every player satisfied; the profile is absorbing from here on.
    Converged,
    /// One player kept its action for a whole window while another kept moving.
    Stall,
    /// `max_intervals` exhausted.
    Budget,
}

impl StopReason {
    pub fn name(&self) -> &'static str {
        match self {
            StopReason::Converged => "converged",
            StopReason::Stall => "stall",
            StopReason::Budget => "budget",
        }
    }
}

/// Record of one interval.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntervalRecord {
    pub interval: usize,
    pub profile: ActionProfile,
    pub bits: Vec<bool>,
    pub metric: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialResult {
    pub converged: bool,
    pub reason: StopReason,
    /// Interval index at which all players were first satisfied, i.e. the
    /// number of action-update intervals after the initial draw.
    pub intervals_to_convergence: Option<usize>,
    /// Number of intervals played, including the initial draw.
    pub intervals_played: usize,
    pub final_profile: ActionProfile,
    pub trace: Vec<IntervalRecord>,
}

/// Per-profile metric attached to trace records (e.g. achieved rates).
pub type Metric<'a> = &'a (dyn Fn(&ActionProfile) -> Vec<f64> + Sync);

pub fn run_trial(game: &SatisfactionGame, config: &TrialConfig) -> Result<TrialResult> {
    run_trial_with_metric(game, config, None)
}

/// Runs the learning dynamics from a seeded uniform initial draw until all
/// players are satisfied, a stall is detected, or the interval budget runs out.
pub fn run_trial_with_metric(
    game: &SatisfactionGame,
    config: &TrialConfig,
    metric: Option<Metric<'_>>,
) -> Result<TrialResult> {
    config.validate()?;
    let k_players = game.num_players();
    let mut rng = TrialRng::seed_from_u64(config.seed);
    let mut states = game
        .action_counts()
        .iter()
        .enumerate()
        .map(|(k, &n)| AgentState::new(k, n, config.policy, config.delta))
        .collect::<Result<Vec<_>>>()?;

    let mut trace = Vec::new();
    let record = |n: usize, out: &StepOutcome, trace: &mut Vec<IntervalRecord>| {
        if config.record_trace {
            trace.push(IntervalRecord {
                interval: n,
                profile: out.profile.clone(),
                bits: out.bits.clone(),
                metric: metric.map(|m| m(&out.profile)),
            });
        }
    };

    let initial: Vec<usize> = states.iter_mut().map(|s| s.initial_draw(&mut rng)).collect();
    let mut out = deliver(game, &mut states, initial);
    record(0, &out, &mut trace);

    let finish = |reason: StopReason, n: usize, out: StepOutcome, trace: Vec<IntervalRecord>| TrialResult {
        converged: reason == StopReason::Converged,
        reason,
        intervals_to_convergence: (reason == StopReason::Converged).then_some(n),
        intervals_played: n + 1,
        final_profile: out.profile,
        trace,
    };

    if out.bits.iter().all(|&b| b) {
        return Ok(finish(StopReason::Converged, 0, out, trace));
    }

    let window = config.stall_window;
    let mut unchanged_run = vec![0usize; k_players];
    let mut last_change: Vec<Option<usize>> = vec![None; k_players];

    for n in 1..config.max_intervals {
        let prev = out.profile.clone();
        out = step(game, &mut states, &mut rng);
        record(n, &out, &mut trace);

        for k in 0..k_players {
            if out.profile.get(k) != prev.get(k) {
                unchanged_run[k] = 0;
                last_change[k] = Some(n);
            } else {
                unchanged_run[k] += 1;
            }
        }

        if out.bits.iter().all(|&b| b) {
            return Ok(finish(StopReason::Converged, n, out, trace));
        }

        let window_start = (n + 1).saturating_sub(window);
        let stalled = (0..k_players).any(|j| {
            unchanged_run[j] >= window
                && (0..k_players)
                    .any(|i| i != j && last_change[i].is_some_and(|c| c >= window_start))
        });
        if stalled {
            return Ok(finish(StopReason::Stall, n, out, trace));
        }
    }
    let last = config.max_intervals - 1;
    Ok(finish(StopReason::Budget, last, out, trace))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[usize]) -> ActionProfile {
        ActionProfile::new(v.to_vec())
    }

    #[test]
    fn feedback_bits() {
        let g = SatisfactionGame::two_by_two_example();
        assert_eq!(feedback(&g, &p(&[0, 1])).unwrap(), vec![true, true]);
        assert_eq!(feedback(&g, &p(&[0, 0])).unwrap(), vec![false, false]);
        let t = SatisfactionGame::constant(vec![3, 2, 2], true).unwrap();
        assert_eq!(feedback(&t, &p(&[2, 1, 0])).unwrap(), vec![true; 3]);
        assert!(feedback(&t, &p(&[3, 1, 0])).is_err());
    }

    #[test]
    fn exploration_distributions() {
        let s = AgentState::new(0, 4, ExplorationPolicy::Uniform, 1.0).unwrap();
        assert_eq!(exploration_distribution(&s), vec![0.25; 4]);
        let mut s = AgentState::new(0, 2, ExplorationPolicy::InverseCount, 1.0).unwrap();
        assert_eq!(exploration_distribution(&s), vec![0.5, 0.5]);
        s.counts = vec![1.0, 3.0];
        let d = exploration_distribution(&s);
        assert!((d[0] - 0.75).abs() < 1e-15 && (d[1] - 0.25).abs() < 1e-15);
        assert!(AgentState::new(0, 2, ExplorationPolicy::Uniform, 0.0).is_err());
        assert!(AgentState::new(0, 0, ExplorationPolicy::Uniform, 1.0).is_err());
    }

    #[test]
    fn policy_names_round_trip() {
        for p in [ExplorationPolicy::Uniform, ExplorationPolicy::InverseCount] {
            assert_eq!(p.name().parse::<ExplorationPolicy>().unwrap(), p);
        }
        assert!("greedy".parse::<ExplorationPolicy>().is_err());
    }

    #[test]
    fn satisfied_agents_hold_still() {
        let g = SatisfactionGame::two_by_two_example();
        let mut rng = TrialRng::seed_from_u64(1);
        let mut states: Vec<_> = (0..2)
            .map(|k| AgentState::new(k, 2, ExplorationPolicy::Uniform, 1.0).unwrap())
            .collect();
        states[0].action = 0;
        states[1].action = 1;
        states[0].observe(true);
        states[1].observe(true);
        for _ in 0..50 {
            let out = step(&g, &mut states, &mut rng);
            assert_eq!(out.profile, p(&[0, 1]));
            assert_eq!(out.bits, vec![true, true]);
        }
    }

    #[test]
    fn unsatisfied_player_redraws_satisfied_player_keeps() {
        // At (1,0) player 1 is satisfied and player 2 is not.
        let g = SatisfactionGame::two_by_two_example();
        let mut rng = TrialRng::seed_from_u64(7);
        let mut states: Vec<_> = (0..2)
            .map(|k| AgentState::new(k, 2, ExplorationPolicy::Uniform, 1.0).unwrap())
            .collect();
        states[0].action = 1;
        states[1].action = 0;
        let bits = feedback(&g, &p(&[1, 0])).unwrap();
        states[0].observe(bits[0]);
        states[1].observe(bits[1]);

        // Player 2's draw is the first value of the stream.
        let mut shadow = TrialRng::seed_from_u64(7);
        let u: f64 = shadow.gen();
        let expected = if u < 0.5 { 0 } else { 1 };

        let out = step(&g, &mut states, &mut rng);
        assert_eq!(out.profile, p(&[1, expected]));
        assert_eq!(states[0].counts(), &[1.0, 2.0]);
    }

    #[test]
    fn constant_true_converges_immediately() {
        let g = SatisfactionGame::constant(vec![4, 4], true).unwrap();
        let r = run_trial(&g, &TrialConfig::default()).unwrap();
        assert!(r.converged);
        assert_eq!(r.intervals_to_convergence, Some(0));
        assert_eq!(r.trace.len(), 1);
    }

    #[test]
    fn example_game_always_reaches_its_se() {
        let g = SatisfactionGame::two_by_two_example();
        for seed in 0..200 {
            for policy in [ExplorationPolicy::Uniform, ExplorationPolicy::InverseCount] {
                let cfg = TrialConfig {
                    seed,
                    policy,
                    ..TrialConfig::default()
                };
                let r = run_trial(&g, &cfg).unwrap();
                assert!(r.converged, "seed {seed}");
                assert_eq!(r.final_profile, p(&[0, 1]));
            }
        }
    }

    #[test]
    fn counts_track_intervals_played() {
        let g = SatisfactionGame::from_fn(vec![5, 4], |k, a| (a[0] + a[1] + k) % 4 == 0).unwrap();
        let mut rng = TrialRng::seed_from_u64(3);
        let mut states: Vec<_> = (0..2)
            .map(|k| AgentState::new(k, g.action_counts()[k], ExplorationPolicy::InverseCount, 0.5).unwrap())
            .collect();
        let initial: Vec<usize> = states.iter_mut().map(|s| s.initial_draw(&mut rng)).collect();
        deliver(&g, &mut states, initial);
        for n in 1..40 {
            step(&g, &mut states, &mut rng);
            for s in &states {
                let played: f64 = s.counts().iter().map(|t| t - s.delta()).sum();
                assert_eq!(played, (n + 1) as f64);
                assert!(exploration_distribution(s).iter().all(|&p| p > 0.0));
            }
        }
    }

    #[test]
    fn agent_draws_depend_only_on_own_bits_and_stream() {
        // Two agents fed the same bit sequence and the same stream act identically,
        // whatever game produced those bits.
        let bits = [false, false, true, true, false, true, false, false, false, true];
        let run = |seed: u64| {
            let mut rng = TrialRng::seed_from_u64(seed);
            let mut s = AgentState::new(0, 6, ExplorationPolicy::InverseCount, 1.0).unwrap();
            let mut acts = vec![s.initial_draw(&mut rng)];
            for &b in &bits {
                s.observe(b);
                acts.push(s.act(&mut rng));
            }
            acts
        };
        assert_eq!(run(11), run(11));

        // Relabelling the opponent's actions leaves player 0's bits, and so its
        // draws, unchanged when the opponent is held fixed.
        let g = SatisfactionGame::from_fn(vec![3, 3], |k, a| k == 1 || a[0] == 2 - a[1]).unwrap();
        let relabel = |x: usize| (x + 1) % 3;
        let h = SatisfactionGame::from_fn(vec![3, 3], move |k, a| {
            k == 1 || a[0] == 2 - (a[1] + 2) % 3
        })
        .unwrap();
        let mut rg = TrialRng::seed_from_u64(5);
        let mut rh = TrialRng::seed_from_u64(5);
        let mk = || {
            vec![
                AgentState::new(0, 3, ExplorationPolicy::Uniform, 1.0).unwrap(),
                AgentState::new(1, 3, ExplorationPolicy::Uniform, 1.0).unwrap(),
            ]
        };
        let (mut sg, mut sh) = (mk(), mk());
        sg[1].action = 0;
        sh[1].action = relabel(0);
        for s in [&mut sg[1], &mut sh[1]] {
            s.observe(true);
        }
        for _ in 0..30 {
            let og = step(&g, &mut sg, &mut rg);
            let oh = step(&h, &mut sh, &mut rh);
            assert_eq!(og.bits, oh.bits);
            assert_eq!(og.profile.get(0), oh.profile.get(0));
        }
    }

    #[test]
    fn absorbing_after_convergence_in_traces() {
        let g = SatisfactionGame::from_fn(vec![4, 4, 2], |k, a| (a[0] + a[1] + a[2] + k) % 3 != 0).unwrap();
        for seed in 0..50 {
            let r = run_trial(&g, &TrialConfig { seed, ..TrialConfig::default() }).unwrap();
            if let Some(n) = r.intervals_to_convergence {
                assert_eq!(r.trace.len(), n + 1);
                assert!(r.trace.last().unwrap().bits.iter().all(|&b| b));
                assert!(g.is_se(&r.final_profile).unwrap());
            }
        }
    }

    #[test]
    fn stall_detected_on_clipping_trap() {
        // Player 2's action 1 always satisfies it and leaves player 1 with
        // nothing; (0,0) is the only SE.
        let g = SatisfactionGame::from_fn(vec![3, 2], |k, a| match (k, a[1]) {
            (1, 1) => true,
            (1, 0) => a[0] == 0,
            (0, 1) => false,
            _ => a[0] == 0,
        })
        .unwrap();
        let mut stalls = 0;
        for seed in 0..200 {
            let r = run_trial(&g, &TrialConfig { seed, ..TrialConfig::default() }).unwrap();
            match r.reason {
                StopReason::Stall => {
                    stalls += 1;
                    assert_eq!(r.final_profile.get(1), 1);
                    assert!(r.intervals_played > 100);
                }
                StopReason::Converged => assert_eq!(r.final_profile, p(&[0, 0])),
                StopReason::Budget => panic!("stall window should fire first"),
            }
        }
        assert!(stalls > 0 && stalls < 200);
    }

    #[test]
    fn config_validation() {
        let g = SatisfactionGame::two_by_two_example();
        for bad in [
            TrialConfig { max_intervals: 0, ..TrialConfig::default() },
            TrialConfig { stall_window: 0, ..TrialConfig::default() },
            TrialConfig { max_intervals: 10, stall_window: 11, ..TrialConfig::default() },
            TrialConfig { delta: -1.0, ..TrialConfig::default() },
        ] {
            assert!(run_trial(&g, &bad).is_err());
        }
    }

    #[test]
    fn budget_reason_when_no_se() {
        let g = SatisfactionGame::constant(vec![2, 2], false).unwrap();
        let cfg = TrialConfig {
            max_intervals: 50,
            stall_window: 50,
            ..TrialConfig::default()
        };
        let r = run_trial(&g, &cfg).unwrap();
        assert_eq!(r.reason, StopReason::Budget);
        assert_eq!(r.trace.len(), 50);
        assert_eq!(r.intervals_played, 50);
    }
}
