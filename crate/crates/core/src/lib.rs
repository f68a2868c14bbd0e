//! Satisfaction games: equilibrium enumeration, mixed and efficient
//! equilibria, 1-bit learning dynamics and an interference-channel scenario.
//!
//! Profiles are enumerated lexicographically with player 0 as the most
//! significant digit; every set-valued result is returned in that order.

pub mod constrained;
pub mod error;
pub mod ese;
pub mod game;
pub mod learning;
pub mod mixed;
pub mod profile;
pub mod scenario;

pub use constrained::{ConstrainedGame, NormalFormGame};
pub use error::{Error, Result};
pub use ese::{
    build_deviation_graph, check_identical_graphs, enumerate_ese_bruteforce, potential, verify_ecpg,
    verify_ecpg_with, CostProfile, DeviationGraph,
};
pub use game::{GameDocument, LatticeReport, Limits, SatisfactionGame, DEFAULT_GRAPH_CAP, DEFAULT_PROFILE_CAP};
pub use learning::{
    analyze_chain, exploration_distribution, feedback, run_batch, run_trial, run_trial_with_metric, step,
    AgentState, BatchStats, ChainReport, ExplorationPolicy, IntervalRecord, StopReason, TrialConfig,
    TrialResult, TrialSummary,
};
pub use mixed::{
    epsilon_se_exists, is_epsilon_se, is_mixed_se, is_mixed_se_by_support, satisfaction_probability,
    uniform_epsilon, MixedProfile, UniformEpsilon,
};
pub use profile::{ActionProfile, ProfileSpace};
pub use scenario::{
    annotated_sweep, build_constrained_game, build_satisfaction_game, existence_condition, rate_region_sweep,
    shannon_rate, Channel, GridSpacing, RatePoint, SweepRow,
};
