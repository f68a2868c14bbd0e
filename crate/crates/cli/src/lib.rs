//! Command-line front end: enumeration reports, learning batches, rate sweeps
//! and deviation-graph exports, each written with a replayable manifest.

mod commands;
mod input;
mod manifest;

use std::path::PathBuf;

use anyhow::Result;
use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use sateq_core::{ExplorationPolicy, GridSpacing};

pub use manifest::{RunManifest, MANIFEST_FILE};

#[derive(Parser, Debug)]
#[command(name = "sateq", version, about = "Satisfaction-equilibrium toolkit")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "command", content = "parameters")]
pub enum Command {
    /// List SE, NE, GNE and ESE of a game or scenario and check their inclusions.
    Enumerate(EnumerateArgs),
    /// Run a batch of 1-bit learning trials.
    Learn(LearnArgs),
    /// Tabulate the achievable rate region of a scenario.
    Sweep(SweepArgs),
    /// Export the deviation graph and its efficient equilibria.
    EseGraph(EseGraphArgs),
    /// Re-run a command from a manifest written by an earlier run.
    #[serde(skip)]
    Replay(ReplayArgs),
}

/// Where the game comes from.
#[derive(Args, Debug, Clone, Serialize, Deserialize)]
pub struct InputArgs {
    /// Satisfaction game in JSON form.
    #[arg(long, conflicts_with = "scenario", required_unless_present = "scenario")]
    pub game: Option<PathBuf>,
    /// Interference-channel scenario in JSON form.
    #[arg(long)]
    pub scenario: Option<PathBuf>,
    /// Per-player action costs, `{"costs": [[...], ...]}`. Defaults to the
    /// power costs for scenarios and to `c_k(i) = i` for games.
    #[arg(long)]
    pub costs: Option<PathBuf>,
    /// Override the scenario's power-grid spacing (linear | logarithmic).
    #[arg(long)]
    pub grid: Option<GridSpacing>,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
pub struct EnumerateArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub input: InputArgs,
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
pub struct LearnArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub input: InputArgs,
    #[arg(long, default_value_t = 1000)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Exploration policy of unsatisfied players (uniform | inverse-count).
    #[arg(long, default_value = "uniform")]
    pub policy: ExplorationPolicy,
    #[arg(long, default_value_t = 100)]
    pub stall_window: usize,
    #[arg(long, default_value_t = 10_000)]
    pub max_intervals: usize,
    /// Initial play count of every action.
    #[arg(long, default_value_t = 1.0)]
    pub delta: f64,
    /// Trial whose full per-interval trace is written.
    #[arg(long, default_value_t = 0)]
    pub trace_trial: usize,
    /// Worker threads; 0 uses all cores. Outputs do not depend on it.
    #[arg(long, default_value_t = 0)]
    #[serde(skip)]
    pub jobs: usize,
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
pub struct SweepArgs {
    #[arg(long)]
    pub scenario: PathBuf,
    #[arg(long)]
    pub grid: Option<GridSpacing>,
    #[arg(long, default_value_t = 0)]
    #[serde(skip)]
    pub jobs: usize,
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
pub struct EseGraphArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub input: InputArgs,
    /// Also write the dense 0/1 adjacency matrix.
    #[arg(long)]
    pub dense: bool,
    #[arg(long, default_value_t = 0)]
    #[serde(skip)]
    pub jobs: usize,
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
pub struct ReplayArgs {
    #[arg(long)]
    pub manifest: PathBuf,
    /// Write into this directory instead of the recorded one.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Runs one command, printing a short summary on stdout.
pub fn run(command: Command) -> Result<()> {
    match command {
        Command::Replay(args) => {
            let mut replayed = manifest::load(&args.manifest)?;
            if let Some(out) = args.out {
                replayed.set_out(out);
            }
            run(replayed)
        }
        Command::Enumerate(args) => commands::enumerate(&args),
        Command::Learn(args) => with_jobs(args.jobs, || commands::learn(&args)),
        Command::Sweep(args) => with_jobs(args.jobs, || commands::sweep(&args)),
        Command::EseGraph(args) => with_jobs(args.jobs, || commands::ese_graph(&args)),
    }
}

fn with_jobs<T: Send>(jobs: usize, f: impl FnOnce() -> Result<T> + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs).build()?;
    pool.install(f)
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Enumerate(_) => "enumerate",
            Command::Learn(_) => "learn",
            Command::Sweep(_) => "sweep",
            Command::EseGraph(_) => "ese-graph",
            Command::Replay(_) => "replay",
        }
    }

    fn set_out(&mut self, out: PathBuf) {
        match self {
            Command::Enumerate(a) => a.out = out,
            Command::Learn(a) => a.out = out,
            Command::Sweep(a) => a.out = out,
            Command::EseGraph(a) => a.out = out,
            Command::Replay(a) => a.out = Some(out),
        }
    }
}
