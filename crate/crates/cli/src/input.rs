use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};

use sateq_core::scenario::power_costs;
use sateq_core::{build_constrained_game, build_satisfaction_game, Channel, ConstrainedGame, CostProfile, SatisfactionGame};

use crate::InputArgs;

/// A loaded game together with its costs and the constrained game whose GNE
/// are reported.
pub struct Loaded {
    pub game: SatisfactionGame,
    pub costs: CostProfile,
    pub constrained: ConstrainedGame,
    pub channel: Option<Channel>,
    pub inputs: Vec<PathBuf>,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

pub fn load_channel(path: &Path, grid: Option<sateq_core::GridSpacing>) -> Result<Channel> {
    let mut ch = Channel::from_json(&read(path)?).with_context(|| format!("in {}", path.display()))?;
    if grid.is_some() {
        ch.grid = grid;
    }
    Ok(ch)
}

pub fn load(args: &InputArgs) -> Result<Loaded> {
    let mut inputs = Vec::new();
    let (game, costs, constrained, channel) = match (&args.game, &args.scenario) {
        (Some(path), None) => {
            inputs.push(path.clone());
            let game =
                SatisfactionGame::from_json(&read(path)?).with_context(|| format!("in {}", path.display()))?;
            let costs = CostProfile::by_index(game.action_counts());
            (game, costs, None, None)
        }
        (None, Some(path)) => {
            inputs.push(path.clone());
            let ch = load_channel(path, args.grid)?;
            let game = build_satisfaction_game(&ch)?;
            let (constrained, _) = build_constrained_game(&ch)?;
            (game, power_costs(&ch)?, Some(constrained), Some(ch))
        }
        _ => bail!("exactly one of --game and --scenario is required"),
    };

    let costs = match &args.costs {
        Some(path) => {
            inputs.push(path.clone());
            let c = CostProfile::from_json(&read(path)?).with_context(|| format!("in {}", path.display()))?;
            c.validate(game.action_counts()).with_context(|| format!("in {}", path.display()))?;
            c
        }
        None => costs,
    };

    // Without utilities of its own, an explicit game is constrained by its
    // correspondences and scored by negated costs.
    let constrained = constrained.unwrap_or_else(|| {
        let c = costs.clone();
        ConstrainedGame::from_fn(game.clone(), move |k, a| -c.costs[k][a[k]])
    });

    Ok(Loaded {
        game,
        costs,
        constrained,
        channel,
        inputs,
    })
}
