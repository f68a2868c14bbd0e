//! Normal-form games with utilities, with and without constrained action sets.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::game::SatisfactionGame;
use crate::profile::{ActionProfile, ProfileSpace};

type UtilityFn = dyn Fn(usize, &[usize]) -> f64 + Send + Sync;

#[derive(Clone)]
enum Utilities {
    /// `table[k * |A| + index(a)]`.
    Table(Arc<[f64]>),
    Function(Arc<UtilityFn>),
}

impl fmt::Debug for Utilities {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Utilities::Table(t) => write!(f, "Table({} entries)", t.len()),
            Utilities::Function(_) => write!(f, "Function"),
        }
    }
}

impl Utilities {
    fn from_table(space: &ProfileSpace, table: Vec<Vec<f64>>) -> Result<Self> {
        let size = space.ensure_within(crate::game::DEFAULT_PROFILE_CAP, "utility table")?;
        if table.len() != space.num_players() {
            return Err(Error::Dimension(format!(
                "utility table has {} player rows, expected {}",
                table.len(),
                space.num_players()
            )));
        }
        for (k, row) in table.iter().enumerate() {
            if row.len() != size {
                return Err(Error::Dimension(format!(
                    "utility row for player {k} has {} entries, expected {size}",
                    row.len()
                )));
            }
            if row.iter().any(|u| !u.is_finite()) {
                return Err(Error::Argument(format!("non-finite utility for player {k}")));
            }
        }
        Ok(Utilities::Table(table.into_iter().flatten().collect::<Vec<_>>().into()))
    }

    #[inline]
    fn eval(&self, space: &ProfileSpace, k: usize, actions: &[usize]) -> f64 {
        match self {
            Utilities::Table(t) => t[k * space.size() as usize + space.index_of(actions)],
            Utilities::Function(f) => f(k, actions),
        }
    }
}

/// A satisfaction-form game whose correspondences act as constraints on a
/// utility-maximizing normal-form game.
#[derive(Debug, Clone)]
pub struct ConstrainedGame {
    base: SatisfactionGame,
    utilities: Utilities,
}

impl ConstrainedGame {
    pub fn from_table(base: SatisfactionGame, utilities: Vec<Vec<f64>>) -> Result<Self> {
        let utilities = Utilities::from_table(base.space(), utilities)?;
        Ok(Self { base, utilities })
    }

    /// Utilities from a deterministic, finite-valued function `u(k, a)`.
    pub fn from_fn<F>(base: SatisfactionGame, utility: F) -> Self
    where
        F: Fn(usize, &[usize]) -> f64 + Send + Sync + 'static,
    {
        Self {
            base,
            utilities: Utilities::Function(Arc::new(utility)),
        }
    }

    pub fn base(&self) -> &SatisfactionGame {
        &self.base
    }

    pub fn utility(&self, k: usize, a: &ActionProfile) -> Result<f64> {
        let space = self.base.space();
        space.check_player(k)?;
        space.check_profile(a.actions())?;
        Ok(self.utilities.eval(space, k, a.actions()))
    }

    /// Generalized Nash equilibria: feasible profiles where no player can
    /// raise its utility by a deviation that stays inside `f_k(a_{-k})`.
    pub fn enumerate_gne(&self) -> Result<Vec<ActionProfile>> {
        let game = &self.base;
        game.profile_count()?;
        let space = game.space();
        let mut out = Vec::new();
        let mut buf = vec![0; space.num_players()];
        for a in space.iter() {
            if !game.all_sat(a.actions()) {
                continue;
            }
            let stable = (0..space.num_players()).all(|k| {
                let here = self.utilities.eval(space, k, a.actions());
                buf.copy_from_slice(a.actions());
                (0..space.num_actions(k)).all(|alt| {
                    buf[k] = alt;
                    !game.sat(k, &buf) || here >= self.utilities.eval(space, k, &buf)
                })
            });
            if stable {
                out.push(a);
            }
        }
        Ok(out)
    }
}

/// A finite normal-form game with an explicit utility table.
#[derive(Debug, Clone)]
pub struct NormalFormGame {
    space: ProfileSpace,
    utilities: Utilities,
}

impl NormalFormGame {
    pub fn from_table(action_counts: Vec<usize>, utilities: Vec<Vec<f64>>) -> Result<Self> {
        let space = ProfileSpace::new(action_counts)?;
        let utilities = Utilities::from_table(&space, utilities)?;
        Ok(Self { space, utilities })
    }

    pub fn space(&self) -> &ProfileSpace {
        &self.space
    }

    pub fn utility(&self, k: usize, a: &ActionProfile) -> Result<f64> {
        self.space.check_player(k)?;
        self.space.check_profile(a.actions())?;
        Ok(self.utilities.eval(&self.space, k, a.actions()))
    }

    /// Satisfaction game whose correspondence is the best-response
    /// correspondence `argmax_{a_k} u_k(a_k, a_{-k})`. Its satisfaction
    /// equilibria are exactly the pure Nash equilibria of this game.
    pub fn best_response_game(&self) -> SatisfactionGame {
        let space = self.space.clone();
        let utilities = self.utilities.clone();
        SatisfactionGame::from_fn(space.action_counts().to_vec(), move |k, a| {
            let here = utilities.eval(&space, k, a);
            let mut buf = a.to_vec();
            (0..space.num_actions(k)).all(|alt| {
                buf[k] = alt;
                utilities.eval(&space, k, &buf) <= here
            })
        })
        .expect("space already validated")
    }
}
