//! Action profiles and the mixed-radix indexing of the profile space.
//!
//! Profiles are ordered lexicographically on action indices with player 0 the
//! most significant digit. The linear index of a profile is its rank in that
//! order, which is also the row-major offset used by every tensor and matrix
//! in this crate.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One action index per player.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ActionProfile(pub Vec<usize>);

impl ActionProfile {
    pub fn new(actions: Vec<usize>) -> Self {
        Self(actions)
    }

    pub fn actions(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, k: usize) -> usize {
        self.0[k]
    }

    /// Copy of this profile with player `k` switched to `action`.
    pub fn with_action(&self, k: usize, action: usize) -> Self {
        let mut next = self.0.clone();
        next[k] = action;
        Self(next)
    }
}

impl From<Vec<usize>> for ActionProfile {
    fn from(v: Vec<usize>) -> Self {
        Self(v)
    }
}

impl fmt::Display for ActionProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, ")")
    }
}

/// Shape of a finite profile space `A_1 x ... x A_K`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProfileSpace {
    counts: Vec<usize>,
    strides: Vec<usize>,
    size: u128,
}

impl ProfileSpace {
    pub fn new(counts: Vec<usize>) -> Result<Self> {
        if counts.is_empty() {
            return Err(Error::Argument("a game needs at least one player".into()));
        }
        if let Some(k) = counts.iter().position(|&n| n == 0) {
            return Err(Error::Argument(format!("player {k} has no actions")));
        }
        let size = counts.iter().fold(1u128, |acc, &n| acc.saturating_mul(n as u128));
        // Strides are only meaningful when the space fits in usize; callers
        // check the cap before indexing.
        let mut strides = vec![1usize; counts.len()];
        for k in (0..counts.len().saturating_sub(1)).rev() {
            strides[k] = strides[k + 1].saturating_mul(counts[k + 1]);
        }
        Ok(Self {
            counts,
            strides,
            size,
        })
    }

    pub fn num_players(&self) -> usize {
        self.counts.len()
    }

    pub fn action_counts(&self) -> &[usize] {
        &self.counts
    }

    pub fn num_actions(&self, k: usize) -> usize {
        self.counts[k]
    }

    /// Total number of profiles, without overflow.
    pub fn size(&self) -> u128 {
        self.size
    }

    /// Number of opponent profiles `|A_{-k}|`.
    pub fn opponent_size(&self, k: usize) -> u128 {
        self.size / self.counts[k] as u128
    }

    /// Fails with a capacity error when the space holds more than `cap` profiles.
    pub fn ensure_within(&self, cap: u64, what: &'static str) -> Result<usize> {
        if self.size > cap as u128 {
            return Err(Error::Capacity {
                what,
                requested: self.size,
                cap,
            });
        }
        Ok(self.size as usize)
    }

    pub fn check_player(&self, k: usize) -> Result<()> {
        if k >= self.counts.len() {
            return Err(Error::Argument(format!(
                "player index {k} out of range for {} players",
                self.counts.len()
            )));
        }
        Ok(())
    }

    pub fn check_profile(&self, actions: &[usize]) -> Result<()> {
        if actions.len() != self.counts.len() {
            return Err(Error::Argument(format!(
                "profile has {} entries, game has {} players",
                actions.len(),
                self.counts.len()
            )));
        }
        for (k, (&a, &n)) in actions.iter().zip(&self.counts).enumerate() {
            if a >= n {
                return Err(Error::Argument(format!(
                    "action {a} out of range for player {k} with {n} actions"
                )));
            }
        }
        Ok(())
    }

    pub fn index_of(&self, actions: &[usize]) -> usize {
        actions.iter().zip(&self.strides).map(|(a, s)| a * s).sum()
    }

    pub fn profile_at(&self, index: usize) -> ActionProfile {
        let mut out = vec![0; self.counts.len()];
        self.decode_into(index, &mut out);
        ActionProfile(out)
    }

    pub fn decode_into(&self, mut index: usize, out: &mut [usize]) {
        for (k, &s) in self.strides.iter().enumerate() {
            out[k] = index / s;
            index %= s;
        }
    }

    /// Advances `actions` to the next profile in lexicographic order.
    /// Returns false after the last profile (and leaves `actions` all zero).
    pub fn advance(&self, actions: &mut [usize]) -> bool {
        for k in (0..actions.len()).rev() {
            actions[k] += 1;
            if actions[k] < self.counts[k] {
                return true;
            }
            actions[k] = 0;
        }
        false
    }

    /// Lexicographic iterator over all profiles. The caller is responsible for
    /// checking the size against a cap first.
    pub fn iter(&self) -> Profiles<'_> {
        Profiles {
            space: self,
            next: Some(vec![0; self.counts.len()]),
        }
    }

    pub fn stride(&self, k: usize) -> usize {
        self.strides[k]
    }
}

pub struct Profiles<'a> {
    space: &'a ProfileSpace,
    next: Option<Vec<usize>>,
}

impl Iterator for Profiles<'_> {
    type Item = ActionProfile;

    fn next(&mut self) -> Option<ActionProfile> {
        let current = self.next.take()?;
        let mut following = current.clone();
        if self.space.advance(&mut following) {
            self.next = Some(following);
        }
        Some(ActionProfile(current))
    }
}
