use crate::error::{Error, Result};
use crate::game::{ActionProfile, GameSpec, Reputation};
use crate::numeric::Scalar;

use super::solve::Retention;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct StateKey {
    pub remaining: u32,
    pub x1: Reputation,
    pub x2: Reputation,
}

/// Profile and expected utilities over the remaining rounds. Terminal states
/// (`remaining == 0`) have no profile.
#[derive(Clone, Debug, PartialEq)]
pub struct StateValue<S> {
    pub profile: Option<ActionProfile>,
    pub u1: S,
    pub u2: S,
}

impl<S: Scalar> StateValue<S> {
    pub fn welfare(&self) -> S {
        self.u1.clone() + self.u2.clone()
    }
}

/// All states at one remaining-round count. Index `i` is player 1's gain over
/// its root reputation, so `x1 = root_x1 + i` and `x2 = root_x2 + (k − j − i)`.
#[derive(Clone, Debug)]
pub(crate) struct Layer<S> {
    pub(crate) profiles: Vec<ActionProfile>,
    pub(crate) u1: Vec<S>,
    pub(crate) u2: Vec<S>,
}

impl<S: Scalar> Layer<S> {
    pub(crate) fn terminal(len: usize) -> Self {
        Layer { profiles: Vec::new(), u1: vec![S::zero(); len], u2: vec![S::zero(); len] }
    }

    pub(crate) fn len(&self) -> usize {
        self.u1.len()
    }
}

/// Solved canonical equilibrium, from the root down to the terminal layer
/// (full retention) or the root layer alone.
#[derive(Clone, Debug)]
pub struct EquilibriumTable<S> {
    pub(crate) spec: GameSpec,
    pub(crate) retention: Retention,
    /// Full retention: indexed by remaining rounds. Root-only: just the root.
    pub(crate) layers: Vec<Layer<S>>,
}

impl<S: Scalar> EquilibriumTable<S> {
    /// Rebuild a table from its decision layers in ascending remaining-round
    /// order (just the root layer for root-only retention).
    pub(crate) fn from_decision_layers(spec: GameSpec, retention: Retention, decision: Vec<Layer<S>>) -> Self {
        let k = spec.k() as usize;
        let layers = match retention {
            Retention::Full => std::iter::once(Layer::terminal(k + 1)).chain(decision).collect(),
            Retention::RootOnly if k == 0 => vec![Layer::terminal(1)],
            Retention::RootOnly => decision,
        };
        EquilibriumTable { spec, retention, layers }
    }

    pub fn spec(&self) -> &GameSpec {
        &self.spec
    }

    pub fn k(&self) -> u32 {
        self.spec.k()
    }

    pub fn retention(&self) -> Retention {
        self.retention
    }

    pub fn is_full(&self) -> bool {
        self.retention == Retention::Full
    }

    pub(crate) fn require_full(&self) -> Result<()> {
        if self.is_full() {
            Ok(())
        } else {
            Err(Error::RequiresFullTable)
        }
    }

    pub(crate) fn layer(&self, remaining: u32) -> Option<&Layer<S>> {
        match self.retention {
            Retention::Full => self.layers.get(remaining as usize),
            Retention::RootOnly if remaining == self.k() => self.layers.first(),
            Retention::RootOnly => None,
        }
    }

    /// Player 2's reputation at a state, from the one-hire-per-round sum.
    pub fn x2_at(&self, remaining: u32, x1: Reputation) -> Reputation {
        let (r1, r2) = self.spec.start();
        r1 + r2 + (self.k() - remaining) as u64 - x1
    }

    fn index(&self, remaining: u32, x1: Reputation) -> Option<usize> {
        if remaining > self.k() {
            return None;
        }
        let played = (self.k() - remaining) as u64;
        let i = x1.checked_sub(self.spec.x1())?;
        (i <= played).then_some(i as usize)
    }

    /// Value at `(remaining, x1, ·)`; `None` if unreachable from the root or
    /// not retained.
    pub fn get(&self, remaining: u32, x1: Reputation) -> Option<StateValue<S>> {
        let i = self.index(remaining, x1)?;
        let layer = self.layer(remaining)?;
        Some(StateValue {
            profile: layer.profiles.get(i).copied(),
            u1: layer.u1[i].clone(),
            u2: layer.u2[i].clone(),
        })
    }

    pub fn get_key(&self, key: StateKey) -> Option<StateValue<S>> {
        if self.index(key.remaining, key.x1).is_some() && self.x2_at(key.remaining, key.x1) != key.x2 {
            return None;
        }
        self.get(key.remaining, key.x1)
    }

    pub fn profile(&self, remaining: u32, x1: Reputation) -> Option<ActionProfile> {
        let i = self.index(remaining, x1)?;
        self.layer(remaining)?.profiles.get(i).copied()
    }

    pub fn root(&self) -> StateValue<S> {
        self.get(self.k(), self.spec.x1()).expect("root layer is always retained")
    }

    pub fn root_welfare(&self) -> S {
        self.root().welfare()
    }

    /// Retained states in order of decreasing remaining rounds, then
    /// increasing `x1`.
    pub fn states(&self) -> impl Iterator<Item = (StateKey, StateValue<S>)> + '_ {
        let k = self.k();
        (0..=k).rev().filter(move |&j| self.layer(j).is_some()).flat_map(move |j| {
            let played = (k - j) as u64;
            (0..=played).map(move |i| {
                let x1 = self.spec.x1() + i;
                let key = StateKey { remaining: j, x1, x2: self.x2_at(j, x1) };
                (key, self.get(j, x1).expect("index in range"))
            })
        })
    }

    pub fn retained_state_count(&self) -> usize {
        self.layers.iter().map(Layer::len).sum()
    }

    /// Number of retained states whose profile is ⟨+,+⟩.
    pub fn compete_count(&self) -> usize {
        self.layers
            .iter()
            .map(|l| l.profiles.iter().filter(|p| p.is_compete()).count())
            .sum()
    }

    /// Copy of the table with one profile replaced; values are left as they
    /// were. Used to check that the equilibrium verifier rejects deviations.
    pub fn with_forced_profile(&self, remaining: u32, x1: Reputation, profile: ActionProfile) -> Result<Self> {
        let i = self
            .index(remaining, x1)
            .filter(|_| remaining >= 1 && self.layer(remaining).is_some())
            .ok_or_else(|| {
                Error::InvalidParameter(format!("no decision state at remaining {remaining}, x1 {x1}"))
            })?;
        let mut out = self.clone();
        let slot = match out.retention {
            Retention::Full => remaining as usize,
            Retention::RootOnly => 0,
        };
        out.layers[slot].profiles[i] = profile;
        Ok(out)
    }
}
