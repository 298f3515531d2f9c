//! Probabilistic finite automata with output.
//!
//! The engine is written against [`PfaSource`], so the same execution,
//! state-counting, and materialization code runs over both explicit tables
//! ([`Pfa`]) and rule-generated machines whose tables would be too large to
//! store (see `protocols::compile`).

mod engine;
pub mod document;

pub use engine::{act, materialize, reachable_state_count, reachable_states, run, step};

use std::collections::HashMap;

use thiserror::Error;

use crate::dist::{DiscreteDist, DistError};
use crate::real::Real;

/// Opaque state identifier. Structured labels live in a side table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StateId(pub usize);

/// One observation symbol: the arm just played and its reward.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Observation {
    pub arm: usize,
    /// 0 or 1.
    pub reward: u8,
}

impl Observation {
    pub fn new(arm: usize, reward: u8) -> Self {
        debug_assert!(reward <= 1);
        Self { arm, reward }
    }
}

/// Record of one execution: `horizon` actions and rewards plus the state the
/// machine ended in.
#[derive(Debug, Clone, PartialEq)]
pub struct RunTrace {
    pub actions: Vec<usize>,
    pub rewards: Vec<u8>,
    pub final_state: StateId,
}

#[derive(Debug, Error)]
pub enum PfaError {
    #[error("unknown state id {0}")]
    UnknownState(usize),
    #[error("no transition defined for state {state:?} on observation arm={arm} reward={reward}")]
    UndefinedTransition {
        state: usize,
        arm: usize,
        reward: u8,
    },
    #[error("automaton plays {pfa_arms} arms but bandit has {bandit_arms}")]
    AlphabetMismatch { pfa_arms: usize, bandit_arms: usize },
    #[error("invalid distribution at state {state}: {source}")]
    InvalidDistribution { state: String, source: DistError },
    #[error("action table missing entry for state {0}")]
    MissingAction(String),
    #[error("action at state {state} plays arm {arm}, outside 0..{arms}")]
    ActionOutOfAlphabet {
        state: String,
        arm: usize,
        arms: usize,
    },
    #[error("transition from state {state} targets unknown state id {target}")]
    TargetOutOfRange { state: String, target: usize },
    #[error("start state id {0} is not a state")]
    StartOutOfRange(usize),
    #[error("automaton has no states")]
    EmptyStateSet,
    #[error(transparent)]
    Bandit(#[from] crate::bandit::BanditError),
}

/// Anything that exposes PFA structure: a start state, a per-state action
/// distribution over arms, and per-(state, observation) successor
/// distributions.
pub trait PfaSource<T: Real>: Sync {
    /// Size of the declared state space (ids are `0..num_states`).
    fn num_states(&self) -> usize;

    fn start(&self) -> StateId;

    /// Output alphabet is the arm set `0..num_arms`.
    fn num_arms(&self) -> usize;

    fn action(&self, state: StateId) -> Result<DiscreteDist<usize, T>, PfaError>;

    fn transition(
        &self,
        state: StateId,
        obs: Observation,
    ) -> Result<DiscreteDist<StateId, T>, PfaError>;

    /// Human-readable structured label, e.g. `(r,k,c)`.
    fn state_label(&self, state: StateId) -> String;

    /// Every observation symbol the machine can receive.
    fn observations(&self) -> Vec<Observation> {
        let mut out = Vec::with_capacity(self.num_arms() * 2);
        for arm in 0..self.num_arms() {
            for reward in 0..=1u8 {
                out.push(Observation::new(arm, reward));
            }
        }
        out
    }
}

/// Explicit, fully materialized automaton.
#[derive(Debug, Clone, PartialEq)]
pub struct Pfa<T> {
    labels: Vec<String>,
    start: StateId,
    num_arms: usize,
    actions: Vec<DiscreteDist<usize, T>>,
    /// Indexed `[state][arm * 2 + reward]`; `None` means undefined.
    transitions: Vec<Vec<Option<DiscreteDist<StateId, T>>>>,
}

impl<T: Real> Pfa<T> {
    pub fn from_parts(
        labels: Vec<String>,
        start: StateId,
        num_arms: usize,
        actions: Vec<DiscreteDist<usize, T>>,
        transitions: Vec<HashMap<Observation, DiscreteDist<StateId, T>>>,
    ) -> Result<Self, PfaError> {
        let n = labels.len();
        if n == 0 {
            return Err(PfaError::EmptyStateSet);
        }
        if start.0 >= n {
            return Err(PfaError::StartOutOfRange(start.0));
        }
        if actions.len() != n {
            let missing = actions.len().min(n);
            return Err(PfaError::MissingAction(labels[missing].clone()));
        }
        for (q, dist) in actions.iter().enumerate() {
            for (arm, _) in dist.entries() {
                if *arm >= num_arms {
                    return Err(PfaError::ActionOutOfAlphabet {
                        state: labels[q].clone(),
                        arm: *arm,
                        arms: num_arms,
                    });
                }
            }
        }
        let mut table = vec![vec![None; num_arms * 2]; n];
        for (q, map) in transitions.into_iter().enumerate() {
            if q >= n {
                break;
            }
            for (obs, dist) in map {
                for (target, _) in dist.entries() {
                    if target.0 >= n {
                        return Err(PfaError::TargetOutOfRange {
                            state: labels[q].clone(),
                            target: target.0,
                        });
                    }
                }
                table[q][obs.arm * 2 + obs.reward as usize] = Some(dist);
            }
        }
        Ok(Self {
            labels,
            start,
            num_arms,
            actions,
            transitions: table,
        })
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub(crate) fn transition_entry(
        &self,
        state: StateId,
        obs: Observation,
    ) -> Option<&DiscreteDist<StateId, T>> {
        self.transitions
            .get(state.0)
            .and_then(|row| row.get(obs.arm * 2 + obs.reward as usize))
            .and_then(|slot| slot.as_ref())
    }
}

impl<T: Real> PfaSource<T> for Pfa<T> {
    fn num_states(&self) -> usize {
        self.labels.len()
    }

    fn start(&self) -> StateId {
        self.start
    }

    fn num_arms(&self) -> usize {
        self.num_arms
    }

    fn action(&self, state: StateId) -> Result<DiscreteDist<usize, T>, PfaError> {
        self.actions
            .get(state.0)
            .cloned()
            .ok_or(PfaError::UnknownState(state.0))
    }

    fn transition(
        &self,
        state: StateId,
        obs: Observation,
    ) -> Result<DiscreteDist<StateId, T>, PfaError> {
        if state.0 >= self.labels.len() {
            return Err(PfaError::UnknownState(state.0));
        }
        self.transition_entry(state, obs)
            .cloned()
            .ok_or(PfaError::UndefinedTransition {
                state: state.0,
                arm: obs.arm,
                reward: obs.reward,
            })
    }

    fn state_label(&self, state: StateId) -> String {
        self.labels
            .get(state.0)
            .cloned()
            .unwrap_or_else(|| format!("#{}", state.0))
    }
}
