//! Bandit-playing agents and their compilation into explicit automata.

pub mod aspiration;
pub mod compile;
pub mod elimination;
pub mod explore;
pub mod greedy;
pub mod thompson;

pub use aspiration::{AspirationAgent, AspirationParams, TwoPhaseAspirationAgent, TwoPhaseParams};
pub use compile::{
    compile_aspiration, compile_elimination, compile_explore_then_exploit, AspirationMachine,
    EliminationMachine,
};
pub use elimination::{EliminationAgent, EliminationParams};
pub use explore::ExploreThenExploitAgent;
pub use greedy::EpsilonGreedyAgent;
pub use thompson::ThompsonAgent;

use rand::RngCore;
use thiserror::Error;

use crate::bandit::BernoulliBandit;
use crate::real::Real;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ProtocolError {
    #[error("parameter {name} = {value} out of range: {requirement}")]
    BadParameter {
        name: &'static str,
        value: i64,
        requirement: &'static str,
    },
    #[error("observe({arm}) without a preceding choose")]
    ObserveWithoutChoose { arm: usize },
    #[error("observe({got}) does not match the arm just chosen ({chosen})")]
    ObserveWrongArm { got: usize, chosen: usize },
    #[error("reward {0} is not 0 or 1")]
    BadReward(u8),
    #[error(transparent)]
    Bandit(#[from] crate::bandit::BanditError),
}

/// A protocol playing a bandit: alternate `choose` and `observe`.
pub trait Agent<T: Real>: Send {
    fn num_arms(&self) -> usize;

    /// Picks the next arm to play.
    fn choose(&mut self, rng: &mut dyn RngCore) -> usize;

    /// Feeds back the reward of the arm just chosen.
    fn observe(&mut self, arm: usize, reward: u8, rng: &mut dyn RngCore)
        -> Result<(), ProtocolError>;

    /// The arm the agent would commit to right now.
    fn exploit_choice(&self) -> usize;
}

/// Enforces the choose-then-observe call discipline shared by all agents.
#[derive(Debug, Clone, Default, PartialEq)]
pub(crate) struct CallGuard {
    pending: Option<usize>,
}

impl CallGuard {
    pub fn chose(&mut self, arm: usize) {
        self.pending = Some(arm);
    }

    pub fn observed(&mut self, arm: usize, reward: u8) -> Result<(), ProtocolError> {
        if reward > 1 {
            return Err(ProtocolError::BadReward(reward));
        }
        match self.pending.take() {
            None => Err(ProtocolError::ObserveWithoutChoose { arm }),
            Some(chosen) if chosen != arm => {
                self.pending = Some(chosen);
                Err(ProtocolError::ObserveWrongArm { got: arm, chosen })
            }
            Some(_) => Ok(()),
        }
    }
}

/// Runs `agent` against `bandit` for `horizon` steps.
pub fn play<T: Real>(
    agent: &mut dyn Agent<T>,
    bandit: &BernoulliBandit<T>,
    horizon: usize,
    rng: &mut dyn RngCore,
) -> Result<(Vec<usize>, Vec<u8>), ProtocolError> {
    let mut actions = Vec::with_capacity(horizon);
    let mut rewards = Vec::with_capacity(horizon);
    for _ in 0..horizon {
        let arm = agent.choose(rng);
        let reward = bandit.pull(arm, rng)?;
        agent.observe(arm, reward, rng)?;
        actions.push(arm);
        rewards.push(reward);
    }
    Ok((actions, rewards))
}

pub(crate) fn require(
    ok: bool,
    name: &'static str,
    value: i64,
    requirement: &'static str,
) -> Result<(), ProtocolError> {
    if ok {
        Ok(())
    } else {
        Err(ProtocolError::BadParameter {
            name,
            value,
            requirement,
        })
    }
}
