//! Epsilon-greedy baseline: round-robin exploration, then the empirical best
//! arm with probability 1 - epsilon and a uniformly random arm otherwise.
//! Keeps exact per-arm counts, so it is not a finite-state protocol.

use std::marker::PhantomData;

use rand::{Rng, RngCore};

use crate::real::Real;

use super::{require, Agent, CallGuard, ProtocolError};

#[derive(Debug, Clone)]
pub struct EpsilonGreedyAgent<T> {
    arms: usize,
    explore_steps: u64,
    epsilon: T,
    step: u64,
    successes: Vec<u64>,
    plays: Vec<u64>,
    guard: CallGuard,
    _scalar: PhantomData<T>,
}

impl<T: Real> EpsilonGreedyAgent<T> {
    /// `plays_per_arm` exploration pulls per arm, then epsilon-greedy play.
    pub fn new(arms: usize, plays_per_arm: u64, epsilon: T) -> Result<Self, ProtocolError> {
        require(arms >= 1, "arms", arms as i64, "must be >= 1")?;
        if !(epsilon >= T::zero() && epsilon <= T::one()) {
            return Err(ProtocolError::BadParameter {
                name: "epsilon",
                value: epsilon.as_f64() as i64,
                requirement: "must be in [0,1]",
            });
        }
        Ok(Self {
            arms,
            explore_steps: plays_per_arm * arms as u64,
            epsilon,
            step: 0,
            successes: vec![0; arms],
            plays: vec![0; arms],
            guard: CallGuard::default(),
            _scalar: PhantomData,
        })
    }

    pub fn empirical_mean(&self, arm: usize) -> T {
        if self.plays[arm] == 0 {
            T::zero()
        } else {
            T::from_f64(self.successes[arm] as f64) / T::from_f64(self.plays[arm] as f64)
        }
    }

    fn empirical_best(&self) -> usize {
        let mut best = 0;
        let mut best_mean = self.empirical_mean(0);
        for arm in 1..self.arms {
            let mean = self.empirical_mean(arm);
            if mean > best_mean {
                best = arm;
                best_mean = mean;
            }
        }
        best
    }
}

impl<T: Real> Agent<T> for EpsilonGreedyAgent<T> {
    fn num_arms(&self) -> usize {
        self.arms
    }

    fn choose(&mut self, rng: &mut dyn RngCore) -> usize {
        let arm = if self.step < self.explore_steps {
            (self.step % self.arms as u64) as usize
        } else if T::uniform(rng) < self.epsilon {
            rng.random_range(0..self.arms)
        } else {
            self.empirical_best()
        };
        self.guard.chose(arm);
        arm
    }

    fn observe(
        &mut self,
        arm: usize,
        reward: u8,
        _rng: &mut dyn RngCore,
    ) -> Result<(), ProtocolError> {
        self.guard.observed(arm, reward)?;
        self.successes[arm] += u64::from(reward);
        self.plays[arm] += 1;
        self.step += 1;
        Ok(())
    }

    fn exploit_choice(&self) -> usize {
        self.empirical_best()
    }
}
