//! Thompson Sampling over Beta posteriors with a uniform prior.

use std::marker::PhantomData;

use rand::RngCore;

use crate::real::Real;

use super::{require, Agent, CallGuard, ProtocolError};

/// Identifier for the Beta sampler, recorded in experiment metadata.
pub const BETA_SAMPLER: &str = "rand_distr::Beta";

#[derive(Debug, Clone)]
pub struct ThompsonAgent<T> {
    successes: Vec<u64>,
    failures: Vec<u64>,
    guard: CallGuard,
    _scalar: PhantomData<T>,
}

impl<T: Real> ThompsonAgent<T> {
    pub fn new(arms: usize) -> Result<Self, ProtocolError> {
        require(arms >= 1, "arms", arms as i64, "must be >= 1")?;
        Ok(Self {
            successes: vec![0; arms],
            failures: vec![0; arms],
            guard: CallGuard::default(),
            _scalar: PhantomData,
        })
    }

    /// Posterior for arm `arm` is Beta(s+1, f+1).
    pub fn posterior(&self, arm: usize) -> (u64, u64) {
        (self.successes[arm] + 1, self.failures[arm] + 1)
    }

    pub fn posterior_mean(&self, arm: usize) -> T {
        let (a, b) = self.posterior(arm);
        T::from_f64(a as f64) / T::from_f64((a + b) as f64)
    }
}

impl<T: Real> Agent<T> for ThompsonAgent<T> {
    fn num_arms(&self) -> usize {
        self.successes.len()
    }

    fn choose(&mut self, rng: &mut dyn RngCore) -> usize {
        let mut best = 0;
        let mut best_sample = T::neg_infinity();
        for arm in 0..self.successes.len() {
            let (a, b) = self.posterior(arm);
            let sample = T::sample_beta(
                T::from_f64(a as f64),
                T::from_f64(b as f64),
                &mut *rng,
            );
            if sample > best_sample {
                best = arm;
                best_sample = sample;
            }
        }
        self.guard.chose(best);
        best
    }

    fn observe(
        &mut self,
        arm: usize,
        reward: u8,
        _rng: &mut dyn RngCore,
    ) -> Result<(), ProtocolError> {
        self.guard.observed(arm, reward)?;
        if reward == 1 {
            self.successes[arm] += 1;
        } else {
            self.failures[arm] += 1;
        }
        Ok(())
    }

    fn exploit_choice(&self) -> usize {
        let mut best = 0;
        let mut best_mean = self.posterior_mean(0);
        for arm in 1..self.successes.len() {
            let mean: T = self.posterior_mean(arm);
            if mean > best_mean {
                best = arm;
                best_mean = mean;
            }
        }
        best
    }
}
