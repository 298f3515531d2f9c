//! Explore-then-exploit: test every arm a fixed number of times, then play
//! the empirically best arm forever (ties go to the lowest index).

use std::marker::PhantomData;

use rand::RngCore;

use crate::real::Real;

use super::{require, Agent, CallGuard, ProtocolError};

#[derive(Debug, Clone)]
pub struct ExploreThenExploitAgent<T> {
    arms: usize,
    plays_per_arm: u64,
    successes: Vec<u64>,
    plays: Vec<u64>,
    next: usize,
    committed: Option<usize>,
    guard: CallGuard,
    _scalar: PhantomData<T>,
}

impl<T: Real> ExploreThenExploitAgent<T> {
    pub fn new(arms: usize, plays_per_arm: u64) -> Result<Self, ProtocolError> {
        require(arms >= 1, "arms", arms as i64, "must be >= 1")?;
        require(
            plays_per_arm >= 1,
            "plays_per_arm",
            plays_per_arm as i64,
            "must be >= 1",
        )?;
        Ok(Self {
            arms,
            plays_per_arm,
            successes: vec![0; arms],
            plays: vec![0; arms],
            next: 0,
            committed: None,
            guard: CallGuard::default(),
            _scalar: PhantomData,
        })
    }

    pub fn committed(&self) -> Option<usize> {
        self.committed
    }

    fn best_tested(&self) -> usize {
        // Equal play counts, so comparing success counts compares means.
        let mut best = 0;
        for arm in 1..self.arms {
            if self.successes[arm] > self.successes[best] {
                best = arm;
            }
        }
        best
    }
}

impl<T: Real> Agent<T> for ExploreThenExploitAgent<T> {
    fn num_arms(&self) -> usize {
        self.arms
    }

    fn choose(&mut self, _rng: &mut dyn RngCore) -> usize {
        let arm = self.committed.unwrap_or(self.next);
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
        if self.committed.is_some() {
            return Ok(());
        }
        self.successes[arm] += u64::from(reward);
        self.plays[arm] += 1;
        if self.plays[arm] == self.plays_per_arm {
            if arm + 1 < self.arms {
                self.next = arm + 1;
            } else {
                self.committed = Some(self.best_tested());
            }
        }
        Ok(())
    }

    fn exploit_choice(&self) -> usize {
        self.committed.unwrap_or_else(|| self.best_tested())
    }
}
