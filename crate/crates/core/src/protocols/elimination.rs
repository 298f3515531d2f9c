//! Elimination tournament: champion vs challenger duels decided by a
//! success-difference counter, with a 1/N random stop per round.
//!
//! Plays strictly alternate (champion then challenger). The counter tracks
//! champion successes minus challenger successes. Reaching a threshold only
//! decides the duel once the trailing arm fails its immediate reply, so both
//! arms always get the same number of plays in a duel; a duel can also end
//! after any full round with probability 1/N, the leader by counter sign
//! surviving (a tie keeps the incumbent champion). The survivor plays one
//! step while the next challenger is brought in; after the last duel the
//! survivor is played forever.

use std::marker::PhantomData;

use rand::RngCore;

use crate::real::Real;

use super::{require, Agent, CallGuard, ProtocolError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EliminationParams {
    /// Number of arms K (at least 2).
    pub arms: usize,
    /// Counter threshold M deciding a duel.
    pub margin: i64,
    /// Expected duel length parameter N: each round ends the duel with
    /// probability 1/N.
    pub stop_scale: u64,
}

impl EliminationParams {
    pub fn validate(&self) -> Result<(), ProtocolError> {
        require(self.arms >= 2, "arms", self.arms as i64, "must be >= 2")?;
        require(self.margin >= 1, "margin", self.margin, "must be >= 1")?;
        require(
            self.stop_scale >= 1,
            "stop_scale",
            self.stop_scale as i64,
            "must be >= 1",
        )
    }

    pub fn stop_probability<T: Real>(&self) -> T {
        T::one() / T::from_f64(self.stop_scale as f64)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Turn {
    Champion,
    Challenger,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Phase {
    Comparing {
        champion: usize,
        challenger: usize,
        turn: Turn,
        counter: i64,
    },
    /// Duel decided by the counter; the winner plays one step before facing
    /// the next challenger.
    VictoryLap { winner: usize, next: usize },
    Done { winner: usize },
}

#[derive(Debug, Clone)]
pub struct EliminationAgent<T> {
    params: EliminationParams,
    phase: Phase,
    guard: CallGuard,
    _scalar: PhantomData<T>,
}

impl<T: Real> EliminationAgent<T> {
    pub fn new(params: EliminationParams) -> Result<Self, ProtocolError> {
        params.validate()?;
        Ok(Self {
            params,
            phase: Phase::Comparing {
                champion: 0,
                challenger: 1,
                turn: Turn::Champion,
                counter: 0,
            },
            guard: CallGuard::default(),
            _scalar: PhantomData,
        })
    }

    pub fn params(&self) -> &EliminationParams {
        &self.params
    }

    pub fn winner(&self) -> Option<usize> {
        match self.phase {
            Phase::Done { winner } => Some(winner),
            _ => None,
        }
    }

    pub fn current_pair(&self) -> Option<(usize, usize)> {
        match self.phase {
            Phase::Comparing {
                champion,
                challenger,
                ..
            } => Some((champion, challenger)),
            _ => None,
        }
    }

    pub fn counter(&self) -> Option<i64> {
        match self.phase {
            Phase::Comparing { counter, .. } => Some(counter),
            _ => None,
        }
    }

    fn playing_now(&self) -> usize {
        match self.phase {
            Phase::Comparing {
                champion,
                challenger,
                turn,
                ..
            } => match turn {
                Turn::Champion => champion,
                Turn::Challenger => challenger,
            },
            Phase::VictoryLap { winner, .. } => winner,
            Phase::Done { winner } => winner,
        }
    }

    /// Duel decided in favor of `winner` at challenger index `challenger`.
    fn duel_won(&self, winner: usize, challenger: usize) -> Phase {
        if challenger + 1 < self.params.arms {
            Phase::VictoryLap {
                winner,
                next: challenger + 1,
            }
        } else {
            Phase::Done { winner }
        }
    }

    /// Random stop fired: the leader survives without a victory lap.
    fn stopped(&self, survivor: usize, challenger: usize) -> Phase {
        if challenger + 1 < self.params.arms {
            Phase::Comparing {
                champion: survivor,
                challenger: challenger + 1,
                turn: Turn::Champion,
                counter: 0,
            }
        } else {
            Phase::Done { winner: survivor }
        }
    }
}

impl<T: Real> Agent<T> for EliminationAgent<T> {
    fn num_arms(&self) -> usize {
        self.params.arms
    }

    fn choose(&mut self, _rng: &mut dyn RngCore) -> usize {
        let arm = self.playing_now();
        self.guard.chose(arm);
        arm
    }

    fn observe(
        &mut self,
        arm: usize,
        reward: u8,
        rng: &mut dyn RngCore,
    ) -> Result<(), ProtocolError> {
        self.guard.observed(arm, reward)?;
        self.phase = match self.phase {
            Phase::Done { winner } => Phase::Done { winner },
            Phase::VictoryLap { winner, next } => Phase::Comparing {
                champion: winner,
                challenger: next,
                turn: Turn::Champion,
                counter: 0,
            },
            Phase::Comparing {
                champion,
                challenger,
                turn: Turn::Champion,
                counter,
            } => {
                let counter = counter + i64::from(reward);
                if counter == -self.params.margin {
                    // Champion failed its last chance; challenger confirmed.
                    self.duel_won(challenger, challenger)
                } else {
                    Phase::Comparing {
                        champion,
                        challenger,
                        turn: Turn::Challenger,
                        counter,
                    }
                }
            }
            Phase::Comparing {
                champion,
                challenger,
                turn: Turn::Challenger,
                counter,
            } => {
                let counter = counter - i64::from(reward);
                if counter == self.params.margin {
                    // Challenger failed to answer; champion confirmed.
                    self.duel_won(champion, challenger)
                } else {
                    // Full round played: toss the 1/N stop coin.
                    let u = T::uniform(rng);
                    if u < self.params.stop_probability() {
                        let survivor = if counter < 0 { challenger } else { champion };
                        self.stopped(survivor, challenger)
                    } else {
                        Phase::Comparing {
                            champion,
                            challenger,
                            turn: Turn::Champion,
                            counter,
                        }
                    }
                }
            }
        };
        Ok(())
    }

    fn exploit_choice(&self) -> usize {
        self.playing_now()
    }
}
