//! Compilation of the finite-state protocols into explicit automata.
//!
//! The aspiration and elimination machines are rule-generated: their
//! transition rows are produced on demand behind [`PfaSource`], so the
//! full-scale parameterizations (over 100,000 states times a 100-symbol
//! input alphabet) never materialize a table. `pfa::materialize` turns any
//! of them into an explicit [`Pfa`] when the size is manageable.

use std::collections::HashMap;
use std::marker::PhantomData;

use crate::dist::DiscreteDist;
use crate::pfa::{Observation, Pfa, PfaError, PfaSource, StateId};
use crate::real::Real;

use super::aspiration::AspirationParams;
use super::elimination::EliminationParams;
use super::ProtocolError;

/// Lazy PFA for the one-phase aspiration-level protocol.
///
/// States are triples `(r, k, c)`: aspiration rank, arm under test, counter.
/// The start state is `(m, 1, 0)` and states with `c = M1` are absorbing.
#[derive(Debug, Clone)]
pub struct AspirationMachine<T> {
    params: AspirationParams,
    _scalar: PhantomData<T>,
}

pub fn compile_aspiration<T: Real>(
    params: AspirationParams,
) -> Result<AspirationMachine<T>, ProtocolError> {
    params.validate()?;
    Ok(AspirationMachine {
        params,
        _scalar: PhantomData,
    })
}

impl<T: Real> AspirationMachine<T> {
    pub fn params(&self) -> &AspirationParams {
        &self.params
    }

    fn counter_values(&self) -> usize {
        (self.params.win + self.params.lose) as usize
    }

    fn counter_floor(&self) -> i64 {
        1 - self.params.lose
    }

    fn encode(&self, level: usize, arm: usize, counter: i64) -> StateId {
        let c_off = (counter - self.counter_floor()) as usize;
        StateId(((level - 1) * self.params.arms + arm) * self.counter_values() + c_off)
    }

    fn decode(&self, state: StateId) -> Result<(usize, usize, i64), PfaError> {
        if state.0 >= self.num_states() {
            return Err(PfaError::UnknownState(state.0));
        }
        let cvals = self.counter_values();
        let counter = (state.0 % cvals) as i64 + self.counter_floor();
        let rest = state.0 / cvals;
        let arm = rest % self.params.arms;
        let level = rest / self.params.arms + 1;
        Ok((level, arm, counter))
    }
}

impl<T: Real> PfaSource<T> for AspirationMachine<T> {
    fn num_states(&self) -> usize {
        self.params.ranks * self.params.arms * self.counter_values()
    }

    fn start(&self) -> StateId {
        self.encode(self.params.ranks, 0, 0)
    }

    fn num_arms(&self) -> usize {
        self.params.arms
    }

    fn action(&self, state: StateId) -> Result<DiscreteDist<usize, T>, PfaError> {
        let (_, arm, _) = self.decode(state)?;
        Ok(DiscreteDist::point(arm))
    }

    fn transition(
        &self,
        state: StateId,
        obs: Observation,
    ) -> Result<DiscreteDist<StateId, T>, PfaError> {
        let (level, arm, counter) = self.decode(state)?;
        // Committed states never move; observations of arms we did not play
        // carry no information.
        if counter == self.params.win || obs.arm != arm {
            return Ok(DiscreteDist::point(state));
        }
        let p: T = self.params.virtual_mean(level);
        let entries = if obs.reward == 1 {
            // Counter rises iff the virtual arm failed.
            let up = self.encode(level, arm, counter + 1);
            vec![(up, T::one() - p), (state, p)]
        } else if counter > self.counter_floor() {
            let down = self.encode(level, arm, counter - 1);
            vec![(down, p), (state, T::one() - p)]
        } else {
            // Arm k lost to the virtual arm: next arm, or drop a rank after
            // a full pass (clamped at rank 1).
            let next = if arm + 1 < self.params.arms {
                self.encode(level, arm + 1, 0)
            } else {
                self.encode(level.saturating_sub(1).max(1), 0, 0)
            };
            vec![(next, p), (state, T::one() - p)]
        };
        DiscreteDist::new(entries).map_err(|source| PfaError::InvalidDistribution {
            state: self.state_label(state),
            source,
        })
    }

    fn state_label(&self, state: StateId) -> String {
        match self.decode(state) {
            Ok((level, arm, counter)) => format!("({},{},{})", level, arm + 1, counter),
            Err(_) => format!("#{}", state.0),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Turn {
    Champion = 0,
    Challenger = 1,
}

/// Lazy PFA for the elimination tournament.
///
/// States are `(i, j, turn, c)`: the champion/challenger pair being
/// compared, whose move it is, and the success-difference counter in
/// `[-M, M]`. `(champion's turn, c = M)` and `(challenger's turn, c = -M)`
/// double as the duel-decided states: the winner plays one step there, then
/// the next duel starts (or the state self-loops after the last duel).
#[derive(Debug, Clone)]
pub struct EliminationMachine<T> {
    params: EliminationParams,
    pairs: Vec<(usize, usize)>,
    _scalar: PhantomData<T>,
}

pub fn compile_elimination<T: Real>(
    params: EliminationParams,
) -> Result<EliminationMachine<T>, ProtocolError> {
    params.validate()?;
    let mut pairs = Vec::new();
    for i in 0..params.arms {
        for j in (i + 1)..params.arms {
            pairs.push((i, j));
        }
    }
    Ok(EliminationMachine {
        params,
        pairs,
        _scalar: PhantomData,
    })
}

impl<T: Real> EliminationMachine<T> {
    pub fn params(&self) -> &EliminationParams {
        &self.params
    }

    fn counter_values(&self) -> usize {
        (2 * self.params.margin + 1) as usize
    }

    fn pair_index(&self, i: usize, j: usize) -> usize {
        let k = self.params.arms;
        i * (2 * k - i - 1) / 2 + (j - i - 1)
    }

    fn encode(&self, i: usize, j: usize, turn: Turn, counter: i64) -> StateId {
        let c_off = (counter + self.params.margin) as usize;
        StateId((self.pair_index(i, j) * 2 + turn as usize) * self.counter_values() + c_off)
    }

    fn decode(&self, state: StateId) -> Result<(usize, usize, Turn, i64), PfaError> {
        if state.0 >= self.num_states() {
            return Err(PfaError::UnknownState(state.0));
        }
        let cvals = self.counter_values();
        let counter = (state.0 % cvals) as i64 - self.params.margin;
        let rest = state.0 / cvals;
        let turn = if rest % 2 == 0 {
            Turn::Champion
        } else {
            Turn::Challenger
        };
        let (i, j) = self.pairs[rest / 2];
        Ok((i, j, turn, counter))
    }

    /// Where the survivor of the duel against challenger `j` goes: the next
    /// duel, or (after the last duel) the absorbing duel-decided state.
    fn survivor_target(&self, i: usize, j: usize, survivor: usize) -> StateId {
        if j + 1 < self.params.arms {
            self.encode(survivor, j + 1, Turn::Champion, 0)
        } else if survivor == i {
            self.encode(i, j, Turn::Champion, self.params.margin)
        } else {
            self.encode(i, j, Turn::Challenger, -self.params.margin)
        }
    }
}

impl<T: Real> PfaSource<T> for EliminationMachine<T> {
    fn num_states(&self) -> usize {
        self.pairs.len() * 2 * self.counter_values()
    }

    fn start(&self) -> StateId {
        self.encode(0, 1, Turn::Champion, 0)
    }

    fn num_arms(&self) -> usize {
        self.params.arms
    }

    fn action(&self, state: StateId) -> Result<DiscreteDist<usize, T>, PfaError> {
        let (i, j, turn, _) = self.decode(state)?;
        Ok(DiscreteDist::point(match turn {
            Turn::Champion => i,
            Turn::Challenger => j,
        }))
    }

    fn transition(
        &self,
        state: StateId,
        obs: Observation,
    ) -> Result<DiscreteDist<StateId, T>, PfaError> {
        let (i, j, turn, counter) = self.decode(state)?;
        let margin = self.params.margin;
        let playing = match turn {
            Turn::Champion => i,
            Turn::Challenger => j,
        };
        if obs.arm != playing {
            return Ok(DiscreteDist::point(state));
        }
        let h = i64::from(obs.reward);
        let next = match turn {
            Turn::Champion => {
                if counter == margin {
                    // Champion already confirmed: one step here, then on to
                    // the next duel (self-loop after the last one).
                    let target = if j + 1 < self.params.arms {
                        self.encode(i, j + 1, Turn::Champion, 0)
                    } else {
                        state
                    };
                    return Ok(DiscreteDist::point(target));
                }
                // Hands over to the challenger; counter' = -M is the
                // challenger-confirmed state (champion failed its reply).
                self.encode(i, j, Turn::Challenger, counter + h)
            }
            Turn::Challenger => {
                if counter == -margin {
                    // Challenger confirmed: it becomes the champion of the
                    // next duel (self-loop after the last one).
                    let target = if j + 1 < self.params.arms {
                        self.encode(j, j + 1, Turn::Champion, 0)
                    } else {
                        state
                    };
                    return Ok(DiscreteDist::point(target));
                }
                let counter = counter - h;
                if counter == margin {
                    // Challenger failed to answer the champion's lead.
                    self.encode(i, j, Turn::Champion, margin)
                } else {
                    // Full round played: mix in the 1/N stop.
                    let stop: T = self.params.stop_probability();
                    let survivor = if counter < 0 { j } else { i };
                    let entries = vec![
                        (self.survivor_target(i, j, survivor), stop),
                        (
                            self.encode(i, j, Turn::Champion, counter),
                            T::one() - stop,
                        ),
                    ];
                    return DiscreteDist::new(entries).map_err(|source| {
                        PfaError::InvalidDistribution {
                            state: self.state_label(state),
                            source,
                        }
                    });
                }
            }
        };
        Ok(DiscreteDist::point(next))
    }

    fn state_label(&self, state: StateId) -> String {
        match self.decode(state) {
            Ok((i, j, turn, counter)) => {
                let side = match turn {
                    Turn::Champion => "champ",
                    Turn::Challenger => "chall",
                };
                format!("({},{},{},{})", i + 1, j + 1, side, counter)
            }
            Err(_) => format!("#{}", state.0),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum EteNode {
    Explore {
        arm: usize,
        plays: u64,
        successes: u64,
        best_arm: usize,
        best_successes: u64,
    },
    Commit(usize),
}

impl EteNode {
    fn label(&self) -> String {
        match self {
            EteNode::Explore {
                arm,
                plays,
                successes,
                best_arm,
                best_successes,
            } => format!(
                "explore(arm={},plays={},succ={},best={}:{})",
                arm + 1,
                plays,
                successes,
                best_arm + 1,
                best_successes
            ),
            EteNode::Commit(arm) => format!("commit({})", arm + 1),
        }
    }
}

/// Explicit explore-then-exploit automaton: test each arm `plays_per_arm`
/// times, then play the best tested arm forever (ties to the lowest index).
/// State count grows quickly with `arms` and `plays_per_arm`; intended for
/// small parameterizations.
pub fn compile_explore_then_exploit<T: Real>(
    arms: usize,
    plays_per_arm: u64,
) -> Result<Pfa<T>, ProtocolError> {
    super::require(arms >= 1, "arms", arms as i64, "must be >= 1")?;
    super::require(
        plays_per_arm >= 1,
        "plays_per_arm",
        plays_per_arm as i64,
        "must be >= 1",
    )?;

    let root = EteNode::Explore {
        arm: 0,
        plays: 0,
        successes: 0,
        best_arm: 0,
        best_successes: 0,
    };
    let mut ids: HashMap<EteNode, usize> = HashMap::new();
    let mut nodes = vec![root];
    ids.insert(root, 0);
    let mut actions = Vec::new();
    let mut transitions = Vec::new();
    let mut cursor = 0;
    while cursor < nodes.len() {
        let node = nodes[cursor];
        cursor += 1;
        let played = match node {
            EteNode::Explore { arm, .. } => arm,
            EteNode::Commit(arm) => arm,
        };
        actions.push(DiscreteDist::point(played));
        let mut row = HashMap::new();
        for reward in 0..=1u8 {
            let target = match node {
                EteNode::Commit(arm) => EteNode::Commit(arm),
                EteNode::Explore {
                    arm,
                    plays,
                    successes,
                    best_arm,
                    best_successes,
                } => {
                    let successes = successes + u64::from(reward);
                    let plays = plays + 1;
                    if plays < plays_per_arm {
                        EteNode::Explore {
                            arm,
                            plays,
                            successes,
                            best_arm,
                            best_successes,
                        }
                    } else {
                        let (best_arm, best_successes) =
                            if arm == 0 || successes > best_successes {
                                (arm, successes)
                            } else {
                                (best_arm, best_successes)
                            };
                        if arm + 1 < arms {
                            EteNode::Explore {
                                arm: arm + 1,
                                plays: 0,
                                successes: 0,
                                best_arm,
                                best_successes,
                            }
                        } else {
                            EteNode::Commit(best_arm)
                        }
                    }
                }
            };
            let target_id = *ids.entry(target).or_insert_with(|| {
                nodes.push(target);
                nodes.len() - 1
            });
            row.insert(
                Observation::new(played, reward),
                DiscreteDist::point(StateId(target_id)),
            );
        }
        transitions.push(row);
    }

    let labels = nodes.iter().map(EteNode::label).collect();
    Pfa::from_parts(labels, StateId(0), arms, actions, transitions)
        .map_err(|e| panic!("explore-then-exploit compilation is internally consistent: {e}"))
}
