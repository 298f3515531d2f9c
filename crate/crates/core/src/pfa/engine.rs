//! Stochastic execution, reachability, and materialization.

use std::collections::{HashMap, VecDeque};

use rand::Rng;

use crate::bandit::BernoulliBandit;
use crate::real::Real;

use super::{Observation, Pfa, PfaError, PfaSource, RunTrace, StateId};

/// Samples an arm from the action distribution of `state`.
pub fn act<T: Real, S: PfaSource<T> + ?Sized, R: Rng + ?Sized>(
    pfa: &S,
    state: StateId,
    rng: &mut R,
) -> Result<usize, PfaError> {
    if state.0 >= pfa.num_states() {
        return Err(PfaError::UnknownState(state.0));
    }
    Ok(*pfa.action(state)?.sample(rng))
}

/// Samples a successor state for `state` under `obs`.
pub fn step<T: Real, S: PfaSource<T> + ?Sized, R: Rng + ?Sized>(
    pfa: &S,
    state: StateId,
    obs: Observation,
    rng: &mut R,
) -> Result<StateId, PfaError> {
    if state.0 >= pfa.num_states() {
        return Err(PfaError::UnknownState(state.0));
    }
    Ok(*pfa.transition(state, obs)?.sample(rng))
}

/// Alternates act / pull / step for `horizon` steps.
pub fn run<T: Real, S: PfaSource<T> + ?Sized, R: Rng + ?Sized>(
    pfa: &S,
    bandit: &BernoulliBandit<T>,
    horizon: usize,
    rng: &mut R,
) -> Result<RunTrace, PfaError> {
    if pfa.num_arms() != bandit.arms() {
        return Err(PfaError::AlphabetMismatch {
            pfa_arms: pfa.num_arms(),
            bandit_arms: bandit.arms(),
        });
    }
    let mut state = pfa.start();
    let mut actions = Vec::with_capacity(horizon);
    let mut rewards = Vec::with_capacity(horizon);
    for _ in 0..horizon {
        let arm = act(pfa, state, rng)?;
        let reward = bandit.pull(arm, rng)?;
        state = step(pfa, state, Observation::new(arm, reward), rng)?;
        actions.push(arm);
        rewards.push(reward);
    }
    Ok(RunTrace {
        actions,
        rewards,
        final_state: state,
    })
}

/// States reachable from the start via positive-probability transitions, in
/// breadth-first order. Undefined transitions are skipped.
pub fn reachable_states<T: Real, S: PfaSource<T> + ?Sized>(pfa: &S) -> Vec<StateId> {
    let observations = pfa.observations();
    let mut visited = vec![false; pfa.num_states()];
    let mut order = Vec::new();
    let mut queue = VecDeque::new();
    let start = pfa.start();
    visited[start.0] = true;
    order.push(start);
    queue.push_back(start);
    while let Some(q) = queue.pop_front() {
        for &obs in &observations {
            let dist = match pfa.transition(q, obs) {
                Ok(d) => d,
                Err(PfaError::UndefinedTransition { .. }) => continue,
                Err(e) => panic!("transition table error during reachability: {e}"),
            };
            for (target, _) in dist.support() {
                if !visited[target.0] {
                    visited[target.0] = true;
                    order.push(*target);
                    queue.push_back(*target);
                }
            }
        }
    }
    order
}

pub fn reachable_state_count<T: Real, S: PfaSource<T> + ?Sized>(pfa: &S) -> usize {
    reachable_states(pfa).len()
}

/// Builds an explicit [`Pfa`] over the reachable states of `source`, with
/// ids renumbered in breadth-first order and labels carried over.
pub fn materialize<T: Real, S: PfaSource<T> + ?Sized>(source: &S) -> Result<Pfa<T>, PfaError> {
    let order = reachable_states(source);
    let mut remap = HashMap::with_capacity(order.len());
    for (new_id, old) in order.iter().enumerate() {
        remap.insert(*old, StateId(new_id));
    }
    let observations = source.observations();
    let mut labels = Vec::with_capacity(order.len());
    let mut actions = Vec::with_capacity(order.len());
    let mut transitions = Vec::with_capacity(order.len());
    for &old in &order {
        labels.push(source.state_label(old));
        actions.push(source.action(old)?);
        let mut row = HashMap::new();
        for &obs in &observations {
            match source.transition(old, obs) {
                Ok(dist) => {
                    // Zero-mass entries may name unreachable states; drop them.
                    let entries = dist
                        .support()
                        .map(|(target, p)| (remap[target], *p))
                        .collect();
                    let dist = crate::dist::DiscreteDist::new(entries).map_err(|source_err| {
                        PfaError::InvalidDistribution {
                            state: source.state_label(old),
                            source: source_err,
                        }
                    })?;
                    row.insert(obs, dist);
                }
                Err(PfaError::UndefinedTransition { .. }) => {}
                Err(e) => return Err(e),
            }
        }
        transitions.push(row);
    }
    Pfa::from_parts(labels, StateId(0), source.num_arms(), actions, transitions)
}
