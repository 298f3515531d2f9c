//! PFA document format.
//!
//! A JSON object with fields `outputs`, `inputs`, `start`, `states`,
//! `action`, and `delta`. Output symbols are 1-based arm labels (`"1"`,
//! `"2"`, ...); input symbols are `"<arm>:<reward>"` with a 1-based arm.
//! `action` maps a state label to `[output, probability]` pairs; `delta`
//! maps a state label to a map from input symbol to `[state, probability]`
//! pairs. Probabilities are decimal literals.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dist::DiscreteDist;
use crate::real::Real;

use super::{Observation, Pfa, PfaError, PfaSource, StateId};

#[derive(Debug, Error)]
pub enum DocumentError {
    #[error("document is not valid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("document declares no states")]
    EmptyStates,
    #[error("duplicate state label {0:?}")]
    DuplicateState(String),
    #[error("start state {0:?} is not in the state list")]
    UnknownStart(String),
    #[error("action table references unknown state {0:?}")]
    UnknownActionState(String),
    #[error("no action distribution for state {0:?}")]
    MissingAction(String),
    #[error("state {state:?} uses unknown output symbol {symbol:?}")]
    UnknownOutput { state: String, symbol: String },
    #[error("state {state:?} uses unknown input symbol {symbol:?}")]
    UnknownInput { state: String, symbol: String },
    #[error("delta references unknown state {0:?}")]
    UnknownDeltaState(String),
    #[error("transition from {state:?} targets unknown state {target:?}")]
    UnknownTarget { state: String, target: String },
    #[error("bad distribution at state {state:?}: {source}")]
    BadDistribution {
        state: String,
        source: crate::dist::DistError,
    },
    #[error("input symbol {0:?} is not of the form \"<arm>:<reward>\"")]
    BadInputSymbol(String),
    #[error(transparent)]
    Pfa(#[from] PfaError),
}

#[derive(Debug, Serialize, Deserialize)]
struct Document {
    outputs: Vec<String>,
    inputs: Vec<String>,
    start: String,
    states: Vec<String>,
    action: BTreeMap<String, Vec<(String, f64)>>,
    delta: BTreeMap<String, BTreeMap<String, Vec<(String, f64)>>>,
}

fn output_label(arm: usize) -> String {
    format!("{}", arm + 1)
}

fn input_label(obs: Observation) -> String {
    format!("{}:{}", obs.arm + 1, obs.reward)
}

fn parse_input(symbol: &str) -> Result<Observation, DocumentError> {
    let bad = || DocumentError::BadInputSymbol(symbol.to_string());
    let (arm, reward) = symbol.split_once(':').ok_or_else(bad)?;
    let arm: usize = arm.parse().map_err(|_| bad())?;
    let reward: u8 = reward.parse().map_err(|_| bad())?;
    if arm == 0 || reward > 1 {
        return Err(bad());
    }
    Ok(Observation::new(arm - 1, reward))
}

/// Serializes an explicit PFA as a document string.
pub fn serialize<T: Real>(pfa: &Pfa<T>) -> Result<String, DocumentError> {
    let outputs: Vec<String> = (0..pfa.num_arms()).map(output_label).collect();
    let observations = pfa.observations();
    let inputs: Vec<String> = observations.iter().map(|o| input_label(*o)).collect();
    let states: Vec<String> = pfa.labels().to_vec();

    let mut action = BTreeMap::new();
    let mut delta = BTreeMap::new();
    for (q, label) in states.iter().enumerate() {
        let dist = pfa.action(StateId(q))?;
        action.insert(
            label.clone(),
            dist.entries()
                .iter()
                .map(|(arm, p)| (output_label(*arm), p.as_f64()))
                .collect(),
        );
        let mut row = BTreeMap::new();
        for &obs in &observations {
            if let Some(dist) = pfa.transition_entry(StateId(q), obs) {
                row.insert(
                    input_label(obs),
                    dist.entries()
                        .iter()
                        .map(|(target, p)| (states[target.0].clone(), p.as_f64()))
                        .collect::<Vec<_>>(),
                );
            }
        }
        delta.insert(label.clone(), row);
    }

    let doc = Document {
        outputs,
        inputs,
        start: states[pfa.start().0].clone(),
        states,
        action,
        delta,
    };
    Ok(serde_json::to_string_pretty(&doc)?)
}

/// Parses a document string back into an explicit PFA.
pub fn deserialize<T: Real>(text: &str) -> Result<Pfa<T>, DocumentError> {
    let doc: Document = serde_json::from_str(text)?;
    if doc.states.is_empty() {
        return Err(DocumentError::EmptyStates);
    }

    let mut state_ids = HashMap::with_capacity(doc.states.len());
    for (id, label) in doc.states.iter().enumerate() {
        if state_ids.insert(label.clone(), StateId(id)).is_some() {
            return Err(DocumentError::DuplicateState(label.clone()));
        }
    }
    let start = *state_ids
        .get(&doc.start)
        .ok_or_else(|| DocumentError::UnknownStart(doc.start.clone()))?;

    let mut output_ids = HashMap::new();
    for (arm, symbol) in doc.outputs.iter().enumerate() {
        output_ids.insert(symbol.clone(), arm);
    }
    let num_arms = doc.outputs.len();
    let mut input_syms = HashMap::new();
    for symbol in &doc.inputs {
        input_syms.insert(symbol.clone(), parse_input(symbol)?);
    }

    for label in doc.action.keys() {
        if !state_ids.contains_key(label) {
            return Err(DocumentError::UnknownActionState(label.clone()));
        }
    }
    for label in doc.delta.keys() {
        if !state_ids.contains_key(label) {
            return Err(DocumentError::UnknownDeltaState(label.clone()));
        }
    }

    let mut actions = Vec::with_capacity(doc.states.len());
    let mut transitions = Vec::with_capacity(doc.states.len());
    for label in &doc.states {
        let entries = doc
            .action
            .get(label)
            .ok_or_else(|| DocumentError::MissingAction(label.clone()))?;
        let mut pairs = Vec::with_capacity(entries.len());
        for (symbol, p) in entries {
            let arm = *output_ids
                .get(symbol)
                .ok_or_else(|| DocumentError::UnknownOutput {
                    state: label.clone(),
                    symbol: symbol.clone(),
                })?;
            pairs.push((arm, T::from_f64(*p)));
        }
        actions.push(
            DiscreteDist::new(pairs).map_err(|source| DocumentError::BadDistribution {
                state: label.clone(),
                source,
            })?,
        );

        let mut row = HashMap::new();
        if let Some(per_input) = doc.delta.get(label) {
            for (symbol, entries) in per_input {
                let obs = *input_syms
                    .get(symbol)
                    .ok_or_else(|| DocumentError::UnknownInput {
                        state: label.clone(),
                        symbol: symbol.clone(),
                    })?;
                let mut pairs = Vec::with_capacity(entries.len());
                for (target, p) in entries {
                    let target =
                        *state_ids
                            .get(target)
                            .ok_or_else(|| DocumentError::UnknownTarget {
                                state: label.clone(),
                                target: target.clone(),
                            })?;
                    pairs.push((target, T::from_f64(*p)));
                }
                let dist = DiscreteDist::new(pairs).map_err(|source| {
                    DocumentError::BadDistribution {
                        state: label.clone(),
                        source,
                    }
                })?;
                row.insert(obs, dist);
            }
        }
        transitions.push(row);
    }

    Ok(Pfa::from_parts(
        doc.states.clone(),
        start,
        num_arms,
        actions,
        transitions,
    )?)
}
