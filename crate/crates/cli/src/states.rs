//! State-count reporting: closed-form formula vs compiled reachable count.

use fsband::pfa::reachable_state_count;

use crate::error::CliError;
use crate::protocol::ProtocolSpec;

#[derive(Debug, Clone, PartialEq)]
pub enum StateCountReport {
    Finite {
        protocol: String,
        formula: u128,
        compiled: usize,
    },
    /// Count-based protocols track unbounded statistics.
    InfiniteState { protocol: String },
}

pub fn state_count_report(spec: &ProtocolSpec) -> Result<StateCountReport, CliError> {
    match spec.state_formula() {
        Some(formula) => {
            let machine = spec.machine()?.ok_or_else(|| {
                CliError::Config(format!(
                    "protocol `{}` is finite-state but not compilable; \
                     use aspiration, elimination, or ete",
                    spec.id()
                ))
            })?;
            let compiled = reachable_state_count(machine.as_ref());
            Ok(StateCountReport::Finite {
                protocol: spec.id().to_owned(),
                formula,
                compiled,
            })
        }
        None if spec.id() == "aspiration2" => Err(CliError::Config(
            "state counting supports aspiration, elimination, and ete".into(),
        )),
        None => Ok(StateCountReport::InfiniteState {
            protocol: spec.id().to_owned(),
        }),
    }
}

pub fn render(report: &StateCountReport) -> String {
    match report {
        StateCountReport::Finite {
            protocol,
            formula,
            compiled,
        } => format!(
            "protocol: {protocol}\nformula states: {formula}\ncompiled reachable states: {compiled}\n"
        ),
        StateCountReport::InfiniteState { protocol } => {
            format!("protocol: {protocol}\nstates: infinite-state\n")
        }
    }
}
