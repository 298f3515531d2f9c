//! Protocol selection: config keys to agents, machines, and state counts.

use fsband::pfa::PfaSource;
use fsband::protocols::{
    self, compile_aspiration, compile_elimination, compile_explore_then_exploit, Agent,
    AspirationParams, EliminationParams, TwoPhaseParams,
};

use crate::config::KeyValues;
use crate::error::CliError;

#[derive(Debug, Clone, PartialEq)]
pub enum ProtocolSpec {
    Aspiration(AspirationParams),
    Aspiration2(TwoPhaseParams),
    Elimination(EliminationParams),
    ExploreThenExploit { arms: usize, plays_per_arm: u64 },
    EpsilonGreedy {
        arms: usize,
        plays_per_arm: u64,
        epsilon: f64,
    },
    Thompson { arms: usize },
}

fn key_or<T: std::str::FromStr>(kv: &KeyValues, key: &str, default: T) -> Result<T, CliError> {
    match kv.get(key) {
        None => Ok(default),
        Some(raw) => raw
            .parse()
            .map_err(|_| CliError::Config(format!("key `{key}`: cannot parse `{raw}`"))),
    }
}

impl ProtocolSpec {
    /// Builds a spec from the `protocol` name and the numeric config keys,
    /// applying the documented defaults for any key left unset.
    pub fn from_keys(name: &str, arms: usize, kv: &KeyValues) -> Result<Self, CliError> {
        let spec = match name {
            "aspiration" | "aspiration2" => {
                let base = AspirationParams {
                    arms,
                    ranks: key_or(kv, "m", 100)?,
                    win: key_or(kv, "m1", 20)?,
                    lose: key_or(kv, "m2", 3)?,
                };
                if name == "aspiration" {
                    ProtocolSpec::Aspiration(base)
                } else {
                    ProtocolSpec::Aspiration2(TwoPhaseParams {
                        base,
                        coarse_win: key_or(kv, "m1c", 5)?,
                        coarse_lose: key_or(kv, "m2c", 1)?,
                    })
                }
            }
            "elimination" => ProtocolSpec::Elimination(EliminationParams {
                arms,
                margin: key_or(kv, "M", 20)?,
                stop_scale: key_or(kv, "N", 1000)?,
            }),
            "ete" => ProtocolSpec::ExploreThenExploit {
                arms,
                plays_per_arm: key_or(kv, "N", 100)?,
            },
            "egreedy" => ProtocolSpec::EpsilonGreedy {
                arms,
                plays_per_arm: key_or(kv, "N", 100)?,
                epsilon: key_or(kv, "epsilon", 0.1)?,
            },
            "thompson" => ProtocolSpec::Thompson { arms },
            other => {
                return Err(CliError::Config(format!("unknown protocol `{other}`")));
            }
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        // Constructing an agent runs every parameter check.
        self.build_agent().map(|_| ())
    }

    pub fn id(&self) -> &'static str {
        match self {
            ProtocolSpec::Aspiration(_) => "aspiration",
            ProtocolSpec::Aspiration2(_) => "aspiration2",
            ProtocolSpec::Elimination(_) => "elimination",
            ProtocolSpec::ExploreThenExploit { .. } => "ete",
            ProtocolSpec::EpsilonGreedy { .. } => "egreedy",
            ProtocolSpec::Thompson { .. } => "thompson",
        }
    }

    pub fn arms(&self) -> usize {
        match self {
            ProtocolSpec::Aspiration(p) => p.arms,
            ProtocolSpec::Aspiration2(p) => p.base.arms,
            ProtocolSpec::Elimination(p) => p.arms,
            ProtocolSpec::ExploreThenExploit { arms, .. }
            | ProtocolSpec::EpsilonGreedy { arms, .. }
            | ProtocolSpec::Thompson { arms } => *arms,
        }
    }

    /// Parameter list recorded in the summary CSV, without the shared
    /// rng/seed fields.
    pub fn params_string(&self) -> String {
        match self {
            ProtocolSpec::Aspiration(p) => format!(
                "arms={};m={};m1={};m2={}",
                p.arms, p.ranks, p.win, p.lose
            ),
            ProtocolSpec::Aspiration2(p) => format!(
                "arms={};m={};m1={};m2={};m1c={};m2c={}",
                p.base.arms, p.base.ranks, p.base.win, p.base.lose, p.coarse_win, p.coarse_lose
            ),
            ProtocolSpec::Elimination(p) => {
                format!("arms={};M={};N={}", p.arms, p.margin, p.stop_scale)
            }
            ProtocolSpec::ExploreThenExploit {
                arms,
                plays_per_arm,
            } => format!("arms={arms};N={plays_per_arm}"),
            ProtocolSpec::EpsilonGreedy {
                arms,
                plays_per_arm,
                epsilon,
            } => format!("arms={arms};N={plays_per_arm};epsilon={epsilon}"),
            ProtocolSpec::Thompson { arms } => {
                format!("arms={arms};beta={}", protocols::thompson::BETA_SAMPLER)
            }
        }
    }

    pub fn build_agent(&self) -> Result<Box<dyn Agent<f64>>, CliError> {
        Ok(match self {
            ProtocolSpec::Aspiration(p) => Box::new(protocols::AspirationAgent::<f64>::new(*p)?),
            ProtocolSpec::Aspiration2(p) => {
                Box::new(protocols::TwoPhaseAspirationAgent::<f64>::new(*p)?)
            }
            ProtocolSpec::Elimination(p) => Box::new(protocols::EliminationAgent::<f64>::new(*p)?),
            ProtocolSpec::ExploreThenExploit {
                arms,
                plays_per_arm,
            } => Box::new(protocols::ExploreThenExploitAgent::<f64>::new(
                *arms,
                *plays_per_arm,
            )?),
            ProtocolSpec::EpsilonGreedy {
                arms,
                plays_per_arm,
                epsilon,
            } => Box::new(protocols::EpsilonGreedyAgent::<f64>::new(
                *arms,
                *plays_per_arm,
                *epsilon,
            )?),
            ProtocolSpec::Thompson { arms } => Box::new(protocols::ThompsonAgent::<f64>::new(*arms)?),
        })
    }

    /// Closed-form state count for the finite-state protocols; `None` for
    /// the count-based (infinite-state) ones.
    pub fn state_formula(&self) -> Option<u128> {
        match self {
            ProtocolSpec::Aspiration(p) => Some(
                p.arms as u128 * p.ranks as u128 * (p.win + p.lose) as u128,
            ),
            // Finite-state, but the harness does not compile it, so no
            // count is reported.
            ProtocolSpec::Aspiration2(_) => None,
            ProtocolSpec::Elimination(p) => {
                let k = p.arms as u128;
                Some(k * (k - 1) / 2 * 2 * (2 * p.margin as u128 + 1))
            }
            ProtocolSpec::ExploreThenExploit {
                arms,
                plays_per_arm,
            } => {
                // Explore states: per arm i, N(N+1)/2 (plays, successes)
                // pairs times the number of best-so-far records after arms
                // 0..i; plus K commit states.
                let k = *arms as u128;
                let n = *plays_per_arm as u128;
                let grid = n * (n + 1) / 2;
                let mut records = 1u128;
                for i in 1..k {
                    records += (n + 1) + (i - 1) * n;
                }
                Some(grid * records + k)
            }
            ProtocolSpec::EpsilonGreedy { .. } | ProtocolSpec::Thompson { .. } => None,
        }
    }

    /// The compiled automaton, for the protocols the CLI can compile.
    pub fn machine(&self) -> Result<Option<Box<dyn PfaSource<f64>>>, CliError> {
        Ok(match self {
            ProtocolSpec::Aspiration(p) => Some(Box::new(compile_aspiration::<f64>(*p)?)),
            ProtocolSpec::Elimination(p) => Some(Box::new(compile_elimination::<f64>(*p)?)),
            ProtocolSpec::ExploreThenExploit {
                arms,
                plays_per_arm,
            } => Some(Box::new(compile_explore_then_exploit::<f64>(
                *arms,
                *plays_per_arm,
            )?)),
            _ => None,
        })
    }
}
