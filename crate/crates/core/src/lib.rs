//! Finite-state protocols for Bernoulli multi-armed bandits.
//!
//! The crate has five parts:
//!
//! - [`pfa`]: probabilistic finite automata with output, their execution
//!   against a bandit, reachability, and a JSON interchange format;
//! - [`bandit`]: Bernoulli bandit instances and random instance generation;
//! - [`protocols`]: bandit-playing agents (aspiration level, elimination
//!   tournament, explore-then-exploit, epsilon-greedy, Thompson Sampling)
//!   and compilers from the finite-state ones into automata;
//! - [`metrics`]: pseudo-regret, final gaps, and replication aggregation;
//! - [`rng`]: the seeded generator used throughout the simulations.
//!
//! Everything numeric is generic over the scalar type through [`real::Real`]
//! (implemented for `f64` and `f32`); the `*64` / `*32` aliases below pick a
//! concrete scalar.

pub mod bandit;
pub mod dist;
pub mod metrics;
pub mod pfa;
pub mod protocols;
pub mod real;
pub mod rng;

pub use bandit::BernoulliBandit;
pub use pfa::{Observation, Pfa, PfaSource, StateId};
pub use protocols::Agent;
pub use real::Real;

pub type Bandit64 = bandit::BernoulliBandit<f64>;
pub type Bandit32 = bandit::BernoulliBandit<f32>;
pub type Pfa64 = pfa::Pfa<f64>;
pub type Pfa32 = pfa::Pfa<f32>;
pub type Dist64<X> = dist::DiscreteDist<X, f64>;
pub type Dist32<X> = dist::DiscreteDist<X, f32>;
pub type Aspiration64 = protocols::AspirationAgent<f64>;
pub type Aspiration32 = protocols::AspirationAgent<f32>;
pub type TwoPhaseAspiration64 = protocols::TwoPhaseAspirationAgent<f64>;
pub type Elimination64 = protocols::EliminationAgent<f64>;
pub type ExploreThenExploit64 = protocols::ExploreThenExploitAgent<f64>;
pub type EpsilonGreedy64 = protocols::EpsilonGreedyAgent<f64>;
pub type Thompson64 = protocols::ThompsonAgent<f64>;
