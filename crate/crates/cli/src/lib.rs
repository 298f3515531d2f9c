//! Experiment harness for the `fsband` protocols: config parsing,
//! replication orchestration, figure sweeps, state-count reports, the
//! nonoptimality demonstration, and CSV/SVG emission. The `fsband` binary
//! is a thin CLI over this crate.

pub mod config;
pub mod demo;
pub mod error;
pub mod experiment;
pub mod plot;
pub mod protocol;
pub mod states;
pub mod sweep;

pub use config::{BanditSource, ExperimentConfig, KeyValues};
pub use error::CliError;
pub use experiment::{run_experiment, run_replications, ExperimentResult, SummaryRow};
pub use protocol::ProtocolSpec;
pub use sweep::{figure_sweep, Figure};
