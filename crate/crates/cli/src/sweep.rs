//! Preset parameter sweeps mirroring the four result figures.

use std::path::Path;

use fsband::protocols::{AspirationParams, EliminationParams, TwoPhaseParams};

use crate::config::BanditSource;
use crate::error::CliError;
use crate::experiment::{curve_csv, run_replications, summary_csv, write_file, ExperimentResult};
use crate::protocol::ProtocolSpec;

pub const SWEEP_ARMS: usize = 50;
pub const SWEEP_REPS: u64 = 100;
/// Horizon for the parameter-sweep figures. The reported quantity is the
/// limiting final gap, and the slowest settings (m = 500, N = 1000 with
/// M = 100) only stop changing around 300,000 steps.
pub const LIMIT_HORIZON: usize = 400_000;
/// Horizon for the protocol-comparison figure, which reports a snapshot
/// after 50,000 steps rather than a limit.
pub const COMPARE_HORIZON: usize = 50_000;
pub const QUICK_REPS: u64 = 20;
pub const QUICK_HORIZON: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Figure {
    /// Aspiration level: rank counts m in {50, 100, 200, 500} at (M1, M2) = (20, 3).
    MSweep,
    /// Aspiration level: threshold pairs (M1, M2) at m = 100.
    Thresholds,
    /// Elimination tournament: (N, M) grid.
    Elimination,
    /// Elimination vs two-phase aspiration vs epsilon-greedy vs Thompson.
    Compare,
}

impl Figure {
    pub fn from_name(name: &str) -> Result<Self, CliError> {
        match name {
            "m" => Ok(Figure::MSweep),
            "thresholds" => Ok(Figure::Thresholds),
            "elimination" => Ok(Figure::Elimination),
            "compare" => Ok(Figure::Compare),
            other => Err(CliError::Config(format!(
                "unknown figure `{other}`; expected m, thresholds, elimination, or compare"
            ))),
        }
    }

    /// Full-scale horizon for this figure.
    pub fn horizon(&self) -> usize {
        match self {
            Figure::Compare => COMPARE_HORIZON,
            _ => LIMIT_HORIZON,
        }
    }

    /// Named protocol settings for this figure, at `arms` arms.
    pub fn settings(&self, arms: usize) -> Vec<(String, ProtocolSpec)> {
        let aspiration = |ranks, win, lose| {
            ProtocolSpec::Aspiration(AspirationParams {
                arms,
                ranks,
                win,
                lose,
            })
        };
        match self {
            Figure::MSweep => [50, 100, 200, 500]
                .iter()
                .map(|&m| (format!("m{m}"), aspiration(m, 20, 3)))
                .collect(),
            Figure::Thresholds => [(5, 1), (20, 3), (40, 6), (80, 12)]
                .iter()
                .map(|&(m1, m2)| (format!("m1_{m1}_m2_{m2}"), aspiration(100, m1, m2)))
                .collect(),
            Figure::Elimination => [(1000, 10), (1000, 20), (1000, 100), (100, 10), (100, 20)]
                .iter()
                .map(|&(n, m)| {
                    (
                        format!("N{n}_M{m}"),
                        ProtocolSpec::Elimination(EliminationParams {
                            arms,
                            margin: m,
                            stop_scale: n,
                        }),
                    )
                })
                .collect(),
            Figure::Compare => vec![
                (
                    "elimination".into(),
                    ProtocolSpec::Elimination(EliminationParams {
                        arms,
                        margin: 20,
                        stop_scale: 1000,
                    }),
                ),
                (
                    "aspiration2".into(),
                    ProtocolSpec::Aspiration2(TwoPhaseParams::with_default_coarse(
                        AspirationParams {
                            arms,
                            ranks: 100,
                            win: 20,
                            lose: 3,
                        },
                    )),
                ),
                (
                    "egreedy".into(),
                    ProtocolSpec::EpsilonGreedy {
                        arms,
                        plays_per_arm: 100,
                        epsilon: 0.1,
                    },
                ),
                ("thompson".into(), ProtocolSpec::Thompson { arms }),
            ],
        }
    }
}

/// Runs every setting of the figure and writes one `<name>_curve.csv` per
/// setting plus a shared `summary.csv` in `out_dir`. `quick` trades
/// precision for runtime (20 replications, 10,000 steps).
pub fn figure_sweep(
    figure: Figure,
    out_dir: &Path,
    quick: bool,
    seed: u64,
) -> Result<Vec<(String, ExperimentResult)>, CliError> {
    let (reps, horizon) = if quick {
        (QUICK_REPS, QUICK_HORIZON)
    } else {
        (SWEEP_REPS, figure.horizon())
    };
    let results = run_figure(figure, SWEEP_ARMS, horizon, reps, seed)?;
    let mut summaries = Vec::with_capacity(results.len());
    for (name, result) in &results {
        write_file(
            &out_dir.join(format!("{name}_curve.csv")),
            &curve_csv(&result.curve),
        )?;
        summaries.push(result.summary.clone());
    }
    write_file(&out_dir.join("summary.csv"), &summary_csv(&summaries))?;
    Ok(results)
}

/// The sweep body without file output, reusable from tests.
pub fn run_figure(
    figure: Figure,
    arms: usize,
    horizon: usize,
    reps: u64,
    seed: u64,
) -> Result<Vec<(String, ExperimentResult)>, CliError> {
    let stride = (horizon / 500).max(1);
    let steps = crate::config::steps_with_stride(horizon, stride);
    figure
        .settings(arms)
        .into_iter()
        .enumerate()
        .map(|(i, (name, spec))| {
            // Distinct seed block per setting so settings are independent.
            let setting_seed = seed.wrapping_add((i as u64).wrapping_mul(0x9e3779b97f4a7c15));
            let result = run_replications(
                &spec,
                &BanditSource::Generated,
                horizon,
                reps,
                setting_seed,
                &steps,
            )?;
            Ok((name, result))
        })
        .collect()
}
