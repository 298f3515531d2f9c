//! Replication orchestration and CSV emission.
//!
//! Replications run in parallel but are folded into the aggregates in
//! replication-index order, so output bytes never depend on scheduling.

use std::fs;
use std::io::Write as _;
use std::path::Path;

use rayon::prelude::*;

use fsband::bandit::{sample_bandit, BernoulliBandit};
use fsband::metrics::{
    final_gap, pseudo_regret_at_steps, AggregateCurve, CurveAccumulator, ScalarAccumulator,
};
use fsband::protocols::play;
use fsband::rng::{replication_rng, RNG_ALGORITHM};

use crate::config::{steps_with_stride, BanditSource, ExperimentConfig};
use crate::error::CliError;
use crate::protocol::ProtocolSpec;

pub const CURVE_HEADER: &str = "step,mean_cum_regret,stderr,reps";
pub const SUMMARY_HEADER: &str =
    "protocol,params,mean_final_gap,gap_stderr,mean_cum_regret_at_horizon,reps,seed";

#[derive(Debug, Clone)]
pub struct SummaryRow {
    pub protocol: String,
    pub params: String,
    pub mean_final_gap: f64,
    pub gap_stderr: f64,
    pub mean_cum_regret_at_horizon: f64,
    pub reps: u64,
    pub seed: u64,
}

#[derive(Debug, Clone)]
pub struct ExperimentResult {
    pub curve: AggregateCurve<f64>,
    pub summary: SummaryRow,
}

/// Runs `reps` independent replications of `spec` and aggregates regret
/// curves (sampled at `steps`) and final gaps.
pub fn run_replications(
    spec: &ProtocolSpec,
    source: &BanditSource,
    horizon: usize,
    reps: u64,
    seed: u64,
    steps: &[usize],
) -> Result<ExperimentResult, CliError> {
    if let BanditSource::Explicit(means) = source {
        // Validate once up front instead of in every worker.
        BernoulliBandit::<f64>::new(means.clone())?;
    }
    let arms = spec.arms();
    let per_rep: Result<Vec<(Vec<f64>, f64)>, CliError> = (0..reps)
        .into_par_iter()
        .map(|rep| {
            let mut rng = replication_rng(seed, rep);
            let bandit = match source {
                BanditSource::Generated => sample_bandit::<f64, _>(arms, &mut rng),
                BanditSource::Explicit(means) => BernoulliBandit::new(means.clone())?,
            };
            let mut agent = spec.build_agent()?;
            let (actions, _rewards) = play(agent.as_mut(), &bandit, horizon, &mut rng)?;
            let samples = pseudo_regret_at_steps(&actions, &bandit, steps);
            let gap = final_gap(agent.as_ref(), &bandit);
            Ok((samples, gap))
        })
        .collect();
    let mut curve_acc = CurveAccumulator::new(steps.to_vec());
    let mut gap_acc = ScalarAccumulator::<f64>::default();
    for (samples, gap) in per_rep? {
        curve_acc.add(&samples);
        gap_acc.add(gap);
    }
    let curve = curve_acc.finish();
    let final_regret = *curve.mean.last().expect("at least one sample step");
    let summary = SummaryRow {
        protocol: spec.id().to_owned(),
        params: format!("{};rng={}", spec.params_string(), RNG_ALGORITHM),
        mean_final_gap: gap_acc.mean(),
        gap_stderr: gap_acc.stderr(),
        mean_cum_regret_at_horizon: final_regret,
        reps,
        seed,
    };
    Ok(ExperimentResult { curve, summary })
}

pub fn curve_csv(curve: &AggregateCurve<f64>) -> String {
    let mut out = String::from(CURVE_HEADER);
    out.push('\n');
    for (i, &step) in curve.steps.iter().enumerate() {
        out.push_str(&format!(
            "{},{:.6},{:.6},{}\n",
            step, curve.mean[i], curve.stderr[i], curve.reps
        ));
    }
    out
}

pub fn summary_csv(rows: &[SummaryRow]) -> String {
    let mut out = String::from(SUMMARY_HEADER);
    out.push('\n');
    for row in rows {
        out.push_str(&format!(
            "{},{},{:.6},{:.6},{:.6},{},{}\n",
            row.protocol,
            row.params,
            row.mean_final_gap,
            row.gap_stderr,
            row.mean_cum_regret_at_horizon,
            row.reps,
            row.seed
        ));
    }
    out
}

pub fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent)?;
        }
    }
    let mut file = fs::File::create(path)?;
    file.write_all(contents.as_bytes())?;
    Ok(())
}

/// Executes a full experiment config: runs the replications and writes
/// `curve.csv` and `summary.csv` under the configured output directory.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentResult, CliError> {
    let steps = steps_with_stride(config.horizon, config.stride);
    let result = run_replications(
        &config.protocol,
        &config.bandit,
        config.horizon,
        config.reps,
        config.seed,
        &steps,
    )?;
    write_file(&config.out.join("curve.csv"), &curve_csv(&result.curve))?;
    write_file(
        &config.out.join("summary.csv"),
        &summary_csv(std::slice::from_ref(&result.summary)),
    )?;
    Ok(result)
}
