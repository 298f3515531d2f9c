//! Nonoptimality demonstration: any fixed finite-state machine has a bandit
//! permutation on which its long-run average regret stays bounded away from
//! zero. Estimates AReg over every permutation of a generic bandit (or a
//! random sample of permutations when there are too many) and reports the
//! worst one.

use rayon::prelude::*;

use fsband::bandit::{BernoulliBandit, Permutation};
use fsband::metrics::{pseudo_regret_at_steps, ScalarAccumulator};
use fsband::pfa::{run, PfaSource};
use fsband::rng::replication_rng;

use crate::error::CliError;

/// Permutation cap: with more than this many permutations, a random sample
/// of this size is used instead of full enumeration.
pub const MAX_PERMUTATIONS: usize = 120;

/// Which genericity clause a bandit violates, if any.
pub fn genericity_violation(bandit: &BernoulliBandit<f64>) -> Option<&'static str> {
    if bandit.best_mean() >= 1.0 {
        return Some("best mean must be below 1");
    }
    let means = bandit.means();
    for i in 0..means.len() {
        for j in (i + 1)..means.len() {
            if means[i] == means[j] {
                return Some("means must be pairwise distinct");
            }
        }
    }
    if means.len() == 2 && (means[0] <= 0.0 || means[1] <= 0.0) {
        return Some("a two-armed bandit must have both means positive");
    }
    None
}

#[derive(Debug, Clone, PartialEq)]
pub struct HorizonEstimate {
    pub horizon: usize,
    pub mean_areg: f64,
    pub stderr: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PermutationResult {
    /// Arm relabeling, 0-based.
    pub indices: Vec<usize>,
    pub estimates: Vec<HorizonEstimate>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DemoReport {
    /// True when permutations were sampled rather than enumerated.
    pub sampled: bool,
    pub results: Vec<PermutationResult>,
    /// Index into `results` of the permutation with the largest AReg at the
    /// final horizon.
    pub worst: usize,
    /// AReg of the worst permutation at the final horizon.
    pub plateau: f64,
}

fn permutations_to_check(arms: usize, seed: u64) -> (Vec<Permutation>, bool) {
    let mut factorial = 1usize;
    for i in 2..=arms {
        factorial = factorial.saturating_mul(i);
        if factorial > MAX_PERMUTATIONS {
            break;
        }
    }
    if factorial <= MAX_PERMUTATIONS {
        (Permutation::enumerate_all(arms), false)
    } else {
        let mut rng = replication_rng(seed, u64::MAX / 2);
        let perms = (0..MAX_PERMUTATIONS)
            .map(|_| Permutation::random(arms, &mut rng))
            .collect();
        (perms, true)
    }
}

pub fn nonoptimality_demo(
    pfa: &dyn PfaSource<f64>,
    bandit: &BernoulliBandit<f64>,
    horizons: &[usize],
    reps: u64,
    seed: u64,
) -> Result<DemoReport, CliError> {
    if let Some(clause) = genericity_violation(bandit) {
        return Err(CliError::NonGeneric(clause));
    }
    if horizons.is_empty() || horizons.windows(2).any(|w| w[0] >= w[1]) {
        return Err(CliError::Config(
            "horizons must be a nonempty strictly increasing list".into(),
        ));
    }
    if pfa.num_arms() != bandit.arms() {
        return Err(CliError::Config(format!(
            "machine plays {} arms but bandit has {}",
            pfa.num_arms(),
            bandit.arms()
        )));
    }
    let (perms, sampled) = permutations_to_check(bandit.arms(), seed);
    let max_horizon = *horizons.last().expect("nonempty");
    let mut results = Vec::with_capacity(perms.len());
    for (pi, perm) in perms.iter().enumerate() {
        let permuted = bandit.permute(perm)?;
        // Distinct seed block per permutation, replication-indexed inside.
        let block = seed.wrapping_add((pi as u64).wrapping_mul(0x9e3779b97f4a7c15));
        let per_rep: Result<Vec<Vec<f64>>, CliError> = (0..reps)
            .into_par_iter()
            .map(|rep| {
                let mut rng = replication_rng(block, rep);
                let trace = run(pfa, &permuted, max_horizon, &mut rng)?;
                Ok(pseudo_regret_at_steps(&trace.actions, &permuted, horizons))
            })
            .collect();
        let mut accs = vec![ScalarAccumulator::<f64>::default(); horizons.len()];
        for samples in per_rep? {
            for (acc, &reg) in accs.iter_mut().zip(&samples) {
                acc.add(reg);
            }
        }
        let estimates = horizons
            .iter()
            .zip(&accs)
            .map(|(&h, acc)| HorizonEstimate {
                horizon: h,
                mean_areg: acc.mean() / h as f64,
                stderr: acc.stderr() / h as f64,
            })
            .collect();
        results.push(PermutationResult {
            indices: perm.indices().to_vec(),
            estimates,
        });
    }
    let worst = results
        .iter()
        .enumerate()
        .max_by(|(_, a), (_, b)| {
            let fa = a.estimates.last().expect("nonempty").mean_areg;
            let fb = b.estimates.last().expect("nonempty").mean_areg;
            fa.partial_cmp(&fb).expect("finite AReg")
        })
        .map(|(i, _)| i)
        .expect("at least one permutation");
    let plateau = results[worst].estimates.last().expect("nonempty").mean_areg;
    Ok(DemoReport {
        sampled,
        results,
        worst,
        plateau,
    })
}

pub fn render(report: &DemoReport) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "permutations checked: {}{}\n",
        report.results.len(),
        if report.sampled { " (random sample)" } else { "" }
    ));
    let worst = &report.results[report.worst];
    let labels: Vec<String> = worst.indices.iter().map(|&i| (i + 1).to_string()).collect();
    out.push_str(&format!("worst permutation: [{}]\n", labels.join(",")));
    out.push_str("horizon,mean_areg,stderr\n");
    for est in &worst.estimates {
        out.push_str(&format!(
            "{},{:.6},{:.6}\n",
            est.horizon, est.mean_areg, est.stderr
        ));
    }
    out.push_str(&format!("plateau estimate: {:.6}\n", report.plateau));
    out
}
