//! Regret measurement and replication aggregation.
//!
//! Regret here is pseudo-regret: the gap between the best arm's mean and the
//! mean of the arm actually played, summed over steps. Aggregation over
//! replications is streaming (Welford), so a sweep never holds more than one
//! replication's trajectory in memory.

use crate::bandit::BernoulliBandit;
use crate::protocols::Agent;
use crate::real::Real;

/// Cumulative pseudo-regret after each step of `actions`.
pub fn cumulative_pseudo_regret<T: Real>(
    actions: &[usize],
    bandit: &BernoulliBandit<T>,
) -> Vec<T> {
    let best = bandit.best_mean();
    let mut total = T::zero();
    actions
        .iter()
        .map(|&arm| {
            total += best - bandit.means()[arm];
            total
        })
        .collect()
}

/// Cumulative pseudo-regret sampled at the given 1-based step indices.
/// `steps` must be strictly increasing and end at or before `actions.len()`.
pub fn pseudo_regret_at_steps<T: Real>(
    actions: &[usize],
    bandit: &BernoulliBandit<T>,
    steps: &[usize],
) -> Vec<T> {
    let best = bandit.best_mean();
    let mut out = Vec::with_capacity(steps.len());
    let mut next = steps.iter().copied().peekable();
    let mut total = T::zero();
    for (t, &arm) in actions.iter().enumerate() {
        total += best - bandit.means()[arm];
        if next.peek() == Some(&(t + 1)) {
            out.push(total);
            next.next();
        }
    }
    out
}

/// Total pseudo-regret of a whole run.
pub fn total_pseudo_regret<T: Real>(actions: &[usize], bandit: &BernoulliBandit<T>) -> T {
    let best = bandit.best_mean();
    actions
        .iter()
        .map(|&arm| best - bandit.means()[arm])
        .sum()
}

/// Gap of the arm the agent would commit to right now: best mean minus the
/// mean of `exploit_choice()`. Zero iff the agent's choice is optimal.
pub fn final_gap<T: Real>(agent: &dyn Agent<T>, bandit: &BernoulliBandit<T>) -> T {
    bandit.best_mean() - bandit.means()[agent.exploit_choice()]
}

/// 1-based sample steps for a regret curve: at most `max_points` roughly
/// evenly spaced steps, always including the final one.
pub fn sample_steps(horizon: usize, max_points: usize) -> Vec<usize> {
    assert!(horizon >= 1 && max_points >= 1);
    if horizon <= max_points {
        return (1..=horizon).collect();
    }
    let mut steps: Vec<usize> = (1..=max_points)
        .map(|i| i * horizon / max_points)
        .collect();
    steps.dedup();
    debug_assert_eq!(steps.last(), Some(&horizon));
    steps
}

/// Streaming mean/variance over scalar replications.
#[derive(Debug, Clone)]
pub struct ScalarAccumulator<T> {
    count: u64,
    mean: T,
    m2: T,
}

impl<T: Real> Default for ScalarAccumulator<T> {
    fn default() -> Self {
        Self {
            count: 0,
            mean: T::zero(),
            m2: T::zero(),
        }
    }
}

impl<T: Real> ScalarAccumulator<T> {
    pub fn add(&mut self, value: T) {
        self.count += 1;
        let delta = value - self.mean;
        self.mean += delta / T::from_f64(self.count as f64);
        self.m2 += delta * (value - self.mean);
    }

    pub fn merge(&mut self, other: &Self) {
        if other.count == 0 {
            return;
        }
        if self.count == 0 {
            *self = other.clone();
            return;
        }
        let n1 = T::from_f64(self.count as f64);
        let n2 = T::from_f64(other.count as f64);
        let delta = other.mean - self.mean;
        let total = n1 + n2;
        self.mean += delta * n2 / total;
        self.m2 += other.m2 + delta * delta * n1 * n2 / total;
        self.count += other.count;
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn mean(&self) -> T {
        self.mean
    }

    /// Sample standard deviation (n - 1 in the denominator).
    pub fn std_dev(&self) -> T {
        if self.count < 2 {
            T::zero()
        } else {
            (self.m2 / T::from_f64((self.count - 1) as f64)).sqrt()
        }
    }

    /// Standard error of the mean.
    pub fn stderr(&self) -> T {
        if self.count < 2 {
            T::zero()
        } else {
            self.std_dev() / T::from_f64(self.count as f64).sqrt()
        }
    }
}

/// Mean regret curve over replications with per-point standard errors.
#[derive(Debug, Clone, PartialEq)]
pub struct AggregateCurve<T> {
    /// 1-based step indices the curve is sampled at.
    pub steps: Vec<usize>,
    pub mean: Vec<T>,
    pub stderr: Vec<T>,
    pub reps: u64,
}

/// Streaming per-step aggregation of regret curves over replications.
#[derive(Debug, Clone)]
pub struct CurveAccumulator<T> {
    steps: Vec<usize>,
    cells: Vec<ScalarAccumulator<T>>,
}

impl<T: Real> CurveAccumulator<T> {
    pub fn new(steps: Vec<usize>) -> Self {
        let cells = vec![ScalarAccumulator::default(); steps.len()];
        Self { steps, cells }
    }

    pub fn steps(&self) -> &[usize] {
        &self.steps
    }

    /// Adds one replication's curve, sampled at the same steps.
    pub fn add(&mut self, values: &[T]) {
        assert_eq!(values.len(), self.cells.len());
        for (cell, &v) in self.cells.iter_mut().zip(values) {
            cell.add(v);
        }
    }

    pub fn merge(&mut self, other: &Self) {
        assert_eq!(self.steps, other.steps);
        for (cell, o) in self.cells.iter_mut().zip(&other.cells) {
            cell.merge(o);
        }
    }

    pub fn reps(&self) -> u64 {
        self.cells.first().map_or(0, ScalarAccumulator::count)
    }

    pub fn finish(self) -> AggregateCurve<T> {
        let reps = self.reps();
        let mean = self.cells.iter().map(ScalarAccumulator::mean).collect();
        let stderr = self.cells.iter().map(ScalarAccumulator::stderr).collect();
        AggregateCurve {
            steps: self.steps,
            mean,
            stderr,
            reps,
        }
    }
}

/// Mean and standard error of a batch of values.
pub fn mean_and_stderr<T: Real>(values: &[T]) -> (T, T) {
    let mut acc = ScalarAccumulator::default();
    for &v in values {
        acc.add(v);
    }
    (acc.mean(), acc.stderr())
}
