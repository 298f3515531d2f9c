//! Finite discrete probability distributions.
//!
//! Sampling is inverse-CDF over the insertion order of the support, so two
//! runs with the same random stream pick the same outcomes.

use thiserror::Error;

use crate::real::Real;
use rand::Rng;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DistError {
    #[error("distribution has empty support")]
    Empty,
    #[error("negative probability {prob} at support entry {index}")]
    Negative { index: usize, prob: f64 },
    #[error("probabilities sum to {sum}, expected 1 within tolerance")]
    SumOutOfTolerance { sum: f64 },
}

/// A probability distribution over a finite, ordered support.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteDist<X, T> {
    entries: Vec<(X, T)>,
}

impl<X, T: Real> DiscreteDist<X, T> {
    /// Builds a distribution, checking nonnegativity and that the total mass
    /// is 1 within [`Real::sum_tolerance`].
    pub fn new(entries: Vec<(X, T)>) -> Result<Self, DistError> {
        if entries.is_empty() {
            return Err(DistError::Empty);
        }
        let mut sum = T::zero();
        for (index, (_, p)) in entries.iter().enumerate() {
            if *p < T::zero() {
                return Err(DistError::Negative {
                    index,
                    prob: p.as_f64(),
                });
            }
            sum += *p;
        }
        if (sum - T::one()).abs() > T::sum_tolerance() {
            return Err(DistError::SumOutOfTolerance { sum: sum.as_f64() });
        }
        Ok(Self { entries })
    }

    /// All the mass on a single outcome.
    pub fn point(x: X) -> Self {
        Self {
            entries: vec![(x, T::one())],
        }
    }

    /// Inverse-CDF sample; consumes exactly one uniform draw.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> &X {
        let u = T::uniform(rng);
        let mut acc = T::zero();
        for (x, p) in &self.entries {
            acc += *p;
            if u < acc {
                return x;
            }
        }
        // Rounding can leave acc fractionally below 1; fall back to the last
        // positive-mass entry.
        &self
            .entries
            .iter()
            .rev()
            .find(|(_, p)| *p > T::zero())
            .expect("validated distribution has positive mass")
            .0
    }

    /// Support entries with strictly positive probability.
    pub fn support(&self) -> impl Iterator<Item = &(X, T)> {
        self.entries.iter().filter(|(_, p)| *p > T::zero())
    }

    pub fn entries(&self) -> &[(X, T)] {
        &self.entries
    }

    /// Probability of outcomes matching `pred` (zero if absent).
    pub fn mass_where(&self, mut pred: impl FnMut(&X) -> bool) -> T {
        self.entries
            .iter()
            .filter(|(x, _)| pred(x))
            .map(|(_, p)| *p)
            .sum()
    }
}
