//! Bernoulli multi-armed bandit environments.

use rand::Rng;
use thiserror::Error;

use crate::real::Real;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BanditError {
    #[error("bandit needs at least one arm")]
    NoArms,
    #[error("arm {arm} has mean {mean} outside [0,1]")]
    MeanOutOfRange { arm: usize, mean: f64 },
    #[error("arm index {arm} out of range for {arms} arms")]
    ArmOutOfRange { arm: usize, arms: usize },
    #[error("permutation acts on {perm} indices but bandit has {arms} arms")]
    SizeMismatch { perm: usize, arms: usize },
    #[error("index mapping is not a bijection")]
    NotABijection,
}

/// A `K`-armed bandit where arm `k` pays 1 with probability `means[k]`.
#[derive(Debug, Clone, PartialEq)]
pub struct BernoulliBandit<T> {
    means: Vec<T>,
}

impl<T: Real> BernoulliBandit<T> {
    pub fn new(means: Vec<T>) -> Result<Self, BanditError> {
        if means.is_empty() {
            return Err(BanditError::NoArms);
        }
        for (arm, mu) in means.iter().enumerate() {
            if !(*mu >= T::zero() && *mu <= T::one()) {
                return Err(BanditError::MeanOutOfRange {
                    arm,
                    mean: mu.as_f64(),
                });
            }
        }
        Ok(Self { means })
    }

    pub fn arms(&self) -> usize {
        self.means.len()
    }

    pub fn means(&self) -> &[T] {
        &self.means
    }

    pub fn mean(&self, arm: usize) -> Result<T, BanditError> {
        self.means
            .get(arm)
            .copied()
            .ok_or(BanditError::ArmOutOfRange {
                arm,
                arms: self.arms(),
            })
    }

    /// Pull arm `arm`: reward 1 with probability `means[arm]`, else 0.
    pub fn pull<R: Rng + ?Sized>(&self, arm: usize, rng: &mut R) -> Result<u8, BanditError> {
        let mu = self.mean(arm)?;
        Ok(if T::uniform(rng) < mu { 1 } else { 0 })
    }

    /// Highest success probability over all arms.
    pub fn best_mean(&self) -> T {
        self.means
            .iter()
            .copied()
            .fold(T::zero(), |a, b| if b > a { b } else { a })
    }

    /// Generic instances: best mean below 1, pairwise-distinct means, and
    /// for two-armed bandits both means positive.
    pub fn is_generic(&self) -> bool {
        if self.best_mean() >= T::one() {
            return false;
        }
        for i in 0..self.means.len() {
            for j in (i + 1)..self.means.len() {
                if self.means[i] == self.means[j] {
                    return false;
                }
            }
        }
        if self.means.len() == 2 && (self.means[0] <= T::zero() || self.means[1] <= T::zero()) {
            return false;
        }
        true
    }

    /// Relabels arms: the result `B'` satisfies `mu_k = mu'_{rho(k)}`.
    pub fn permute(&self, rho: &Permutation) -> Result<Self, BanditError> {
        if rho.len() != self.arms() {
            return Err(BanditError::SizeMismatch {
                perm: rho.len(),
                arms: self.arms(),
            });
        }
        let mut means = vec![T::zero(); self.arms()];
        for (k, mu) in self.means.iter().enumerate() {
            means[rho.apply(k)] = *mu;
        }
        Ok(Self { means })
    }
}

/// Draws a random instance: `alpha ~ U[0,1)`, then each mean `~ U[0,alpha)`
/// independently.
pub fn sample_bandit<T: Real, R: Rng + ?Sized>(arms: usize, rng: &mut R) -> BernoulliBandit<T> {
    assert!(arms >= 1, "bandit needs at least one arm");
    let alpha = T::uniform(rng);
    let means = (0..arms).map(|_| alpha * T::uniform(rng)).collect();
    BernoulliBandit { means }
}

/// A bijection on arm indices `0..K`.
#[derive(Debug, Clone, PartialEq)]
pub struct Permutation {
    map: Vec<usize>,
}

impl Permutation {
    pub fn new(map: Vec<usize>) -> Result<Self, BanditError> {
        let mut seen = vec![false; map.len()];
        for &v in &map {
            if v >= map.len() || seen[v] {
                return Err(BanditError::NotABijection);
            }
            seen[v] = true;
        }
        Ok(Self { map })
    }

    pub fn identity(len: usize) -> Self {
        Self {
            map: (0..len).collect(),
        }
    }

    /// Uniformly random permutation (Fisher–Yates).
    pub fn random<R: Rng + ?Sized>(len: usize, rng: &mut R) -> Self {
        let mut map: Vec<usize> = (0..len).collect();
        for i in (1..len).rev() {
            let j = rng.random_range(0..=i);
            map.swap(i, j);
        }
        Self { map }
    }

    /// All permutations of `0..len` in lexicographic order.
    pub fn enumerate_all(len: usize) -> Vec<Self> {
        let mut out = Vec::new();
        let mut current = Vec::with_capacity(len);
        let mut used = vec![false; len];
        fn rec(len: usize, current: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Permutation>) {
            if current.len() == len {
                out.push(Permutation {
                    map: current.clone(),
                });
                return;
            }
            for v in 0..len {
                if !used[v] {
                    used[v] = true;
                    current.push(v);
                    rec(len, current, used, out);
                    current.pop();
                    used[v] = false;
                }
            }
        }
        rec(len, &mut current, &mut used, &mut out);
        out
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn apply(&self, k: usize) -> usize {
        self.map[k]
    }

    pub fn inverse(&self) -> Self {
        let mut map = vec![0; self.map.len()];
        for (k, &v) in self.map.iter().enumerate() {
            map[v] = k;
        }
        Self { map }
    }

    pub fn indices(&self) -> &[usize] {
        &self.map
    }
}
