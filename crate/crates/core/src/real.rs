//! Scalar abstraction for probabilities and regret values.
//!
//! All core math is generic over [`Real`] so the same engine runs in `f32`
//! or `f64`. Concrete aliases live at the crate root; the CLI uses `f64`.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, NumAssign};
use rand::Rng;
use rand_distr::{Beta, Distribution};

/// Floating-point scalar usable for probabilities, with the two sampling
/// primitives the engine needs.
pub trait Real: Float + NumAssign + Sum + Debug + Display + Send + Sync + 'static {
    /// Draw a uniform sample from `[0, 1)`.
    fn uniform<R: Rng + ?Sized>(rng: &mut R) -> Self;

    /// Draw a sample from `Beta(alpha, beta)`, `alpha, beta > 0`.
    fn sample_beta<R: Rng + ?Sized>(alpha: Self, beta: Self, rng: &mut R) -> Self;

    fn from_f64(v: f64) -> Self;

    fn as_f64(self) -> f64;

    /// Absolute tolerance for "this distribution sums to one" checks.
    /// 1e-9 in double precision; relaxed in `f32` where one ulp of 1.0
    /// already exceeds that.
    fn sum_tolerance() -> Self {
        Self::from_f64(1e-9)
    }
}

impl Real for f64 {
    fn uniform<R: Rng + ?Sized>(rng: &mut R) -> Self {
        rng.random()
    }

    fn sample_beta<R: Rng + ?Sized>(alpha: Self, beta: Self, rng: &mut R) -> Self {
        Beta::new(alpha, beta)
            .expect("valid Beta parameters")
            .sample(rng)
    }

    fn from_f64(v: f64) -> Self {
        v
    }

    fn as_f64(self) -> f64 {
        self
    }
}

impl Real for f32 {
    fn uniform<R: Rng + ?Sized>(rng: &mut R) -> Self {
        rng.random()
    }

    fn sample_beta<R: Rng + ?Sized>(alpha: Self, beta: Self, rng: &mut R) -> Self {
        Beta::new(alpha, beta)
            .expect("valid Beta parameters")
            .sample(rng)
    }

    fn from_f64(v: f64) -> Self {
        v as f32
    }

    fn as_f64(self) -> f64 {
        self as f64
    }

    fn sum_tolerance() -> Self {
        1e-6
    }
}
