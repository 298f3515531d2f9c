//! Aspiration-level protocol: compare one real arm at a time against a
//! virtual arm whose success probability is set by the current aspiration
//! rank, lowering the rank when every arm loses.

use std::marker::PhantomData;

use rand::RngCore;

use crate::real::Real;

use super::{require, Agent, CallGuard, ProtocolError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AspirationParams {
    /// Number of arms K.
    pub arms: usize,
    /// Number of aspiration ranks m.
    pub ranks: usize,
    /// Upper counter threshold M1 (arm wins, protocol commits).
    pub win: i64,
    /// Lower counter magnitude M2 (counter lives in (-M2, M1]).
    pub lose: i64,
}

impl AspirationParams {
    pub fn validate(&self) -> Result<(), ProtocolError> {
        require(self.arms >= 1, "arms", self.arms as i64, "must be >= 1")?;
        require(self.ranks >= 1, "ranks", self.ranks as i64, "must be >= 1")?;
        require(self.win >= 1, "win", self.win, "must be >= 1")?;
        require(self.lose >= 1, "lose", self.lose, "must be >= 1")
    }

    /// Success probability of the virtual arm at aspiration rank `level`.
    pub fn virtual_mean<T: Real>(&self, level: usize) -> T {
        (T::from_f64(level as f64) - T::from_f64(0.5)) / T::from_f64(self.ranks as f64)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum CoreEvent {
    None,
    /// The current arm beat the virtual arm at this aspiration level.
    Won { level: usize },
}

/// Counter dynamics shared by the one-phase agent and both phases of the
/// two-phase agent. `descent` is how far the rank drops after a full failed
/// pass over the arms.
#[derive(Debug, Clone, PartialEq, Eq)]
struct AspirationCore {
    arms: usize,
    ranks: usize,
    win: i64,
    lose: i64,
    descent: usize,
    level: usize,
    arm: usize,
    counter: i64,
}

impl AspirationCore {
    fn new(arms: usize, ranks: usize, win: i64, lose: i64, descent: usize, level: usize) -> Self {
        Self {
            arms,
            ranks,
            win,
            lose,
            descent,
            level,
            arm: 0,
            counter: 0,
        }
    }

    fn virtual_mean<T: Real>(&self) -> T {
        AspirationParams {
            arms: self.arms,
            ranks: self.ranks,
            win: self.win,
            lose: self.lose,
        }
        .virtual_mean(self.level)
    }

    /// Consumes exactly one uniform draw.
    fn observe<T: Real>(&mut self, reward: u8, rng: &mut dyn RngCore) -> CoreEvent {
        let p: T = self.virtual_mean();
        let u = T::uniform(rng);
        if reward == 1 {
            // Counter goes up iff the virtual arm failed.
            if u < T::one() - p {
                self.counter += 1;
                if self.counter == self.win {
                    return CoreEvent::Won { level: self.level };
                }
            }
        } else {
            // Counter goes down iff the virtual arm succeeded.
            if u < p {
                let floor = 1 - self.lose;
                if self.counter > floor {
                    self.counter -= 1;
                } else {
                    self.advance();
                }
            }
        }
        CoreEvent::None
    }

    /// Current arm lost: move to the next arm, or drop the aspiration level
    /// after a full pass (clamped at rank 1).
    fn advance(&mut self) {
        if self.arm + 1 < self.arms {
            self.arm += 1;
        } else {
            self.level = self.level.saturating_sub(self.descent).max(1);
            self.arm = 0;
        }
        self.counter = 0;
    }
}

/// One-phase aspiration-level agent, starting at rank m on arm 1.
#[derive(Debug, Clone)]
pub struct AspirationAgent<T> {
    params: AspirationParams,
    core: AspirationCore,
    committed: Option<usize>,
    guard: CallGuard,
    _scalar: PhantomData<T>,
}

impl<T: Real> AspirationAgent<T> {
    pub fn new(params: AspirationParams) -> Result<Self, ProtocolError> {
        params.validate()?;
        Ok(Self {
            core: AspirationCore::new(
                params.arms,
                params.ranks,
                params.win,
                params.lose,
                1,
                params.ranks,
            ),
            params,
            committed: None,
            guard: CallGuard::default(),
            _scalar: PhantomData,
        })
    }

    pub fn params(&self) -> &AspirationParams {
        &self.params
    }

    pub fn level(&self) -> usize {
        self.core.level
    }

    pub fn arm_under_test(&self) -> usize {
        self.core.arm
    }

    pub fn counter(&self) -> i64 {
        self.core.counter
    }

    pub fn committed(&self) -> Option<usize> {
        self.committed
    }
}

impl<T: Real> Agent<T> for AspirationAgent<T> {
    fn num_arms(&self) -> usize {
        self.params.arms
    }

    fn choose(&mut self, _rng: &mut dyn RngCore) -> usize {
        let arm = self.committed.unwrap_or(self.core.arm);
        self.guard.chose(arm);
        arm
    }

    fn observe(
        &mut self,
        arm: usize,
        reward: u8,
        rng: &mut dyn RngCore,
    ) -> Result<(), ProtocolError> {
        self.guard.observed(arm, reward)?;
        if self.committed.is_some() {
            return Ok(());
        }
        if let CoreEvent::Won { .. } = self.core.observe::<T>(reward, rng) {
            self.committed = Some(self.core.arm);
        }
        Ok(())
    }

    fn exploit_choice(&self) -> usize {
        self.committed.unwrap_or(self.core.arm)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TwoPhaseParams {
    pub base: AspirationParams,
    /// Coarse-phase win threshold M1'.
    pub coarse_win: i64,
    /// Coarse-phase lose magnitude M2'.
    pub coarse_lose: i64,
}

impl TwoPhaseParams {
    /// Paper defaults for the preprocessing thresholds.
    pub fn with_default_coarse(base: AspirationParams) -> Self {
        Self {
            base,
            coarse_win: 5,
            coarse_lose: 1,
        }
    }

    /// Coarse-phase rank decrement, floor(sqrt(m)).
    pub fn coarse_descent(&self) -> usize {
        ((self.base.ranks as f64).sqrt().floor() as usize).max(1)
    }

    pub fn validate(&self) -> Result<(), ProtocolError> {
        self.base.validate()?;
        require(self.coarse_win >= 1, "coarse_win", self.coarse_win, "must be >= 1")?;
        require(
            self.coarse_lose >= 1,
            "coarse_lose",
            self.coarse_lose,
            "must be >= 1",
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Phase {
    Coarse,
    Fine,
}

/// Two-phase aspiration agent: a fast coarse descent (rank steps of
/// floor(sqrt(m)), loose thresholds) locates the right range, then the fine
/// search restarts one coarse step above the first winning level.
#[derive(Debug, Clone)]
pub struct TwoPhaseAspirationAgent<T> {
    params: TwoPhaseParams,
    phase: Phase,
    core: AspirationCore,
    committed: Option<usize>,
    guard: CallGuard,
    _scalar: PhantomData<T>,
}

impl<T: Real> TwoPhaseAspirationAgent<T> {
    pub fn new(params: TwoPhaseParams) -> Result<Self, ProtocolError> {
        params.validate()?;
        let base = params.base;
        Ok(Self {
            core: AspirationCore::new(
                base.arms,
                base.ranks,
                params.coarse_win,
                params.coarse_lose,
                params.coarse_descent(),
                base.ranks,
            ),
            params,
            phase: Phase::Coarse,
            committed: None,
            guard: CallGuard::default(),
            _scalar: PhantomData,
        })
    }

    pub fn params(&self) -> &TwoPhaseParams {
        &self.params
    }

    pub fn in_coarse_phase(&self) -> bool {
        self.phase == Phase::Coarse
    }

    pub fn level(&self) -> usize {
        self.core.level
    }

    pub fn arm_under_test(&self) -> usize {
        self.core.arm
    }

    pub fn counter(&self) -> i64 {
        self.core.counter
    }

    pub fn committed(&self) -> Option<usize> {
        self.committed
    }
}

impl<T: Real> Agent<T> for TwoPhaseAspirationAgent<T> {
    fn num_arms(&self) -> usize {
        self.params.base.arms
    }

    fn choose(&mut self, _rng: &mut dyn RngCore) -> usize {
        let arm = self.committed.unwrap_or(self.core.arm);
        self.guard.chose(arm);
        arm
    }

    fn observe(
        &mut self,
        arm: usize,
        reward: u8,
        rng: &mut dyn RngCore,
    ) -> Result<(), ProtocolError> {
        self.guard.observed(arm, reward)?;
        if self.committed.is_some() {
            return Ok(());
        }
        match self.core.observe::<T>(reward, rng) {
            CoreEvent::None => {}
            CoreEvent::Won { level } => match self.phase {
                Phase::Coarse => {
                    let base = self.params.base;
                    let restart = (level + self.params.coarse_descent()).min(base.ranks);
                    self.core = AspirationCore::new(
                        base.arms, base.ranks, base.win, base.lose, 1, restart,
                    );
                    self.phase = Phase::Fine;
                }
                Phase::Fine => {
                    self.committed = Some(self.core.arm);
                }
            },
        }
        Ok(())
    }

    fn exploit_choice(&self) -> usize {
        self.committed.unwrap_or(self.core.arm)
    }
}
