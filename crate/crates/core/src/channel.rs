//! Multi-modal channel description and per-slot erasure sampling.
//!
//! A block of `n` slots is split into a first non-transient mode A, a short
//! transient mode T and a second non-transient mode B. Within each mode both
//! links are erased independently with the mode's probability.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum User {
    One,
    Two,
}

impl User {
    pub const BOTH: [User; 2] = [User::One, User::Two];

    pub fn other(self) -> User {
        match self {
            User::One => User::Two,
            User::Two => User::One,
        }
    }

    pub fn index(self) -> usize {
        match self {
            User::One => 0,
            User::Two => 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ModeKind {
    NonTransientA,
    Transient,
    NonTransientB,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Mode {
    pub kind: ModeKind,
    pub erasure_prob: f64,
    pub length: usize,
}

/// Ordered A, T, B modes covering a block of `n` slots.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModeSchedule {
    modes: [Mode; 3],
    n: usize,
}

fn check_prob(name: &'static str, value: f64) -> Result<f64> {
    if (0.0..=1.0).contains(&value) {
        Ok(value)
    } else {
        Err(Error::InvalidProbability { name, value })
    }
}

/// `⌊eta·n⌋`, snapping values within rounding noise of an integer so that
/// e.g. `32/35 · 35` yields 32 rather than 31.
pub fn floor_fraction(eta: f64, n: usize) -> usize {
    let x = eta * n as f64;
    let r = x.round();
    if (x - r).abs() <= 1e-9 * (n as f64).max(1.0) {
        r as usize
    } else {
        x.floor() as usize
    }
}

/// Default transient length `⌈n^{2/3}⌉`.
pub fn default_transient_len(n: usize) -> usize {
    let x = (n as f64).powf(2.0 / 3.0);
    let r = x.round();
    if (x - r).abs() < 1e-9 {
        r as usize
    } else {
        x.ceil() as usize
    }
}

/// Builds the canonical A–T–B schedule with `n_A = ⌊eta·n⌋`, `n_T = n_t` and
/// mode B taking the remainder.
pub fn build_schedule(
    n: usize,
    eta: f64,
    n_t: usize,
    delta_a: f64,
    delta_t: f64,
    delta_b: f64,
) -> Result<ModeSchedule> {
    if n == 0 {
        return Err(Error::EmptyBlock);
    }
    if !(0.0..=1.0).contains(&eta) {
        return Err(Error::InvalidRatio { name: "eta", value: eta });
    }
    let delta_a = check_prob("delta_a", delta_a)?;
    let delta_t = check_prob("delta_t", delta_t)?;
    let delta_b = check_prob("delta_b", delta_b)?;
    let n_a = floor_fraction(eta, n);
    if n_a + n_t > n {
        return Err(Error::ScheduleOverflow { n_a, n_t, n });
    }
    ModeSchedule::new(n_a, n_t, n - n_a - n_t, [delta_a, delta_t, delta_b])
}

impl ModeSchedule {
    /// Schedule with explicit mode lengths and erasure probabilities
    /// `[delta_a, delta_t, delta_b]`.
    pub fn new(n_a: usize, n_t: usize, n_b: usize, probs: [f64; 3]) -> Result<Self> {
        let n = n_a + n_t + n_b;
        if n == 0 {
            return Err(Error::EmptyBlock);
        }
        let [da, dt, db] = probs;
        let modes = [
            Mode { kind: ModeKind::NonTransientA, erasure_prob: check_prob("delta_a", da)?, length: n_a },
            Mode { kind: ModeKind::Transient, erasure_prob: check_prob("delta_t", dt)?, length: n_t },
            Mode { kind: ModeKind::NonTransientB, erasure_prob: check_prob("delta_b", db)?, length: n_b },
        ];
        Ok(ModeSchedule { modes, n })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn modes(&self) -> &[Mode; 3] {
        &self.modes
    }

    pub fn mode(&self, kind: ModeKind) -> &Mode {
        match kind {
            ModeKind::NonTransientA => &self.modes[0],
            ModeKind::Transient => &self.modes[1],
            ModeKind::NonTransientB => &self.modes[2],
        }
    }

    pub fn n_a(&self) -> usize {
        self.modes[0].length
    }

    pub fn n_t(&self) -> usize {
        self.modes[1].length
    }

    pub fn n_b(&self) -> usize {
        self.modes[2].length
    }

    fn n_b_prob(&self) -> f64 {
        self.modes[2].erasure_prob
    }

    pub fn lengths(&self) -> (usize, usize, usize) {
        (self.n_a(), self.n_t(), self.n_b())
    }

    pub fn probs(&self) -> (f64, f64, f64) {
        (self.modes[0].erasure_prob, self.modes[1].erasure_prob, self.modes[2].erasure_prob)
    }

    /// Mode active at slot `t` (1-based).
    pub fn mode_at(&self, t: usize) -> Result<ModeKind> {
        if t == 0 || t > self.n {
            return Err(Error::SlotOutOfRange { t, n: self.n });
        }
        Ok(if t <= self.n_a() {
            ModeKind::NonTransientA
        } else if t <= self.n_a() + self.n_t() {
            ModeKind::Transient
        } else {
            ModeKind::NonTransientB
        })
    }

    pub fn erasure_prob_at(&self, t: usize) -> Result<f64> {
        Ok(self.mode(self.mode_at(t)?).erasure_prob)
    }
}

/// Per-slot link states; `true` means the receiver got the symbol.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct SlotState {
    pub s1: bool,
    pub s2: bool,
}

impl SlotState {
    pub const fn new(s1: bool, s2: bool) -> Self {
        SlotState { s1, s2 }
    }

    pub fn get(self, user: User) -> bool {
        match user {
            User::One => self.s1,
            User::Two => self.s2,
        }
    }
}

impl From<(u8, u8)> for SlotState {
    fn from((s1, s2): (u8, u8)) -> Self {
        SlotState { s1: s1 != 0, s2: s2 != 0 }
    }
}

/// Anything that can answer "what happened in slot `t`".
pub trait SlotSource {
    fn slot(&mut self, t: usize) -> SlotState;
}

/// Lazy, seeded sampler: the state of slot `t` is a pure function of
/// `(seed, t, user)`, regardless of query order.
#[derive(Debug, Clone)]
pub struct ChannelSampler {
    schedule: ModeSchedule,
    rng: ChaCha8Rng,
    next_t: usize,
    extend: bool,
}

// Four 32-bit words per slot: one u64 per user.
const WORDS_PER_SLOT: u128 = 4;

impl ChannelSampler {
    pub fn new(schedule: ModeSchedule, seed: u64) -> Self {
        let rng = ChaCha8Rng::seed_from_u64(seed);
        ChannelSampler { schedule, rng, next_t: 1, extend: false }
    }

    /// Keeps sampling past the end of the block with mode B's statistics.
    pub fn extended(mut self) -> Self {
        self.extend = true;
        self
    }

    pub fn schedule(&self) -> &ModeSchedule {
        &self.schedule
    }

    pub fn sample_slot(&mut self, t: usize) -> Result<SlotState> {
        let delta = if self.extend && t > self.schedule.n() {
            self.schedule.n_b_prob()
        } else {
            self.schedule.erasure_prob_at(t)?
        };
        if t != self.next_t {
            self.rng.set_word_pos((t as u128 - 1) * WORDS_PER_SLOT);
        }
        self.next_t = t + 1;
        let u1: f64 = self.rng.random();
        let u2: f64 = self.rng.random();
        Ok(SlotState { s1: u1 >= delta, s2: u2 >= delta })
    }
}

impl SlotSource for ChannelSampler {
    fn slot(&mut self, t: usize) -> SlotState {
        self.sample_slot(t).expect("slot index within schedule")
    }
}

/// Fixed realization, for tests and hand traces. Slots past the end of the
/// script are fully erased.
#[derive(Debug, Clone, Default)]
pub struct ScriptedChannel {
    slots: Vec<SlotState>,
}

impl ScriptedChannel {
    pub fn new(slots: Vec<SlotState>) -> Self {
        ScriptedChannel { slots }
    }
}

impl SlotSource for ScriptedChannel {
    fn slot(&mut self, t: usize) -> SlotState {
        self.slots.get(t.wrapping_sub(1)).copied().unwrap_or_default()
    }
}
