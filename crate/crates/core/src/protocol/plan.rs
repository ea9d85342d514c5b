//! Per-trial message sizing for each coding strategy.

use serde::{Deserialize, Serialize};

use crate::channel::floor_fraction;
use crate::error::{Error, Result};
use crate::rate::{alpha_star, thm2_holds, unimodal_feedback_sum, ModeParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Scheme {
    InterModal,
    IntraModal,
    NoFeedback,
}

impl Scheme {
    pub fn short_name(self) -> &'static str {
        match self {
            Scheme::InterModal => "inter",
            Scheme::IntraModal => "intra",
            Scheme::NoFeedback => "nofb",
        }
    }
}

/// How a run moves its packets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RunKind {
    /// Raw phases for user 1 then user 2, then XOR multicast of overheard
    /// packets.
    Feedback,
    /// Same three phases over fresh packets after the main multicast backlog
    /// has drained.
    FreshTail,
    /// Feedback-free erasure-coded streams, slots alternating between users.
    /// A user decodes once it has collected as many coded packets as the run
    /// carries for it.
    ErasureCoded,
}

/// One self-contained coding run inside the block.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunPlan {
    pub kind: RunKind,
    /// Packets per user carried by this run.
    pub packets: [usize; 2],
    /// Earliest slot (1-based) at which the run may start.
    pub first_slot: usize,
    /// Last slot the run may use; later slots abandon it.
    pub last_slot: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SchemePlan {
    pub scheme: Scheme,
    /// Message length of user 1, in packets.
    pub m1: usize,
    /// Message length of user 2, in packets.
    pub m2: usize,
    /// Raw-phase fraction of the block (inter-modal only).
    pub alpha: Option<f64>,
    /// Concentration guard in slots.
    pub guard: usize,
    pub runs: Vec<RunPlan>,
}

impl SchemePlan {
    pub fn message_len(&self, user: usize) -> usize {
        [self.m1, self.m2][user]
    }

    /// First packet index of each user within run `r`.
    pub fn run_offsets(&self, r: usize) -> [usize; 2] {
        let mut off = [0, 0];
        for run in &self.runs[..r] {
            off[0] += run.packets[0];
            off[1] += run.packets[1];
        }
        off
    }
}

/// `⌈c·x^{2/3}⌉`, zero for `c = 0`.
pub fn guard_slots(guard_coeff: f64, x: usize) -> usize {
    if guard_coeff <= 0.0 || x == 0 {
        return 0;
    }
    let g = guard_coeff * (x as f64).powf(2.0 / 3.0);
    if (g - g.round()).abs() < 1e-9 {
        g.round() as usize
    } else {
        g.ceil() as usize
    }
}

fn floor_nonneg(x: f64) -> usize {
    if x.is_finite() && x > 0.0 {
        // Absorb rounding noise on exact integers such as 0.4375·32000/2.
        (x + 1e-9).floor() as usize
    } else {
        0
    }
}

/// Sizes the messages for `scheme` over a block of `n` slots.
///
/// The plan only uses the non-transient description `(δ_A, δ_B, η)`; any
/// transient slots are treated as part of mode B.
pub fn plan_scheme(p: &ModeParams<f64>, n: usize, scheme: Scheme, guard_coeff: f64) -> Result<SchemePlan> {
    if n == 0 {
        return Err(Error::EmptyBlock);
    }
    if !(guard_coeff >= 0.0 && guard_coeff.is_finite()) {
        return Err(Error::InvalidRatio { name: "guard_coeff", value: guard_coeff });
    }
    let p = ModeParams::new(p.delta_a, p.delta_b, p.eta)?;
    let n_a = floor_fraction(p.eta, n);
    let n_b = n - n_a;
    match scheme {
        Scheme::InterModal => plan_intermodal(&p, n, n_a, guard_coeff),
        Scheme::IntraModal => Ok(plan_intramodal(&p, n, n_a, n_b, guard_coeff)),
        Scheme::NoFeedback => Ok(plan_nofeedback(&p, n, n_a, n_b, guard_coeff)),
    }
}

fn plan_intermodal(p: &ModeParams<f64>, n: usize, n_a: usize, guard_coeff: f64) -> Result<SchemePlan> {
    if p.delta_a < p.delta_b {
        return Err(Error::Unsupported("inter-modal coding requires delta_a >= delta_b"));
    }
    if p.delta_b >= 1.0 {
        return Err(Error::Unsupported("inter-modal coding requires delta_b < 1"));
    }
    let da = p.delta_a;
    let guard = guard_slots(guard_coeff, n);
    let alpha = alpha_star(p).map_or(p.eta, |a| a.min(p.eta));
    let raw = floor_nonneg((1.0 - da * da) * (alpha * n as f64 - guard as f64) / 2.0);

    let mut runs = vec![RunPlan { kind: RunKind::Feedback, packets: [raw, raw], first_slot: 1, last_slot: n }];
    let mut tail = 0;
    if !thm2_holds(p) {
        // Expected backlog per virtual queue and the mode-B time to drain it.
        let overheard = if da < 1.0 { raw as f64 * da / (1.0 + da) } else { 0.0 };
        let drain = (overheard / (1.0 - p.delta_b)).ceil() as usize;
        // The raw phases already end `guard` slots early on average; that
        // slack covers the whole block, so the tail is not shrunk again.
        let tail_slots = n.saturating_sub(n_a + drain);
        tail = floor_nonneg(tail_slots as f64 * unimodal_feedback_sum(p.delta_b) / 2.0);
        if tail > 0 {
            runs.push(RunPlan { kind: RunKind::FreshTail, packets: [tail, tail], first_slot: 1, last_slot: n });
        }
    }
    Ok(SchemePlan {
        scheme: Scheme::InterModal,
        m1: raw + tail,
        m2: raw + tail,
        alpha: Some(alpha),
        guard,
        runs,
    })
}

fn plan_intramodal(p: &ModeParams<f64>, n: usize, n_a: usize, n_b: usize, guard_coeff: f64) -> SchemePlan {
    let size = |len: usize, delta: f64| {
        let g = guard_slots(guard_coeff, len);
        floor_nonneg(len.saturating_sub(g) as f64 * unimodal_feedback_sum(delta) / 2.0)
    };
    let ka = size(n_a, p.delta_a);
    let kb = size(n_b, p.delta_b);
    let runs = vec![
        RunPlan { kind: RunKind::Feedback, packets: [ka, ka], first_slot: 1, last_slot: n_a },
        RunPlan { kind: RunKind::Feedback, packets: [kb, kb], first_slot: n_a + 1, last_slot: n },
    ];
    SchemePlan {
        scheme: Scheme::IntraModal,
        m1: ka + kb,
        m2: ka + kb,
        alpha: None,
        guard: guard_slots(guard_coeff, n_a) + guard_slots(guard_coeff, n_b),
        runs,
    }
}

fn plan_nofeedback(p: &ModeParams<f64>, n: usize, n_a: usize, n_b: usize, guard_coeff: f64) -> SchemePlan {
    let mut guard = 0;
    let mut run = |len: usize, delta: f64, first: usize| {
        // User 1 takes the odd slots of the run, user 2 the even ones. Each
        // stream keeps its own ⌈c·s^{2/3}⌉ slots spare: a guard scaled to the
        // whole block is too thin for a short mode.
        let slots = [len.div_ceil(2), len / 2];
        let k = slots.map(|s| {
            let g = guard_slots(guard_coeff, s);
            guard += g;
            floor_nonneg((1.0 - delta) * s.saturating_sub(g) as f64)
        });
        RunPlan { kind: RunKind::ErasureCoded, packets: k, first_slot: first, last_slot: first + len - 1 }
    };
    let runs = vec![run(n_a, p.delta_a, 1), run(n_b, p.delta_b, n_a + 1)];
    debug_assert_eq!(runs[1].last_slot, n);
    SchemePlan {
        scheme: Scheme::NoFeedback,
        m1: runs[0].packets[0] + runs[1].packets[0],
        m2: runs[0].packets[1] + runs[1].packets[1],
        alpha: None,
        guard,
        runs,
    }
}
