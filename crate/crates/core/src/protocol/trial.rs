//! One block of transmission: transmitter, channel and both receivers run
//! slot by slot with unit-delay feedback.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::plan::SchemePlan;
use super::receiver::{Observation, ReceiverState};
use super::transmitter::{Phase, TransmitterState};
use super::TransmitAction;
use crate::channel::{build_schedule, ChannelSampler, ModeKind, ModeSchedule, SlotSource, User};
use crate::error::Result;
use crate::rate::ModeParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Deadline {
    /// Stop after the `n` slots of the block.
    Block,
    /// Keep going until every queue drains, up to `max_slots`.
    Removed { max_slots: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TrialOptions {
    pub deadline: Deadline,
    /// Verify queue/status invariants after every slot.
    pub check_invariants: bool,
    pub record_actions: bool,
}

impl Default for TrialOptions {
    fn default() -> Self {
        TrialOptions { deadline: Deadline::Block, check_invariants: false, record_actions: false }
    }
}

/// Observed erasures within one mode.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModeErasure {
    pub kind: ModeKind,
    pub slots: usize,
    pub erased: [usize; 2],
}

impl ModeErasure {
    pub fn frequency(&self, user: User) -> f64 {
        if self.slots == 0 {
            f64::NAN
        } else {
            self.erased[user.index()] as f64 / self.slots as f64
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialStats {
    pub n: usize,
    pub decode_ok: [bool; 2],
    /// Message bits credited to each user: the full message on success,
    /// zero otherwise.
    pub bits_delivered: [usize; 2],
    pub message_len: [usize; 2],
    /// Last slot in which the transmitter was active.
    pub slots_used: usize,
    /// `(phase, first slot)` for every phase change.
    pub phase_boundaries: Vec<(Phase, usize)>,
    pub empirical_erasure: Vec<ModeErasure>,
    /// Slots spent in the raw stages of the first run.
    pub raw_slots: usize,
    /// Virtual queue sizes when the first run entered multicast.
    pub multicast_backlog: [usize; 2],
    /// XOR receptions carrying an unknown own packet that could not be
    /// resolved with the receiver's side information.
    pub useless_xor_receptions: usize,
    pub invariant_violations: Vec<String>,
    /// Recovered bits that disagree with the transmitted message.
    pub bit_errors: usize,
}

impl TrialStats {
    pub fn sum_rate(&self) -> f64 {
        (self.bits_delivered[0] + self.bits_delivered[1]) as f64 / self.n as f64
    }

    pub fn first_slot_of(&self, phase: Phase) -> Option<usize> {
        self.phase_boundaries.iter().find(|(p, _)| *p == phase).map(|&(_, t)| t)
    }
}

#[derive(Debug, Clone)]
pub struct TrialOutput {
    pub stats: TrialStats,
    pub actions: Option<Vec<TransmitAction>>,
}

fn random_message(rng: &mut ChaCha8Rng, m: usize) -> Vec<bool> {
    (0..m).map(|_| rng.random()).collect()
}

/// Runs one trial of `plan` over a freshly sampled channel.
///
/// The transmitter never looks at `n_t` or `delta_t`; only the channel does.
pub fn run_trial(
    p: &ModeParams<f64>,
    n: usize,
    n_t: usize,
    delta_t: f64,
    plan: &SchemePlan,
    seed: u64,
) -> Result<TrialStats> {
    let schedule = build_schedule(n, p.eta, n_t, p.delta_a, delta_t, p.delta_b)?;
    let mut source = ChannelSampler::new(schedule.clone(), seed);
    let messages = messages_for(plan, seed);
    Ok(simulate_with(plan, &schedule, &mut source, messages, &TrialOptions::default())?.stats)
}

/// Random messages for `plan`, drawn from a stream independent of the
/// channel's.
pub fn messages_for(plan: &SchemePlan, seed: u64) -> [Vec<bool>; 2] {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(1);
    let m1 = random_message(&mut rng, plan.m1);
    let m2 = random_message(&mut rng, plan.m2);
    [m1, m2]
}

/// Core slot loop over an arbitrary channel realization.
pub fn simulate_with<S: SlotSource>(
    plan: &SchemePlan,
    schedule: &ModeSchedule,
    source: &mut S,
    messages: [Vec<bool>; 2],
    opts: &TrialOptions,
) -> Result<TrialOutput> {
    let n = schedule.n();
    let mut tx = TransmitterState::new(plan);
    let limit = match opts.deadline {
        Deadline::Block => n,
        Deadline::Removed { max_slots } => {
            tx = tx.without_slot_limits();
            max_slots.max(n)
        }
    };
    let mut rx = [ReceiverState::new(User::One, plan), ReceiverState::new(User::Two, plan)];

    let mut empirical: Vec<ModeErasure> = schedule
        .modes()
        .iter()
        .map(|m| ModeErasure { kind: m.kind, slots: 0, erased: [0, 0] })
        .collect();
    let mut phase_boundaries = Vec::new();
    let mut actions = opts.record_actions.then(Vec::new);
    let mut violations = Vec::new();
    let mut useless_xor = 0;
    let mut raw_slots = 0;
    let mut multicast_backlog = [0, 0];
    let mut slots_used = 0;

    for t in 1..=limit {
        tx.begin_slot(t);
        let phase = tx.phase();
        if phase_boundaries.last().is_none_or(|&(p, _)| p != phase) {
            if phase == Phase::Multicast && tx.current_run() == 0 && multicast_backlog == [0, 0] {
                multicast_backlog = [tx.virtual_queue(User::One).len(), tx.virtual_queue(User::Two).len()];
            }
            phase_boundaries.push((phase, t));
        }
        if phase == Phase::Done {
            break;
        }
        let action = tx.tx_next(t)?;
        if tx.current_run() == 0 && matches!(phase, Phase::Raw1 | Phase::Raw2) {
            raw_slots += 1;
        }
        let slot = source.slot(t);
        if t <= n {
            let e = &mut empirical[mode_index(schedule.mode_at(t)?)];
            e.slots += 1;
            e.erased[0] += !slot.s1 as usize;
            e.erased[1] += !slot.s2 as usize;
        }
        let symbol = action.symbol(&messages);
        for r in rx.iter_mut() {
            let obs = r.rx_observe(slot, action, symbol);
            if obs == (Observation::Coded { own_was_known: false, resolved_new: false }) {
                useless_xor += 1;
            }
        }
        tx.tx_feedback(slot, action)?;
        if opts.check_invariants {
            if let Some(v) = tx.check_invariants() {
                violations.push(format!("slot {t}: {v}"));
            }
        }
        if let Some(a) = actions.as_mut() {
            a.push(action);
        }
        if action != TransmitAction::Idle {
            slots_used = t;
        }
    }

    let mut decode_ok = [false, false];
    let mut bits_delivered = [0, 0];
    let mut bit_errors = 0;
    for user in User::BOTH {
        let u = user.index();
        let m = plan.message_len(u);
        let out = rx[u].rx_decode(m);
        let errors = out
            .recovered
            .iter()
            .zip(&messages[u])
            .filter(|(got, want)| got.is_some_and(|g| g != **want))
            .count();
        bit_errors += errors;
        decode_ok[u] = out.success && errors == 0;
        bits_delivered[u] = if decode_ok[u] { m } else { 0 };
    }

    let stats = TrialStats {
        n,
        decode_ok,
        bits_delivered,
        message_len: [plan.m1, plan.m2],
        slots_used,
        phase_boundaries,
        empirical_erasure: empirical,
        raw_slots,
        multicast_backlog,
        useless_xor_receptions: useless_xor,
        invariant_violations: violations,
        bit_errors,
    };
    Ok(TrialOutput { stats, actions })
}

fn mode_index(kind: ModeKind) -> usize {
    match kind {
        ModeKind::NonTransientA => 0,
        ModeKind::Transient => 1,
        ModeKind::NonTransientB => 2,
    }
}
