//! Transmitter side of the feedback network-coding protocol.
//!
//! The transmitter works through the plan's runs in order. A feedback run
//! sends user 1's raw packets, then user 2's, each until at least one receiver
//! has it. Packets that only the wrong receiver got go to a virtual queue, and
//! the multicast stage XORs the two queue heads. Feedback arrives with unit
//! delay: the action for slot `t` depends on slot states up to `t − 1` only.

use std::collections::VecDeque;

use serde::Serialize;

use super::plan::{RunKind, RunPlan, SchemePlan};
use super::{PacketId, PacketStatus, TransmitAction};
use crate::channel::{SlotState, User};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Phase {
    Raw1,
    Raw2,
    Multicast,
    FreshTail,
    /// Feedback-free erasure-coded transmission.
    ErasureCoded,
    /// Waiting for the next run's first slot.
    Idle,
    Done,
}

/// Stage within a feedback run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Stage {
    Raw1,
    Raw2,
    Multicast,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum RunState {
    Pending,
    Active,
    Finished,
}

#[derive(Debug, Clone)]
pub struct TransmitterState {
    runs: Vec<RunPlan>,
    offsets: Vec<[usize; 2]>,
    run: usize,
    run_state: RunState,
    stage: Stage,
    /// Raw queues, indexed by intended user.
    raw: [VecDeque<u32>; 2],
    /// `virt[0]` is v_{1|2} (user-1 packets held only by user 2), `virt[1]`
    /// is v_{2|1}.
    virt: [VecDeque<u32>; 2],
    /// Last packet dequeued from each virtual queue in this run. Its
    /// unintended receiver holds it, so it can pad a lone queue head.
    last_virt: [Option<u32>; 2],
    statuses: [Vec<PacketStatus>; 2],
    delivered_in_run: [usize; 2],
    /// Packets of the current run whose status is `OverheardOnly`.
    overheard_in_run: [usize; 2],
    /// Run end slots are ignored when false (deadline removed).
    enforce_slots: bool,
}

impl TransmitterState {
    pub fn new(plan: &SchemePlan) -> Self {
        let offsets = (0..plan.runs.len()).map(|r| plan.run_offsets(r)).collect();
        TransmitterState {
            runs: plan.runs.clone(),
            offsets,
            run: 0,
            run_state: if plan.runs.is_empty() { RunState::Finished } else { RunState::Pending },
            stage: Stage::Raw1,
            raw: Default::default(),
            virt: Default::default(),
            last_virt: [None, None],
            statuses: [
                vec![PacketStatus::Fresh; plan.m1],
                vec![PacketStatus::Fresh; plan.m2],
            ],
            delivered_in_run: [0, 0],
            overheard_in_run: [0, 0],
            enforce_slots: true,
        }
    }

    /// Lets runs overrun their planned last slot, for draining the queues
    /// past the end of the block.
    pub fn without_slot_limits(mut self) -> Self {
        self.enforce_slots = false;
        self
    }

    pub fn phase(&self) -> Phase {
        if self.run >= self.runs.len() {
            return Phase::Done;
        }
        match self.run_state {
            RunState::Pending => Phase::Idle,
            RunState::Finished => {
                if self.run + 1 >= self.runs.len() {
                    Phase::Done
                } else {
                    Phase::Idle
                }
            }
            RunState::Active => match self.runs[self.run].kind {
                RunKind::ErasureCoded => Phase::ErasureCoded,
                RunKind::FreshTail => Phase::FreshTail,
                RunKind::Feedback => match self.stage {
                    Stage::Raw1 => Phase::Raw1,
                    Stage::Raw2 => Phase::Raw2,
                    Stage::Multicast => Phase::Multicast,
                },
            },
        }
    }

    pub fn is_done(&self) -> bool {
        self.phase() == Phase::Done
    }

    /// Index of the run in progress (or the last one once done).
    pub fn current_run(&self) -> usize {
        self.run.min(self.runs.len().saturating_sub(1))
    }

    pub fn stage(&self) -> Stage {
        self.stage
    }

    pub fn raw_queue(&self, user: User) -> &VecDeque<u32> {
        &self.raw[user.index()]
    }

    /// v_{i|ī} for `user = i`.
    pub fn virtual_queue(&self, user: User) -> &VecDeque<u32> {
        &self.virt[user.index()]
    }

    pub fn status(&self, id: PacketId) -> PacketStatus {
        self.statuses[id.user.index()][id.index as usize]
    }

    pub fn statuses(&self, user: User) -> &[PacketStatus] {
        &self.statuses[user.index()]
    }

    pub fn delivered_in_run(&self, user: User) -> usize {
        self.delivered_in_run[user.index()]
    }

    /// Packet index range of `user` within the current run.
    pub fn run_range(&self, user: User) -> std::ops::Range<usize> {
        let r = self.current_run();
        if self.runs.is_empty() {
            return 0..0;
        }
        let lo = self.offsets[r][user.index()];
        lo..lo + self.runs[r].packets[user.index()]
    }

    pub fn run_packets(&self, user: User) -> usize {
        if self.runs.is_empty() {
            0
        } else {
            self.runs[self.current_run()].packets[user.index()]
        }
    }

    fn set_status(&mut self, id: PacketId, next: PacketStatus) -> Result<()> {
        let slot = &mut self.statuses[id.user.index()][id.index as usize];
        if !slot.can_become(next) {
            return Err(Error::ProtocolViolation("non-monotone packet status"));
        }
        let u = id.user.index();
        if *slot == PacketStatus::OverheardOnly {
            self.overheard_in_run[u] -= 1;
        }
        if next == PacketStatus::OverheardOnly {
            self.overheard_in_run[u] += 1;
        }
        *slot = next;
        Ok(())
    }

    /// Brings the run bookkeeping up to date at the start of slot `t`:
    /// abandons a run whose last slot has passed and starts the next one when
    /// its first slot has come.
    pub fn begin_slot(&mut self, t: usize) {
        loop {
            if self.run >= self.runs.len() {
                return;
            }
            let run = &self.runs[self.run];
            match self.run_state {
                RunState::Pending => {
                    if t < run.first_slot && self.enforce_slots {
                        return;
                    }
                    self.start_run();
                }
                RunState::Active => {
                    if self.enforce_slots && t > run.last_slot {
                        self.abandon_run();
                    } else {
                        return;
                    }
                }
                RunState::Finished => {
                    if self.run + 1 >= self.runs.len() {
                        return;
                    }
                    self.run += 1;
                    self.run_state = RunState::Pending;
                }
            }
        }
    }

    fn start_run(&mut self) {
        let run = self.runs[self.run].clone();
        let off = self.offsets[self.run];
        self.run_state = RunState::Active;
        self.stage = Stage::Raw1;
        self.delivered_in_run = [0, 0];
        self.overheard_in_run = [0, 0];
        self.last_virt = [None, None];
        if run.kind == RunKind::ErasureCoded {
            self.settle();
            return;
        }
        for (u, (&lo, &k)) in off.iter().zip(&run.packets).enumerate() {
            self.raw[u] = (lo..lo + k).map(|i| i as u32).collect();
            self.virt[u].clear();
            self.statuses[u][lo..lo + k].fill(PacketStatus::AwaitingDelivery);
        }
        self.settle();
    }

    fn abandon_run(&mut self) {
        for u in 0..2 {
            self.raw[u].clear();
            self.virt[u].clear();
        }
        self.run_state = RunState::Finished;
    }

    /// Advances the stage past empty queues. Without slot limits an
    /// erasure-coded run ends once feedback shows both users hold enough
    /// coded packets.
    fn settle(&mut self) {
        if self.run_state != RunState::Active {
            return;
        }
        if self.runs[self.run].kind == RunKind::ErasureCoded {
            if !self.enforce_slots && self.coded_satisfied() == [true, true] {
                self.run_state = RunState::Finished;
            }
            return;
        }
        loop {
            match self.stage {
                Stage::Raw1 if self.raw[0].is_empty() => self.stage = Stage::Raw2,
                Stage::Raw2 if self.raw[1].is_empty() => self.stage = Stage::Multicast,
                Stage::Multicast if self.virt[0].is_empty() && self.virt[1].is_empty() => {
                    self.run_state = RunState::Finished;
                    return;
                }
                _ => return,
            }
        }
    }

    fn coded_satisfied(&self) -> [bool; 2] {
        let need = self.runs[self.run].packets;
        [self.delivered_in_run[0] >= need[0], self.delivered_in_run[1] >= need[1]]
    }

    /// Action for slot `t`. Must be preceded by [`Self::begin_slot`].
    pub fn tx_next(&self, t: usize) -> Result<TransmitAction> {
        let id = |user: User, idx: u32| PacketId { user, index: idx };
        match self.phase() {
            Phase::Done => Err(Error::ProtocolViolation("transmit requested after completion")),
            Phase::Idle => Ok(TransmitAction::Idle),
            Phase::ErasureCoded => {
                let run = &self.runs[self.run];
                let mut user = if t.saturating_sub(run.first_slot).is_multiple_of(2) { User::One } else { User::Two };
                if !self.enforce_slots && self.coded_satisfied()[user.index()] {
                    user = user.other();
                }
                Ok(TransmitAction::Parity { user, run: self.run })
            }
            Phase::Raw1 | Phase::Raw2 | Phase::Multicast | Phase::FreshTail => match self.stage {
                Stage::Raw1 => Ok(TransmitAction::Raw(id(User::One, self.raw[0][0]))),
                Stage::Raw2 => Ok(TransmitAction::Raw(id(User::Two, self.raw[1][0]))),
                Stage::Multicast => {
                    let a = self.virt[0].front().copied().or(self.last_virt[0]);
                    let b = self.virt[1].front().copied().or(self.last_virt[1]);
                    match (self.virt[0].is_empty(), self.virt[1].is_empty(), a, b) {
                        (true, true, ..) => Err(Error::ProtocolViolation("multicast with empty queues")),
                        (_, _, Some(a), Some(b)) => Ok(TransmitAction::Xor(id(User::One, a), id(User::Two, b))),
                        (false, _, Some(a), None) => Ok(TransmitAction::Raw(id(User::One, a))),
                        (_, false, None, Some(b)) => Ok(TransmitAction::Raw(id(User::Two, b))),
                        _ => Err(Error::ProtocolViolation("inconsistent virtual queues")),
                    }
                }
            },
        }
    }

    /// Applies the slot-state feedback for the slot in which `sent` went out.
    pub fn tx_feedback(&mut self, slot: SlotState, sent: TransmitAction) -> Result<()> {
        if self.run_state != RunState::Active {
            return Ok(());
        }
        match sent {
            TransmitAction::Idle => {}
            TransmitAction::Parity { user, .. } => {
                if slot.get(user) {
                    self.delivered_in_run[user.index()] += 1;
                }
            }
            TransmitAction::Raw(id) => {
                let u = id.user.index();
                let from_raw = self.raw[u].front() == Some(&id.index);
                let from_virt = !from_raw && self.virt[u].front() == Some(&id.index);
                if !from_raw && !from_virt {
                    return Err(Error::ProtocolViolation("feedback for a packet not at a queue head"));
                }
                if slot.get(id.user) {
                    self.set_status(id, PacketStatus::DeliveredToIntended)?;
                    self.delivered_in_run[u] += 1;
                    if from_raw {
                        self.raw[u].pop_front();
                    } else {
                        self.last_virt[u] = self.virt[u].pop_front();
                    }
                } else if from_raw && slot.get(id.user.other()) {
                    self.set_status(id, PacketStatus::OverheardOnly)?;
                    self.raw[u].pop_front();
                    self.virt[u].push_back(id.index);
                }
            }
            TransmitAction::Xor(a, b) => {
                let mut pending = [false, false];
                for (u, id) in [(0, a), (1, b)] {
                    pending[u] = self.virt[u].front() == Some(&id.index);
                    if !pending[u] && self.last_virt[u] != Some(id.index) {
                        return Err(Error::ProtocolViolation("feedback for an XOR not at the queue heads"));
                    }
                }
                if !pending[0] && !pending[1] {
                    return Err(Error::ProtocolViolation("XOR carries no pending packet"));
                }
                for (u, id) in [(0, a), (1, b)] {
                    if pending[u] && slot.get(id.user) {
                        self.set_status(id, PacketStatus::DeliveredToIntended)?;
                        self.delivered_in_run[u] += 1;
                        self.last_virt[u] = self.virt[u].pop_front();
                    }
                }
            }
        }
        self.settle();
        Ok(())
    }

    /// Checks queue/status consistency for the active run; returns a
    /// description of the first violation found.
    pub fn check_invariants(&self) -> Option<String> {
        if self.run_state != RunState::Active || self.runs[self.run].kind == RunKind::ErasureCoded {
            return None;
        }
        for user in User::BOTH {
            let u = user.index();
            let range = self.run_range(user);
            let total = self.delivered_in_run[u] + self.virt[u].len() + self.raw[u].len();
            if total != range.len() {
                return Some(format!("conservation broken for {user:?}: {total} != {}", range.len()));
            }
            if self.overheard_in_run[u] != self.virt[u].len() {
                return Some(format!(
                    "virtual queue of {user:?} holds {} but {} overheard",
                    self.virt[u].len(),
                    self.overheard_in_run[u]
                ));
            }
            // Statuses differ between the two queues, so these checks also
            // keep them disjoint.
            if self.virt[u].iter().any(|&i| self.statuses[u][i as usize] != PacketStatus::OverheardOnly) {
                return Some(format!("non-overheard packet in virtual queue of {user:?}"));
            }
            if self.raw[u].iter().any(|&i| self.statuses[u][i as usize] != PacketStatus::AwaitingDelivery) {
                return Some(format!("raw queue of {user:?} holds a packet not awaiting delivery"));
            }
        }
        None
    }
}
