//! Receiver side: collect own packets, overheard packets and XOR
//! observations, then decode at the end of the block.

use std::ops::Range;

use super::plan::{RunKind, SchemePlan};
use super::TransmitAction;
use crate::channel::{SlotState, User};

#[derive(Debug, Clone)]
struct CodedStream {
    run: usize,
    needed: usize,
    received: usize,
}

#[derive(Debug, Clone)]
pub struct ReceiverState {
    user: User,
    received_own: Vec<Option<bool>>,
    overheard: Vec<Option<bool>>,
    /// `(own index, other-user index, observed XOR)`.
    coded_observations: Vec<(u32, u32, bool)>,
    /// Own packets recovered so far, directly or through an XOR.
    known_own: Vec<bool>,
    streams: Vec<CodedStream>,
    /// Own packet ranges carried by erasure-coded runs.
    stream_ranges: Vec<Range<usize>>,
}

/// What one slot told the receiver.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Observation {
    Erased,
    Idle,
    Own { new: bool },
    Overheard,
    /// XOR received. `own_was_known` when its own-user constituent had
    /// already been recovered; `resolved_new` when it revealed a previously
    /// unknown own packet.
    Coded { own_was_known: bool, resolved_new: bool },
    Parity,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecodeOutcome {
    pub success: bool,
    /// Bits recovered through uncoded and XOR receptions.
    pub recovered: Vec<Option<bool>>,
    /// Own index ranges recovered by the erasure-coded streams. These carry
    /// no bits: stream decoding is modelled as an ideal MDS code.
    pub stream_decoded: Vec<Range<usize>>,
}

impl ReceiverState {
    pub fn new(user: User, plan: &SchemePlan) -> Self {
        let m_own = plan.message_len(user.index());
        let m_other = plan.message_len(user.other().index());
        let mut streams = Vec::new();
        let mut stream_ranges = Vec::new();
        for (r, run) in plan.runs.iter().enumerate() {
            if run.kind == RunKind::ErasureCoded {
                let lo = plan.run_offsets(r)[user.index()];
                let k = run.packets[user.index()];
                streams.push(CodedStream { run: r, needed: k, received: 0 });
                stream_ranges.push(lo..lo + k);
            }
        }
        ReceiverState {
            user,
            received_own: vec![None; m_own],
            overheard: vec![None; m_other],
            coded_observations: Vec::new(),
            known_own: vec![false; m_own],
            streams,
            stream_ranges,
        }
    }

    pub fn user(&self) -> User {
        self.user
    }

    pub fn received_own(&self) -> &[Option<bool>] {
        &self.received_own
    }

    pub fn overheard(&self) -> &[Option<bool>] {
        &self.overheard
    }

    pub fn coded_observations(&self) -> &[(u32, u32, bool)] {
        &self.coded_observations
    }

    /// Own packet `index` can be recovered from what has arrived so far.
    pub fn is_known(&self, index: u32) -> bool {
        self.known_own[index as usize]
    }

    pub fn rx_observe(&mut self, slot: SlotState, sent: TransmitAction, symbol: bool) -> Observation {
        if !slot.get(self.user) {
            return Observation::Erased;
        }
        match sent {
            TransmitAction::Idle => Observation::Idle,
            TransmitAction::Raw(id) if id.user == self.user => {
                let i = id.index as usize;
                let new = !self.known_own[i];
                self.received_own[i] = Some(symbol);
                self.known_own[i] = true;
                Observation::Own { new }
            }
            TransmitAction::Raw(id) => {
                self.overheard[id.index as usize] = Some(symbol);
                Observation::Overheard
            }
            TransmitAction::Xor(a, b) => {
                let (own, other) = if a.user == self.user { (a, b) } else { (b, a) };
                self.coded_observations.push((own.index, other.index, symbol));
                let resolvable = self.overheard[other.index as usize].is_some();
                let own_was_known = self.known_own[own.index as usize];
                if resolvable {
                    self.known_own[own.index as usize] = true;
                }
                Observation::Coded { own_was_known, resolved_new: resolvable && !own_was_known }
            }
            TransmitAction::Parity { user, run } => {
                if user == self.user {
                    if let Some(s) = self.streams.iter_mut().find(|s| s.run == run) {
                        s.received += 1;
                    }
                }
                Observation::Parity
            }
        }
    }

    /// End-of-block decoding: direct receptions first, then one substitution
    /// pass over the XOR observations using the overheard packets.
    pub fn rx_decode(&self, m: usize) -> DecodeOutcome {
        let mut recovered = self.received_own.clone();
        recovered.resize(m, None);
        for &(own, other, x) in &self.coded_observations {
            let slot = &mut recovered[own as usize];
            if slot.is_none() {
                if let Some(o) = self.overheard[other as usize] {
                    *slot = Some(x ^ o);
                }
            }
        }
        let mut stream_decoded = Vec::new();
        let mut streams_ok = true;
        for (s, range) in self.streams.iter().zip(&self.stream_ranges) {
            if s.received >= s.needed {
                stream_decoded.push(range.clone());
            } else {
                streams_ok = false;
            }
        }
        let in_stream = |i: usize| self.stream_ranges.iter().any(|r| r.contains(&i));
        let feedback_ok = recovered.iter().enumerate().all(|(i, b)| b.is_some() || in_stream(i));
        DecodeOutcome { success: streams_ok && feedback_ok && m == self.received_own.len(), recovered, stream_decoded }
    }
}
