//! Inter-modal feedback network coding and its baselines as executable
//! transmitter/receiver state machines.

pub mod plan;
pub mod receiver;
pub mod transmitter;
pub mod trial;

use serde::Serialize;

use crate::channel::User;

pub use plan::{guard_slots, plan_scheme, RunKind, RunPlan, Scheme, SchemePlan};
pub use receiver::{DecodeOutcome, Observation, ReceiverState};
pub use transmitter::{Phase, Stage, TransmitterState};
pub use trial::{run_trial, simulate_with, Deadline, ModeErasure, TrialOptions, TrialOutput, TrialStats};

/// Packet `index` (0-based) of `user`'s message.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct PacketId {
    pub user: User,
    pub index: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum PacketStatus {
    Fresh,
    AwaitingDelivery,
    /// Only the unintended receiver has it.
    OverheardOnly,
    DeliveredToIntended,
}

impl PacketStatus {
    pub fn can_become(self, next: PacketStatus) -> bool {
        use PacketStatus::*;
        matches!(
            (self, next),
            (Fresh, AwaitingDelivery)
                | (AwaitingDelivery, OverheardOnly)
                | (AwaitingDelivery, DeliveredToIntended)
                | (OverheardOnly, DeliveredToIntended)
        )
    }
}

/// What the transmitter puts on the channel in one slot. Packet labels travel
/// in the header, so receivers know what they are looking at.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum TransmitAction {
    Idle,
    /// One uncoded packet.
    Raw(PacketId),
    /// XOR of a user-1 packet and a user-2 packet.
    Xor(PacketId, PacketId),
    /// Coded packet of `user`'s stream in erasure-coded run `run`.
    Parity { user: User, run: usize },
}

impl TransmitAction {
    /// Channel symbol for this action given both messages.
    pub fn symbol(&self, messages: &[Vec<bool>; 2]) -> bool {
        let bit = |id: &PacketId| messages[id.user.index()][id.index as usize];
        match self {
            TransmitAction::Raw(id) => bit(id),
            TransmitAction::Xor(a, b) => bit(a) ^ bit(b),
            TransmitAction::Idle | TransmitAction::Parity { .. } => false,
        }
    }
}
