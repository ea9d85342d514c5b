//! Two-user broadcast packet erasure channel whose erasure statistics switch
//! between two modes within a block: rate regions, the inter-modal feedback
//! coding protocol, and a Monte Carlo harness around it.
//!
//! The rate analysis is generic over [`Scalar`]; the aliases below fix the
//! common instantiations.

pub mod channel;
pub mod error;
pub mod montecarlo;
pub mod protocol;
pub mod rate;
pub mod scalar;

pub use channel::{ChannelSampler, ModeKind, ModeSchedule, SlotSource, SlotState, User};
pub use error::{Error, Result};
pub use montecarlo::{simulate, AggregateStats, SimConfig};
pub use protocol::{plan_scheme, Scheme, SchemePlan};
pub use rate::{ModeParams, RatePair, RateRegion};
pub use scalar::{Rational, Scalar};

pub type Params = ModeParams<f64>;
pub type Params32 = ModeParams<f32>;
pub type ExactParams = ModeParams<Rational>;
pub type Region = RateRegion<f64>;
pub type ExactRegion = RateRegion<Rational>;
