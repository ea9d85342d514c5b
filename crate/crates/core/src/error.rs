use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{name} = {value} is not a probability in [0, 1]")]
    InvalidProbability { name: &'static str, value: f64 },

    #[error("{name} = {value} is not a ratio in [0, 1]")]
    InvalidRatio { name: &'static str, value: f64 },

    #[error("blocklength must be positive")]
    EmptyBlock,

    #[error("mode A ({n_a} slots) plus transient ({n_t} slots) exceeds blocklength {n}")]
    ScheduleOverflow { n_a: usize, n_t: usize, n: usize },

    #[error("slot index {t} outside 1..={n}")]
    SlotOutOfRange { t: usize, n: usize },

    #[error("threshold undefined: delta_b = 1")]
    UndefinedThreshold,

    #[error("alpha undefined: delta_a = 1")]
    DegenerateAlpha,

    #[error("region is unbounded")]
    Unbounded,

    #[error("unsupported parameters: {0}")]
    Unsupported(&'static str),

    #[error("protocol violation: {0}")]
    ProtocolViolation(&'static str),

    #[error("trials must be at least 1")]
    NoTrials,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
