//! Closed-form rate analysis for the two-mode broadcast erasure channel.
//!
//! Outer bounds live in [`bounds`], achievable sum-rates of the coding
//! strategies in [`achievable`], and the polytope machinery in [`region`].

pub mod achievable;
pub mod bounds;
pub mod region;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::{in_unit_interval, Scalar};

pub use achievable::{
    achievable_intermodal_sum, achievable_intramodal_sum, achievable_nofeedback_sum, alpha_star,
    effective_rate, normalized_completion_time, thm2_holds, thm2_threshold, unimodal_feedback_sum,
};
pub use bounds::{
    avg_erasure, betas, binding_regions, kappa, outer_region, region_c1, region_c2, region_c3,
    unimodal_region, Betas, BoundKind,
};
pub use region::{HalfSpace, RatePair, RateRegion};

/// Asymptotic channel description: erasure probabilities of the two
/// non-transient modes and the fraction `eta` of the block spent in mode A.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModeParams<T> {
    pub delta_a: T,
    pub delta_b: T,
    pub eta: T,
}

impl<T: Scalar> ModeParams<T> {
    pub fn new(delta_a: T, delta_b: T, eta: T) -> Result<Self> {
        for (name, v) in [("delta_a", delta_a), ("delta_b", delta_b)] {
            if !in_unit_interval(v) {
                return Err(Error::InvalidProbability { name, value: v.as_f64() });
            }
        }
        if !in_unit_interval(eta) {
            return Err(Error::InvalidRatio { name: "eta", value: eta.as_f64() });
        }
        Ok(ModeParams { delta_a, delta_b, eta })
    }

    /// Same parameters with mode A and mode B exchanged (`eta ↦ 1 − eta`).
    pub fn swapped_modes(&self) -> Self {
        ModeParams { delta_a: self.delta_b, delta_b: self.delta_a, eta: T::one() - self.eta }
    }

    pub fn to_f64(&self) -> ModeParams<f64> {
        ModeParams { delta_a: self.delta_a.as_f64(), delta_b: self.delta_b.as_f64(), eta: self.eta.as_f64() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    #[test]
    fn validation() {
        assert!(ModeParams::new(0.75, 0.0, 32.0 / 35.0).is_ok());
        assert!(matches!(ModeParams::new(1.2, 0.0, 0.5), Err(Error::InvalidProbability { name: "delta_a", .. })));
        assert!(matches!(ModeParams::new(0.2, -0.1, 0.5), Err(Error::InvalidProbability { name: "delta_b", .. })));
        assert!(matches!(ModeParams::new(0.2, 0.1, 1.5), Err(Error::InvalidRatio { .. })));
        assert!(ModeParams::new(Rational::from_ratio(3, 4), Rational::from_ratio(0, 1), Rational::from_ratio(1, 6)).is_ok());
    }
}
