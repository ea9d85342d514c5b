//! Achievable sum-rates of the coding strategies and the quantities that
//! size the inter-modal scheme.
//!
//! The inter-modal scheme sends raw packets for user 1 and then user 2 (each
//! until at least one receiver has it), then XOR-multicasts the overheard
//! packets, pushing the multicast phase into the better mode B. `alpha` is the
//! fraction of the block spent on raw packets.

use super::bounds::avg_erasure;
use super::ModeParams;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Sum capacity of a single-mode channel with delayed feedback,
/// `2(1+δ)(1−δ)/(2+δ)`.
pub fn unimodal_feedback_sum<T: Scalar>(delta: T) -> T {
    let one = T::one();
    T::two() * (one + delta) * (one - delta) / (T::two() + delta)
}

/// Smallest `eta` for which the inter-modal scheme meets the outer bound:
/// `(1 + δ_A(1−δ_A) / (2(1−δ_B)))^{-1}`.
pub fn thm2_threshold<T: Scalar>(delta_a: T, delta_b: T) -> Result<T> {
    let one = T::one();
    if delta_b >= one {
        return Err(Error::UndefinedThreshold);
    }
    Ok(one / (one + delta_a * (one - delta_a) / (T::two() * (one - delta_b))))
}

/// `δ_A ≥ δ_B` and `η` at or above [`thm2_threshold`].
pub fn thm2_holds<T: Scalar>(p: &ModeParams<T>) -> bool {
    p.delta_a >= p.delta_b && thm2_threshold(p.delta_a, p.delta_b).is_ok_and(|th| p.eta >= th)
}

/// Raw-phase fraction that exactly fills the block,
/// `2(1−δ̄) / ((2+δ_A)(1−δ_A))`.
pub fn alpha_star<T: Scalar>(p: &ModeParams<T>) -> Result<T> {
    let one = T::one();
    if p.delta_a >= one {
        return Err(Error::DegenerateAlpha);
    }
    Ok(T::two() * (one - avg_erasure(p)) / ((T::two() + p.delta_a) * (one - p.delta_a)))
}

/// Average multicast delivery rate over the part of the block after the raw
/// phases, for raw fraction `alpha ≤ eta`.
pub fn effective_rate<T: Scalar>(p: &ModeParams<T>, alpha: T) -> Result<T> {
    let one = T::one();
    if alpha >= one {
        return Err(Error::DegenerateAlpha);
    }
    Ok(((one - p.eta) * (one - p.delta_b) + (p.eta - alpha) * (one - p.delta_a)) / (one - alpha))
}

/// Block fraction needed to send the raw packets and then drain the
/// multicast backlog, `α + α·δ_A(1−δ_A) / (2·R_eff)`.
pub fn normalized_completion_time<T: Scalar>(p: &ModeParams<T>, alpha: T) -> Result<T> {
    let one = T::one();
    let r_eff = effective_rate(p, alpha)?;
    Ok(alpha + alpha * p.delta_a * (one - p.delta_a) / (T::two() * r_eff))
}

/// Analytic sum-rate of inter-modal coding.
///
/// Above the threshold the symmetric corner of the worse-mode bound is met.
/// Below it the raw phases take all of mode A, the multicast backlog drains
/// in mode B and the remaining mode-B time carries fresh packets with the
/// single-mode feedback scheme.
pub fn achievable_intermodal_sum<T: Scalar>(p: &ModeParams<T>) -> Result<T> {
    let one = T::one();
    if p.delta_a < p.delta_b {
        return Err(Error::Unsupported("inter-modal coding requires delta_a >= delta_b"));
    }
    if p.delta_b >= one {
        return Err(Error::Unsupported("inter-modal coding requires delta_b < 1"));
    }
    let da = p.delta_a;
    if thm2_holds(p) {
        return Ok(T::two() * (one + da) * (one - avg_erasure(p)) / (T::two() + da));
    }
    let backlog = p.eta * da * (one - da) / (T::two() * (one - p.delta_b));
    let left = (one - p.eta - backlog).max_of(T::zero());
    Ok(p.eta * (one - da * da) + left * unimodal_feedback_sum(p.delta_b))
}

/// Each mode coded on its own with the single-mode feedback scheme.
pub fn achievable_intramodal_sum<T: Scalar>(p: &ModeParams<T>) -> T {
    p.eta * unimodal_feedback_sum(p.delta_a) + (T::one() - p.eta) * unimodal_feedback_sum(p.delta_b)
}

/// Erasure codes without feedback: `1 − δ̄`.
pub fn achievable_nofeedback_sum<T: Scalar>(p: &ModeParams<T>) -> T {
    T::one() - avg_erasure(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    fn params(a: Rational, b: Rational, e: Rational) -> ModeParams<Rational> {
        ModeParams::new(a, b, e).unwrap()
    }

    #[test]
    fn unimodal_sum() {
        assert_eq!(unimodal_feedback_sum(q(3, 4)), q(7, 22));
        assert_eq!(unimodal_feedback_sum(q(0, 1)), q(1, 1));
        assert_eq!(unimodal_feedback_sum(q(1, 1)), q(0, 1));
    }

    #[test]
    fn threshold_values() {
        assert_eq!(thm2_threshold(q(3, 4), q(0, 1)).unwrap(), q(32, 35));
        assert_eq!(thm2_threshold(q(0, 1), q(9, 10)).unwrap(), q(1, 1));
        assert_eq!(thm2_threshold(q(1, 2), q(1, 2)).unwrap(), q(4, 5));
        assert_eq!(thm2_threshold(0.5, 1.0), Err(Error::UndefinedThreshold));
    }

    #[test]
    fn threshold_conditions() {
        assert!(thm2_holds(&params(q(3, 4), q(0, 1), q(32, 35))));
        assert!(!thm2_holds(&params(q(3, 4), q(0, 1), q(1, 6))));
        assert!(!thm2_holds(&ModeParams::new(0.2, 0.3, 0.99).unwrap()));
        assert!(!thm2_holds(&ModeParams::new(1.0, 1.0, 0.99).unwrap()));
    }

    #[test]
    fn alpha_values() {
        assert_eq!(alpha_star(&params(q(3, 4), q(0, 1), q(32, 35))).unwrap(), q(32, 35));
        for e in [q(0, 1), q(1, 3), q(1, 1)] {
            assert_eq!(alpha_star(&params(q(0, 1), q(0, 1), e)).unwrap(), q(1, 1));
        }
        assert_eq!(alpha_star(&params(q(1, 2), q(1, 2), q(1, 2))).unwrap(), q(4, 5));
        assert_eq!(alpha_star(&ModeParams::new(1.0, 0.0, 0.5).unwrap()), Err(Error::DegenerateAlpha));
    }

    #[test]
    fn alpha_solves_completion_equation() {
        let p = params(q(3, 4), q(0, 1), q(32, 35));
        let a = alpha_star(&p).unwrap();
        assert_eq!(normalized_completion_time(&p, a).unwrap(), q(1, 1));
        assert_eq!(effective_rate(&p, q(1, 1)), Err(Error::DegenerateAlpha));
    }

    #[test]
    fn intermodal_capacity_point() {
        assert_eq!(achievable_intermodal_sum(&params(q(3, 4), q(0, 1), q(32, 35))).unwrap(), q(2, 5));
    }

    #[test]
    fn intermodal_clipped_regime() {
        assert_eq!(achievable_intermodal_sum(&params(q(3, 4), q(0, 1), q(1, 6))).unwrap(), q(171, 192));
    }

    #[test]
    fn intermodal_equal_modes() {
        let d = q(2, 5);
        let th = thm2_threshold(d, d).unwrap();
        for e in [th, (th + q(1, 1)) / q(2, 1), q(1, 1)] {
            assert_eq!(achievable_intermodal_sum(&params(d, d, e)).unwrap(), unimodal_feedback_sum(d));
        }
    }

    #[test]
    fn intermodal_refusals() {
        assert!(matches!(
            achievable_intermodal_sum(&ModeParams::new(0.1, 0.3, 0.5).unwrap()),
            Err(Error::Unsupported(_))
        ));
        assert!(matches!(
            achievable_intermodal_sum(&ModeParams::new(1.0, 1.0, 0.5).unwrap()),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn intermodal_fully_erased_mode_a() {
        // Nothing gets through in mode A, so only the fresh tail in B counts.
        let p = params(q(1, 1), q(1, 4), q(1, 3));
        assert_eq!(achievable_intermodal_sum(&p).unwrap(), q(2, 3) * unimodal_feedback_sum(q(1, 4)));
    }

    #[test]
    fn intramodal_values() {
        assert_eq!(achievable_intramodal_sum(&params(q(3, 4), q(0, 1), q(32, 35))), q(29, 77));
        assert_eq!(achievable_intramodal_sum(&params(q(3, 4), q(0, 1), q(1, 6))), q(39, 44));
        let d = q(1, 3);
        assert_eq!(achievable_intramodal_sum(&params(d, d, q(2, 9))), unimodal_feedback_sum(d));
    }

    #[test]
    fn nofeedback_values() {
        assert_eq!(achievable_nofeedback_sum(&params(q(3, 4), q(0, 1), q(32, 35))), q(11, 35));
        assert_eq!(achievable_nofeedback_sum(&params(q(0, 1), q(0, 1), q(1, 2))), q(1, 1));
        assert_eq!(achievable_nofeedback_sum(&params(q(3, 4), q(1, 8), q(1, 2))), q(9, 16));
    }
}
