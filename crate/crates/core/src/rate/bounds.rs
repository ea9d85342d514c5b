//! Outer bounds on the capacity region with delayed CSI feedback.

use serde::Serialize;

use super::region::{HalfSpace, RateRegion};
use super::ModeParams;
use crate::error::Result;
use crate::scalar::Scalar;

/// Average erasure probability `η·δ_A + (1−η)·δ_B`.
pub fn avg_erasure<T: Scalar>(p: &ModeParams<T>) -> T {
    p.eta * p.delta_a + (T::one() - p.eta) * p.delta_b
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Betas<T> {
    pub a: T,
    pub b: T,
    pub max: T,
    pub min: T,
}

pub fn betas<T: Scalar>(p: &ModeParams<T>) -> Betas<T> {
    let a = T::one() + p.delta_a;
    let b = T::one() + p.delta_b;
    Betas { a, b, max: a.max_of(b), min: a.min_of(b) }
}

/// Correction term for the `β_min` bound. Ties `δ_A = δ_B` take the mode-A
/// branch only.
pub fn kappa<T: Scalar>(p: &ModeParams<T>) -> T {
    let one = T::one();
    let bs = betas(p);
    if p.delta_a >= p.delta_b {
        p.eta / bs.a * (one - p.delta_a * p.delta_a)
    } else {
        (one - p.eta) / bs.b * (one - p.delta_b * p.delta_b)
    }
}

/// Pair of mirrored slope constraints `β·R1 + R2 ≤ c`, `R1 + β·R2 ≤ c`.
fn slope_pair<T: Scalar>(beta: T, bound: T) -> [HalfSpace<T>; 2] {
    [HalfSpace::new(beta, T::one(), bound), HalfSpace::new(T::one(), beta, bound)]
}

fn individual_caps<T: Scalar>(cap: T) -> [HalfSpace<T>; 2] {
    [HalfSpace::new(T::one(), T::zero(), cap), HalfSpace::new(T::zero(), T::one(), cap)]
}

/// Bound whose slope is set by the worse mode.
pub fn region_c1<T: Scalar>(p: &ModeParams<T>) -> RateRegion<T> {
    let b = betas(p).max;
    let on = T::one() - avg_erasure(p);
    RateRegion::new(slope_pair(b, b * on).to_vec())
}

/// Bound whose slope is set by the better mode, loosened by `κ`.
pub fn region_c2<T: Scalar>(p: &ModeParams<T>) -> RateRegion<T> {
    let b = betas(p).min;
    let on = T::one() - avg_erasure(p);
    let mut hs = individual_caps(on).to_vec();
    hs.extend(slope_pair(b, b * on + kappa(p)));
    RateRegion::new(hs)
}

/// Capacity region with instantaneous feedback.
pub fn region_c3<T: Scalar>(p: &ModeParams<T>) -> RateRegion<T> {
    let one = T::one();
    let on = one - avg_erasure(p);
    let sum = p.eta * (one - p.delta_a * p.delta_a) + (one - p.eta) * (one - p.delta_b * p.delta_b);
    let mut hs = individual_caps(on).to_vec();
    hs.push(HalfSpace::new(one, one, sum));
    RateRegion::new(hs)
}

/// Intersection of the three outer bounds.
pub fn outer_region<T: Scalar>(p: &ModeParams<T>) -> RateRegion<T> {
    region_c1(p).intersect(&region_c2(p)).intersect(&region_c3(p))
}

/// Capacity region of a single-mode channel with erasure probability `delta`.
pub fn unimodal_region<T: Scalar>(delta: T) -> RateRegion<T> {
    let b = T::one() + delta;
    RateRegion::new(slope_pair(b, b * (T::one() - delta)).to_vec())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum BoundKind {
    C1,
    C2,
    C3,
}

impl BoundKind {
    pub const ALL: [BoundKind; 3] = [BoundKind::C1, BoundKind::C2, BoundKind::C3];

    pub fn region<T: Scalar>(self, p: &ModeParams<T>) -> RateRegion<T> {
        match self {
            BoundKind::C1 => region_c1(p),
            BoundKind::C2 => region_c2(p),
            BoundKind::C3 => region_c3(p),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            BoundKind::C1 => "c1",
            BoundKind::C2 => "c2",
            BoundKind::C3 => "c3",
        }
    }
}

/// Bounds whose own maximal sum-rate equals that of the intersection.
///
/// Every region here is convex and symmetric, so each maximal sum is attained
/// on the diagonal and the intersection's maximum is the smallest of them.
pub fn binding_regions<T: Scalar>(p: &ModeParams<T>) -> Result<Vec<BoundKind>> {
    let outer = outer_region(p).max_sum_rate()?;
    let mut out = Vec::new();
    for kind in BoundKind::ALL {
        if (kind.region(p).max_sum_rate()? - outer).abs() <= T::tolerance() {
            out.push(kind);
        }
    }
    Ok(out)
}
