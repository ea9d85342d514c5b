//! Two-dimensional rate regions as intersections of halfspaces in the
//! nonnegative quadrant.
//!
//! Regions here have at most a handful of constraints, so vertices are found
//! by brute force: intersect every pair of boundary lines (axes included) and
//! keep the feasible points.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// `c1·R1 + c2·R2 ≤ bound`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HalfSpace<T> {
    pub c1: T,
    pub c2: T,
    pub bound: T,
}

impl<T: Scalar> HalfSpace<T> {
    pub fn new(c1: T, c2: T, bound: T) -> Self {
        HalfSpace { c1, c2, bound }
    }

    /// Constraint with the coefficients swapped, i.e. the image under
    /// `(R1, R2) ↦ (R2, R1)`.
    pub fn mirrored(&self) -> Self {
        HalfSpace { c1: self.c2, c2: self.c1, bound: self.bound }
    }

    pub fn slack(&self, p: RatePair<T>) -> T {
        self.bound - (self.c1 * p.r1 + self.c2 * p.r2)
    }

    pub fn contains(&self, p: RatePair<T>) -> bool {
        self.slack(p) >= -T::tolerance()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RatePair<T> {
    pub r1: T,
    pub r2: T,
}

impl<T: Scalar> RatePair<T> {
    pub fn new(r1: T, r2: T) -> Self {
        RatePair { r1, r2 }
    }

    pub fn sum(&self) -> T {
        self.r1 + self.r2
    }

    pub fn swapped(&self) -> Self {
        RatePair { r1: self.r2, r2: self.r1 }
    }

    pub fn approx_eq(&self, other: &Self) -> bool {
        (self.r1 - other.r1).abs() <= T::tolerance() && (self.r2 - other.r2).abs() <= T::tolerance()
    }
}

/// Intersection of halfspaces with the nonnegative quadrant.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RateRegion<T> {
    halfspaces: Vec<HalfSpace<T>>,
}

impl<T: Scalar> RateRegion<T> {
    pub fn new(halfspaces: Vec<HalfSpace<T>>) -> Self {
        RateRegion { halfspaces }
    }

    pub fn halfspaces(&self) -> &[HalfSpace<T>] {
        &self.halfspaces
    }

    /// Region described by the constraints of both operands.
    pub fn intersect(&self, other: &RateRegion<T>) -> RateRegion<T> {
        let mut halfspaces = self.halfspaces.clone();
        halfspaces.extend_from_slice(&other.halfspaces);
        RateRegion { halfspaces }
    }

    pub fn contains(&self, p: RatePair<T>) -> bool {
        let tol = T::tolerance();
        p.r1 >= -tol && p.r2 >= -tol && self.halfspaces.iter().all(|h| h.contains(p))
    }

    /// With nonnegative coefficients the only possible recession directions
    /// are the positive axes; each must be cut by some constraint.
    pub fn is_bounded(&self) -> bool {
        let cuts = |f: fn(&HalfSpace<T>) -> T| self.halfspaces.iter().any(|h| f(h) > T::zero());
        cuts(|h| h.c1) && cuts(|h| h.c2)
    }

    /// Extreme points sorted by `r1` (then `r2`) ascending, duplicates merged.
    pub fn vertices(&self) -> Result<Vec<RatePair<T>>> {
        if !self.is_bounded() {
            return Err(Error::Unbounded);
        }
        let zero = T::zero();
        let one = T::one();
        let mut lines = vec![HalfSpace::new(one, zero, zero), HalfSpace::new(zero, one, zero)];
        lines.extend(self.halfspaces.iter().copied());

        let mut out: Vec<RatePair<T>> = Vec::new();
        for (i, a) in lines.iter().enumerate() {
            for b in &lines[i + 1..] {
                let det = a.c1 * b.c2 - a.c2 * b.c1;
                if det == zero {
                    continue;
                }
                let p = RatePair::new(
                    (a.bound * b.c2 - b.bound * a.c2) / det,
                    (a.c1 * b.bound - b.c1 * a.bound) / det,
                );
                if self.contains(p) && !out.iter().any(|q| q.approx_eq(&p)) {
                    out.push(p);
                }
            }
        }
        out.sort_by(|x, y| {
            x.r1.partial_cmp(&y.r1)
                .unwrap_or(std::cmp::Ordering::Equal)
                .then(x.r2.partial_cmp(&y.r2).unwrap_or(std::cmp::Ordering::Equal))
        });
        Ok(out)
    }

    pub fn max_sum_rate(&self) -> Result<T> {
        Ok(self.max_sum_vertex()?.sum())
    }

    /// Vertex maximizing `r1 + r2`; ties go to the smallest `r1`.
    pub fn max_sum_vertex(&self) -> Result<RatePair<T>> {
        let vs = self.vertices()?;
        let mut best = vs[0];
        for v in &vs[1..] {
            if v.sum() > best.sum() + T::tolerance() {
                best = *v;
            }
        }
        Ok(best)
    }

    /// `true` when reflecting every vertex across `r1 = r2` stays inside.
    pub fn is_symmetric(&self) -> Result<bool> {
        Ok(self.vertices()?.iter().all(|v| self.contains(v.swapped())))
    }
}

/// Vertex sets equal up to the scalar tolerance.
pub fn same_vertices<T: Scalar>(a: &[RatePair<T>], b: &[RatePair<T>]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.approx_eq(y))
}
