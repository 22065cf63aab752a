//! Two-dimensional rate regions represented by their upper-right boundary.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::channel::{RatePair, SplitParams};

/// Absolute tolerance under which two frontier points are the same point.
pub const DEDUP_TOL: f64 = 1e-12;

/// Bisection tolerance of [`equal_rate_point`].
pub const EQUAL_RATE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    /// Partial decode-and-forward sweep.
    Pdf,
    /// Strong-interference interference channel baseline.
    Ifc,
    Custom,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::Pdf => "pdf",
            Provenance::Ifc => "ifc",
            Provenance::Custom => "custom",
        })
    }
}

/// Region below a boundary polyline.
///
/// `frontier` is sorted by increasing `r1` with `r2` nonincreasing. Points
/// produced by [`pareto_extract`] are mutually nondominated; regions built
/// from polytopes additionally carry the two axis intercepts so the polyline
/// runs from the `r2` axis to the `r1` axis. Achievability of the segments
/// between consecutive points follows from time sharing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateRegion {
    pub provenance: Provenance,
    pub frontier: Vec<RatePair>,
    /// Split parameters achieving each frontier point, when known.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witnesses: Option<Vec<SplitParams>>,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RegionError {
    #[error("rate region is empty")]
    Empty,
}

impl RateRegion {
    pub fn new(provenance: Provenance, frontier: Vec<RatePair>) -> Self {
        RateRegion { provenance, frontier, witnesses: None }
    }

    pub fn is_empty(&self) -> bool {
        self.frontier.is_empty()
    }

    pub fn len(&self) -> usize {
        self.frontier.len()
    }

    pub fn max_r1(&self) -> Option<f64> {
        self.frontier.last().map(|p| p.r1)
    }

    pub fn max_r2(&self) -> Option<f64> {
        self.frontier.first().map(|p| p.r2)
    }

    /// Extends the boundary to both axes: `(0, r2 of the first point)` in
    /// front and `(r1 of the last point, 0)` at the back.
    pub fn with_axis_intercepts(mut self) -> Self {
        let (Some(&first), Some(&last)) = (self.frontier.first(), self.frontier.last()) else {
            return self;
        };
        if last.r2 > DEDUP_TOL {
            self.frontier.push(RatePair { r1: last.r1, r2: 0.0 });
            if let Some(w) = self.witnesses.as_mut() {
                let tail = *w.last().expect("witnesses parallel frontier");
                w.push(tail);
            }
        }
        if first.r1 > DEDUP_TOL {
            self.frontier.insert(0, RatePair { r1: 0.0, r2: first.r2 });
            if let Some(w) = self.witnesses.as_mut() {
                let head = w[0];
                w.insert(0, head);
            }
        }
        self
    }

    /// Largest achievable `r2` at a given `r1` under linear interpolation of
    /// the boundary, or `None` when `r1` lies beyond the region.
    pub fn r2_at(&self, r1: f64) -> Option<f64> {
        let first = self.frontier.first()?;
        let last = self.frontier.last()?;
        if r1 > last.r1 {
            return None;
        }
        if r1 <= first.r1 {
            return Some(first.r2);
        }
        let idx = self.frontier.partition_point(|p| p.r1 < r1);
        let hi = self.frontier[idx];
        let lo = self.frontier[idx - 1];
        if hi.r1 == lo.r1 {
            return Some(hi.r2.max(lo.r2));
        }
        let t = (r1 - lo.r1) / (hi.r1 - lo.r1);
        Some(lo.r2 + t * (hi.r2 - lo.r2))
    }

    /// Largest achievable `r1` at a given `r2`, mirror of [`Self::r2_at`].
    pub fn r1_at(&self, r2: f64) -> Option<f64> {
        let first = self.frontier.first()?;
        let last = self.frontier.last()?;
        if r2 > first.r2 {
            return None;
        }
        if r2 <= last.r2 {
            return Some(last.r1);
        }
        // r2 is nonincreasing along the frontier.
        let idx = self.frontier.partition_point(|p| p.r2 >= r2);
        let lo = self.frontier[idx - 1];
        let hi = self.frontier[idx];
        if lo.r2 == hi.r2 {
            return Some(lo.r1.max(hi.r1));
        }
        let t = (lo.r2 - r2) / (lo.r2 - hi.r2);
        Some(lo.r1 + t * (hi.r1 - lo.r1))
    }

    pub fn contains(&self, p: RatePair, tol: f64) -> bool {
        p.r1 >= -tol && p.r2 >= -tol && self.excess(p) <= tol
    }

    /// How far `p` sticks out of the region, measured per coordinate: the
    /// larger of the vertical gap above the boundary at `p.r1` and the
    /// horizontal gap right of it at `p.r2`. Nonpositive inside; either gap
    /// is positive exactly when `p` is outside.
    pub fn excess(&self, p: RatePair) -> f64 {
        let (Some(max_r1), Some(max_r2)) = (self.max_r1(), self.max_r2()) else {
            return f64::INFINITY;
        };
        let vertical = match self.r2_at(p.r1) {
            Some(r2) => p.r2 - r2,
            None => p.r1 - max_r1,
        };
        let horizontal = match self.r1_at(p.r2) {
            Some(r1) => p.r1 - r1,
            None => p.r2 - max_r2,
        };
        vertical.max(horizontal)
    }

    /// True when every boundary point of `other` lies in `self`.
    pub fn encloses(&self, other: &RateRegion, tol: f64) -> bool {
        other.frontier.iter().all(|&p| self.contains(p, tol))
    }
}

fn by_r1_desc_then_r2_desc(a: &RatePair, b: &RatePair) -> Ordering {
    b.r1.total_cmp(&a.r1).then(b.r2.total_cmp(&a.r2))
}

/// Indices of the Pareto-optimal points, ordered by increasing `r1`.
///
/// Ties are broken by input order, so the result is deterministic.
pub fn pareto_indices(points: &[RatePair]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&i, &j| by_r1_desc_then_r2_desc(&points[i], &points[j]).then(i.cmp(&j)));
    let mut kept: Vec<usize> = Vec::new();
    let mut best_r2 = f64::NEG_INFINITY;
    for i in order {
        if points[i].r2 > best_r2 + DEDUP_TOL {
            best_r2 = points[i].r2;
            kept.push(i);
        }
    }
    kept.reverse();
    // Collapse neighbours whose r1 agrees within tolerance; the later one has
    // the larger r2.
    let mut out: Vec<usize> = Vec::with_capacity(kept.len());
    for i in kept {
        while let Some(&prev) = out.last() {
            if (points[i].r1 - points[prev].r1).abs() <= DEDUP_TOL {
                out.pop();
            } else {
                break;
            }
        }
        out.push(i);
    }
    out
}

/// Removes dominated points and near-duplicates; sorts by `r1` ascending.
pub fn pareto_extract(points: &[RatePair]) -> RateRegion {
    let frontier = pareto_indices(points).into_iter().map(|i| points[i]).collect();
    RateRegion::new(Provenance::Custom, frontier)
}

/// Boundary of `{R₁ ≤ bound_r1, R₂ ≤ bound_r2, R₁ + R₂ ≤ bound_sum, R ≥ 0}`,
/// from the `R₂` axis to the `R₁` axis.
pub fn pentagon(bound_r1: f64, bound_r2: f64, bound_sum: f64, provenance: Provenance) -> RateRegion {
    let r1_max = bound_r1.min(bound_sum).max(0.0);
    let r2_max = bound_r2.min(bound_sum).max(0.0);
    let corners = [
        RatePair { r1: (bound_sum - r2_max).clamp(0.0, r1_max), r2: r2_max },
        RatePair { r1: r1_max, r2: (bound_sum - r1_max).clamp(0.0, r2_max) },
    ];
    let mut out = pareto_extract(&corners).with_axis_intercepts();
    out.provenance = provenance;
    out
}

/// Largest `r` with `(r, r)` in the region, by bisection.
pub fn equal_rate_point(region: &RateRegion) -> Result<f64, RegionError> {
    let (Some(max_r1), Some(max_r2)) = (region.max_r1(), region.max_r2()) else {
        return Err(RegionError::Empty);
    };
    let below = |r: f64| region.r2_at(r).is_some_and(|r2| r2 >= r);
    let mut lo = 0.0;
    let mut hi = max_r1.min(max_r2);
    if below(hi) {
        return Ok(hi);
    }
    while hi - lo > EQUAL_RATE_TOL {
        let mid = 0.5 * (lo + hi);
        if below(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rp(r1: f64, r2: f64) -> RatePair {
        RatePair { r1, r2 }
    }

    #[test]
    fn pareto_drops_dominated() {
        let region = pareto_extract(&[rp(1.0, 1.0), rp(2.0, 0.0), rp(0.0, 2.0), rp(0.5, 0.5)]);
        assert_eq!(region.frontier, vec![rp(0.0, 2.0), rp(1.0, 1.0), rp(2.0, 0.0)]);
    }

    #[test]
    fn pareto_singleton_and_dedupe() {
        assert_eq!(pareto_extract(&[rp(1.0, 1.0)]).frontier, vec![rp(1.0, 1.0)]);
        assert_eq!(pareto_extract(&[rp(1.0, 1.0), rp(1.0, 1.0)]).frontier, vec![rp(1.0, 1.0)]);
        assert_eq!(
            pareto_extract(&[rp(1.0, 1.0), rp(1.0 + 1e-14, 1.0 - 1e-14)]).len(),
            1
        );
    }

    #[test]
    fn pareto_empty_is_valid() {
        assert!(pareto_extract(&[]).is_empty());
    }

    #[test]
    fn equal_rate_on_segment() {
        let region = RateRegion::new(Provenance::Custom, vec![rp(0.0, 2.0), rp(2.0, 0.0)]);
        assert!((equal_rate_point(&region).unwrap() - 1.0).abs() <= EQUAL_RATE_TOL);
    }

    #[test]
    fn equal_rate_origin_and_empty() {
        let origin = RateRegion::new(Provenance::Custom, vec![rp(0.0, 0.0)]);
        assert_eq!(equal_rate_point(&origin).unwrap(), 0.0);
        let empty = RateRegion::new(Provenance::Custom, vec![]);
        assert_eq!(equal_rate_point(&empty), Err(RegionError::Empty));
    }

    #[test]
    fn equal_rate_rectangle_corner() {
        let region = RateRegion::new(Provenance::Custom, vec![rp(0.0, 1.0), rp(2.0, 1.0), rp(2.0, 0.0)]);
        assert_eq!(equal_rate_point(&region).unwrap(), 1.0);
    }

    #[test]
    fn axis_intercepts_added_once() {
        let region = RateRegion::new(Provenance::Custom, vec![rp(0.5, 1.0), rp(1.0, 0.5)]).with_axis_intercepts();
        assert_eq!(region.frontier, vec![rp(0.0, 1.0), rp(0.5, 1.0), rp(1.0, 0.5), rp(1.0, 0.0)]);
        let origin = RateRegion::new(Provenance::Custom, vec![rp(0.0, 0.0)]).with_axis_intercepts();
        assert_eq!(origin.frontier, vec![rp(0.0, 0.0)]);
    }

    #[test]
    fn excess_inside_and_outside() {
        let region = RateRegion::new(Provenance::Custom, vec![rp(0.0, 1.0), rp(1.0, 0.0)]);
        assert!(region.excess(rp(0.25, 0.25)) < 0.0);
        assert!((region.excess(rp(0.5, 0.7)) - 0.2).abs() < 1e-12);
        assert!((region.excess(rp(2.0, 0.0)) - 1.0).abs() < 1e-12);
        assert!(region.contains(rp(0.5, 0.5), 1e-12));
    }

    proptest! {
        #[test]
        fn pareto_invariants(raw in proptest::collection::vec((0.0f64..5.0, 0.0f64..5.0), 0..60)) {
            let points: Vec<RatePair> = raw.iter().map(|&(a, b)| rp(a, b)).collect();
            let region = pareto_extract(&points);
            for w in region.frontier.windows(2) {
                prop_assert!(w[0].r1 < w[1].r1);
                prop_assert!(w[0].r2 > w[1].r2);
            }
            for p in &points {
                prop_assert!(region.frontier.iter().any(|f| f.r1 >= p.r1 - DEDUP_TOL && f.r2 >= p.r2 - DEDUP_TOL));
            }
            for f in &region.frontier {
                prop_assert!(!points.iter().any(|p| p.r1 > f.r1 + DEDUP_TOL && p.r2 > f.r2 + DEDUP_TOL));
            }
        }

        #[test]
        fn equal_rate_is_on_boundary(raw in proptest::collection::vec((0.0f64..5.0, 0.0f64..5.0), 1..30)) {
            let points: Vec<RatePair> = raw.iter().map(|&(a, b)| rp(a, b)).collect();
            let region = pareto_extract(&points).with_axis_intercepts();
            let r = equal_rate_point(&region).unwrap();
            prop_assert!(region.contains(rp(r, r), 1e-9));
            prop_assert!(!region.contains(rp(r + 1e-6, r + 1e-6), 0.0));
        }
    }
}
