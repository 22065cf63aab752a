//! Non-collaborative baseline: the two-user Gaussian interference channel in
//! the strong-interference regime, where its capacity region is known.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::channel::{capacity, Channel, Link, RatePair};
use crate::region::{pentagon, Provenance, RateRegion};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IfcRegion {
    pub bound_r1: f64,
    pub bound_r2: f64,
    pub bound_sum: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum IfcError {
    #[error("outside strong-interference regime: need h14 <= h24 and h23 <= h13 (h14 = {h14}, h24 = {h24}, h23 = {h23}, h13 = {h13})")]
    NotStrongInterference { h14: f64, h24: f64, h23: f64, h13: f64 },
}

pub fn is_strong_interference(ch: &Channel) -> bool {
    ch.h(Link::H14) <= ch.h(Link::H24) && ch.h(Link::H23) <= ch.h(Link::H13)
}

/// Capacity region of the interference channel formed by the two pairs
/// when neither helps the other. Refuses outside strong interference,
/// where these bounds are not a capacity result.
pub fn ifc_region(ch: &Channel) -> Result<IfcRegion, IfcError> {
    let (h13, h14, h23, h24) = (ch.h(Link::H13), ch.h(Link::H14), ch.h(Link::H23), ch.h(Link::H24));
    if !is_strong_interference(ch) {
        return Err(IfcError::NotStrongInterference { h14, h24, h23, h13 });
    }
    let (p1, p2) = (ch.p1(), ch.p2());
    let (n3, n4) = (ch.n3(), ch.n4());
    Ok(IfcRegion {
        bound_r1: capacity(h14 * p1 / n4),
        bound_r2: capacity(h23 * p2 / n3),
        bound_sum: capacity((h14 * p1 + h24 * p2) / n4).min(capacity((h23 * p2 + h13 * p1) / n3)),
    })
}

impl IfcRegion {
    pub fn contains(&self, p: RatePair, tol: f64) -> bool {
        p.r1 >= -tol
            && p.r2 >= -tol
            && p.r1 <= self.bound_r1 + tol
            && p.r2 <= self.bound_r2 + tol
            && p.r1 + p.r2 <= self.bound_sum + tol
    }
}

/// Vertices of the pentagon other than the origin, from the `R₂` axis to
/// the `R₁` axis.
pub fn ifc_frontier(region: &IfcRegion) -> RateRegion {
    pentagon(region.bound_r1, region.bound_r2, region.bound_sum, Provenance::Ifc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{ChannelConfig, Gains};
    use proptest::prelude::*;

    fn rp(r1: f64, r2: f64) -> RatePair {
        RatePair { r1, r2 }
    }

    fn region(b1: f64, b2: f64, bs: f64) -> IfcRegion {
        IfcRegion { bound_r1: b1, bound_r2: b2, bound_sum: bs }
    }

    #[test]
    fn worked_example() {
        let gains = Gains::from_links([0.0, 10.0, 1.0, 10.0, 10.0, 0.0]);
        let ch = ChannelConfig::unit_power(gains).validate().unwrap();
        let r = ifc_region(&ch).unwrap();
        assert!((r.bound_r1 - 0.5).abs() <= 1e-12);
        assert!((r.bound_r2 - 0.5 * 11f64.log2()).abs() <= 1e-12);
        assert!((r.bound_sum - 0.5 * 12f64.log2()).abs() <= 1e-12);
    }

    #[test]
    fn disconnected_channel_is_trivial() {
        let ch = ChannelConfig::unit_power(Gains::uniform(0.0)).validate().unwrap();
        let r = ifc_region(&ch).unwrap();
        assert_eq!((r.bound_r1, r.bound_r2, r.bound_sum), (0.0, 0.0, 0.0));
        assert_eq!(ifc_frontier(&r).frontier, vec![rp(0.0, 0.0)]);
    }

    #[test]
    fn weak_interference_refused() {
        let mut gains = Gains::uniform(1.0);
        gains.set(Link::H14, 2.0);
        let ch = ChannelConfig::unit_power(gains).validate().unwrap();
        assert!(matches!(ifc_region(&ch), Err(IfcError::NotStrongInterference { .. })));
        let mut gains = Gains::uniform(1.0);
        gains.set(Link::H23, 2.0);
        let ch = ChannelConfig::unit_power(gains).validate().unwrap();
        assert!(ifc_region(&ch).is_err());
    }

    #[test]
    fn pentagon_corners() {
        let f = ifc_frontier(&region(1.0, 1.0, 1.5));
        assert_eq!(f.frontier, vec![rp(0.0, 1.0), rp(0.5, 1.0), rp(1.0, 0.5), rp(1.0, 0.0)]);
        assert_eq!(f.provenance, Provenance::Ifc);
    }

    #[test]
    fn slack_sum_gives_rectangle() {
        let f = ifc_frontier(&region(1.0, 1.0, 3.0));
        assert_eq!(f.frontier, vec![rp(0.0, 1.0), rp(1.0, 1.0), rp(1.0, 0.0)]);
    }

    #[test]
    fn zero_bounds() {
        assert_eq!(ifc_frontier(&region(0.0, 0.0, 0.0)).frontier, vec![rp(0.0, 0.0)]);
    }

    proptest! {
        #[test]
        fn frontier_is_exact_boundary(b1 in 0.0f64..3.0, b2 in 0.0f64..3.0, bs in 0.0f64..6.0,
                                      samples in proptest::collection::vec((0.0f64..3.0, 0.0f64..3.0), 50)) {
            let r = region(b1, b2, bs);
            let f = ifc_frontier(&r);
            for p in &f.frontier {
                prop_assert!(r.contains(*p, 1e-12));
            }
            for (x, y) in samples {
                let p = rp(x, y);
                if r.contains(p, 0.0) != f.contains(p, 0.0) {
                    // Only points within rounding of the boundary may disagree.
                    prop_assert!(f.excess(p).abs() < 1e-9);
                }
            }
        }

        #[test]
        fn scaling_powers_and_noises(h in proptest::array::uniform6(0.1f64..10.0), k in -6i32..6) {
            let mut h = h;
            h[2] = h[2].min(h[4]);
            h[3] = h[3].min(h[1]);
            let cfg = ChannelConfig::unit_power(Gains::from_links(h));
            let a = ifc_region(&cfg.validate().unwrap()).unwrap();
            let b = ifc_region(&cfg.scaled(4f64.powi(k)).validate().unwrap()).unwrap();
            prop_assert_eq!(a, b);
        }
    }
}
