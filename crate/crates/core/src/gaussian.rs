//! Closed-form AWGN achievable region of partial decode-and-forward.
//!
//! For each power split the region is a pentagon
//! `{R₁ ≤ bound_r1, R₂ ≤ bound_r2, R₁+R₂ ≤ bound_sum}`; the achievable
//! region is the union over splits, which [`sweep_region`] approximates on a
//! grid and reduces to its Pareto boundary.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::channel::{capacity, Channel, Link, RatePair, SplitParams};
use crate::region::{pareto_indices, Provenance, RateRegion};

/// Every mutual-information term entering the region, one per receiver
/// where the region takes a minimum over receivers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PdfTerms {
    /// `I(Y₃; X₁ | U₁, U₂, X₂, X₃)`
    pub phi1_y3: f64,
    /// `I(Y₄; X₁ | U₁, U₂, X₂, X₃)`
    pub phi1_y4: f64,
    /// `I(Y₄; U₁, U₂, X₁, X₂, X₃)`
    pub phi2_y4: f64,
    /// `I(Y₃; U₁, U₂, X₁, X₂ | X₃)`
    pub phi2_y3: f64,
    /// `I(Y₃; X₁, X₂ | U₁, U₂, X₃)`
    pub phi3_y3: f64,
    /// `I(Y₄; X₁, X₂ | U₁, U₂, X₃)`
    pub phi3_y4: f64,
    /// `I(Y₃; X₂ | U₁, U₂, X₁, X₃)`
    pub r2_y3: f64,
    /// `I(Y₄; X₂ | U₁, U₂, X₁, X₃)`
    pub r2_y4: f64,
    /// `I(Y₂; U₂ | U₁, X₂, X₃)`, the rate the relay transmitter decodes.
    pub relay: f64,
}

impl PdfTerms {
    pub fn phis(&self) -> PhiTriple {
        PhiTriple {
            phi1: self.phi1_y3.min(self.phi1_y4),
            phi2: self.phi2_y4.min(self.phi2_y3),
            phi3: self.phi3_y3.min(self.phi3_y4),
        }
    }

    pub fn slice(&self) -> PdfRegionSlice {
        let phi = self.phis();
        PdfRegionSlice {
            bound_r1: self.relay + phi.phi1,
            bound_r2: self.r2_y3.min(self.r2_y4),
            bound_sum: phi.phi2.min(self.relay + phi.phi3),
        }
    }

    pub fn as_array(&self) -> [f64; 9] {
        [
            self.phi1_y3,
            self.phi1_y4,
            self.phi2_y4,
            self.phi2_y3,
            self.phi3_y3,
            self.phi3_y4,
            self.r2_y3,
            self.r2_y4,
            self.relay,
        ]
    }

    pub const NAMES: [&'static str; 9] =
        ["phi1_y3", "phi1_y4", "phi2_y4", "phi2_y3", "phi3_y3", "phi3_y4", "r2_y3", "r2_y4", "relay"];
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhiTriple {
    pub phi1: f64,
    pub phi2: f64,
    pub phi3: f64,
}

/// Right-hand sides of the region for one split.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PdfRegionSlice {
    pub bound_r1: f64,
    pub bound_r2: f64,
    pub bound_sum: f64,
}

impl PdfRegionSlice {
    /// Upper-right corners of the pentagon (at most two distinct points).
    pub fn corners(&self) -> [RatePair; 2] {
        let r1_max = self.bound_r1.min(self.bound_sum);
        let r2_max = self.bound_r2.min(self.bound_sum);
        [
            RatePair { r1: r1_max, r2: self.bound_r2.min(self.bound_sum - r1_max).max(0.0) },
            RatePair { r1: self.bound_r1.min(self.bound_sum - r2_max).max(0.0), r2: r2_max },
        ]
    }

    pub fn contains(&self, p: RatePair, tol: f64) -> bool {
        p.r1 >= -tol
            && p.r2 >= -tol
            && p.r1 <= self.bound_r1 + tol
            && p.r2 <= self.bound_r2 + tol
            && p.r1 + p.r2 <= self.bound_sum + tol
    }
}

/// Closed forms of every region term.
///
/// The coherent-combining SNRs are written with the latent amplitudes
/// `√(h·share·P)` rather than as ratios, so the degenerate splits `αβ = 0`
/// and `αβγ = 0` need no special casing.
pub fn pdf_terms(ch: &Channel, s: &SplitParams) -> PdfTerms {
    let (p1, p2, p3) = (ch.p1(), ch.p2(), ch.p3());
    let (n2, n3, n4) = (ch.n2(), ch.n3(), ch.n4());
    let (h12, h13, h14) = (ch.h(Link::H12), ch.h(Link::H13), ch.h(Link::H14));
    let (h23, h24, h34) = (ch.h(Link::H23), ch.h(Link::H24), ch.h(Link::H34));
    let (a, b, g, d) = (s.alpha, s.beta, s.gamma, s.delta);
    let (ab, bb, gb, db) = (s.alpha_bar(), s.beta_bar(), s.gamma_bar(), s.delta_bar());

    let private1 = ab * p1;
    let fresh1 = a * bb * p1;
    let private2 = db * p2;

    // Common part not yet forwarded by user 3, combined with user 2's copy.
    let coherent_c = |h1: f64, h2: f64| ((h1 * a * b * gb * p1).sqrt() + (h2 * d * gb * p2).sqrt()).powi(2);
    // Part already forwarded: users 1, 2 and 3 combine.
    let coherent_d = ((h14 * a * b * g * p1).sqrt() + (h24 * d * g * p2).sqrt() + (h34 * p3).sqrt()).powi(2);

    let snr_y4_all = (h14 * (private1 + fresh1) + coherent_c(h14, h24) + coherent_d + h24 * private2) / n4;
    let snr_y3_all = (h13 * (private1 + fresh1) + coherent_c(h13, h23) + h23 * private2) / n3;

    PdfTerms {
        phi1_y3: capacity(h13 * private1 / n3),
        phi1_y4: capacity(h14 * private1 / n4),
        phi2_y4: capacity(snr_y4_all),
        phi2_y3: capacity(snr_y3_all),
        phi3_y3: capacity((h13 * private1 + h23 * private2) / n3),
        phi3_y4: capacity((h14 * private1 + h24 * private2) / n4),
        r2_y3: capacity(h23 * private2 / n3),
        r2_y4: capacity(h24 * private2 / n4),
        relay: capacity(h12 * fresh1 / (h12 * private1 + n2)),
    }
}

pub fn compute_phis(ch: &Channel, s: &SplitParams) -> PhiTriple {
    pdf_terms(ch, s).phis()
}

pub fn pdf_region_slice(ch: &Channel, s: &SplitParams) -> PdfRegionSlice {
    pdf_terms(ch, s).slice()
}

/// The `(Y₄, Y₃)` arguments of `φ₂` in ratio form, with the `Y₄` one
/// omitting the private power `h₂₄·δ̄·P₂` of `X₂`. `None` where a ratio
/// divides by zero. The `Y₃` argument agrees with [`pdf_terms`]; the `Y₄`
/// one undercounts whenever `δ < 1`.
pub fn phi2_ratio_form(ch: &Channel, s: &SplitParams) -> Option<(f64, f64)> {
    let (p1, p2, p3) = (ch.p1(), ch.p2(), ch.p3());
    let (h13, h14, h23, h24, h34) = (ch.h(Link::H13), ch.h(Link::H14), ch.h(Link::H23), ch.h(Link::H24), ch.h(Link::H34));
    let (a, b, g, d) = (s.alpha, s.beta, s.gamma, s.delta);
    let (ab, bb, gb, db) = (s.alpha_bar(), s.beta_bar(), s.gamma_bar(), s.delta_bar());
    if a * b * g * p1 == 0.0 || h13 == 0.0 || h14 == 0.0 {
        return None;
    }
    let r4 = ((h24 / h14) * (d * p2) / (a * b * p1)).sqrt();
    let r34 = ((h34 / h14) * p3 / (a * b * g * p1)).sqrt();
    let y4 = h14 * p1 * (ab + a * bb + a * b * gb * (1.0 + r4).powi(2) + a * b * g * (1.0 + r4 + r34).powi(2)) / ch.n4();
    let r3 = ((h23 / h13) * (d * p2) / (a * b * p1)).sqrt();
    let y3 = h13 * p1 * (ab + a * bb + a * b * gb * (1.0 + r3).powi(2) + (h23 / h13) * (db * p2) / p1) / ch.n3();
    Some((capacity(y4), capacity(y3)))
}

/// Per-parameter grid resolution of a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Grid {
    pub alpha: usize,
    pub beta: usize,
    pub gamma: usize,
    pub delta: usize,
}

pub const DEFAULT_RESOLUTION: usize = 33;

impl Default for Grid {
    fn default() -> Self {
        Grid::uniform(DEFAULT_RESOLUTION)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
#[error("grid resolution for {param} must be at least 2, got {value}")]
pub struct GridError {
    pub param: &'static str,
    pub value: usize,
}

impl Grid {
    pub fn uniform(n: usize) -> Self {
        Grid { alpha: n, beta: n, gamma: n, delta: n }
    }

    pub fn validate(&self) -> Result<(), GridError> {
        for (param, value) in [("alpha", self.alpha), ("beta", self.beta), ("gamma", self.gamma), ("delta", self.delta)] {
            if value < 2 {
                return Err(GridError { param, value });
            }
        }
        Ok(())
    }

    /// The grid with every spacing halved; contains every point of `self`.
    pub fn refined(&self) -> Self {
        let r = |n: usize| 2 * n - 1;
        Grid { alpha: r(self.alpha), beta: r(self.beta), gamma: r(self.gamma), delta: r(self.delta) }
    }

    pub fn len(&self) -> usize {
        self.alpha * self.beta * self.gamma * self.delta
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

fn axis(n: usize) -> Vec<f64> {
    (0..n).map(|i| i as f64 / (n - 1) as f64).collect()
}

/// Pareto boundary of the union of slice pentagons over the grid, with the
/// split achieving each boundary point.
///
/// Work is split by `alpha` value; each chunk is reduced to its own
/// Pareto set and chunks are merged in grid order, so the result does not
/// depend on scheduling.
pub fn sweep_region(ch: &Channel, grid: &Grid) -> Result<RateRegion, GridError> {
    grid.validate()?;
    let (alphas, betas, gammas, deltas) = (axis(grid.alpha), axis(grid.beta), axis(grid.gamma), axis(grid.delta));
    let chunks: Vec<(Vec<RatePair>, Vec<SplitParams>)> = alphas
        .par_iter()
        .map(|&alpha| {
            let mut points = Vec::with_capacity(2 * betas.len() * gammas.len() * deltas.len());
            let mut splits = Vec::with_capacity(points.capacity());
            for &beta in &betas {
                for &gamma in &gammas {
                    for &delta in &deltas {
                        let s = SplitParams { alpha, beta, gamma, delta };
                        for corner in pdf_region_slice(ch, &s).corners() {
                            points.push(corner);
                            splits.push(s);
                        }
                    }
                }
            }
            let keep = pareto_indices(&points);
            (keep.iter().map(|&i| points[i]).collect(), keep.iter().map(|&i| splits[i]).collect())
        })
        .collect();
    let (points, splits): (Vec<RatePair>, Vec<SplitParams>) =
        chunks.into_iter().flat_map(|(p, s)| p.into_iter().zip(s)).unzip();
    let keep = pareto_indices(&points);
    let region = RateRegion {
        provenance: Provenance::Pdf,
        frontier: keep.iter().map(|&i| points[i]).collect(),
        witnesses: Some(keep.iter().map(|&i| splits[i]).collect()),
    };
    Ok(region.with_axis_intercepts())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{ChannelConfig, Gains};
    use crate::oracle::oracle_terms;
    use crate::region::equal_rate_point;
    use proptest::prelude::*;

    fn unit(h: f64) -> Channel {
        ChannelConfig::unit_power(Gains::uniform(h)).validate().unwrap()
    }

    fn split(a: f64, b: f64, g: f64, d: f64) -> SplitParams {
        SplitParams::new(a, b, g, d).unwrap()
    }

    fn scenario(h: [f64; 6]) -> Channel {
        ChannelConfig::unit_power(Gains::from_links(h)).validate().unwrap()
    }

    const SCENARIO_A: [f64; 6] = [1.0, 10.0, 1.0, 10.0, 10.0, 1.0];
    const SCENARIO_B: [f64; 6] = [10.0, 10.0, 1.0, 10.0, 10.0, 10.0];

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1e-300)
    }

    #[test]
    fn phi1_without_relaying() {
        let phi = compute_phis(&unit(1.0), &split(0.0, 0.3, 0.6, 0.9));
        assert_eq!(phi.phi1, 0.5);
    }

    #[test]
    fn phi3_vanishes_with_full_cooperation() {
        let phi = compute_phis(&unit(1.0), &split(1.0, 0.3, 0.6, 1.0));
        assert_eq!(phi.phi3, 0.0);
    }

    #[test]
    fn phi2_scenario_b_matches_oracle() {
        let ch = scenario(SCENARIO_B);
        let s = split(0.5, 0.5, 0.5, 0.5);
        let closed = compute_phis(&ch, &s).phi2;
        let oracle = oracle_terms(&ch, &s).unwrap().phis().phi2;
        assert!(rel(closed, oracle) <= 1e-12);
        // Frozen from an independent numpy log-det evaluation.
        assert!((closed - 2.188_753_950_497_442_3).abs() <= 1e-12, "{closed}");
    }

    #[test]
    fn full_cooperation_kills_r2() {
        let slice = pdf_region_slice(&unit(3.0), &split(0.2, 0.4, 0.6, 1.0));
        assert_eq!(slice.bound_r2, 0.0);
    }

    #[test]
    fn alpha_beta_one_kills_r1() {
        let slice = pdf_region_slice(&unit(3.0), &split(1.0, 1.0, 0.6, 0.2));
        assert_eq!(slice.bound_r1, 0.0);
    }

    #[test]
    fn slice_scenario_a_matches_oracle_term_by_term() {
        let ch = scenario(SCENARIO_A);
        let s = split(0.5, 0.5, 0.5, 0.5);
        let closed = pdf_terms(&ch, &s);
        let oracle = oracle_terms(&ch, &s).unwrap();
        for (name, (c, o)) in PdfTerms::NAMES.iter().zip(closed.as_array().into_iter().zip(oracle.as_array())) {
            assert!(rel(c, o) <= 1e-12, "{name}: {c} vs {o}");
        }
        let slice = closed.slice();
        let expected = oracle.slice();
        assert!(rel(slice.bound_r1, expected.bound_r1) <= 1e-12);
        assert!(rel(slice.bound_r2, expected.bound_r2) <= 1e-12);
        assert!(rel(slice.bound_sum, expected.bound_sum) <= 1e-12);
    }

    #[test]
    fn ratio_form_phi2_differs_only_by_private_part_at_y4() {
        let ch = scenario(SCENARIO_A);
        let s = split(0.4, 0.7, 0.3, 0.6);
        let (ratio_y4, ratio_y3) = phi2_ratio_form(&ch, &s).unwrap();
        let terms = pdf_terms(&ch, &s);
        assert!(rel(ratio_y3, terms.phi2_y3) <= 1e-12);
        // Adding h24·δ̄·P2 back to the ratio-form Y4 SNR recovers the oracle term.
        let ratio_snr = (2f64.powf(2.0 * ratio_y4) - 1.0) * ch.n4();
        let fixed = capacity((ratio_snr + ch.h(Link::H24) * s.delta_bar() * ch.p2()) / ch.n4());
        assert!(rel(fixed, terms.phi2_y4) <= 1e-12);
        assert!(ratio_y4 < terms.phi2_y4);
        assert!(phi2_ratio_form(&ch, &split(0.0, 0.5, 0.5, 0.5)).is_none());
    }

    #[test]
    fn degenerate_grid_rejected() {
        let mut grid = Grid::uniform(5);
        grid.gamma = 1;
        assert_eq!(sweep_region(&unit(1.0), &grid), Err(GridError { param: "gamma", value: 1 }));
    }

    #[test]
    fn disconnected_network_has_trivial_region() {
        let region = sweep_region(&unit(0.0), &Grid::uniform(5)).unwrap();
        assert_eq!(region.frontier, vec![RatePair { r1: 0.0, r2: 0.0 }]);
    }

    #[test]
    fn sweep_is_deterministic_and_witnessed() {
        let ch = scenario(SCENARIO_B);
        let grid = Grid::uniform(9);
        let a = sweep_region(&ch, &grid).unwrap();
        let b = sweep_region(&ch, &grid).unwrap();
        assert_eq!(a, b);
        let witnesses = a.witnesses.as_ref().unwrap();
        assert_eq!(witnesses.len(), a.frontier.len());
        for (p, s) in a.frontier.iter().zip(witnesses) {
            assert!(pdf_region_slice(&ch, s).contains(*p, 1e-12), "{p:?} not in slice of {s:?}");
        }
        for w in a.frontier.windows(2) {
            assert!(w[0].r1 <= w[1].r1 && w[0].r2 >= w[1].r2);
        }
    }

    #[test]
    fn refined_grid_never_shrinks() {
        let ch = scenario(SCENARIO_A);
        let coarse = sweep_region(&ch, &Grid::uniform(5)).unwrap();
        let fine = sweep_region(&ch, &Grid::uniform(5).refined()).unwrap();
        assert!(fine.encloses(&coarse, 1e-12));
        assert!(equal_rate_point(&fine).unwrap() >= equal_rate_point(&coarse).unwrap() - 1e-9);
    }

    fn arb_channel() -> impl Strategy<Value = Channel> {
        (proptest::array::uniform6(0.0f64..10.0), proptest::array::uniform3(0.1f64..10.0), proptest::array::uniform3(0.1f64..10.0))
            .prop_map(|(h, p, n)| ChannelConfig::new(Gains::from_links(h), p, n).validate().unwrap())
    }

    fn arb_split() -> impl Strategy<Value = SplitParams> {
        (0.0f64..=1.0, 0.0f64..=1.0, 0.0f64..=1.0, 0.0f64..=1.0).prop_map(|(a, b, g, d)| split(a, b, g, d))
    }

    fn boundary_split() -> impl Strategy<Value = SplitParams> {
        let v = prop_oneof![Just(0.0), Just(1.0), 0.0f64..=1.0];
        (v.clone(), v.clone(), v.clone(), v).prop_map(|(a, b, g, d)| split(a, b, g, d))
    }

    proptest! {
        #[test]
        fn closed_forms_match_oracle_everywhere(ch in arb_channel(), s in boundary_split()) {
            let closed = pdf_terms(&ch, &s);
            let oracle = oracle_terms(&ch, &s).unwrap();
            for (name, (c, o)) in PdfTerms::NAMES.iter().zip(closed.as_array().into_iter().zip(oracle.as_array())) {
                prop_assert!((c - o).abs() <= 1e-9 * o.abs().max(1e-12), "{}: {} vs {}", name, c, o);
            }
        }

        #[test]
        fn delta_one_forces_zero_r2(ch in arb_channel(), a in 0.0f64..=1.0, b in 0.0f64..=1.0, g in 0.0f64..=1.0) {
            prop_assert_eq!(pdf_region_slice(&ch, &split(a, b, g, 1.0)).bound_r2, 0.0);
        }

        #[test]
        fn snr_scaling_invariance(ch in arb_channel(), s in arb_split(), k in -8i32..8) {
            let scaled = ch.config().scaled(4f64.powi(k)).validate().unwrap();
            prop_assert_eq!(pdf_region_slice(&ch, &s), pdf_region_slice(&scaled, &s));
        }

        #[test]
        fn snr_scaling_invariance_generic(ch in arb_channel(), s in arb_split(), k in 0.01f64..100.0) {
            let scaled = ch.config().scaled(k).validate().unwrap();
            let (x, y) = (pdf_region_slice(&ch, &s), pdf_region_slice(&scaled, &s));
            for (u, v) in [(x.bound_r1, y.bound_r1), (x.bound_r2, y.bound_r2), (x.bound_sum, y.bound_sum)] {
                prop_assert!((u - v).abs() <= 1e-12 * u.max(1.0));
            }
        }

        #[test]
        fn slice_bounds_nonnegative(ch in arb_channel(), s in arb_split()) {
            let slice = pdf_region_slice(&ch, &s);
            prop_assert!(slice.bound_r1 >= 0.0 && slice.bound_r2 >= 0.0 && slice.bound_sum >= 0.0);
            for c in slice.corners() {
                prop_assert!(slice.contains(c, 1e-12));
            }
        }
    }
}
