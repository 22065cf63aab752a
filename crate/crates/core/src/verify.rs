//! Seeded self-checks: closed forms against the Gaussian oracle, and the
//! reduced region against the exact projection of the split-rate system.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::channel::{ChannelConfig, Gains, SplitParams};
use crate::discrete::{eval_region1, random_factored_pmf};
use crate::error::Result;
use crate::fme::{rat, reduce_region1, region2_system, regions_equal, ExactBounds, Rational};
use crate::gaussian::{pdf_terms, PdfTerms};
use crate::oracle::oracle_terms;
use crate::scenario::relative_deviation;

/// Relative agreement required between closed forms and the oracle.
pub const ORACLE_REL_TOL: f64 = 1e-9;

/// Range of every random gain, power and noise.
pub const PARAM_RANGE: std::ops::RangeInclusive<f64> = 0.1..=10.0;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TermDeviation {
    pub draw: usize,
    pub term: &'static str,
    pub closed_form: f64,
    pub oracle: f64,
    pub relative: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleAgreement {
    pub draws: usize,
    pub max_relative_deviation: f64,
    /// The term attaining the maximum.
    pub worst: Option<TermDeviation>,
    /// Draws where the oracle itself failed.
    pub oracle_failures: Vec<String>,
}

impl OracleAgreement {
    pub fn passed(&self) -> bool {
        self.oracle_failures.is_empty() && self.max_relative_deviation <= ORACLE_REL_TOL
    }
}

/// A random channel with every field in [`PARAM_RANGE`] and a split in the
/// open unit cube.
pub fn random_instance<R: Rng>(rng: &mut R) -> (ChannelConfig, SplitParams) {
    let mut draw = || rng.gen_range(PARAM_RANGE);
    let gains = Gains::from_links(std::array::from_fn(|_| draw()));
    let powers = std::array::from_fn(|_| draw());
    let noises = std::array::from_fn(|_| draw());
    let mut open = || loop {
        let x: f64 = rng.gen();
        if x > 0.0 {
            break x;
        }
    };
    let s = SplitParams { alpha: open(), beta: open(), gamma: open(), delta: open() };
    (ChannelConfig::new(gains, powers, noises), s)
}

pub fn oracle_agreement(seed: u64, draws: usize) -> OracleAgreement {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = OracleAgreement { draws, max_relative_deviation: 0.0, worst: None, oracle_failures: Vec::new() };
    for draw in 0..draws {
        let (cfg, s) = random_instance(&mut rng);
        let ch = cfg.validate().expect("draws lie in the valid range");
        let closed = pdf_terms(&ch, &s);
        let oracle = match oracle_terms(&ch, &s) {
            Ok(t) => t,
            Err(e) => {
                out.oracle_failures.push(format!("draw {draw}: {e}"));
                continue;
            }
        };
        for ((term, c), o) in PdfTerms::NAMES.iter().zip(closed.as_array()).zip(oracle.as_array()) {
            let relative = relative_deviation(c, o);
            if relative > out.max_relative_deviation || out.worst.is_none() {
                out.max_relative_deviation = out.max_relative_deviation.max(relative);
                out.worst = Some(TermDeviation { draw, term, closed_form: c, oracle: o, relative });
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FmEquivalence {
    pub random_sets: usize,
    pub pmf_sets: usize,
    /// Largest snap error of the constants computed from distributions.
    pub max_snap_error: f64,
    pub mismatches: Vec<String>,
}

impl FmEquivalence {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

fn random_rational<R: Rng>(rng: &mut R) -> Rational {
    rat(rng.gen_range(0..=60), rng.gen_range(1..=12))
}

/// Nine random nonnegative rationals with `min(c₁, c₂) ≤ min(d₁, d₂)`.
pub fn random_ordered_bounds<R: Rng>(rng: &mut R) -> ExactBounds {
    loop {
        let k = ExactBounds::from_array(std::array::from_fn(|_| random_rational(rng)));
        if k.c() <= k.d() {
            return k;
        }
    }
}

fn compare(label: String, k: &ExactBounds, mismatches: &mut Vec<String>) -> Result<()> {
    let cmp = regions_equal(&reduce_region1(k), &region2_system(k))?;
    if !cmp.equal {
        let witness: Vec<String> = cmp.witness.unwrap_or_default().iter().map(|(v, x)| format!("{v}={x}")).collect();
        mismatches.push(format!("{label}: regions differ at {}", witness.join(", ")));
    }
    Ok(())
}

/// Checks the projection equals the reduced region for `random_sets`
/// random rational constants and for the constants of `pmf_sets` random
/// factored binary distributions.
pub fn fm_equivalence(seed: u64, random_sets: usize, pmf_sets: usize) -> Result<FmEquivalence> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = FmEquivalence { random_sets, pmf_sets, max_snap_error: 0.0, mismatches: Vec::new() };
    for i in 0..random_sets {
        let k = random_ordered_bounds(&mut rng);
        compare(format!("random set {i}"), &k, &mut out.mismatches)?;
    }
    for i in 0..pmf_sets {
        let p = random_factored_pmf(&mut rng);
        let k = ExactBounds::snapped(&eval_region1(&p)?)?;
        out.max_snap_error = out.max_snap_error.max(k.snap_error);
        compare(format!("distribution {i}"), &k, &mut out.mismatches)?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_oracle_run_agrees() {
        let r = oracle_agreement(7, 50);
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.draws, 50);
    }

    #[test]
    fn seeds_reproduce() {
        assert_eq!(oracle_agreement(3, 10), oracle_agreement(3, 10));
        let mut a = ChaCha8Rng::seed_from_u64(1);
        let mut b = ChaCha8Rng::seed_from_u64(1);
        assert_eq!(random_instance(&mut a), random_instance(&mut b));
    }

    #[test]
    fn instances_stay_in_range() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let (cfg, s) = random_instance(&mut rng);
            let fields = cfg.gains.as_array().into_iter().chain(cfg.powers).chain(cfg.noises);
            assert!(fields.into_iter().all(|x| PARAM_RANGE.contains(&x)));
            assert!([s.alpha, s.beta, s.gamma, s.delta].iter().all(|&x| x > 0.0 && x < 1.0));
        }
    }

    #[test]
    fn small_fm_run_agrees() {
        let r = fm_equivalence(5, 10, 3).unwrap();
        assert!(r.passed(), "{r:?}");
        assert!(r.max_snap_error <= crate::fme::SNAP_TOL);
    }
}
