//! Physical parameters of the two-pair network and the Gaussian capacity
//! primitive shared by every evaluator.
//!
//! Users 1 and 2 transmit, users 2, 3 and 4 receive. User 1 talks to user 4
//! (the source pair) and user 2 talks to user 3 (the relay pair). User 3 also
//! transmits `X₃` to forward the relayed part of user 1's message.

use std::f64::consts::LN_2;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// `½·log₂(1 + snr)` in bits per channel use.
///
/// ```
/// use pcn_region::capacity_fn;
/// assert_eq!(capacity_fn(3.0), Ok(1.0));
/// assert!(capacity_fn(-1.0).is_err());
/// ```
pub fn capacity_fn(snr: f64) -> Result<f64, DomainError> {
    if !snr.is_finite() || snr < 0.0 {
        return Err(DomainError(snr));
    }
    Ok(capacity(snr))
}

/// Unchecked variant of [`capacity_fn`] for callers whose SNR is nonnegative
/// by construction.
#[inline]
pub(crate) fn capacity(snr: f64) -> f64 {
    snr.ln_1p() / (2.0 * LN_2)
}

#[derive(Debug, Clone, Copy, PartialEq, Error)]
#[error("capacity is defined for finite snr >= 0, got {0}")]
pub struct DomainError(pub f64);

/// A directed link from a transmitting user to a receiving user.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Link {
    H12,
    H13,
    H14,
    H23,
    H24,
    H34,
}

impl Link {
    pub const ALL: [Link; 6] = [Link::H12, Link::H13, Link::H14, Link::H23, Link::H24, Link::H34];

    pub fn key(self) -> &'static str {
        match self {
            Link::H12 => "h12",
            Link::H13 => "h13",
            Link::H14 => "h14",
            Link::H23 => "h23",
            Link::H24 => "h24",
            Link::H34 => "h34",
        }
    }

    fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Link {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

/// Power gains keyed by directed link. No symmetry is assumed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Gains([f64; 6]);

impl Gains {
    /// Gains in `Link::ALL` order: h12, h13, h14, h23, h24, h34.
    pub fn from_links(values: [f64; 6]) -> Self {
        Gains(values)
    }

    pub fn uniform(h: f64) -> Self {
        Gains([h; 6])
    }

    pub fn get(&self, link: Link) -> f64 {
        self.0[link.index()]
    }

    pub fn set(&mut self, link: Link, value: f64) {
        self.0[link.index()] = value;
    }

    pub fn as_array(&self) -> [f64; 6] {
        self.0
    }
}

/// Raw network parameters. Use [`validate_config`] (or
/// [`ChannelConfig::validate`]) to obtain a [`Channel`] the evaluators accept.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelConfig {
    pub gains: Gains,
    /// Transmit powers `P₁, P₂, P₃`.
    pub powers: [f64; 3],
    /// Receiver noise variances `N₂, N₃, N₄`.
    pub noises: [f64; 3],
}

impl ChannelConfig {
    pub fn new(gains: Gains, powers: [f64; 3], noises: [f64; 3]) -> Self {
        ChannelConfig { gains, powers, noises }
    }

    /// Unit powers and unit noises, the setting of the numerical scenarios.
    pub fn unit_power(gains: Gains) -> Self {
        ChannelConfig::new(gains, [1.0; 3], [1.0; 3])
    }

    pub fn validate(self) -> Result<Channel, ValidationReport> {
        validate_config(&self)
    }

    /// The same network with every power and noise multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        ChannelConfig {
            gains: self.gains,
            powers: self.powers.map(|p| p * factor),
            noises: self.noises.map(|n| n * factor),
        }
    }
}

/// One violated constraint of a [`ChannelConfig`].
#[derive(Debug, Clone, PartialEq)]
pub struct FieldViolation {
    pub field: String,
    pub value: f64,
    pub requirement: &'static str,
}

impl fmt::Display for FieldViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {} ({})", self.field, self.value, self.requirement)
    }
}

/// Itemized list of every invalid field.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("invalid channel configuration: {}", .violations.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
pub struct ValidationReport {
    pub violations: Vec<FieldViolation>,
}

impl ValidationReport {
    pub fn names(&self, field: &str) -> bool {
        self.violations.iter().any(|v| v.field == field)
    }
}

pub const POWER_KEYS: [&str; 3] = ["P1", "P2", "P3"];
pub const NOISE_KEYS: [&str; 3] = ["N2", "N3", "N4"];

pub fn validate_config(cfg: &ChannelConfig) -> Result<Channel, ValidationReport> {
    let mut violations = Vec::new();
    for link in Link::ALL {
        let h = cfg.gains.get(link);
        if !h.is_finite() || h < 0.0 {
            violations.push(FieldViolation {
                field: link.key().to_string(),
                value: h,
                requirement: "gain must be finite and >= 0",
            });
        }
    }
    let positive = POWER_KEYS
        .iter()
        .zip(cfg.powers)
        .chain(NOISE_KEYS.iter().zip(cfg.noises));
    for (key, value) in positive {
        if !value.is_finite() || value <= 0.0 {
            violations.push(FieldViolation {
                field: key.to_string(),
                value,
                requirement: "must be finite and > 0",
            });
        }
    }
    if violations.is_empty() {
        Ok(Channel(*cfg))
    } else {
        Err(ValidationReport { violations })
    }
}

/// A [`ChannelConfig`] that passed validation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Channel(ChannelConfig);

impl Channel {
    pub fn config(&self) -> &ChannelConfig {
        &self.0
    }

    pub fn h(&self, link: Link) -> f64 {
        self.0.gains.get(link)
    }

    pub fn p1(&self) -> f64 {
        self.0.powers[0]
    }

    pub fn p2(&self) -> f64 {
        self.0.powers[1]
    }

    pub fn p3(&self) -> f64 {
        self.0.powers[2]
    }

    pub fn n2(&self) -> f64 {
        self.0.noises[0]
    }

    pub fn n3(&self) -> f64 {
        self.0.noises[1]
    }

    pub fn n4(&self) -> f64 {
        self.0.noises[2]
    }
}

impl std::ops::Deref for Channel {
    type Target = ChannelConfig;

    fn deref(&self) -> &ChannelConfig {
        &self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Error)]
#[error("split fraction {name} = {value} is outside [0, 1]")]
pub struct SplitError {
    pub name: &'static str,
    pub value: f64,
}

/// Power-split fractions of the superposition signaling.
///
/// `alpha` is the share of user 1's power spent on the relayed part,
/// `beta` the share of that relayed part already known at the relay
/// receiver, `gamma` the share of the common part already forwarded by
/// user 3, and `delta` the share of user 2's power spent on cooperation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SplitParams {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub delta: f64,
}

impl SplitParams {
    pub fn new(alpha: f64, beta: f64, gamma: f64, delta: f64) -> Result<Self, SplitError> {
        let s = SplitParams { alpha, beta, gamma, delta };
        for (name, value) in [("alpha", alpha), ("beta", beta), ("gamma", gamma), ("delta", delta)] {
            if !(0.0..=1.0).contains(&value) {
                return Err(SplitError { name, value });
            }
        }
        Ok(s)
    }

    pub fn alpha_bar(&self) -> f64 {
        1.0 - self.alpha
    }

    pub fn beta_bar(&self) -> f64 {
        1.0 - self.beta
    }

    pub fn gamma_bar(&self) -> f64 {
        1.0 - self.gamma
    }

    pub fn delta_bar(&self) -> f64 {
        1.0 - self.delta
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Error)]
#[error("rates must be finite and >= 0, got {0}")]
pub struct RateError(pub f64);

fn check_rate(r: f64) -> Result<f64, RateError> {
    if r.is_finite() && r >= 0.0 {
        Ok(r)
    } else {
        Err(RateError(r))
    }
}

/// Rates `(R₁, R₂)` of the source and relay pairs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RatePair {
    pub r1: f64,
    pub r2: f64,
}

impl RatePair {
    pub fn new(r1: f64, r2: f64) -> Result<Self, RateError> {
        Ok(RatePair { r1: check_rate(r1)?, r2: check_rate(r2)? })
    }

    /// True when `self` is at least as large in both coordinates and
    /// strictly larger in one.
    pub fn dominates(&self, other: &RatePair) -> bool {
        self.r1 >= other.r1 && self.r2 >= other.r2 && (self.r1 > other.r1 || self.r2 > other.r2)
    }
}

/// Split rates `(R₁₁, R₁₂, R₂)`; `R₁ = R₁₁ + R₁₂`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateTriple {
    pub r11: f64,
    pub r12: f64,
    pub r2: f64,
}

impl RateTriple {
    pub fn new(r11: f64, r12: f64, r2: f64) -> Result<Self, RateError> {
        Ok(RateTriple { r11: check_rate(r11)?, r12: check_rate(r12)?, r2: check_rate(r2)? })
    }

    pub fn r1(&self) -> f64 {
        self.r11 + self.r12
    }

    pub fn pair(&self) -> RatePair {
        RatePair { r1: self.r1(), r2: self.r2 }
    }
}
