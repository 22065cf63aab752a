//! Mutual information on finite alphabets and the general (non-Gaussian)
//! form of the partial decode-and-forward region.

use std::collections::HashSet;
use std::f64::consts::LN_2;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::channel::{RatePair, RateTriple};
use crate::region::{pentagon, Provenance, RateRegion};

/// Total mass must be 1 within this tolerance.
pub const MASS_TOL: f64 = 1e-12;

/// Tolerance on the input factorization check of [`eval_region1`].
pub const FACTORIZATION_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PmfLimits {
    pub max_symbols: usize,
    pub max_entries: usize,
}

impl Default for PmfLimits {
    fn default() -> Self {
        PmfLimits { max_symbols: 4, max_entries: 1_000_000 }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PmfError {
    #[error("{names} names for {cards} alphabets")]
    Shape { names: usize, cards: usize },
    #[error("table has {got} entries, alphabets require {expected}")]
    TableSize { got: usize, expected: usize },
    #[error("variable {name} has {size} symbols, limit is {limit}")]
    Alphabet { name: String, size: usize, limit: usize },
    #[error("joint table needs {entries} entries, limit is {limit}")]
    TooLarge { entries: usize, limit: usize },
    #[error("duplicate variable {0}")]
    Duplicate(String),
    #[error("probability {value} at entry {index} is negative or not finite")]
    Negative { index: usize, value: f64 },
    #[error("total mass {0} differs from 1")]
    NotNormalized(f64),
    #[error("unknown variable {0}")]
    UnknownVariable(String),
    #[error("variable {0} appears in more than one argument set")]
    Overlap(String),
    #[error("input law does not factor: {conditional} deviates by {deviation:e}")]
    Factorization { conditional: &'static str, deviation: f64 },
    #[error("channel returned {got} probabilities, expected {expected}")]
    ChannelShape { got: usize, expected: usize },
}

/// Probability table over the product of named finite alphabets, stored in
/// row-major order (the last variable varies fastest).
#[derive(Debug, Clone, PartialEq)]
pub struct JointPmf {
    names: Vec<String>,
    cards: Vec<usize>,
    probs: Vec<f64>,
}

impl JointPmf {
    pub fn new(names: Vec<String>, cards: Vec<usize>, probs: Vec<f64>) -> Result<Self, PmfError> {
        Self::with_limits(names, cards, probs, PmfLimits::default())
    }

    pub fn with_limits(names: Vec<String>, cards: Vec<usize>, probs: Vec<f64>, limits: PmfLimits) -> Result<Self, PmfError> {
        check_shape(&names, &cards, limits)?;
        let expected: usize = cards.iter().product();
        if probs.len() != expected {
            return Err(PmfError::TableSize { got: probs.len(), expected });
        }
        if let Some((index, &value)) = probs.iter().enumerate().find(|(_, p)| !p.is_finite() || **p < 0.0) {
            return Err(PmfError::Negative { index, value });
        }
        let mass: f64 = probs.iter().sum();
        if (mass - 1.0).abs() > MASS_TOL {
            return Err(PmfError::NotNormalized(mass));
        }
        Ok(JointPmf { names, cards, probs })
    }

    /// Uniform law over the given alphabets.
    pub fn uniform(names: &[&str], cards: &[usize]) -> Result<Self, PmfError> {
        let n: usize = cards.iter().product();
        Self::new(names.iter().map(|s| s.to_string()).collect(), cards.to_vec(), vec![1.0 / n as f64; n])
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn cards(&self) -> &[usize] {
        &self.cards
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    fn resolve<S: AsRef<str>>(&self, set: &[S]) -> Result<Vec<usize>, PmfError> {
        set.iter()
            .map(|s| self.index_of(s.as_ref()).ok_or_else(|| PmfError::UnknownVariable(s.as_ref().to_string())))
            .collect()
    }

    /// Symbol tuple of a flat table index.
    pub fn symbols(&self, mut index: usize) -> Vec<usize> {
        let mut out = vec![0; self.cards.len()];
        for (slot, &card) in out.iter_mut().zip(&self.cards).rev() {
            *slot = index % card;
            index /= card;
        }
        out
    }

    /// Flat index of a tuple restricted to `vars`, in a table whose
    /// alphabets are `cards[vars]`.
    fn sub_index(&self, symbols: &[usize], vars: &[usize]) -> usize {
        vars.iter().fold(0, |acc, &v| acc * self.cards[v] + symbols[v])
    }

    fn sub_size(&self, vars: &[usize]) -> usize {
        vars.iter().map(|&v| self.cards[v]).product()
    }

    fn marginal_table(&self, vars: &[usize]) -> Vec<f64> {
        let mut out = vec![0.0; self.sub_size(vars)];
        for (i, &p) in self.probs.iter().enumerate() {
            if p > 0.0 {
                out[self.sub_index(&self.symbols(i), vars)] += p;
            }
        }
        out
    }

    /// Law of a subset of the variables, in the order given.
    pub fn marginal<S: AsRef<str>>(&self, vars: &[S]) -> Result<JointPmf, PmfError> {
        let idx = self.resolve(vars)?;
        distinct(&idx, &self.names)?;
        Ok(JointPmf {
            names: idx.iter().map(|&i| self.names[i].clone()).collect(),
            cards: idx.iter().map(|&i| self.cards[i]).collect(),
            probs: self.marginal_table(&idx),
        })
    }

    /// Extends an input law with outputs drawn through a channel.
    ///
    /// `channel` receives the input symbols (in `self`'s variable order) and
    /// returns the conditional law of the outputs as a row-major table over
    /// their alphabets.
    pub fn with_channel<F>(&self, outputs: &[(&str, usize)], channel: F) -> Result<JointPmf, PmfError>
    where
        F: Fn(&[usize]) -> Vec<f64>,
    {
        let mut names = self.names.clone();
        let mut cards = self.cards.clone();
        for &(name, card) in outputs {
            names.push(name.to_string());
            cards.push(card);
        }
        check_shape(&names, &cards, PmfLimits::default())?;
        let out_size: usize = outputs.iter().map(|o| o.1).product();
        let mut probs = Vec::with_capacity(self.probs.len() * out_size);
        for (i, &p) in self.probs.iter().enumerate() {
            let law = channel(&self.symbols(i));
            if law.len() != out_size {
                return Err(PmfError::ChannelShape { got: law.len(), expected: out_size });
            }
            probs.extend(law.into_iter().map(|q| p * q));
        }
        JointPmf::new(names, cards, probs)
    }
}

fn check_shape(names: &[String], cards: &[usize], limits: PmfLimits) -> Result<(), PmfError> {
    if names.len() != cards.len() {
        return Err(PmfError::Shape { names: names.len(), cards: cards.len() });
    }
    let mut seen = HashSet::new();
    for (name, &card) in names.iter().zip(cards) {
        if !seen.insert(name) {
            return Err(PmfError::Duplicate(name.clone()));
        }
        if card == 0 || card > limits.max_symbols {
            return Err(PmfError::Alphabet { name: name.clone(), size: card, limit: limits.max_symbols });
        }
    }
    let entries = cards.iter().try_fold(1usize, |acc, &c| acc.checked_mul(c)).unwrap_or(usize::MAX);
    if entries > limits.max_entries {
        return Err(PmfError::TooLarge { entries, limit: limits.max_entries });
    }
    Ok(())
}

fn distinct(idx: &[usize], names: &[String]) -> Result<(), PmfError> {
    let mut seen = HashSet::new();
    for &i in idx {
        if !seen.insert(i) {
            return Err(PmfError::Overlap(names[i].clone()));
        }
    }
    Ok(())
}

/// Conditional law of outputs that are deterministic functions of the
/// inputs; `f` maps input symbols to output symbols.
pub fn deterministic_channel<F>(cards: Vec<usize>, f: F) -> impl Fn(&[usize]) -> Vec<f64>
where
    F: Fn(&[usize]) -> Vec<usize>,
{
    let size: usize = cards.iter().product();
    move |x| {
        let y = f(x);
        let idx = y.iter().zip(&cards).fold(0, |acc, (&s, &c)| acc * c + s);
        let mut law = vec![0.0; size];
        law[idx] = 1.0;
        law
    }
}

/// Single output that equals `f(x)` with probability `1 - eps` and is
/// uniform over the other symbols otherwise.
pub fn symmetric_noise_channel<F>(card: usize, eps: f64, f: F) -> impl Fn(&[usize]) -> Vec<f64>
where
    F: Fn(&[usize]) -> usize,
{
    move |x| {
        let clean = f(x);
        (0..card)
            .map(|y| if y == clean { 1.0 - eps } else { eps / (card - 1) as f64 })
            .collect()
    }
}

/// `I(A; B | C)` in bits by direct summation of
/// `p(a,b,c)·log₂[p(a,b,c)·p(c) / (p(a,c)·p(b,c))]`.
pub fn conditional_mi_pmf<S: AsRef<str>>(p: &JointPmf, a: &[S], b: &[S], c: &[S]) -> Result<f64, PmfError> {
    let (ia, ib, ic) = (p.resolve(a)?, p.resolve(b)?, p.resolve(c)?);
    let all: Vec<usize> = ia.iter().chain(&ib).chain(&ic).copied().collect();
    distinct(&all, &p.names)?;
    let ac: Vec<usize> = ia.iter().chain(&ic).copied().collect();
    let bc: Vec<usize> = ib.iter().chain(&ic).copied().collect();
    let joint = p.marginal_table(&all);
    let p_ac = p.marginal_table(&ac);
    let p_bc = p.marginal_table(&bc);
    let p_c = p.marginal_table(&ic);

    // Walk the joint table of (A, B, C) through a symbol tuple over all of p.
    let mut symbols = vec![0usize; p.cards.len()];
    let mut total = 0.0;
    for (k, &pabc) in joint.iter().enumerate() {
        let mut rest = k;
        for &v in all.iter().rev() {
            symbols[v] = rest % p.cards[v];
            rest /= p.cards[v];
        }
        if pabc <= 0.0 {
            continue;
        }
        let pac = p_ac[p.sub_index(&symbols, &ac)];
        let pbc = p_bc[p.sub_index(&symbols, &bc)];
        let pc = p_c[p.sub_index(&symbols, &ic)];
        total += pabc * ((pabc * pc) / (pac * pbc)).ln();
    }
    Ok((total / LN_2).max(0.0))
}

/// The nine information constants bounding the split rates. Index 1 is the
/// `Y₃` side and index 2 the `Y₄` side, except for `a` whose first entry
/// is the `Y₄` side.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundSet {
    /// `I(Y₄; X₁ | U₁, U₂, X₂, X₃)`
    pub a1: f64,
    /// `I(Y₃; X₁ | X₂, X₃, U₁, U₂)`
    pub a2: f64,
    /// `I(Y₂; U₂ | U₁, X₂, X₃)`
    pub b: f64,
    /// `I(Y₃; X₂ | X₁, X₃, U₁, U₂)`
    pub c1: f64,
    /// `I(Y₄; X₂ | U₁, U₂, X₁, X₃)`
    pub c2: f64,
    /// `I(Y₃; X₁, X₂ | X₃, U₁, U₂)`
    pub d1: f64,
    /// `I(Y₄; X₁, X₂ | U₁, U₂, X₃)`
    pub d2: f64,
    /// `I(Y₃; X₁, X₂, U₁, U₂ | X₃)`
    pub e1: f64,
    /// `I(Y₄; U₁, U₂, X₁, X₂, X₃)`
    pub e2: f64,
}

impl BoundSet {
    pub fn uniform(v: f64) -> Self {
        BoundSet { a1: v, a2: v, b: v, c1: v, c2: v, d1: v, d2: v, e1: v, e2: v }
    }

    pub fn a(&self) -> f64 {
        self.a1.min(self.a2)
    }

    pub fn c(&self) -> f64 {
        self.c1.min(self.c2)
    }

    pub fn d(&self) -> f64 {
        self.d1.min(self.d2)
    }

    pub fn e(&self) -> f64 {
        self.e1.min(self.e2)
    }

    pub fn as_array(&self) -> [f64; 9] {
        [self.a1, self.a2, self.b, self.c1, self.c2, self.d1, self.d2, self.e1, self.e2]
    }

    pub fn from_array(v: [f64; 9]) -> Self {
        BoundSet { a1: v[0], a2: v[1], b: v[2], c1: v[3], c2: v[4], d1: v[5], d2: v[6], e1: v[7], e2: v[8] }
    }

    /// Orderings every set computed from a genuine law satisfies.
    pub fn is_chain_consistent(&self, tol: f64) -> bool {
        self.c() <= self.d() + tol && self.d() <= self.e() + tol && self.a() <= self.d() + tol
    }

    /// Whether split rates satisfy every constraint before elimination.
    pub fn admits(&self, t: &RateTriple, tol: f64) -> bool {
        t.r11 <= self.a() + tol
            && t.r12 <= self.b + tol
            && t.r2 <= self.c() + tol
            && t.r2 + t.r11 <= self.d() + tol
            && t.r2 + t.r11 + t.r12 <= self.e() + tol
    }

    /// The three bounds of the reduced region: `R₁`, `R₂`, `R₁ + R₂`.
    pub fn reduced(&self) -> (f64, f64, f64) {
        (self.b + self.a(), self.c(), self.e().min(self.b + self.d()))
    }

    pub fn admits_pair(&self, p: &RatePair, tol: f64) -> bool {
        let (r1, r2, sum) = self.reduced();
        p.r1 >= -tol && p.r2 >= -tol && p.r1 <= r1 + tol && p.r2 <= r2 + tol && p.r1 + p.r2 <= sum + tol
    }
}

pub const NETWORK_VARS: [&str; 8] = ["X1", "X2", "X3", "U1", "U2", "Y2", "Y3", "Y4"];

/// Maximum absolute deviation between `p(x, y, z)` and
/// `p(x, z)·p(y, z) / p(z)` over the table.
fn conditional_independence_gap(p: &JointPmf, x: &[usize], y: &[usize], z: &[usize]) -> f64 {
    let xyz: Vec<usize> = x.iter().chain(y).chain(z).copied().collect();
    let xz: Vec<usize> = x.iter().chain(z).copied().collect();
    let yz: Vec<usize> = y.iter().chain(z).copied().collect();
    let (t_xyz, t_xz, t_yz, t_z) = (p.marginal_table(&xyz), p.marginal_table(&xz), p.marginal_table(&yz), p.marginal_table(z));
    let mut symbols = vec![0usize; p.cards.len()];
    let mut gap: f64 = 0.0;
    for (k, &joint) in t_xyz.iter().enumerate() {
        let mut rest = k;
        for &v in xyz.iter().rev() {
            symbols[v] = rest % p.cards[v];
            rest /= p.cards[v];
        }
        let pz = t_z[p.sub_index(&symbols, z)];
        let product = if pz > 0.0 {
            t_xz[p.sub_index(&symbols, &xz)] * t_yz[p.sub_index(&symbols, &yz)] / pz
        } else {
            0.0
        };
        gap = gap.max((joint - product).abs());
    }
    gap
}

/// The information constants of a law over the eight network variables.
///
/// The input marginal must factor as
/// `p(x₃)·p(u₁|x₃)·p(u₂|u₁,x₃)·p(x₂|u₁,x₃)·p(x₁|u₁,u₂,x₃)`, i.e.
/// `X₂ ⊥ U₂ | (U₁, X₃)` and `X₁ ⊥ X₂ | (U₁, U₂, X₃)`.
pub fn eval_region1(p: &JointPmf) -> Result<BoundSet, PmfError> {
    let idx = p.resolve(&NETWORK_VARS)?;
    let [x1, x2, x3, u1, u2, ..] = idx[..] else { unreachable!() };
    let gap = conditional_independence_gap(p, &[x2], &[u2], &[u1, x3]);
    if gap > FACTORIZATION_TOL {
        return Err(PmfError::Factorization { conditional: "p(x2 | u1, x3)", deviation: gap });
    }
    let gap = conditional_independence_gap(p, &[x1], &[x2], &[u1, u2, x3]);
    if gap > FACTORIZATION_TOL {
        return Err(PmfError::Factorization { conditional: "p(x1 | u1, u2, x3)", deviation: gap });
    }
    let mi = |a: &[&str], b: &[&str], c: &[&str]| conditional_mi_pmf(p, a, b, c);
    Ok(BoundSet {
        a1: mi(&["Y4"], &["X1"], &["U1", "U2", "X2", "X3"])?,
        a2: mi(&["Y3"], &["X1"], &["X2", "X3", "U1", "U2"])?,
        b: mi(&["Y2"], &["U2"], &["U1", "X2", "X3"])?,
        c1: mi(&["Y3"], &["X2"], &["X1", "X3", "U1", "U2"])?,
        c2: mi(&["Y4"], &["X2"], &["U1", "U2", "X1", "X3"])?,
        d1: mi(&["Y3"], &["X1", "X2"], &["X3", "U1", "U2"])?,
        d2: mi(&["Y4"], &["X1", "X2"], &["U1", "U2", "X3"])?,
        e1: mi(&["Y3"], &["X1", "X2", "U1", "U2"], &["X3"])?,
        e2: mi(&["Y4"], &["U1", "U2", "X1", "X2", "X3"], &[])?,
    })
}

fn random_simplex<R: Rng>(rng: &mut R, n: usize) -> Vec<f64> {
    let w: Vec<f64> = (0..n).map(|_| rng.gen_range(0.05..1.0)).collect();
    let total: f64 = w.iter().sum();
    w.into_iter().map(|x| x / total).collect()
}

/// Random law over the network variables with binary alphabets, drawn as
/// `p(x₃)·p(u₁|x₃)·p(u₂|u₁,x₃)·p(x₂|u₁,x₃)·p(x₁|u₁,u₂,x₃)` times a random
/// channel `p(y₂,y₃,y₄|x₁,x₂,x₃)`. Every entry is positive.
#[allow(clippy::needless_range_loop)] // indices mirror the factorization
pub fn random_factored_pmf<R: Rng>(rng: &mut R) -> JointPmf {
    let p_x3 = random_simplex(rng, 2);
    let p_u1: Vec<Vec<f64>> = (0..2).map(|_| random_simplex(rng, 2)).collect();
    let p_u2: Vec<Vec<f64>> = (0..4).map(|_| random_simplex(rng, 2)).collect();
    let p_x2: Vec<Vec<f64>> = (0..4).map(|_| random_simplex(rng, 2)).collect();
    let p_x1: Vec<Vec<f64>> = (0..8).map(|_| random_simplex(rng, 2)).collect();
    let channel: Vec<Vec<f64>> = (0..8).map(|_| random_simplex(rng, 8)).collect();
    // Table order follows NETWORK_VARS: X1, X2, X3, U1, U2.
    let mut probs = Vec::with_capacity(32);
    for x1 in 0..2 {
        for x2 in 0..2 {
            for x3 in 0..2 {
                for u1 in 0..2 {
                    for u2 in 0..2 {
                        probs.push(
                            p_x3[x3]
                                * p_u1[x3][u1]
                                * p_u2[2 * u1 + x3][u2]
                                * p_x2[2 * u1 + x3][x2]
                                * p_x1[4 * u1 + 2 * u2 + x3][x1],
                        );
                    }
                }
            }
        }
    }
    let mass: f64 = probs.iter().sum();
    probs.iter_mut().for_each(|p| *p /= mass);
    let inputs = JointPmf::new(NETWORK_VARS[..5].iter().map(|s| s.to_string()).collect(), vec![2; 5], probs)
        .expect("valid input law");
    inputs
        .with_channel(&[("Y2", 2), ("Y3", 2), ("Y4", 2)], |x| channel[4 * x[0] + 2 * x[1] + x[2]].clone())
        .expect("valid channel")
}

/// The reduced two-rate region `{R₁ ≤ b + a, R₂ ≤ c, R₁ + R₂ ≤ min(e, b + d)}`.
pub fn eval_region2(bounds: &BoundSet) -> RateRegion {
    let (r1, r2, sum) = bounds.reduced();
    pentagon(r1, r2, sum, Provenance::Custom)
}
