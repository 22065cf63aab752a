//! Exact-rational linear inequality systems: Fourier–Motzkin elimination,
//! redundancy removal by vertex enumeration, and polytope equality.
//!
//! Used to re-derive the two-rate region from the split-rate constraints
//! and to check that the reduced form describes the same polytope.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::discrete::BoundSet;

pub type Rational = BigRational;

/// Assignment of rational values to named variables.
pub type Point = BTreeMap<String, Rational>;

/// Largest absolute error accepted when snapping a float to a rational.
pub const SNAP_TOL: f64 = 1e-12;

/// Largest dimension handled by vertex enumeration.
pub const MAX_VERTEX_DIM: usize = 3;

pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FmeError {
    #[error("vertex enumeration supports at most {MAX_VERTEX_DIM} variables, system has {0}")]
    Dimension(usize),
    #[error("system is unbounded along {direction}")]
    Unbounded { direction: String },
    #[error("systems are over different variables: {left:?} vs {right:?}")]
    VariableMismatch { left: Vec<String>, right: Vec<String> },
    #[error("cannot snap non-finite value {0} to a rational")]
    NonFinite(f64),
}

/// `Σ coeff·var ≤ rhs`. Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Inequality {
    coeffs: BTreeMap<String, Rational>,
    rhs: Rational,
}

impl Inequality {
    pub fn new<S: Into<String>>(terms: impl IntoIterator<Item = (S, Rational)>, rhs: Rational) -> Self {
        let mut coeffs: BTreeMap<String, Rational> = BTreeMap::new();
        for (var, c) in terms {
            *coeffs.entry(var.into()).or_insert_with(Rational::zero) += c;
        }
        coeffs.retain(|_, c| !c.is_zero());
        Inequality { coeffs, rhs }
    }

    /// `Σ terms ≥ rhs`, stored negated.
    pub fn at_least<S: Into<String>>(terms: impl IntoIterator<Item = (S, Rational)>, rhs: Rational) -> Self {
        Inequality::new(terms.into_iter().map(|(v, c)| (v, -c)), -rhs)
    }

    /// The contradiction `0 ≤ -1`, the canonical form of an empty system.
    pub fn infeasible() -> Self {
        Inequality { coeffs: BTreeMap::new(), rhs: -Rational::one() }
    }

    pub fn coeffs(&self) -> &BTreeMap<String, Rational> {
        &self.coeffs
    }

    pub fn coeff(&self, var: &str) -> Rational {
        self.coeffs.get(var).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn rhs(&self) -> &Rational {
        &self.rhs
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn lhs_at(&self, point: &Point) -> Rational {
        self.coeffs
            .iter()
            .map(|(v, c)| c * point.get(v).cloned().unwrap_or_else(Rational::zero))
            .fold(Rational::zero(), |acc, t| acc + t)
    }

    /// Variables missing from `point` count as zero.
    pub fn holds_at(&self, point: &Point) -> bool {
        self.lhs_at(point) <= self.rhs
    }

    fn scaled(&self, k: &Rational) -> Inequality {
        Inequality {
            coeffs: self.coeffs.iter().map(|(v, c)| (v.clone(), c * k)).collect(),
            rhs: &self.rhs * k,
        }
    }

    fn plus(&self, other: &Inequality) -> Inequality {
        let terms = self.coeffs.iter().chain(&other.coeffs).map(|(v, c)| (v.clone(), c.clone()));
        Inequality::new(terms, &self.rhs + &other.rhs)
    }

    /// Positive multiple with integer coefficients and right-hand side
    /// whose gcd is 1, together with the factor applied. Constant rows become
    /// `0 ≤ 1`, `0 ≤ 0` or `0 ≤ -1`.
    fn canonical(&self) -> (Inequality, Rational) {
        let values = || self.coeffs.values().chain(std::iter::once(&self.rhs));
        if self.is_constant() {
            let k = if self.rhs.is_zero() { Rational::one() } else { self.rhs.abs().recip() };
            return (self.scaled(&k), k);
        }
        let lcm = values().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
        let gcd = values()
            .map(|v| (v * Rational::from_integer(lcm.clone())).to_integer())
            .fold(BigInt::zero(), |acc, n| acc.gcd(&n));
        let k = Rational::new(lcm, gcd);
        (self.scaled(&k), k)
    }
}

fn fmt_rational(r: &Rational) -> String {
    r.to_string()
}

impl fmt::Display for Inequality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0 <= {}", fmt_rational(&self.rhs));
        }
        for (i, (var, c)) in self.coeffs.iter().enumerate() {
            let mag = c.abs();
            let sign = match (i, c.is_negative()) {
                (0, false) => "",
                (0, true) => "-",
                (_, false) => " + ",
                (_, true) => " - ",
            };
            if mag.is_one() {
                write!(f, "{sign}{var}")?;
            } else {
                write!(f, "{sign}{}*{var}", fmt_rational(&mag))?;
            }
        }
        write!(f, " <= {}", fmt_rational(&self.rhs))
    }
}

/// Conjunction of inequalities over a fixed set of named variables.
///
/// Rows are kept canonical, sorted and free of duplicates. Variables may
/// appear in no row (they are then unconstrained).
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LinearSystem {
    vars: Vec<String>,
    rows: Vec<Inequality>,
}

impl LinearSystem {
    pub fn new<S: AsRef<str>>(vars: &[S]) -> Self {
        let vars: BTreeSet<String> = vars.iter().map(|v| v.as_ref().to_string()).collect();
        LinearSystem { vars: vars.into_iter().collect(), rows: Vec::new() }
    }

    pub fn from_rows<S: AsRef<str>>(vars: &[S], rows: impl IntoIterator<Item = Inequality>) -> Self {
        let mut sys = LinearSystem::new(vars);
        for row in rows {
            sys.push(row);
        }
        sys
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn rows(&self) -> &[Inequality] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Adds a row in canonical form; variables it mentions join the system.
    pub fn push(&mut self, row: Inequality) {
        for var in row.coeffs.keys() {
            if let Err(at) = self.vars.binary_search(var) {
                self.vars.insert(at, var.clone());
            }
        }
        let (row, _) = row.canonical();
        if let Err(at) = self.rows.binary_search(&row) {
            self.rows.insert(at, row);
        }
    }

    pub fn le<S: Into<String>>(mut self, terms: impl IntoIterator<Item = (S, Rational)>, rhs: Rational) -> Self {
        self.push(Inequality::new(terms, rhs));
        self
    }

    pub fn ge<S: Into<String>>(mut self, terms: impl IntoIterator<Item = (S, Rational)>, rhs: Rational) -> Self {
        self.push(Inequality::at_least(terms, rhs));
        self
    }

    /// Equality, stored as a pair of opposite inequalities.
    pub fn eq<S: Into<String>>(self, terms: impl IntoIterator<Item = (S, Rational)>, rhs: Rational) -> Self {
        let terms: Vec<(String, Rational)> = terms.into_iter().map(|(v, c)| (v.into(), c)).collect();
        self.le(terms.clone(), rhs.clone()).ge(terms, rhs)
    }

    /// `var ≥ 0` for each listed variable.
    pub fn nonnegative<S: AsRef<str>>(mut self, vars: &[S]) -> Self {
        for v in vars {
            self.push(Inequality::at_least([(v.as_ref(), int(1))], int(0)));
        }
        self
    }

    pub fn contains(&self, point: &Point) -> bool {
        self.rows.iter().all(|r| r.holds_at(point))
    }

    /// Range of `var` compatible with every row once the other variables
    /// are fixed by `point`, as `(lower, upper)` with `None` for unbounded
    /// sides; `None` overall when no value works.
    pub fn extension_interval(&self, var: &str, point: &Point) -> Option<(Option<Rational>, Option<Rational>)> {
        let mut lower: Option<Rational> = None;
        let mut upper: Option<Rational> = None;
        for row in &self.rows {
            let c = row.coeff(var);
            let rest: Rational = row
                .coeffs
                .iter()
                .filter(|(v, _)| v.as_str() != var)
                .map(|(v, k)| k * point.get(v).cloned().unwrap_or_else(Rational::zero))
                .fold(Rational::zero(), |acc, t| acc + t);
            let slack = &row.rhs - rest;
            if c.is_zero() {
                if slack.is_negative() {
                    return None;
                }
            } else if c.is_positive() {
                let bound = slack / c;
                upper = Some(upper.map_or(bound.clone(), |u| u.min(bound)));
            } else {
                let bound = slack / c;
                lower = Some(lower.map_or(bound.clone(), |l| l.max(bound)));
            }
        }
        match (&lower, &upper) {
            (Some(l), Some(u)) if l > u => None,
            _ => Some((lower, upper)),
        }
    }

    fn without_var(&self, var: &str) -> Vec<String> {
        self.vars.iter().filter(|v| v.as_str() != var).cloned().collect()
    }
}

impl fmt::Display for LinearSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.rows {
            writeln!(f, "{row}")?;
        }
        Ok(())
    }
}

/// Result of eliminating one variable.
///
/// `trace[k]` lists the input rows and nonnegative multipliers whose sum is
/// exactly `system.rows()[k]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Projection {
    pub system: LinearSystem,
    pub eliminated: String,
    pub trace: Vec<Vec<(usize, Rational)>>,
}

impl Projection {
    /// Recombines the input rows along the trace and checks every output row
    /// is reproduced exactly with nonnegative multipliers.
    pub fn replays(&self, input: &LinearSystem) -> bool {
        self.system.rows.len() == self.trace.len()
            && self.system.rows.iter().zip(&self.trace).all(|(row, combo)| {
                let mut acc = Inequality::new(Vec::<(String, Rational)>::new(), Rational::zero());
                for (i, m) in combo {
                    if m.is_negative() || *i >= input.rows.len() {
                        return false;
                    }
                    acc = acc.plus(&input.rows[*i].scaled(m));
                }
                acc == *row
            })
    }
}

/// Fourier–Motzkin step: every pair of an upper and a lower bound on `var`
/// is combined so `var` cancels; rows without `var` are kept. Eliminating a
/// variable the system does not have returns it unchanged.
pub fn eliminate(sys: &LinearSystem, var: &str) -> Projection {
    let mut derived: Vec<(Inequality, Vec<(usize, Rational)>)> = Vec::new();
    if sys.vars.iter().all(|v| v != var) {
        let trace = (0..sys.rows.len()).map(|i| vec![(i, Rational::one())]).collect();
        return Projection { system: sys.clone(), eliminated: var.to_string(), trace };
    }
    let (mut upper, mut lower) = (Vec::new(), Vec::new());
    for (i, row) in sys.rows.iter().enumerate() {
        let c = row.coeff(var);
        if c.is_zero() {
            derived.push((row.clone(), vec![(i, Rational::one())]));
        } else if c.is_positive() {
            upper.push((i, c));
        } else {
            lower.push((i, -c));
        }
    }
    for (i, cu) in &upper {
        for (j, cl) in &lower {
            // cl·(upper row) + cu·(lower row) has zero coefficient on var.
            let combined = sys.rows[*i].scaled(cl).plus(&sys.rows[*j].scaled(cu));
            debug_assert!(combined.coeff(var).is_zero());
            derived.push((combined, vec![(*i, cl.clone()), (*j, cu.clone())]));
        }
    }
    let mut system = LinearSystem::new(&sys.without_var(var));
    let mut by_row: BTreeMap<Inequality, Vec<(usize, Rational)>> = BTreeMap::new();
    for (row, combo) in derived {
        let (canon, k) = row.canonical();
        by_row.entry(canon).or_insert_with(|| combo.into_iter().map(|(i, m)| (i, m * &k)).collect());
    }
    let mut trace = Vec::with_capacity(by_row.len());
    for (row, combo) in by_row {
        system.rows.push(row);
        trace.push(combo);
    }
    Projection { system, eliminated: var.to_string(), trace }
}

/// Eliminates the listed variables in order.
pub fn project<S: AsRef<str>>(sys: &LinearSystem, vars: &[S]) -> LinearSystem {
    vars.iter().fold(sys.clone(), |acc, v| eliminate(&acc, v.as_ref()).system)
}

/// Dense view `A·x ≤ b` over `vars` in system order.
fn dense(sys: &LinearSystem, rows: &[&Inequality]) -> (Vec<Vec<Rational>>, Vec<Rational>) {
    let a = rows.iter().map(|r| sys.vars.iter().map(|v| r.coeff(v)).collect()).collect();
    let b = rows.iter().map(|r| r.rhs.clone()).collect();
    (a, b)
}

/// Row echelon form in place; returns the pivot columns.
fn echelon(m: &mut [Vec<Rational>], cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    pivots
}

fn rank(a: &[Vec<Rational>], cols: usize) -> usize {
    let mut m = a.to_vec();
    echelon(&mut m, cols).len()
}

/// Unique solution of a square system, if nonsingular.
fn solve(a: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    let n = b.len();
    let mut m: Vec<Vec<Rational>> = a.iter().zip(b).map(|(row, bi)| row.iter().cloned().chain([bi.clone()]).collect()).collect();
    let pivots = echelon(&mut m, n);
    (pivots.len() == n).then(|| m.iter().map(|row| row[n].clone()).collect())
}

/// Basis vector of the null space when it is one-dimensional.
fn null_line(a: &[Vec<Rational>], cols: usize) -> Option<Vec<Rational>> {
    (rank(a, cols) + 1 == cols).then(|| null_space_any(a, cols))
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

fn to_point(vars: &[String], x: Vec<Rational>) -> Point {
    vars.iter().cloned().zip(x).collect()
}

fn describe_direction(vars: &[String], y: &[Rational]) -> String {
    let parts: Vec<String> = vars.iter().zip(y).map(|(v, c)| format!("{v}={c}")).collect();
    format!("({})", parts.join(", "))
}

/// Whether the system has any solution, decided by eliminating every
/// variable and checking the constant rows left over.
pub fn is_feasible(sys: &LinearSystem) -> bool {
    let vars = sys.vars.clone();
    project(sys, &vars).rows.iter().all(|r| !r.rhs.is_negative())
}

/// Vertices of a bounded system, sorted. Empty when the system has no
/// solution.
pub fn vertices(sys: &LinearSystem) -> Result<Vec<Point>, FmeError> {
    let d = sys.vars.len();
    if d > MAX_VERTEX_DIM {
        return Err(FmeError::Dimension(d));
    }
    let rows: Vec<&Inequality> = sys.rows.iter().filter(|r| !r.is_constant()).collect();
    if sys.rows.iter().any(|r| r.is_constant() && r.rhs.is_negative()) {
        return Ok(Vec::new());
    }
    let (a, b) = dense(sys, &rows);
    if rank(&a, d) < d {
        if !is_feasible(sys) {
            return Ok(Vec::new());
        }
        let dir = null_space_any(&a, d);
        return Err(FmeError::Unbounded { direction: describe_direction(&sys.vars, &dir) });
    }
    let mut found: BTreeSet<Vec<Rational>> = BTreeSet::new();
    for s in subsets(rows.len(), d) {
        let sa: Vec<Vec<Rational>> = s.iter().map(|&i| a[i].clone()).collect();
        let sb: Vec<Rational> = s.iter().map(|&i| b[i].clone()).collect();
        let Some(x) = solve(&sa, &sb) else { continue };
        let feasible = a.iter().zip(&b).all(|(row, bi)| dot(row, &x) <= *bi);
        if feasible {
            found.insert(x);
        }
    }
    if found.is_empty() {
        return Ok(Vec::new());
    }
    // Pointed and nonempty: unbounded iff the recession cone has an extreme
    // ray, which lies on d - 1 independent tight rows.
    for s in subsets(rows.len(), d.saturating_sub(1)) {
        let sa: Vec<Vec<Rational>> = s.iter().map(|&i| a[i].clone()).collect();
        let Some(y) = null_line(&sa, d) else { continue };
        for y in [y.clone(), y.iter().map(|c| -c).collect()] {
            if a.iter().all(|row| !dot(row, &y).is_positive()) {
                return Err(FmeError::Unbounded { direction: describe_direction(&sys.vars, &y) });
            }
        }
    }
    Ok(found.into_iter().map(|x| to_point(&sys.vars, x)).collect())
}

/// Some nonzero vector of the null space of a rank-deficient matrix.
fn null_space_any(a: &[Vec<Rational>], cols: usize) -> Vec<Rational> {
    let mut m = a.to_vec();
    let pivots = echelon(&mut m, cols);
    let free = (0..cols).find(|c| !pivots.contains(c)).expect("rank deficient");
    let mut y = vec![Rational::zero(); cols];
    y[free] = Rational::one();
    for (r, &pc) in pivots.iter().enumerate() {
        y[pc] = -m[r][free].clone();
    }
    y
}

fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(x, y)| x * y).fold(Rational::zero(), |acc, t| acc + t)
}

/// A minimal set of rows with the same solution set. A system with no
/// solution becomes the single row `0 ≤ -1`.
///
/// Rows are dropped greedily in canonical order when the remaining rows
/// still describe a bounded set whose vertices all satisfy the dropped row.
pub fn remove_redundant(sys: &LinearSystem) -> Result<LinearSystem, FmeError> {
    let d = sys.vars.len();
    if d > MAX_VERTEX_DIM {
        return Err(FmeError::Dimension(d));
    }
    let empty = || LinearSystem { vars: sys.vars.clone(), rows: vec![Inequality::infeasible()] };
    if vertices(sys)?.is_empty() {
        return Ok(empty());
    }
    let mut keep: Vec<Inequality> = sys.rows.iter().filter(|r| !r.is_constant()).cloned().collect();
    let mut i = 0;
    while i < keep.len() {
        let candidate = keep.remove(i);
        let rest = LinearSystem { vars: sys.vars.clone(), rows: keep.clone() };
        let redundant = match vertices(&rest) {
            Ok(vs) => vs.iter().all(|v| candidate.holds_at(v)),
            Err(FmeError::Unbounded { .. }) => false,
            Err(e) => return Err(e),
        };
        if !redundant {
            keep.insert(i, candidate);
            i += 1;
        }
    }
    Ok(LinearSystem { vars: sys.vars.clone(), rows: keep })
}

/// Outcome of [`regions_equal`]; `witness` lies in exactly one of the two
/// regions when they differ.
#[derive(Debug, Clone, PartialEq)]
pub struct RegionComparison {
    pub equal: bool,
    pub witness: Option<Point>,
}

/// Compares the solution sets of two bounded systems through their vertex
/// sets.
///
/// When they differ, some vertex of one region lies outside the other; the
/// witness is moved from that vertex toward the centroid of its region's
/// vertices as long as it stays outside the other region.
pub fn regions_equal(s1: &LinearSystem, s2: &LinearSystem) -> Result<RegionComparison, FmeError> {
    if s1.vars != s2.vars {
        return Err(FmeError::VariableMismatch { left: s1.vars.clone(), right: s2.vars.clone() });
    }
    let (v1, v2) = (vertices(s1)?, vertices(s2)?);
    if v1 == v2 {
        return Ok(RegionComparison { equal: true, witness: None });
    }
    for (own, other_sys) in [(&v1, s2), (&v2, s1)] {
        let Some(v) = own.iter().find(|v| !other_sys.contains(v)) else { continue };
        let n = int(own.len() as i64);
        let centroid: Point = s1
            .vars
            .iter()
            .map(|var| (var.clone(), own.iter().map(|p| p[var].clone()).fold(Rational::zero(), |a, x| a + x) / &n))
            .collect();
        let mut witness = v.clone();
        let mut t = rat(1, 2);
        for _ in 0..64 {
            let p: Point = s1
                .vars
                .iter()
                .map(|var| (var.clone(), &centroid[var] + &t * (&v[var] - &centroid[var])))
                .collect();
            if !other_sys.contains(&p) {
                witness = p;
                break;
            }
            t = (t + int(1)) / int(2);
        }
        return Ok(RegionComparison { equal: false, witness: Some(witness) });
    }
    unreachable!("distinct vertex sets of bounded regions imply a vertex outside the other region")
}

/// A float approximated by a rational.
#[derive(Debug, Clone, PartialEq)]
pub struct Snapped {
    pub value: Rational,
    /// `|x - value|` evaluated in floating point.
    pub error: f64,
}

/// Shortest continued-fraction convergent within [`SNAP_TOL`] of `x`. Falls
/// back to the exact binary value if no short convergent qualifies.
pub fn snap(x: f64) -> Result<Snapped, FmeError> {
    if !x.is_finite() {
        return Err(FmeError::NonFinite(x));
    }
    let (mut h_prev, mut h) = (BigInt::zero(), BigInt::one());
    let (mut k_prev, mut k) = (BigInt::one(), BigInt::zero());
    let mut rest = x;
    for _ in 0..64 {
        let a = rest.floor();
        let ai = BigInt::from(a as i64);
        let h_next = &ai * &h + &h_prev;
        let k_next = &ai * &k + &k_prev;
        (h_prev, h) = (h, h_next);
        (k_prev, k) = (k, k_next);
        let value = Rational::new(h.clone(), k.clone());
        let error = (x - value.to_f64().unwrap_or(f64::NAN)).abs();
        if error <= SNAP_TOL {
            return Ok(Snapped { value, error });
        }
        let frac = rest - a;
        if frac == 0.0 || a.abs() > 1e15 {
            break;
        }
        rest = frac.recip();
    }
    let value = Rational::from_float(x).ok_or(FmeError::NonFinite(x))?;
    Ok(Snapped { value, error: 0.0 })
}

/// Rational versions of the nine information constants.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactBounds {
    pub a1: Rational,
    pub a2: Rational,
    pub b: Rational,
    pub c1: Rational,
    pub c2: Rational,
    pub d1: Rational,
    pub d2: Rational,
    pub e1: Rational,
    pub e2: Rational,
    /// Largest snap error over the nine constants.
    pub snap_error: f64,
}

impl ExactBounds {
    pub fn from_array(v: [Rational; 9]) -> Self {
        let [a1, a2, b, c1, c2, d1, d2, e1, e2] = v;
        ExactBounds { a1, a2, b, c1, c2, d1, d2, e1, e2, snap_error: 0.0 }
    }

    pub fn uniform(v: Rational) -> Self {
        ExactBounds::from_array(std::array::from_fn(|_| v.clone()))
    }

    pub fn snapped(bounds: &BoundSet) -> Result<Self, FmeError> {
        let mut err: f64 = 0.0;
        let mut out = Vec::with_capacity(9);
        for x in bounds.as_array() {
            let s = snap(x)?;
            err = err.max(s.error);
            out.push(s.value);
        }
        let mut exact = ExactBounds::from_array(out.try_into().expect("nine constants"));
        exact.snap_error = err;
        Ok(exact)
    }

    pub fn as_array(&self) -> [&Rational; 9] {
        [&self.a1, &self.a2, &self.b, &self.c1, &self.c2, &self.d1, &self.d2, &self.e1, &self.e2]
    }

    pub fn c(&self) -> &Rational {
        (&self.c1).min(&self.c2)
    }

    pub fn d(&self) -> &Rational {
        (&self.d1).min(&self.d2)
    }
}

pub const R1: &str = "R1";
pub const R11: &str = "R11";
pub const R12: &str = "R12";
pub const R2: &str = "R2";

/// Split-rate constraints over `R₁₁, R₁₂, R₂` with `R₁ = R₁₁ + R₁₂`.
pub fn region1_system(k: &ExactBounds) -> LinearSystem {
    let one = || int(1);
    LinearSystem::new(&[R1, R11, R12, R2])
        .le([(R11, one())], k.a1.clone())
        .le([(R11, one())], k.a2.clone())
        .le([(R12, one())], k.b.clone())
        .le([(R2, one())], k.c1.clone())
        .le([(R2, one())], k.c2.clone())
        .le([(R2, one()), (R11, one())], k.d1.clone())
        .le([(R2, one()), (R11, one())], k.d2.clone())
        .le([(R2, one()), (R11, one()), (R12, one())], k.e1.clone())
        .le([(R2, one()), (R11, one()), (R12, one())], k.e2.clone())
        .eq([(R1, one()), (R11, int(-1)), (R12, int(-1))], int(0))
        .nonnegative(&[R11, R12, R2])
}

/// The reduced two-rate constraints.
pub fn region2_system(k: &ExactBounds) -> LinearSystem {
    let one = || int(1);
    LinearSystem::new(&[R1, R2])
        .le([(R1, one())], &k.b + &k.a1)
        .le([(R1, one())], &k.b + &k.a2)
        .le([(R2, one())], k.c1.clone())
        .le([(R2, one())], k.c2.clone())
        .le([(R1, one()), (R2, one())], k.e1.clone())
        .le([(R1, one()), (R2, one())], k.e2.clone())
        .le([(R1, one()), (R2, one())], &k.b + &k.d1)
        .le([(R1, one()), (R2, one())], &k.b + &k.d2)
        .nonnegative(&[R1, R2])
}

/// Projection of [`region1_system`] onto `(R₁, R₂)`.
pub fn reduce_region1(k: &ExactBounds) -> LinearSystem {
    project(&region1_system(k), &[R11, R12])
}
