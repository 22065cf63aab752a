//! Exact conditional mutual information for the jointly Gaussian network.
//!
//! The superposition signaling writes every input as a linear combination of
//! five independent unit-variance latents `V_a..V_e`, and every output as a
//! linear combination of the inputs plus independent noise. A
//! [`NetworkCovariance`] keeps that square-root factor next to the
//! covariance it generates; conditioning is done by projecting factor rows,
//! which stays exact when conditioning blocks are singular (e.g. `γ = 1`
//! removes `V_c` entirely) and avoids the cancellation of subtracting large
//! log-determinants when the mutual information is small.

use std::collections::HashSet;
use std::f64::consts::LN_2;
use std::fmt;

use nalgebra::{DMatrix, DVector};
use thiserror::Error;

use crate::channel::{Channel, Link, SplitParams};
use crate::gaussian::PdfTerms;

/// Relative threshold under which a singular value of a factor block counts
/// as zero.
const RANK_TOL: f64 = 1e-11;

/// A unit-variance component of the first argument whose conditional
/// variance falls below this is a deterministic function of the rest.
const DETERMINISTIC_TOL: f64 = 1e-14;

/// Ridge added to every block by [`conditional_mi_ridge`].
pub const RIDGE: f64 = 1e-12;

/// Variables of the network model, in the fixed covariance ordering.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NetVar {
    X1,
    X2,
    X3,
    U1,
    U2,
    Y2,
    Y3,
    Y4,
}

impl NetVar {
    pub const ORDER: [NetVar; 8] =
        [NetVar::X1, NetVar::X2, NetVar::X3, NetVar::U1, NetVar::U2, NetVar::Y2, NetVar::Y3, NetVar::Y4];

    pub fn name(self) -> &'static str {
        match self {
            NetVar::X1 => "X1",
            NetVar::X2 => "X2",
            NetVar::X3 => "X3",
            NetVar::U1 => "U1",
            NetVar::U2 => "U2",
            NetVar::Y2 => "Y2",
            NetVar::Y3 => "Y3",
            NetVar::Y4 => "Y4",
        }
    }
}

impl AsRef<str> for NetVar {
    fn as_ref(&self) -> &str {
        self.name()
    }
}

impl fmt::Display for NetVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Number of independent unit-variance latents driving the inputs.
pub const LATENTS: usize = 5;

/// Loading of the inputs `X₁, X₂, X₃, U₁, U₂` on the latents `V_a..V_e`.
///
/// ```text
/// X₁ = √(ᾱP₁)·V_a + √(αβ̄P₁)·V_b + √(αβγ̄P₁)·V_c + √(αβγP₁)·V_d
/// X₂ = √(δγ̄P₂)·V_c + √(δγP₂)·V_d + √(δ̄P₂)·V_e
/// X₃ = √P₃·V_d
/// U₁ = √γ̄·V_c + √γ·V_d
/// U₂ = X₁ − √(ᾱP₁)·V_a
/// ```
///
/// `U₁` is the unit-power common codeword; any positive rescaling leaves
/// every mutual information unchanged, and this one keeps `U₁` informative
/// when `αβ = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianSignaling {
    pub loadings: [[f64; LATENTS]; 5],
}

impl GaussianSignaling {
    pub fn new(ch: &Channel, s: &SplitParams) -> Self {
        let (p1, p2, p3) = (ch.p1(), ch.p2(), ch.p3());
        let (a, b, g, d) = (s.alpha, s.beta, s.gamma, s.delta);
        let (ab, bb, gb, db) = (s.alpha_bar(), s.beta_bar(), s.gamma_bar(), s.delta_bar());
        let x1 = [
            (ab * p1).sqrt(),
            (a * bb * p1).sqrt(),
            (a * b * gb * p1).sqrt(),
            (a * b * g * p1).sqrt(),
            0.0,
        ];
        let x2 = [0.0, 0.0, (d * gb * p2).sqrt(), (d * g * p2).sqrt(), (db * p2).sqrt()];
        let x3 = [0.0, 0.0, 0.0, p3.sqrt(), 0.0];
        let u1 = [0.0, 0.0, gb.sqrt(), g.sqrt(), 0.0];
        let u2 = [0.0, x1[1], x1[2], x1[3], 0.0];
        GaussianSignaling { loadings: [x1, x2, x3, u1, u2] }
    }

    /// Variance of input `i` (0-based over `X₁, X₂, X₃`).
    pub fn input_power(&self, i: usize) -> f64 {
        self.loadings[i].iter().map(|l| l * l).sum()
    }
}

/// Joint Gaussian law of a labelled vector, stored with a square-root factor
/// `F` so that `cov = F·Fᵀ`.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkCovariance {
    labels: Vec<String>,
    factor: DMatrix<f64>,
    cov: DMatrix<f64>,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MiError {
    #[error("unknown variable {0}")]
    UnknownVariable(String),
    #[error("variable {0} appears in more than one argument set")]
    Overlap(String),
    #[error("the first two argument sets must be nonempty")]
    EmptySet,
    #[error("covariance is not symmetric positive semidefinite (min eigenvalue {0:e})")]
    NotPsd(f64),
    #[error("covariance shape {rows}x{cols} does not match {labels} labels")]
    Shape { rows: usize, cols: usize, labels: usize },
    #[error("mutual information is infinite: the combination {direction:?} of the first set is determined by the rest")]
    Degenerate { direction: Vec<f64> },
    #[error("conditioned block is singular after ridge regularization")]
    Singular,
}

impl NetworkCovariance {
    /// Builds the law from a factor whose rows are the variables.
    pub fn from_factor(labels: Vec<String>, factor: DMatrix<f64>) -> Result<Self, MiError> {
        if factor.nrows() != labels.len() {
            return Err(MiError::Shape { rows: factor.nrows(), cols: factor.ncols(), labels: labels.len() });
        }
        let cov = accumulate_outer_products(&factor);
        Ok(NetworkCovariance { labels, factor, cov })
    }

    /// Builds the law from a covariance matrix; the factor comes from its
    /// eigendecomposition. Eigenvalues down to `-1e-10` are clamped to zero.
    pub fn from_covariance(labels: Vec<String>, cov: DMatrix<f64>) -> Result<Self, MiError> {
        let n = labels.len();
        if cov.nrows() != n || cov.ncols() != n {
            return Err(MiError::Shape { rows: cov.nrows(), cols: cov.ncols(), labels: n });
        }
        let scale = cov.amax().max(1.0);
        if (&cov - cov.transpose()).amax() > 1e-12 * scale {
            return Err(MiError::NotPsd(f64::NAN));
        }
        let eig = jacobi_eigen(&cov);
        let min = eig.eigenvalues.min();
        if min < -1e-10 * scale {
            return Err(MiError::NotPsd(min));
        }
        let roots = eig.eigenvalues.map(|l| l.max(0.0).sqrt());
        let factor = &eig.eigenvectors * DMatrix::from_diagonal(&roots);
        Ok(NetworkCovariance { labels, factor, cov })
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.cov
    }

    pub fn factor(&self) -> &DMatrix<f64> {
        &self.factor
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == name)
    }

    pub fn get(&self, a: impl AsRef<str>, b: impl AsRef<str>) -> Option<f64> {
        Some(self.cov[(self.index_of(a.as_ref())?, self.index_of(b.as_ref())?)])
    }

    fn resolve<S: AsRef<str>>(&self, set: &[S]) -> Result<Vec<usize>, MiError> {
        set.iter()
            .map(|v| self.index_of(v.as_ref()).ok_or_else(|| MiError::UnknownVariable(v.as_ref().to_string())))
            .collect()
    }

    fn rows(&self, idx: &[usize]) -> DMatrix<f64> {
        self.factor.select_rows(idx)
    }
}

/// Eigenpairs of a symmetric matrix; `vectors` holds them as columns.
pub(crate) struct Eigen {
    pub eigenvalues: DVector<f64>,
    pub eigenvectors: DMatrix<f64>,
}

/// Cyclic Jacobi rotations. Accurate to a few ulps of the norm even with
/// repeated eigenvalues, where the library tridiagonal solver is not.
pub(crate) fn jacobi_eigen(m: &DMatrix<f64>) -> Eigen {
    let n = m.nrows();
    let mut a = (m + m.transpose()) * 0.5;
    let mut v = DMatrix::<f64>::identity(n, n);
    for _sweep in 0..100 {
        let off: f64 = (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j))).map(|(i, j)| a[(i, j)].powi(2)).sum();
        if off <= f64::MIN_POSITIVE || off.sqrt() <= 1e-18 * a.norm() {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + theta.hypot(1.0));
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / t.hypot(1.0);
                let sn = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[(k, p)], a[(k, q)]);
                    a[(k, p)] = c * akp - sn * akq;
                    a[(k, q)] = sn * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[(p, k)], a[(q, k)]);
                    a[(p, k)] = c * apk - sn * aqk;
                    a[(q, k)] = sn * apk + c * aqk;
                }
                for k in 0..n {
                    let (vkp, vkq) = (v[(k, p)], v[(k, q)]);
                    v[(k, p)] = c * vkp - sn * vkq;
                    v[(k, q)] = sn * vkp + c * vkq;
                }
            }
        }
    }
    Eigen { eigenvalues: a.diagonal(), eigenvectors: v }
}

fn accumulate_outer_products(factor: &DMatrix<f64>) -> DMatrix<f64> {
    let n = factor.nrows();
    let mut cov = DMatrix::zeros(n, n);
    for col in factor.column_iter() {
        cov += col * col.transpose();
    }
    cov
}

/// Joint law of `(X₁, X₂, X₃, U₁, U₂, Y₂, Y₃, Y₄)` for a channel and split.
///
/// The factor has columns `V_a..V_e, Z₂, Z₃, Z₄`. Receiver `j` hears every
/// other user's input through `√h_ij`; a node's own transmission is
/// cancelled, and the `X₃ → Y₂` link is not modelled (every `Y₂` rate term
/// conditions on `X₃`).
pub fn build_covariance(ch: &Channel, s: &SplitParams) -> NetworkCovariance {
    let sig = GaussianSignaling::new(ch, s);
    let n = NetVar::ORDER.len();
    let mut f = DMatrix::<f64>::zeros(n, LATENTS + 3);
    for (row, load) in sig.loadings.iter().enumerate() {
        for (k, &l) in load.iter().enumerate() {
            f[(row, k)] = l;
        }
    }
    type Heard<'a> = &'a [(usize, Link)];
    let receivers: [(usize, Heard, f64); 3] = [
        (5, &[(0, Link::H12)], ch.n2()),
        (6, &[(0, Link::H13), (1, Link::H23)], ch.n3()),
        (7, &[(0, Link::H14), (1, Link::H24), (2, Link::H34)], ch.n4()),
    ];
    for (k, (row, heard, noise)) in receivers.into_iter().enumerate() {
        for &(input, link) in heard {
            let amp = ch.h(link).sqrt();
            for lat in 0..LATENTS {
                f[(row, lat)] += amp * sig.loadings[input][lat];
            }
        }
        f[(row, LATENTS + k)] = noise.sqrt();
    }
    let labels = NetVar::ORDER.iter().map(|v| v.name().to_string()).collect();
    NetworkCovariance::from_factor(labels, f).expect("8 rows for 8 labels")
}

/// Orthonormal rows spanning the row space of `m`, with coefficients `t`
/// such that `basis = t·m`.
///
/// Gram–Schmidt that always takes the remaining row of largest residual
/// norm and orthogonalizes twice; stops once every residual is below
/// `RANK_TOL * scale`. Every basis row is a combination of rows of `m`, so
/// columns where `m` vanishes stay exactly zero.
fn orthonormal_rows(m: &DMatrix<f64>, scale: f64) -> (DMatrix<f64>, DMatrix<f64>) {
    let (rows, cols) = m.shape();
    let mut work = m.clone();
    let mut coef = DMatrix::<f64>::identity(rows, rows);
    let mut used = vec![false; rows];
    let mut basis: Vec<usize> = Vec::new();
    let mut q = DMatrix::<f64>::zeros(rows, cols);
    let mut t = DMatrix::<f64>::zeros(rows, rows);
    while basis.len() < rows {
        let Some((i, norm)) = (0..rows)
            .filter(|&i| !used[i])
            .map(|i| (i, work.row(i).norm()))
            .max_by(|a, b| a.1.total_cmp(&b.1))
        else {
            break;
        };
        if scale <= 0.0 || norm <= RANK_TOL * scale {
            break;
        }
        used[i] = true;
        let k = basis.len();
        basis.push(i);
        let row = work.row(i) / norm;
        q.set_row(k, &row);
        let tr = coef.row(i) / norm;
        t.set_row(k, &tr);
        for j in (0..rows).filter(|&j| !used[j]) {
            for _ in 0..2 {
                let d = work.row(j).dot(&q.row(k));
                let (wq, tk) = (q.row(k) * d, t.row(k) * d);
                let mut wr = work.row_mut(j);
                wr -= wq;
                let mut cr = coef.row_mut(j);
                cr -= tk;
            }
        }
    }
    let k = basis.len();
    (q.rows(0, k).into_owned(), t.rows(0, k).into_owned())
}

fn max_row_norm(m: &DMatrix<f64>) -> f64 {
    m.row_iter().map(|r| r.norm()).fold(0.0, f64::max)
}

/// Removes from each row of `m` its component in the span of the
/// orthonormal rows of `basis`.
fn residual(m: &DMatrix<f64>, basis: &DMatrix<f64>) -> DMatrix<f64> {
    if basis.nrows() == 0 {
        return m.clone();
    }
    m - (m * basis.transpose()) * basis
}

fn check_sets(a: &[usize], b: &[usize], c: &[usize], labels: &[String]) -> Result<(), MiError> {
    if a.is_empty() || b.is_empty() {
        return Err(MiError::EmptySet);
    }
    let mut seen = HashSet::new();
    for &i in a.iter().chain(b).chain(c) {
        if !seen.insert(i) {
            return Err(MiError::Overlap(labels[i].clone()));
        }
    }
    Ok(())
}

/// `I(A; B | C)` in bits.
pub fn conditional_mi<S: AsRef<str>>(
    cov: &NetworkCovariance,
    a: &[S],
    b: &[S],
    c: &[S],
) -> Result<f64, MiError> {
    let (ia, ib, ic) = (cov.resolve(a)?, cov.resolve(b)?, cov.resolve(c)?);
    check_sets(&ia, &ib, &ic, &cov.labels)?;
    let (fa, fb, fc) = (cov.rows(&ia), cov.rows(&ib), cov.rows(&ic));

    let (qc, _) = orthonormal_rows(&fc, max_row_norm(&fc));
    let ra = residual(&fa, &qc);
    let rb = residual(&fb, &qc);
    let (qb, _) = orthonormal_rows(&rb, max_row_norm(&fb));
    if qb.nrows() == 0 {
        return Ok(0.0);
    }

    // Orthonormal components of A given C; comps = t·ra.
    let (comps, t) = orthonormal_rows(&ra, max_row_norm(&fa));
    if comps.nrows() == 0 {
        return Ok(0.0);
    }

    // Split each component into the part B explains and the part it does not.
    let unexplained = residual(&comps, &qb);
    let explained = &comps - &unexplained;
    let gram_e = &explained * explained.transpose();
    let gram_s = &unexplained * unexplained.transpose();

    let eig_s = jacobi_eigen(&gram_s);
    if let Some((k, _)) = eig_s.eigenvalues.iter().enumerate().find(|(_, &l)| l <= DETERMINISTIC_TOL) {
        // Express the determined component as a combination of A's variables.
        let coeffs = eig_s.eigenvectors.column(k).transpose() * &t;
        return Err(MiError::Degenerate { direction: coeffs.iter().cloned().collect() });
    }

    // Generalized eigenvalues of (gram_e, gram_s) via gram_s^{-1/2}.
    let inv_sqrt = {
        let vals = eig_s.eigenvalues.map(|l| 1.0 / l.sqrt());
        &eig_s.eigenvectors * DMatrix::from_diagonal(&vals) * eig_s.eigenvectors.transpose()
    };
    let whitened = &inv_sqrt * gram_e * &inv_sqrt;
    let whitened = (&whitened + whitened.transpose()) * 0.5;
    let lambdas = jacobi_eigen(&whitened).eigenvalues;
    let nats: f64 = lambdas.iter().map(|&l| l.max(0.0).ln_1p()).sum();
    Ok(0.5 * nats / LN_2)
}

fn log_det_ridge(cov: &DMatrix<f64>, idx: &[usize]) -> Result<f64, MiError> {
    if idx.is_empty() {
        return Ok(0.0);
    }
    let block = cov.select_rows(idx).select_columns(idx) + DMatrix::identity(idx.len(), idx.len()) * RIDGE;
    let chol = block.cholesky().ok_or(MiError::Singular)?;
    Ok(2.0 * chol.l().diagonal().iter().map(|d| d.ln()).sum::<f64>())
}

/// `I(A; B | C)` from ridge-regularized log-determinants of covariance
/// blocks. Independent of the factor; accurate only away from singular
/// blocks and for moderately large mutual information.
pub fn conditional_mi_ridge<S: AsRef<str>>(
    cov: &NetworkCovariance,
    a: &[S],
    b: &[S],
    c: &[S],
) -> Result<f64, MiError> {
    let (ia, ib, ic) = (cov.resolve(a)?, cov.resolve(b)?, cov.resolve(c)?);
    check_sets(&ia, &ib, &ic, &cov.labels)?;
    let join = |x: &[usize], y: &[usize]| -> Vec<usize> { x.iter().chain(y).copied().collect() };
    let ac = join(&ia, &ic);
    let bc = join(&ib, &ic);
    let abc = join(&ia, &bc);
    let m = &cov.cov;
    let nats = 0.5 * (log_det_ridge(m, &ac)? + log_det_ridge(m, &bc)? - log_det_ridge(m, &ic)? - log_det_ridge(m, &abc)?);
    Ok(nats / LN_2)
}

/// Every closed-form term of the partial decode-and-forward region,
/// evaluated as a conditional mutual information of the Gaussian model.
pub fn oracle_terms(ch: &Channel, s: &SplitParams) -> Result<PdfTerms, MiError> {
    use NetVar::*;
    let cov = build_covariance(ch, s);
    let mi = |a: &[NetVar], b: &[NetVar], c: &[NetVar]| conditional_mi(&cov, a, b, c);
    Ok(PdfTerms {
        phi1_y3: mi(&[Y3], &[X1], &[U1, U2, X2, X3])?,
        phi1_y4: mi(&[Y4], &[X1], &[U1, U2, X2, X3])?,
        phi2_y4: mi(&[Y4], &[U1, U2, X1, X2, X3], &[])?,
        phi2_y3: mi(&[Y3], &[U1, U2, X1, X2], &[X3])?,
        phi3_y3: mi(&[Y3], &[X1, X2], &[U1, U2, X3])?,
        phi3_y4: mi(&[Y4], &[X1, X2], &[U1, U2, X3])?,
        r2_y3: mi(&[Y3], &[X2], &[U1, U2, X1, X3])?,
        r2_y4: mi(&[Y4], &[X2], &[U1, U2, X1, X3])?,
        relay: mi(&[Y2], &[U2], &[U1, X2, X3])?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jacobi_reconstructs_near_identity() {
        let m = DMatrix::from_row_slice(4, 4, &[
            0.8962192492138199, -0.02509216982843343, -0.13251167035676856, 1e-16,
            -0.02509216982843343, 0.993933200695415, -0.032038748146002036, -3e-17,
            -0.13251167035676856, -0.032038748146002036, 0.8308034712822758, -3e-17,
            1e-16, -3e-17, -3e-17, 1.0,
        ]);
        let e = jacobi_eigen(&m);
        let rec = &e.eigenvectors * DMatrix::from_diagonal(&e.eigenvalues) * e.eigenvectors.transpose();
        assert!((rec - &m).amax() < 1e-14);
        let orth = &e.eigenvectors * e.eigenvectors.transpose() - DMatrix::<f64>::identity(4, 4);
        assert!(orth.amax() < 1e-14);
    }
    use crate::channel::{capacity_fn, ChannelConfig, Gains};
    use proptest::prelude::*;
    use NetVar::*;

    fn unit(h: f64) -> Channel {
        ChannelConfig::unit_power(Gains::uniform(h)).validate().unwrap()
    }

    fn split(a: f64, b: f64, g: f64, d: f64) -> SplitParams {
        SplitParams::new(a, b, g, d).unwrap()
    }

    #[test]
    fn scalar_awgn_identity() {
        let (p, n) = (3.7, 0.6);
        let cov = DMatrix::from_row_slice(2, 2, &[p, p, p, p + n]);
        let law = NetworkCovariance::from_covariance(vec!["X".into(), "Y".into()], cov).unwrap();
        let mi = conditional_mi(&law, &["Y"], &["X"], &[] as &[&str]).unwrap();
        let expected = capacity_fn(p / n).unwrap();
        assert!((mi - expected).abs() <= 1e-12 * expected);
    }

    #[test]
    fn overlapping_sets_rejected() {
        let cov = build_covariance(&unit(1.0), &split(0.5, 0.5, 0.5, 0.5));
        assert_eq!(conditional_mi(&cov, &[X1], &[X2], &[X1]), Err(MiError::Overlap("X1".into())));
        assert_eq!(conditional_mi(&cov, &[X1], &[X1], &[]), Err(MiError::Overlap("X1".into())));
        assert!(matches!(conditional_mi(&cov, &["Q"], &["X1"], &[]), Err(MiError::UnknownVariable(_))));
        assert_eq!(conditional_mi::<NetVar>(&cov, &[], &[X1], &[]), Err(MiError::EmptySet));
    }

    #[test]
    fn inputs_meet_power_constraints() {
        let cfg = ChannelConfig::new(Gains::uniform(2.0), [1.5, 0.3, 7.0], [1.0; 3]);
        let ch = cfg.validate().unwrap();
        let sig = GaussianSignaling::new(&ch, &split(0.3, 0.8, 0.25, 0.6));
        assert!((sig.input_power(0) - 1.5).abs() < 1e-15);
        assert!((sig.input_power(1) - 0.3).abs() < 1e-15);
        assert!((sig.input_power(2) - 7.0).abs() < 1e-15);
    }

    #[test]
    fn no_cooperation_decouples_inputs() {
        let cov = build_covariance(&unit(2.0), &split(0.0, 0.3, 0.7, 0.0));
        assert_eq!(cov.get(X1, X1).unwrap(), 1.0);
        assert_eq!(cov.get(X1, X2).unwrap(), 0.0);
        let f = cov.factor();
        assert_eq!(f[(0, 0)], 1.0);
        assert!(f.row(0).iter().skip(1).all(|&x| x == 0.0));
    }

    #[test]
    fn disconnected_channel() {
        let cov = build_covariance(&unit(0.0), &split(0.5, 0.5, 0.5, 0.5));
        for y in [Y2, Y3, Y4] {
            for x in [X1, X2, X3] {
                assert_eq!(cov.get(y, x).unwrap(), 0.0);
            }
        }
        assert_eq!(cov.get(Y4, Y4).unwrap(), 1.0);
    }

    #[test]
    fn covariance_is_psd_and_matches_factor() {
        let cfg = ChannelConfig::new(Gains::from_links([1.0, 10.0, 1.0, 10.0, 10.0, 1.0]), [2.0, 0.5, 3.0], [0.7, 1.1, 2.0]);
        let cov = build_covariance(&cfg.validate().unwrap(), &split(0.4, 0.9, 0.2, 0.6));
        let m = cov.matrix();
        assert!((m - m.transpose()).amax() == 0.0);
        assert!(jacobi_eigen(m).eigenvalues.min() >= -1e-10);
        assert!((m - cov.factor() * cov.factor().transpose()).amax() < 1e-12);
    }

    #[test]
    fn scenario_e_covariance_golden() {
        // Frozen from an independent numpy outer-product assembly.
        #[rustfmt::skip]
        let golden = [
            1.0000000000000002, 0.3535533905932738, 0.3535533905932738, 0.25000000000000006, 0.5, 3.162277660168379, 4.280311648918275, 5.39834563766817,
            0.3535533905932738, 1.0, 0.5, 0.3535533905932738, 0.3535533905932738, 1.118033988749895, 4.280311648918275, 5.861450479002465,
            0.3535533905932738, 0.5, 1.0, 0.3535533905932738, 0.3535533905932738, 1.118033988749895, 2.699172818834085, 5.861450479002464,
            0.25000000000000006, 0.3535533905932738, 0.3535533905932738, 0.25000000000000006, 0.25000000000000006, 0.7905694150420949, 1.9086034037919901, 3.0266373925418852,
            0.5, 0.3535533905932738, 0.3535533905932738, 0.25000000000000006, 0.5, 1.5811388300841898, 2.699172818834085, 3.81720680758398,
            3.162277660168379, 1.118033988749895, 1.118033988749895, 0.7905694150420949, 1.5811388300841898, 11.000000000000002, 13.53553390593274, 17.071067811865476,
            4.280311648918275, 4.280311648918275, 2.699172818834085, 1.9086034037919901, 2.699172818834085, 13.53553390593274, 28.071067811865483, 35.60660171779822,
            5.39834563766817, 5.861450479002465, 5.861450479002464, 3.0266373925418852, 3.81720680758398, 17.071067811865476, 35.60660171779822, 55.14213562373095,
        ];
        // The golden uses the unscaled common codeword √(αβP₁)·U₁; rescale ours to compare.
        let ch = unit(10.0);
        let s = split(0.5, 0.5, 0.5, 0.5);
        let mut cov = build_covariance(&ch, &s).matrix().clone();
        let k = (s.alpha * s.beta * ch.p1()).sqrt();
        for j in 0..8 {
            cov[(3, j)] *= k;
            cov[(j, 3)] *= k;
        }
        let golden = DMatrix::from_row_slice(8, 8, &golden);
        assert!((cov - golden).amax() < 1e-12);
    }

    #[test]
    fn determined_variable_is_reported() {
        // ᾱ = 0 makes X1 = U2.
        let cov = build_covariance(&unit(1.0), &split(1.0, 0.5, 0.5, 0.5));
        assert!(matches!(conditional_mi(&cov, &[X1], &[U2], &[]), Err(MiError::Degenerate { .. })));
        let law = NetworkCovariance::from_covariance(
            vec!["A".into(), "B".into()],
            DMatrix::from_row_slice(2, 2, &[1.0, 1.0, 1.0, 1.0]),
        )
        .unwrap();
        assert!(matches!(conditional_mi(&law, &["A"], &["B"], &[] as &[&str]), Err(MiError::Degenerate { .. })));
    }

    #[test]
    fn ridge_route_agrees_on_generic_split() {
        let ch = unit(3.0);
        let cov = build_covariance(&ch, &split(0.45, 0.55, 0.35, 0.65));
        let cases: [(&[NetVar], &[NetVar], &[NetVar]); 4] = [
            (&[Y4], &[U1, U2, X1, X2, X3], &[]),
            (&[Y3], &[X1, X2], &[U1, U2, X3]),
            (&[Y2], &[U2], &[U1, X2, X3]),
            (&[Y3, Y4], &[X1], &[X2, X3]),
        ];
        for (a, b, c) in cases {
            let exact = conditional_mi(&cov, a, b, c).unwrap();
            let ridge = conditional_mi_ridge(&cov, a, b, c).unwrap();
            assert!((exact - ridge).abs() < 1e-6, "{a:?} {b:?} {c:?}: {exact} vs {ridge}");
        }
    }

    #[test]
    fn degenerate_latent_matches_reduced_model() {
        // γ = 1 removes V_c from every variable: dropping its column from the
        // factor must not change any information quantity.
        let ch = unit(2.0);
        let cov = build_covariance(&ch, &split(0.6, 0.7, 1.0, 0.4));
        let keep: Vec<usize> = (0..cov.factor().ncols()).filter(|&k| k != 2).collect();
        assert!(cov.factor().column(2).iter().all(|&x| x == 0.0));
        let reduced = NetworkCovariance::from_factor(cov.labels().to_vec(), cov.factor().select_columns(&keep)).unwrap();
        for (a, b, c) in [
            (vec![Y3], vec![X2], vec![U1, U2, X1, X3]),
            (vec![Y4], vec![U1, U2, X1, X2, X3], vec![]),
            (vec![Y2], vec![U2], vec![U1, X2, X3]),
        ] {
            let full = conditional_mi(&cov, &a, &b, &c).unwrap();
            let red = conditional_mi(&reduced, &a, &b, &c).unwrap();
            assert!((full - red).abs() < 1e-13);
        }
    }

    fn arb_split() -> impl Strategy<Value = SplitParams> {
        (0.0f64..=1.0, 0.0f64..=1.0, 0.0f64..=1.0, 0.0f64..=1.0).prop_map(|(a, b, g, d)| split(a, b, g, d))
    }

    fn arb_channel() -> impl Strategy<Value = Channel> {
        (proptest::array::uniform6(0.1f64..10.0), proptest::array::uniform3(0.1f64..10.0), proptest::array::uniform3(0.1f64..10.0))
            .prop_map(|(h, p, n)| ChannelConfig::new(Gains::from_links(h), p, n).validate().unwrap())
    }

    const SETS: [NetVar; 8] = NetVar::ORDER;

    fn subset(mask: u8) -> Vec<NetVar> {
        SETS.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, v)| *v).collect()
    }

    proptest! {
        #[test]
        fn chain_rule(ch in arb_channel(), s in arb_split(), swap: bool, third in 0u8..4) {
            // Y4 vs two disjoint nonempty groups of inputs; X3 and possibly U1 condition.
            let cov = build_covariance(&ch, &s);
            let (mut b, mut b2, mut c) = if swap { (vec![X2], vec![X1], vec![X3]) } else { (vec![X1], vec![X2], vec![X3]) };
            match third { 0 => b.push(U1), 1 => b2.push(U1), 2 => c.push(U1), _ => {} }
            let whole: Vec<NetVar> = b.iter().chain(&b2).copied().collect();
            let bc: Vec<NetVar> = b.iter().chain(&c).copied().collect();
            let lhs = conditional_mi(&cov, &[Y4], &whole, &c).unwrap();
            let rhs = conditional_mi(&cov, &[Y4], &b, &c).unwrap() + conditional_mi(&cov, &[Y4], &b2, &bc).unwrap();
            prop_assert!((lhs - rhs).abs() <= 1e-9);
        }

        #[test]
        fn symmetric_and_nonnegative(ch in arb_channel(), s in arb_split(), ma in 1u8..=255, mb in 1u8..=255) {
            let a = subset(ma & 0b1110_0000);
            let b = subset(mb & 0b0001_1111);
            prop_assume!(!a.is_empty() && !b.is_empty());
            let cov = build_covariance(&ch, &s);
            let ab = conditional_mi(&cov, &a, &b, &[]);
            let ba = conditional_mi(&cov, &b, &a, &[]);
            if let (Ok(x), Ok(y)) = (ab, ba) {
                prop_assert!(x >= 0.0);
                prop_assert!((x - y).abs() <= 1e-9 * x.max(1.0));
            }
        }

        #[test]
        fn conditioning_on_all_latents_kills_information(ch in arb_channel(), s in arb_split()) {
            // Given U1, U2, X1 and X3 only V_e of X2 is unknown.
            let cov = build_covariance(&ch, &s);
            let v = conditional_mi(&cov, &[Y3], &[X2], &[U1, U2, X1, X3]).unwrap();
            let snr = s.delta_bar() * ch.h(Link::H23) * ch.p2() / ch.n3();
            prop_assert!((v - capacity_fn(snr).unwrap()).abs() <= 1e-12);
            let none = conditional_mi(&cov, &[Y4], &[U1], &[X1, X2, X3, U2]).unwrap();
            prop_assert!(none.abs() <= 1e-12);
        }
    }
}
