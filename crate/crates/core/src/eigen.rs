//! Principal eigenpair by power iteration and the eigenvector ranking.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::PcMatrix;

/// Solver settings shared by every operation that needs the eigenvector.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct EigenOptions {
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for EigenOptions {
    fn default() -> Self {
        Self {
            tol: 1e-12,
            max_iter: 10_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct EigenPair {
    pub lambda_max: f64,
    /// Principal eigenvector, L1-normalised but otherwise unscaled.
    pub vector: Vec<f64>,
    pub iterations: usize,
    /// `‖Mv − λv‖∞ / ‖v‖∞` at termination.
    pub residual: f64,
}

/// Priority vector: positive, sums to one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Ranking {
    pub values: Vec<f64>,
    pub labels: Vec<String>,
}

impl Ranking {
    /// Normalises `weights` to sum to one.
    pub fn from_weights(weights: &[f64], labels: Vec<String>) -> Result<Self> {
        if weights.len() != labels.len() {
            return Err(Error::DimensionMismatch {
                matrix: labels.len(),
                ranking: weights.len(),
            });
        }
        for (i, &w) in weights.iter().enumerate() {
            if !(w.is_finite() && w > 0.0) {
                return Err(Error::NonPositive { i, j: i, value: w });
            }
        }
        let sum: f64 = weights.iter().sum();
        Ok(Self {
            values: weights.iter().map(|w| w / sum).collect(),
            labels,
        })
    }

    /// Uniform ranking over the matrix's concepts.
    pub fn uniform(m: &PcMatrix) -> Self {
        let n = m.n();
        Self {
            values: vec![1.0 / n as f64; n],
            labels: m.labels().to_vec(),
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    #[inline]
    pub fn get(&self, i: usize) -> f64 {
        self.values[i]
    }
}

fn mat_vec(m: &PcMatrix, v: &[f64], out: &mut [f64]) {
    for (i, o) in out.iter_mut().enumerate() {
        *o = m.row(i).iter().zip(v).map(|(a, b)| a * b).sum();
    }
}

/// Power iteration from the uniform vector with L1 renormalisation each step.
///
/// With `v` normalised to unit L1 norm, `λ = Σ(Mv)`. Positive matrices have a
/// simple dominant eigenvalue, so the iteration converges from any positive
/// start.
pub fn principal_eigenpair(m: &PcMatrix, opts: EigenOptions) -> Result<EigenPair> {
    if opts.tol.is_nan() || opts.tol <= 0.0 {
        return Err(Error::InvalidParameter(format!("tol must be > 0, got {}", opts.tol)));
    }
    if opts.max_iter < 1 {
        return Err(Error::InvalidParameter("max_iter must be >= 1".into()));
    }
    let n = m.n();
    let mut v = vec![1.0 / n as f64; n];
    let mut w = vec![0.0; n];
    let mut residual = f64::INFINITY;
    for iteration in 1..=opts.max_iter {
        mat_vec(m, &v, &mut w);
        let lambda: f64 = w.iter().sum();
        let vmax = v.iter().copied().fold(0.0, f64::max);
        residual = w
            .iter()
            .zip(&v)
            .map(|(wi, vi)| (wi - lambda * vi).abs())
            .fold(0.0, f64::max)
            / vmax;
        if residual <= opts.tol {
            return Ok(EigenPair {
                lambda_max: lambda,
                vector: v,
                iterations: iteration,
                residual,
            });
        }
        for (vi, wi) in v.iter_mut().zip(&w) {
            *vi = wi / lambda;
        }
    }
    Err(Error::NoConvergence {
        iterations: opts.max_iter,
        residual,
    })
}

/// Eigenvector ranking: the principal eigenvector rescaled to sum to one.
pub fn rank_ev(m: &PcMatrix, opts: EigenOptions) -> Result<Ranking> {
    rank_ev_with_pair(m, opts).map(|(r, _)| r)
}

/// Same as [`rank_ev`] but also returns the eigenpair it came from.
pub fn rank_ev_with_pair(m: &PcMatrix, opts: EigenOptions) -> Result<(Ranking, EigenPair)> {
    let pair = principal_eigenpair(m, opts)?;
    let ranking = Ranking::from_weights(&pair.vector, m.labels().to_vec())?;
    Ok((ranking, pair))
}
