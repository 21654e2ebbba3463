//! Saaty's eigenvalue index `S` and Koczkodaj's triad index `K`.

#[cfg(feature = "parallel")]
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::eigen::{principal_eigenpair, EigenOptions};
use crate::error::{Error, Result};
use crate::matrix::{triad_inconsistency, PcMatrix, Triad};

/// Absolute slack allowed below `λ = n` before the eigenvalue is rejected.
pub const LAMBDA_SLACK: f64 = 1e-7;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct InconsistencyReport {
    pub saaty: f64,
    /// `None` when `n < 3`.
    pub koczkodaj: Option<f64>,
    /// `1 - K`; `None` when `n < 3`.
    pub alpha: Option<f64>,
    pub worst_triad: Option<Triad>,
}

/// `S = (λ_max − n) / (n − 1)`; tiny negative values from rounding clamp to 0.
pub fn saaty_index(lambda_max: f64, n: usize) -> Result<f64> {
    if n < 2 {
        return Err(Error::TooSmall { n, min: 2 });
    }
    let nf = n as f64;
    if lambda_max.is_nan() || lambda_max < nf - LAMBDA_SLACK {
        return Err(Error::InvalidParameter(format!(
            "principal eigenvalue {lambda_max} is below n = {n}"
        )));
    }
    let s = (lambda_max - nf) / (nf - 1.0);
    Ok(if (-1e-9..0.0).contains(&s) { 0.0 } else { s })
}

/// Larger value wins; equal values keep the lexicographically smaller triad.
fn better(a: Triad, b: Triad) -> Triad {
    if b.local_inconsistency > a.local_inconsistency
        || (b.local_inconsistency == a.local_inconsistency && (b.i, b.j, b.k) < (a.i, a.j, a.k))
    {
        b
    } else {
        a
    }
}

fn scan_from(m: &PcMatrix, i: usize) -> Option<Triad> {
    let n = m.n();
    let mut best: Option<Triad> = None;
    for j in (i + 1)..n {
        for k in (j + 1)..n {
            let t = Triad {
                i,
                j,
                k,
                local_inconsistency: triad_inconsistency(m, i, j, k),
            };
            best = Some(match best {
                None => t,
                Some(b) => better(b, t),
            });
        }
    }
    best
}

/// Koczkodaj's index by exhaustive scan, with the first maximising triad in
/// lexicographic order. Sequential reference path.
pub fn koczkodaj_index_seq(m: &PcMatrix) -> Result<(f64, Triad)> {
    let n = m.n();
    if n < 3 {
        return Err(Error::KoczkodajUndefined { n });
    }
    let worst = (0..n)
        .filter_map(|i| scan_from(m, i))
        .reduce(better)
        .expect("n >= 3 has at least one triad");
    Ok((worst.local_inconsistency, worst))
}

/// Koczkodaj's index; the scan is split across threads by first index.
/// Result is identical to [`koczkodaj_index_seq`].
#[cfg(feature = "parallel")]
pub fn koczkodaj_index(m: &PcMatrix) -> Result<(f64, Triad)> {
    let n = m.n();
    if n < 3 {
        return Err(Error::KoczkodajUndefined { n });
    }
    let worst = (0..n)
        .into_par_iter()
        .filter_map(|i| scan_from(m, i))
        .reduce_with(better)
        .expect("n >= 3 has at least one triad");
    Ok((worst.local_inconsistency, worst))
}

#[cfg(not(feature = "parallel"))]
pub fn koczkodaj_index(m: &PcMatrix) -> Result<(f64, Triad)> {
    koczkodaj_index_seq(m)
}

/// Both indices at once; K-related fields are `None` for `n = 2`.
pub fn inconsistency_report(m: &PcMatrix, opts: EigenOptions) -> Result<InconsistencyReport> {
    let pair = principal_eigenpair(m, opts)?;
    let saaty = saaty_index(pair.lambda_max, m.n())?;
    let (koczkodaj, worst_triad) = match koczkodaj_index(m) {
        Ok((k, t)) => (Some(k), Some(t)),
        Err(Error::KoczkodajUndefined { .. }) => (None, None),
        Err(e) => return Err(e),
    };
    Ok(InconsistencyReport {
        saaty,
        koczkodaj,
        alpha: koczkodaj.map(|k| 1.0 - k),
        worst_triad,
    })
}
