//! Heuristic inconsistency reduction driven by the worst triad.
//!
//! One revision replaces a single entry `m_pq` of the worst triad by the
//! geometric blend `m_pq^(1−θ) · (m_pr · m_rq)^θ` of the judgment and its
//! transitive estimate through the third index `r`. The triad's cycle product
//! `x` becomes `x^(1−θ)`, so `θ = 1` makes the triad consistent. This is not a
//! closest-consistent-approximation algorithm.

use serde::{Deserialize, Serialize};

use crate::discrepancy::global_discrepancy;
use crate::eigen::{rank_ev, EigenOptions};
use crate::error::{Error, Result};
use crate::inconsistency::koczkodaj_index;
use crate::matrix::{triad_inconsistency, PcMatrix};

/// K at or below this value counts as consistent.
pub const CONSISTENT_K: f64 = 1e-12;

/// Slack when comparing a reached K against the requested target.
pub const TARGET_TOL: f64 = 1e-12;

const TIE_TOL: f64 = 1e-12;

pub const DEFAULT_THETA: f64 = 0.5;
pub const DEFAULT_MAX_STEPS: usize = 100;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Revision {
    pub i: usize,
    pub j: usize,
    /// Third index of the triad; the transitive estimate is `m_ik · m_kj`.
    pub via: usize,
    pub old_value: f64,
    pub new_value: f64,
    pub theta: f64,
    pub predicted_k: f64,
    pub predicted_d: f64,
}

impl Revision {
    pub fn apply(&self, m: &PcMatrix) -> Result<PcMatrix> {
        m.with_judgment(self.i, self.j, self.new_value)
    }
}

fn check_theta(theta: f64) -> Result<()> {
    if !(theta > 0.0 && theta <= 1.0) {
        return Err(Error::InvalidParameter(format!("theta must lie in (0, 1], got {theta}")));
    }
    Ok(())
}

struct Candidate {
    i: usize,
    j: usize,
    via: usize,
    old_value: f64,
    new_value: f64,
    matrix: PcMatrix,
    triad_after: f64,
    k_after: f64,
}

/// Proposes one revision of the worst triad without applying it.
///
/// Every entry of the triad shrinks the triad's inconsistency by the same
/// amount, so candidates are ranked by the resulting global K. Remaining ties
/// go to the entry spanning the triad's outer indices, then the two others
/// in lexicographic order.
pub fn suggest_revision(m: &PcMatrix, theta: f64, opts: EigenOptions) -> Result<Revision> {
    check_theta(theta)?;
    let (k, worst) = match koczkodaj_index(m) {
        Ok(v) => v,
        Err(Error::KoczkodajUndefined { .. }) => return Err(Error::AlreadyConsistent),
        Err(e) => return Err(e),
    };
    if k <= CONSISTENT_K {
        return Err(Error::AlreadyConsistent);
    }
    let (a, b, c) = (worst.i, worst.j, worst.k);
    let mut best: Option<Candidate> = None;
    for (i, j, via) in [(a, c, b), (a, b, c), (b, c, a)] {
        let old_value = m.get(i, j);
        let estimate = m.get(i, via) * m.get(via, j);
        let new_value = old_value.powf(1.0 - theta) * estimate.powf(theta);
        let matrix = m.with_judgment(i, j, new_value)?;
        let triad_after = triad_inconsistency(&matrix, a, b, c);
        let k_after = koczkodaj_index(&matrix)?.0;
        let cand = Candidate {
            i,
            j,
            via,
            old_value,
            new_value,
            matrix,
            triad_after,
            k_after,
        };
        best = Some(match best {
            None => cand,
            Some(cur) => {
                let better = cand.triad_after < cur.triad_after - TIE_TOL
                    || (cand.triad_after <= cur.triad_after + TIE_TOL
                        && cand.k_after < cur.k_after - TIE_TOL);
                if better {
                    cand
                } else {
                    cur
                }
            }
        });
    }
    let best = best.expect("three candidates");
    let mu = rank_ev(&best.matrix, opts)?;
    let predicted_d = global_discrepancy(&best.matrix, &mu)?.global;
    Ok(Revision {
        i: best.i,
        j: best.j,
        via: best.via,
        old_value: best.old_value,
        new_value: best.new_value,
        theta,
        predicted_k: best.k_after,
        predicted_d,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ReduceParams {
    pub target_k: f64,
    pub max_steps: usize,
    pub theta: f64,
}

impl ReduceParams {
    pub fn new(target_k: f64) -> Self {
        Self {
            target_k,
            max_steps: DEFAULT_MAX_STEPS,
            theta: DEFAULT_THETA,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ReduceOutcome {
    /// Final matrix, or the lowest-K matrix seen when the target was missed.
    pub matrix: PcMatrix,
    /// Revisions leading from the input to `matrix`.
    pub revisions: Vec<Revision>,
    pub reached: bool,
    pub initial_k: f64,
    pub final_k: f64,
}

/// Target K below which the eigenvector ranking's discrepancy must drop
/// under `d`: `1 − 1/(d + 1)`, i.e. `K − κ`.
pub fn discrepancy_guaranteed_target(d: f64) -> f64 {
    1.0 - 1.0 / (d + 1.0)
}

/// Applies [`suggest_revision`] until `K ≤ target_k` or the step budget runs
/// out. Without success the lowest-K matrix seen is returned with
/// `reached = false`.
pub fn reduce(m: &PcMatrix, params: ReduceParams, opts: EigenOptions) -> Result<ReduceOutcome> {
    check_theta(params.theta)?;
    if params.target_k.is_nan() || params.target_k < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "target K must be >= 0, got {}",
            params.target_k
        )));
    }
    if params.max_steps < 1 {
        return Err(Error::InvalidParameter("max steps must be >= 1".into()));
    }
    let initial_k = koczkodaj_index(m)?.0;
    let done = |k: f64| k <= params.target_k + TARGET_TOL || k <= CONSISTENT_K;
    if done(initial_k) {
        return Ok(ReduceOutcome {
            matrix: m.clone(),
            revisions: Vec::new(),
            reached: true,
            initial_k,
            final_k: initial_k,
        });
    }

    let mut current = m.clone();
    let mut revisions = Vec::new();
    let (mut best, mut best_k, mut best_len) = (m.clone(), initial_k, 0);
    for _ in 0..params.max_steps {
        let rev = suggest_revision(&current, params.theta, opts)?;
        current = rev.apply(&current)?;
        let k = rev.predicted_k;
        revisions.push(rev);
        if done(k) {
            return Ok(ReduceOutcome {
                matrix: current,
                revisions,
                reached: true,
                initial_k,
                final_k: k,
            });
        }
        if k < best_k {
            best = current.clone();
            best_k = k;
            best_len = revisions.len();
        }
    }
    revisions.truncate(best_len);
    Ok(ReduceOutcome {
        matrix: best,
        revisions,
        reached: false,
        initial_k,
        final_k: best_k,
    })
}
