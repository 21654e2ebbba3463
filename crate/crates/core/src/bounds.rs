//! Bounds implied by Koczkodaj's index and the order-preservation checks.
//!
//! With `α = 1 − K`, the eigenvector ranking satisfies `α ≤ ε(i,j) ≤ 1/α`
//! for every pair. Everything here follows from that:
//!
//! * `D ≤ 1/α − 1`
//! * `α − 1 ≤ S ≤ 1/α − 1`
//! * `(n−1)(α−1) + n ≤ λ_max ≤ (n−1)(1/α − 1) + n`
//! * `m_ij > 1/α` implies `μ_i > μ_j` (preservation of order of preference)
//! * `m_ij / m_kl > 1/α²` implies `μ_i/μ_j > μ_k/μ_l` (preservation of order
//!   of intensity of preference)
//!
//! Premises are evaluated strictly. Conclusions get a relative slack of
//! [`CONCLUSION_SLACK`] to absorb eigenvector rounding.

#[cfg(feature = "parallel")]
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::eigen::Ranking;
use crate::error::{Error, Result};
use crate::matrix::PcMatrix;

pub const CONCLUSION_SLACK: f64 = 1e-12;

/// Tolerance when checking that a `(K, D)` pair obeys `D ≤ 1/(1−K) − 1`.
pub const PAIRING_TOL: f64 = 1e-9;

/// Largest K that still guarantees `S < 0.1` via the upper Saaty bound.
pub const SAATY_CRITERION_K: f64 = 1.0 / 11.0;

fn check_k(k: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&k) {
        return Err(Error::InvalidParameter(format!("K must lie in [0, 1), got {k}")));
    }
    Ok(1.0 - k)
}

/// `1/α − 1`: upper bound on the global discrepancy of the eigenvector ranking.
pub fn discrepancy_bound(k: f64) -> Result<f64> {
    let alpha = check_k(k)?;
    Ok(1.0 / alpha - 1.0)
}

/// `(α − 1, 1/α − 1)`.
pub fn saaty_bounds(k: f64) -> Result<(f64, f64)> {
    let alpha = check_k(k)?;
    Ok((alpha - 1.0, 1.0 / alpha - 1.0))
}

/// `((n−1)(α−1) + n, (n−1)(1/α−1) + n)`.
pub fn eigenvalue_bounds(k: f64, n: usize) -> Result<(f64, f64)> {
    if n < 2 {
        return Err(Error::TooSmall { n, min: 2 });
    }
    let alpha = check_k(k)?;
    let nf = n as f64;
    Ok((
        (nf - 1.0) * (alpha - 1.0) + nf,
        (nf - 1.0) * (1.0 / alpha - 1.0) + nf,
    ))
}

/// `κ = K + 1/(D+1) − 1`: reducing K by at least κ guarantees a smaller D.
pub fn kappa_recommendation(k: f64, d: f64) -> Result<f64> {
    let bound = discrepancy_bound(k)?;
    if d.is_nan() || d < 0.0 {
        return Err(Error::InvalidParameter(format!("D must be >= 0, got {d}")));
    }
    if d > bound + PAIRING_TOL {
        return Err(Error::InconsistentPairing { k, d, bound });
    }
    Ok((k + 1.0 / (d + 1.0) - 1.0).max(0.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct BoundsReport {
    pub discrepancy_bound: f64,
    pub saaty_lower: f64,
    pub saaty_upper: f64,
    pub lambda_lower: f64,
    pub lambda_upper: f64,
    pub kappa: f64,
    pub pop_threshold: f64,
    pub poip_threshold: f64,
}

impl BoundsReport {
    /// Every bound derived from `K`, `D` and `n`. Deterministic, so the
    /// result can be recomputed from a report's own fields bit-for-bit.
    pub fn compute(k: f64, d: f64, n: usize) -> Result<Self> {
        let (saaty_lower, saaty_upper) = saaty_bounds(k)?;
        let (lambda_lower, lambda_upper) = eigenvalue_bounds(k, n)?;
        let pop_threshold = pop_threshold(k)?;
        Ok(Self {
            discrepancy_bound: discrepancy_bound(k)?,
            saaty_lower,
            saaty_upper,
            lambda_lower,
            lambda_upper,
            kappa: kappa_recommendation(k, d)?,
            pop_threshold,
            poip_threshold: pop_threshold * pop_threshold,
        })
    }
}

pub fn pop_threshold(k: f64) -> Result<f64> {
    Ok(1.0 / check_k(k)?)
}

pub fn poip_threshold(k: f64) -> Result<f64> {
    let t = pop_threshold(k)?;
    Ok(t * t)
}

#[inline]
fn exceeds(lhs: f64, rhs: f64) -> bool {
    lhs > rhs * (1.0 - CONCLUSION_SLACK)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct PopRow {
    pub i: usize,
    pub j: usize,
    pub premise_met: bool,
    pub conclusion_holds: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct PoipRow {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub l: usize,
    pub premise_met: bool,
    pub conclusion_holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct PopCheck {
    pub threshold: f64,
    pub rows: Vec<PopRow>,
    /// Pairs with `m_ij > 1` but `μ_i ≤ μ_j`.
    pub raw_violations: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct PoipCheck {
    pub threshold: f64,
    pub rows: Vec<PoipRow>,
    /// Quadruples with `m_ij > m_kl > 1` but `μ_i/μ_j ≤ μ_k/μ_l`.
    pub raw_violations: Vec<(usize, usize, usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CopReport {
    pub pop: PopCheck,
    /// `None` when the quadruple scan was skipped.
    pub poip: Option<PoipCheck>,
}

impl CopReport {
    /// Rows whose theorem premise holds but whose conclusion fails.
    pub fn theorem_violations(&self) -> usize {
        let pop = self
            .pop
            .rows
            .iter()
            .filter(|r| r.premise_met && !r.conclusion_holds)
            .count();
        let poip = self.poip.as_ref().map_or(0, |p| {
            p.rows
                .iter()
                .filter(|r| r.premise_met && !r.conclusion_holds)
                .count()
        });
        pop + poip
    }
}

fn check_dims(m: &PcMatrix, mu: &Ranking) -> Result<()> {
    if m.n() != mu.len() {
        return Err(Error::DimensionMismatch {
            matrix: m.n(),
            ranking: mu.len(),
        });
    }
    Ok(())
}

fn ordered_pairs(n: usize) -> impl Iterator<Item = (usize, usize)> + Clone {
    (0..n).flat_map(move |i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
}

fn pop_row(m: &PcMatrix, mu: &Ranking, threshold: f64, i: usize, j: usize) -> PopRow {
    PopRow {
        i,
        j,
        premise_met: m.get(i, j) > threshold,
        conclusion_holds: exceeds(mu.get(i), mu.get(j)),
    }
}

/// Preservation-of-order-of-preference check over every ordered pair.
pub fn pop_check(m: &PcMatrix, mu: &Ranking, k: f64) -> Result<PopCheck> {
    check_dims(m, mu)?;
    let threshold = pop_threshold(k)?;
    let rows: Vec<PopRow> = ordered_pairs(m.n())
        .map(|(i, j)| pop_row(m, mu, threshold, i, j))
        .collect();
    let raw_violations = rows
        .iter()
        .filter(|r| m.get(r.i, r.j) > 1.0 && !r.conclusion_holds)
        .map(|r| (r.i, r.j))
        .collect();
    Ok(PopCheck {
        threshold,
        rows,
        raw_violations,
    })
}

#[inline]
fn poip_row(
    m: &PcMatrix,
    mu: &Ranking,
    threshold: f64,
    (i, j): (usize, usize),
    (k, l): (usize, usize),
) -> (PoipRow, bool) {
    let (mij, mkl) = (m.get(i, j), m.get(k, l));
    let conclusion_holds = exceeds(mu.get(i) / mu.get(j), mu.get(k) / mu.get(l));
    let row = PoipRow {
        i,
        j,
        k,
        l,
        premise_met: mij / mkl > threshold,
        conclusion_holds,
    };
    let raw_violation = mij > mkl && mkl > 1.0 && !conclusion_holds;
    (row, raw_violation)
}

fn poip_rows_for(
    m: &PcMatrix,
    mu: &Ranking,
    threshold: f64,
    first: (usize, usize),
) -> Vec<(PoipRow, bool)> {
    ordered_pairs(m.n())
        .map(|second| poip_row(m, mu, threshold, first, second))
        .collect()
}

fn assemble_poip(threshold: f64, rows: Vec<(PoipRow, bool)>) -> PoipCheck {
    let raw_violations = rows
        .iter()
        .filter(|(_, raw)| *raw)
        .map(|(r, _)| (r.i, r.j, r.k, r.l))
        .collect();
    PoipCheck {
        threshold,
        rows: rows.into_iter().map(|(r, _)| r).collect(),
        raw_violations,
    }
}

/// Preservation-of-order-of-intensity check over every pair of ordered
/// pairs. `O(n⁴)` rows. Sequential reference path.
pub fn poip_check_seq(m: &PcMatrix, mu: &Ranking, k: f64) -> Result<PoipCheck> {
    check_dims(m, mu)?;
    let threshold = poip_threshold(k)?;
    let rows = ordered_pairs(m.n())
        .flat_map(|first| poip_rows_for(m, mu, threshold, first))
        .collect();
    Ok(assemble_poip(threshold, rows))
}

/// Parallel [`poip_check_seq`]; row order is identical.
#[cfg(feature = "parallel")]
pub fn poip_check(m: &PcMatrix, mu: &Ranking, k: f64) -> Result<PoipCheck> {
    check_dims(m, mu)?;
    let threshold = poip_threshold(k)?;
    let firsts: Vec<_> = ordered_pairs(m.n()).collect();
    let rows = firsts
        .into_par_iter()
        .flat_map_iter(|first| poip_rows_for(m, mu, threshold, first))
        .collect();
    Ok(assemble_poip(threshold, rows))
}

#[cfg(not(feature = "parallel"))]
pub fn poip_check(m: &PcMatrix, mu: &Ranking, k: f64) -> Result<PoipCheck> {
    poip_check_seq(m, mu, k)
}

/// Both checks; the quadruple scan only when `with_poip`.
pub fn cop_check(m: &PcMatrix, mu: &Ranking, k: f64, with_poip: bool) -> Result<CopReport> {
    Ok(CopReport {
        pop: pop_check(m, mu, k)?,
        poip: if with_poip {
            Some(poip_check(m, mu, k)?)
        } else {
            None
        },
    })
}

/// Counts from the order-preservation checks, without materialising rows.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CopSummary {
    pub pop_premises_met: usize,
    pub pop_violations: usize,
    pub raw_pop_violations: usize,
    pub poip_premises_met: usize,
    pub poip_violations: usize,
    pub raw_poip_violations: usize,
}

impl CopSummary {
    fn add(self, o: Self) -> Self {
        Self {
            pop_premises_met: self.pop_premises_met + o.pop_premises_met,
            pop_violations: self.pop_violations + o.pop_violations,
            raw_pop_violations: self.raw_pop_violations + o.raw_pop_violations,
            poip_premises_met: self.poip_premises_met + o.poip_premises_met,
            poip_violations: self.poip_violations + o.poip_violations,
            raw_poip_violations: self.raw_poip_violations + o.raw_poip_violations,
        }
    }

    pub fn theorem_violations(&self) -> usize {
        self.pop_violations + self.poip_violations
    }
}

fn summary_for(m: &PcMatrix, mu: &Ranking, k: f64, first: (usize, usize)) -> CopSummary {
    let pop_t = 1.0 / (1.0 - k);
    let poip_t = pop_t * pop_t;
    let mut s = CopSummary::default();
    let (i, j) = first;
    let pop = pop_row(m, mu, pop_t, i, j);
    s.pop_premises_met += pop.premise_met as usize;
    s.pop_violations += (pop.premise_met && !pop.conclusion_holds) as usize;
    s.raw_pop_violations += (m.get(i, j) > 1.0 && !pop.conclusion_holds) as usize;
    for second in ordered_pairs(m.n()) {
        let (row, raw) = poip_row(m, mu, poip_t, first, second);
        s.poip_premises_met += row.premise_met as usize;
        s.poip_violations += (row.premise_met && !row.conclusion_holds) as usize;
        s.raw_poip_violations += raw as usize;
    }
    s
}

pub fn cop_summary_seq(m: &PcMatrix, mu: &Ranking, k: f64) -> Result<CopSummary> {
    check_dims(m, mu)?;
    check_k(k)?;
    Ok(ordered_pairs(m.n())
        .map(|first| summary_for(m, mu, k, first))
        .fold(CopSummary::default(), CopSummary::add))
}

#[cfg(feature = "parallel")]
pub fn cop_summary(m: &PcMatrix, mu: &Ranking, k: f64) -> Result<CopSummary> {
    check_dims(m, mu)?;
    check_k(k)?;
    let firsts: Vec<_> = ordered_pairs(m.n()).collect();
    Ok(firsts
        .into_par_iter()
        .map(|first| summary_for(m, mu, k, first))
        .reduce(CopSummary::default, CopSummary::add))
}

#[cfg(not(feature = "parallel"))]
pub fn cop_summary(m: &PcMatrix, mu: &Ranking, k: f64) -> Result<CopSummary> {
    cop_summary_seq(m, mu, k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigen::{rank_ev, EigenOptions};
    use approx::assert_abs_diff_eq;

    fn m_x() -> PcMatrix {
        PcMatrix::new(
            None,
            vec![vec![1.0, 2.0, 2.0], vec![0.5, 1.0, 2.0], vec![0.5, 0.5, 1.0]],
        )
        .unwrap()
    }

    #[test]
    fn discrepancy_bound_examples() {
        assert_eq!(discrepancy_bound(0.0).unwrap(), 0.0);
        assert_eq!(discrepancy_bound(0.5).unwrap(), 1.0);
        assert_abs_diff_eq!(discrepancy_bound(1.0 / 11.0).unwrap(), 0.1, epsilon = 1e-15);
        assert!(discrepancy_bound(1.0).is_err());
        assert!(discrepancy_bound(-0.1).is_err());
    }

    #[test]
    fn saaty_bounds_examples() {
        assert_eq!(saaty_bounds(0.0).unwrap(), (0.0, 0.0));
        assert_abs_diff_eq!(saaty_bounds(1.0 / 11.0).unwrap().1, 0.1, epsilon = 1e-15);
        assert_eq!(saaty_bounds(0.5).unwrap(), (-0.5, 1.0));
        assert!(saaty_bounds(1.5).is_err());
    }

    #[test]
    fn eigenvalue_bounds_examples() {
        assert_eq!(eigenvalue_bounds(0.0, 5).unwrap(), (5.0, 5.0));
        let (lo, hi) = eigenvalue_bounds(0.5, 3).unwrap();
        assert_eq!((lo, hi), (2.0, 5.0));
        assert!(lo <= 3.053622 && 3.053622 <= hi);
        let (lo, hi) = eigenvalue_bounds(0.9, 3).unwrap();
        assert_abs_diff_eq!(lo, 1.2, epsilon = 1e-12);
        assert_abs_diff_eq!(hi, 21.0, epsilon = 1e-12);
        assert!(eigenvalue_bounds(0.5, 1).is_err());
    }

    #[test]
    fn kappa_examples() {
        assert_eq!(kappa_recommendation(0.0, 0.0).unwrap(), 0.0);
        assert_abs_diff_eq!(kappa_recommendation(0.5, 0.25992).unwrap(), 0.29370, epsilon = 1e-5);
        assert_abs_diff_eq!(kappa_recommendation(1.0 / 11.0, 0.1).unwrap(), 0.0, epsilon = 1e-15);
        assert!(kappa_recommendation(1.0 / 11.0, 0.1).unwrap() >= 0.0);
        assert!(matches!(
            kappa_recommendation(0.1, 0.5),
            Err(Error::InconsistentPairing { .. })
        ));
        assert!(kappa_recommendation(0.1, -0.5).is_err());
    }

    #[test]
    fn pop_consistent() {
        let m = PcMatrix::from_weights(&[4.0, 2.0, 1.0]).unwrap();
        let mu = rank_ev(&m, EigenOptions::default()).unwrap();
        let pop = pop_check(&m, &mu, 0.0).unwrap();
        assert_eq!(pop.threshold, 1.0);
        let r01 = pop.rows.iter().find(|r| (r.i, r.j) == (0, 1)).unwrap();
        assert!(r01.premise_met && r01.conclusion_holds);
        let r02 = pop.rows.iter().find(|r| (r.i, r.j) == (0, 2)).unwrap();
        assert!(r02.premise_met && r02.conclusion_holds);
        assert!(pop.raw_violations.is_empty());
        assert_eq!(pop.rows.len(), 6);
    }

    #[test]
    fn m_x_premises_are_vacuous() {
        let m = m_x();
        let mu = rank_ev(&m, EigenOptions::default()).unwrap();
        let cop = cop_check(&m, &mu, 0.5, true).unwrap();
        assert_eq!(cop.pop.threshold, 2.0);
        assert!(cop.pop.rows.iter().all(|r| !r.premise_met));
        let poip = cop.poip.unwrap();
        assert_eq!(poip.threshold, 4.0);
        assert_eq!(poip.rows.len(), 36);
        assert!(poip.rows.iter().all(|r| !r.premise_met));
    }

    #[test]
    fn poip_consistent() {
        let m = PcMatrix::from_weights(&[4.0, 2.0, 1.0]).unwrap();
        let mu = rank_ev(&m, EigenOptions::default()).unwrap();
        let poip = poip_check(&m, &mu, 0.0).unwrap();
        let row = poip
            .rows
            .iter()
            .find(|r| (r.i, r.j, r.k, r.l) == (0, 2, 0, 1))
            .unwrap();
        assert!(row.premise_met && row.conclusion_holds);

        let m4 = PcMatrix::from_weights(&[8.0, 4.0, 2.0, 1.0]).unwrap();
        let mu4 = rank_ev(&m4, EigenOptions::default()).unwrap();
        let cop = cop_check(&m4, &mu4, 0.0, true).unwrap();
        let poip = cop.poip.as_ref().unwrap();
        let row = poip
            .rows
            .iter()
            .find(|r| (r.i, r.j, r.k, r.l) == (0, 3, 1, 2))
            .unwrap();
        assert!(row.premise_met && row.conclusion_holds);
        assert!(poip.raw_violations.is_empty() && cop.pop.raw_violations.is_empty());
        assert_eq!(cop.theorem_violations(), 0);
    }

    #[test]
    fn summary_matches_rows_and_sequential() {
        let m = PcMatrix::new(
            None,
            vec![
                vec![1.0, 3.0, 0.2, 5.0],
                vec![1.0 / 3.0, 1.0, 7.0, 0.5],
                vec![5.0, 1.0 / 7.0, 1.0, 2.0],
                vec![0.2, 2.0, 0.5, 1.0],
            ],
        )
        .unwrap();
        let mu = rank_ev(&m, EigenOptions::default()).unwrap();
        let k = crate::inconsistency::koczkodaj_index(&m).unwrap().0;
        let cop = cop_check(&m, &mu, k, true).unwrap();
        let s = cop_summary(&m, &mu, k).unwrap();
        assert_eq!(s, cop_summary_seq(&m, &mu, k).unwrap());
        let poip = cop.poip.as_ref().unwrap();
        assert_eq!(s.pop_premises_met, cop.pop.rows.iter().filter(|r| r.premise_met).count());
        assert_eq!(s.poip_premises_met, poip.rows.iter().filter(|r| r.premise_met).count());
        assert_eq!(s.raw_pop_violations, cop.pop.raw_violations.len());
        assert_eq!(s.raw_poip_violations, poip.raw_violations.len());
        assert_eq!(poip_check_seq(&m, &mu, k).unwrap(), *poip);
    }

    #[test]
    fn dimension_mismatch() {
        let m = m_x();
        let mu = Ranking::from_weights(&[1.0, 2.0], vec!["a".into(), "b".into()]).unwrap();
        assert!(pop_check(&m, &mu, 0.5).is_err());
        assert!(poip_check(&m, &mu, 0.5).is_err());
    }
}
