//! Full analysis of one matrix: ranking, indices, discrepancy, bounds.

use serde::{Deserialize, Serialize};

use crate::bounds::{cop_summary, BoundsReport, CopSummary, SAATY_CRITERION_K};
use crate::discrepancy::{global_discrepancy, DiscrepancyReport};
use crate::eigen::{rank_ev_with_pair, EigenOptions, Ranking};
use crate::error::{Error, Result};
use crate::inconsistency::{koczkodaj_index, saaty_index};
use crate::matrix::{scale_check, PcMatrix, ScaleReport, Triad};

pub const NOTE_K_UNDEFINED: &str = "Koczkodaj index undefined (n < 3)";
pub const NOTE_SAATY_CRITERION: &str =
    "S < 0.1 is guaranteed when K <= 1/11 (upper bound S <= 1/(1-K) - 1)";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct AnalysisReport {
    pub n: usize,
    pub matrix: PcMatrix,
    pub ranking: Ranking,
    pub lambda_max: f64,
    pub iterations: usize,
    pub residual: f64,
    pub saaty: f64,
    pub koczkodaj: Option<f64>,
    pub alpha: Option<f64>,
    pub worst_triad: Option<Triad>,
    pub discrepancy: DiscrepancyReport,
    /// `None` when K is undefined.
    pub bounds: Option<BoundsReport>,
    pub scale: ScaleReport,
    pub cop: Option<CopSummary>,
    /// Whether `K ≤ 1/11`, which guarantees `S < 0.1`.
    pub saaty_criterion_guaranteed: Option<bool>,
    pub notes: Vec<String>,
}

impl AnalysisReport {
    /// Recomputes the bounds from the report's own `K`, `D` and `n`.
    pub fn recompute_bounds(&self) -> Result<Option<BoundsReport>> {
        self.koczkodaj
            .map(|k| BoundsReport::compute(k, self.discrepancy.global, self.n))
            .transpose()
    }

    /// True when the stored bounds equal their recomputation bit-for-bit.
    pub fn is_self_consistent(&self) -> bool {
        match self.recompute_bounds() {
            Ok(b) => b == self.bounds && self.alpha == self.koczkodaj.map(|k| 1.0 - k),
            Err(_) => false,
        }
    }
}

pub fn analyze(m: &PcMatrix, opts: EigenOptions) -> Result<AnalysisReport> {
    let n = m.n();
    let (ranking, pair) = rank_ev_with_pair(m, opts)?;
    let saaty = saaty_index(pair.lambda_max, n)?;
    let discrepancy = global_discrepancy(m, &ranking)?;
    let (koczkodaj, worst_triad) = match koczkodaj_index(m) {
        Ok((k, t)) => (Some(k), Some(t)),
        Err(Error::KoczkodajUndefined { .. }) => (None, None),
        Err(e) => return Err(e),
    };
    let bounds = koczkodaj
        .map(|k| BoundsReport::compute(k, discrepancy.global, n))
        .transpose()?;
    let cop = koczkodaj
        .map(|k| cop_summary(m, &ranking, k))
        .transpose()?;
    let mut notes = Vec::new();
    if koczkodaj.is_none() {
        notes.push(NOTE_K_UNDEFINED.to_string());
    } else {
        notes.push(NOTE_SAATY_CRITERION.to_string());
    }
    Ok(AnalysisReport {
        n,
        matrix: m.clone(),
        ranking,
        lambda_max: pair.lambda_max,
        iterations: pair.iterations,
        residual: pair.residual,
        saaty,
        koczkodaj,
        alpha: koczkodaj.map(|k| 1.0 - k),
        worst_triad,
        discrepancy,
        bounds,
        scale: scale_check(m),
        cop,
        saaty_criterion_guaranteed: koczkodaj.map(|k| k <= SAATY_CRITERION_K),
        notes,
    })
}
