//! Pairwise-comparison (PC) matrices: validation, parsing and triad enumeration.
//!
//! A [`PcMatrix`] is square, strictly positive and reciprocal
//! (`m[i][j] * m[j][i] == 1`). Inputs that are reciprocal within a relative
//! tolerance of `1e-9` are accepted and canonicalised so that the lower
//! triangle is the exact reciprocal of the upper one.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative tolerance for the reciprocity and unit-diagonal checks.
pub const RECIPROCITY_TOL: f64 = 1e-9;

/// Default tolerance for [`is_consistent`].
pub const DEFAULT_CONSISTENCY_TOL: f64 = 1e-9;

/// Scale bound for judgment entries, `sqrt((11 + 5 sqrt 5) / 2)`.
pub fn fulop_constant() -> f64 {
    ((11.0 + 5.0 * 5f64.sqrt()) / 2.0).sqrt()
}

/// Square positive reciprocal judgment matrix with concept labels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "FullMatrixDoc", into = "FullMatrixDoc")]
pub struct PcMatrix {
    n: usize,
    labels: Vec<String>,
    entries: Vec<f64>,
}

impl PcMatrix {
    /// Builds a matrix from a full grid of rows, validating positivity, the
    /// unit diagonal and reciprocity. Missing labels default to `C1..Cn`.
    pub fn new(labels: Option<Vec<String>>, rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = rows.len();
        if n < 2 {
            return Err(Error::TooSmall { n, min: 2 });
        }
        for (row, r) in rows.iter().enumerate() {
            if r.len() != n {
                return Err(Error::NotSquare {
                    row,
                    len: r.len(),
                    expected: n,
                });
            }
        }
        let labels = check_labels(labels, n)?;
        for (i, r) in rows.iter().enumerate() {
            for (j, &value) in r.iter().enumerate() {
                if !(value.is_finite() && value > 0.0) {
                    return Err(Error::NonPositive { i, j, value });
                }
            }
        }
        let mut entries = vec![0.0; n * n];
        for i in 0..n {
            let d = rows[i][i];
            if (d - 1.0).abs() > RECIPROCITY_TOL {
                return Err(Error::Diagonal { i, value: d });
            }
            entries[i * n + i] = 1.0;
            for j in (i + 1)..n {
                let upper = rows[i][j];
                let lower = rows[j][i];
                let product = upper * lower;
                if (product - 1.0).abs() > RECIPROCITY_TOL {
                    return Err(Error::Reciprocity {
                        i,
                        j,
                        upper,
                        lower,
                        product,
                    });
                }
                entries[i * n + j] = upper;
                entries[j * n + i] = 1.0 / upper;
            }
        }
        Ok(Self { n, labels, entries })
    }

    /// Consistent matrix `m[i][j] = w[i] / w[j]`.
    pub fn from_weights(weights: &[f64]) -> Result<Self> {
        let n = weights.len();
        for (i, &w) in weights.iter().enumerate() {
            if !(w.is_finite() && w > 0.0) {
                return Err(Error::NonPositive { i, j: i, value: w });
            }
        }
        let mut upper = BTreeMap::new();
        for i in 0..n {
            for j in (i + 1)..n {
                upper.insert((i, j), weights[i] / weights[j]);
            }
        }
        complete_reciprocal(&upper, n, None)
    }

    /// All-ones matrix: every pair judged equally important.
    pub fn ones(n: usize) -> Result<Self> {
        Self::ones_labeled(n, None)
    }

    pub fn ones_labeled(n: usize, labels: Option<Vec<String>>) -> Result<Self> {
        if n < 2 {
            return Err(Error::TooSmall { n, min: 2 });
        }
        let labels = check_labels(labels, n)?;
        Ok(Self {
            n,
            labels,
            entries: vec![1.0; n * n],
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.n).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn max_entry(&self) -> f64 {
        self.entries.iter().copied().fold(f64::MIN, f64::max)
    }

    /// Returns a copy with `m[i][j] = value` and `m[j][i] = 1 / value`.
    pub fn with_judgment(&self, i: usize, j: usize, value: f64) -> Result<Self> {
        let n = self.n;
        for index in [i, j] {
            if index >= n {
                return Err(Error::IndexOutOfRange { index, n });
            }
        }
        if i == j {
            return Err(Error::SameIndex { i, j });
        }
        if !(value.is_finite() && value > 0.0) {
            return Err(Error::NonPositive { i, j, value });
        }
        let mut out = self.clone();
        out.entries[i * n + j] = value;
        out.entries[j * n + i] = 1.0 / value;
        Ok(out)
    }

    /// Simultaneous row/column permutation: `out[a][b] = m[perm[a]][perm[b]]`.
    ///
    /// Panics if `perm` is not a permutation of `0..n`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.n, "permutation length");
        let mut seen = vec![false; self.n];
        for &p in perm {
            assert!(!std::mem::replace(&mut seen[p], true), "not a permutation");
        }
        let n = self.n;
        let mut entries = vec![0.0; n * n];
        for a in 0..n {
            for b in 0..n {
                entries[a * n + b] = self.get(perm[a], perm[b]);
            }
        }
        Self {
            n,
            labels: perm.iter().map(|&p| self.labels[p].clone()).collect(),
            entries,
        }
    }

    pub fn transposed(&self) -> Self {
        let n = self.n;
        let mut entries = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                entries[i * n + j] = self.get(j, i);
            }
        }
        Self {
            n,
            labels: self.labels.clone(),
            entries,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("matrix serialisation is infallible")
    }
}

fn check_labels(labels: Option<Vec<String>>, n: usize) -> Result<Vec<String>> {
    let labels = match labels {
        None => return Ok((1..=n).map(|i| format!("C{i}")).collect()),
        Some(l) => l,
    };
    if labels.len() != n {
        return Err(Error::LabelCount {
            expected: n,
            got: labels.len(),
        });
    }
    let mut seen = HashSet::new();
    for l in &labels {
        if l.trim().is_empty() {
            return Err(Error::Label("labels must be non-empty".into()));
        }
        if !seen.insert(l.as_str()) {
            return Err(Error::Label(format!("duplicate label {l:?}")));
        }
    }
    Ok(labels)
}

/// Builds a full matrix from upper-triangle judgments `(i, j) -> m[i][j]`,
/// `i < j`. Every pair must be present.
pub fn complete_reciprocal(
    upper: &BTreeMap<(usize, usize), f64>,
    n: usize,
    labels: Option<Vec<String>>,
) -> Result<PcMatrix> {
    if n < 2 {
        return Err(Error::TooSmall { n, min: 2 });
    }
    for (&(i, j), &value) in upper {
        for index in [i, j] {
            if index >= n {
                return Err(Error::IndexOutOfRange { index, n });
            }
        }
        if i >= j {
            return Err(Error::InvalidParameter(format!(
                "upper-triangle judgment requires i < j, got ({i},{j})"
            )));
        }
        if !(value.is_finite() && value > 0.0) {
            return Err(Error::NonPositive { i, j, value });
        }
    }
    let labels = check_labels(labels, n)?;
    let mut entries = vec![1.0; n * n];
    for i in 0..n {
        for j in (i + 1)..n {
            let v = *upper.get(&(i, j)).ok_or(Error::MissingPair { i, j })?;
            entries[i * n + j] = v;
            entries[j * n + i] = 1.0 / v;
        }
    }
    Ok(PcMatrix { n, labels, entries })
}

/// True iff `|m_ij * m_jk * m_ki - 1| <= tol` for every ordered triple of
/// distinct indices. Always true for `n = 2`.
pub fn is_consistent(m: &PcMatrix, tol: f64) -> bool {
    let n = m.n();
    for i in 0..n {
        for j in 0..n {
            if j == i {
                continue;
            }
            for k in 0..n {
                if k == i || k == j {
                    continue;
                }
                if (m.get(i, j) * m.get(j, k) * m.get(k, i) - 1.0).abs() > tol {
                    return false;
                }
            }
        }
    }
    true
}

/// Three distinct indices (stored ascending) and their local inconsistency.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Triad {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub local_inconsistency: f64,
}

/// `min(|1 - m_ij/(m_ik m_kj)|, |1 - m_ik m_kj / m_ij|)` for one ordered triple.
#[inline]
pub fn ordered_triad_term(m: &PcMatrix, i: usize, j: usize, k: usize) -> f64 {
    let direct = m.get(i, j);
    let indirect = m.get(i, k) * m.get(k, j);
    (1.0 - direct / indirect)
        .abs()
        .min((1.0 - indirect / direct).abs())
}

/// Local inconsistency of the unordered triple `{a, b, c}`: the maximum of the
/// ordered term over all six orderings.
pub fn triad_inconsistency(m: &PcMatrix, a: usize, b: usize, c: usize) -> f64 {
    [
        (a, b, c),
        (a, c, b),
        (b, a, c),
        (b, c, a),
        (c, a, b),
        (c, b, a),
    ]
    .into_iter()
    .map(|(i, j, k)| ordered_triad_term(m, i, j, k))
    .fold(0.0, f64::max)
}

/// One [`Triad`] per unordered triple, in lexicographic order of `(i, j, k)`.
pub fn triads(m: &PcMatrix) -> Result<Vec<Triad>> {
    let n = m.n();
    if n < 3 {
        return Err(Error::KoczkodajUndefined { n });
    }
    let mut out = Vec::with_capacity(n * (n - 1) * (n - 2) / 6);
    for i in 0..n {
        for j in (i + 1)..n {
            for k in (j + 1)..n {
                out.push(Triad {
                    i,
                    j,
                    k,
                    local_inconsistency: triad_inconsistency(m, i, j, k),
                });
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ScaleReport {
    pub max_entry: f64,
    pub fulop_constant: f64,
    pub within_scale: bool,
}

/// Informational: whether every entry lies below the Fülöp constant.
pub fn scale_check(m: &PcMatrix) -> ScaleReport {
    let max_entry = m.max_entry();
    let fulop_constant = fulop_constant();
    ScaleReport {
        max_entry,
        fulop_constant,
        within_scale: max_entry < fulop_constant,
    }
}

// ---------------------------------------------------------------------------
// Parsing

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixFormat {
    Json,
    Csv,
}

impl MatrixFormat {
    /// Guesses the format from a file extension; anything but `.csv` is JSON.
    pub fn from_path(path: &std::path::Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("csv") => Self::Csv,
            _ => Self::Json,
        }
    }
}

impl FromStr for MatrixFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(Self::Json),
            "csv" => Ok(Self::Csv),
            other => Err(Error::InvalidParameter(format!("unknown format {other:?}"))),
        }
    }
}

impl fmt::Display for MatrixFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Json => "json",
            Self::Csv => "csv",
        })
    }
}

/// Parses a decimal (`0.25`) or a fraction (`1/4`).
pub fn parse_number(text: &str) -> std::result::Result<f64, String> {
    let t = text.trim();
    let value = match t.split_once('/') {
        Some((num, den)) => {
            let num: f64 = num
                .trim()
                .parse()
                .map_err(|_| format!("invalid numerator in {t:?}"))?;
            let den: f64 = den
                .trim()
                .parse()
                .map_err(|_| format!("invalid denominator in {t:?}"))?;
            if den == 0.0 {
                return Err(format!("zero denominator in {t:?}"));
            }
            num / den
        }
        None => t.parse().map_err(|_| format!("invalid number {t:?}"))?,
    };
    Ok(value)
}

/// JSON numeric cell: a number or a string holding a decimal or fraction.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
enum Cell {
    Number(f64),
    Text(String),
}

impl Cell {
    fn value(&self) -> Result<f64> {
        match self {
            Cell::Number(v) => Ok(*v),
            Cell::Text(s) => parse_number(s).map_err(|message| Error::Parse {
                line: None,
                message,
            }),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct FullMatrixDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<String>>,
    matrix: Vec<Vec<Cell>>,
}

impl TryFrom<FullMatrixDoc> for PcMatrix {
    type Error = Error;

    fn try_from(doc: FullMatrixDoc) -> Result<Self> {
        let rows = doc
            .matrix
            .iter()
            .map(|r| r.iter().map(Cell::value).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        PcMatrix::new(doc.labels, rows)
    }
}

impl From<PcMatrix> for FullMatrixDoc {
    fn from(m: PcMatrix) -> Self {
        Self {
            matrix: (0..m.n)
                .map(|i| m.row(i).iter().map(|&v| Cell::Number(v)).collect())
                .collect(),
            labels: Some(m.labels),
        }
    }
}

#[derive(Debug, Deserialize)]
struct Judgment {
    i: usize,
    j: usize,
    value: Cell,
}

#[derive(Debug, Deserialize)]
struct UpperDoc {
    n: usize,
    #[serde(default)]
    labels: Option<Vec<String>>,
    judgments: Vec<Judgment>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum JsonDoc {
    Full(FullMatrixDoc),
    Upper(UpperDoc),
}

/// Parses a matrix from JSON (full grid or upper-triangle judgments) or CSV.
pub fn parse_matrix(text: &str, format: MatrixFormat) -> Result<PcMatrix> {
    match format {
        MatrixFormat::Json => parse_json(text),
        MatrixFormat::Csv => parse_csv(text),
    }
}

fn parse_json(text: &str) -> Result<PcMatrix> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: Some(e.line()),
        message: e.to_string(),
    })?;
    let doc: JsonDoc = serde_json::from_value(value).map_err(|_| Error::Parse {
        line: None,
        message: "expected {\"labels\", \"matrix\"} or {\"n\", \"judgments\"}".into(),
    })?;
    match doc {
        JsonDoc::Full(doc) => PcMatrix::try_from(doc),
        JsonDoc::Upper(doc) => {
            let mut upper = BTreeMap::new();
            for jd in &doc.judgments {
                let v = jd.value.value()?;
                // (j, i) with i > j is read as the reciprocal judgment
                let (key, v) = if jd.i < jd.j {
                    ((jd.i, jd.j), v)
                } else if jd.i > jd.j {
                    ((jd.j, jd.i), 1.0 / v)
                } else {
                    return Err(Error::SameIndex { i: jd.i, j: jd.j });
                };
                if upper.insert(key, v).is_some() {
                    return Err(Error::DuplicatePair { i: key.0, j: key.1 });
                }
            }
            complete_reciprocal(&upper, doc.n, doc.labels)
        }
    }
}

fn parse_csv(text: &str) -> Result<PcMatrix> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut labels = None;
    let mut rows = Vec::new();
    for (index, record) in reader.records().enumerate() {
        let record = record.map_err(|e| Error::Parse {
            line: e.position().map(|p| p.line() as usize),
            message: e.to_string(),
        })?;
        let line = record.position().map(|p| p.line() as usize);
        if record.iter().all(|c| c.is_empty()) {
            continue;
        }
        let parsed: Vec<_> = record.iter().map(parse_number).collect();
        if parsed.iter().all(|p| p.is_ok()) {
            rows.push(parsed.into_iter().map(|p| p.unwrap()).collect::<Vec<f64>>());
        } else if index == 0 && parsed.iter().all(|p| p.is_err()) {
            labels = Some(record.iter().map(str::to_string).collect());
        } else {
            let message = parsed.into_iter().find_map(|p| p.err()).unwrap_or_default();
            return Err(Error::Parse { line, message });
        }
    }
    PcMatrix::new(labels, rows)
}
