use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Malformed input text. `line` is 1-based when known.
    #[error("parse error{}: {message}", line.map(|l| format!(" at line {l}")).unwrap_or_default())]
    Parse { line: Option<usize>, message: String },

    #[error("matrix is not square: row {row} has {len} entries, expected {expected}")]
    NotSquare { row: usize, len: usize, expected: usize },

    #[error("at least {min} concepts required, got {n}")]
    TooSmall { n: usize, min: usize },

    #[error("entry ({i},{j}) must be strictly positive and finite, got {value}")]
    NonPositive { i: usize, j: usize, value: f64 },

    #[error("diagonal entry ({i},{i}) must be 1, got {value}")]
    Diagonal { i: usize, value: f64 },

    #[error("reciprocity violated at ({i},{j}): {upper} * {lower} = {product}, expected 1")]
    Reciprocity {
        i: usize,
        j: usize,
        upper: f64,
        lower: f64,
        product: f64,
    },

    #[error("expected {expected} labels, got {got}")]
    LabelCount { expected: usize, got: usize },

    #[error("invalid label: {0}")]
    Label(String),

    #[error("missing judgment for pair ({i},{j})")]
    MissingPair { i: usize, j: usize },

    #[error("judgment for pair ({i},{j}) given more than once")]
    DuplicatePair { i: usize, j: usize },

    #[error("index {index} out of range for n = {n}")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("indices must be distinct, got ({i},{j})")]
    SameIndex { i: usize, j: usize },

    #[error("dimension mismatch: matrix has n = {matrix}, ranking has {ranking} entries")]
    DimensionMismatch { matrix: usize, ranking: usize },

    #[error("Koczkodaj index undefined for n < 3 (n = {n})")]
    KoczkodajUndefined { n: usize },

    #[error("power iteration did not converge after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("matrix is already consistent")]
    AlreadyConsistent,

    #[error("discrepancy {d} exceeds the bound {bound} implied by K = {k}")]
    InconsistentPairing { k: f64, d: f64, bound: f64 },
}
