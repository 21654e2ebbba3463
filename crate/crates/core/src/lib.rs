//! Pairwise-comparison ranking workbench.
//!
//! Derives priority vectors from reciprocal judgment matrices with the
//! principal-eigenvector method, measures input quality (Saaty's and
//! Koczkodaj's inconsistency indices) and output quality (local and global
//! ranking discrepancy), evaluates the bounds that Koczkodaj's index places
//! on all of these, and proposes judgment revisions that reduce
//! inconsistency.
//!
//! ```
//! use pcrank_core::{analyze, EigenOptions, PcMatrix};
//!
//! let m = PcMatrix::new(None, vec![
//!     vec![1.0, 2.0, 2.0],
//!     vec![0.5, 1.0, 2.0],
//!     vec![0.5, 0.5, 1.0],
//! ]).unwrap();
//! let report = analyze(&m, EigenOptions::default()).unwrap();
//! assert_eq!(report.koczkodaj, Some(0.5));
//! assert!(report.discrepancy.global <= report.bounds.unwrap().discrepancy_bound);
//! ```

pub mod batch;
pub mod bounds;
pub mod corpus;
pub mod discrepancy;
pub mod eigen;
pub mod error;
pub mod inconsistency;
pub mod matrix;
pub mod reduction;
pub mod report;

pub use bounds::{
    cop_check, cop_summary, discrepancy_bound, eigenvalue_bounds, kappa_recommendation,
    poip_check, pop_check, saaty_bounds, BoundsReport, CopReport, CopSummary,
};
pub use discrepancy::{global_discrepancy, local_discrepancy, ranking_error, DiscrepancyReport};
pub use eigen::{principal_eigenpair, rank_ev, EigenOptions, EigenPair, Ranking};
pub use error::{Error, Result};
pub use inconsistency::{inconsistency_report, koczkodaj_index, saaty_index, InconsistencyReport};
pub use matrix::{
    complete_reciprocal, is_consistent, parse_matrix, scale_check, triads, MatrixFormat, PcMatrix,
    ScaleReport, Triad,
};
pub use reduction::{reduce, suggest_revision, ReduceOutcome, ReduceParams, Revision};
pub use report::{analyze, AnalysisReport};
