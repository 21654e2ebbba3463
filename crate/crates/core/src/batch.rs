//! Data-parallel evaluation over many matrices.
//!
//! With the `parallel` feature (on by default) work is spread over the rayon
//! thread pool; without it, or through the `_seq` variants, it runs in order
//! on the calling thread. Output order always matches input order.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::eigen::EigenOptions;
use crate::error::Result;
use crate::matrix::PcMatrix;
use crate::report::{analyze, AnalysisReport};

/// Maps `f` over `items`, in parallel when the feature is enabled.
#[cfg(feature = "parallel")]
pub fn map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    F: Fn(&T) -> R,
{
    map_seq(items, f)
}

pub fn map_seq<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    F: Fn(&T) -> R,
{
    items.iter().map(f).collect()
}

pub fn analyze_batch(matrices: &[PcMatrix], opts: EigenOptions) -> Vec<Result<AnalysisReport>> {
    map(matrices, |m| analyze(m, opts))
}

pub fn analyze_batch_seq(
    matrices: &[PcMatrix],
    opts: EigenOptions,
) -> Vec<Result<AnalysisReport>> {
    map_seq(matrices, |m| analyze(m, opts))
}
