//! Seeded random matrix generators for sweeps, property checks and benches.

use std::ops::RangeInclusive;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::matrix::PcMatrix;

/// Upper-triangle entries log-uniform in `[1/max_ratio, max_ratio]`.
pub fn random_reciprocal<R: Rng + ?Sized>(rng: &mut R, n: usize, max_ratio: f64) -> PcMatrix {
    let span = max_ratio.ln();
    let rows = upper_to_rows(n, |_, _| rng.random_range(-span..=span).exp());
    PcMatrix::new(None, rows).expect("generated entries are positive and reciprocal")
}

/// `m_ij = w_i / w_j` with weights log-uniform in `[1, max_weight]`.
pub fn random_consistent<R: Rng + ?Sized>(rng: &mut R, n: usize, max_weight: f64) -> PcMatrix {
    let weights = random_weights(rng, n, max_weight);
    PcMatrix::from_weights(&weights).expect("positive weights")
}

/// Consistent matrix with each upper entry scaled by `exp(U(-noise, noise))`.
pub fn perturbed_consistent<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    max_weight: f64,
    noise: f64,
) -> PcMatrix {
    let w = random_weights(rng, n, max_weight);
    let rows = upper_to_rows(n, |i, j| w[i] / w[j] * rng.random_range(-noise..=noise).exp());
    PcMatrix::new(None, rows).expect("generated entries are positive and reciprocal")
}

fn random_weights<R: Rng + ?Sized>(rng: &mut R, n: usize, max_weight: f64) -> Vec<f64> {
    let span = max_weight.ln();
    (0..n).map(|_| rng.random_range(0.0..=span).exp()).collect()
}

#[allow(clippy::needless_range_loop)]
fn upper_to_rows(n: usize, mut entry: impl FnMut(usize, usize) -> f64) -> Vec<Vec<f64>> {
    let mut rows = vec![vec![1.0; n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let v = entry(i, j);
            rows[i][j] = v;
            rows[j][i] = 1.0 / v;
        }
    }
    rows
}

/// Seeded collections; sizes cycle uniformly through `sizes`.
pub struct Corpus;

impl Corpus {
    pub fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    /// Reciprocal matrices on the 1/9..9 scale.
    pub fn reciprocal(seed: u64, count: usize, sizes: RangeInclusive<usize>) -> Vec<PcMatrix> {
        let mut rng = Self::rng(seed);
        (0..count)
            .map(|_| {
                let n = rng.random_range(sizes.clone());
                random_reciprocal(&mut rng, n, 9.0)
            })
            .collect()
    }

    /// Consistent matrices from weights in `[1, 9]`.
    pub fn consistent(seed: u64, count: usize, sizes: RangeInclusive<usize>) -> Vec<PcMatrix> {
        let mut rng = Self::rng(seed);
        (0..count)
            .map(|_| {
                let n = rng.random_range(sizes.clone());
                random_consistent(&mut rng, n, 9.0)
            })
            .collect()
    }

    /// Mildly inconsistent matrices: consistent on `[1, 9]` with multiplicative
    /// noise up to `exp(±noise)`.
    pub fn perturbed(
        seed: u64,
        count: usize,
        sizes: RangeInclusive<usize>,
        noise: f64,
    ) -> Vec<PcMatrix> {
        let mut rng = Self::rng(seed);
        (0..count)
            .map(|_| {
                let n = rng.random_range(sizes.clone());
                perturbed_consistent(&mut rng, n, 9.0, noise)
            })
            .collect()
    }
}
