//! Ranking error `ε`, local discrepancy `E` and global discrepancy `D`
//! between a matrix and any ranking.

use serde::{Deserialize, Serialize};

use crate::eigen::Ranking;
use crate::error::{Error, Result};
use crate::matrix::PcMatrix;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct DiscrepancyReport {
    pub global: f64,
    pub worst_pair: (usize, usize),
    /// Symmetric `E(i, j)` grid, zero on the diagonal.
    pub local_grid: Vec<Vec<f64>>,
    /// The ranking the discrepancy was measured against.
    pub ranking: Vec<f64>,
}

fn check_pair(m: &PcMatrix, mu: &Ranking, i: usize, j: usize) -> Result<()> {
    check_dims(m, mu)?;
    for index in [i, j] {
        if index >= m.n() {
            return Err(Error::IndexOutOfRange { index, n: m.n() });
        }
    }
    if i == j {
        return Err(Error::SameIndex { i, j });
    }
    Ok(())
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

#[inline]
fn epsilon(m: &PcMatrix, mu: &Ranking, i: usize, j: usize) -> f64 {
    mu.get(i) / (m.get(i, j) * mu.get(j))
}

#[inline]
fn local_from_epsilon(eps: f64) -> f64 {
    (eps - 1.0).max(1.0 / eps - 1.0)
}

/// `ε(i, j) = (1 / m_ij) · (μ_i / μ_j)`.
pub fn ranking_error(m: &PcMatrix, mu: &Ranking, i: usize, j: usize) -> Result<f64> {
    check_pair(m, mu, i, j)?;
    Ok(epsilon(m, mu, i, j))
}

/// `E(i, j) = max(ε − 1, 1/ε − 1)`.
pub fn local_discrepancy(m: &PcMatrix, mu: &Ranking, i: usize, j: usize) -> Result<f64> {
    check_pair(m, mu, i, j)?;
    // evaluate on the upper-triangle orientation so E(i,j) == E(j,i) bitwise
    let (a, b) = if i < j { (i, j) } else { (j, i) };
    Ok(local_from_epsilon(epsilon(m, mu, a, b)))
}

/// `D(M, μ)`: the largest local discrepancy, with the lexicographically
/// smallest maximising pair.
#[allow(clippy::needless_range_loop)]
pub fn global_discrepancy(m: &PcMatrix, mu: &Ranking) -> Result<DiscrepancyReport> {
    check_dims(m, mu)?;
    let n = m.n();
    let mut grid = vec![vec![0.0; n]; n];
    let mut global = f64::NEG_INFINITY;
    let mut worst_pair = (0, 1);
    for i in 0..n {
        for j in (i + 1)..n {
            let e = local_from_epsilon(epsilon(m, mu, i, j));
            grid[i][j] = e;
            grid[j][i] = e;
            if e > global {
                global = e;
                worst_pair = (i, j);
            }
        }
    }
    Ok(DiscrepancyReport {
        global,
        worst_pair,
        local_grid: grid,
        ranking: mu.values.clone(),
    })
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
    fn consistent_errors_are_one() {
        let m = PcMatrix::from_weights(&[4.0, 2.0, 1.0]).unwrap();
        let mu = rank_ev(&m, EigenOptions::default()).unwrap();
        assert_abs_diff_eq!(ranking_error(&m, &mu, 0, 1).unwrap(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(local_discrepancy(&m, &mu, 0, 1).unwrap(), 0.0, epsilon = 1e-12);
        assert!(global_discrepancy(&m, &mu).unwrap().global <= 1e-12);
    }

    #[test]
    fn m_x_values() {
        let m = m_x();
        let mu = rank_ev(&m, EigenOptions::default()).unwrap();
        let e01 = ranking_error(&m, &mu, 0, 1).unwrap();
        let e10 = ranking_error(&m, &mu, 1, 0).unwrap();
        assert_abs_diff_eq!(e01, 2f64.powf(-1.0 / 3.0), epsilon = 1e-10);
        assert_abs_diff_eq!(e10, 2f64.cbrt(), epsilon = 1e-10);
        assert_abs_diff_eq!(e01 * e10, 1.0, epsilon = 1e-12);
        let l01 = local_discrepancy(&m, &mu, 0, 1).unwrap();
        assert_abs_diff_eq!(l01, 0.25992, epsilon = 1e-5);
        assert_eq!(l01, local_discrepancy(&m, &mu, 1, 0).unwrap());

        let d = global_discrepancy(&m, &mu).unwrap();
        assert_abs_diff_eq!(d.global, 2f64.cbrt() - 1.0, epsilon = 1e-10);
        for i in 0..3 {
            assert_eq!(d.local_grid[i][i], 0.0);
            for j in 0..3 {
                assert_eq!(d.local_grid[i][j], d.local_grid[j][i]);
                if i != j {
                    assert_abs_diff_eq!(d.local_grid[i][j], d.global, epsilon = 1e-10);
                }
            }
        }
    }

    #[test]
    fn uniform_on_all_ones() {
        let m = PcMatrix::ones(3).unwrap();
        let d = global_discrepancy(&m, &Ranking::uniform(&m)).unwrap();
        assert_eq!(d.global, 0.0);
    }

    #[test]
    fn errors() {
        let m = m_x();
        let mu = Ranking::uniform(&m);
        assert!(matches!(ranking_error(&m, &mu, 1, 1), Err(Error::SameIndex { .. })));
        assert!(matches!(local_discrepancy(&m, &mu, 2, 2), Err(Error::SameIndex { .. })));
        let short = Ranking::from_weights(&[1.0, 1.0], vec!["a".into(), "b".into()]).unwrap();
        assert!(matches!(
            global_discrepancy(&m, &short),
            Err(Error::DimensionMismatch { .. })
        ));
    }
}
