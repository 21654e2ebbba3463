use pcrank_core::bounds::{cop_summary_seq, poip_check_seq};
use pcrank_core::inconsistency::koczkodaj_index_seq;
use pcrank_core::matrix::triad_inconsistency;
use pcrank_core::reduction::discrepancy_guaranteed_target;
use pcrank_core::*;
use proptest::prelude::*;

const LN9: f64 = 2.1972245773362196;

/// Reciprocal matrix with upper entries log-uniform on the 1/9..9 scale.
#[allow(clippy::needless_range_loop)]
fn reciprocal(sizes: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = PcMatrix> {
    sizes.prop_flat_map(|n| {
        prop::collection::vec(-LN9..LN9, n * (n - 1) / 2).prop_map(move |logs| {
            let mut rows = vec![vec![1.0; n]; n];
            let mut it = logs.into_iter();
            for i in 0..n {
                for j in (i + 1)..n {
                    let v = it.next().unwrap().exp();
                    rows[i][j] = v;
                    rows[j][i] = 1.0 / v;
                }
            }
            PcMatrix::new(None, rows).unwrap()
        })
    })
}

fn weights(sizes: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = Vec<f64>> {
    sizes.prop_flat_map(|n| prop::collection::vec((0.0..LN9).prop_map(f64::exp), n))
}

fn with_permutation(
    m: impl Strategy<Value = PcMatrix>,
) -> impl Strategy<Value = (PcMatrix, Vec<usize>)> {
    m.prop_flat_map(|m| {
        let perm: Vec<usize> = (0..m.n()).collect();
        (Just(m), Just(perm).prop_shuffle())
    })
}

fn opts() -> EigenOptions {
    EigenOptions::default()
}

fn alpha(m: &PcMatrix) -> f64 {
    1.0 - koczkodaj_index(m).unwrap().0
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn triads_visit_each_triple_once(m in reciprocal(3..=9)) {
        let n = m.n();
        let t = triads(&m).unwrap();
        prop_assert_eq!(t.len(), n * (n - 1) * (n - 2) / 6);
        let mut keys: Vec<_> = t.iter().map(|t| (t.i, t.j, t.k)).collect();
        keys.dedup();
        prop_assert_eq!(keys.len(), t.len());
        prop_assert!(t.iter().all(|t| t.i < t.j && t.j < t.k));
        prop_assert!(t.iter().all(|t| (0.0..1.0).contains(&t.local_inconsistency)));
    }

    #[test]
    fn weight_matrices_are_consistent(w in weights(2..=9)) {
        let m = PcMatrix::from_weights(&w).unwrap();
        prop_assert!(is_consistent(&m, 1e-12));
        if m.n() >= 3 {
            prop_assert!(koczkodaj_index(&m).unwrap().0 <= 1e-9);
        }
        let (r, pair) = (rank_ev(&m, opts()).unwrap(), principal_eigenpair(&m, opts()).unwrap());
        let total: f64 = w.iter().sum();
        for (v, wi) in r.values.iter().zip(&w) {
            prop_assert!((v - wi / total).abs() <= 1e-9);
        }
        prop_assert!((pair.lambda_max - m.n() as f64).abs() <= 1e-9);
        let d = global_discrepancy(&m, &r).unwrap();
        prop_assert!(d.global <= 1e-9);
    }

    #[test]
    fn consistency_is_permutation_invariant((m, perm) in with_permutation(reciprocal(3..=7))) {
        let p = m.permuted(&perm);
        prop_assert_eq!(is_consistent(&m, 1e-9), is_consistent(&p, 1e-9));
        let (k, kp) = (koczkodaj_index(&m).unwrap().0, koczkodaj_index(&p).unwrap().0);
        prop_assert!((k - kp).abs() <= 1e-12);
        prop_assert!((k - koczkodaj_index(&m.transposed()).unwrap().0).abs() <= 1e-12);
        prop_assert!((0.0..1.0).contains(&k));
    }

    #[test]
    fn ranking_is_permutation_equivariant((m, perm) in with_permutation(reciprocal(2..=8))) {
        let r = rank_ev(&m, opts()).unwrap();
        let rp = rank_ev(&m.permuted(&perm), opts()).unwrap();
        for (a, &p) in perm.iter().enumerate() {
            prop_assert!((rp.values[a] - r.values[p]).abs() <= 1e-9);
        }
    }

    #[test]
    fn eigen_basics(m in reciprocal(2..=9)) {
        let pair = principal_eigenpair(&m, opts()).unwrap();
        prop_assert!(pair.lambda_max >= m.n() as f64 - 1e-9);
        prop_assert!(pair.vector.iter().all(|&v| v > 0.0));
        let r = rank_ev(&m, opts()).unwrap();
        prop_assert!((r.values.iter().sum::<f64>() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn column_sums_of_errors_equal_saaty(m in reciprocal(2..=9)) {
        let pair = principal_eigenpair(&m, opts()).unwrap();
        let mu = rank_ev(&m, opts()).unwrap();
        let n = m.n();
        let s = saaty_index(pair.lambda_max, n).unwrap();
        for j in 0..n {
            let sum: f64 = (0..n)
                .filter(|&i| i != j)
                .map(|i| ranking_error(&m, &mu, i, j).unwrap() - 1.0)
                .sum();
            prop_assert!((sum / (n - 1) as f64 - s).abs() <= 1e-9);
        }
    }

    #[test]
    fn k_zero_iff_consistent(m in reciprocal(3..=8)) {
        // random entries: inconsistent with probability one
        prop_assert!(!is_consistent(&m, 1e-9));
        prop_assert!(koczkodaj_index(&m).unwrap().0 > 1e-9);
    }

    #[test]
    fn discrepancy_properties(m in reciprocal(3..=8)) {
        let mu = rank_ev(&m, opts()).unwrap();
        let a = alpha(&m);
        let n = m.n();
        let d = global_discrepancy(&m, &mu).unwrap();
        for i in 0..n {
            for j in 0..n {
                if i == j { continue; }
                let e = ranking_error(&m, &mu, i, j).unwrap();
                let back = ranking_error(&m, &mu, j, i).unwrap();
                prop_assert!((e * back - 1.0).abs() <= 1e-12);
                let l = local_discrepancy(&m, &mu, i, j).unwrap();
                prop_assert!(l >= 0.0);
                prop_assert_eq!(l, local_discrepancy(&m, &mu, j, i).unwrap());
                prop_assert!(e >= a - 1e-9 && e <= 1.0 / a + 1e-9);
                let (mi, mj, mij) = (mu.get(i), mu.get(j), m.get(i, j));
                prop_assert!(a * mij * mj <= mi + 1e-9 && mi <= mij * mj / a + 1e-9);
            }
        }
        prop_assert!(d.global <= discrepancy_bound(1.0 - a).unwrap() + 1e-9);
        let max = d.local_grid.iter().flatten().copied().fold(0.0, f64::max);
        prop_assert_eq!(max, d.global);
    }

    #[test]
    fn saaty_and_eigenvalue_bounds(m in reciprocal(3..=8)) {
        let pair = principal_eigenpair(&m, opts()).unwrap();
        let n = m.n();
        let k = koczkodaj_index(&m).unwrap().0;
        let s = saaty_index(pair.lambda_max, n).unwrap();
        let (lo, hi) = saaty_bounds(k).unwrap();
        prop_assert!(lo - 1e-9 <= s && s <= hi + 1e-9);
        let (lo, hi) = eigenvalue_bounds(k, n).unwrap();
        prop_assert!(lo - 1e-9 <= pair.lambda_max && pair.lambda_max <= hi + 1e-9);
        prop_assert!(lo > 0.0);
    }

    #[test]
    fn order_preservation_theorems(m in reciprocal(3..=7)) {
        let mu = rank_ev(&m, opts()).unwrap();
        let k = koczkodaj_index(&m).unwrap().0;
        let cop = cop_check(&m, &mu, k, true).unwrap();
        prop_assert_eq!(cop.theorem_violations(), 0);
        prop_assert_eq!(cop_summary(&m, &mu, k).unwrap(), cop_summary_seq(&m, &mu, k).unwrap());
        prop_assert_eq!(cop.poip.unwrap(), poip_check_seq(&m, &mu, k).unwrap());
    }

    #[test]
    fn kappa_stays_below_k(m in reciprocal(3..=8)) {
        let mu = rank_ev(&m, opts()).unwrap();
        let k = koczkodaj_index(&m).unwrap().0;
        let d = global_discrepancy(&m, &mu).unwrap().global;
        let kappa = kappa_recommendation(k, d).unwrap();
        prop_assert!((0.0..k).contains(&kappa));
    }

    #[test]
    fn parallel_scan_matches_sequential(m in reciprocal(3..=12)) {
        prop_assert_eq!(koczkodaj_index(&m).unwrap(), koczkodaj_index_seq(&m).unwrap());
    }

    #[test]
    fn revision_shrinks_its_triad(m in reciprocal(3..=8), theta in 0.05f64..0.95) {
        let (_, worst) = koczkodaj_index(&m).unwrap();
        let rev = suggest_revision(&m, theta, opts()).unwrap();
        let revised = rev.apply(&m).unwrap();
        let before = worst.local_inconsistency;
        let after = triad_inconsistency(&revised, worst.i, worst.j, worst.k);
        prop_assert!(after < before);
        let k = koczkodaj_index(&revised).unwrap().0;
        prop_assert!((rev.predicted_k - k).abs() <= 1e-9);
        prop_assert!(rev.new_value > 0.0);
        prop_assert_eq!(revised.get(rev.j, rev.i), 1.0 / rev.new_value);
    }

    #[test]
    fn full_projection_on_three_concepts(m in reciprocal(3..=3)) {
        let out = reduce(&m, ReduceParams { target_k: 0.0, max_steps: 3, theta: 1.0 }, opts()).unwrap();
        prop_assert!(out.reached);
        prop_assert!(out.final_k <= 1e-12);
        prop_assert!(is_consistent(&out.matrix, 1e-9));
    }

    #[test]
    fn guaranteed_reduction_lowers_discrepancy(m in reciprocal(3..=6)) {
        let mu = rank_ev(&m, opts()).unwrap();
        let d = global_discrepancy(&m, &mu).unwrap().global;
        let target = discrepancy_guaranteed_target(d) * (1.0 - 1e-6);
        let out = reduce(&m, ReduceParams { target_k: target, max_steps: 200, theta: 0.5 }, opts()).unwrap();
        let mut current = m.clone();
        for rev in &out.revisions {
            current = rev.apply(&current).unwrap();
            // every intermediate matrix passes validation again
            prop_assert!(PcMatrix::new(None, current.rows()).is_ok());
        }
        prop_assert_eq!(&current, &out.matrix);
        if out.reached {
            let mu2 = rank_ev(&out.matrix, opts()).unwrap();
            prop_assert!(global_discrepancy(&out.matrix, &mu2).unwrap().global < d);
        }
    }

    #[test]
    fn json_parse_round_trip(m in reciprocal(2..=8)) {
        prop_assert_eq!(parse_matrix(&m.to_json(), MatrixFormat::Json).unwrap(), m);
    }
}
