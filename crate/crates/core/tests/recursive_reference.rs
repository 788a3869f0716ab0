mod support;

use psdsplit_core::generate::{random_symmetric, sprand, SplitMix};
use psdsplit_core::{chtwo, ChtwoConfig, PairForm, PivotStrategy, VPolicy};
use support::reference::{chtwo_recursive, max_abs_diff};

#[test]
fn iterative_matches_recursion() {
    let mut rng = SplitMix::new(1000);
    for n in 1..=10 {
        for rep in 0..6 {
            let a = if rep % 2 == 0 {
                random_symmetric(n, &mut rng)
            } else {
                sprand(n, 0.3, &mut rng)
            };
            for policy in VPolicy::ALL {
                for pivot in PivotStrategy::ALL {
                    // A large threshold forces a mix of exact and regularized steps.
                    for tol in [ChtwoConfig::for_matrix(&a).small_pivot_tol, 0.5] {
                        let cfg = ChtwoConfig::for_matrix(&a)
                            .with_delta(0.25)
                            .with_small_pivot_tol(tol)
                            .with_v_policy(policy)
                            .with_pivot(pivot);
                        let (pair, _) = chtwo(&a, &cfg).unwrap();
                        let PairForm::Factored { l1, l2 } = &pair.form else {
                            panic!()
                        };
                        // The recursion runs on P A Pᵀ in natural order.
                        let pap = a.permuted(&pair.perm).unwrap().to_rows();
                        let (r1, r2) = chtwo_recursive(&pap, 0.25, tol, policy);
                        let scale = l1.max_abs().max(l2.max_abs()).max(1.0);
                        assert!(
                            max_abs_diff(&l1.to_rows(), &r1) <= 1e-10 * scale,
                            "n={n} {policy:?} {pivot:?}"
                        );
                        assert!(
                            max_abs_diff(&l2.to_rows(), &r2) <= 1e-10 * scale,
                            "n={n} {policy:?} {pivot:?}"
                        );
                    }
                }
            }
        }
    }
}

#[test]
fn recursion_reproduces_worked_example() {
    let a = vec![vec![0.0, 1.0], vec![1.0, 0.0]];
    let (l1, l2) = chtwo_recursive(&a, 1.0, 0.0, VPolicy::V1Zero);
    assert_eq!(l1, vec![vec![1.0, 0.0], vec![0.0, 1.0]]);
    assert_eq!(l2, vec![vec![1.0, 0.0], vec![-1.0, 0.0]]);
}
