use proptest::prelude::*;

use psdsplit_core::eigen::psd_tol;
use psdsplit_core::{
    chtwo, gershgorin_bounds, jacobi_eigen, reconstruct_difference, sym_from_row_major,
    ChtwoConfig, LowerTriangular, Permutation, PivotStrategy, SymMatrix, VPolicy,
};

/// Symmetric matrices with a sprinkling of exact zeros, n in 1..=8.
fn sym_matrix() -> impl Strategy<Value = SymMatrix> {
    (1usize..=8).prop_flat_map(|n| {
        let entry = prop_oneof![3 => -10.0..10.0f64, 1 => Just(0.0)];
        proptest::collection::vec(entry, n * (n + 1) / 2)
            .prop_map(move |data| SymMatrix::from_packed(n, data).unwrap())
    })
}

fn lower(n: usize) -> impl Strategy<Value = LowerTriangular> {
    proptest::collection::vec(-3.0..3.0f64, n * (n + 1) / 2)
        .prop_map(move |data| LowerTriangular::from_packed(n, data).unwrap())
}

fn policy() -> impl Strategy<Value = VPolicy> {
    prop_oneof![
        Just(VPolicy::V1Zero),
        Just(VPolicy::V2Zero),
        Just(VPolicy::Balanced)
    ]
}

fn pivot() -> impl Strategy<Value = PivotStrategy> {
    prop_oneof![
        Just(PivotStrategy::Natural),
        Just(PivotStrategy::MaxDiagMagnitude),
        Just(PivotStrategy::MinDegree)
    ]
}

proptest! {
    #[test]
    fn dense_round_trip_is_exact(a in sym_matrix()) {
        let back = sym_from_row_major(a.dim(), &a.to_dense()).unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn gershgorin_encloses_spectrum(a in sym_matrix()) {
        let (lo, hi) = gershgorin_bounds(&a);
        let e = jacobi_eigen(&a).unwrap();
        let slack = 1e-12 * a.frobenius_norm().max(1.0);
        prop_assert!(lo <= e.min() + slack);
        prop_assert!(hi >= e.max() - slack);
    }

    #[test]
    fn gram_matrices_have_nonnegative_spectrum(l in (1usize..=10).prop_flat_map(lower)) {
        let a = l.gram();
        let e = jacobi_eigen(&a).unwrap();
        prop_assert!(e.min() >= -1e-9 * a.frobenius_norm());
    }

    #[test]
    fn positive_part_scales_quadratically(
        (l1, l2) in (1usize..=6).prop_flat_map(|n| (lower(n), lower(n))),
        c in -4.0..4.0f64,
    ) {
        let id = Permutation::identity(l1.dim());
        let zero = LowerTriangular::zeros(l1.dim());
        let base = reconstruct_difference(&l1, &zero, &id).unwrap();
        let scaled_l1 = l1.scale_columns(&vec![c; l1.dim()]).unwrap();
        let scaled = reconstruct_difference(&scaled_l1, &zero, &id).unwrap();
        let diff = scaled.sub(&base.scaled(c * c)).unwrap().max_abs();
        prop_assert!(diff <= 1e-12 * base.max_abs().max(1.0) * c * c + 1e-300);
        // The negative part enters with the opposite sign.
        let d = reconstruct_difference(&l1, &l2, &id).unwrap();
        let parts = l1.gram().sub(&l2.gram()).unwrap();
        prop_assert_eq!(d, parts);
    }

    #[test]
    fn chtwo_is_total_and_exact(a in sym_matrix(), pol in policy(), piv in pivot()) {
        let cfg = ChtwoConfig::for_matrix(&a).with_v_policy(pol).with_pivot(piv);
        let (pair, log) = chtwo(&a, &cfg).unwrap();
        prop_assert_eq!(log.len(), a.dim());
        let err = a.sub(&pair.reconstruct().unwrap()).unwrap().frobenius_norm();
        prop_assert!(err <= 1e-8 * a.frobenius_norm().max(1.0));
        let tol = psd_tol(&a);
        prop_assert!(jacobi_eigen(&pair.positive_part().unwrap()).unwrap().min() >= -tol);
        prop_assert!(jacobi_eigen(&pair.negative_part().unwrap()).unwrap().min() >= -tol);
    }

    #[test]
    fn chtwo_sqrt_free_matches(a in sym_matrix(), pol in policy()) {
        let cfg = ChtwoConfig::for_matrix(&a).with_v_policy(pol).with_small_pivot_tol(1.0);
        let (plain, _) = chtwo(&a, &cfg).unwrap();
        let (ldl_form, _) = chtwo(&a, &cfg.with_sqrt_free(true)).unwrap();
        let conv = ldl_form.to_factored().unwrap();
        let d = plain.reconstruct().unwrap().sub(&conv.reconstruct().unwrap()).unwrap().max_abs();
        prop_assert!(d <= 1e-10 * a.max_abs().max(1.0));
    }
}
