use proptest::prelude::*;
use qnm_core::resources::{estimate, reference_table, to_csv, to_markdown, ResourceError};

#[test]
fn table_rows_reproduce_exactly() {
    let expected = [
        (40, 80, 363),
        (40, 107, 471),
        (54, 80, 377),
        (54, 107, 485),
        (67, 80, 390),
        (67, 107, 498),
        (80, 80, 403),
        (80, 107, 511),
    ];
    let rows = reference_table(false);
    assert_eq!(rows.len(), 8);
    for (r, &(n, m, q)) in rows.iter().zip(&expected) {
        assert_eq!((r.n, r.m, r.q_table, r.total()), (n, m, q, q), "{r:?}");
    }
    let with_dilation = reference_table(true);
    assert!(with_dilation.iter().zip(&expected).all(|(r, &(_, _, q))| r.total() == q + 1));
}

#[test]
fn named_examples() {
    let r = estimate(10u128.pow(24), 1e-12, false).unwrap();
    assert_eq!((r.n, r.m, r.q_table, r.q_eq), (80, 80, 403, 404));
    let r = estimate(2, 0.5, false).unwrap();
    assert_eq!((r.n, r.m, r.q_table), (1, 2, 12));
    assert_eq!(r.depth_order, "O(1/ε) = O(2^1)");
}

#[test]
fn invalid_inputs() {
    assert_eq!(estimate(1, 0.1, false).unwrap_err(), ResourceError::TooFewUnknowns(1));
    for eps in [0.0, 1.0, -0.5, f64::NAN] {
        assert!(matches!(estimate(16, eps, false), Err(ResourceError::InvalidAccuracy(_))));
    }
}

#[test]
fn table_formats() {
    let rows = reference_table(false);
    let csv = to_csv(&rows);
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("N,n,epsilon,m,Q_total"));
    assert_eq!(lines.next(), Some("1000000000000,40,1e-12,80,363"));
    assert_eq!(csv.lines().last(), Some("1000000000000000000000000,80,1e-16,107,511"));
    let md = to_markdown(&rows);
    assert!(md.starts_with("| N | n | ε | m | Q_total |\n"));
    assert!(md.contains("| 1e24 | 80 | 1e-12 | 80 | 403 |"));
    assert_eq!(md.lines().count(), 2 + 8);
}

proptest! {
    #[test]
    fn counts_follow_their_definitions(unknowns in 2u128..u128::MAX, exp in 0.01f64..50.0) {
        let eps = 2f64.powf(-exp);
        prop_assume!(eps < 1.0);
        let r = estimate(unknowns, eps, false).unwrap();
        prop_assert!(unknowns <= 1u128.checked_shl(r.n).unwrap_or(u128::MAX) || r.n == 128);
        prop_assert!(r.n == 1 || (1u128 << (r.n - 1)) < unknowns);
        prop_assert!(f64::from(r.m) >= 2.0 * exp - 1e-9);
        prop_assert!(f64::from(r.m) < 2.0 * exp + 1.0 + 1e-9);
        prop_assert_eq!(r.q_table, r.n + 4 * r.m + 3);
        prop_assert_eq!(r.q_eq, r.q_table + 1);
    }

    #[test]
    fn qubits_grow_with_size_and_accuracy(a in 2u128..1 << 100, b in 2u128..1 << 100, e1 in 1e-15f64..0.9, e2 in 1e-15f64..0.9) {
        let (small, large) = (a.min(b), a.max(b));
        let (loose, tight) = (e1.max(e2), e1.min(e2));
        prop_assert!(estimate(small, loose, false).unwrap().q_table <= estimate(large, loose, false).unwrap().q_table);
        prop_assert!(estimate(small, loose, false).unwrap().q_table <= estimate(small, tight, false).unwrap().q_table);
    }
}
