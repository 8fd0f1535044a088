mod common;

use common::{c, dense_mul, hermitian_with_spectrum, matrix_max_diff, max_diff, random_complex_vec, random_hermitian, random_matrix, real};
use proptest::prelude::*;
use qnm_core::linalg::vector::{dot, norm2, normalized, relative_error};
use qnm_core::linalg::{
    condition_number, dilate, direct_solve, hermitian_eigendecompose, hermitian_eigendecompose_fast, is_orthonormal,
    lu_solve, matrix_exponential_unitary, singular_value_decompose, singular_values, LinalgError, Matrix,
};

fn pauli_x() -> Matrix<f64> {
    Matrix::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0]).unwrap()
}

#[test]
fn diagonal_eigenvalues_come_back_ascending() {
    let e = hermitian_eigendecompose(&Matrix::from_real_diagonal(&[3.0, 2.0])).unwrap();
    assert_eq!(e.eigenvalues, vec![2.0, 3.0]);
    assert!(is_orthonormal(&e.eigenvectors, 1e-12));
}

#[test]
fn pauli_x_has_eigenvalues_plus_minus_one() {
    let e = hermitian_eigendecompose(&pauli_x()).unwrap();
    assert!((e.eigenvalues[0] + 1.0).abs() < 1e-14);
    assert!((e.eigenvalues[1] - 1.0).abs() < 1e-14);
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let v1 = e.eigenvectors.column(1);
    assert!((v1[0].norm() - s).abs() < 1e-12 && (v1[0] - v1[1]).norm() < 1e-12);
}

#[test]
fn non_hermitian_and_non_square_are_rejected() {
    let a = Matrix::from_real(2, 2, &[1.0, 2.0, 0.0, 1.0]).unwrap();
    assert!(matches!(hermitian_eigendecompose(&a), Err(LinalgError::NonHermitian { .. })));
    let r = Matrix::<f64>::zeros(2, 3);
    assert!(matches!(hermitian_eigendecompose(&r), Err(LinalgError::NotSquare { .. })));
}

#[test]
fn known_spectrum_is_recovered() {
    let values = [-2.5, -0.25, 0.5, 1.0, 3.0, 7.75];
    let a = hermitian_with_spectrum(&values, 3);
    for e in [hermitian_eigendecompose(&a).unwrap(), hermitian_eigendecompose_fast(&a).unwrap()] {
        for (x, y) in e.eigenvalues.iter().zip(values) {
            assert!((x - y).abs() < 1e-10, "{x} vs {y}");
        }
    }
}

#[test]
fn jacobi_and_backend_agree_on_eigenvalues() {
    for seed in 0..5 {
        let a = random_hermitian(12, seed);
        let j = hermitian_eigendecompose(&a).unwrap();
        let f = hermitian_eigendecompose_fast(&a).unwrap();
        for (x, y) in j.eigenvalues.iter().zip(&f.eigenvalues) {
            assert!((x - y).abs() < 1e-10);
        }
    }
}

fn hermitian_strategy() -> impl Strategy<Value = Matrix<f64>> {
    (1usize..=64, any::<u64>()).prop_map(|(n, seed)| random_hermitian(n, seed))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn eigendecomposition_reconstructs_and_is_orthonormal(a in hermitian_strategy()) {
        let e = hermitian_eigendecompose_fast(&a).unwrap();
        prop_assert!(matrix_max_diff(&e.reconstruct(), &a) <= 1e-9);
        prop_assert!(is_orthonormal(&e.eigenvectors, 1e-10));
        for w in e.eigenvalues.windows(2) {
            prop_assert!(w[0] <= w[1]);
        }
        for k in 0..e.dim() {
            let v = e.eigenvectors.column(k);
            let av = dense_mul(&a, &v);
            let lv: Vec<_> = v.iter().map(|z| z * e.eigenvalues[k]).collect();
            prop_assert!(max_diff(&av, &lv) <= 1e-10);
        }
    }

    #[test]
    fn jacobi_reconstructs_small_matrices(n in 1usize..=10, seed in any::<u64>()) {
        let a = random_hermitian(n, seed);
        let e = hermitian_eigendecompose(&a).unwrap();
        prop_assert!(matrix_max_diff(&e.reconstruct(), &a) <= 1e-9);
        prop_assert!(is_orthonormal(&e.eigenvectors, 1e-10));
    }

    #[test]
    fn coefficients_and_combine_are_inverse(n in 1usize..=16, seed in any::<u64>()) {
        let e = hermitian_eigendecompose_fast(&random_hermitian(n, seed)).unwrap();
        let x = random_complex_vec(n, seed ^ 1);
        prop_assert!(max_diff(&e.combine(&e.coefficients(&x)), &x) <= 1e-12);
    }

    #[test]
    fn exponential_is_unitary_and_a_semigroup(n in 1usize..=8, seed in any::<u64>(), s in -2.0f64..2.0, t in -2.0f64..2.0) {
        let a = random_hermitian(n, seed);
        let us = matrix_exponential_unitary(&a, s).unwrap();
        let ut = matrix_exponential_unitary(&a, t).unwrap();
        let ust = matrix_exponential_unitary(&a, s + t).unwrap();
        prop_assert!(is_orthonormal(&us, 1e-10));
        prop_assert!(matrix_max_diff(&us.matmul(&ut).unwrap(), &ust) <= 1e-10);
    }

    #[test]
    fn dilation_is_hermitian_with_signed_singular_values(n in 1usize..=8, seed in any::<u64>()) {
        let a = random_matrix(n, seed);
        let d = dilate(&a).unwrap();
        prop_assert_eq!(d.hermitian_defect(), 0.0);
        let sv = singular_values(&a).unwrap();
        let ev = hermitian_eigendecompose_fast(&d).unwrap().eigenvalues;
        let mut expected: Vec<f64> = sv.iter().flat_map(|&s| [s, -s]).collect();
        expected.sort_by(f64::total_cmp);
        for (x, y) in ev.iter().zip(&expected) {
            prop_assert!((x - y).abs() <= 1e-10);
        }
    }

    #[test]
    fn direct_solve_has_small_residual(n in 1usize..=24, seed in any::<u64>()) {
        let mut a = random_matrix(n, seed);
        for i in 0..n {
            a[(i, i)] += c(n as f64, 0.0);
        }
        let b = random_complex_vec(n, seed ^ 7);
        for x in [direct_solve(&a, &b).unwrap(), lu_solve(&a, &b).unwrap()] {
            let r: Vec<_> = dense_mul(&a, &x).iter().zip(&b).map(|(p, q)| p - q).collect();
            prop_assert!(norm2(&r) <= 1e-10 * norm2(&b));
        }
    }
}

#[test]
fn exponential_examples() {
    let pi = std::f64::consts::PI;
    let zero = Matrix::<f64>::zeros(3, 3);
    assert!(matrix_max_diff(&matrix_exponential_unitary(&zero, 1.7).unwrap(), &Matrix::identity(3)) < 1e-15);
    let d = matrix_exponential_unitary(&Matrix::from_real_diagonal(&[1.0, 2.0]), pi).unwrap();
    assert!(matrix_max_diff(&d, &Matrix::from_real_diagonal(&[-1.0, 1.0])) < 1e-12);
    let x = matrix_exponential_unitary(&pauli_x(), pi).unwrap();
    assert!(matrix_max_diff(&x, &Matrix::identity(2).scale(-1.0)) < 1e-12);
}

#[test]
fn dilation_examples() {
    let d = dilate(&Matrix::from_real(1, 1, &[2.0]).unwrap()).unwrap();
    assert!(matrix_max_diff(&d, &Matrix::from_real(2, 2, &[0.0, 2.0, 2.0, 0.0]).unwrap()) == 0.0);
    let d = dilate(&Matrix::<f64>::identity(2)).unwrap();
    let x_kron_i = Matrix::from_fn(4, 4, |i, j| if i ^ j == 2 { c(1.0, 0.0) } else { c(0.0, 0.0) });
    assert!(matrix_max_diff(&d, &x_kron_i) == 0.0);
    let m = Matrix::from_fn(2, 2, |i, j| c(i as f64, j as f64 + 1.0));
    let d = dilate(&m).unwrap();
    for i in 0..2 {
        for j in 0..2 {
            assert_eq!(d[(i, j + 2)], m[(i, j)]);
            assert_eq!(d[(i + 2, j)], m[(j, i)].conj());
        }
    }
}

#[test]
fn condition_number_examples() {
    assert!((condition_number(&Matrix::<f64>::identity(5)).unwrap() - 1.0).abs() < 1e-14);
    assert!((condition_number(&Matrix::<f64>::from_real_diagonal(&[1.0, 4.0])).unwrap() - 4.0).abs() < 1e-12);
    let k = condition_number(&hermitian_with_spectrum(&[0.5, 1.0, 10.0], 9)).unwrap();
    assert!((k - 20.0).abs() < 1e-9);
}

#[test]
fn singular_values_of_a_wide_gap() {
    let s = singular_values(&Matrix::from_real_diagonal(&[-3.0, 0.5, 2.0])).unwrap();
    let mut s = s;
    s.sort_by(f64::total_cmp);
    assert!(max_diff(&real(&s), &real(&[0.5, 2.0, 3.0])) < 1e-12);
}

#[test]
fn svd_reconstructs() {
    let a = random_matrix(9, 4);
    let svd = singular_value_decompose(&a).unwrap();
    let rebuilt = Matrix::from_fn(9, 9, |i, j| {
        (0..9).fold(c(0.0, 0.0), |acc, k| acc + svd.left[(i, k)] * svd.values[k] * svd.right[(j, k)].conj())
    });
    assert!(matrix_max_diff(&rebuilt, &a) < 1e-10);
}

#[test]
fn singular_system_is_reported() {
    let a = Matrix::from_real(2, 2, &[1.0, 2.0, 2.0, 4.0]).unwrap();
    let b = real(&[1.0, 1.0]);
    assert!(matches!(lu_solve(&a, &b), Err(LinalgError::Singular)));
    assert!(direct_solve(&a, &b).is_err());
}

#[test]
fn solve_example() {
    let a = Matrix::from_real(2, 2, &[2.0, 1.0, 1.0, 3.0]).unwrap();
    let x = direct_solve(&a, &real(&[3.0, 5.0])).unwrap();
    assert!(max_diff(&x, &real(&[0.8, 1.4])) < 1e-14);
}

#[test]
fn dimension_mismatch_is_reported() {
    let a = Matrix::<f64>::identity(3);
    assert!(matches!(
        direct_solve(&a, &real(&[1.0, 2.0])),
        Err(LinalgError::DimensionMismatch { .. })
    ));
    assert!(a.matmul(&Matrix::zeros(2, 2)).is_err());
}

#[test]
fn vector_helpers() {
    let x = vec![c(3.0, 0.0), c(0.0, 4.0)];
    assert_eq!(norm2(&x), 5.0);
    assert_eq!(dot(&x, &x), c(25.0, 0.0));
    let u = normalized(&x).unwrap();
    assert!((norm2(&u) - 1.0).abs() < 1e-15);
    assert!(normalized(&[c(0.0, 0.0)]).is_none());
    assert!((relative_error(&[c(1.1, 0.0)], &[c(1.0, 0.0)]) - 0.1).abs() < 1e-12);
}
