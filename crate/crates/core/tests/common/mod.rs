#![allow(dead_code)]

use num_complex::Complex64;
use qnm_core::linalg::Matrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn random_complex_vec(n: usize, seed: u64) -> Vec<Complex64> {
    let mut r = rng(seed);
    (0..n)
        .map(|_| c(r.random_range(-1.0..1.0), r.random_range(-1.0..1.0)))
        .collect()
}

pub fn random_matrix(n: usize, seed: u64) -> Matrix<f64> {
    let mut r = rng(seed);
    Matrix::from_fn(n, n, |_, _| c(r.random_range(-1.0..1.0), r.random_range(-1.0..1.0)))
}

pub fn random_hermitian(n: usize, seed: u64) -> Matrix<f64> {
    let g = random_matrix(n, seed);
    Matrix::from_fn(n, n, |i, j| (g[(i, j)] + g[(j, i)].conj()) * 0.5)
}

/// `Q·diag(values)·Q†` with a random unitary `Q`.
pub fn hermitian_with_spectrum(values: &[f64], seed: u64) -> Matrix<f64> {
    let n = values.len();
    let q = random_unitary(n, seed);
    Matrix::from_fn(n, n, |i, j| {
        (0..n).fold(c(0.0, 0.0), |acc, k| acc + q[(i, k)] * values[k] * q[(j, k)].conj())
    })
}

/// Gram-Schmidt on a random complex matrix.
pub fn random_unitary(n: usize, seed: u64) -> Matrix<f64> {
    let g = random_matrix(n, seed);
    let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    for j in 0..n {
        let mut v = g.column(j);
        for u in &cols {
            let p: Complex64 = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            v.iter_mut().zip(u).for_each(|(x, y)| *x -= p * y);
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        v.iter_mut().for_each(|x| *x /= norm);
        cols.push(v);
    }
    Matrix::from_fn(n, n, |i, j| cols[j][i])
}

pub fn max_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

pub fn matrix_max_diff(a: &Matrix<f64>, b: &Matrix<f64>) -> f64 {
    max_diff(a.data(), b.data())
}

/// Dense `A·x` written out independently of the crate.
pub fn dense_mul(a: &Matrix<f64>, x: &[Complex64]) -> Vec<Complex64> {
    (0..a.rows())
        .map(|i| (0..a.cols()).map(|j| a[(i, j)] * x[j]).sum())
        .collect()
}

pub fn real(v: &[f64]) -> Vec<Complex64> {
    v.iter().map(|&x| c(x, 0.0)).collect()
}
