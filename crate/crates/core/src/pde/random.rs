use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{GridInfo, LinearProblem};
use crate::linalg::{direct_solve, LinalgError, Matrix};
use crate::Real;

/// Normal-equations system `(A†A, A†b)` for a random strictly diagonally
/// dominant `A`: off-diagonal entries uniform in `[−1, 1]`, diagonal equal
/// to the row's absolute off-diagonal sum plus a uniform `[0, 1]` margin,
/// and `b` a random unit vector. Deterministic per seed (ChaCha8).
pub fn random_spd_problem<T: Real>(n: usize, seed: u64) -> Result<LinearProblem<T>, LinalgError> {
    assert!(n >= 2, "random problems need N ≥ 2");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut raw = vec![0.0f64; n * n];
    for i in 0..n {
        let mut off = 0.0;
        for j in 0..n {
            if i != j {
                let v = rng.random_range(-1.0..=1.0);
                raw[i * n + j] = v;
                off += f64::abs(v);
            }
        }
        raw[i * n + i] = off + rng.random::<f64>();
    }
    let mut b: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..=1.0)).collect();
    let norm = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    b.iter_mut().for_each(|x| *x /= norm);

    let a = Matrix::from_fn(n, n, |i, j| Complex::new(T::lit(raw[i * n + j]), T::zero()));
    let b: Vec<Complex<T>> = b.iter().map(|&x| Complex::new(T::lit(x), T::zero())).collect();
    let ah = a.adjoint();
    let gram = ah.matmul(&a)?;
    let gram = Matrix::from_fn(n, n, |i, j| if i <= j { gram[(i, j)] } else { gram[(j, i)].conj() });
    let rhs = ah.mul_vec(&b)?;
    let reference = direct_solve(&a, &b)?;
    Ok(LinearProblem {
        a: gram,
        b: rhs,
        reference,
        grid: GridInfo {
            n,
            h: 0.0,
            domain: format!("random diagonally dominant (seed {seed})"),
        },
    })
}
