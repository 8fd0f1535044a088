mod common;

use common::{c, real};
use proptest::prelude::*;
use qnm_core::linalg::vector::{norm2, real_norm2, to_complex};
use qnm_core::linalg::hermitian_eigendecompose_fast;
use qnm_core::pde::{
    advection_diffusion_system, burgers_space_time, nonlinear_poisson, random_spd_problem, NonlinearProblem, ProblemSpec,
};
use qnm_core::solvers::{newton_solve, LinearSolverKind, StopCriteria, StopReason};
use rand::Rng;

/// Central-difference Jacobian with step `1e-6·(1 + |u_j|)`.
fn fd_jacobian(p: &dyn NonlinearProblem<f64>, u: &[f64]) -> Vec<Vec<f64>> {
    let n = u.len();
    let mut cols = Vec::with_capacity(n);
    for j in 0..n {
        let h = 1e-6 * (1.0 + u[j].abs());
        let mut up = u.to_vec();
        let mut dn = u.to_vec();
        up[j] += h;
        dn[j] -= h;
        let (fp, fm) = (p.residual(&up), p.residual(&dn));
        cols.push(fp.iter().zip(&fm).map(|(a, b)| (a - b) / (2.0 * h)).collect::<Vec<_>>());
    }
    cols
}

fn assert_jacobian_matches(p: &dyn NonlinearProblem<f64>, u: &[f64]) {
    let jac = p.jacobian(u);
    let fd = fd_jacobian(p, u);
    let scale = jac.max_abs().max(1.0);
    for (j, col) in fd.iter().enumerate() {
        for (i, &v) in col.iter().enumerate() {
            let exact = jac[(i, j)];
            assert_eq!(exact.im, 0.0);
            assert!((exact.re - v).abs() <= 1e-5 * scale, "J[{i},{j}] = {} vs fd {v}", exact.re);
        }
    }
}

/// Random field bounded away from zero so the upwind switch is not crossed by the FD step.
fn signed_field(n: usize, seed: u64) -> Vec<f64> {
    let mut r = common::rng(seed);
    (0..n)
        .map(|_| {
            let mag = r.random_range(0.1..1.5);
            if r.random::<bool>() {
                mag
            } else {
                -mag
            }
        })
        .collect()
}

#[test]
fn poisson_jacobian_matches_finite_differences() {
    let p = nonlinear_poisson::<f64>(4, 10.0);
    for seed in 0..10 {
        assert_jacobian_matches(&p, &signed_field(16, seed));
    }
}

#[test]
fn burgers_jacobian_matches_finite_differences() {
    let p = burgers_space_time::<f64>(4);
    for seed in 0..10 {
        assert_jacobian_matches(&p, &signed_field(16, seed + 50));
    }
}

#[test]
fn poisson_jacobian_structure() {
    let n = 5;
    let p = nonlinear_poisson::<f64>(n, 10.0);
    let u = signed_field(n * n, 3);
    let j = p.jacobian(&u);
    let j0 = p.jacobian(&vec![0.0; n * n]);
    let inv_h2 = ((n + 1) * (n + 1)) as f64;
    for row in 0..n * n {
        let (a, b) = (row / n, row % n);
        let neighbours = [a > 0, a + 1 < n, b > 0, b + 1 < n].iter().filter(|&&x| x).count();
        let nonzeros = (0..n * n).filter(|&col| j[(row, col)] != c(0.0, 0.0)).count();
        assert_eq!(nonzeros, 1 + neighbours);
        assert!((j[(row, row)].re - (4.0 * inv_h2 - 2.0 * u[row])).abs() < 1e-9);
        assert!((j0[(row, row)].re - j[(row, row)].re - 2.0 * u[row]).abs() < 1e-9);
    }
    assert_eq!(p.dim(), 25);
    assert_eq!(p.initial_guess(), vec![0.0; 25]);
}

#[test]
fn poisson_reference_solve_converges_to_round_off() {
    let p = nonlinear_poisson::<f64>(32, 10.0);
    let initial = real_norm2(&p.residual(&p.initial_guess()));
    let r = newton_solve(&p, &LinearSolverKind::Direct, &StopCriteria::new(1e-11)).unwrap();
    assert_eq!(r.record.stop_reason, StopReason::ThresholdReached);
    let final_residual = real_norm2(&p.residual(&r.u));
    assert!(final_residual < 1e-15 * initial);
    // the interior field oscillates like cos(10x)cos(10y)
    let n = 32;
    let h = 1.0 / 33.0;
    let exact: Vec<f64> = (1..=n)
        .flat_map(|i| (1..=n).map(move |j| (10.0 * i as f64 * h).cos() * (10.0 * j as f64 * h).cos()))
        .collect();
    let sign_agreement = r.u.iter().zip(&exact).filter(|(a, b)| a.signum() == b.signum() || b.abs() < 0.2).count();
    assert!(sign_agreement as f64 > 0.9 * (n * n) as f64);
}

#[test]
fn burgers_residual_at_the_initial_guess_is_the_advective_term() {
    let p = burgers_space_time::<f64>(4);
    let u0 = p.initial_guess();
    let f = p.residual(&u0);
    let h = 0.2;
    let ic: Vec<f64> = (1..=4).map(|i| (std::f64::consts::TAU * i as f64 * h).sin()).collect();
    let expected = [
        ic[0] * (ic[0] - 0.0) / h,
        ic[1] * (ic[1] - ic[0]) / h,
        ic[2] * (ic[3] - ic[2]) / h,
        ic[3] * (0.0 - ic[3]) / h,
    ];
    for i in 0..4 {
        assert!((f[i] - expected[i]).abs() < 1e-12, "i={i}");
    }
    // later levels repeat the same field, so only the advective term remains there too
    for i in 0..4 {
        assert!((f[4 + i] - expected[i]).abs() < 1e-12);
    }
    assert_eq!(p.dt(), 0.125);
    assert_eq!(&u0[..4], p.initial_condition());
}

#[test]
fn burgers_upwind_coupling_is_one_sided() {
    let n = 5;
    let p = burgers_space_time::<f64>(n);
    for (sign, upper) in [(1.0, false), (-1.0, true)] {
        let u: Vec<f64> = signed_field(n * n, 9).iter().map(|v| sign * v.abs()).collect();
        let j = p.jacobian(&u);
        for row in 0..n * n {
            let level = row / n;
            for col in level * n..(level + 1) * n {
                let v = j[(row, col)];
                if col == row || v == c(0.0, 0.0) {
                    continue;
                }
                assert_eq!(col > row, upper, "row {row} col {col}");
                assert_eq!(col.abs_diff(row), 1);
            }
            for col in 0..n * n {
                if col / n != level && j[(row, col)] != c(0.0, 0.0) {
                    assert!(level > 0 && col == row - n, "time coupling only to the previous level");
                }
            }
        }
    }
}

#[test]
fn burgers_solution_steepens_into_a_shock() {
    let n = 32;
    let p = burgers_space_time::<f64>(n);
    let r = newton_solve(&p, &LinearSolverKind::Direct, &StopCriteria::new(1e-9)).unwrap();
    assert_eq!(r.record.stop_reason, StopReason::ThresholdReached);
    let h = 1.0 / (n + 1) as f64;
    let steepness: Vec<f64> = (0..=n)
        .map(|j| {
            let level = p.level(&r.u, j);
            let padded: Vec<f64> = std::iter::once(0.0).chain(level.iter().copied()).chain([0.0]).collect();
            padded.windows(2).map(|w| (w[1] - w[0]).abs() / h).fold(0.0, f64::max)
        })
        .collect();
    let breaking_level = (1.0 / std::f64::consts::TAU / p.dt()).ceil() as usize;
    assert!(steepness[..=breaking_level].windows(2).all(|w| w[1] > w[0]), "{steepness:?}");
    assert!(steepness[n] > 5.0 * steepness[0]);
    let last = p.level(&r.u, n);
    let (i_max, _) = last
        .windows(2)
        .enumerate()
        .map(|(i, w)| (i, (w[1] - w[0]).abs()))
        .fold((0, 0.0), |acc, x| if x.1 > acc.1 { x } else { acc });
    let x_shock = (i_max + 1) as f64 * h;
    assert!((x_shock - 0.5).abs() < 0.1, "shock at {x_shock}");
}

#[test]
fn advection_diffusion_structure() {
    let p = advection_diffusion_system::<f64>(4, 0.25).unwrap();
    assert_eq!((p.a.rows(), p.a.cols()), (16, 16));
    let ones = real(&[1.0; 16]);
    assert!(norm2(&p.a.mul_vec(&ones).unwrap()) < 1e-12);
    let mean: f64 = p.b.iter().map(|z| z.re).sum::<f64>() / 16.0;
    assert!(mean.abs() < 1e-15);
    assert!(p.relative_residual(&p.reference).unwrap() <= 1e-10);
    assert!(p.a.is_real());
}

#[test]
fn diffusion_rows_sum_to_zero() {
    for n in [4, 8] {
        let a1 = advection_diffusion_system::<f64>(n, 1.0).unwrap().a;
        let a2 = advection_diffusion_system::<f64>(n, 0.5).unwrap().a;
        let lap = a1.sub(&a2).unwrap();
        for i in 0..n * n {
            let s: f64 = lap.row(i).iter().map(|z| z.re).sum();
            assert!(s.abs() < 1e-12);
            assert!(lap[(i, i)].re > 0.0);
        }
    }
}

#[test]
fn advection_diffusion_forcing_is_an_eigenvector() {
    for n in [4, 8, 16] {
        let p = advection_diffusion_system::<f64>(n, 0.25).unwrap();
        let ab = p.a.mul_vec(&p.b).unwrap();
        let k = (0..p.dim()).max_by(|&i, &j| p.b[i].re.abs().total_cmp(&p.b[j].re.abs())).unwrap();
        let lambda = ab[k].re / p.b[k].re;
        let diff: Vec<_> = ab.iter().zip(&p.b).map(|(x, y)| x - y * lambda).collect();
        assert!(norm2(&diff) < 1e-12 * norm2(&ab), "n={n}");
    }
}

#[test]
fn random_problem_is_spd_and_deterministic() {
    let p = random_spd_problem::<f64>(16, 7).unwrap();
    let q = random_spd_problem::<f64>(16, 7).unwrap();
    assert_eq!(p.a, q.a);
    assert_eq!(p.b, q.b);
    assert_ne!(random_spd_problem::<f64>(16, 8).unwrap().b, p.b);
    assert_eq!(p.a.hermitian_defect(), 0.0);
    let e = hermitian_eigendecompose_fast(&p.a).unwrap();
    assert!(e.eigenvalues[0] > 0.0);
    assert!(p.relative_residual(&p.reference).unwrap() <= 1e-10);
}

#[test]
fn problem_specs_build_the_right_kind() {
    let linear = [
        ProblemSpec::AdvectionDiffusion { n: 4, diffusion: 0.25 },
        ProblemSpec::RandomSpd { n: 4, seed: 0 },
    ];
    for s in &linear {
        assert!(s.is_linear());
        assert!(s.build_linear::<f64>().unwrap().is_ok());
        assert!(s.build_nonlinear::<f64>().is_none());
    }
    let nonlinear = [ProblemSpec::Poisson { n: 4, frequency: 10.0 }, ProblemSpec::Burgers { n: 4 }];
    for s in &nonlinear {
        assert!(!s.is_linear());
        assert_eq!(s.build_nonlinear::<f64>().unwrap().dim(), 16);
        assert!(s.build_linear::<f64>().is_none());
    }
    let json = serde_json::to_string(&nonlinear[0]).unwrap();
    assert_eq!(serde_json::from_str::<ProblemSpec>(&json).unwrap(), nonlinear[0]);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn jacobians_match_finite_differences_at_random_points(n in 2usize..=5, seed in any::<u64>()) {
        let u = signed_field(n * n, seed);
        let problems: [Box<dyn NonlinearProblem<f64>>; 2] =
            [Box::new(nonlinear_poisson::<f64>(n, 10.0)), Box::new(burgers_space_time::<f64>(n))];
        for p in &problems {
            let jac = p.jacobian(&u);
            let fd = fd_jacobian(p.as_ref(), &u);
            let scale = jac.max_abs().max(1.0);
            for (j, col) in fd.iter().enumerate() {
                for (i, &v) in col.iter().enumerate() {
                    prop_assert!((jac[(i, j)].re - v).abs() <= 1e-5 * scale);
                }
            }
        }
    }

    #[test]
    fn residual_is_consistent_with_the_jacobian_for_affine_shifts(seed in any::<u64>()) {
        // F(u + d) − F(u) − J(u)d = −d² for the quadratic Poisson term
        let p = nonlinear_poisson::<f64>(3, 10.0);
        let u = signed_field(9, seed);
        let d = signed_field(9, seed ^ 1);
        let ud: Vec<f64> = u.iter().zip(&d).map(|(a, b)| a + b).collect();
        let jd = p.jacobian(&u).mul_vec(&to_complex(&d)).unwrap();
        let (f0, f1) = (p.residual(&u), p.residual(&ud));
        for i in 0..9 {
            prop_assert!((f1[i] - f0[i] - jd[i].re + d[i] * d[i]).abs() <= 1e-9);
        }
    }
}
