use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn qnm(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qnm"))
        .args(args)
        .env("QNM_OUT_DIR", dir)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn read(dir: &Path, file: &str) -> String {
    std::fs::read_to_string(dir.join(file)).unwrap_or_else(|e| panic!("{file}: {e}"))
}

fn metric(summary: &str, key: &str) -> f64 {
    summary
        .lines()
        .find_map(|l| l.strip_prefix(&format!("{key},")))
        .unwrap_or_else(|| panic!("no {key} in {summary}"))
        .parse()
        .unwrap()
}

#[test]
fn direct_linear_solve_matches_the_reference() {
    let dir = TempDir::new().unwrap();
    for problem in ["advdiff", "random"] {
        let out = qnm(dir.path(), &["solve-linear", "--problem", problem, "--n", "4", "--solver", "direct"]);
        assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
        assert!(metric(&read(dir.path(), "solve-linear-summary.csv"), "relative_error") <= 1e-10);
    }
    let csv = read(dir.path(), "solve-linear.csv");
    assert_eq!(csv.lines().next().unwrap(), "index,solution_re,solution_im,reference_re,reference_im");
    assert_eq!(csv.lines().count(), 1 + 4);
}

#[test]
fn same_seed_gives_byte_identical_outputs() {
    let a = TempDir::new().unwrap();
    let b = TempDir::new().unwrap();
    let args = [
        "solve-linear", "--problem", "random", "--n", "4", "--solver", "gate", "--m", "2", "--shots", "200", "--seed", "7",
    ];
    assert_eq!(code(&qnm(a.path(), &args)), 0);
    assert_eq!(code(&qnm(b.path(), &args)), 0);
    for f in ["solve-linear.csv", "solve-linear-summary.csv"] {
        assert_eq!(read(a.path(), f), read(b.path(), f), "{f}");
    }
    let newton = [
        "solve-newton", "--problem", "poisson", "--n", "4", "--solver", "model", "--m", "12", "--no-timings",
    ];
    assert_eq!(code(&qnm(a.path(), &newton)), 0);
    assert_eq!(code(&qnm(b.path(), &newton)), 0);
    assert_eq!(read(a.path(), "solve-newton.csv"), read(b.path(), "solve-newton.csv"));
}

#[test]
fn newton_convergence_csv() {
    let dir = TempDir::new().unwrap();
    let out = qnm(
        dir.path(),
        &["solve-newton", "--problem", "poisson", "--n", "8", "--solver", "model", "--m", "20", "--tol", "1e-9"],
    );
    assert_eq!(code(&out), 0);
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("stop_reason=threshold reached"), "{stdout}");
    let csv = read(dir.path(), "solve-newton.csv");
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), "iteration,residual,solver_diag,ms");
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    let last: f64 = rows.last().unwrap()[1].parse().unwrap();
    assert!(last < 1e-9);
    assert!(rows[0][2].contains("p=") && rows[0][2].contains("s="));
    assert!(rows.last().unwrap()[2].is_empty());
    assert!(dir.path().join("solve-newton.json").exists());
}

#[test]
fn max_iterations_is_reported_as_the_stop_reason() {
    let dir = TempDir::new().unwrap();
    let out = qnm(
        dir.path(),
        &["solve-newton", "--problem", "poisson", "--n", "4", "--solver", "direct", "--tol", "1e-12", "--max-iters", "1"],
    );
    assert_eq!(code(&out), 0);
    assert!(String::from_utf8(out.stdout).unwrap().contains("stop_reason=max iterations"));
    assert_eq!(read(dir.path(), "solve-newton.csv").lines().count(), 1 + 2);
}

#[test]
fn configuration_errors_exit_with_two() {
    let dir = TempDir::new().unwrap();
    let cases: &[&[&str]] = &[
        &["sweep", "--vary", "m", "--values", "", "--problem", "poisson", "--n", "4", "--solver", "model"],
        &["sweep", "--vary", "m", "--values", "1,2", "--problem", "poisson", "--n", "4", "--solver", "direct"],
        &["solve-newton", "--problem", "poisson", "--n", "40", "--solver", "gate", "--m", "4"],
        &["solve-newton", "--problem", "poisson", "--n", "4", "--solver", "model", "--m", "0"],
        &["solve-newton", "--problem", "poisson", "--n", "4", "--solver", "direct", "--tol", "0"],
        &["solve-newton", "--problem", "random", "--n", "4", "--solver", "direct"],
        &["solve-linear", "--problem", "random", "--n", "4", "--solver", "model", "--shots", "0"],
        &["estimate-resources", "--n-unknowns", "100"],
        &["replay", "/nonexistent/manifest.json"],
    ];
    for args in cases {
        let out = qnm(dir.path(), args);
        assert_eq!(code(&out), 2, "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn solver_failure_exits_with_three() {
    let dir = TempDir::new().unwrap();
    let out = qnm(
        dir.path(),
        &["solve-newton", "--problem", "poisson", "--n", "4", "--solver", "model", "--m", "4", "--prescale", "off"],
    );
    assert_eq!(code(&out), 3, "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8(out.stderr).unwrap().contains("solver failure"));
    assert!(read(dir.path(), "solve-newton.csv").lines().count() >= 2);
}

#[test]
fn replay_reproduces_the_run() {
    let first = TempDir::new().unwrap();
    let args = [
        "--name", "run", "solve-newton", "--problem", "burgers", "--n", "4", "--solver", "model", "--m", "12", "--tol",
        "1e-9", "--no-timings",
    ];
    assert_eq!(code(&qnm(first.path(), &args)), 0);
    let manifest = first.path().join("run.json");
    let second = TempDir::new().unwrap();
    let out = qnm(second.path(), &["replay", manifest.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(read(first.path(), "run.csv"), read(second.path(), "run.csv"));
    let json: serde_json::Value = serde_json::from_str(&read(second.path(), "run.json")).unwrap();
    assert_eq!(json["artifact_version"], 1);
    assert_eq!(json["run"]["command"], "solve-newton");
}

#[test]
fn sweep_over_m_aggregates_per_value() {
    let dir = TempDir::new().unwrap();
    let out = qnm(
        dir.path(),
        &[
            "sweep", "--vary", "m", "--values", "1,20..=21", "--problem", "poisson", "--n", "4", "--solver", "model",
            "--tol", "1e-9", "--max-iters", "60",
        ],
    );
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let agg = read(dir.path(), "sweep.csv");
    let rows: Vec<&str> = agg.lines().collect();
    assert_eq!(
        rows[0],
        "value,runs,converged,iterations_min,iterations_mean,iterations_max,final_residual_min,final_residual_max"
    );
    assert_eq!(rows.len(), 4);
    assert!(rows[2].starts_with("20,1,1,"));
    let cells = read(dir.path(), "sweep-cells.csv");
    assert_eq!(cells.lines().count(), 4);
    let again = TempDir::new().unwrap();
    qnm(
        again.path(),
        &[
            "sweep", "--vary", "m", "--values", "1,20..=21", "--problem", "poisson", "--n", "4", "--solver", "model",
            "--tol", "1e-9", "--max-iters", "60",
        ],
    );
    assert_eq!(agg, read(again.path(), "sweep.csv"));
}

#[test]
fn sweep_over_n_on_a_linear_problem() {
    let dir = TempDir::new().unwrap();
    let out = qnm(
        dir.path(),
        &["sweep", "--vary", "n", "--values", "4,6", "--problem", "random", "--n", "4", "--solver", "model", "--m", "8", "--repeat", "3"],
    );
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let agg = read(dir.path(), "sweep.csv");
    assert!(agg.starts_with("value,runs,failed,relative_error_min,relative_error_mean,relative_error_max\n"));
    assert_eq!(read(dir.path(), "sweep-cells.csv").lines().count(), 1 + 6);
}

#[test]
fn resource_table() {
    let dir = TempDir::new().unwrap();
    let out = qnm(dir.path(), &["estimate-resources", "--format", "csv"]);
    assert_eq!(code(&out), 0);
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.lines().any(|l| l == "1000000000000000000000000,80,1e-12,80,403"), "{stdout}");
    assert_eq!(stdout.lines().count(), 9);
    assert_eq!(stdout, read(dir.path(), "estimate-resources.csv"));

    let out = qnm(dir.path(), &["estimate-resources", "--n-unknowns", "1e24", "--epsilon", "1e-12"]);
    assert_eq!(code(&out), 2);
    let out = qnm(
        dir.path(),
        &["estimate-resources", "--n-unknowns", "1000000000000000000000000", "--epsilon", "1e-12", "--equation-form"],
    );
    assert_eq!(code(&out), 0);
    assert!(String::from_utf8(out.stdout).unwrap().contains("404"));
}
