use std::path::{Path, PathBuf};

use qnm_core::linalg::vector::relative_error;
use qnm_core::linalg::LinalgError;
use qnm_core::model::model_qlss_solve;
use qnm_core::pde::{LinearProblem, ProblemSpec};
use qnm_core::qlss::{run_qlss, QlssConfig, QlssError, ReadoutMode};
use qnm_core::qsim::{SimError, MAX_QUBITS};
use qnm_core::resources::{estimate, to_csv, to_markdown, ResourceEstimate};
use qnm_core::solvers::{gauss_seidel, newton_solve, ConvergenceRecord, LinearSolverKind, StopCriteria, StopReason};
use qnm_core::Complex64;
use rayon::prelude::*;

use crate::manifest::{RunCommand, RunManifest, SweepAxis};
use crate::CliError;

/// Environment variable naming the output directory (default: current directory).
pub const OUT_DIR_VAR: &str = "QNM_OUT_DIR";

/// Seventeen significant digits, enough to round-trip any `f64`.
fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn opt_num(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

pub fn out_dir() -> PathBuf {
    std::env::var_os(OUT_DIR_VAR).map_or_else(|| PathBuf::from("."), PathBuf::from)
}

struct Table {
    path: PathBuf,
    writer: csv::Writer<Vec<u8>>,
}

impl Table {
    fn new(dir: &Path, file: String, header: &[&str]) -> Result<Self, CliError> {
        let mut writer = csv::Writer::from_writer(Vec::new());
        writer.write_record(header).map_err(io_error)?;
        Ok(Self {
            path: dir.join(file),
            writer,
        })
    }

    fn row<I: IntoIterator<Item = String>>(&mut self, fields: I) -> Result<(), CliError> {
        self.writer
            .write_record(fields.into_iter().collect::<Vec<_>>())
            .map_err(io_error)
    }

    fn finish(self) -> Result<PathBuf, CliError> {
        let bytes = self.writer.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
        std::fs::write(&self.path, bytes).map_err(|e| CliError::Io(format!("{}: {e}", self.path.display())))?;
        Ok(self.path)
    }
}

fn io_error(e: impl std::fmt::Display) -> CliError {
    CliError::Io(e.to_string())
}

fn qlss_error(e: QlssError) -> CliError {
    match e {
        QlssError::Sim(SimError::WidthExceeded { .. }) | QlssError::InvalidConfig(_) => CliError::Config(e.to_string()),
        e => CliError::Solver(e.to_string()),
    }
}

/// Qubits the gate solver needs for a `dim`-unknown system.
fn gate_qubits(dim: usize, cfg: &QlssConfig) -> usize {
    let encoded = if cfg.mode.signed() { 2 * dim } else { dim };
    encoded.next_power_of_two().trailing_zeros() as usize + 4 * cfg.m as usize + 3
}

fn check_width(solver: &LinearSolverKind, dim: usize) -> Result<(), CliError> {
    if let LinearSolverKind::Gate(cfg) = solver {
        let q = gate_qubits(dim, cfg);
        if q > MAX_QUBITS {
            return Err(CliError::Config(format!(
                "gate solver needs {q} qubits for {dim} unknowns at m={}; the simulator cap is {MAX_QUBITS}",
                cfg.m
            )));
        }
    }
    Ok(())
}

fn build_linear(problem: &ProblemSpec) -> Result<LinearProblem<f64>, CliError> {
    problem
        .build_linear()
        .ok_or_else(|| CliError::Config("expected a linear problem".into()))?
        .map_err(|e: LinalgError| CliError::Solver(e.to_string()))
}

/// Key figures of one linear solve.
struct LinearOutcome {
    solution: Vec<Complex64>,
    relative_error: f64,
    metrics: Vec<(&'static str, String)>,
}

fn solve_linear_problem(p: &LinearProblem<f64>, solver: &LinearSolverKind) -> Result<LinearOutcome, CliError> {
    check_width(solver, p.dim())?;
    let mut metrics = Vec::new();
    let solution = match solver {
        LinearSolverKind::Direct => p.reference.clone(),
        LinearSolverKind::GaussSeidel { sweeps } => {
            let x0 = vec![Complex64::new(0.0, 0.0); p.dim()];
            gauss_seidel(&p.a, &p.b, &x0, *sweeps).map_err(|e| CliError::Solver(e.to_string()))?
        }
        LinearSolverKind::Model(cfg) | LinearSolverKind::Gate(cfg) => {
            let r = if matches!(solver, LinearSolverKind::Model(_)) {
                model_qlss_solve(&p.a, &p.b, cfg)
            } else {
                run_qlss(&p.a, &p.b, cfg)
            }
            .map_err(qlss_error)?;
            let d = &r.diagnostics;
            metrics.push(("success_probability", num(r.success_probability)));
            metrics.push(("uniform_success_probability", num(d.uniform_success_probability)));
            metrics.push(("prescale", num(d.prescale)));
            metrics.push(("condition_number", opt_num(d.condition_number)));
            metrics.push(("evolution_time", num(d.evolution_time)));
            if d.qubits > 0 {
                metrics.push(("qubits", d.qubits.to_string()));
            }
            if let Some(a) = r.postselect_attempts {
                metrics.push(("postselect_attempts", a.to_string()));
            }
            r.solution
        }
    };
    let err = relative_error(&solution, &p.reference);
    let residual = p.relative_residual(&solution).map_err(|e| CliError::Solver(e.to_string()))?;
    metrics.insert(0, ("relative_residual", num(residual)));
    metrics.insert(0, ("relative_error", num(err)));
    Ok(LinearOutcome {
        solution,
        relative_error: err,
        metrics,
    })
}

fn diverged(record: &ConvergenceRecord) -> Option<String> {
    (record.stop_reason == StopReason::Diverged).then(|| match &record.failure {
        Some((it, msg)) => format!("linear solve failed at iteration {it}: {msg}"),
        None => format!("residual diverged to {}", num(record.final_residual())),
    })
}

fn run_newton(
    problem: &ProblemSpec,
    solver: &LinearSolverKind,
    stop: &StopCriteria,
) -> Result<ConvergenceRecord, CliError> {
    let p = problem
        .build_nonlinear::<f64>()
        .ok_or_else(|| CliError::Config("expected a nonlinear problem".into()))?;
    check_width(solver, p.dim())?;
    let r = newton_solve(p.as_ref(), solver, stop).map_err(|e| CliError::Config(e.to_string()))?;
    Ok(r.record)
}

/// Outcome of a run: files written and a short report for stdout.
pub struct Report {
    pub files: Vec<PathBuf>,
    pub lines: Vec<String>,
    /// Set when the solver failed; the artifacts are still written.
    pub failure: Option<String>,
}

/// Write the manifest, execute it and write its CSVs into `dir`.
pub fn execute(manifest: &RunManifest, dir: &Path) -> Result<Report, CliError> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
    let manifest_path = dir.join(format!("{}.json", manifest.name));
    let name = &manifest.name;
    let mut report = match &manifest.run {
        RunCommand::SolveLinear { problem, solver } => solve_linear_cmd(dir, name, problem, solver)?,
        RunCommand::SolveNewton {
            problem,
            solver,
            stop,
            no_timings,
        } => solve_newton_cmd(dir, name, problem, solver, stop, *no_timings)?,
        RunCommand::Sweep {
            problem,
            solver,
            stop,
            vary,
            values,
            repeat,
            seed,
        } => sweep_cmd(dir, name, problem, solver, stop, *vary, values, *repeat, *seed)?,
        RunCommand::EstimateResources {
            unknowns,
            accuracies,
            equation_form,
        } => resources_cmd(dir, name, unknowns, accuracies, *equation_form)?,
    };
    std::fs::write(&manifest_path, manifest.to_json())
        .map_err(|e| CliError::Io(format!("{}: {e}", manifest_path.display())))?;
    report.files.insert(0, manifest_path);
    Ok(report)
}

fn solve_linear_cmd(dir: &Path, name: &str, problem: &ProblemSpec, solver: &LinearSolverKind) -> Result<Report, CliError> {
    let p = build_linear(problem)?;
    let out = solve_linear_problem(&p, solver)?;
    let mut sol = Table::new(
        dir,
        format!("{name}.csv"),
        &["index", "solution_re", "solution_im", "reference_re", "reference_im"],
    )?;
    for (i, (x, r)) in out.solution.iter().zip(&p.reference).enumerate() {
        sol.row([i.to_string(), num(x.re), num(x.im), num(r.re), num(r.im)])?;
    }
    let mut summary = Table::new(dir, format!("{name}-summary.csv"), &["metric", "value"])?;
    let mut lines = Vec::new();
    for (k, v) in &out.metrics {
        summary.row([k.to_string(), v.clone()])?;
        lines.push(format!("{k}={v}"));
    }
    Ok(Report {
        files: vec![sol.finish()?, summary.finish()?],
        lines,
        failure: None,
    })
}

fn solve_newton_cmd(
    dir: &Path,
    name: &str,
    problem: &ProblemSpec,
    solver: &LinearSolverKind,
    stop: &StopCriteria,
    no_timings: bool,
) -> Result<Report, CliError> {
    let record = run_newton(problem, solver, stop)?;
    let mut t = Table::new(dir, format!("{name}.csv"), &["iteration", "residual", "solver_diag", "ms"])?;
    for e in &record.entries {
        let diag = e.diagnostics.as_ref().map(ToString::to_string).unwrap_or_default();
        let ms = if no_timings { 0.0 } else { e.millis };
        t.row([e.iteration.to_string(), num(e.residual), diag, num(ms)])?;
    }
    let lines = vec![
        format!("stop_reason={}", record.stop_reason.as_str()),
        format!("iterations={}", record.iterations()),
        format!("final_residual={}", num(record.final_residual())),
    ];
    Ok(Report {
        files: vec![t.finish()?],
        lines,
        failure: diverged(&record),
    })
}

/// SplitMix64 finalizer; decorrelates per-cell seeds derived from one base seed.
fn mix_seed(seed: u64, cell: u64) -> u64 {
    let mut z = seed ^ cell.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

struct Cell {
    value: u64,
    repeat: usize,
    problem: ProblemSpec,
    solver: LinearSolverKind,
}

fn with_m(solver: &LinearSolverKind, m: u64) -> Result<LinearSolverKind, CliError> {
    let set = |cfg: &QlssConfig| -> Result<QlssConfig, CliError> {
        let m = u32::try_from(m).map_err(|_| CliError::Config(format!("m={m} is too large")))?;
        let cfg = QlssConfig { m, ..*cfg };
        cfg.format().map_err(|e| CliError::Config(e.to_string()))?;
        Ok(cfg)
    };
    match solver {
        LinearSolverKind::Model(cfg) => Ok(LinearSolverKind::Model(set(cfg)?)),
        LinearSolverKind::Gate(cfg) => Ok(LinearSolverKind::Gate(set(cfg)?)),
        _ => Err(CliError::Config("--vary m needs a QLSS solver".into())),
    }
}

fn with_n(problem: &ProblemSpec, n: u64) -> Result<ProblemSpec, CliError> {
    let n = usize::try_from(n)
        .ok()
        .filter(|&n| n >= 2)
        .ok_or_else(|| CliError::Config(format!("grid size {n} must be at least 2")))?;
    Ok(match problem.clone() {
        ProblemSpec::AdvectionDiffusion { diffusion, .. } => ProblemSpec::AdvectionDiffusion { n, diffusion },
        ProblemSpec::RandomSpd { seed, .. } => ProblemSpec::RandomSpd { n, seed },
        ProblemSpec::Poisson { frequency, .. } => ProblemSpec::Poisson { n, frequency },
        ProblemSpec::Burgers { .. } => ProblemSpec::Burgers { n },
    })
}

/// Problem instances are shared across values (repeat `r` uses seed `seed + r`);
/// shot sampling gets an independent seed per cell.
fn build_cells(
    problem: &ProblemSpec,
    solver: &LinearSolverKind,
    vary: SweepAxis,
    values: &[u64],
    repeat: usize,
    seed: u64,
) -> Result<Vec<Cell>, CliError> {
    if values.is_empty() {
        return Err(CliError::Config("--values is empty".into()));
    }
    let mut cells = Vec::with_capacity(values.len() * repeat);
    for &value in values {
        for r in 0..repeat {
            let index = cells.len() as u64;
            let (mut problem, mut solver) = match vary {
                SweepAxis::M => (problem.clone(), with_m(solver, value)?),
                SweepAxis::N => (with_n(problem, value)?, *solver),
            };
            if let ProblemSpec::RandomSpd { seed: s, .. } = &mut problem {
                *s = seed.wrapping_add(r as u64);
            }
            if let LinearSolverKind::Model(cfg) | LinearSolverKind::Gate(cfg) = &mut solver {
                if let ReadoutMode::Sampled { seed: s, .. } = &mut cfg.readout {
                    *s = mix_seed(seed, index);
                }
            }
            cells.push(Cell {
                value,
                repeat: r,
                problem,
                solver,
            });
        }
    }
    Ok(cells)
}

enum CellResult {
    Linear(f64),
    Newton(ConvergenceRecord),
}

fn stats(xs: &[f64]) -> [String; 3] {
    if xs.is_empty() {
        return Default::default();
    }
    let min = xs.iter().copied().fold(f64::INFINITY, f64::min);
    let max = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mean = xs.iter().sum::<f64>() / xs.len() as f64;
    [num(min), num(mean), num(max)]
}

#[allow(clippy::too_many_arguments)]
fn sweep_cmd(
    dir: &Path,
    name: &str,
    problem: &ProblemSpec,
    solver: &LinearSolverKind,
    stop: &StopCriteria,
    vary: SweepAxis,
    values: &[u64],
    repeat: usize,
    seed: u64,
) -> Result<Report, CliError> {
    let cells = build_cells(problem, solver, vary, values, repeat, seed)?;
    for c in &cells {
        let dim = match &c.problem {
            ProblemSpec::AdvectionDiffusion { n, .. } | ProblemSpec::Poisson { n, .. } | ProblemSpec::Burgers { n } => {
                n * n
            }
            ProblemSpec::RandomSpd { n, .. } => *n,
        };
        check_width(&c.solver, dim)?;
    }
    let linear = problem.is_linear();
    let results: Vec<Result<CellResult, String>> = cells
        .par_iter()
        .map(|c| {
            if linear {
                build_linear(&c.problem)
                    .and_then(|p| solve_linear_problem(&p, &c.solver))
                    .map(|o| CellResult::Linear(o.relative_error))
                    .map_err(|e| e.to_string())
            } else {
                run_newton(&c.problem, &c.solver, stop)
                    .map(CellResult::Newton)
                    .map_err(|e| e.to_string())
            }
        })
        .collect();

    let mut cell_table = Table::new(
        dir,
        format!("{name}-cells.csv"),
        &[
            "cell",
            "value",
            "repeat",
            "stop_reason",
            "iterations",
            "iterations_to_tol",
            "final_residual",
            "relative_error",
            "error",
        ],
    )?;
    for (i, (c, r)) in cells.iter().zip(&results).enumerate() {
        let mut row = vec![i.to_string(), c.value.to_string(), c.repeat.to_string()];
        match r {
            Ok(CellResult::Newton(rec)) => row.extend([
                rec.stop_reason.as_str().to_string(),
                rec.iterations().to_string(),
                rec.iterations_to(stop.threshold).map(|k| k.to_string()).unwrap_or_default(),
                num(rec.final_residual()),
                String::new(),
                rec.failure.as_ref().map(|f| f.1.clone()).unwrap_or_default(),
            ]),
            Ok(CellResult::Linear(e)) => row.extend([String::new(), String::new(), String::new(), String::new(), num(*e), String::new()]),
            Err(msg) => row.extend([String::new(), String::new(), String::new(), String::new(), String::new(), msg.clone()]),
        }
        cell_table.row(row)?;
    }

    let header: &[&str] = if linear {
        &["value", "runs", "failed", "relative_error_min", "relative_error_mean", "relative_error_max"]
    } else {
        &[
            "value",
            "runs",
            "converged",
            "iterations_min",
            "iterations_mean",
            "iterations_max",
            "final_residual_min",
            "final_residual_max",
        ]
    };
    let mut agg = Table::new(dir, format!("{name}.csv"), header)?;
    let mut lines = Vec::new();
    for (vi, &value) in values.iter().enumerate() {
        let group = &results[vi * repeat..(vi + 1) * repeat];
        let mut row = vec![value.to_string(), repeat.to_string()];
        if linear {
            let errs: Vec<f64> = group
                .iter()
                .filter_map(|r| match r {
                    Ok(CellResult::Linear(e)) => Some(*e),
                    _ => None,
                })
                .collect();
            row.push((repeat - errs.len()).to_string());
            let s = stats(&errs);
            lines.push(format!("{value}: mean relative error {}", if s[1].is_empty() { "n/a" } else { &s[1] }));
            row.extend(s);
        } else {
            let records: Vec<&ConvergenceRecord> = group
                .iter()
                .filter_map(|r| match r {
                    Ok(CellResult::Newton(rec)) => Some(rec),
                    _ => None,
                })
                .collect();
            let iters: Vec<usize> = records.iter().filter_map(|r| r.iterations_to(stop.threshold)).collect();
            let finals: Vec<f64> = records.iter().map(|r| r.final_residual()).collect();
            row.push(iters.len().to_string());
            let as_f64: Vec<f64> = iters.iter().map(|&k| k as f64).collect();
            let mean = stats(&as_f64)[1].clone();
            lines.push(format!(
                "{value}: {}/{repeat} converged, mean iterations {}",
                iters.len(),
                if mean.is_empty() { "n/a" } else { &mean }
            ));
            let int = |k: Option<&usize>| k.map(ToString::to_string).unwrap_or_default();
            row.extend([int(iters.iter().min()), mean, int(iters.iter().max())]);
            let f = stats(&finals);
            row.push(f[0].clone());
            row.push(f[2].clone());
        }
        agg.row(row)?;
    }
    Ok(Report {
        files: vec![agg.finish()?, cell_table.finish()?],
        lines,
        failure: None,
    })
}

fn resources_cmd(
    dir: &Path,
    name: &str,
    unknowns: &[u128],
    accuracies: &[f64],
    equation_form: bool,
) -> Result<Report, CliError> {
    let mut rows: Vec<ResourceEstimate> = Vec::new();
    for &n in unknowns {
        for &eps in accuracies {
            rows.push(estimate(n, eps, equation_form).map_err(|e| CliError::Config(e.to_string()))?);
        }
    }
    let path = dir.join(format!("{name}.csv"));
    std::fs::write(&path, to_csv(&rows)).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    Ok(Report {
        files: vec![path],
        lines: to_markdown(&rows).lines().map(str::to_string).collect(),
        failure: None,
    })
}

/// Resource table in the requested format, for stdout.
pub fn resource_table(unknowns: &[u128], accuracies: &[f64], equation_form: bool, csv: bool) -> Result<String, CliError> {
    let rows = unknowns
        .iter()
        .flat_map(|&n| accuracies.iter().map(move |&e| estimate(n, e, equation_form)))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| CliError::Config(e.to_string()))?;
    Ok(if csv { to_csv(&rows) } else { to_markdown(&rows) })
}
