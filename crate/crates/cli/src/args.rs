use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qnm_core::pde::{ProblemSpec, DEFAULT_DIFFUSION, DEFAULT_FREQUENCY};
use qnm_core::qlss::{EncodingMode, Prescale, QlssConfig, ReadoutMode};
use qnm_core::solvers::{LinearSolverKind, StopCriteria};

use crate::manifest::{RunCommand, SweepAxis};
use crate::CliError;

#[derive(Debug, Parser)]
#[command(name = "qnm", version, about = "Quantum Newton method workbench")]
pub struct Cli {
    /// File stem for the outputs (defaults to the subcommand name).
    #[arg(long, global = true)]
    pub name: Option<String>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve one linear system and compare with a direct solve.
    SolveLinear(SolveLinearArgs),
    /// Run Newton's method on a nonlinear PDE.
    SolveNewton(SolveNewtonArgs),
    /// Repeat a solve over a list of `m` or `n` values.
    Sweep(SweepArgs),
    /// Qubit counts for a problem size and accuracy (the reference table when both are omitted).
    EstimateResources(EstimateArgs),
    /// Re-execute a run from its manifest.
    Replay { manifest: PathBuf },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ProblemKind {
    Advdiff,
    Random,
    Poisson,
    Burgers,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SolverName {
    Gate,
    Model,
    Direct,
    GaussSeidel,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TableFormat {
    Markdown,
    Csv,
}

#[derive(Debug, Args)]
pub struct ProblemArgs {
    #[arg(long, value_enum)]
    pub problem: ProblemKind,
    /// Grid points per dimension.
    #[arg(long)]
    pub n: usize,
    /// Diffusion coefficient of the advection-diffusion problem.
    #[arg(long, default_value_t = DEFAULT_DIFFUSION)]
    pub diffusion: f64,
    /// Forcing frequency of the Poisson problem.
    #[arg(long, default_value_t = DEFAULT_FREQUENCY)]
    pub frequency: f64,
}

#[derive(Debug, Args)]
pub struct SolverArgs {
    #[arg(long, value_enum)]
    pub solver: SolverName,
    /// Clock register width (defaults to 2 for linear and 20 for Newton runs).
    #[arg(long)]
    pub m: Option<u32>,
    /// Encoding: hermitian-pd, normal-equations or dilation (defaults per problem).
    #[arg(long)]
    pub mode: Option<EncodingMode>,
    /// Spectral scaling: off, fit or unit.
    #[arg(long, default_value = "fit")]
    pub prescale: Prescale,
    /// Sample the solution from this many shots instead of reading exact amplitudes.
    #[arg(long)]
    pub shots: Option<u64>,
    /// Seed for shot sampling and random problems.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Gauss-Seidel sweeps per linear solve.
    #[arg(long, default_value_t = 25)]
    pub sweeps: usize,
}

#[derive(Debug, Args)]
pub struct StopArgs {
    /// Residual threshold.
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    #[arg(long, default_value_t = 100)]
    pub max_iters: usize,
}

#[derive(Debug, Args)]
pub struct SolveLinearArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    #[command(flatten)]
    pub solver: SolverArgs,
}

#[derive(Debug, Args)]
pub struct SolveNewtonArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[command(flatten)]
    pub stop: StopArgs,
    /// Write 0 in the `ms` column so outputs are byte-identical across runs.
    #[arg(long)]
    pub no_timings: bool,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, value_enum)]
    pub vary: SweepAxis,
    /// Comma-separated values; `a..=b` expands to an inclusive range.
    #[arg(long, allow_hyphen_values = true)]
    pub values: String,
    /// Runs per value, each with its own derived seed.
    #[arg(long, default_value_t = 1)]
    pub repeat: usize,
    #[command(flatten)]
    pub problem: ProblemArgs,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[command(flatten)]
    pub stop: StopArgs,
}

#[derive(Debug, Args)]
pub struct EstimateArgs {
    #[arg(long)]
    pub n_unknowns: Option<u128>,
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// Count the dilation qubit (`n + 4m + 4`).
    #[arg(long)]
    pub equation_form: bool,
    #[arg(long, value_enum, default_value_t = TableFormat::Markdown)]
    pub format: TableFormat,
}

impl ProblemArgs {
    pub fn spec(&self, seed: u64) -> ProblemSpec {
        let n = self.n;
        match self.problem {
            ProblemKind::Advdiff => ProblemSpec::AdvectionDiffusion {
                n,
                diffusion: self.diffusion,
            },
            ProblemKind::Random => ProblemSpec::RandomSpd { n, seed },
            ProblemKind::Poisson => ProblemSpec::Poisson {
                n,
                frequency: self.frequency,
            },
            ProblemKind::Burgers => ProblemSpec::Burgers { n },
        }
    }
}

/// Encoding used when `--mode` is absent.
pub fn default_mode(problem: ProblemKind) -> EncodingMode {
    match problem {
        ProblemKind::Advdiff => EncodingMode::NormalEquations,
        ProblemKind::Random | ProblemKind::Poisson => EncodingMode::HermitianPd,
        ProblemKind::Burgers => EncodingMode::Dilation,
    }
}

impl SolverArgs {
    pub fn kind(&self, problem: ProblemKind, default_m: u32) -> Result<LinearSolverKind, CliError> {
        let config = || {
            let readout = match self.shots {
                Some(0) => return Err(CliError::Config("--shots must be at least 1".into())),
                Some(shots) => ReadoutMode::Sampled { shots, seed: self.seed },
                None => ReadoutMode::ExactAmplitude,
            };
            let cfg = QlssConfig::new(self.m.unwrap_or(default_m), self.mode.unwrap_or(default_mode(problem)))
                .with_readout(readout)
                .with_prescale(self.prescale);
            cfg.format().map_err(|e| CliError::Config(e.to_string()))?;
            Ok(cfg)
        };
        Ok(match self.solver {
            SolverName::Direct => LinearSolverKind::Direct,
            SolverName::GaussSeidel => LinearSolverKind::GaussSeidel { sweeps: self.sweeps },
            SolverName::Model => LinearSolverKind::Model(config()?),
            SolverName::Gate => LinearSolverKind::Gate(config()?),
        })
    }
}

impl StopArgs {
    pub fn criteria(&self) -> Result<StopCriteria, CliError> {
        let stop = StopCriteria::new(self.tol).with_max_iterations(self.max_iters);
        stop.validate().map_err(|e| CliError::Config(e.to_string()))?;
        Ok(stop)
    }
}

/// Parse `1,2,5..=8` into `[1, 2, 5, 6, 7, 8]`.
pub fn parse_values(text: &str) -> Result<Vec<u64>, CliError> {
    let bad = |item: &str| CliError::Config(format!("bad value `{item}` in --values"));
    let mut out = Vec::new();
    for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        if let Some((lo, hi)) = item.split_once("..=") {
            let lo: u64 = lo.trim().parse().map_err(|_| bad(item))?;
            let hi: u64 = hi.trim().parse().map_err(|_| bad(item))?;
            if lo > hi {
                return Err(bad(item));
            }
            out.extend(lo..=hi);
        } else {
            out.push(item.parse().map_err(|_| bad(item))?);
        }
    }
    if out.is_empty() {
        return Err(CliError::Config("--values is empty".into()));
    }
    Ok(out)
}

impl Command {
    /// Subcommand name, used as the default output stem.
    pub fn default_name(&self) -> &'static str {
        match self {
            Command::SolveLinear(_) => "solve-linear",
            Command::SolveNewton(_) => "solve-newton",
            Command::Sweep(_) => "sweep",
            Command::EstimateResources(_) => "estimate-resources",
            Command::Replay { .. } => "replay",
        }
    }

    /// Resolved configuration; `None` for `replay`.
    pub fn to_run(&self) -> Result<Option<RunCommand>, CliError> {
        Ok(Some(match self {
            Command::SolveLinear(a) => {
                if !matches!(a.problem.problem, ProblemKind::Advdiff | ProblemKind::Random) {
                    return Err(CliError::Config("solve-linear takes --problem advdiff or random".into()));
                }
                RunCommand::SolveLinear {
                    problem: a.problem.spec(a.solver.seed),
                    solver: a.solver.kind(a.problem.problem, 2)?,
                }
            }
            Command::SolveNewton(a) => {
                if !matches!(a.problem.problem, ProblemKind::Poisson | ProblemKind::Burgers) {
                    return Err(CliError::Config("solve-newton takes --problem poisson or burgers".into()));
                }
                RunCommand::SolveNewton {
                    problem: a.problem.spec(a.solver.seed),
                    solver: a.solver.kind(a.problem.problem, 20)?,
                    stop: a.stop.criteria()?,
                    no_timings: a.no_timings,
                }
            }
            Command::Sweep(a) => {
                let linear = matches!(a.problem.problem, ProblemKind::Advdiff | ProblemKind::Random);
                let solver = a.solver.kind(a.problem.problem, if linear { 2 } else { 20 })?;
                if a.vary == SweepAxis::M && !matches!(solver, LinearSolverKind::Model(_) | LinearSolverKind::Gate(_)) {
                    return Err(CliError::Config("--vary m needs --solver model or gate".into()));
                }
                if a.repeat == 0 {
                    return Err(CliError::Config("--repeat must be at least 1".into()));
                }
                RunCommand::Sweep {
                    problem: a.problem.spec(a.solver.seed),
                    solver,
                    stop: a.stop.criteria()?,
                    vary: a.vary,
                    values: parse_values(&a.values)?,
                    repeat: a.repeat,
                    seed: a.solver.seed,
                }
            }
            Command::EstimateResources(a) => {
                let (unknowns, accuracies) = match (a.n_unknowns, a.epsilon) {
                    (Some(n), Some(e)) => (vec![n], vec![e]),
                    (None, None) => (
                        qnm_core::resources::TABLE_UNKNOWNS.to_vec(),
                        qnm_core::resources::TABLE_ACCURACIES.to_vec(),
                    ),
                    _ => {
                        return Err(CliError::Config(
                            "give both --n-unknowns and --epsilon, or neither for the full table".into(),
                        ))
                    }
                };
                RunCommand::EstimateResources {
                    unknowns,
                    accuracies,
                    equation_form: a.equation_form,
                }
            }
            Command::Replay { .. } => return Ok(None),
        }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn values_expand_ranges() {
        assert_eq!(parse_values("1, 3..=5,9").unwrap(), vec![1, 3, 4, 5, 9]);
    }

    #[test]
    fn empty_or_malformed_values_are_config_errors() {
        for text in ["", " , ", "x", "5..=2", "-1"] {
            assert!(matches!(parse_values(text), Err(CliError::Config(_))), "{text}");
        }
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
