use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use qnm_core::pde::ProblemSpec;
use qnm_core::solvers::{LinearSolverKind, StopCriteria};
use serde::{Deserialize, Serialize};

use crate::CliError;

/// Version of the CSV and manifest layouts written by this build.
pub const ARTIFACT_VERSION: u32 = 1;

/// Parameter varied by a sweep.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum SweepAxis {
    /// Clock register width of the QLSS solver.
    M,
    /// Grid size of the problem.
    N,
}

/// One reproducible invocation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum RunCommand {
    SolveLinear {
        problem: ProblemSpec,
        solver: LinearSolverKind,
    },
    SolveNewton {
        problem: ProblemSpec,
        solver: LinearSolverKind,
        stop: StopCriteria,
        no_timings: bool,
    },
    Sweep {
        problem: ProblemSpec,
        solver: LinearSolverKind,
        stop: StopCriteria,
        vary: SweepAxis,
        values: Vec<u64>,
        repeat: usize,
        seed: u64,
    },
    EstimateResources {
        #[serde(with = "decimal_strings")]
        unknowns: Vec<u128>,
        accuracies: Vec<f64>,
        equation_form: bool,
    },
}

/// `u128` values as decimal strings.
mod decimal_strings {
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(values: &[u128], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(values.iter().map(u128::to_string))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<u128>, D::Error> {
        Vec::<String>::deserialize(d)?
            .iter()
            .map(|v| v.parse().map_err(D::Error::custom))
            .collect()
    }
}

/// Configuration echo written next to every CSV.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub artifact_version: u32,
    pub tool_version: String,
    /// Seconds since the Unix epoch when the run started.
    pub timestamp: u64,
    /// File stem of the outputs.
    pub name: String,
    pub run: RunCommand,
}

impl RunManifest {
    pub fn new(name: String, run: RunCommand) -> Self {
        Self {
            artifact_version: ARTIFACT_VERSION,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map_or(0, |d| d.as_secs()),
            name,
            run,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("manifest serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let m: Self = serde_json::from_str(text).map_err(|e| CliError::Config(format!("bad manifest: {e}")))?;
        if m.artifact_version != ARTIFACT_VERSION {
            return Err(CliError::Config(format!(
                "manifest version {} is not supported (expected {ARTIFACT_VERSION})",
                m.artifact_version
            )));
        }
        Ok(m)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }
}
