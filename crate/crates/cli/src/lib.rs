// Copyright 2026 The gaussim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! Scenario runner behind the `gaussim` binary.
//!
//! Every scenario returns one or more [`output::Table`]s plus a metadata map;
//! [`run`] writes them and returns the one-line summary printed on stdout.

use std::io;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde_json::{Map, Value};
use thiserror::Error;

pub mod args;
pub mod bench;
pub mod output;
pub mod scenarios;

pub use args::{Cli, Command, Common};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("cannot write {path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Io { .. } => 3,
            CliError::Numerical(_) => 4,
        }
    }
}

impl From<gaussim::Error> for CliError {
    fn from(e: gaussim::Error) -> Self {
        match e {
            gaussim::Error::InvalidParameter(msg) => CliError::Usage(msg),
            other => CliError::Numerical(other.to_string()),
        }
    }
}

/// Tables and metadata produced by one scenario run.
#[derive(Debug, Clone)]
pub struct ScenarioOutput {
    pub scenario: &'static str,
    /// The first table is the main output; the rest carry a name suffix.
    pub tables: Vec<output::Table>,
    pub meta: Map<String, Value>,
    pub summary: String,
}

impl ScenarioOutput {
    pub fn main_table(&self) -> &output::Table {
        &self.tables[0]
    }

    pub fn table(&self, name: &str) -> Option<&output::Table> {
        self.tables.iter().find(|t| t.name.as_deref() == Some(name))
    }

    pub fn meta_f64(&self, key: &str) -> Option<f64> {
        self.meta.get(key).and_then(Value::as_f64)
    }
}

pub const SCENARIOS: [(&str, &str); 7] = [
    ("quadrature", "free rotation of a coherent and a squeezed-coherent state"),
    ("damped", "amplitude damping of a coherent state, number moments and Wigner snapshots"),
    ("squeezed-damped", "amplitude damping of a squeezed-coherent state"),
    ("displacement", "zero-photon probability of a displaced lossy two-mode squeezed vacuum"),
    ("opo", "degenerate parametric oscillator, unconditional and homodyne-monitored"),
    ("random-circuits", "entanglement entropy profiles of random Gaussian circuits"),
    ("bench", "integration time versus number of modes"),
];

pub fn scenario_table() -> String {
    let width = SCENARIOS.iter().map(|(n, _)| n.len()).max().unwrap_or(0);
    SCENARIOS.iter().map(|(n, d)| format!("{n:<width$}  {d}\n")).collect()
}

/// Runs the selected scenario without writing anything.
pub fn execute(command: &Command) -> Result<ScenarioOutput, CliError> {
    match command {
        Command::Quadrature(a) => scenarios::quadrature(&a.to_config()?),
        Command::Damped(a) => scenarios::damped(&a.to_config()?),
        Command::SqueezedDamped(a) => scenarios::squeezed_damped(&a.to_config()?),
        Command::Displacement(a) => scenarios::displacement(&a.to_config()?),
        Command::Opo(a) => scenarios::opo(&a.to_config(a.common.seed)?),
        Command::RandomCircuits(a) => scenarios::random_circuits(&a.to_config(a.common.seed)?),
        Command::Bench(a) => scenarios::bench(&a.to_config(a.common.seed)?),
    }
}

fn unix_now() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0)
}

/// Writes every table of `result` next to `base`; returns the paths written.
pub fn write_outputs(result: &ScenarioOutput, common: &Common) -> Result<Vec<PathBuf>, CliError> {
    let base = common.out_path(result.scenario);
    let timestamp = (!common.no_timestamp).then(unix_now);
    let mut written = Vec::with_capacity(result.tables.len());
    for table in &result.tables {
        let path = output::table_path(&base, table);
        output::write_file(&path, table, &result.meta, common.format, timestamp)
            .map_err(|source| CliError::Io { path: path.clone(), source })?;
        written.push(path);
    }
    Ok(written)
}

/// Runs and writes; returns the summary line.
pub fn run(command: &Command) -> Result<String, CliError> {
    let result = execute(command)?;
    let written = write_outputs(&result, command.common())?;
    let files: Vec<String> = written.iter().map(|p| p.display().to_string()).collect();
    Ok(format!("{}: {} -> {}", result.scenario, result.summary, files.join(", ")))
}

pub(crate) fn default_out(scenario: &str, format: output::Format) -> PathBuf {
    Path::new(&format!("{scenario}.{}", format.extension())).to_path_buf()
}
