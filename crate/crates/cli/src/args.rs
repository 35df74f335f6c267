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

//! Command-line definitions.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::output::Format;
use crate::scenarios::{
    DampedConfig, DisplacementConfig, OpoConfig, QuadratureConfig, RandomCircuitsConfig, SqueezedDampedConfig,
};
use crate::{bench::BenchConfig, CliError};

const AFTER_HELP: &str = "\
Exit codes: 0 success, 2 usage error or unknown scenario, 3 output not writable, \
4 numerical failure.

Output files start with a metadata block: `# key: value` lines in CSV, or the \
\"meta\" object of the JSON envelope {\"meta\": {...}, \"data\": [...]}. Entropies are in nats. \
Scenarios with more than one table write the extras to <stem>_<name>.<ext>.";

#[derive(Debug, Parser)]
#[command(name = "gaussim", version, about = "Gaussian state simulation scenarios", after_help = AFTER_HELP)]
pub struct Cli {
    /// Print the scenario table and exit.
    #[arg(long)]
    pub list: bool,
    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Free rotation of a coherent and a squeezed-coherent state.
    Quadrature(QuadratureArgs),
    /// Amplitude damping of a coherent state.
    Damped(DampedArgs),
    /// Amplitude damping of a squeezed-coherent state.
    SqueezedDamped(SqueezedDampedArgs),
    /// Zero-photon probability of a displaced lossy two-mode squeezed vacuum.
    Displacement(DisplacementArgs),
    /// Parametric oscillator with and without homodyne monitoring.
    Opo(OpoArgs),
    /// Entropy profiles of random Gaussian circuits.
    RandomCircuits(RandomCircuitsArgs),
    /// Integration time versus number of modes.
    Bench(BenchArgs),
}

impl Command {
    pub fn common(&self) -> &Common {
        match self {
            Command::Quadrature(a) => &a.common,
            Command::Damped(a) => &a.common,
            Command::SqueezedDamped(a) => &a.common,
            Command::Displacement(a) => &a.common,
            Command::Opo(a) => &a.common,
            Command::RandomCircuits(a) => &a.common,
            Command::Bench(a) => &a.common,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    #[arg(long, default_value = "0", value_parser = parse_seed)]
    pub seed: u64,
    /// Output file; defaults to `<scenario>.<format>` in the working directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Omit the generation-time line so identical runs give identical files.
    #[arg(long)]
    pub no_timestamp: bool,
}

impl Common {
    pub fn out_path(&self, scenario: &str) -> PathBuf {
        self.out.clone().unwrap_or_else(|| crate::default_out(scenario, self.format))
    }
}

/// Integers written as `10000`, `1e4` or `1.0E4`.
pub fn parse_count(s: &str) -> Result<usize, String> {
    if let Ok(n) = s.parse::<usize>() {
        return Ok(n);
    }
    let x: f64 = s.parse().map_err(|_| format!("`{s}` is not a number"))?;
    if x < 0.0 || x.fract() != 0.0 || x > 2f64.powi(53) {
        return Err(format!("`{s}` is not a non-negative integer"));
    }
    Ok(x as usize)
}

fn parse_seed(s: &str) -> Result<u64, String> {
    if let Ok(n) = s.parse::<u64>() {
        return Ok(n);
    }
    parse_count(s).map(|n| n as u64)
}

fn parse_real(s: &str) -> Result<f64, String> {
    let x: f64 = s.parse().map_err(|_| format!("`{s}` is not a number"))?;
    if x.is_finite() {
        Ok(x)
    } else {
        Err(format!("`{s}` is not finite"))
    }
}

pub fn parse_count_list(s: &str) -> Result<Vec<usize>, String> {
    s.split(',').map(|p| parse_count(p.trim())).collect()
}

pub fn parse_real_list(s: &str) -> Result<Vec<f64>, String> {
    s.split(',').map(|p| parse_real(p.trim())).collect()
}

fn positive(name: &str, x: f64) -> Result<f64, CliError> {
    if x > 0.0 {
        Ok(x)
    } else {
        Err(CliError::Usage(format!("--{name} must be positive, got {x}")))
    }
}

fn at_least(name: &str, n: usize, min: usize) -> Result<usize, CliError> {
    if n >= min {
        Ok(n)
    } else {
        Err(CliError::Usage(format!("--{name} must be at least {min}, got {n}")))
    }
}

#[derive(Debug, Clone, Args)]
pub struct QuadratureArgs {
    #[arg(long, default_value = "6.283185307179586", value_parser = parse_real)]
    pub omega: f64,
    #[arg(long, default_value = "2", value_parser = parse_real)]
    pub alpha: f64,
    #[arg(long, default_value = "1.2", value_parser = parse_real)]
    pub r: f64,
    /// End time; defaults to 2/ω.
    #[arg(long, value_parser = parse_real)]
    pub t_end: Option<f64>,
    #[arg(long, default_value = "200", value_parser = parse_count)]
    pub points: usize,
    #[command(flatten)]
    pub common: Common,
}

impl QuadratureArgs {
    pub fn to_config(&self) -> Result<QuadratureConfig, CliError> {
        let omega = positive("omega", self.omega)?;
        Ok(QuadratureConfig {
            omega,
            alpha: self.alpha,
            r: self.r,
            t_end: positive("t-end", self.t_end.unwrap_or(2.0 / omega))?,
            points: at_least("points", self.points, 2)?,
        })
    }
}

#[derive(Debug, Clone, Args)]
pub struct DampedArgs {
    #[arg(long, default_value = "6.283185307179586", value_parser = parse_real)]
    pub omega: f64,
    /// Damping rate; defaults to 2π·0.3.
    #[arg(long, value_parser = parse_real)]
    pub gamma: Option<f64>,
    #[arg(long, default_value = "2", value_parser = parse_real)]
    pub alpha: f64,
    /// End time; defaults to 3.5 periods.
    #[arg(long, value_parser = parse_real)]
    pub t_end: Option<f64>,
    #[arg(long, default_value = "200", value_parser = parse_count)]
    pub points: usize,
    /// Wigner grid points per axis on [-6, 6].
    #[arg(long, default_value = "200", value_parser = parse_count)]
    pub grid: usize,
    /// Number of evenly spaced times with a Wigner snapshot.
    #[arg(long, default_value = "4", value_parser = parse_count)]
    pub snapshots: usize,
    #[command(flatten)]
    pub common: Common,
}

impl DampedArgs {
    pub fn to_config(&self) -> Result<DampedConfig, CliError> {
        let omega = positive("omega", self.omega)?;
        let d = DampedConfig::default();
        Ok(DampedConfig {
            omega,
            gamma: positive("gamma", self.gamma.unwrap_or(d.gamma))?,
            alpha: self.alpha,
            t_end: positive("t-end", self.t_end.unwrap_or(3.5 * 2.0 * std::f64::consts::PI / omega))?,
            points: at_least("points", self.points, 2)?,
            grid: at_least("grid", self.grid, 2)?,
            snapshots: self.snapshots,
        })
    }
}

#[derive(Debug, Clone, Args)]
pub struct SqueezedDampedArgs {
    #[arg(long, default_value = "6.283185307179586", value_parser = parse_real)]
    pub omega: f64,
    /// Damping rate; defaults to 2π·0.1.
    #[arg(long, value_parser = parse_real)]
    pub gamma: Option<f64>,
    #[arg(long, default_value = "2", value_parser = parse_real)]
    pub alpha: f64,
    #[arg(long, default_value = "1.2", value_parser = parse_real)]
    pub r: f64,
    #[arg(long, default_value = "6", value_parser = parse_real)]
    pub t_end: f64,
    #[arg(long, default_value = "200", value_parser = parse_count)]
    pub points: usize,
    #[command(flatten)]
    pub common: Common,
}

impl SqueezedDampedArgs {
    pub fn to_config(&self) -> Result<SqueezedDampedConfig, CliError> {
        let d = SqueezedDampedConfig::default();
        Ok(SqueezedDampedConfig {
            omega: positive("omega", self.omega)?,
            gamma: positive("gamma", self.gamma.unwrap_or(d.gamma))?,
            alpha: self.alpha,
            r: self.r,
            t_end: positive("t-end", self.t_end)?,
            points: at_least("points", self.points, 2)?,
        })
    }
}

#[derive(Debug, Clone, Args)]
pub struct DisplacementArgs {
    /// Two-mode squeezing amplitude.
    #[arg(long, default_value = "0.4", value_parser = parse_real)]
    pub r: f64,
    /// Displacement amplitude applied to both modes.
    #[arg(long, default_value = "0.1", value_parser = parse_real)]
    pub alpha: f64,
    /// Comma-separated transmissions of the loss on the first mode.
    #[arg(long, default_value = "1,0.8,0.6,0.5", value_parser = parse_real_list)]
    pub tau: Vec<Vec<f64>>,
    /// Largest relative phase; defaults to 6π.
    #[arg(long, value_parser = parse_real)]
    pub theta_end: Option<f64>,
    #[arg(long, default_value = "200", value_parser = parse_count)]
    pub points: usize,
    #[command(flatten)]
    pub common: Common,
}

impl DisplacementArgs {
    pub fn to_config(&self) -> Result<DisplacementConfig, CliError> {
        let taus = self.tau.concat();
        if taus.is_empty() || taus.iter().any(|t| !(0.0..=1.0).contains(t)) {
            return Err(CliError::Usage("--tau values must lie in [0, 1]".into()));
        }
        Ok(DisplacementConfig {
            r: self.r,
            alpha: self.alpha,
            taus,
            theta_end: positive("theta-end", self.theta_end.unwrap_or(6.0 * std::f64::consts::PI))?,
            points: at_least("points", self.points, 2)?,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Noise {
    /// ⟨dw²⟩ = dt
    Unit,
    /// ⟨dw²⟩ = dt/2
    Half,
}

#[derive(Debug, Clone, Args)]
pub struct OpoArgs {
    /// Damping rate; defaults to 2π·10.
    #[arg(long, value_parser = parse_real)]
    pub gamma: Option<f64>,
    /// Squeezing rate; defaults to γ/3.
    #[arg(long, value_parser = parse_real)]
    pub chi: Option<f64>,
    #[arg(long, default_value = "3", value_parser = parse_real)]
    pub alpha: f64,
    #[arg(long, default_value = "0", value_parser = parse_real)]
    pub nbar: f64,
    #[arg(long, default_value = "0.36", value_parser = parse_real)]
    pub t_end: f64,
    #[arg(long, default_value = "2000", value_parser = parse_count)]
    pub points: usize,
    #[arg(long, default_value = "100", value_parser = parse_count)]
    pub trajectories: usize,
    /// General-dyne squeezing parameter of the measurement.
    #[arg(long, default_value = "1e-5", value_parser = parse_real)]
    pub s: f64,
    /// General-dyne angle; defaults to π/2 (x quadrature).
    #[arg(long, value_parser = parse_real)]
    pub phi: Option<f64>,
    #[arg(long, value_enum, default_value_t = Noise::Unit)]
    pub noise: Noise,
    #[command(flatten)]
    pub common: Common,
}

impl OpoArgs {
    pub fn to_config(&self, seed: u64) -> Result<OpoConfig, CliError> {
        let d = OpoConfig::default();
        let gamma = positive("gamma", self.gamma.unwrap_or(d.gamma))?;
        if self.nbar < 0.0 {
            return Err(CliError::Usage("--nbar must be non-negative".into()));
        }
        Ok(OpoConfig {
            gamma,
            chi: self.chi.unwrap_or(gamma / 3.0),
            alpha: self.alpha,
            nbar: self.nbar,
            t_end: positive("t-end", self.t_end)?,
            points: at_least("points", self.points, 2)?,
            trajectories: at_least("trajectories", self.trajectories, 1)?,
            s: positive("s", self.s)?,
            phi: self.phi.unwrap_or(d.phi),
            half_variance: self.noise == Noise::Half,
            seed,
        })
    }
}

#[derive(Debug, Clone, Args)]
pub struct RandomCircuitsArgs {
    #[arg(long, default_value = "20", value_parser = parse_count)]
    pub modes: usize,
    /// Comma-separated numbers of turns (gate sweeps).
    #[arg(long, default_value = "2,4,6", value_parser = parse_count_list)]
    pub turns: Vec<Vec<usize>>,
    #[arg(long, default_value = "50", value_parser = parse_count)]
    pub realizations: usize,
    #[arg(long, default_value = "0.5", value_parser = parse_real)]
    pub r_max: f64,
    #[arg(long, default_value = "0.1", value_parser = parse_real)]
    pub alpha_mean: f64,
    #[arg(long, default_value = "0.01", value_parser = parse_real)]
    pub alpha_std: f64,
    #[command(flatten)]
    pub common: Common,
}

impl RandomCircuitsArgs {
    pub fn to_config(&self, seed: u64) -> Result<RandomCircuitsConfig, CliError> {
        let turns = self.turns.concat();
        if turns.is_empty() || turns.contains(&0) {
            return Err(CliError::Usage("--turns must list positive integers".into()));
        }
        if self.alpha_std < 0.0 || self.r_max < 0.0 {
            return Err(CliError::Usage("--alpha-std and --r-max must be non-negative".into()));
        }
        Ok(RandomCircuitsConfig {
            modes: at_least("modes", self.modes, 2)?,
            turns,
            realizations: at_least("realizations", self.realizations, 1)?,
            params: gaussim::circuits::CircuitParams {
                r_max: self.r_max,
                alpha_mean: self.alpha_mean,
                alpha_std: self.alpha_std,
            },
            seed,
        })
    }
}

#[derive(Debug, Clone, Args)]
pub struct BenchArgs {
    /// Comma-separated mode counts.
    #[arg(long, default_value = "5,10,20,40", value_parser = parse_count_list)]
    pub modes: Vec<Vec<usize>>,
    #[arg(long, default_value = "5", value_parser = parse_count)]
    pub reps: usize,
    #[arg(long, default_value = "10000", value_parser = parse_count)]
    pub steps: usize,
    #[arg(long, default_value = "6.283185307179586", value_parser = parse_real)]
    pub omega: f64,
    #[command(flatten)]
    pub common: Common,
}

impl BenchArgs {
    pub fn to_config(&self, seed: u64) -> Result<BenchConfig, CliError> {
        let modes = self.modes.concat();
        if modes.is_empty() {
            return Err(CliError::Usage("--modes must list at least one mode count".into()));
        }
        Ok(BenchConfig {
            modes,
            reps: at_least("reps", self.reps, 1)?,
            steps: at_least("steps", self.steps, 1)?,
            seed,
            omega: positive("omega", self.omega)?,
            ..BenchConfig::default()
        })
    }
}
