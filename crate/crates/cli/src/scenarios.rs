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

//! The individual scenarios. Each builds its tables in memory.

use std::f64::consts::PI;

use gaussim::circuits::{complement_profile, ensemble_profile, CircuitParams};
use gaussim::dynamics::{
    conditional_dynamics, steady_state, unconditional_dynamics, Bath, DynamicsSpec, MonitoringSpec, NoiseConvention,
};
use gaussim::observables::{fidelity, number_moments, squeezing_degree, vacuum_probability};
use gaussim::phase_space::{linspace, wigner};
use gaussim::GaussianState;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde_json::{Map, Value};

use crate::bench::{run_bench, BenchConfig};
use crate::output::Table;
use crate::{CliError, ScenarioOutput};

fn base_meta(scenario: &str) -> Map<String, Value> {
    let mut meta = Map::new();
    meta.insert("scenario".into(), Value::from(scenario));
    meta.insert("version".into(), Value::from(env!("CARGO_PKG_VERSION")));
    meta.insert("hbar".into(), Value::from(2));
    meta
}

fn put(meta: &mut Map<String, Value>, key: &str, value: impl Into<Value>) {
    meta.insert(key.into(), value.into());
}

/// Single-mode drift `[[−γ/2, ω], [−ω, −γ/2]]` with diffusion `γ`.
fn damped_oscillator(omega: f64, gamma: f64) -> Result<DynamicsSpec, CliError> {
    let a = DMatrix::from_row_slice(2, 2, &[-gamma / 2.0, omega, -omega, -gamma / 2.0]);
    Ok(DynamicsSpec::new(a, DMatrix::identity(2, 2) * gamma, DVector::zeros(2))?)
}

fn squeezed_coherent(alpha: f64, r: f64) -> Result<GaussianState, CliError> {
    let mut state = GaussianState::coherent(Complex64::new(alpha, 0.0));
    state.squeeze(0, r, 0.0)?;
    Ok(state)
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureConfig {
    pub omega: f64,
    pub alpha: f64,
    pub r: f64,
    pub t_end: f64,
    pub points: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig { omega: 2.0 * PI, alpha: 2.0, r: 1.2, t_end: 1.0 / PI, points: 200 }
    }
}

pub fn quadrature(config: &QuadratureConfig) -> Result<ScenarioOutput, CliError> {
    let spec = damped_oscillator(config.omega, 0.0)?;
    let times = linspace(0.0, config.t_end, config.points);
    let coherent = GaussianState::coherent(Complex64::new(config.alpha, 0.0));
    let squeezed = squeezed_coherent(config.alpha, config.r)?;
    let a = unconditional_dynamics(&spec, &coherent, &times)?;
    let b = unconditional_dynamics(&spec, &squeezed, &times)?;
    let mut table = Table::new(None, ["t", "mean_x_coherent", "var_x_coherent", "mean_x_squeezed", "var_x_squeezed"]);
    for ((t, sa), (_, sb)) in a.iter().zip(b.iter()) {
        table.push(vec![t, sa.mean()[0], sa.cov()[(0, 0)], sb.mean()[0], sb.cov()[(0, 0)]]);
    }
    let min_var = table.column("var_x_squeezed").unwrap_or_default().into_iter().fold(f64::INFINITY, f64::min);
    let mut meta = base_meta("quadrature");
    put(&mut meta, "omega", config.omega);
    put(&mut meta, "alpha", config.alpha);
    put(&mut meta, "r", config.r);
    put(&mut meta, "min_var_x_squeezed", min_var);
    Ok(ScenarioOutput {
        scenario: "quadrature",
        summary: format!("{} times, smallest squeezed x variance {min_var:.6}", table.rows.len()),
        tables: vec![table],
        meta,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct DampedConfig {
    pub omega: f64,
    pub gamma: f64,
    pub alpha: f64,
    pub t_end: f64,
    pub points: usize,
    pub grid: usize,
    pub snapshots: usize,
}

impl Default for DampedConfig {
    fn default() -> Self {
        DampedConfig {
            omega: 2.0 * PI,
            gamma: 2.0 * PI * 0.3,
            alpha: 2.0,
            t_end: 3.5,
            points: 200,
            grid: 200,
            snapshots: 4,
        }
    }
}

pub fn damped(config: &DampedConfig) -> Result<ScenarioOutput, CliError> {
    let spec = damped_oscillator(config.omega, config.gamma)?;
    let times = linspace(0.0, config.t_end, config.points);
    let initial = GaussianState::coherent(Complex64::new(config.alpha, 0.0));
    let series = unconditional_dynamics(&spec, &initial, &times)?;
    let vacuum = GaussianState::vacuum(1)?;
    let n0 = config.alpha * config.alpha;

    let mut table = Table::new(None, ["t", "occupation", "occupation_expected", "number_variance", "fidelity_vacuum"]);
    let mut worst_rel = 0.0f64;
    for (t, state) in series.iter() {
        let moments = number_moments(state);
        let expected = n0 * (-config.gamma * t).exp();
        worst_rel = worst_rel.max((moments.mean[0] - expected).abs() / expected);
        table.push(vec![t, moments.mean[0], expected, moments.variance[0], fidelity(state, &vacuum)?]);
    }

    let mut snapshots = Table::new(Some("wigner"), ["t", "x", "p", "W"]);
    let axis = linspace(-6.0, 6.0, config.grid);
    let picks: Vec<usize> = match config.snapshots {
        0 => Vec::new(),
        1 => vec![0],
        k => (0..k).map(|i| i * (series.len() - 1) / (k - 1)).collect(),
    };
    for &k in &picks {
        let state = &series.states()[k];
        let grid = wigner(state, &axis, &axis)?;
        for (i, &x) in grid.x_axis.iter().enumerate() {
            for (j, &p) in grid.p_axis.iter().enumerate() {
                snapshots.push(vec![series.times()[k], x, p, grid.values[(i, j)]]);
            }
        }
    }

    let steady = steady_state(&spec)?;
    let steady_fid = fidelity(&steady, &vacuum)?;
    let final_fid = table.rows.last().map_or(f64::NAN, |r| r[4]);
    let mut meta = base_meta("damped");
    put(&mut meta, "omega", config.omega);
    put(&mut meta, "gamma", config.gamma);
    put(&mut meta, "alpha", config.alpha);
    put(&mut meta, "steady_state_fidelity_vacuum", steady_fid);
    put(&mut meta, "final_fidelity_vacuum", final_fid);
    put(&mut meta, "max_relative_occupation_error", worst_rel);
    let mut tables = vec![table];
    if !picks.is_empty() {
        tables.push(snapshots);
    }
    Ok(ScenarioOutput {
        scenario: "damped",
        summary: format!("steady-state fidelity with vacuum {steady_fid:.9}, final-time fidelity {final_fid:.6}"),
        tables,
        meta,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SqueezedDampedConfig {
    pub omega: f64,
    pub gamma: f64,
    pub alpha: f64,
    pub r: f64,
    pub t_end: f64,
    pub points: usize,
}

impl Default for SqueezedDampedConfig {
    fn default() -> Self {
        SqueezedDampedConfig { omega: 2.0 * PI, gamma: 2.0 * PI * 0.1, alpha: 2.0, r: 1.2, t_end: 6.0, points: 200 }
    }
}

pub fn squeezed_damped(config: &SqueezedDampedConfig) -> Result<ScenarioOutput, CliError> {
    let spec = damped_oscillator(config.omega, config.gamma)?;
    let times = linspace(0.0, config.t_end, config.points);
    let series = unconditional_dynamics(&spec, &squeezed_coherent(config.alpha, config.r)?, &times)?;
    let mut table = Table::new(None, ["t", "squeezing_degree", "mean_x", "var_x"]);
    for (t, state) in series.iter() {
        table.push(vec![t, squeezing_degree(state)?.ratio, state.mean()[0], state.cov()[(0, 0)]]);
    }
    let steady = squeezing_degree(&steady_state(&spec)?)?.ratio;
    let last = table.rows.last().map_or(f64::NAN, |r| r[1]);
    let mut meta = base_meta("squeezed-damped");
    put(&mut meta, "omega", config.omega);
    put(&mut meta, "gamma", config.gamma);
    put(&mut meta, "alpha", config.alpha);
    put(&mut meta, "r", config.r);
    put(&mut meta, "steady_state_squeezing_degree", steady);
    Ok(ScenarioOutput {
        scenario: "squeezed-damped",
        summary: format!("squeezing degree {:.6} -> {last:.6} (steady state {steady:.6})", table.rows[0][1]),
        tables: vec![table],
        meta,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct DisplacementConfig {
    pub r: f64,
    pub alpha: f64,
    pub taus: Vec<f64>,
    pub theta_end: f64,
    pub points: usize,
}

impl Default for DisplacementConfig {
    fn default() -> Self {
        DisplacementConfig { r: 0.4, alpha: 0.1, taus: vec![1.0, 0.8, 0.6, 0.5], theta_end: 6.0 * PI, points: 200 }
    }
}

/// Two-mode squeezed vacuum with loss `tau` on the first mode.
pub fn lossy_tms(r: f64, tau: f64) -> Result<GaussianState, CliError> {
    let mut state = GaussianState::vacuum(2)?;
    state.two_mode_squeezing(0, 1, r)?.loss_ancilla(0, tau)?;
    Ok(state)
}

/// `p(0,0)`: vacuum probability after displacing by `α` and `α e^{iθ}`.
pub fn p00(state: &GaussianState, alpha: f64, theta: f64) -> Result<f64, CliError> {
    let mut shifted = state.clone();
    shifted.displace(0, Complex64::new(alpha, 0.0))?.displace(1, Complex64::from_polar(alpha, theta))?;
    Ok(vacuum_probability(&shifted)?)
}

/// Same quantity as the fidelity with the product coherent state.
pub fn p00_fidelity(state: &GaussianState, alpha: f64, theta: f64) -> Result<f64, CliError> {
    let probe = GaussianState::coherent(Complex64::new(alpha, 0.0))
        .tensor(&GaussianState::coherent(Complex64::from_polar(alpha, theta)));
    Ok(fidelity(&probe, state)?)
}

/// Maximum disagreement allowed between the two routes to `p(0,0)`.
pub const ROUTE_TOL: f64 = 1e-9;

pub fn visibility(values: &[f64]) -> f64 {
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    (max - min) / (max + min)
}

pub fn displacement(config: &DisplacementConfig) -> Result<ScenarioOutput, CliError> {
    let thetas = linspace(0.0, config.theta_end, config.points);
    let mut table = Table::new(None, ["tau", "theta", "p00"]);
    let mut meta = base_meta("displacement");
    put(&mut meta, "r", config.r);
    put(&mut meta, "alpha", config.alpha);
    let mut worst_route = 0.0f64;
    let mut vis = Vec::with_capacity(config.taus.len());
    for &tau in &config.taus {
        let state = lossy_tms(config.r, tau)?;
        let mut values = Vec::with_capacity(thetas.len());
        for &theta in &thetas {
            let p = p00(&state, config.alpha, theta)?;
            let q = p00_fidelity(&state, config.alpha, theta)?;
            worst_route = worst_route.max((p - q).abs());
            table.push(vec![tau, theta, p]);
            values.push(p);
        }
        vis.push(visibility(&values));
    }
    if worst_route > ROUTE_TOL {
        return Err(CliError::Numerical(format!("vacuum-probability and fidelity routes disagree by {worst_route:e}")));
    }
    put(&mut meta, "taus", config.taus.clone());
    put(&mut meta, "visibilities", vis.clone());
    put(&mut meta, "max_route_difference", worst_route);
    let listed: Vec<String> = config.taus.iter().zip(&vis).map(|(t, v)| format!("{t}: {v:.5}")).collect();
    Ok(ScenarioOutput {
        scenario: "displacement",
        summary: format!("visibility by transmission {}", listed.join(", ")),
        tables: vec![table],
        meta,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct OpoConfig {
    pub gamma: f64,
    pub chi: f64,
    pub alpha: f64,
    pub nbar: f64,
    pub t_end: f64,
    pub points: usize,
    pub trajectories: usize,
    pub s: f64,
    pub phi: f64,
    pub half_variance: bool,
    pub seed: u64,
}

impl Default for OpoConfig {
    fn default() -> Self {
        let gamma = 2.0 * PI * 10.0;
        OpoConfig {
            gamma,
            chi: gamma / 3.0,
            alpha: 3.0,
            nbar: 0.0,
            t_end: 0.36,
            points: 2000,
            trajectories: 100,
            s: 1e-5,
            phi: PI / 2.0,
            half_variance: false,
            seed: 0,
        }
    }
}

impl OpoConfig {
    pub fn dynamics(&self) -> Result<DynamicsSpec, CliError> {
        let (g, c) = (self.gamma, self.chi);
        let a = DMatrix::from_row_slice(2, 2, &[-c - g / 2.0, 0.0, 0.0, c - g / 2.0]);
        let d = DMatrix::identity(2, 2) * (g * (2.0 * self.nbar + 1.0));
        Ok(DynamicsSpec::new(a, d, DVector::zeros(2))?)
    }

    pub fn monitoring(&self) -> Result<MonitoringSpec, CliError> {
        let bath = Bath::independent_thermal(1, self.gamma, self.nbar)?;
        let noise = if self.half_variance { NoiseConvention::HalfVariance } else { NoiseConvention::UnitVariance };
        Ok(MonitoringSpec::new(bath, vec![(self.s, self.phi)], self.trajectories, self.seed)?.with_noise(noise))
    }

    /// `(1 − 2χ/γ) / (1 + 2χ/γ)`.
    pub fn predicted_unconditional(&self) -> f64 {
        let k = 2.0 * self.chi / self.gamma;
        (1.0 - k) / (1.0 + k)
    }

    /// `((γ − 2χ)/γ)²`.
    pub fn predicted_conditional(&self) -> f64 {
        ((self.gamma - 2.0 * self.chi) / self.gamma).powi(2)
    }
}

pub fn opo(config: &OpoConfig) -> Result<ScenarioOutput, CliError> {
    let spec = config.dynamics()?;
    let times = linspace(0.0, config.t_end, config.points);
    let initial = GaussianState::coherent(Complex64::new(config.alpha, 0.0));
    let unconditional = unconditional_dynamics(&spec, &initial, &times)?;
    let ensemble = conditional_dynamics(&spec, &config.monitoring()?, &initial, &times)?;
    let conditional = ensemble
        .conditional_covariances()
        .ok_or_else(|| CliError::Numerical("monitoring produced no conditional covariance".into()))?;

    let mut table = Table::new(
        None,
        [
            "t",
            "squeezing_unconditional",
            "squeezing_conditional",
            "var_x_unconditional",
            "var_p_unconditional",
            "var_x_conditional",
            "var_p_conditional",
        ],
    );
    for (k, (t, state)) in unconditional.iter().enumerate() {
        let vc = &conditional[k];
        let cond = GaussianState::new(state.mean().clone(), vc.clone())?;
        table.push(vec![
            t,
            squeezing_degree(state)?.ratio,
            squeezing_degree(&cond)?.ratio,
            state.cov()[(0, 0)],
            state.cov()[(1, 1)],
            vc[(0, 0)],
            vc[(1, 1)],
        ]);
    }

    let mut summary = Table::new(Some("trajectories"), ["t", "mean_x", "mean_p", "var_x", "var_p"]);
    for (k, &t) in ensemble.times().iter().enumerate() {
        let (m, v) = (ensemble.mean(k), ensemble.variance(k));
        summary.push(vec![t, m[0], m[1], v[0], v[1]]);
    }

    let last = table.rows.last().cloned().unwrap_or_default();
    let steady = squeezing_degree(&steady_state(&spec)?)?.ratio;
    let mut meta = base_meta("opo");
    put(&mut meta, "gamma", config.gamma);
    put(&mut meta, "chi", config.chi);
    put(&mut meta, "alpha", config.alpha);
    put(&mut meta, "nbar", config.nbar);
    put(&mut meta, "s", config.s);
    put(&mut meta, "phi", config.phi);
    put(&mut meta, "trajectories", config.trajectories);
    put(&mut meta, "seed", config.seed);
    put(&mut meta, "noise", if config.half_variance { "half" } else { "unit" });
    put(&mut meta, "predicted_unconditional", config.predicted_unconditional());
    put(&mut meta, "predicted_conditional", config.predicted_conditional());
    put(&mut meta, "steady_state_squeezing", steady);
    put(&mut meta, "final_unconditional", last[1]);
    put(&mut meta, "final_conditional", last[2]);
    Ok(ScenarioOutput {
        scenario: "opo",
        summary: format!(
            "final squeezing degree unconditional {:.6} (theory {:.6}), conditional {:.6} (theory {:.6})",
            last[1],
            config.predicted_unconditional(),
            last[2],
            config.predicted_conditional()
        ),
        tables: vec![table, summary],
        meta,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct RandomCircuitsConfig {
    pub modes: usize,
    pub turns: Vec<usize>,
    pub realizations: usize,
    pub params: CircuitParams,
    pub seed: u64,
}

impl Default for RandomCircuitsConfig {
    fn default() -> Self {
        RandomCircuitsConfig {
            modes: 20,
            turns: vec![2, 4, 6],
            realizations: 50,
            params: CircuitParams::default(),
            seed: 0,
        }
    }
}

/// Master seed of the ensemble with `turns` turns.
pub fn turns_seed(seed: u64, turns: usize) -> u64 {
    seed.wrapping_add(turns as u64)
}

/// The interior sites `N/4 ..= 3N/4` used for the ordering statistic.
pub fn interior(modes: usize) -> std::ops::RangeInclusive<usize> {
    modes / 4..=3 * modes / 4
}

pub fn random_circuits(config: &RandomCircuitsConfig) -> Result<ScenarioOutput, CliError> {
    let mut table = Table::new(None, ["T", "x", "S_mean", "S_std"]);
    let mut meta = base_meta("random-circuits");
    put(&mut meta, "modes", config.modes);
    put(&mut meta, "realizations", config.realizations);
    put(&mut meta, "r_max", config.params.r_max);
    put(&mut meta, "alpha_mean", config.params.alpha_mean);
    put(&mut meta, "alpha_std", config.params.alpha_std);
    put(&mut meta, "seed", config.seed);
    put(&mut meta, "entropy_units", "nats");
    let mut gate_counts = Map::new();
    let mut interior_means = Map::new();
    let mut parts = Vec::new();
    for &turns in &config.turns {
        let ens =
            ensemble_profile(config.modes, turns, &config.params, config.realizations, turns_seed(config.seed, turns))?;
        for (x, (m, s)) in ens.mean.iter().zip(&ens.std).enumerate() {
            table.push(vec![turns as f64, x as f64, *m, *s]);
        }
        let (mean, se) = ens.region_mean(interior(config.modes));
        gate_counts.insert(format!("T{turns}"), Value::from(ens.gate_counts.clone()));
        interior_means.insert(format!("T{turns}"), Value::from(vec![mean, se]));
        parts.push(format!("T={turns}: {mean:.4} ± {se:.4}"));
    }
    put(&mut meta, "gate_counts", Value::Object(gate_counts));
    put(&mut meta, "interior_mean_and_standard_error", Value::Object(interior_means));
    Ok(ScenarioOutput {
        scenario: "random-circuits",
        summary: format!("interior mean entropy {}", parts.join(", ")),
        tables: vec![table],
        meta,
    })
}

/// Largest `|S[x] − S̄[x]|` over `realizations` circuits; zero for pure states.
pub fn complement_asymmetry(config: &RandomCircuitsConfig, turns: usize) -> Result<f64, CliError> {
    use gaussim::circuits::{apply_circuit, entropy_profile, random_circuit};
    let vacuum = GaussianState::vacuum(config.modes)?;
    let mut worst = 0.0f64;
    for i in 0..config.realizations {
        let mut rng = gaussim::rng::stream(turns_seed(config.seed, turns), i as u64);
        let circuit = random_circuit(config.modes, turns, &config.params, &mut rng)?;
        let state = apply_circuit(&vacuum, &circuit)?;
        let (a, b) = (entropy_profile(&state)?, complement_profile(&state)?);
        for (x, y) in a.values.iter().zip(&b.values) {
            worst = worst.max((x - y).abs());
        }
    }
    Ok(worst)
}

pub fn bench(config: &BenchConfig) -> Result<ScenarioOutput, CliError> {
    let report = run_bench(config)?;
    let mut table = Table::new(None, ["modes", "mean_seconds", "std_seconds", "reps"]);
    for ((n, m), s) in report.modes.iter().zip(report.mean_seconds()).zip(report.std_seconds()) {
        table.push(vec![*n as f64, m, s, config.reps as f64]);
    }
    let mut runs = Table::new(Some("runs"), ["modes", "rep", "seconds"]);
    for (n, reps) in report.modes.iter().zip(&report.runs) {
        for (k, s) in reps.iter().enumerate() {
            runs.push(vec![*n as f64, k as f64, *s]);
        }
    }
    let mut meta = base_meta("bench");
    put(&mut meta, "steps", config.steps);
    put(&mut meta, "cycles", config.cycles);
    put(&mut meta, "omega", config.omega);
    put(&mut meta, "seed", config.seed);
    put(&mut meta, "hamiltonian", "omega on the diagonal, omega/3 between quadratures of different modes");
    put(&mut meta, "bath", "drift -gamma/2, diffusion gamma(2 nbar + 1), gamma = omega/10, nbar = 10");
    let summary = match &report.fit {
        Some(fit) => {
            put(&mut meta, "exponent", fit.exponent);
            put(&mut meta, "exponent_ci95_half_width", fit.half_width);
            put(&mut meta, "prefactor_seconds", fit.prefactor);
            format!("time ~ N^{:.3} ± {:.3} (95%)", fit.exponent, fit.half_width)
        }
        None => "fewer than 4 distinct mode counts, no power-law fit".to_string(),
    };
    Ok(ScenarioOutput { scenario: "bench", summary, tables: vec![table, runs], meta })
}
