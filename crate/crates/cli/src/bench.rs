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

//! Wall-clock scaling of the moment integrator with the number of modes.

use std::f64::consts::PI;
use std::time::Instant;

use gaussim::dynamics::{propagate_moments, DynamicsSpec, StepControl};
use gaussim::linalg::symplectic_form;
use gaussim::rng;
use nalgebra::{DMatrix, DVector};
use rand_distr::{Distribution, Normal};
use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::CliError;

#[derive(Debug, Clone, PartialEq)]
pub struct BenchConfig {
    pub modes: Vec<usize>,
    pub reps: usize,
    pub steps: usize,
    pub seed: u64,
    pub omega: f64,
    pub cycles: f64,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig { modes: vec![5, 10, 20, 40], reps: 5, steps: 10_000, seed: 0, omega: 2.0 * PI, cycles: 5.0 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PowerLaw {
    pub exponent: f64,
    pub prefactor: f64,
    /// 95% confidence half-width on the exponent.
    pub half_width: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchReport {
    pub modes: Vec<usize>,
    /// Seconds of every repetition, per mode count.
    pub runs: Vec<Vec<f64>>,
    pub fit: Option<PowerLaw>,
}

impl BenchReport {
    pub fn mean_seconds(&self) -> Vec<f64> {
        self.runs.iter().map(|r| r.iter().sum::<f64>() / r.len() as f64).collect()
    }

    pub fn std_seconds(&self) -> Vec<f64> {
        self.runs
            .iter()
            .map(|r| {
                if r.len() < 2 {
                    return 0.0;
                }
                let m = r.iter().sum::<f64>() / r.len() as f64;
                (r.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (r.len() - 1) as f64).sqrt()
            })
            .collect()
    }
}

/// All-to-all coupled quadratic Hamiltonian: `ω` on the diagonal and `ω/3`
/// between every pair of quadratures belonging to different modes.
pub fn coupled_hamiltonian(n_modes: usize, omega: f64) -> DMatrix<f64> {
    let c = omega / 3.0;
    DMatrix::from_fn(2 * n_modes, 2 * n_modes, |i, j| {
        if i == j {
            omega
        } else if i / 2 != j / 2 {
            c
        } else {
            0.0
        }
    })
}

/// Drift `ΩH − γ/2` and diffusion `γ(2n̄+1)` with `γ = ω/10`, `n̄ = 10`.
pub fn bench_dynamics(n_modes: usize, omega: f64) -> Result<DynamicsSpec, CliError> {
    let gamma = omega / 10.0;
    let nbar = 10.0;
    let dim = 2 * n_modes;
    let eye = DMatrix::<f64>::identity(dim, dim);
    let drift = symplectic_form(n_modes) * coupled_hamiltonian(n_modes, omega) - &eye * (0.5 * gamma);
    let diffusion = eye * (gamma * (2.0 * nbar + 1.0));
    Ok(DynamicsSpec::new(drift, diffusion, DVector::zeros(dim))?)
}

/// One timed integration of `steps` RK4 steps over `cycles` periods.
pub fn time_once(n_modes: usize, config: &BenchConfig, rep: usize) -> Result<f64, CliError> {
    let spec = bench_dynamics(n_modes, config.omega)?;
    let t_end = config.cycles * 2.0 * PI / config.omega;
    let times = gaussim::phase_space::linspace(0.0, t_end, config.steps + 1);
    let mut rng = rng::stream(config.seed, (n_modes as u64) << 32 | rep as u64);
    let normal = Normal::new(0.0, 1.0).expect("unit normal");
    let mean = DVector::from_fn(2 * n_modes, |_, _| normal.sample(&mut rng));
    let cov = DMatrix::identity(2 * n_modes, 2 * n_modes);
    let mut last = 0.0;
    let start = Instant::now();
    propagate_moments(&spec, &mean, &cov, &times, StepControl::Substeps(1), |_, _, _, v| {
        last = v[(0, 0)];
        Ok(())
    })?;
    let elapsed = start.elapsed().as_secs_f64();
    if !last.is_finite() {
        return Err(CliError::Numerical("benchmark integration diverged".into()));
    }
    Ok(elapsed.max(f64::MIN_POSITIVE))
}

/// Least squares fit of `ln t = ln a + k ln N` with a Student-t interval on `k`.
pub fn fit_power_law(modes: &[usize], seconds: &[f64]) -> Option<PowerLaw> {
    let n = modes.len();
    let mut distinct = modes.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    if n != seconds.len() || distinct.len() < 2 {
        return None;
    }
    let xs: Vec<f64> = modes.iter().map(|&m| (m as f64).ln()).collect();
    let ys: Vec<f64> = seconds.iter().map(|s| s.ln()).collect();
    let mx = xs.iter().sum::<f64>() / n as f64;
    let my = ys.iter().sum::<f64>() / n as f64;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let k = sxy / sxx;
    let intercept = my - k * mx;
    let half_width = if n > 2 {
        let rss: f64 = xs.iter().zip(&ys).map(|(x, y)| (y - intercept - k * x).powi(2)).sum();
        let se = (rss / (n - 2) as f64 / sxx).sqrt();
        let t = StudentsT::new(0.0, 1.0, (n - 2) as f64).ok()?.inverse_cdf(0.975);
        t * se
    } else {
        f64::NAN
    };
    Some(PowerLaw { exponent: k, prefactor: intercept.exp(), half_width })
}

pub fn run_bench(config: &BenchConfig) -> Result<BenchReport, CliError> {
    if config.modes.iter().any(|&m| m < 2) {
        return Err(CliError::Usage("bench mode counts must be at least 2".into()));
    }
    if config.reps == 0 || config.steps == 0 {
        return Err(CliError::Usage("--reps and --steps must be positive".into()));
    }
    let mut runs = Vec::with_capacity(config.modes.len());
    for &n in &config.modes {
        // Warm-up run so allocation and page faults stay out of the timings.
        time_once(n, config, usize::MAX >> 32)?;
        let reps = (0..config.reps).map(|rep| time_once(n, config, rep)).collect::<Result<Vec<_>, _>>()?;
        runs.push(reps);
    }
    let mut report = BenchReport { modes: config.modes.clone(), runs, fit: None };
    let distinct = {
        let mut m = config.modes.clone();
        m.sort_unstable();
        m.dedup();
        m.len()
    };
    if distinct >= 4 {
        report.fit = fit_power_law(&report.modes, &report.mean_seconds());
    }
    Ok(report)
}
