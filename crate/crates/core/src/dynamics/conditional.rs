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

//! Continuously monitored (conditional) dynamics and semi-classical
//! Langevin trajectories.
//!
//! The conditional covariance obeys a deterministic Riccati equation and is
//! integrated once. Each trajectory then integrates its mean vector with the
//! RK4 drift step plus an Euler–Maruyama noise increment.

use std::io::{self, Write};

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use super::{
    check_initial, check_physical, innovation_gain, record_matrices, rk4_cov, rk4_mean, stage_drifts, Bath,
    DynamicsSpec, StateSeries, StepControl, StepGrid,
};
use crate::error::{Error, Result};
use crate::linalg::{psd_factor, spectral_norm};
use crate::measurement::dyne_covariance;
use crate::rng::stream;
use crate::state::GaussianState;

/// Variance of each Wiener increment component per step `dt`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NoiseConvention {
    /// `⟨dw²⟩ = dt`.
    #[default]
    UnitVariance,
    /// `⟨dw²⟩ = dt/2`, the literal reading of `⟨{dw, dwᵀ}⟩ = 𝟙 dt`.
    HalfVariance,
}

impl NoiseConvention {
    fn variance_per_time(self) -> f64 {
        match self {
            NoiseConvention::UnitVariance => 1.0,
            NoiseConvention::HalfVariance => 0.5,
        }
    }
}

/// Bath coupling plus a general-dyne measurement of every bath output mode.
#[derive(Debug, Clone)]
pub struct MonitoringSpec {
    bath: Bath,
    dyne: Vec<(f64, f64)>,
    n_trajectories: usize,
    seed: u64,
    noise: NoiseConvention,
    step: StepControl,
}

impl MonitoringSpec {
    /// `dyne` holds `(s, φ)` for each bath mode; `s → 0` is homodyne of the
    /// quadrature `x cos φ + p sin φ` of that output mode's post-measurement
    /// state, `s = 1` heterodyne.
    pub fn new(bath: Bath, dyne: Vec<(f64, f64)>, n_trajectories: usize, seed: u64) -> Result<Self> {
        if dyne.len() != bath.n_bath_modes() {
            return Err(Error::DimensionMismatch { expected: bath.n_bath_modes(), found: dyne.len() });
        }
        if let Some(&(s, _)) = dyne.iter().find(|(s, phi)| !(*s > 0.0 && s.is_finite() && phi.is_finite())) {
            return Err(Error::InvalidParameter(format!("dyne squeezing must be positive and finite, got {s}")));
        }
        if n_trajectories == 0 {
            return Err(Error::InvalidParameter("need at least one trajectory".into()));
        }
        Ok(MonitoringSpec {
            bath,
            dyne,
            n_trajectories,
            seed,
            noise: NoiseConvention::default(),
            step: StepControl::Auto,
        })
    }

    pub fn with_noise(mut self, noise: NoiseConvention) -> Self {
        self.noise = noise;
        self
    }

    pub fn with_step(mut self, step: StepControl) -> Self {
        self.step = step;
        self
    }

    pub fn bath(&self) -> &Bath {
        &self.bath
    }

    pub fn n_trajectories(&self) -> usize {
        self.n_trajectories
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn noise(&self) -> NoiseConvention {
        self.noise
    }

    /// Block-diagonal `V_M`.
    pub fn measurement_covariance(&self) -> DMatrix<f64> {
        let dim = 2 * self.dyne.len();
        let mut v_m = DMatrix::zeros(dim, dim);
        for (k, &(s, phi)) in self.dyne.iter().enumerate() {
            v_m.view_mut((2 * k, 2 * k), (2, 2)).copy_from(&dyne_covariance(s, phi));
        }
        v_m
    }
}

/// Mean-vector trajectories sampled at common output times.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryEnsemble {
    times: Vec<f64>,
    trajectories: Vec<Vec<DVector<f64>>>,
    conditional_cov: Option<Vec<DMatrix<f64>>>,
}

impl TrajectoryEnsemble {
    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn n_trajectories(&self) -> usize {
        self.trajectories.len()
    }

    pub fn trajectory(&self, index: usize) -> &[DVector<f64>] {
        &self.trajectories[index]
    }

    /// Conditional covariance at each output time, shared by every
    /// trajectory. `None` for semi-classical ensembles.
    pub fn conditional_covariances(&self) -> Option<&[DMatrix<f64>]> {
        self.conditional_cov.as_deref()
    }

    fn dim(&self) -> usize {
        self.trajectories[0].first().map_or(0, |r| r.len())
    }

    /// Ensemble mean of `R` at output index `k`.
    pub fn mean(&self, k: usize) -> DVector<f64> {
        // Offsets from the first trajectory keep the mean exact when every
        // trajectory agrees, as at the initial time.
        let first = &self.trajectories[0][k];
        let n = self.n_trajectories() as f64;
        let offset = self.trajectories.iter().fold(DVector::zeros(first.len()), |acc, tr| acc + (&tr[k] - first));
        first + offset / n
    }

    /// Population covariance of `R` across trajectories at output index `k`.
    pub fn sample_covariance(&self, k: usize) -> DMatrix<f64> {
        let mean = self.mean(k);
        let dim = mean.len();
        let sum = self.trajectories.iter().fold(DMatrix::zeros(dim, dim), |acc, tr| {
            let d = &tr[k] - &mean;
            acc + &d * d.transpose()
        });
        sum / self.n_trajectories() as f64
    }

    /// Per-component variance with Bessel's correction (zero for a single
    /// trajectory).
    pub fn variance(&self, k: usize) -> DVector<f64> {
        let n = self.n_trajectories();
        if n < 2 {
            return DVector::zeros(self.dim());
        }
        self.sample_covariance(k).diagonal() * (n as f64 / (n - 1) as f64)
    }

    pub fn standard_error(&self, k: usize) -> DVector<f64> {
        (self.variance(k) / self.n_trajectories() as f64).map(f64::sqrt)
    }

    /// Conditional state of one trajectory over time.
    pub fn conditional_states(&self, index: usize) -> Result<StateSeries> {
        let covs = self
            .conditional_cov
            .as_ref()
            .ok_or_else(|| Error::InvalidParameter("semi-classical ensembles carry no conditional state".into()))?;
        let states = self.trajectories[index]
            .iter()
            .zip(covs)
            .map(|(r, v)| GaussianState::from_parts(r.clone(), v.clone()))
            .collect();
        StateSeries::new(self.times.clone(), states)
    }

    /// Ensemble-averaged state: mean of `R`, covariance equal to the
    /// conditional covariance plus the spread of the conditional means.
    pub fn ensemble_states(&self) -> Result<StateSeries> {
        let states = (0..self.times.len())
            .map(|k| {
                let mut cov = self.sample_covariance(k);
                if let Some(covs) = &self.conditional_cov {
                    cov += &covs[k];
                }
                GaussianState::new(self.mean(k), cov)
            })
            .collect::<Result<Vec<_>>>()?;
        StateSeries::new(self.times.clone(), states)
    }

    /// CSV with columns `t, mean_R_1.., var_R_1..`.
    pub fn write_summary_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        let dim = self.dim();
        let mut header = vec!["t".to_string()];
        header.extend((1..=dim).map(|i| format!("mean_R_{i}")));
        header.extend((1..=dim).map(|i| format!("var_R_{i}")));
        writeln!(out, "{}", header.join(","))?;
        for (k, t) in self.times.iter().enumerate() {
            let mut row = vec![t.to_string()];
            row.extend(self.mean(k).iter().map(|x| x.to_string()));
            row.extend(self.variance(k).iter().map(|x| x.to_string()));
            writeln!(out, "{}", row.join(","))?;
        }
        Ok(())
    }
}

/// Noise input matrix per internal step.
enum NoiseInput<'a> {
    PerStep(&'a [DMatrix<f64>]),
    Fixed(&'a DMatrix<f64>),
}

impl NoiseInput<'_> {
    fn at(&self, step: usize) -> &DMatrix<f64> {
        match self {
            NoiseInput::PerStep(gains) => &gains[step],
            NoiseInput::Fixed(l) => l,
        }
    }
}

fn run_trajectories(
    spec: &DynamicsSpec,
    initial: &DVector<f64>,
    times: &[f64],
    grid: &StepGrid,
    noise: NoiseInput<'_>,
    n_trajectories: usize,
    seed: u64,
    variance_per_time: f64,
) -> Vec<Vec<DVector<f64>>> {
    (0..n_trajectories)
        .into_par_iter()
        .map(|index| {
            let mut rng = stream(seed, index as u64);
            let mut r = initial.clone();
            let mut out = Vec::with_capacity(times.len());
            if !times.is_empty() {
                out.push(r.clone());
            }
            let mut step = 0;
            for &(t0, h, count) in grid.intervals() {
                let sd = (variance_per_time * h).sqrt();
                for j in 0..count {
                    let a = stage_drifts(spec, t0 + j as f64 * h, h);
                    let input = noise.at(step);
                    let dw = DVector::from_fn(input.ncols(), |_, _| sd * rng.sample::<f64, _>(StandardNormal));
                    r = rk4_mean(&a, spec.drive(), &r, h) + input * dw;
                    step += 1;
                }
                out.push(r.clone());
            }
            out
        })
        .collect()
}

/// Conditional evolution under continuous general-dyne monitoring.
pub fn conditional_dynamics(
    spec: &DynamicsSpec,
    monitoring: &MonitoringSpec,
    initial: &GaussianState,
    times: &[f64],
) -> Result<TrajectoryEnsemble> {
    check_initial(spec, initial)?;
    let dim = 2 * spec.n_modes();
    if monitoring.bath().coupling().nrows() != dim {
        return Err(Error::DimensionMismatch { expected: dim, found: monitoring.bath().coupling().nrows() });
    }
    let (record, correlation) = record_matrices(monitoring.bath(), &monitoring.measurement_covariance())?;
    let rate = spectral_norm(&record).powi(2) + spectral_norm(&correlation).powi(2);
    let grid = StepGrid::new(spec, times, monitoring.step, rate)?;

    let mut gains = Vec::with_capacity(grid.total_steps());
    let mut covs = Vec::with_capacity(times.len());
    let mut v = initial.cov().clone();
    if let Some(&t) = times.first() {
        covs.push(v.clone());
        check_physical(t, &v)?;
    }
    for (k, &(t0, h, count)) in grid.intervals().iter().enumerate() {
        for j in 0..count {
            gains.push(innovation_gain(&v, &record, &correlation));
            let a = stage_drifts(spec, t0 + j as f64 * h, h);
            v = rk4_cov(&a, spec.diffusion(), &v, h, Some((&record, &correlation)));
        }
        if v.iter().any(|x| !x.is_finite()) {
            return Err(Error::Integration { t: times[k + 1], reason: "covariance is no longer finite".into() });
        }
        check_physical(times[k + 1], &v)?;
        covs.push(v.clone());
    }

    let trajectories = run_trajectories(
        spec,
        initial.mean(),
        times,
        &grid,
        NoiseInput::PerStep(&gains),
        monitoring.n_trajectories(),
        monitoring.seed(),
        monitoring.noise().variance_per_time(),
    );
    Ok(TrajectoryEnsemble { times: times.to_vec(), trajectories, conditional_cov: Some(covs) })
}

/// Langevin trajectories `dR = (AR + b) dt + L dw` with `L Lᵀ = D`.
pub fn semi_classical(
    spec: &DynamicsSpec,
    initial: &DVector<f64>,
    times: &[f64],
    n_trajectories: usize,
    seed: u64,
) -> Result<TrajectoryEnsemble> {
    semi_classical_with(spec, initial, times, n_trajectories, seed, StepControl::Auto)
}

pub fn semi_classical_with(
    spec: &DynamicsSpec,
    initial: &DVector<f64>,
    times: &[f64],
    n_trajectories: usize,
    seed: u64,
    step: StepControl,
) -> Result<TrajectoryEnsemble> {
    let dim = 2 * spec.n_modes();
    if initial.len() != dim {
        return Err(Error::DimensionMismatch { expected: dim, found: initial.len() });
    }
    if n_trajectories == 0 {
        return Err(Error::InvalidParameter("need at least one trajectory".into()));
    }
    let l = psd_factor(spec.diffusion())?;
    let grid = StepGrid::new(spec, times, step, 0.0)?;
    let trajectories = run_trajectories(spec, initial, times, &grid, NoiseInput::Fixed(&l), n_trajectories, seed, 1.0);
    Ok(TrajectoryEnsemble { times: times.to_vec(), trajectories, conditional_cov: None })
}
