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

//! Markovian open-system dynamics of the first and second moments.
//!
//! A problem is the linear system `Ṙ = A R + b`, `V̇ = A V + V Aᵀ + D`.
//! Conditional (monitored) dynamics and semi-classical Langevin trajectories
//! live in [`conditional`].

use std::borrow::Cow;
use std::fmt;
use std::io::{self, Write};
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::linalg::{
    ensure_finite_matrix, ensure_square, inv_sqrtm_spd, max_asymmetry, solve_lyapunov, spectral_abscissa,
    spectral_norm, symmetrize, symplectic_form, symplectic_spectrum,
};
use crate::state::GaussianState;

pub mod conditional;

pub use conditional::{
    conditional_dynamics, semi_classical, semi_classical_with, MonitoringSpec, NoiseConvention, TrajectoryEnsemble,
};

/// Tolerance on the symmetry and positive semidefiniteness of `D`.
const DIFFUSION_TOL: f64 = 1e-10;
/// States at output times may undershoot the uncertainty bound by this much.
pub const INTEGRATION_PHYSICALITY_TOL: f64 = 1e-6;
/// Spectral abscissa threshold separating dissipative from marginal drift.
pub const HURWITZ_TOL: f64 = 1e-12;
/// Automatic substepping keeps `h · rate ≤ 1 / STEPS_PER_RATE`, where the
/// rate bounds the norm of `V ↦ AV + VAᵀ`, i.e. `2‖A‖₂`.
const STEPS_PER_RATE: f64 = 100.0;

pub type DriftFn = dyn Fn(f64) -> DMatrix<f64> + Send + Sync;

#[derive(Clone)]
pub enum Drift {
    Constant(DMatrix<f64>),
    /// Evaluated at every RK4 stage time.
    TimeDependent(Arc<DriftFn>),
}

impl fmt::Debug for Drift {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Drift::Constant(a) => f.debug_tuple("Constant").field(a).finish(),
            Drift::TimeDependent(_) => f.write_str("TimeDependent(..)"),
        }
    }
}

impl Drift {
    pub fn at(&self, t: f64) -> Cow<'_, DMatrix<f64>> {
        match self {
            Drift::Constant(a) => Cow::Borrowed(a),
            Drift::TimeDependent(f) => Cow::Owned(f(t)),
        }
    }
}

/// Drift `A`, diffusion `D` and drive `b` of a Gaussian evolution problem.
#[derive(Debug, Clone)]
pub struct DynamicsSpec {
    drift: Drift,
    diffusion: DMatrix<f64>,
    drive: DVector<f64>,
}

fn validate_diffusion(d: &DMatrix<f64>, dim: usize) -> Result<()> {
    ensure_square(d, dim)?;
    ensure_finite_matrix(d)?;
    let scale = d.norm().max(1.0);
    let asym = max_asymmetry(d);
    if asym > DIFFUSION_TOL * scale {
        return Err(Error::NotSymmetric(asym));
    }
    let mut sym = d.clone();
    symmetrize(&mut sym);
    let min = if dim == 0 { 0.0 } else { sym.symmetric_eigenvalues().min() };
    if min < -DIFFUSION_TOL * scale {
        return Err(Error::NotPositiveSemidefinite(min));
    }
    Ok(())
}

fn validate_drive(b: &DVector<f64>, dim: usize) -> Result<()> {
    if b.len() != dim {
        return Err(Error::DimensionMismatch { expected: dim, found: b.len() });
    }
    if b.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite);
    }
    Ok(())
}

fn even_dimension(dim: usize) -> Result<()> {
    if dim == 0 {
        return Err(Error::NoModes);
    }
    if dim % 2 != 0 {
        return Err(Error::DimensionMismatch { expected: dim + 1, found: dim });
    }
    Ok(())
}

impl DynamicsSpec {
    pub fn new(drift: DMatrix<f64>, diffusion: DMatrix<f64>, drive: DVector<f64>) -> Result<Self> {
        let dim = drift.nrows();
        even_dimension(dim)?;
        ensure_square(&drift, dim)?;
        ensure_finite_matrix(&drift)?;
        validate_diffusion(&diffusion, dim)?;
        validate_drive(&drive, dim)?;
        Ok(DynamicsSpec { drift: Drift::Constant(drift), diffusion, drive })
    }

    /// Problem with a time-dependent drift `A(t)`; `D` and `b` stay constant.
    pub fn time_dependent<F>(drift: F, diffusion: DMatrix<f64>, drive: DVector<f64>) -> Result<Self>
    where
        F: Fn(f64) -> DMatrix<f64> + Send + Sync + 'static,
    {
        let dim = diffusion.nrows();
        even_dimension(dim)?;
        let probe = drift(0.0);
        ensure_square(&probe, dim)?;
        validate_diffusion(&diffusion, dim)?;
        validate_drive(&drive, dim)?;
        Ok(DynamicsSpec { drift: Drift::TimeDependent(Arc::new(drift)), diffusion, drive })
    }

    /// Problem generated by a quadratic Hamiltonian and an optional bath.
    pub fn from_hamiltonian(h: &DMatrix<f64>, alpha_h: &DVector<f64>, bath: Option<&Bath>) -> Result<Self> {
        let g = build_generators(h, alpha_h, bath, None)?;
        Self::new(g.drift, g.diffusion, g.drive)
    }

    pub fn n_modes(&self) -> usize {
        self.diffusion.nrows() / 2
    }

    pub fn drift(&self) -> &Drift {
        &self.drift
    }

    pub fn drift_at(&self, t: f64) -> Cow<'_, DMatrix<f64>> {
        self.drift.at(t)
    }

    pub fn diffusion(&self) -> &DMatrix<f64> {
        &self.diffusion
    }

    pub fn drive(&self) -> &DVector<f64> {
        &self.drive
    }
}

/// Linear coupling `C` (2N × 2M) of the system to `M` white-noise bath
/// modes with covariance `V_B`.
#[derive(Debug, Clone, PartialEq)]
pub struct Bath {
    coupling: DMatrix<f64>,
    covariance: DMatrix<f64>,
}

impl Bath {
    pub fn new(coupling: DMatrix<f64>, covariance: DMatrix<f64>) -> Result<Self> {
        even_dimension(coupling.nrows())?;
        let dim_b = coupling.ncols();
        even_dimension(dim_b)?;
        ensure_finite_matrix(&coupling)?;
        ensure_square(&covariance, dim_b)?;
        ensure_finite_matrix(&covariance)?;
        let nu = symplectic_spectrum(&covariance)?;
        let min = nu.last().copied().unwrap_or(1.0);
        if min < 1.0 - crate::state::PHYSICALITY_TOL {
            return Err(Error::Unphysical(min));
        }
        Ok(Bath { coupling, covariance })
    }

    /// Every mode damped at rate `γ` into its own thermal bath with
    /// occupation `nbar`.
    pub fn independent_thermal(n_modes: usize, gamma: f64, nbar: f64) -> Result<Self> {
        if !(gamma >= 0.0 && nbar >= 0.0 && gamma.is_finite() && nbar.is_finite()) {
            return Err(Error::InvalidParameter(format!("need γ ≥ 0 and n̄ ≥ 0, got γ = {gamma}, n̄ = {nbar}")));
        }
        let dim = 2 * n_modes;
        Self::new(DMatrix::identity(dim, dim) * gamma.sqrt(), DMatrix::identity(dim, dim) * (2.0 * nbar + 1.0))
    }

    pub fn coupling(&self) -> &DMatrix<f64> {
        &self.coupling
    }

    pub fn covariance(&self) -> &DMatrix<f64> {
        &self.covariance
    }

    pub fn n_bath_modes(&self) -> usize {
        self.coupling.ncols() / 2
    }
}

/// Generators of the unconditional and conditional dynamics.
#[derive(Debug, Clone, PartialEq)]
pub struct Generators {
    pub drift: DMatrix<f64>,
    pub diffusion: DMatrix<f64>,
    pub drive: DVector<f64>,
    /// Record matrix `𝒞` (2M × 2N): how the measured current depends on `R`.
    pub record: DMatrix<f64>,
    /// Correlation `Γ` (2M × 2N) between the record noise and the bath noise
    /// that drives the system.
    pub correlation: DMatrix<f64>,
}

/// `A = ΩH + ½ΩCΩCᵀ`, `D = ΩC V_B CᵀΩᵀ`, `b = Ωα_H`, and with a general-dyne
/// covariance `V_M` on the bath output, `𝒞 = X Ω Cᵀ`, `Γ = X V_B CᵀΩᵀ` with
/// `X = (V_B + V_M)^{-1/2}`.
pub fn build_generators(
    h: &DMatrix<f64>,
    alpha_h: &DVector<f64>,
    bath: Option<&Bath>,
    v_m: Option<&DMatrix<f64>>,
) -> Result<Generators> {
    let dim = h.nrows();
    even_dimension(dim)?;
    ensure_square(h, dim)?;
    ensure_finite_matrix(h)?;
    let asym = max_asymmetry(h);
    if asym > DIFFUSION_TOL * h.norm().max(1.0) {
        return Err(Error::NotSymmetric(asym));
    }
    validate_drive(alpha_h, dim)?;
    let omega = symplectic_form(dim / 2);
    let mut drift = &omega * h;
    let drive = &omega * alpha_h;
    let Some(bath) = bath else {
        return Ok(Generators {
            drift,
            diffusion: DMatrix::zeros(dim, dim),
            drive,
            record: DMatrix::zeros(0, dim),
            correlation: DMatrix::zeros(0, dim),
        });
    };
    let c = bath.coupling();
    if c.nrows() != dim {
        return Err(Error::DimensionMismatch { expected: dim, found: c.nrows() });
    }
    let omega_b = symplectic_form(bath.n_bath_modes());
    drift += (&omega * c * &omega_b * c.transpose()) * 0.5;
    let mut diffusion = &omega * c * bath.covariance() * c.transpose() * omega.transpose();
    symmetrize(&mut diffusion);
    let (record, correlation) = match v_m {
        Some(v_m) => record_matrices(bath, v_m)?,
        None => {
            let dim_b = c.ncols();
            (DMatrix::zeros(dim_b, dim), DMatrix::zeros(dim_b, dim))
        }
    };
    Ok(Generators { drift, diffusion, drive, record, correlation })
}

/// `(𝒞, Γ)` for a bath whose output is measured with covariance `V_M`.
pub(crate) fn record_matrices(bath: &Bath, v_m: &DMatrix<f64>) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
    let c = bath.coupling();
    let dim_b = c.ncols();
    ensure_square(v_m, dim_b)?;
    let omega = symplectic_form(c.nrows() / 2);
    let omega_b = symplectic_form(dim_b / 2);
    let x = inv_sqrtm_spd(&(bath.covariance() + v_m))?;
    let record = &x * omega_b * c.transpose();
    let correlation = &x * bath.covariance() * c.transpose() * omega.transpose();
    Ok((record, correlation))
}

/// How many RK4 steps are taken between consecutive output times.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum StepControl {
    /// `h ≤ min(Δt, 1 / (100 · rate))`, where the rate is `2‖A‖₂` plus the
    /// squared norms of any measurement terms.
    #[default]
    Auto,
    /// Exactly this many equal steps per output interval.
    Substeps(usize),
}

/// Equal-width substeps for each output interval.
#[derive(Debug, Clone)]
pub(crate) struct StepGrid {
    /// `(start time, step, count)` per interval.
    intervals: Vec<(f64, f64, usize)>,
}

impl StepGrid {
    pub(crate) fn new(spec: &DynamicsSpec, times: &[f64], control: StepControl, extra_rate: f64) -> Result<Self> {
        validate_times(times)?;
        let constant_rate = match spec.drift() {
            Drift::Constant(a) if control == StepControl::Auto => Some(2.0 * spectral_norm(a)),
            _ => None,
        };
        let mut intervals = Vec::with_capacity(times.len().saturating_sub(1));
        for w in times.windows(2) {
            let (t0, t1) = (w[0], w[1]);
            let span = t1 - t0;
            let count = match control {
                StepControl::Substeps(0) => {
                    return Err(Error::InvalidParameter("substep count must be positive".into()))
                }
                StepControl::Substeps(n) => n,
                StepControl::Auto => {
                    let drift_rate = constant_rate.unwrap_or_else(|| {
                        [t0, 0.5 * (t0 + t1), t1]
                            .iter()
                            .map(|&t| 2.0 * spectral_norm(&spec.drift_at(t)))
                            .fold(0.0, f64::max)
                    });
                    let steps = (span * STEPS_PER_RATE * (drift_rate + extra_rate)).ceil();
                    if !steps.is_finite() {
                        return Err(Error::Integration { t: t0, reason: "step rate is not finite".into() });
                    }
                    (steps as usize).max(1)
                }
            };
            intervals.push((t0, span / count as f64, count));
        }
        Ok(StepGrid { intervals })
    }

    pub(crate) fn intervals(&self) -> &[(f64, f64, usize)] {
        &self.intervals
    }

    pub(crate) fn total_steps(&self) -> usize {
        self.intervals.iter().map(|i| i.2).sum()
    }
}

fn validate_times(times: &[f64]) -> Result<()> {
    if times.iter().any(|t| !t.is_finite()) {
        return Err(Error::NonFinite);
    }
    for w in times.windows(2) {
        if w[1] <= w[0] {
            return Err(Error::InvalidParameter(format!(
                "times must be strictly increasing, got {} then {}",
                w[0], w[1]
            )));
        }
    }
    Ok(())
}

/// Drift at the three RK4 stage times of a step.
pub(crate) fn stage_drifts(spec: &DynamicsSpec, t: f64, h: f64) -> [Cow<'_, DMatrix<f64>>; 3] {
    [spec.drift_at(t), spec.drift_at(t + 0.5 * h), spec.drift_at(t + h)]
}

pub(crate) fn rk4_mean(a: &[Cow<'_, DMatrix<f64>>; 3], b: &DVector<f64>, r: &DVector<f64>, h: f64) -> DVector<f64> {
    let f = |a: &DMatrix<f64>, r: &DVector<f64>| a * r + b;
    let k1 = f(&a[0], r);
    let k2 = f(&a[1], &(r + &k1 * (0.5 * h)));
    let k3 = f(&a[1], &(r + &k2 * (0.5 * h)));
    let k4 = f(&a[2], &(r + &k3 * h));
    r + (k1 + (k2 + k3) * 2.0 + k4) * (h / 6.0)
}

/// Measurement back-action `(𝒞, Γ)` entering the Riccati equation.
pub(crate) type Riccati<'a> = Option<(&'a DMatrix<f64>, &'a DMatrix<f64>)>;

/// Innovation gain `V𝒞ᵀ + Γᵀ`.
pub(crate) fn innovation_gain(v: &DMatrix<f64>, record: &DMatrix<f64>, correlation: &DMatrix<f64>) -> DMatrix<f64> {
    v * record.transpose() + correlation.transpose()
}

fn cov_rhs(a: &DMatrix<f64>, d: &DMatrix<f64>, v: &DMatrix<f64>, riccati: Riccati<'_>) -> DMatrix<f64> {
    let av = a * v;
    let mut out = &av + av.transpose() + d;
    if let Some((record, correlation)) = riccati {
        let k = innovation_gain(v, record, correlation);
        out -= &k * k.transpose();
    }
    out
}

pub(crate) fn rk4_cov(
    a: &[Cow<'_, DMatrix<f64>>; 3],
    d: &DMatrix<f64>,
    v: &DMatrix<f64>,
    h: f64,
    riccati: Riccati<'_>,
) -> DMatrix<f64> {
    let k1 = cov_rhs(&a[0], d, v, riccati);
    let k2 = cov_rhs(&a[1], d, &(v + &k1 * (0.5 * h)), riccati);
    let k3 = cov_rhs(&a[1], d, &(v + &k2 * (0.5 * h)), riccati);
    let k4 = cov_rhs(&a[2], d, &(v + &k3 * h), riccati);
    let mut out = v + (k1 + (k2 + k3) * 2.0 + k4) * (h / 6.0);
    symmetrize(&mut out);
    out
}

fn check_finite(t: f64, r: &DVector<f64>, v: &DMatrix<f64>) -> Result<()> {
    if r.iter().chain(v.iter()).all(|x| x.is_finite()) {
        Ok(())
    } else {
        Err(Error::Integration { t, reason: "moments are no longer finite".into() })
    }
}

pub(crate) fn check_physical(t: f64, v: &DMatrix<f64>) -> Result<()> {
    let nu = symplectic_spectrum(v).map_err(|e| Error::Integration { t, reason: e.to_string() })?;
    let min = nu.last().copied().unwrap_or(1.0);
    if min < 1.0 - INTEGRATION_PHYSICALITY_TOL {
        return Err(Error::Integration { t, reason: format!("state became unphysical, ν_min = {min}") });
    }
    Ok(())
}

fn check_initial(spec: &DynamicsSpec, initial: &GaussianState) -> Result<()> {
    if initial.n_modes() != spec.n_modes() {
        return Err(Error::DimensionMismatch { expected: 2 * spec.n_modes(), found: 2 * initial.n_modes() });
    }
    Ok(())
}

/// Integrates the moments and hands each output-time pair `(R, V)` to
/// `visit` without storing them or checking physicality.
///
/// The first visit is the initial condition at `times[0]`.
pub fn propagate_moments<F>(
    spec: &DynamicsSpec,
    mean: &DVector<f64>,
    cov: &DMatrix<f64>,
    times: &[f64],
    control: StepControl,
    mut visit: F,
) -> Result<()>
where
    F: FnMut(usize, f64, &DVector<f64>, &DMatrix<f64>) -> Result<()>,
{
    let dim = 2 * spec.n_modes();
    validate_drive(mean, dim)?;
    ensure_square(cov, dim)?;
    let grid = StepGrid::new(spec, times, control, 0.0)?;
    let Some(&t_first) = times.first() else {
        return Ok(());
    };
    let (mut r, mut v) = (mean.clone(), cov.clone());
    visit(0, t_first, &r, &v)?;
    for (k, &(t0, h, count)) in grid.intervals().iter().enumerate() {
        for step in 0..count {
            let a = stage_drifts(spec, t0 + step as f64 * h, h);
            r = rk4_mean(&a, spec.drive(), &r, h);
            v = rk4_cov(&a, spec.diffusion(), &v, h, None);
        }
        check_finite(times[k + 1], &r, &v)?;
        visit(k + 1, times[k + 1], &r, &v)?;
    }
    Ok(())
}

/// States of a trajectory at increasing times.
#[derive(Debug, Clone, PartialEq)]
pub struct StateSeries {
    times: Vec<f64>,
    states: Vec<GaussianState>,
}

impl StateSeries {
    pub fn new(times: Vec<f64>, states: Vec<GaussianState>) -> Result<Self> {
        if times.len() != states.len() {
            return Err(Error::DimensionMismatch { expected: times.len(), found: states.len() });
        }
        validate_times(&times)?;
        Ok(StateSeries { times, states })
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn states(&self) -> &[GaussianState] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn last(&self) -> Option<&GaussianState> {
        self.states.last()
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, &GaussianState)> {
        self.times.iter().copied().zip(&self.states)
    }

    /// CSV with columns `t, R_1..R_2N, V_11..V_2N2N` (V row-major).
    pub fn write_csv<W: Write>(&self, mut out: W, n_modes: usize) -> io::Result<()> {
        writeln!(out, "{}", series_header(2 * n_modes))?;
        for (t, s) in self.iter() {
            let mut row = vec![t.to_string()];
            row.extend(s.mean().iter().map(|x| x.to_string()));
            row.extend(s.cov().transpose().iter().map(|x| x.to_string()));
            writeln!(out, "{}", row.join(","))?;
        }
        Ok(())
    }
}

/// Covariance columns use `V_ij`; with ten or more quadratures the indices
/// are separated (`V_i_j`) so the names stay unambiguous.
pub fn series_header(dim: usize) -> String {
    let sep = if dim >= 10 { "_" } else { "" };
    let mut cols = vec!["t".to_string()];
    cols.extend((1..=dim).map(|i| format!("R_{i}")));
    for i in 1..=dim {
        for j in 1..=dim {
            cols.push(format!("V_{i}{sep}{j}"));
        }
    }
    cols.join(",")
}

/// Unconditional evolution with automatic substepping.
pub fn unconditional_dynamics(spec: &DynamicsSpec, initial: &GaussianState, times: &[f64]) -> Result<StateSeries> {
    unconditional_dynamics_with(spec, initial, times, StepControl::Auto)
}

pub fn unconditional_dynamics_with(
    spec: &DynamicsSpec,
    initial: &GaussianState,
    times: &[f64],
    control: StepControl,
) -> Result<StateSeries> {
    check_initial(spec, initial)?;
    let mut states = Vec::with_capacity(times.len());
    propagate_moments(spec, initial.mean(), initial.cov(), times, control, |_, t, r, v| {
        check_physical(t, v)?;
        states.push(GaussianState::from_parts(r.clone(), v.clone()));
        Ok(())
    })?;
    Ok(StateSeries { times: times.to_vec(), states })
}

/// Fixed point of the unconditional dynamics for a Hurwitz drift.
pub fn steady_state(spec: &DynamicsSpec) -> Result<GaussianState> {
    let Drift::Constant(a) = spec.drift() else {
        return Err(Error::InvalidParameter("steady state needs a time-independent drift".into()));
    };
    let abscissa = spectral_abscissa(a);
    if abscissa >= -HURWITZ_TOL {
        return Err(Error::NotHurwitz(abscissa));
    }
    let v = solve_lyapunov(a, spec.diffusion())?;
    let r = -a.clone().lu().solve(spec.drive()).ok_or(Error::Singular("drift matrix"))?;
    GaussianState::new(r, v)
}
