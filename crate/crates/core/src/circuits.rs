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

//! Random Gaussian circuits on a one-dimensional lattice of modes and the
//! spatial entanglement-entropy profile they build up.

use std::f64::consts::PI;
use std::io::{self, Write};

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::observables::von_neumann_entropy;
use crate::rng::stream;
use crate::state::GaussianState;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GateKind {
    Identity,
    Rotation,
    Displacement,
    Squeezing,
    TwoModeSqueezing,
    BeamSplitter,
}

impl GateKind {
    pub const ALL: [GateKind; 6] = [
        GateKind::Identity,
        GateKind::Rotation,
        GateKind::Displacement,
        GateKind::Squeezing,
        GateKind::TwoModeSqueezing,
        GateKind::BeamSplitter,
    ];

    pub const SINGLE_MODE: [GateKind; 4] =
        [GateKind::Identity, GateKind::Rotation, GateKind::Displacement, GateKind::Squeezing];

    pub fn is_two_mode(self) -> bool {
        matches!(self, GateKind::TwoModeSqueezing | GateKind::BeamSplitter)
    }

    pub fn name(self) -> &'static str {
        match self {
            GateKind::Identity => "identity",
            GateKind::Rotation => "rotation",
            GateKind::Displacement => "displacement",
            GateKind::Squeezing => "squeezing",
            GateKind::TwoModeSqueezing => "two_mode_squeezing",
            GateKind::BeamSplitter => "beam_splitter",
        }
    }
}

/// An elementary gate. Two-mode gates act on the pair `(first, first + 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Gate {
    Identity {
        mode: usize,
    },
    Rotation {
        mode: usize,
        theta: f64,
    },
    /// Real displacement amplitude.
    Displacement {
        mode: usize,
        alpha: f64,
    },
    Squeezing {
        mode: usize,
        r: f64,
    },
    TwoModeSqueezing {
        first: usize,
        r: f64,
    },
    BeamSplitter {
        first: usize,
        tau: f64,
    },
}

impl Gate {
    pub fn kind(&self) -> GateKind {
        match self {
            Gate::Identity { .. } => GateKind::Identity,
            Gate::Rotation { .. } => GateKind::Rotation,
            Gate::Displacement { .. } => GateKind::Displacement,
            Gate::Squeezing { .. } => GateKind::Squeezing,
            Gate::TwoModeSqueezing { .. } => GateKind::TwoModeSqueezing,
            Gate::BeamSplitter { .. } => GateKind::BeamSplitter,
        }
    }

    /// Modes the gate acts on.
    pub fn targets(&self) -> Vec<usize> {
        match *self {
            Gate::Identity { mode }
            | Gate::Rotation { mode, .. }
            | Gate::Displacement { mode, .. }
            | Gate::Squeezing { mode, .. } => vec![mode],
            Gate::TwoModeSqueezing { first, .. } | Gate::BeamSplitter { first, .. } => vec![first, first + 1],
        }
    }

    pub fn apply(&self, state: &mut GaussianState) -> Result<()> {
        match *self {
            Gate::Identity { mode } => {
                if mode >= state.n_modes() {
                    return Err(Error::ModeOutOfRange { mode, n_modes: state.n_modes() });
                }
            }
            Gate::Rotation { mode, theta } => {
                state.rotate(mode, theta)?;
            }
            Gate::Displacement { mode, alpha } => {
                state.displace(mode, Complex64::new(alpha, 0.0))?;
            }
            Gate::Squeezing { mode, r } => {
                state.squeeze(mode, r, 0.0)?;
            }
            Gate::TwoModeSqueezing { first, r } => {
                state.two_mode_squeezing(first, first + 1, r)?;
            }
            Gate::BeamSplitter { first, tau } => {
                state.beam_splitter(first, first + 1, tau)?;
            }
        }
        Ok(())
    }
}

/// Gates grouped by turn; within a turn every mode is touched at most once.
#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    n_modes: usize,
    turns: Vec<Vec<Gate>>,
}

impl Circuit {
    pub fn new(n_modes: usize, turns: Vec<Vec<Gate>>) -> Result<Self> {
        for turn in &turns {
            let mut used = vec![false; n_modes];
            for gate in turn {
                for m in gate.targets() {
                    if m >= n_modes {
                        return Err(Error::ModeOutOfRange { mode: m, n_modes });
                    }
                    if used[m] {
                        return Err(Error::DuplicateMode(m));
                    }
                    used[m] = true;
                }
            }
        }
        Ok(Circuit { n_modes, turns })
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn n_turns(&self) -> usize {
        self.turns.len()
    }

    pub fn turns(&self) -> &[Vec<Gate>] {
        &self.turns
    }

    pub fn gates(&self) -> impl Iterator<Item = &Gate> {
        self.turns.iter().flatten()
    }

    pub fn gate_count(&self) -> usize {
        self.turns.iter().map(Vec::len).sum()
    }
}

/// Parameter ranges for random gates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircuitParams {
    /// Squeezing amplitudes (single- and two-mode) are uniform on `[0, r_max]`.
    pub r_max: f64,
    pub alpha_mean: f64,
    pub alpha_std: f64,
}

impl Default for CircuitParams {
    fn default() -> Self {
        CircuitParams { r_max: 0.5, alpha_mean: 0.1, alpha_std: 0.01 }
    }
}

/// Draws `turns` left-to-right sweeps of uniformly chosen gates. A two-mode
/// gate drawn at `x` also consumes `x + 1`; the last mode of a sweep can
/// only receive a single-mode gate. Angles are uniform on `[0, 2π)`,
/// transmissivities on `[0, 1]`.
pub fn random_circuit<R: Rng + ?Sized>(
    n_modes: usize,
    turns: usize,
    params: &CircuitParams,
    rng: &mut R,
) -> Result<Circuit> {
    if n_modes < 2 {
        return Err(Error::InvalidParameter(format!("random circuits need at least 2 modes, got {n_modes}")));
    }
    if turns == 0 {
        return Err(Error::InvalidParameter("random circuits need at least one turn".into()));
    }
    if !(params.r_max >= 0.0 && params.r_max.is_finite()) {
        return Err(Error::InvalidParameter(format!("r_max must be finite and non-negative, got {}", params.r_max)));
    }
    let alpha = Normal::new(params.alpha_mean, params.alpha_std)
        .map_err(|e| Error::InvalidParameter(format!("displacement distribution: {e}")))?;
    let mut out = Vec::with_capacity(turns);
    for _ in 0..turns {
        let mut turn = Vec::with_capacity(n_modes);
        let mut x = 0;
        while x < n_modes {
            let kind = if x + 1 < n_modes {
                GateKind::ALL[rng.random_range(0..GateKind::ALL.len())]
            } else {
                GateKind::SINGLE_MODE[rng.random_range(0..GateKind::SINGLE_MODE.len())]
            };
            let gate = match kind {
                GateKind::Identity => Gate::Identity { mode: x },
                GateKind::Rotation => Gate::Rotation { mode: x, theta: rng.random_range(0.0..2.0 * PI) },
                GateKind::Displacement => Gate::Displacement { mode: x, alpha: alpha.sample(rng) },
                GateKind::Squeezing => Gate::Squeezing { mode: x, r: rng.random_range(0.0..=params.r_max) },
                GateKind::TwoModeSqueezing => {
                    Gate::TwoModeSqueezing { first: x, r: rng.random_range(0.0..=params.r_max) }
                }
                GateKind::BeamSplitter => Gate::BeamSplitter { first: x, tau: rng.random_range(0.0..=1.0) },
            };
            x += if kind.is_two_mode() { 2 } else { 1 };
            turn.push(gate);
        }
        out.push(turn);
    }
    Ok(Circuit { n_modes, turns: out })
}

pub fn apply_circuit(initial: &GaussianState, circuit: &Circuit) -> Result<GaussianState> {
    if initial.n_modes() != circuit.n_modes() {
        return Err(Error::DimensionMismatch { expected: 2 * circuit.n_modes(), found: 2 * initial.n_modes() });
    }
    let mut state = initial.clone();
    for gate in circuit.gates() {
        gate.apply(&mut state)?;
    }
    Ok(state)
}

/// `S[x]`: entropy of the first `x` modes, for `x = 0..=N`.
#[derive(Debug, Clone, PartialEq)]
pub struct EntropyProfile {
    pub values: Vec<f64>,
}

impl EntropyProfile {
    /// CSV with header `x,S_mean`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "x,S_mean")?;
        for (x, s) in self.values.iter().enumerate() {
            writeln!(out, "{x},{s}")?;
        }
        Ok(())
    }
}

pub fn entropy_profile(state: &GaussianState) -> Result<EntropyProfile> {
    let n = state.n_modes();
    let mut values = Vec::with_capacity(n + 1);
    values.push(0.0);
    for x in 1..=n {
        let modes: Vec<usize> = (0..x).collect();
        values.push(von_neumann_entropy(&state.only_modes(&modes)?)?);
    }
    Ok(EntropyProfile { values })
}

/// `S̄[x]`: entropy of modes `x..N`, with `S̄[N] = 0`.
pub fn complement_profile(state: &GaussianState) -> Result<EntropyProfile> {
    let n = state.n_modes();
    let mut values = Vec::with_capacity(n + 1);
    for x in 0..n {
        let modes: Vec<usize> = (x..n).collect();
        values.push(von_neumann_entropy(&state.only_modes(&modes)?)?);
    }
    values.push(0.0);
    Ok(EntropyProfile { values })
}

/// Mean and spread of entropy profiles over random circuits applied to the
/// vacuum.
#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleProfile {
    pub mean: Vec<f64>,
    /// Sample standard deviation (zero for a single realization).
    pub std: Vec<f64>,
    pub n_realizations: usize,
    /// Number of gates in each realization.
    pub gate_counts: Vec<usize>,
    /// Profile of each realization, in realization order.
    pub profiles: Vec<Vec<f64>>,
}

impl EnsembleProfile {
    pub fn standard_error(&self) -> Vec<f64> {
        let n = self.n_realizations as f64;
        self.std.iter().map(|s| s / n.sqrt()).collect()
    }

    /// Mean over realizations of the profile averaged across `sites`, with
    /// its standard error. Averaging within each realization first keeps the
    /// correlation between neighbouring sites in the error estimate.
    pub fn region_mean(&self, sites: std::ops::RangeInclusive<usize>) -> (f64, f64) {
        let per_run: Vec<f64> =
            self.profiles.iter().map(|p| p[sites.clone()].iter().sum::<f64>() / sites.clone().count() as f64).collect();
        let n = per_run.len() as f64;
        let mean = per_run.iter().sum::<f64>() / n;
        if per_run.len() < 2 {
            return (mean, 0.0);
        }
        let var = per_run.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
        (mean, (var / n).sqrt())
    }

    pub fn as_profile(&self) -> EntropyProfile {
        EntropyProfile { values: self.mean.clone() }
    }

    /// CSV with header `x,S_mean,S_std`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "x,S_mean,S_std")?;
        for (x, (m, s)) in self.mean.iter().zip(&self.std).enumerate() {
            writeln!(out, "{x},{m},{s}")?;
        }
        Ok(())
    }
}

/// Realization `i` draws its circuit from stream `i` of `seed`; profiles are
/// summed in realization order, so the result does not depend on threading.
pub fn ensemble_profile(
    n_modes: usize,
    turns: usize,
    params: &CircuitParams,
    n_realizations: usize,
    seed: u64,
) -> Result<EnsembleProfile> {
    if n_realizations == 0 {
        return Err(Error::InvalidParameter("need at least one realization".into()));
    }
    let vacuum = GaussianState::vacuum(n_modes)?;
    let runs = (0..n_realizations)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream(seed, i as u64);
            let circuit = random_circuit(n_modes, turns, params, &mut rng)?;
            let profile = entropy_profile(&apply_circuit(&vacuum, &circuit)?)?;
            Ok((profile.values, circuit.gate_count()))
        })
        .collect::<Result<Vec<_>>>()?;
    let n = n_realizations as f64;
    let mut mean = vec![0.0; n_modes + 1];
    for (values, _) in &runs {
        for (m, v) in mean.iter_mut().zip(values) {
            *m += v;
        }
    }
    mean.iter_mut().for_each(|m| *m /= n);
    let std = if n_realizations < 2 {
        vec![0.0; n_modes + 1]
    } else {
        let mut var = vec![0.0; n_modes + 1];
        for (values, _) in &runs {
            for ((acc, v), m) in var.iter_mut().zip(values).zip(&mean) {
                *acc += (v - m) * (v - m);
            }
        }
        var.into_iter().map(|s| (s / (n - 1.0)).sqrt()).collect()
    };
    let (profiles, gate_counts) = runs.into_iter().unzip();
    Ok(EnsembleProfile { mean, std, n_realizations, gate_counts, profiles })
}
