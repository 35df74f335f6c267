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

//! Wigner and Husimi Q functions of single-mode states on a grid.

use std::io::{self, Write};

use nalgebra::{DMatrix, Matrix2, Vector2};

use crate::error::{Error, Result};
use crate::state::GaussianState;

/// Samples of a phase-space distribution; `values[(i, j)]` is the value at
/// `(x_axis[i], p_axis[j])`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseSpaceGrid {
    pub x_axis: Vec<f64>,
    pub p_axis: Vec<f64>,
    pub values: DMatrix<f64>,
}

pub fn linspace(start: f64, stop: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![start],
        _ => (0..n).map(|i| start + (stop - start) * i as f64 / (n - 1) as f64).collect(),
    }
}

impl PhaseSpaceGrid {
    /// Riemann sum assuming uniform axis spacing.
    pub fn integral(&self) -> f64 {
        let step = |axis: &[f64]| if axis.len() > 1 { axis[1] - axis[0] } else { 1.0 };
        self.values.sum() * step(&self.x_axis) * step(&self.p_axis)
    }

    /// Grid point with the largest value.
    pub fn argmax(&self) -> (f64, f64) {
        let (mut best, mut at) = (f64::NEG_INFINITY, (0, 0));
        for i in 0..self.values.nrows() {
            for j in 0..self.values.ncols() {
                if self.values[(i, j)] > best {
                    best = self.values[(i, j)];
                    at = (i, j);
                }
            }
        }
        (self.x_axis[at.0], self.p_axis[at.1])
    }

    /// CSV with header `x,p,value`, x-major.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "x,p,value")?;
        for (i, x) in self.x_axis.iter().enumerate() {
            for (j, p) in self.p_axis.iter().enumerate() {
                writeln!(out, "{x},{p},{}", self.values[(i, j)])?;
            }
        }
        Ok(())
    }
}

fn gaussian_grid(state: &GaussianState, cov: Matrix2<f64>, x_axis: &[f64], p_axis: &[f64]) -> Result<PhaseSpaceGrid> {
    let inv = cov.try_inverse().ok_or(Error::Singular("phase-space covariance"))?;
    let norm = 1.0 / (2.0 * std::f64::consts::PI * cov.determinant().sqrt());
    let center = Vector2::new(state.mean()[0], state.mean()[1]);
    let values = DMatrix::from_fn(x_axis.len(), p_axis.len(), |i, j| {
        let d = Vector2::new(x_axis[i], p_axis[j]) - center;
        norm * (-0.5 * d.dot(&(inv * d))).exp()
    });
    Ok(PhaseSpaceGrid { x_axis: x_axis.to_vec(), p_axis: p_axis.to_vec(), values })
}

fn single_mode_cov(state: &GaussianState) -> Result<Matrix2<f64>> {
    if state.n_modes() != 1 {
        return Err(Error::InvalidParameter(format!(
            "phase-space functions need a single mode, state has {}",
            state.n_modes()
        )));
    }
    let v = state.cov();
    Ok(Matrix2::new(v[(0, 0)], v[(0, 1)], v[(1, 0)], v[(1, 1)]))
}

/// `W(x, p) = exp(−½ δᵀV⁻¹δ) / (2π sqrt(det V))`.
pub fn wigner(state: &GaussianState, x_axis: &[f64], p_axis: &[f64]) -> Result<PhaseSpaceGrid> {
    let cov = single_mode_cov(state)?;
    gaussian_grid(state, cov, x_axis, p_axis)
}

/// Husimi Q function: the Wigner function smoothed by a vacuum-width kernel,
/// a Gaussian with covariance `V + I`.
pub fn q_function(state: &GaussianState, x_axis: &[f64], p_axis: &[f64]) -> Result<PhaseSpaceGrid> {
    let cov = single_mode_cov(state)? + Matrix2::identity();
    gaussian_grid(state, cov, x_axis, p_axis)
}
