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

//! The Gaussian state type and the operations that transform it.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::linalg::{ensure_finite_matrix, max_asymmetry, symmetrize, symplectic_form, symplectic_spectrum};
use crate::symplectic::{self, quadrature_indices, SymplecticOp};

/// Tolerance for symmetry and uncertainty-relation checks on construction.
pub const PHYSICALITY_TOL: f64 = 1e-8;

/// An `N`-mode Gaussian state: mean quadratures `R` ordered
/// `(x₁, p₁, x₂, p₂, …)` and covariance `V`, in units where the vacuum has
/// `V = I`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianState {
    mean: DVector<f64>,
    cov: DMatrix<f64>,
}

pub(crate) fn check_modes(modes: &[usize], n_modes: usize) -> Result<()> {
    for (i, &m) in modes.iter().enumerate() {
        if m >= n_modes {
            return Err(Error::ModeOutOfRange { mode: m, n_modes });
        }
        if modes[..i].contains(&m) {
            return Err(Error::DuplicateMode(m));
        }
    }
    Ok(())
}

fn quadratures(alpha: Complex64) -> [f64; 2] {
    [2.0 * alpha.re, 2.0 * alpha.im]
}

impl GaussianState {
    /// Builds a state from its moments. `cov` is symmetrized after the
    /// asymmetry check; the uncertainty relation is enforced.
    pub fn new(mean: DVector<f64>, cov: DMatrix<f64>) -> Result<Self> {
        let dim = mean.len();
        if dim == 0 {
            return Err(Error::NoModes);
        }
        if dim % 2 != 0 {
            return Err(Error::DimensionMismatch { expected: dim + 1, found: dim });
        }
        crate::linalg::ensure_square(&cov, dim)?;
        ensure_finite_matrix(&cov)?;
        if mean.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite);
        }
        let asym = max_asymmetry(&cov);
        if asym > PHYSICALITY_TOL * cov.amax().max(1.0) {
            return Err(Error::NotSymmetric(asym));
        }
        let mut cov = cov;
        symmetrize(&mut cov);
        let state = Self { mean, cov };
        let min = state.min_symplectic_eigenvalue().map_err(|_| Error::Unphysical(f64::NAN))?;
        if min < 1.0 - PHYSICALITY_TOL {
            return Err(Error::Unphysical(min));
        }
        Ok(state)
    }

    /// Skips the uncertainty check; callers guarantee physicality up to
    /// their own tolerance.
    pub(crate) fn from_parts(mean: DVector<f64>, mut cov: DMatrix<f64>) -> Self {
        symmetrize(&mut cov);
        Self { mean, cov }
    }

    pub fn vacuum(n_modes: usize) -> Result<Self> {
        if n_modes == 0 {
            return Err(Error::NoModes);
        }
        Ok(Self { mean: DVector::zeros(2 * n_modes), cov: DMatrix::identity(2 * n_modes, 2 * n_modes) })
    }

    pub fn coherent(alpha: Complex64) -> Self {
        Self { mean: DVector::from_row_slice(&quadratures(alpha)), cov: DMatrix::identity(2, 2) }
    }

    pub fn thermal(nbar: f64) -> Result<Self> {
        if !(nbar >= 0.0) || !nbar.is_finite() {
            return Err(Error::InvalidParameter(format!("mean occupation must be >= 0, got {nbar}")));
        }
        Ok(Self { mean: DVector::zeros(2), cov: DMatrix::identity(2, 2) * (2.0 * nbar + 1.0) })
    }

    pub fn squeezed(r: f64, phi: f64) -> Self {
        let s = symplectic::squeezer(r, phi);
        Self { mean: DVector::zeros(2), cov: &s * s.transpose() }
    }

    pub fn n_modes(&self) -> usize {
        self.mean.len() / 2
    }

    /// Mean quadrature vector `R`.
    pub fn mean(&self) -> &DVector<f64> {
        &self.mean
    }

    /// Covariance matrix `V`.
    pub fn cov(&self) -> &DMatrix<f64> {
        &self.cov
    }

    pub fn symplectic_form(&self) -> DMatrix<f64> {
        symplectic_form(self.n_modes())
    }

    pub fn min_symplectic_eigenvalue(&self) -> Result<f64> {
        let nu = symplectic_spectrum(&self.cov)?;
        Ok(nu.last().copied().unwrap_or(f64::INFINITY))
    }

    pub fn is_physical(&self, tol: f64) -> bool {
        self.min_symplectic_eigenvalue().map(|m| m >= 1.0 - tol).unwrap_or(false)
    }

    /// Direct sum of the states in order.
    pub fn tensor_product(states: &[GaussianState]) -> Result<Self> {
        if states.is_empty() {
            return Err(Error::NoModes);
        }
        let dim: usize = states.iter().map(|s| s.mean.len()).sum();
        let mut mean = DVector::zeros(dim);
        let mut cov = DMatrix::zeros(dim, dim);
        let mut offset = 0;
        for s in states {
            let d = s.mean.len();
            mean.rows_mut(offset, d).copy_from(&s.mean);
            cov.view_mut((offset, offset), (d, d)).copy_from(&s.cov);
            offset += d;
        }
        Ok(Self { mean, cov })
    }

    pub fn tensor(&self, other: &GaussianState) -> Self {
        Self::tensor_product(&[self.clone(), other.clone()]).expect("two non-empty states")
    }

    /// Reduced state on `keep_modes`, in the order given.
    pub fn only_modes(&self, keep_modes: &[usize]) -> Result<Self> {
        check_modes(keep_modes, self.n_modes())?;
        if keep_modes.is_empty() {
            return Err(Error::AllModesRemoved);
        }
        let idx = quadrature_indices(keep_modes);
        Ok(Self {
            mean: self.mean.select_rows(idx.iter()),
            cov: self.cov.select_rows(idx.iter()).select_columns(idx.iter()),
        })
    }

    /// Traces out `drop_modes`; remaining modes keep their relative order.
    pub fn partial_trace(&self, drop_modes: &[usize]) -> Result<Self> {
        check_modes(drop_modes, self.n_modes())?;
        let keep: Vec<usize> = (0..self.n_modes()).filter(|m| !drop_modes.contains(m)).collect();
        self.only_modes(&keep)
    }

    /// Applies a local symplectic block to `modes`: rows then columns of `V`.
    fn apply_local(&mut self, modes: &[usize], block: &DMatrix<f64>) {
        let idx = quadrature_indices(modes);
        let sub = block * self.mean.select_rows(idx.iter());
        for (a, &i) in idx.iter().enumerate() {
            self.mean[i] = sub[a];
        }
        let rows = block * self.cov.select_rows(idx.iter());
        for (a, &i) in idx.iter().enumerate() {
            self.cov.row_mut(i).copy_from(&rows.row(a));
        }
        let cols = self.cov.select_columns(idx.iter()) * block.transpose();
        for (a, &i) in idx.iter().enumerate() {
            self.cov.column_mut(i).copy_from(&cols.column(a));
        }
        symmetrize_block(&mut self.cov, &idx);
    }

    fn check_pair(&self, j: usize, k: usize) -> Result<()> {
        check_modes(&[j, k], self.n_modes())
    }

    pub fn displace(&mut self, mode: usize, alpha: Complex64) -> Result<&mut Self> {
        check_modes(&[mode], self.n_modes())?;
        let [dx, dp] = quadratures(alpha);
        self.mean[2 * mode] += dx;
        self.mean[2 * mode + 1] += dp;
        Ok(self)
    }

    pub fn rotate(&mut self, mode: usize, theta: f64) -> Result<&mut Self> {
        check_modes(&[mode], self.n_modes())?;
        self.apply_local(&[mode], &symplectic::rotation(theta));
        Ok(self)
    }

    pub fn squeeze(&mut self, mode: usize, r: f64, phi: f64) -> Result<&mut Self> {
        check_modes(&[mode], self.n_modes())?;
        self.apply_local(&[mode], &symplectic::squeezer(r, phi));
        Ok(self)
    }

    pub fn beam_splitter(&mut self, j: usize, k: usize, tau: f64) -> Result<&mut Self> {
        self.check_pair(j, k)?;
        check_transmission(tau)?;
        self.apply_local(&[j, k], &symplectic::beam_splitter(tau));
        Ok(self)
    }

    pub fn two_mode_squeezing(&mut self, j: usize, k: usize, r: f64) -> Result<&mut Self> {
        self.check_pair(j, k)?;
        self.apply_local(&[j, k], &symplectic::two_mode_squeezer(r));
        Ok(self)
    }

    /// `R -> S R + d`, `V -> S V Sᵀ`.
    pub fn apply_symplectic(&mut self, op: &SymplecticOp) -> Result<&mut Self> {
        if op.n_modes() != self.n_modes() {
            return Err(Error::DimensionMismatch { expected: 2 * self.n_modes(), found: 2 * op.n_modes() });
        }
        let s = op.matrix();
        self.mean = s * &self.mean + op.displacement();
        self.cov = s * &self.cov * s.transpose();
        symmetrize(&mut self.cov);
        Ok(self)
    }

    /// Mixes `mode` with a vacuum ancilla on a beam splitter of
    /// transmissivity `tau` and discards the ancilla.
    pub fn loss_ancilla(&mut self, mode: usize, tau: f64) -> Result<&mut Self> {
        check_modes(&[mode], self.n_modes())?;
        check_transmission(tau)?;
        let n = self.n_modes();
        let mut joint = self.tensor(&GaussianState::vacuum(1)?);
        joint.beam_splitter(mode, n, tau)?;
        *self = joint.partial_trace(&[n])?;
        Ok(self)
    }

    /// Serializes as `{"n_modes": N, "R": [...], "V": [[...]]}` with every
    /// number printed to 17 significant digits.
    pub fn to_json(&self) -> String {
        let num = |x: f64| format!("{x:.16e}");
        let r: Vec<String> = self.mean.iter().map(|&x| num(x)).collect();
        let rows: Vec<String> = self
            .cov
            .row_iter()
            .map(|row| format!("[{}]", row.iter().map(|&x| num(x)).collect::<Vec<_>>().join(", ")))
            .collect();
        format!("{{\"n_modes\": {}, \"R\": [{}], \"V\": [{}]}}", self.n_modes(), r.join(", "), rows.join(", "))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        #[derive(Deserialize)]
        struct Record {
            n_modes: usize,
            #[serde(rename = "R")]
            mean: Vec<f64>,
            #[serde(rename = "V")]
            cov: Vec<Vec<f64>>,
        }
        let rec: Record = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let dim = 2 * rec.n_modes;
        if rec.mean.len() != dim || rec.cov.len() != dim || rec.cov.iter().any(|row| row.len() != dim) {
            return Err(Error::Parse(format!("expected {dim} quadratures for {} modes", rec.n_modes)));
        }
        let cov = DMatrix::from_row_iterator(dim, dim, rec.cov.into_iter().flatten());
        Self::new(DVector::from_vec(rec.mean), cov)
    }
}

fn check_transmission(tau: f64) -> Result<()> {
    if (0.0..=1.0).contains(&tau) {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("transmissivity must lie in [0, 1], got {tau}")))
    }
}

fn symmetrize_block(cov: &mut DMatrix<f64>, idx: &[usize]) {
    let n = cov.nrows();
    for &i in idx {
        for j in 0..n {
            let avg = 0.5 * (cov[(i, j)] + cov[(j, i)]);
            cov[(i, j)] = avg;
            cov[(j, i)] = avg;
        }
    }
}
