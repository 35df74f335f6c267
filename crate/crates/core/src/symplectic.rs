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

//! Symplectic representation of Gaussian unitaries.
//!
//! A Gaussian unitary acts on the quadrature vector as the affine map
//! `r -> S r + d` with `S Ω Sᵀ = Ω`. The elementary gates below return the
//! local `2x2` or `4x4` block of `S`; [`SymplecticOp`] holds full-size maps.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::linalg::{ensure_finite_matrix, symplectic_form};

/// Frobenius norm of `S Ω Sᵀ - Ω`.
pub fn symplectic_residual(s: &DMatrix<f64>) -> f64 {
    let omega = symplectic_form(s.nrows() / 2);
    (s * &omega * s.transpose() - omega).norm()
}

#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticOp {
    matrix: DMatrix<f64>,
    displacement: DVector<f64>,
}

impl SymplecticOp {
    /// Validates that `matrix` is `2N x 2N` and symplectic within `1e-10`
    /// (relative to its squared norm when that exceeds one).
    pub fn new(matrix: DMatrix<f64>, displacement: DVector<f64>) -> Result<Self> {
        let dim = matrix.nrows();
        if dim == 0 || dim % 2 != 0 {
            return Err(Error::DimensionMismatch { expected: dim + 2 - dim % 2, found: dim });
        }
        if matrix.ncols() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: matrix.ncols() });
        }
        if displacement.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: displacement.len() });
        }
        ensure_finite_matrix(&matrix)?;
        if displacement.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite);
        }
        let residual = symplectic_residual(&matrix);
        if residual > 1e-10 * matrix.norm_squared().max(1.0) {
            return Err(Error::NotSymplectic(residual));
        }
        Ok(Self { matrix, displacement })
    }

    pub fn linear(matrix: DMatrix<f64>) -> Result<Self> {
        let dim = matrix.nrows();
        Self::new(matrix, DVector::zeros(dim))
    }

    pub fn identity(n_modes: usize) -> Self {
        Self { matrix: DMatrix::identity(2 * n_modes, 2 * n_modes), displacement: DVector::zeros(2 * n_modes) }
    }

    /// Embeds a local block acting on `modes` (in that order) into an
    /// `n_modes` identity.
    pub fn embed(local: &DMatrix<f64>, modes: &[usize], n_modes: usize) -> Result<Self> {
        crate::state::check_modes(modes, n_modes)?;
        if local.nrows() != 2 * modes.len() || local.ncols() != 2 * modes.len() {
            return Err(Error::DimensionMismatch { expected: 2 * modes.len(), found: local.nrows() });
        }
        let idx = quadrature_indices(modes);
        let mut matrix = DMatrix::identity(2 * n_modes, 2 * n_modes);
        for (a, &i) in idx.iter().enumerate() {
            for (b, &j) in idx.iter().enumerate() {
                matrix[(i, j)] = local[(a, b)];
            }
        }
        Self::linear(matrix)
    }

    pub fn n_modes(&self) -> usize {
        self.matrix.nrows() / 2
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn displacement(&self) -> &DVector<f64> {
        &self.displacement
    }

    /// `self ∘ first`: apply `first`, then `self`.
    pub fn after(&self, first: &SymplecticOp) -> Result<SymplecticOp> {
        if first.matrix.nrows() != self.matrix.nrows() {
            return Err(Error::DimensionMismatch { expected: self.matrix.nrows(), found: first.matrix.nrows() });
        }
        Ok(SymplecticOp {
            matrix: &self.matrix * &first.matrix,
            displacement: &self.matrix * &first.displacement + &self.displacement,
        })
    }
}

pub(crate) fn quadrature_indices(modes: &[usize]) -> Vec<usize> {
    modes.iter().flat_map(|&m| [2 * m, 2 * m + 1]).collect()
}

/// Phase rotation `exp(-iθ n)`: `[[cos θ, sin θ], [-sin θ, cos θ]]`.
pub fn rotation(theta: f64) -> DMatrix<f64> {
    let (s, c) = theta.sin_cos();
    DMatrix::from_row_slice(2, 2, &[c, s, -s, c])
}

/// Single-mode squeezer; `r > 0, φ = 0` reduces the `x` variance to `e^{-2r}`.
pub fn squeezer(r: f64, phi: f64) -> DMatrix<f64> {
    let (ch, sh) = (r.cosh(), r.sinh());
    let (s, c) = phi.sin_cos();
    DMatrix::from_row_slice(2, 2, &[ch - sh * c, -sh * s, -sh * s, ch + sh * c])
}

/// Beam splitter with transmissivity `tau` on `(x_j, p_j, x_k, p_k)`.
pub fn beam_splitter(tau: f64) -> DMatrix<f64> {
    let (t, r) = (tau.sqrt(), (1.0 - tau).sqrt());
    DMatrix::from_row_slice(
        4,
        4,
        &[
            t, 0.0, r, 0.0, //
            0.0, t, 0.0, r, //
            -r, 0.0, t, 0.0, //
            0.0, -r, 0.0, t,
        ],
    )
}

/// Two-mode squeezer `[[cosh r I, sinh r Z], [sinh r Z, cosh r I]]`, `Z = diag(1, -1)`.
pub fn two_mode_squeezer(r: f64) -> DMatrix<f64> {
    let (c, s) = (r.cosh(), r.sinh());
    DMatrix::from_row_slice(
        4,
        4,
        &[
            c, 0.0, s, 0.0, //
            0.0, c, 0.0, -s, //
            s, 0.0, c, 0.0, //
            0.0, -s, 0.0, c,
        ],
    )
}
