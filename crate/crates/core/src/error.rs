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

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("number of modes must be at least 1")]
    NoModes,
    #[error("mode index {mode} out of range for a {n_modes}-mode state")]
    ModeOutOfRange { mode: usize, n_modes: usize },
    #[error("mode index {0} appears more than once")]
    DuplicateMode(usize),
    #[error("operation would remove every mode of the state")]
    AllModesRemoved,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix contains non-finite entries")]
    NonFinite,
    #[error("matrix is not symmetric (max asymmetry {0:e})")]
    NotSymmetric(f64),
    #[error("covariance matrix violates the uncertainty relation (min symplectic eigenvalue {0})")]
    Unphysical(f64),
    #[error("matrix is not symplectic (residual {0:e})")]
    NotSymplectic(f64),
    #[error("matrix is not positive definite (min eigenvalue {0:e})")]
    NotPositiveDefinite(f64),
    #[error("matrix is not positive semidefinite (pivot {0:e})")]
    NotPositiveSemidefinite(f64),
    #[error("singular matrix in {0}")]
    Singular(&'static str),
    #[error("drift matrix is not Hurwitz (spectral abscissa {0:e})")]
    NotHurwitz(f64),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("integration failed at t = {t}: {reason}")]
    Integration { t: f64, reason: String },
    #[error("malformed state description: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
