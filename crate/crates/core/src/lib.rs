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

//! Gaussian continuous-variable quantum states, their observables, open
//! dynamics and random circuits.
//!
//! Quadratures are ordered `(x₁, p₁, x₂, p₂, …)` with `ħ = 2`, so the vacuum
//! covariance matrix is the identity.

pub mod circuits;
pub mod dynamics;
pub mod error;
pub mod linalg;
pub mod measurement;
pub mod observables;
pub mod phase_space;
pub mod rng;
pub mod state;
pub mod symplectic;

pub use error::{Error, Result};
pub use measurement::{MeasurementKind, MeasurementSpec};
pub use state::GaussianState;
pub use symplectic::SymplecticOp;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/states.md")]
    mod states {}
    #[doc = include_str!("../../../book/src/measurements.md")]
    mod measurements {}
    #[doc = include_str!("../../../book/src/observables.md")]
    mod observables {}
    #[doc = include_str!("../../../book/src/dynamics.md")]
    mod dynamics {}
    #[doc = include_str!("../../../book/src/circuits.md")]
    mod circuits {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
