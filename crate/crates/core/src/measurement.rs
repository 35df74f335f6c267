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

//! Conditional states after partial general-dyne measurements.
//!
//! Measured modes `B` are projected with a measurement covariance `V_M`;
//! with `V_AB` the cross block, the kept modes `A` update as
//!
//! ```text
//! R_A ← R_A + V_AB (V_B + V_M)⁻¹ (r_m − R_B)
//! V_A ← V_A − V_AB (V_B + V_M)⁻¹ V_ABᵀ
//! ```
//!
//! and outcomes are distributed as `N(R_B, V_B + V_M)`.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::linalg::{symmetrize, symplectic_spectrum};
use crate::state::{check_modes, GaussianState, PHYSICALITY_TOL};
use crate::symplectic::quadrature_indices;

/// Squeezing parameter standing in for an ideal homodyne detector.
pub const HOMODYNE_SQUEEZING: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub enum MeasurementKind {
    /// Arbitrary `2m x 2m` measurement covariance.
    General(DMatrix<f64>),
    /// One quadrature angle per measured mode; angle `φ` measures
    /// `x cos φ + p sin φ`.
    Homodyne(Vec<f64>),
    Heterodyne,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementSpec {
    kind: MeasurementKind,
    modes: Vec<usize>,
}

/// `Rot(φ) diag(s, 1/s) Rot(φ)ᵀ`: the single-mode general-dyne covariance.
pub fn dyne_covariance(s: f64, phi: f64) -> DMatrix<f64> {
    let (sn, cs) = phi.sin_cos();
    let rot = DMatrix::from_row_slice(2, 2, &[cs, -sn, sn, cs]);
    let diag = DMatrix::from_diagonal(&DVector::from_vec(vec![s, 1.0 / s]));
    let mut m = &rot * diag * rot.transpose();
    symmetrize(&mut m);
    m
}

impl MeasurementSpec {
    pub fn general(cov: DMatrix<f64>, modes: Vec<usize>) -> Result<Self> {
        let dim = 2 * modes.len();
        crate::linalg::ensure_square(&cov, dim)?;
        let min = symplectic_spectrum(&cov)?.last().copied().unwrap_or(1.0);
        if min < 1.0 - PHYSICALITY_TOL {
            return Err(Error::Unphysical(min));
        }
        Self::validated(MeasurementKind::General(cov), modes)
    }

    pub fn homodyne(angles: Vec<f64>, modes: Vec<usize>) -> Result<Self> {
        if angles.len() != modes.len() {
            return Err(Error::DimensionMismatch { expected: modes.len(), found: angles.len() });
        }
        Self::validated(MeasurementKind::Homodyne(angles), modes)
    }

    pub fn heterodyne(modes: Vec<usize>) -> Result<Self> {
        Self::validated(MeasurementKind::Heterodyne, modes)
    }

    fn validated(kind: MeasurementKind, modes: Vec<usize>) -> Result<Self> {
        if modes.is_empty() {
            return Err(Error::InvalidParameter("no modes to measure".into()));
        }
        let max = modes.iter().copied().max().unwrap_or(0);
        check_modes(&modes, max + 1)?;
        Ok(Self { kind, modes })
    }

    pub fn kind(&self) -> &MeasurementKind {
        &self.kind
    }

    pub fn modes(&self) -> &[usize] {
        &self.modes
    }

    /// The measurement covariance `V_M` over the measured modes.
    pub fn covariance(&self) -> DMatrix<f64> {
        let m = self.modes.len();
        match &self.kind {
            MeasurementKind::General(v) => v.clone(),
            MeasurementKind::Heterodyne => DMatrix::identity(2 * m, 2 * m),
            MeasurementKind::Homodyne(angles) => {
                let mut v = DMatrix::zeros(2 * m, 2 * m);
                for (k, &phi) in angles.iter().enumerate() {
                    v.view_mut((2 * k, 2 * k), (2, 2)).copy_from(&dyne_covariance(HOMODYNE_SQUEEZING, phi));
                }
                v
            }
        }
    }
}

struct Partition {
    mean_a: DVector<f64>,
    mean_b: DVector<f64>,
    cov_a: DMatrix<f64>,
    cov_ab: DMatrix<f64>,
    /// Cholesky factor of `V_B + V_M`.
    chol: nalgebra::Cholesky<f64, nalgebra::Dyn>,
}

impl GaussianState {
    fn partition(&self, spec: &MeasurementSpec) -> Result<Partition> {
        let n = self.n_modes();
        check_modes(spec.modes(), n)?;
        if spec.modes().len() == n {
            return Err(Error::AllModesRemoved);
        }
        let kept: Vec<usize> = (0..n).filter(|m| !spec.modes().contains(m)).collect();
        let ia = quadrature_indices(&kept);
        let ib = quadrature_indices(spec.modes());
        let cov_b = self.cov().select_rows(ib.iter()).select_columns(ib.iter());
        let mut total = cov_b + spec.covariance();
        symmetrize(&mut total);
        let chol = total.cholesky().ok_or(Error::Singular("V_B + V_M"))?;
        Ok(Partition {
            mean_a: self.mean().select_rows(ia.iter()),
            mean_b: self.mean().select_rows(ib.iter()),
            cov_a: self.cov().select_rows(ia.iter()).select_columns(ia.iter()),
            cov_ab: self.cov().select_rows(ia.iter()).select_columns(ib.iter()),
            chol,
        })
    }

    fn condition(p: Partition, outcome: &DVector<f64>) -> GaussianState {
        let gain = p.chol.solve(&p.cov_ab.transpose()).transpose();
        let mean = &p.mean_a + &gain * (outcome - &p.mean_b);
        let cov = &p.cov_a - &gain * p.cov_ab.transpose();
        GaussianState::from_parts(mean, cov)
    }

    /// State of the unmeasured modes given outcome `outcome` on the
    /// measured ones.
    pub fn measure_with_outcome(&self, spec: &MeasurementSpec, outcome: &DVector<f64>) -> Result<GaussianState> {
        let p = self.partition(spec)?;
        if outcome.len() != 2 * spec.modes().len() {
            return Err(Error::DimensionMismatch { expected: 2 * spec.modes().len(), found: outcome.len() });
        }
        if outcome.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self::condition(p, outcome))
    }

    /// Samples an outcome from `N(R_B, V_B + V_M)` and conditions on it.
    pub fn measure_sampled<R: Rng + ?Sized>(
        &self,
        spec: &MeasurementSpec,
        rng: &mut R,
    ) -> Result<(GaussianState, DVector<f64>)> {
        let p = self.partition(spec)?;
        let outcome = sample_outcome(&p.mean_b, p.chol.l_dirty(), rng);
        Ok((Self::condition(p, &outcome), outcome))
    }

    /// Draws a measurement record without conditioning.
    pub fn sample_measurement<R: Rng + ?Sized>(&self, spec: &MeasurementSpec, rng: &mut R) -> Result<DVector<f64>> {
        let p = self.partition(spec)?;
        Ok(sample_outcome(&p.mean_b, p.chol.l_dirty(), rng))
    }
}

fn sample_outcome<R: Rng + ?Sized>(mean: &DVector<f64>, l_dirty: &DMatrix<f64>, rng: &mut R) -> DVector<f64> {
    let z = DVector::from_fn(mean.len(), |_, _| rng.sample::<f64, _>(StandardNormal));
    // Only the lower triangle of `l_dirty` holds the factor.
    mean + l_dirty.lower_triangle() * z
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use num_complex::Complex64;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn tms(r: f64) -> GaussianState {
        let mut s = GaussianState::vacuum(2).unwrap();
        s.two_mode_squeezing(0, 1, r).unwrap();
        s
    }

    #[test]
    fn heterodyne_on_product_leaves_other_mode() {
        let a = GaussianState::coherent(Complex64::new(0.3, 0.7));
        let s = a.tensor(&GaussianState::thermal(1.0).unwrap());
        let spec = MeasurementSpec::heterodyne(vec![1]).unwrap();
        let out = s.measure_with_outcome(&spec, &DVector::from_vec(vec![5.0, -3.0])).unwrap();
        assert_relative_eq!(out.mean(), a.mean(), epsilon = 1e-14);
        assert_relative_eq!(out.cov(), a.cov(), epsilon = 1e-14);
    }

    #[test]
    fn homodyne_on_tms_schur_complement() {
        let r: f64 = 0.6;
        let spec = MeasurementSpec::homodyne(vec![0.0], vec![1]).unwrap();
        let out = tms(r).measure_with_outcome(&spec, &DVector::from_vec(vec![0.4, 0.0])).unwrap();
        let (c, s) = ((2.0 * r).cosh(), (2.0 * r).sinh());
        let expected = c - s * s / (c + HOMODYNE_SQUEEZING);
        assert_relative_eq!(out.cov()[(0, 0)], expected, epsilon = 1e-9);
        assert_relative_eq!(out.cov()[(0, 0)], 1.0 / c, epsilon = 1e-7);
        assert_relative_eq!(out.cov()[(1, 1)], c, epsilon = 1e-7);
    }

    #[test]
    fn conditional_covariance_is_outcome_independent() {
        let spec = MeasurementSpec::heterodyne(vec![0]).unwrap();
        let s = tms(0.5);
        let a = s.measure_with_outcome(&spec, &DVector::from_vec(vec![0.0, 0.0])).unwrap();
        let b = s.measure_with_outcome(&spec, &DVector::from_vec(vec![3.0, -1.0])).unwrap();
        assert_eq!(a.cov(), b.cov());
        assert!(a.mean() != b.mean());
    }

    #[test]
    fn errors() {
        let s = tms(0.2);
        let all = MeasurementSpec::heterodyne(vec![0, 1]).unwrap();
        assert_eq!(s.measure_with_outcome(&all, &DVector::zeros(4)), Err(Error::AllModesRemoved));
        let one = MeasurementSpec::heterodyne(vec![1]).unwrap();
        assert!(matches!(s.measure_with_outcome(&one, &DVector::zeros(3)), Err(Error::DimensionMismatch { .. })));
        let far = MeasurementSpec::heterodyne(vec![5]).unwrap();
        assert!(s.measure_with_outcome(&far, &DVector::zeros(2)).is_err());
        assert!(MeasurementSpec::homodyne(vec![0.0, 1.0], vec![0]).is_err());
        assert!(MeasurementSpec::heterodyne(vec![]).is_err());
        let unphysical = DMatrix::identity(2, 2) * 0.5;
        assert!(MeasurementSpec::general(unphysical, vec![0]).is_err());
    }

    #[test]
    fn sampling_is_reproducible_per_seed() {
        let s = tms(0.4);
        let spec = MeasurementSpec::heterodyne(vec![1]).unwrap();
        let mut r1 = ChaCha8Rng::seed_from_u64(9);
        let mut r2 = ChaCha8Rng::seed_from_u64(9);
        let a = s.measure_sampled(&spec, &mut r1).unwrap();
        let b = s.measure_sampled(&spec, &mut r2).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn heterodyne_outcome_statistics() {
        let s = GaussianState::thermal(1.0).unwrap().tensor(&GaussianState::thermal(1.0).unwrap());
        let spec = MeasurementSpec::heterodyne(vec![1]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        let n = 100_000;
        let samples: Vec<DVector<f64>> = (0..n).map(|_| s.sample_measurement(&spec, &mut rng).unwrap()).collect();
        let mean = samples.iter().fold(DVector::zeros(2), |acc, x| acc + x) / n as f64;
        let cov = samples.iter().fold(DMatrix::zeros(2, 2), |acc, x| acc + (x - &mean) * (x - &mean).transpose())
            / (n - 1) as f64;
        for i in 0..2 {
            assert!((cov[(i, i)] - 4.0).abs() < 0.05 * 4.0, "{cov}");
        }
        assert!((cov[(0, 1)]).abs() < 0.05 * 4.0);
    }
}
