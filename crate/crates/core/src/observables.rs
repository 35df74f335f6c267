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

//! Scalar diagnostics of Gaussian states.
//!
//! Entropies are in nats. Fidelity uses the squared Uhlmann convention,
//! `F(|α⟩, |β⟩) = exp(-|α - β|²)`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{symmetrize, symplectic_form, symplectic_spectrum};
use crate::state::{check_modes, GaussianState};

/// Symplectic eigenvalues of `V`, descending.
pub fn symplectic_eigenvalues(state: &GaussianState) -> Result<Vec<f64>> {
    symplectic_spectrum(state.cov())
}

/// `1 / sqrt(det V)`.
pub fn purity(state: &GaussianState) -> f64 {
    1.0 / state.cov().determinant().sqrt()
}

/// Entropy contribution of one symplectic eigenvalue,
/// `g(ν) = ((ν+1)/2) ln((ν+1)/2) − ((ν−1)/2) ln((ν−1)/2)`.
pub fn entropy_function(nu: f64) -> f64 {
    let minus = 0.5 * (nu - 1.0);
    if nu - 1.0 < 1e-6 {
        if minus <= 0.0 {
            return 0.0;
        }
        // (1+e) ln(1+e) − e ln e to second order in e.
        return minus * (1.0 - minus.ln()) + 0.5 * minus * minus;
    }
    let plus = 0.5 * (nu + 1.0);
    plus * plus.ln() - minus * minus.ln()
}

pub fn von_neumann_entropy(state: &GaussianState) -> Result<f64> {
    Ok(symplectic_eigenvalues(state)?.into_iter().map(entropy_function).sum())
}

/// `Σ_j S(ρ_j) − S(ρ)` over single-mode marginals.
pub fn mutual_information(state: &GaussianState) -> Result<f64> {
    let mut total = -von_neumann_entropy(state)?;
    for mode in 0..state.n_modes() {
        total += von_neumann_entropy(&state.only_modes(&[mode])?)?;
    }
    Ok(total)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SqueezingDegree {
    /// Smallest over largest quadrature variance, in `(0, 1]`.
    pub ratio: f64,
    /// Phase-space angle of the squeezed quadrature in `[0, π)`.
    pub angle: f64,
}

/// Squeezing degree of a single-mode state.
pub fn squeezing_degree(state: &GaussianState) -> Result<SqueezingDegree> {
    if state.n_modes() != 1 {
        return Err(Error::InvalidParameter(format!(
            "squeezing degree needs a single mode, state has {}; use squeezing_degree_of_mode",
            state.n_modes()
        )));
    }
    squeezing_degree_of_mode(state, 0)
}

pub fn squeezing_degree_of_mode(state: &GaussianState, mode: usize) -> Result<SqueezingDegree> {
    check_modes(&[mode], state.n_modes())?;
    let block = state.cov().view((2 * mode, 2 * mode), (2, 2)).into_owned();
    let eig = block.symmetric_eigen();
    let (lo, hi) = if eig.eigenvalues[0] <= eig.eigenvalues[1] { (0, 1) } else { (1, 0) };
    let v = eig.eigenvectors.column(lo);
    let angle = v[1].atan2(v[0]).rem_euclid(std::f64::consts::PI);
    Ok(SqueezingDegree { ratio: eig.eigenvalues[lo] / eig.eigenvalues[hi], angle })
}

/// Mean excitation number of every mode.
pub fn occupation(state: &GaussianState) -> Vec<f64> {
    let (r, v) = (state.mean(), state.cov());
    (0..state.n_modes())
        .map(|j| {
            let (x, p) = (2 * j, 2 * j + 1);
            (v[(x, x)] + v[(p, p)] + r[x] * r[x] + r[p] * r[p] - 2.0) / 4.0
        })
        .collect()
}

/// Per-mode mean and variance of the number operator.
#[derive(Debug, Clone, PartialEq)]
pub struct NumberMoments {
    pub mean: Vec<f64>,
    pub variance: Vec<f64>,
}

pub fn number_moments(state: &GaussianState) -> NumberMoments {
    let variance = (0..state.n_modes())
        .map(|j| {
            let vj = state.cov().view((2 * j, 2 * j), (2, 2));
            let rj = state.mean().rows(2 * j, 2);
            ((vj * vj).trace() - 2.0) / 8.0 + (rj.transpose() * vj * rj)[(0, 0)] / 4.0
        })
        .collect();
    NumberMoments { mean: occupation(state), variance }
}

/// Uhlmann fidelity between two Gaussian states of equal size (squared
/// convention), from the closed form of Banchi, Braunstein and Pirandola.
pub fn fidelity(a: &GaussianState, b: &GaussianState) -> Result<f64> {
    let n = a.n_modes();
    if b.n_modes() != n {
        return Err(Error::DimensionMismatch { expected: 2 * n, found: 2 * b.n_modes() });
    }
    if is_pure(a)? || is_pure(b)? {
        return Ok(overlap(a, b)?.clamp(0.0, 1.0));
    }
    // The closed form is stated for vacuum covariance I/2.
    let va = a.cov() * 0.5;
    let vb = b.cov() * 0.5;
    let sum = &va + &vb;
    let sum_inv = sum.clone().try_inverse().ok_or(Error::Singular("V_a + V_b"))?;
    let omega = symplectic_form(n);
    let aux = omega.transpose() * &sum_inv * (&omega * 0.25 + &vb * &omega * &va);
    let mu = (&aux * &omega).complex_eigenvalues();
    let one = Complex64::new(1.0, 0.0);
    let prod = mu.iter().fold(one, |acc, &m| acc * ((one + 0.25 / (m * m)).sqrt() + one));
    let f_tot4 = 4f64.powi(n as i32) * aux.determinant() * prod.re;
    let delta = b.mean() - a.mean();
    let full_sum_inv = sum_inv * 0.5;
    let quad = (delta.transpose() * full_sum_inv * &delta)[(0, 0)];
    let f = f_tot4.max(0.0).sqrt() / sum.determinant().sqrt() * (-0.5 * quad).exp();
    Ok(f.clamp(0.0, 1.0))
}

/// Largest symplectic eigenvalue allowed for a state treated as pure.
const PURE_TOL: f64 = 1e-12;

fn is_pure(state: &GaussianState) -> Result<bool> {
    Ok(symplectic_eigenvalues(state)?.first().is_some_and(|&nu| nu <= 1.0 + PURE_TOL))
}

/// `Tr(ρ_a ρ_b) = 2^N exp(−½ δᵀ(V_a+V_b)⁻¹δ) / sqrt(det(V_a+V_b))`, which is
/// the fidelity when either state is pure. The general formula loses half
/// the working precision there through `sqrt(1 + 1/(4μ²))` with `μ² → −1/4`.
fn overlap(a: &GaussianState, b: &GaussianState) -> Result<f64> {
    let sum = a.cov() + b.cov();
    let chol = sum.cholesky().ok_or(Error::Singular("V_a + V_b"))?;
    let delta = b.mean() - a.mean();
    let quad = delta.dot(&chol.solve(&delta));
    Ok(2f64.powi(a.n_modes() as i32) * (-0.5 * quad).exp() / chol.determinant().sqrt())
}

/// Relative-entropy coherence with respect to incoherent (thermal) Gaussian
/// states: `Σ_j [(n_j+1) ln(n_j+1) − n_j ln n_j] − S(ρ)`.
pub fn coherence(state: &GaussianState) -> Result<f64> {
    let xlnx = |x: f64| if x > 0.0 { x * x.ln() } else { 0.0 };
    let thermal: f64 = occupation(state).into_iter().map(|n| xlnx(n + 1.0) - xlnx(n.max(0.0))).sum();
    Ok(thermal - von_neumann_entropy(state)?)
}

/// Logarithmic negativity of the bipartition `partition | rest`.
pub fn logarithmic_negativity(state: &GaussianState, partition: &[usize]) -> Result<f64> {
    let n = state.n_modes();
    check_modes(partition, n)?;
    if partition.is_empty() || partition.len() == n {
        return Err(Error::InvalidParameter("partition must be a proper nonempty subset of modes".into()));
    }
    let mut flip = DVector::from_element(2 * n, 1.0);
    for &m in partition {
        flip[2 * m + 1] = -1.0;
    }
    let mut transposed = DMatrix::from_fn(2 * n, 2 * n, |i, j| flip[i] * state.cov()[(i, j)] * flip[j]);
    symmetrize(&mut transposed);
    Ok(symplectic_spectrum(&transposed)?.into_iter().map(|nu| (-nu.ln()).max(0.0)).sum())
}

/// `⟨0…0|ρ|0…0⟩ = 2^N exp(−½ Rᵀ(V+I)⁻¹R) / sqrt(det(V+I))`.
pub fn vacuum_probability(state: &GaussianState) -> Result<f64> {
    let dim = state.cov().nrows();
    let shifted = state.cov() + DMatrix::<f64>::identity(dim, dim);
    let chol = shifted.clone().cholesky().ok_or(Error::Singular("V + I"))?;
    let r = state.mean();
    let quad = r.dot(&chol.solve(r));
    let det = chol.determinant();
    Ok((2f64.powi(state.n_modes() as i32) * (-0.5 * quad).exp() / det.sqrt()).min(1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn tms(r: f64) -> GaussianState {
        let mut s = GaussianState::vacuum(2).unwrap();
        s.two_mode_squeezing(0, 1, r).unwrap();
        s
    }

    #[test]
    fn spectra() {
        assert_eq!(symplectic_eigenvalues(&GaussianState::vacuum(2).unwrap()).unwrap().len(), 2);
        for nu in symplectic_eigenvalues(&GaussianState::vacuum(2).unwrap()).unwrap() {
            assert_relative_eq!(nu, 1.0, epsilon = 1e-12);
        }
        let th = symplectic_eigenvalues(&GaussianState::thermal(1.5).unwrap()).unwrap();
        assert_relative_eq!(th[0], 4.0, epsilon = 1e-12);
        let sq = symplectic_eigenvalues(&GaussianState::squeezed(0.9, 0.3)).unwrap();
        assert_relative_eq!(sq[0], 1.0, epsilon = 1e-10);
    }

    #[test]
    fn purity_values() {
        assert_relative_eq!(purity(&GaussianState::vacuum(2).unwrap()), 1.0);
        assert_relative_eq!(purity(&GaussianState::thermal(1.0).unwrap()), 1.0 / 3.0, epsilon = 1e-14);
        assert_relative_eq!(purity(&tms(0.8)), 1.0, epsilon = 1e-10);
    }

    #[test]
    fn entropy_values() {
        assert_eq!(von_neumann_entropy(&GaussianState::vacuum(3).unwrap()).unwrap(), 0.0);
        assert_relative_eq!(
            von_neumann_entropy(&GaussianState::thermal(1.0).unwrap()).unwrap(),
            2.0 * 2f64.ln(),
            epsilon = 1e-12
        );
        let r: f64 = 0.5;
        let reduced = tms(r).only_modes(&[1]).unwrap();
        assert_relative_eq!(
            von_neumann_entropy(&reduced).unwrap(),
            entropy_function((2.0 * r).cosh()),
            epsilon = 1e-10
        );
    }

    #[test]
    fn entropy_function_is_continuous_at_the_series_switch() {
        let below = entropy_function(1.0 + 1e-6 - 1e-12);
        let above = entropy_function(1.0 + 1e-6 + 1e-12);
        assert!((below - above).abs() < 1e-10);
        assert_eq!(entropy_function(1.0), 0.0);
    }

    #[test]
    fn mutual_information_values() {
        let prod = GaussianState::coherent(c(1.0, 0.0)).tensor(&GaussianState::thermal(2.0).unwrap());
        assert!(mutual_information(&prod).unwrap().abs() < 1e-12);
        let r: f64 = 0.4;
        assert_relative_eq!(
            mutual_information(&tms(r)).unwrap(),
            2.0 * entropy_function((2.0 * r).cosh()),
            epsilon = 1e-9
        );
    }

    #[test]
    fn squeezing_degree_values() {
        let v = squeezing_degree(&GaussianState::vacuum(1).unwrap()).unwrap();
        assert_relative_eq!(v.ratio, 1.0);
        let r = 0.35;
        let s = squeezing_degree(&GaussianState::squeezed(r, 0.0)).unwrap();
        assert_relative_eq!(s.ratio, (-4.0 * r).exp(), epsilon = 1e-13);
        assert_relative_eq!(s.angle, 0.0, epsilon = 1e-12);
        assert!(squeezing_degree(&tms(0.1)).is_err());
        assert!(squeezing_degree_of_mode(&tms(0.1), 1).is_ok());
    }

    #[test]
    fn occupation_and_moments() {
        assert_eq!(occupation(&GaussianState::vacuum(2).unwrap()), vec![0.0, 0.0]);
        let m = number_moments(&GaussianState::coherent(c(2.0, 0.0)));
        assert_relative_eq!(m.mean[0], 4.0);
        assert_relative_eq!(m.variance[0], 4.0);
        let nbar = 1.7;
        let th = number_moments(&GaussianState::thermal(nbar).unwrap());
        assert_relative_eq!(th.mean[0], nbar, epsilon = 1e-14);
        assert_relative_eq!(th.variance[0], nbar * (nbar + 1.0), epsilon = 1e-13);
        assert_eq!(number_moments(&GaussianState::vacuum(1).unwrap()).variance, vec![0.0]);
    }

    #[test]
    fn fidelity_values() {
        let s = tms(0.3);
        assert_relative_eq!(fidelity(&s, &s).unwrap(), 1.0, epsilon = 1e-10);
        let f = fidelity(&GaussianState::coherent(c(0.0, 0.0)), &GaussianState::coherent(c(1.0, 0.0))).unwrap();
        assert_relative_eq!(f, (-1.0f64).exp(), epsilon = 1e-12);
        let f = fidelity(&GaussianState::vacuum(1).unwrap(), &GaussianState::thermal(1.0).unwrap()).unwrap();
        assert_relative_eq!(f, 0.5, epsilon = 1e-12);
        assert!(fidelity(&s, &GaussianState::vacuum(1).unwrap()).is_err());
    }

    #[test]
    fn fidelity_with_a_pure_state_is_the_overlap() {
        let mut tms = GaussianState::vacuum(2).unwrap();
        tms.two_mode_squeezing(0, 1, 0.4).unwrap();
        assert_relative_eq!(fidelity(&tms, &tms).unwrap(), 1.0, epsilon = 1e-14);
        // Mixed partner: both branches are available when only one side is pure.
        let th = GaussianState::thermal(0.7).unwrap().tensor(&GaussianState::thermal(0.2).unwrap());
        let direct = 4.0 / (&th.cov().clone() + tms.cov()).determinant().sqrt();
        assert_relative_eq!(fidelity(&tms, &th).unwrap(), direct, epsilon = 1e-14);
    }

    #[test]
    fn coherence_values() {
        assert!(coherence(&GaussianState::thermal(2.0).unwrap()).unwrap().abs() < 1e-12);
        assert_eq!(coherence(&GaussianState::vacuum(1).unwrap()).unwrap(), 0.0);
        let expected = 5.0 * 5f64.ln() - 4.0 * 4f64.ln();
        assert_relative_eq!(coherence(&GaussianState::coherent(c(2.0, 0.0))).unwrap(), expected, epsilon = 1e-12);
    }

    #[test]
    fn log_negativity_values() {
        let prod = GaussianState::squeezed(0.5, 0.0).tensor(&GaussianState::thermal(1.0).unwrap());
        assert!(logarithmic_negativity(&prod, &[0]).unwrap() < 1e-12);
        for r in [0.1, 0.4, 1.2] {
            assert_relative_eq!(logarithmic_negativity(&tms(r), &[0]).unwrap(), 2.0 * r, epsilon = 1e-9);
        }
        assert!(logarithmic_negativity(&tms(0.1), &[]).is_err());
        assert!(logarithmic_negativity(&tms(0.1), &[0, 1]).is_err());
    }

    #[test]
    fn vacuum_probability_values() {
        assert_relative_eq!(vacuum_probability(&GaussianState::vacuum(3).unwrap()).unwrap(), 1.0, epsilon = 1e-14);
        let alpha = c(0.8, -0.3);
        assert_relative_eq!(
            vacuum_probability(&GaussianState::coherent(alpha)).unwrap(),
            (-alpha.norm_sqr()).exp(),
            epsilon = 1e-14
        );
        assert_relative_eq!(vacuum_probability(&GaussianState::thermal(1.0).unwrap()).unwrap(), 0.5, epsilon = 1e-14);
    }
}
