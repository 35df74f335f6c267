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

//! Brute-force reference computations in a truncated Fock basis.
//!
//! Nothing here knows about covariance matrices. States are built as
//! density matrices from ladder operators and matrix exponentials, so the
//! numbers produced are an independent check on closed-form Gaussian
//! formulas. Quadratures follow `x = a + a†`, `p = i(a† - a)`.

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

/// Extra levels used while building operators, dropped before returning.
const WORKING_MARGIN: usize = 140;

pub fn annihilation(dim: usize) -> DMatrix<C64> {
    let mut a = DMatrix::zeros(dim, dim);
    for n in 1..dim {
        a[(n - 1, n)] = C64::new((n as f64).sqrt(), 0.0);
    }
    a
}

fn adjoint(m: &DMatrix<C64>) -> DMatrix<C64> {
    m.adjoint()
}

/// `D(alpha) = exp(alpha a† - alpha* a)`.
pub fn displacement(alpha: C64, dim: usize) -> DMatrix<C64> {
    let a = annihilation(dim);
    let ad = adjoint(&a);
    (ad * alpha - a * alpha.conj()).exp()
}

/// `S(z) = exp((z* a^2 - z a†^2) / 2)` with `z = r e^{i phi}`.
pub fn squeeze(r: f64, phi: f64, dim: usize) -> DMatrix<C64> {
    let z = C64::from_polar(r, phi);
    let a = annihilation(dim);
    let ad = adjoint(&a);
    let gen = (&a * &a) * z.conj() - (&ad * &ad) * z;
    (gen * C64::new(0.5, 0.0)).exp()
}

/// `exp(-i theta n)`.
pub fn rotation(theta: f64, dim: usize) -> DMatrix<C64> {
    DMatrix::from_diagonal(&nalgebra::DVector::from_fn(dim, |n, _| C64::from_polar(1.0, -theta * n as f64)))
}

pub fn thermal_diag(nbar: f64, dim: usize) -> DMatrix<C64> {
    DMatrix::from_diagonal(&nalgebra::DVector::from_fn(dim, |n, _| {
        let p = if nbar == 0.0 {
            if n == 0 {
                1.0
            } else {
                0.0
            }
        } else {
            nbar.powi(n as i32) / (nbar + 1.0).powi(n as i32 + 1)
        };
        C64::new(p, 0.0)
    }))
}

fn truncate(m: &DMatrix<C64>, cutoff: usize) -> DMatrix<C64> {
    m.view((0, 0), (cutoff, cutoff)).into_owned()
}

/// Single-mode state `D(alpha) R(theta) S(r, phi) rho_th(nbar) S† R† D†`,
/// truncated to `cutoff` levels.
pub fn single_mode(alpha: C64, theta: f64, r: f64, phi: f64, nbar: f64, cutoff: usize) -> DMatrix<C64> {
    let dim = cutoff + WORKING_MARGIN;
    let u = displacement(alpha, dim) * rotation(theta, dim) * squeeze(r, phi, dim);
    let rho = &u * thermal_diag(nbar, dim) * u.adjoint();
    truncate(&rho, cutoff)
}

/// Coherent-state amplitudes `<n|beta>` for `n < cutoff`.
pub fn coherent_amplitudes(beta: C64, cutoff: usize) -> Vec<C64> {
    let mut out = Vec::with_capacity(cutoff);
    let mut c = C64::new((-beta.norm_sqr() / 2.0).exp(), 0.0);
    for n in 0..cutoff {
        out.push(c);
        c = c * beta / ((n + 1) as f64).sqrt();
    }
    out
}

pub fn trace(rho: &DMatrix<C64>) -> f64 {
    rho.trace().re
}

pub fn expect(rho: &DMatrix<C64>, op: &DMatrix<C64>) -> C64 {
    (rho * op).trace()
}

/// Mean and covariance of `(x, p)` computed from the density matrix.
///
/// Operators are built in a larger space and truncated so products near the
/// cutoff are not corrupted by the truncated ladder.
pub fn quadrature_moments(rho: &DMatrix<C64>) -> ([f64; 2], [[f64; 2]; 2]) {
    let cutoff = rho.nrows();
    let dim = cutoff + 4;
    let a = annihilation(dim);
    let ad = a.adjoint();
    let x = &a + &ad;
    let p = (&ad - &a) * C64::new(0.0, 1.0);
    let ops = [x, p];
    let t = |m: &DMatrix<C64>| truncate(m, cutoff);
    let mean = [expect(rho, &t(&ops[0])).re, expect(rho, &t(&ops[1])).re];
    let mut cov = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            let sym = (&ops[i] * &ops[j] + &ops[j] * &ops[i]) * C64::new(0.5, 0.0);
            cov[i][j] = expect(rho, &t(&sym)).re - mean[i] * mean[j];
        }
    }
    (mean, cov)
}

pub fn number_mean(rho: &DMatrix<C64>) -> f64 {
    (0..rho.nrows()).map(|n| n as f64 * rho[(n, n)].re).sum()
}

pub fn number_variance(rho: &DMatrix<C64>) -> f64 {
    let m = number_mean(rho);
    let m2: f64 = (0..rho.nrows()).map(|n| (n * n) as f64 * rho[(n, n)].re).sum();
    m2 - m * m
}

fn hermitian_eigenvalues(rho: &DMatrix<C64>) -> Vec<f64> {
    let h = (rho + rho.adjoint()) * C64::new(0.5, 0.0);
    h.symmetric_eigenvalues().iter().copied().collect()
}

/// Von Neumann entropy in nats.
pub fn entropy(rho: &DMatrix<C64>) -> f64 {
    hermitian_eigenvalues(rho).into_iter().filter(|&l| l > 1e-300).map(|l| -l * l.ln()).sum()
}

/// Entropy of the Fock-diagonal part minus the entropy of the state.
pub fn relative_entropy_coherence(rho: &DMatrix<C64>) -> f64 {
    let diag: f64 = (0..rho.nrows()).map(|n| rho[(n, n)].re).filter(|&p| p > 1e-300).map(|p| -p * p.ln()).sum();
    diag - entropy(rho)
}

fn hermitian_sqrt(rho: &DMatrix<C64>) -> DMatrix<C64> {
    let h = (rho + rho.adjoint()) * C64::new(0.5, 0.0);
    let eig = h.symmetric_eigen();
    let vals = eig.eigenvalues.map(|l| C64::new(l.max(0.0).sqrt(), 0.0));
    &eig.eigenvectors * DMatrix::from_diagonal(&vals) * eig.eigenvectors.adjoint()
}

/// Uhlmann fidelity, squared convention: `(Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2`.
pub fn fidelity(rho: &DMatrix<C64>, sigma: &DMatrix<C64>) -> f64 {
    let s = hermitian_sqrt(rho);
    let inner = &s * sigma * &s;
    let t: f64 = hermitian_eigenvalues(&inner).into_iter().map(|l| l.max(0.0).sqrt()).sum();
    t * t
}

/// Two-mode squeezed vacuum Schmidt coefficients `tanh(r)^n / cosh(r)`.
pub fn tms_amplitudes(r: f64, cutoff: usize) -> Vec<f64> {
    (0..cutoff).map(|n| r.tanh().powi(n as i32) / r.cosh()).collect()
}

/// Binomial loss channel Kraus operators for transmission `tau`.
pub fn loss_kraus(tau: f64, cutoff: usize) -> Vec<DMatrix<f64>> {
    let binom = |n: usize, k: usize| -> f64 { (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64) };
    (0..cutoff)
        .map(|k| {
            let mut m = DMatrix::zeros(cutoff, cutoff);
            for n in k..cutoff {
                m[(n - k, n)] = (binom(n, k) * tau.powi((n - k) as i32) * (1.0 - tau).powi(k as i32)).sqrt();
            }
            m
        })
        .collect()
}

/// Two-mode squeezed vacuum with loss `tau` applied to the first mode.
/// Basis index is `n_a * cutoff + n_b`.
pub fn tms_lossy(r: f64, tau: f64, cutoff: usize) -> DMatrix<C64> {
    let c = tms_amplitudes(r, cutoff);
    let dim = cutoff * cutoff;
    let mut rho = DMatrix::<C64>::zeros(dim, dim);
    for k in loss_kraus(tau, cutoff) {
        // psi_k = (K_k (x) 1) |TMS>
        let mut psi = vec![0.0; dim];
        for n in 0..cutoff {
            for m in 0..cutoff {
                let kmn = k[(m, n)];
                if kmn != 0.0 {
                    psi[m * cutoff + n] += kmn * c[n];
                }
            }
        }
        for i in 0..dim {
            if psi[i] == 0.0 {
                continue;
            }
            for j in 0..dim {
                rho[(i, j)] += C64::new(psi[i] * psi[j], 0.0);
            }
        }
    }
    rho
}

/// `<beta_a, beta_b| rho |beta_a, beta_b>` for a two-mode density matrix.
pub fn two_mode_coherent_overlap(rho: &DMatrix<C64>, beta_a: C64, beta_b: C64, cutoff: usize) -> f64 {
    let ca = coherent_amplitudes(beta_a, cutoff);
    let cb = coherent_amplitudes(beta_b, cutoff);
    let v: Vec<C64> = (0..cutoff * cutoff).map(|i| ca[i / cutoff] * cb[i % cutoff]).collect();
    let mut acc = C64::new(0.0, 0.0);
    for i in 0..v.len() {
        for j in 0..v.len() {
            acc += v[i].conj() * rho[(i, j)] * v[j];
        }
    }
    acc.re
}
