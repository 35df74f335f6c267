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

//! Dense kernels shared by the state, observable and dynamics modules.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Block-diagonal symplectic form `⊕ [[0, 1], [-1, 0]]` for `n_modes` modes.
pub fn symplectic_form(n_modes: usize) -> DMatrix<f64> {
    let mut omega = DMatrix::zeros(2 * n_modes, 2 * n_modes);
    for k in 0..n_modes {
        omega[(2 * k, 2 * k + 1)] = 1.0;
        omega[(2 * k + 1, 2 * k)] = -1.0;
    }
    omega
}

pub fn max_asymmetry(m: &DMatrix<f64>) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..m.nrows() {
        for j in (i + 1)..m.ncols() {
            worst = worst.max((m[(i, j)] - m[(j, i)]).abs());
        }
    }
    worst
}

pub fn symmetrize(m: &mut DMatrix<f64>) {
    let n = m.nrows();
    for i in 0..n {
        for j in (i + 1)..n {
            let avg = 0.5 * (m[(i, j)] + m[(j, i)]);
            m[(i, j)] = avg;
            m[(j, i)] = avg;
        }
    }
}

pub fn ensure_finite_matrix(m: &DMatrix<f64>) -> Result<()> {
    if m.iter().all(|x| x.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite)
    }
}

pub fn ensure_square(m: &DMatrix<f64>, dim: usize) -> Result<()> {
    if m.nrows() != dim {
        return Err(Error::DimensionMismatch { expected: dim, found: m.nrows() });
    }
    if m.ncols() != dim {
        return Err(Error::DimensionMismatch { expected: dim, found: m.ncols() });
    }
    Ok(())
}

fn spd_eigen(m: &DMatrix<f64>) -> Result<(DVector<f64>, DMatrix<f64>)> {
    ensure_finite_matrix(m)?;
    let mut sym = m.clone();
    symmetrize(&mut sym);
    let eig = sym.symmetric_eigen();
    let min = eig.eigenvalues.min();
    if min <= 1e-12 {
        return Err(Error::NotPositiveDefinite(min));
    }
    Ok((eig.eigenvalues, eig.eigenvectors))
}

fn spectral_function(vals: &DVector<f64>, vecs: &DMatrix<f64>, f: impl Fn(f64) -> f64) -> DMatrix<f64> {
    let mut scaled = vecs.clone();
    for (j, &l) in vals.iter().enumerate() {
        scaled.column_mut(j).scale_mut(f(l));
    }
    let mut out = scaled * vecs.transpose();
    symmetrize(&mut out);
    out
}

/// Symmetric square root of a symmetric positive definite matrix.
pub fn sqrtm_spd(m: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let (vals, vecs) = spd_eigen(m)?;
    Ok(spectral_function(&vals, &vecs, f64::sqrt))
}

/// Symmetric inverse square root `M^{-1/2}` of an SPD matrix.
pub fn inv_sqrtm_spd(m: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let (vals, vecs) = spd_eigen(m)?;
    Ok(spectral_function(&vals, &vecs, |l| 1.0 / l.sqrt()))
}

/// Symplectic eigenvalues of a positive definite `2N x 2N` matrix, descending.
///
/// With `K = V^{1/2} Ω V^{1/2}` antisymmetric, `KᵀK` is symmetric with each
/// `ν²` appearing twice; adjacent pairs are averaged.
pub fn symplectic_spectrum(v: &DMatrix<f64>) -> Result<Vec<f64>> {
    let dim = v.nrows();
    if dim % 2 != 0 || dim == 0 {
        return Err(Error::DimensionMismatch { expected: dim + dim % 2, found: dim });
    }
    let root = sqrtm_spd(v)?;
    let k = &root * symplectic_form(dim / 2) * &root;
    let mut sq = k.transpose() * &k;
    symmetrize(&mut sq);
    let mut vals: Vec<f64> = sq.symmetric_eigenvalues().iter().copied().collect();
    vals.sort_by(|a, b| b.total_cmp(a));
    Ok(vals.chunks(2).map(|pair| (0.5 * (pair[0] + pair[1])).max(0.0).sqrt()).collect())
}

/// Lower-triangular-up-to-permutation factor `L` with `L Lᵀ = D` for a
/// positive semidefinite `D`, via diagonally pivoted Cholesky.
pub fn psd_factor(d: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    ensure_finite_matrix(d)?;
    let n = d.nrows();
    ensure_square(d, n)?;
    let scale = d.diagonal().iter().fold(0.0f64, |m, x| m.max(x.abs())).max(f64::MIN_POSITIVE);
    let tol = 1e-12 * scale;
    let mut work = d.clone();
    symmetrize(&mut work);
    let mut l = DMatrix::<f64>::zeros(n, n);
    let mut done = vec![false; n];
    for col in 0..n {
        let Some(piv) = (0..n).filter(|i| !done[*i]).max_by(|&a, &b| work[(a, a)].total_cmp(&work[(b, b)])) else {
            break;
        };
        if work[(piv, piv)] <= tol {
            break;
        }
        let root = work[(piv, piv)].sqrt();
        done[piv] = true;
        for i in 0..n {
            l[(i, col)] = if done[i] && i != piv { 0.0 } else { work[(i, piv)] / root };
        }
        for i in 0..n {
            for j in 0..n {
                work[(i, j)] -= l[(i, col)] * l[(j, col)];
            }
        }
    }
    let residual = (&l * l.transpose() - d).norm();
    if residual > 1e-9 * scale * n as f64 {
        let min = d.clone().symmetric_eigenvalues().min();
        return Err(Error::NotPositiveSemidefinite(min));
    }
    Ok(l)
}

/// Largest real part over the spectrum of a real square matrix.
pub fn spectral_abscissa(a: &DMatrix<f64>) -> f64 {
    a.complex_eigenvalues().iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max)
}

/// Largest singular value.
pub fn spectral_norm(a: &DMatrix<f64>) -> f64 {
    let ata = a.transpose() * a;
    ata.symmetric_eigenvalues().max().max(0.0).sqrt()
}

/// Solves `A V + V Aᵀ + D = 0` through the vectorized Kronecker system.
pub fn solve_lyapunov(a: &DMatrix<f64>, d: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let n = a.nrows();
    ensure_square(a, n)?;
    ensure_square(d, n)?;
    let eye = DMatrix::<f64>::identity(n, n);
    // Column-major vec: vec(AV) = (I ⊗ A) vec(V), vec(VAᵀ) = (A ⊗ I) vec(V).
    let system = eye.kronecker(a) + a.kronecker(&eye);
    let rhs = DVector::from_iterator(n * n, d.iter().map(|x| -x));
    let sol = system.lu().solve(&rhs).ok_or(Error::Singular("Lyapunov system"))?;
    let mut v = DMatrix::from_column_slice(n, n, sol.as_slice());
    symmetrize(&mut v);
    Ok(v)
}
