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

//! Integration properties of the unconditional, conditional and
//! semi-classical solvers.

use std::f64::consts::PI;

use gaussim::dynamics::*;
use gaussim::linalg::spectral_abscissa;
use gaussim::phase_space::linspace;
use gaussim::GaussianState;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

fn damped(omega: f64, gamma: f64) -> DynamicsSpec {
    let a = DMatrix::from_row_slice(2, 2, &[-gamma / 2.0, omega, -omega, -gamma / 2.0]);
    DynamicsSpec::new(a, DMatrix::identity(2, 2) * gamma, DVector::zeros(2)).unwrap()
}

/// Two coupled, thermally damped modes.
fn coupled() -> DynamicsSpec {
    let h = DMatrix::from_row_slice(
        4,
        4,
        &[2.0, 0.0, 0.4, 0.1, 0.0, 2.0, 0.1, 0.3, 0.4, 0.1, 3.0, 0.0, 0.1, 0.3, 0.0, 3.0],
    );
    let bath = Bath::independent_thermal(2, 0.8, 0.5).unwrap();
    DynamicsSpec::from_hamiltonian(&h, &DVector::from_vec(vec![0.2, 0.0, 0.0, -0.1]), Some(&bath)).unwrap()
}

fn terminal_cov(spec: &DynamicsSpec, initial: &GaussianState, t: f64, steps: usize) -> DMatrix<f64> {
    unconditional_dynamics_with(spec, initial, &[0.0, t], StepControl::Substeps(steps))
        .unwrap()
        .last()
        .unwrap()
        .cov()
        .clone()
}

#[test]
fn rk4_converges_at_fourth_order() {
    let spec = coupled();
    let mut initial = GaussianState::squeezed(0.6, 0.3).tensor(&GaussianState::thermal(0.4).unwrap());
    initial.beam_splitter(0, 1, 0.7).unwrap();
    let t = 2.0;
    let v: Vec<DMatrix<f64>> = [20, 40, 80].iter().map(|&n| terminal_cov(&spec, &initial, t, n)).collect();
    let ratio = (&v[0] - &v[1]).norm() / (&v[1] - &v[2]).norm();
    assert!((ratio - 16.0).abs() < 0.3 * 16.0, "step-halving ratio {ratio}");
}

#[test]
fn long_runs_reach_the_steady_state() {
    let spec = coupled();
    let Drift::Constant(a) = spec.drift() else { unreachable!() };
    let decay_time = -1.0 / spectral_abscissa(a);
    let ss = steady_state(&spec).unwrap();
    let mut initial = GaussianState::squeezed(1.0, 0.0).tensor(&GaussianState::thermal(2.0).unwrap());
    initial.displace(1, Complex64::new(0.5, -0.5)).unwrap();
    let series = unconditional_dynamics(&spec, &initial, &[0.0, 10.0 * decay_time]).unwrap();
    let end = series.last().unwrap();
    assert!((end.cov() - ss.cov()).norm() < 1e-6, "{}", (end.cov() - ss.cov()).norm());
    // The mean relaxes at the slowest rate itself, so it keeps a factor e^{-10}.
    assert!((end.mean() - ss.mean()).norm() < 1e-4 * (initial.mean() - ss.mean()).norm());
}

#[test]
fn steady_state_is_a_fixed_point() {
    for spec in [coupled(), damped(2.0 * PI, 2.0 * PI * 0.3)] {
        let Drift::Constant(a) = spec.drift() else { unreachable!() };
        let v = steady_state(&spec).unwrap().cov().clone();
        let residual = a * &v + &v * a.transpose() + spec.diffusion();
        assert!(residual.norm() < 1e-10 * spec.diffusion().norm());
    }
}

#[test]
fn flows_from_a_physical_bath_stay_physical() {
    let spec = coupled();
    let initial = GaussianState::squeezed(1.1, 0.0).tensor(&GaussianState::vacuum(1).unwrap());
    let series = unconditional_dynamics(&spec, &initial, &linspace(0.0, 5.0, 60)).unwrap();
    for s in series.states() {
        assert!(s.min_symplectic_eigenvalue().unwrap() >= 1.0 - 1e-6);
    }
}

fn opo(gamma: f64, chi: f64) -> DynamicsSpec {
    DynamicsSpec::new(
        DMatrix::from_row_slice(2, 2, &[-chi - gamma / 2.0, 0.0, 0.0, chi - gamma / 2.0]),
        DMatrix::identity(2, 2) * gamma,
        DVector::zeros(2),
    )
    .unwrap()
}

fn homodyne_x(gamma: f64, n: usize, seed: u64) -> MonitoringSpec {
    MonitoringSpec::new(Bath::independent_thermal(1, gamma, 0.0).unwrap(), vec![(1e-5, PI / 2.0)], n, seed).unwrap()
}

#[test]
fn conditional_ensemble_mean_tracks_the_unconditional_mean() {
    let gamma = 2.0 * PI;
    let spec = opo(gamma, gamma / 3.0);
    let initial = GaussianState::coherent(Complex64::new(3.0, -1.0));
    let times = linspace(0.0, 0.5, 6);
    let ens = conditional_dynamics(&spec, &homodyne_x(gamma, 10_000, 2024), &initial, &times).unwrap();
    let unc = unconditional_dynamics(&spec, &initial, &times).unwrap();
    for (k, s) in unc.states().iter().enumerate().skip(1) {
        let mean = ens.mean(k);
        let se = ens.standard_error(k);
        for i in 0..2 {
            assert!(se[i] > 0.0);
            assert!((mean[i] - s.mean()[i]).abs() < 3.0 * se[i], "t = {}, component {i}", times[k]);
        }
    }
    // Law of total variance: the averaged state recovers the unconditional V.
    let avg = ens.ensemble_states().unwrap();
    let last = avg.last().unwrap().cov();
    let expected = unc.last().unwrap().cov();
    assert!((last - expected).norm() < 0.05 * expected.norm());
}

#[test]
fn stochastic_paths_are_seeded() {
    let spec = opo(3.0, 1.0);
    let initial = GaussianState::coherent(Complex64::new(1.0, 0.0));
    let times = [0.0, 0.2, 0.4];
    let a = conditional_dynamics(&spec, &homodyne_x(3.0, 16, 5), &initial, &times).unwrap();
    let b = conditional_dynamics(&spec, &homodyne_x(3.0, 16, 5), &initial, &times).unwrap();
    let c = conditional_dynamics(&spec, &homodyne_x(3.0, 16, 6), &initial, &times).unwrap();
    assert_eq!(a, b);
    assert_ne!(a.trajectory(0), c.trajectory(0));
    // Trajectories draw from disjoint streams.
    assert_ne!(a.trajectory(0), a.trajectory(1));

    let serial = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let single = serial.install(|| conditional_dynamics(&spec, &homodyne_x(3.0, 16, 5), &initial, &times).unwrap());
    assert_eq!(a, single);

    let damped = damped(1.0, 0.5);
    let r0 = DVector::from_vec(vec![1.0, 0.0]);
    let x = semi_classical(&damped, &r0, &times, 8, 1).unwrap();
    let y = serial.install(|| semi_classical(&damped, &r0, &times, 8, 1).unwrap());
    let z = semi_classical(&damped, &r0, &times, 8, 2).unwrap();
    assert_eq!(x, y);
    assert_ne!(x.trajectory(3), z.trajectory(3));
}

#[test]
fn semi_classical_stationary_covariance_is_the_vacuum() {
    let gamma = 2.0 * PI * 0.3;
    let spec = damped(2.0 * PI, gamma);
    let times = linspace(0.0, 9.0, 19);
    let ens = semi_classical_with(&spec, &DVector::zeros(2), &times, 4000, 77, StepControl::Substeps(50)).unwrap();
    // Pool late times, where the transient has died out.
    let late: Vec<usize> = (0..times.len()).filter(|&k| times[k] >= 4.0).collect();
    let pooled =
        late.iter().map(|&k| ens.sample_covariance(k)).fold(DMatrix::zeros(2, 2), |a, b| a + b) / late.len() as f64;
    assert!((pooled.clone() - DMatrix::identity(2, 2)).abs().max() < 0.05, "{pooled}");
}
