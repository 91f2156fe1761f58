//! Axial pair ground state: matrix assembly, eigensolver, Gaussian limit and
//! densities.

mod common;

use approx::assert_relative_eq;
use common::*;
use ion_mediated::constants::{HBAR, MICRON};
use ion_mediated::eigen::symmetric_eigensolve;
use ion_mediated::error::Error;
use ion_mediated::motional::*;
use ion_mediated::phonons::phonon_spectrum;
use nalgebra::DMatrix;

#[test]
fn free_atoms_give_a_diagonal_oscillator_matrix() {
    let c = paper([R30, R30], 16.0).with_couplings(0.0, 0.0, 0.0);
    let n = 8;
    let h = axial_hamiltonian_matrix(&c, c.z0, n).unwrap();
    let hw = HBAR * c.atom.trap.axial;
    for i in 0..=n {
        for j in 0..=n {
            for k in 0..=n {
                for l in 0..=n {
                    let v = h[(basis_index(i, j, n), basis_index(k, l, n))];
                    let expect = if (i, j) == (k, l) { hw * (i + j + 1) as f64 } else { 0.0 };
                    assert_eq!(v, expect);
                }
            }
        }
    }
}

#[test]
fn assembled_matrix_is_exactly_symmetric() {
    let c = paper([R30, G], 14.0);
    let h = axial_hamiltonian_matrix(&c, c.z0, 12).unwrap();
    assert_eq!((&h - h.transpose()).amax(), 0.0);
}

#[test]
fn quadratic_potential_reproduces_normal_mode_levels() {
    for (states, two_z0) in [([R30, R30], 20.0), ([R30, G], 14.0), ([R30, R30], 14.0)] {
        let c = paper(states, two_z0);
        let p = QuadraticAxialPotential::new(&c, c.z0);
        let h = hamiltonian_matrix(&p, &c, 30).unwrap();
        let eig = symmetric_eigensolve(&h).unwrap();
        let oracle = normal_mode_levels(&c, &p, 6);
        for (k, want) in oracle.iter().enumerate() {
            let got = eig.values[k];
            assert!(
                ((got - want) / want).abs() < 1e-8,
                "{} at {two_z0}: level {k} {got:e} vs {want:e}",
                c.pair_label()
            );
        }
    }
}

#[test]
fn eigensolver_reconstruction_and_residuals() {
    // deterministic pseudo-random symmetric matrix
    let mut state = 0x2545F4914F6CDD1Du64;
    let mut next = || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
    };
    let mut a = DMatrix::zeros(50, 50);
    for i in 0..50 {
        for j in 0..=i {
            let v = next();
            a[(i, j)] = v;
            a[(j, i)] = v;
        }
    }
    let e = symmetric_eigensolve(&a).unwrap();
    let recon = &e.vectors * DMatrix::from_diagonal(&e.values) * e.vectors.transpose();
    assert!((&recon - &a).norm() <= 1e-9 * a.norm());
    assert!(e.max_residual(&a) <= 1e-10 * a.norm());
    for w in e.values.as_slice().windows(2) {
        assert!(w[0] <= w[1]);
    }
    for k in 0..50 {
        let col = e.vectors.column(k);
        assert!(col[col.iamax()] > 0.0);
    }
    let big = DMatrix::<f64>::zeros(4001, 1);
    assert!(matches!(symmetric_eigensolve(&big), Err(Error::InvalidInput(_))));
}

#[test]
fn gaussian_limits() {
    let free = paper([R30, R30], 16.0).with_couplings(0.0, 0.0, 0.0);
    let g = gaussian_ground_state(&free, free.z0).unwrap();
    let a_z = free.scales().a_z;
    assert_relative_eq!(g.widths[0], a_z, max_relative = 1e-12);
    assert_relative_eq!(g.widths[1], a_z, max_relative = 1e-12);
    assert_eq!(g.center, [0.0, 0.0]);
    let axes = g.normal_axes;
    assert!((axes[(0, 0)].abs() - 1.0).abs() < 1e-12 || (axes[(0, 0)].abs() - 1.0 / 2f64.sqrt()).abs() < 1e-12);

    // the softest width grows like (ω²)^{-1/4} toward the threshold
    let c = paper([R30, R30], 16.0);
    let mut prev = 0.0;
    for two_z0 in [16.0, 12.0, 10.0, 9.5, 9.25] {
        let z0 = 0.5 * two_z0 * MICRON;
        let g = gaussian_ground_state(&c, z0).unwrap();
        let soft = phonon_spectrum(&c, z0).axial[0].omega_sq;
        let expect = (HBAR / c.atom.mass()).sqrt() * soft.powf(-0.25);
        assert_relative_eq!(g.widths[1].max(g.widths[0]), expect, max_relative = 1e-9);
        assert!(g.widths[0] > prev);
        prev = g.widths[0];
    }
    assert!(matches!(gaussian_ground_state(&c, 4.5 * MICRON), Err(Error::Instability(_))));
}

#[test]
fn ramp_is_variational_and_converges() {
    let c = paper([R30, R30], 20.0);
    let p = FullAxialPotential::new(&c, c.z0);
    let h = hamiltonian_matrix(&p, &c, 30).unwrap();
    // nested bases: monotone up to the rounding level of the eigensolver
    let slack = 64.0 * f64::EPSILON * h.amax();
    let mut prev = f64::INFINITY;
    for n in (6..=30).step_by(4) {
        let e = symmetric_eigensolve(&truncate_basis(&h, 30, n)).unwrap().values[0];
        assert!(e <= prev + slack, "n_max = {n}");
        prev = e;
    }
    let state = full_ground_state(&c, c.z0, RampOptions::default()).unwrap();
    assert!(state.convergence < 1e-6);
    assert_relative_eq!(state.norm(), 1.0, max_relative = 1e-10);
    let g = gaussian_ground_state(&c, c.z0).unwrap();
    assert!(state.overlap_with(&g).abs() >= 0.999);
}

#[test]
fn density_normalisation_and_grid_checks() {
    let c = paper([R30, G], 16.0);
    let g = gaussian_ground_state(&c, c.z0).unwrap();
    let (z1, z2) = default_grid(&g, 61);
    let rho = pair_density(&g, &z1, &z2).unwrap();
    assert!((rho.integral - 1.0).abs() < 1e-4);

    // too coarse: three points across ±6σ
    let (z1, z2) = default_grid(&g, 3);
    assert!(matches!(pair_density(&g, &z1, &z2), Err(Error::Accuracy(_))));
    // too narrow
    let s = g.spread();
    let z1 = centered_axis(g.center[0], 2.0 * s[0], 41);
    let z2 = centered_axis(g.center[1], 6.0 * s[1], 41);
    assert!(matches!(pair_density(&g, &z1, &z2), Err(Error::InvalidInput(_))));
}

#[test]
fn density_distorts_toward_threshold() {
    let c = paper([R30, R30], 16.0);
    let mut prev = 1.0;
    for two_z0 in [24.0, 16.0, 13.0, 12.0] {
        let state = full_ground_state(&c, 0.5 * two_z0 * MICRON, RampOptions::default()).unwrap();
        let ov = state.product_ground_overlap();
        assert!(ov < prev, "2z0 = {two_z0}: {ov} vs {prev}");
        prev = ov;
        let (z1, z2) = default_grid(&state, 61);
        let rho = pair_density(&state, &z1, &z2).unwrap();
        assert!((rho.integral - 1.0).abs() < 1e-4);
    }
}

#[test]
fn symmetric_pair_density_mirror() {
    // for identical states the map (z1', z2') → (−z2', −z1') is a symmetry
    let c = paper([R30, R30], 16.0);
    let state = full_ground_state(&c, c.z0, RampOptions::default()).unwrap();
    let ([m1, m2], s) = state.moments();
    assert_relative_eq!(m1, -m2, max_relative = 1e-9);
    let centre = 0.5 * (m1 - m2);
    let half = 6.0 * s[0].max(s[1]);
    let z1 = centered_axis(centre, half, 61);
    let z2 = centered_axis(-centre, half, 61);
    let rho = pair_density(&state, &z1, &z2).unwrap();
    let n = z1.len();
    let peak = rho.density.max();
    for i in 0..n {
        for j in 0..n {
            let d = (rho.density[(i, j)] - rho.density[(n - 1 - j, n - 1 - i)]).abs();
            assert!(d <= 1e-10 * peak, "({i},{j})");
        }
    }
}

#[test]
fn quadratic_limit_density_matches_gaussian() {
    let c = paper([R30, G], 14.0);
    let p = QuadraticAxialPotential::new(&c, c.z0);
    let state = basis_ground_state(&p, &c, RampOptions::default()).unwrap();
    let g = gaussian_ground_state(&c, c.z0).unwrap();
    let (z1, z2) = default_grid(&g, 41);
    let a = pair_density(&state, &z1, &z2).unwrap();
    let b = pair_density(&g, &z1, &z2).unwrap();
    let peak = b.density.max();
    for (x, y) in a.density.iter().zip(b.density.iter()) {
        if *y >= 0.5 * peak {
            assert!(((x - y) / y).abs() < 1e-6);
        }
    }
}

#[test]
fn extent_and_cutoff_preconditions() {
    let c = paper([R30, R30], 16.0);
    assert!(matches!(axial_hamiltonian_matrix(&c, c.z0, 61), Err(Error::InvalidInput(_))));
    assert!(matches!(axial_hamiltonian_matrix(&c, 1.0 * MICRON, 30), Err(Error::InvalidInput(_))));
}
