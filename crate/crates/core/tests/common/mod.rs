//! Independent numerical oracles shared by the integration tests. Nothing
//! here calls the closed-form expansions of the library.
#![allow(dead_code)]

use ion_mediated::bo::{effective_potential_u, AtomPairGeometry, IonModeIndex};
use ion_mediated::constants::MICRON;
use ion_mediated::model::{ElectronicState, SystemConfig};
use nalgebra::{Matrix6, Vector3, Vector6};

pub const R30: ElectronicState = ElectronicState::Rydberg { n: 30 };
pub const R25: ElectronicState = ElectronicState::Rydberg { n: 25 };
pub const G: ElectronicState = ElectronicState::Ground;

pub fn paper(states: [ElectronicState; 2], two_z0_um: f64) -> SystemConfig {
    SystemConfig::rb_ca_rb(states, two_z0_um * MICRON)
}

/// U at atom displacements `q = (x1, y1, z1, x2, y2, z2)` from the trap centres.
pub fn u_at(config: &SystemConfig, q: &Vector6<f64>) -> f64 {
    let g = AtomPairGeometry::displaced(
        config.z0,
        Vector3::new(q[0], q[1], q[2]),
        Vector3::new(q[3], q[4], q[5]),
    );
    effective_potential_u(&g, IonModeIndex::ground(), config).unwrap()
}

/// Central-difference Hessian of U at the trap centres, atom coordinates.
pub fn fd_hessian(config: &SystemConfig, h: f64) -> Matrix6<f64> {
    let e = |i: usize| Vector6::ith(i, h);
    let f0 = u_at(config, &Vector6::zeros());
    let mut m = Matrix6::zeros();
    for i in 0..6 {
        for j in i..6 {
            let v = if i == j {
                (u_at(config, &e(i)) - 2.0 * f0 + u_at(config, &(-e(i)))) / (h * h)
            } else {
                (u_at(config, &(e(i) + e(j))) - u_at(config, &(e(i) - e(j))) - u_at(config, &(e(j) - e(i)))
                    + u_at(config, &(-e(i) - e(j))))
                    / (4.0 * h * h)
            };
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
    m
}

/// Rounding-noise floor of a second difference of U with step h.
pub fn fd_noise_floor(config: &SystemConfig, h: f64) -> f64 {
    16.0 * f64::EPSILON * u_at(config, &Vector6::zeros()).abs() / (h * h)
}

/// Central-difference gradient of U at the trap centres.
pub fn fd_gradient(config: &SystemConfig, h: f64) -> Vector6<f64> {
    Vector6::from_fn(|i, _| {
        let e = Vector6::ith(i, h);
        (u_at(config, &e) - u_at(config, &(-e))) / (2.0 * h)
    })
}

/// Minimises U over the axial displacements (z1, z2) by Newton iteration
/// with finite-difference derivatives.
pub fn minimise_axial_u(config: &SystemConfig) -> [f64; 2] {
    let a = config.scales().a_z;
    let f = |z1: f64, z2: f64| {
        let mut q = Vector6::zeros();
        q[2] = z1;
        q[5] = z2;
        u_at(config, &q)
    };
    let h = 1e-2 * a;
    let (mut z1, mut z2) = (0.0, 0.0);
    for _ in 0..100 {
        let f0 = f(z1, z2);
        let g1 = (f(z1 + h, z2) - f(z1 - h, z2)) / (2.0 * h);
        let g2 = (f(z1, z2 + h) - f(z1, z2 - h)) / (2.0 * h);
        let h11 = (f(z1 + h, z2) - 2.0 * f0 + f(z1 - h, z2)) / (h * h);
        let h22 = (f(z1, z2 + h) - 2.0 * f0 + f(z1, z2 - h)) / (h * h);
        let h12 = (f(z1 + h, z2 + h) - f(z1 + h, z2 - h) - f(z1 - h, z2 + h) + f(z1 - h, z2 - h)) / (4.0 * h * h);
        let det = h11 * h22 - h12 * h12;
        let d1 = -(h22 * g1 - h12 * g2) / det;
        let d2 = -(h11 * g2 - h12 * g1) / det;
        z1 += d1;
        z2 += d2;
        if d1.abs().max(d2.abs()) < 1e-9 * a {
            break;
        }
    }
    [z1, z2]
}

/// Normalised Hermite function φ_n(x) by the three-term recurrence.
pub fn hermite_fn(n: usize, x: f64) -> f64 {
    let mut p0 = std::f64::consts::PI.powf(-0.25) * (-0.5 * x * x).exp();
    if n == 0 {
        return p0;
    }
    let mut p1 = 2f64.sqrt() * x * p0;
    for k in 2..=n {
        let p2 = (2.0 / k as f64).sqrt() * x * p1 - ((k as f64 - 1.0) / k as f64).sqrt() * p0;
        p0 = p1;
        p1 = p2;
    }
    p1
}

/// ∫ φ_m(x − s) φ_n(x − t) dx by the trapezoid rule on a wide fine grid.
pub fn shifted_overlap(m: usize, s: f64, n: usize, t: f64) -> f64 {
    let half = 14.0;
    let points = 4001;
    let dx = 2.0 * half / (points - 1) as f64;
    let c = 0.5 * (s + t);
    (0..points)
        .map(|i| {
            let x = c - half + dx * i as f64;
            hermite_fn(m, x - s) * hermite_fn(n, x - t)
        })
        .sum::<f64>()
        * dx
}

/// Closed-form eigenvalues of a symmetric 2×2 matrix, ascending.
pub fn eig2(a: f64, b: f64, d: f64) -> [f64; 2] {
    let m = 0.5 * (a + d);
    let r = (0.5 * (a - d)).hypot(b);
    [m - r, m + r]
}

/// Levels of ½ qᵀKq + Lᵀq + c with K the full axial curvature, from the
/// closed-form 2×2 eigenvalues.
pub fn normal_mode_levels(c: &SystemConfig, p: &ion_mediated::motional::QuadraticAxialPotential, count: usize) -> Vec<f64> {
    let m = c.atom.mass();
    let trap = c.atom.axial_stiffness();
    let (k11, k12, k22) = (p.curvature[(0, 0)] + trap, p.curvature[(0, 1)], p.curvature[(1, 1)] + trap);
    let [lo, hi] = eig2(k11, k12, k22);
    let (w1, w2) = ((lo / m).sqrt(), (hi / m).sqrt());
    let det = k11 * k22 - k12 * k12;
    let (l1, l2) = (p.linear[0], p.linear[1]);
    // −½ Lᵀ K⁻¹ L
    let shift = -0.5 * (k22 * l1 * l1 - 2.0 * k12 * l1 * l2 + k11 * l2 * l2) / det;
    let mut levels: Vec<f64> = (0..12)
        .flat_map(|a| (0..12).map(move |b| (a, b)))
        .map(|(a, b)| p.constant + shift + ion_mediated::constants::HBAR * (w1 * (a as f64 + 0.5) + w2 * (b as f64 + 0.5)))
        .collect();
    levels.sort_by(f64::total_cmp);
    levels.truncate(count);
    levels
}
