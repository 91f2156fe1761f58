//! Quadratic expansion of the effective two-atom potential about the trap
//! centres.
//!
//! Displacements are measured from the trap centres: atom 1 at `+z0`, atom 2
//! at `−z0`, so that for both atoms a negative/positive axial displacement
//! respectively moves it toward the ion. Relative and centre-of-mass
//! coordinates are `(d₁ − d₂)/√2` and `(d₁ + d₂)/√2`.
//!
//! The expansion keeps the sign of the spring-energy term `−½kζ0²` that comes
//! from completing the square, which fixes the signs of the cross terms in
//! A₁₀^{αβ}: the ion cannot follow both atoms at once, so the pair coupling
//! through the axial ion shift is repulsive.

use std::f64::consts::SQRT_2;

use nalgebra::{Matrix6, Vector6};

use crate::bo::IonModeIndex;
use crate::model::SystemConfig;

/// A-coefficients of the expanded potential. A₁₂ and A₁₀ are in m¹²/s², A₆
/// and A₄ in m⁶/s².
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpansionCoefficients {
    /// 16 (C₄ʲ)² / (m_a m_i ω_iρ²)
    pub a12: [f64; 2],
    /// 16 C₄¹ C₄² / (m_a m_i ω_iρ²)
    pub a12_ab: f64,
    /// 16 (C₄ʲ)² / (m_a m_i ω_iz²)
    pub a10: [f64; 2],
    pub a10_ab: f64,
    /// 4 C₄ʲ / m_a
    pub a6: [f64; 2],
    /// 2 C₄ʲ / m_a
    pub a4: [f64; 2],
    /// Value of the effective potential with both atoms at their trap
    /// centres, J.
    pub e0_bar: f64,
}

pub fn expansion_coefficients(config: &SystemConfig) -> ExpansionCoefficients {
    coefficients_at(config, config.z0, config.ion_mode)
}

fn coefficients_at(config: &SystemConfig, z0: f64, mu: IonModeIndex) -> ExpansionCoefficients {
    let m_a = config.atom.mass();
    let k_rho = config.ion.radial_stiffness();
    let k_z = config.ion.axial_stiffness();
    let [c1, c2] = config.couplings.c4;
    let c6 = config.couplings.c6;

    let a12 = [16.0 * c1 * c1 / (m_a * k_rho), 16.0 * c2 * c2 / (m_a * k_rho)];
    let a10 = [16.0 * c1 * c1 / (m_a * k_z), 16.0 * c2 * c2 / (m_a * k_z)];
    let a10_ab = 16.0 * c1 * c2 / (m_a * k_z);
    let a4 = [2.0 * c1 / m_a, 2.0 * c2 / m_a];

    let e0_bar = mu.energy(config)
        - m_a * (a4[0] + a4[1]) / (2.0 * z0.powi(4))
        - m_a * (a10[0] + a10[1]) / (2.0 * z0.powi(10))
        + m_a * a10_ab / z0.powi(10)
        - c6 / (64.0 * z0.powi(6));

    ExpansionCoefficients {
        a12,
        a12_ab: 16.0 * c1 * c2 / (m_a * k_rho),
        a10,
        a10_ab,
        a6: [4.0 * c1 / m_a, 4.0 * c2 / m_a],
        a4,
        e0_bar,
    }
}

/// Signed squared frequencies (rad²/s²) of the expanded potential. They may
/// be negative below the stability threshold.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectiveFrequencies {
    /// Modified radial frequency of each atom, (ω̄_aρʲ)².
    pub radial_sq: [f64; 2],
    /// Modified axial frequency of each atom, (ω̄_azʲ)².
    pub axial_sq: [f64; 2],
    /// Mean of the two radial squares, ω′_ρ².
    pub prime_radial_sq: f64,
    pub prime_axial_sq: f64,
    /// Transverse pair coupling: the (x₁, x₂) Hessian entry is −m_a ω_xy².
    pub xy_sq: f64,
    /// Axial pair coupling: the (z₁, z₂) Hessian entry is +m_a ω_zz².
    pub zz_sq: f64,
    /// Linear-force scales: the z-force constant on atom j is ∓m_a z0 Ω_j².
    pub omega_sq: [f64; 2],
}

fn signed_sqrt(x: f64) -> Option<f64> {
    (x >= 0.0).then(|| x.sqrt())
}

impl EffectiveFrequencies {
    pub fn radial(&self, j: usize) -> Option<f64> {
        signed_sqrt(self.radial_sq[j])
    }

    pub fn axial(&self, j: usize) -> Option<f64> {
        signed_sqrt(self.axial_sq[j])
    }
}

pub fn effective_frequencies(config: &SystemConfig, z0: f64) -> EffectiveFrequencies {
    let a = coefficients_at(config, z0, config.ion_mode);
    let m_a = config.atom.mass();
    let w_rho2 = config.atom.trap.radial.powi(2);
    let w_z2 = config.atom.trap.axial.powi(2);
    let c6 = config.couplings.c6;
    let z6 = z0.powi(6);
    let z8 = z0.powi(8);
    let z12 = z0.powi(12);
    let vdw = c6 / (m_a * z8);

    let radial = |j: usize| {
        w_rho2 + a.a6[j] / z6 - a.a12[j] / z12 + 6.0 * (a.a10[j] - a.a10_ab) / z12 + 3.0 * vdw / 128.0
    };
    let axial = |j: usize| {
        w_z2 - 10.0 * a.a4[j] / z6 - 55.0 * a.a10[j] / z12 + 30.0 * a.a10_ab / z12 - 21.0 * vdw / 128.0
    };
    let omega = |j: usize| 2.0 * a.a4[j] / z6 + 5.0 * (a.a10[j] - a.a10_ab) / z12 + 3.0 * vdw / 64.0;

    let radial_sq = [radial(0), radial(1)];
    let axial_sq = [axial(0), axial(1)];
    EffectiveFrequencies {
        radial_sq,
        axial_sq,
        prime_radial_sq: 0.5 * (radial_sq[0] + radial_sq[1]),
        prime_axial_sq: 0.5 * (axial_sq[0] + axial_sq[1]),
        xy_sq: a.a12_ab / z12 + 3.0 * vdw / 128.0,
        zz_sq: -25.0 * a.a10_ab / z12 + 21.0 * vdw / 128.0,
        omega_sq: [omega(0), omega(1)],
    }
}

/// Index of a coordinate in the relative/COM ordering `(x, y, z, X, Y, Z)`.
pub const REL_X: usize = 0;
pub const REL_Y: usize = 1;
pub const REL_Z: usize = 2;
pub const COM_X: usize = 3;
pub const COM_Y: usize = 4;
pub const COM_Z: usize = 5;

/// `U ≈ constant + linear·q + ½ qᵀ H q` in relative/COM displacement
/// coordinates `q = (x, y, z, X, Y, Z)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadraticForm {
    pub constant: f64,
    pub linear: Vector6<f64>,
    pub hessian: Matrix6<f64>,
}

/// Orthogonal map from atom displacements `(x₁, y₁, z₁, x₂, y₂, z₂)` to
/// `(x, y, z, X, Y, Z)`.
pub fn relative_com_transform() -> Matrix6<f64> {
    let s = 1.0 / SQRT_2;
    let mut t = Matrix6::zeros();
    for a in 0..3 {
        t[(a, a)] = s;
        t[(a, a + 3)] = -s;
        t[(a + 3, a)] = s;
        t[(a + 3, a + 3)] = s;
    }
    t
}

impl QuadraticForm {
    pub fn evaluate(&self, q: &Vector6<f64>) -> f64 {
        self.constant + self.linear.dot(q) + 0.5 * q.dot(&(self.hessian * q))
    }

    pub fn gradient(&self, q: &Vector6<f64>) -> Vector6<f64> {
        self.linear + self.hessian * q
    }

    /// The same form in atom displacement coordinates.
    pub fn to_atom_basis(&self) -> QuadraticForm {
        let t = relative_com_transform();
        QuadraticForm {
            constant: self.constant,
            linear: t.transpose() * self.linear,
            hessian: t.transpose() * self.hessian * t,
        }
    }
}

pub fn quadratic_potential(config: &SystemConfig, z0: f64, mu: IonModeIndex) -> QuadraticForm {
    let m_a = config.atom.mass();
    let coeffs = coefficients_at(config, z0, mu);
    let f = effective_frequencies(config, z0);

    let mut h = Matrix6::zeros();
    let mut block = |rel: usize, com: usize, mean: f64, coupling: f64, split: f64| {
        h[(rel, rel)] = m_a * (mean - coupling);
        h[(com, com)] = m_a * (mean + coupling);
        h[(rel, com)] = 0.5 * m_a * split;
        h[(com, rel)] = 0.5 * m_a * split;
    };
    let split_rho = f.radial_sq[0] - f.radial_sq[1];
    block(REL_X, COM_X, f.prime_radial_sq, -f.xy_sq, split_rho);
    block(REL_Y, COM_Y, f.prime_radial_sq, -f.xy_sq, split_rho);
    block(REL_Z, COM_Z, f.prime_axial_sq, f.zz_sq, f.axial_sq[0] - f.axial_sq[1]);

    let mut linear = Vector6::zeros();
    linear[REL_Z] = m_a * z0 * (f.omega_sq[0] + f.omega_sq[1]) / SQRT_2;
    linear[COM_Z] = m_a * z0 * (f.omega_sq[0] - f.omega_sq[1]) / SQRT_2;

    QuadraticForm { constant: coeffs.e0_bar, linear, hessian: h }
}
