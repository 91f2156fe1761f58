//! Adiabatic (Born–Oppenheimer) potentials generated by the fast ion motion.
//!
//! The ion sits in a harmonic trap and is pulled by the two atoms through
//! −C₄/r⁴. Expanding that attraction to first order in the ion coordinate
//! shifts the trap centre to `(x0, y0, ζ0)` and lowers the energy by the
//! classical spring energy of that shift, which gives the closed-form
//! adiabatic eigenvalue [`bo_eigenvalue`]. [`oracle_min_ion_energy`]
//! minimises the unexpanded potential numerically as an independent check.

use nalgebra::{Matrix3, Vector3};

use crate::constants::HBAR;
use crate::error::{Error, Result};
use crate::model::{ElectronicState, SystemConfig};

/// Ion motional quantum numbers μ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum IonModeIndex {
    Cylindrical { n_rho: u32, m: i32, n_z: u32 },
    Cartesian { n_x: u32, n_y: u32, n_z: u32 },
}

impl IonModeIndex {
    pub fn ground() -> Self {
        IonModeIndex::Cylindrical { n_rho: 0, m: 0, n_z: 0 }
    }

    /// Number of radial quanta, 2n_ρ + |m| or n_x + n_y.
    pub fn radial_quanta(&self) -> u32 {
        match *self {
            IonModeIndex::Cylindrical { n_rho, m, .. } => 2 * n_rho + m.unsigned_abs(),
            IonModeIndex::Cartesian { n_x, n_y, .. } => n_x + n_y,
        }
    }

    pub fn axial_quanta(&self) -> u32 {
        match *self {
            IonModeIndex::Cylindrical { n_z, .. } | IonModeIndex::Cartesian { n_z, .. } => n_z,
        }
    }

    /// Bare oscillator energy E_μ⁽⁰⁾ of the ion in its trap, J.
    pub fn energy(&self, config: &SystemConfig) -> f64 {
        let trap = &config.ion.trap;
        HBAR * trap.radial * (self.radial_quanta() as f64 + 1.0)
            + HBAR * trap.axial * (self.axial_quanta() as f64 + 0.5)
    }
}

/// Positions of the two atoms, m.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AtomPairGeometry {
    pub r1: Vector3<f64>,
    pub r2: Vector3<f64>,
}

impl AtomPairGeometry {
    pub fn new(r1: Vector3<f64>, r2: Vector3<f64>) -> Self {
        Self { r1, r2 }
    }

    pub fn on_axis(z1: f64, z2: f64) -> Self {
        Self::new(Vector3::new(0.0, 0.0, z1), Vector3::new(0.0, 0.0, z2))
    }

    /// Both atoms at their trap centres `(0, 0, ±z0)`.
    pub fn at_trap_centers(z0: f64) -> Self {
        Self::on_axis(z0, -z0)
    }

    /// Atoms displaced by `d1`, `d2` from their trap centres.
    pub fn displaced(z0: f64, d1: Vector3<f64>, d2: Vector3<f64>) -> Self {
        let c = Self::at_trap_centers(z0);
        Self::new(c.r1 + d1, c.r2 + d2)
    }

    pub fn atom(&self, j: usize) -> &Vector3<f64> {
        match j {
            0 => &self.r1,
            1 => &self.r2,
            _ => panic!("atom index {j} out of range"),
        }
    }

    pub fn swapped(&self) -> Self {
        Self::new(self.r2, self.r1)
    }

    fn check(&self) -> Result<()> {
        let d1 = self.r1.norm();
        let d2 = self.r2.norm();
        if !(d1 > 0.0) || !(d2 > 0.0) {
            return Err(Error::SingularGeometry(format!(
                "atom at the ion trap centre (|r1| = {d1:e} m, |r2| = {d2:e} m)"
            )));
        }
        if self.r1 == self.r2 {
            return Err(Error::SingularGeometry("the two atoms coincide".into()));
        }
        Ok(())
    }
}

/// Equilibrium shift of the ion trap centre, m.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IonDisplacement {
    pub x0: f64,
    pub y0: f64,
    pub zeta0: f64,
}

impl IonDisplacement {
    pub fn as_vector(&self) -> Vector3<f64> {
        Vector3::new(self.x0, self.y0, self.zeta0)
    }
}

fn ion_stiffness(config: &SystemConfig) -> Vector3<f64> {
    let k_rho = config.ion.radial_stiffness();
    Vector3::new(k_rho, k_rho, config.ion.axial_stiffness())
}

/// `(x0, y0, ζ0)` with `x0 = 4/(m_i ω_iρ²) (C₄¹ x₁/r₁⁶ + C₄² x₂/r₂⁶)` and the
/// analogous expressions for y and z (the latter with ω_iz).
pub fn ion_displacement(geometry: &AtomPairGeometry, config: &SystemConfig) -> Result<IonDisplacement> {
    geometry.check()?;
    let k = ion_stiffness(config);
    let [c4a, c4b] = config.couplings.c4;
    let pull = geometry.r1 * (c4a / geometry.r1.norm_squared().powi(3))
        + geometry.r2 * (c4b / geometry.r2.norm_squared().powi(3));
    Ok(IonDisplacement {
        x0: 4.0 * pull.x / k.x,
        y0: 4.0 * pull.y / k.y,
        zeta0: 4.0 * pull.z / k.z,
    })
}

/// ∂(x0, y0, ζ0)/∂r_j for atom `j` (0 or 1); row = displacement component,
/// column = atom coordinate.
pub fn displacement_jacobian(geometry: &AtomPairGeometry, config: &SystemConfig, j: usize) -> Result<Matrix3<f64>> {
    geometry.check()?;
    let k = ion_stiffness(config);
    let c4 = config.couplings.c4[j];
    let r = geometry.atom(j);
    let r2 = r.norm_squared();
    let r6 = r2 * r2 * r2;
    // ∂(v_a / r⁶)/∂v_b = δ_ab / r⁶ − 6 v_a v_b / r⁸
    let d = Matrix3::identity() / r6 - (r * r.transpose()) * (6.0 / (r6 * r2));
    let mut jac = d * (4.0 * c4);
    for a in 0..3 {
        for b in 0..3 {
            jac[(a, b)] /= k[a];
        }
    }
    Ok(jac)
}

/// V_μ − E_μ⁽⁰⁾: the classical part of the adiabatic eigenvalue, J.
pub fn bo_interaction(geometry: &AtomPairGeometry, config: &SystemConfig) -> Result<f64> {
    let shift = ion_displacement(geometry, config)?;
    let k = ion_stiffness(config);
    let [c4a, c4b] = config.couplings.c4;
    let d1 = geometry.r1.norm_squared();
    let d2 = geometry.r2.norm_squared();
    let d12 = (geometry.r1 - geometry.r2).norm_squared();
    let spring = 0.5 * (k.x * shift.x0 * shift.x0 + k.y * shift.y0 * shift.y0 + k.z * shift.zeta0 * shift.zeta0);
    Ok(-spring - (c4a / (d1 * d1) + c4b / (d2 * d2)) - config.couplings.c6 / (d12 * d12 * d12))
}

/// Adiabatic eigenvalue V_μ(r₁, r₂) of the ion in mode `mu`, J.
pub fn bo_eigenvalue(geometry: &AtomPairGeometry, mu: IonModeIndex, config: &SystemConfig) -> Result<f64> {
    Ok(mu.energy(config) + bo_interaction(geometry, config)?)
}

/// The unexpanded ion potential: harmonic trap minus both −C₄/r⁴ terms,
/// evaluated at ion position `r_i`. The atom–atom term is not included.
pub fn exact_ion_potential(r_i: &Vector3<f64>, geometry: &AtomPairGeometry, config: &SystemConfig) -> Result<f64> {
    let k = ion_stiffness(config);
    let s1 = (r_i - geometry.r1).norm_squared();
    let s2 = (r_i - geometry.r2).norm_squared();
    if !(s1 > 0.0) || !(s2 > 0.0) {
        return Err(Error::SingularGeometry("ion coincides with an atom".into()));
    }
    let [c4a, c4b] = config.couplings.c4;
    let harmonic = 0.5 * (k.x * r_i.x * r_i.x + k.y * r_i.y * r_i.y + k.z * r_i.z * r_i.z);
    Ok(harmonic - c4a / (s1 * s1) - c4b / (s2 * s2))
}

/// Trap energy of both atoms about `(0, 0, ±z0)`, J.
pub fn atom_trap_energy(geometry: &AtomPairGeometry, config: &SystemConfig) -> f64 {
    let k_rho = config.atom.radial_stiffness();
    let k_z = config.atom.axial_stiffness();
    let z0 = config.z0;
    let term = |r: &Vector3<f64>, zc: f64| {
        0.5 * k_rho * (r.x * r.x + r.y * r.y) + 0.5 * k_z * (r.z - zc) * (r.z - zc)
    };
    term(&geometry.r1, z0) + term(&geometry.r2, -z0)
}

/// U_μ = atom trap energy + V_μ, the potential seen by the slow atoms, J.
pub fn effective_potential_u(geometry: &AtomPairGeometry, mu: IonModeIndex, config: &SystemConfig) -> Result<f64> {
    Ok(atom_trap_energy(geometry, config) + bo_eigenvalue(geometry, mu, config)?)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IonMinimum {
    pub energy: f64,
    pub position: Vector3<f64>,
    pub iterations: usize,
}

const ORACLE_MAX_ITER: usize = 500;
const ORACLE_ENERGY_RTOL: f64 = 1e-12;

/// Minimises [`exact_ion_potential`] by damped Newton iteration from the
/// origin, with gradient and Hessian from central differences.
pub fn oracle_min_ion_energy(geometry: &AtomPairGeometry, config: &SystemConfig) -> Result<IonMinimum> {
    geometry.check()?;
    let scale = config.scales().l_i;
    for (j, r) in [geometry.r1, geometry.r2].iter().enumerate() {
        if r.norm() <= 10.0 * scale {
            return Err(Error::InvalidInput(format!(
                "atom {} at {:.3e} m is within 10 ion lengths of the trap centre",
                j + 1,
                r.norm()
            )));
        }
    }
    let f = |u: &Vector3<f64>| exact_ion_potential(&(u * scale), geometry, config);
    let hg = 1e-3;
    let hh = 1e-2;

    let mut u = Vector3::zeros();
    let mut energy = f(&u)?;
    for it in 1..=ORACLE_MAX_ITER {
        let mut grad = Vector3::zeros();
        let mut hess = Matrix3::zeros();
        for a in 0..3 {
            let ea = Vector3::ith(a, 1.0);
            grad[a] = (f(&(u + ea * hg))? - f(&(u - ea * hg))?) / (2.0 * hg);
            for b in a..3 {
                let eb = Vector3::ith(b, 1.0);
                let v = if a == b {
                    (f(&(u + ea * hh))? - 2.0 * energy + f(&(u - ea * hh))?) / (hh * hh)
                } else {
                    (f(&(u + (ea + eb) * hh))? - f(&(u + (ea - eb) * hh))? - f(&(u - (ea - eb) * hh))?
                        + f(&(u - (ea + eb) * hh))?)
                        / (4.0 * hh * hh)
                };
                hess[(a, b)] = v;
                hess[(b, a)] = v;
            }
        }
        let step = match hess.cholesky() {
            Some(ch) => -ch.solve(&grad),
            None => {
                let diag = hess.diagonal().abs().max();
                if diag > 0.0 { -grad / diag } else { -grad }
            }
        };

        let mut alpha = 1.0;
        let (next, next_energy) = loop {
            let cand = u + step * alpha;
            let e = f(&cand)?;
            if e <= energy || alpha < 1e-12 {
                break (cand, e);
            }
            alpha *= 0.5;
        };
        let moved = (step * alpha).amax();
        let change = (energy - next_energy).abs();
        u = next;
        energy = next_energy;
        if moved < 1e-9 && change <= ORACLE_ENERGY_RTOL * energy.abs() {
            return Ok(IonMinimum { energy, position: u * scale, iterations: it });
        }
    }
    Err(Error::NonConvergence { what: "ion potential minimisation".into(), iterations: ORACLE_MAX_ITER })
}

/// How the scalar separation z of a potential curve maps to atom positions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Placement {
    /// r₁ = (0, 0, z/2), r₂ = (0, 0, −z/2).
    Symmetric,
    /// Atom 2 pinned at its trap centre (0, 0, −z0), r₁ = r₂ + (0, 0, z).
    Atom2Fixed,
}

impl Placement {
    pub fn geometry(&self, z: f64, z0: f64) -> AtomPairGeometry {
        match self {
            Placement::Symmetric => AtomPairGeometry::on_axis(0.5 * z, -0.5 * z),
            Placement::Atom2Fixed => AtomPairGeometry::on_axis(z - z0, -z0),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Placement::Symmetric => "symmetric",
            Placement::Atom2Fixed => "atom2-fixed",
        }
    }
}

/// One point of an on-axis potential curve. Energies are V_μ − E_μ⁽⁰⁾, J.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoCurveRow {
    pub z: f64,
    pub rr: f64,
    pub rg: f64,
    pub gg: f64,
    /// The −C₆/r⁶ contribution to `rr`.
    pub vdw_rr: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoCurve {
    pub placement: Placement,
    pub mu: IonModeIndex,
    pub rydberg: ElectronicState,
    pub rows: Vec<BoCurveRow>,
}

/// Adiabatic potential along the trap axis for the Rydberg–Rydberg,
/// Rydberg–ground and ground–ground pairs. The Rydberg level is the first
/// Rydberg state in the configuration, or the coefficient anchor if both
/// atoms are in the ground state. In the mixed pair atom 1 is the Rydberg
/// atom.
pub fn axial_bo_curve(
    z_grid: &[f64],
    mu: IonModeIndex,
    config: &SystemConfig,
    placement: Placement,
) -> Result<BoCurve> {
    let rydberg = config
        .states
        .iter()
        .copied()
        .find(ElectronicState::is_rydberg)
        .unwrap_or(ElectronicState::rydberg(config.coefficients.anchor_n));
    let g = ElectronicState::Ground;
    let with = |a: ElectronicState, b: ElectronicState| config.with_states([a, b]);
    let rr = with(rydberg, rydberg)?;
    let rg = with(rydberg, g)?;
    let gg = with(g, g)?;

    let mut rows = Vec::with_capacity(z_grid.len());
    for &z in z_grid {
        if z == 0.0 {
            return Err(Error::SingularGeometry("separation grid touches zero".into()));
        }
        if !(z > 0.0) {
            return Err(Error::InvalidInput(format!("separation {z:e} m is not positive")));
        }
        let geom = placement.geometry(z, config.z0);
        let v = |c: &SystemConfig| bo_interaction(&geom, c);
        let d12 = (geom.r1 - geom.r2).norm();
        rows.push(BoCurveRow {
            z,
            rr: v(&rr)?,
            rg: v(&rg)?,
            gg: v(&gg)?,
            vdw_rr: -rr.couplings.c6 / d12.powi(6),
        });
    }
    Ok(BoCurve { placement, mu, rydberg, rows })
}
