//! Normal modes of the quadratic two-atom potential, the stability threshold
//! and frequency sweeps.
//!
//! Each Cartesian direction gives a 2×2 block in (relative, COM) coordinates
//! (in units of m_a, i.e. rad²/s²):
//!
//! ```text
//! [ ω′² − c    Δ/2    ]
//! [ Δ/2        ω′² + c ]
//! ```
//!
//! with Δ = ω̄₁² − ω̄₂², c = +ω_zz² axially and c = −ω_xy² transversally.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4};

use nalgebra::{Matrix2, Vector2};

use crate::constants::MICRON;
use crate::error::{Error, Result};
use crate::expansion::{effective_frequencies, quadratic_potential, COM_Z, REL_Z};
use crate::model::SystemConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    AxialStretch,
    AxialCom,
    TransverseStretch,
    TransverseCom,
}

impl Branch {
    pub fn name(&self) -> &'static str {
        match self {
            Branch::AxialStretch => "axial-stretch",
            Branch::AxialCom => "axial-com",
            Branch::TransverseStretch => "transverse-stretch",
            Branch::TransverseCom => "transverse-com",
        }
    }

    pub fn is_axial(&self) -> bool {
        matches!(self, Branch::AxialStretch | Branch::AxialCom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalMode {
    /// Signed squared angular frequency, rad²/s².
    pub omega_sq: f64,
    /// Rotation of the eigenvector away from the (relative, COM) basis,
    /// in (−π/4, π/4]. The same angle is shared by both modes of a block.
    pub mixing_angle: f64,
    /// Relative-like modes are labelled stretch, COM-like modes COM.
    pub branch: Branch,
    /// Share of the mode carried by atom 1 and atom 2 (sums to 1).
    pub atom_weights: [f64; 2],
}

impl NormalMode {
    pub fn omega(&self) -> Option<f64> {
        (self.omega_sq >= 0.0).then(|| self.omega_sq.sqrt())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhononSpectrum {
    pub z0: f64,
    /// Sorted by ascending `omega_sq`.
    pub axial: [NormalMode; 2],
    pub transverse: [NormalMode; 2],
    pub stable: bool,
}

impl PhononSpectrum {
    pub fn modes(&self) -> [NormalMode; 4] {
        [self.axial[0], self.axial[1], self.transverse[0], self.transverse[1]]
    }

    pub fn branch(&self, branch: Branch) -> NormalMode {
        self.modes().into_iter().find(|m| m.branch == branch).expect("every branch is present")
    }

    /// The axial or transverse mode carried mostly by atom `j`.
    pub fn localized_on(&self, axial: bool, j: usize) -> NormalMode {
        let pair = if axial { self.axial } else { self.transverse };
        if pair[0].atom_weights[j] >= pair[1].atom_weights[j] { pair[0] } else { pair[1] }
    }

    pub fn lowest(&self) -> NormalMode {
        let mut m = self.axial[0];
        if self.transverse[0].omega_sq < m.omega_sq {
            m = self.transverse[0];
        }
        m
    }
}

/// Diagonalises `[[a_rel, b], [b, a_com]]`.
fn diagonalize_block(a_rel: f64, a_com: f64, b: f64, axial: bool) -> [NormalMode; 2] {
    let (stretch, com) = if axial {
        (Branch::AxialStretch, Branch::AxialCom)
    } else {
        (Branch::TransverseStretch, Branch::TransverseCom)
    };
    let d = 0.5 * (a_rel - a_com);
    let theta = if b == 0.0 {
        0.0
    } else if d == 0.0 {
        FRAC_PI_4
    } else {
        0.5 * (b / d).atan()
    };
    let (lam_rel, lam_com) = if b == 0.0 {
        (a_rel, a_com)
    } else {
        let mean = 0.5 * (a_rel + a_com);
        let r = d.hypot(b);
        // the relative-like eigenvector (cos θ, sin θ) is the upper root when d > 0
        if d > 0.0 || (d == 0.0 && b > 0.0) { (mean + r, mean - r) } else { (mean - r, mean + r) }
    };
    let (c, s) = (theta.cos(), theta.sin());
    // atom amplitudes of the vector (rel, com) = (p, q): d₁ = (p + q)/√2, d₂ = (q − p)/√2
    let weights = |p: f64, q: f64| {
        let w1 = (FRAC_1_SQRT_2 * (p + q)).powi(2);
        let w2 = (FRAC_1_SQRT_2 * (q - p)).powi(2);
        [w1 / (w1 + w2), w2 / (w1 + w2)]
    };
    let rel = NormalMode { omega_sq: lam_rel, mixing_angle: theta, branch: stretch, atom_weights: weights(c, s) };
    let cm = NormalMode { omega_sq: lam_com, mixing_angle: theta, branch: com, atom_weights: weights(-s, c) };
    if rel.omega_sq <= cm.omega_sq { [rel, cm] } else { [cm, rel] }
}

pub fn phonon_spectrum(config: &SystemConfig, z0: f64) -> PhononSpectrum {
    let f = effective_frequencies(config, z0);
    let axial = diagonalize_block(
        f.prime_axial_sq - f.zz_sq,
        f.prime_axial_sq + f.zz_sq,
        0.5 * (f.axial_sq[0] - f.axial_sq[1]),
        true,
    );
    let transverse = diagonalize_block(
        f.prime_radial_sq + f.xy_sq,
        f.prime_radial_sq - f.xy_sq,
        0.5 * (f.radial_sq[0] - f.radial_sq[1]),
        false,
    );
    let stable = axial.iter().chain(transverse.iter()).all(|m| m.omega_sq > 0.0);
    PhononSpectrum { z0, axial, transverse, stable }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StabilityResult {
    /// Smallest stable trap-centre separation 2z0, m.
    pub critical_2z0: f64,
    /// The branch whose squared frequency crosses zero there.
    pub limiting_branch: Branch,
}

pub const BRACKET_2Z0: (f64, f64) = (1.0 * MICRON, 40.0 * MICRON);

/// Bisection on the smallest squared mode frequency as a function of 2z0 over
/// [`BRACKET_2Z0`]. The returned separation is on the stable side of the
/// root and within a few ulps of it, far below the 1 nm target.
pub fn critical_separation(config: &SystemConfig) -> Result<StabilityResult> {
    critical_separation_in(config, BRACKET_2Z0.0, BRACKET_2Z0.1)
}

pub fn critical_separation_in(config: &SystemConfig, lo: f64, hi: f64) -> Result<StabilityResult> {
    let g = |two_z0: f64| phonon_spectrum(config, 0.5 * two_z0).lowest().omega_sq;
    let (f_lo, f_hi) = (g(lo), g(hi));
    if !(f_lo <= 0.0 && f_hi > 0.0) {
        return Err(Error::NotBracketed { lo, hi, f_lo, f_hi });
    }
    let (mut a, mut b) = (lo, hi);
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        if g(mid) > 0.0 { b = mid } else { a = mid }
    }
    Ok(StabilityResult {
        critical_2z0: b,
        limiting_branch: phonon_spectrum(config, 0.5 * a).lowest().branch,
    })
}

/// Applies [`phonon_spectrum`] at every grid point. The grid holds 2z0
/// values and must be strictly increasing.
pub fn mode_sweep(config: &SystemConfig, two_z0_grid: &[f64]) -> Result<Vec<PhononSpectrum>> {
    if let Some(w) = two_z0_grid.windows(2).find(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidInput(format!(
            "2z0 grid must be strictly increasing ({:e} followed by {:e})",
            w[0], w[1]
        )));
    }
    if let Some(&bad) = two_z0_grid.iter().find(|v| !(**v > 0.0 && v.is_finite())) {
        return Err(Error::InvalidInput(format!("2z0 grid value {bad:e} is not positive")));
    }
    Ok(two_z0_grid.iter().map(|&s| phonon_spectrum(config, 0.5 * s)).collect())
}

/// Axial shifts (δz₁, δz₂) of the two atoms that minimise the quadratic
/// potential.
pub fn equilibrium_shift(config: &SystemConfig, z0: f64) -> Result<[f64; 2]> {
    let q = quadratic_potential(config, z0, config.ion_mode);
    let h = Matrix2::new(
        q.hessian[(REL_Z, REL_Z)],
        q.hessian[(REL_Z, COM_Z)],
        q.hessian[(COM_Z, REL_Z)],
        q.hessian[(COM_Z, COM_Z)],
    );
    let l = Vector2::new(q.linear[REL_Z], q.linear[COM_Z]);
    let det = h.determinant();
    if !(h[(0, 0)] > 0.0 && det > 0.0) {
        return Err(Error::Instability(format!(
            "axial Hessian not positive definite at 2z0 = {:.6e} m (det = {det:.3e})",
            2.0 * z0
        )));
    }
    let s = -(h.try_inverse().ok_or_else(|| Error::Instability("singular axial Hessian".into()))? * l);
    let (rel, com) = (s[0], s[1]);
    Ok([FRAC_1_SQRT_2 * (com + rel), FRAC_1_SQRT_2 * (com - rel)])
}
