//! Physical constants (CODATA 2018 where exact) and unit conversions.

use std::f64::consts::PI;

/// Reduced Planck constant, J·s.
pub const HBAR: f64 = 1.054_571_817e-34;
/// Planck constant, J·s.
pub const PLANCK: f64 = 2.0 * PI * HBAR;
/// Atomic mass unit used for the default species, kg.
pub const ATOMIC_MASS_UNIT: f64 = 1.660_54e-27;

/// Mass of ⁸⁷Rb in atomic mass units.
pub const RB87_MASS_U: f64 = 86.909;
/// Mass of ⁴⁰Ca⁺ in atomic mass units.
pub const CA40_MASS_U: f64 = 39.963;

/// Rb ground-state ion-atom coefficient C₄⁰, J·m⁴.
pub const RB_C4_GROUND: f64 = 5.46e-57;
/// C₄(30S) / C₄⁰ for Rb.
pub const RB_C4_RYDBERG_RATIO: f64 = 3.94e7;
/// Principal quantum number at which the Rydberg ratio is anchored.
pub const RB_ANCHOR_N: u32 = 30;
/// C₆/h for the Rb 30S–30S pair, MHz·μm⁶ (signed, enters as −C₆/r⁶).
pub const RB_C6_30S_MHZ_UM6: f64 = -26.61;
/// Rb nS quantum defect, used only by the effective-quantum-number scaling.
pub const RB_S_QUANTUM_DEFECT: f64 = 3.131;

pub const MICRON: f64 = 1e-6;

/// Angular frequency (rad/s) from an ordinary frequency in kHz.
pub fn omega_from_khz(f_khz: f64) -> f64 {
    2.0 * PI * f_khz * 1e3
}

/// Ordinary frequency in kHz from an angular frequency.
pub fn khz_from_omega(omega: f64) -> f64 {
    omega / (2.0 * PI * 1e3)
}

/// Signed squared angular frequency (rad²/s²) to (ω/2π)² in kHz².
pub fn khz2_from_omega_sq(omega_sq: f64) -> f64 {
    omega_sq / (4.0 * PI * PI * 1e6)
}

/// Energy (J) expressed as E/h in kHz.
pub fn khz_from_energy(energy: f64) -> f64 {
    energy / PLANCK / 1e3
}

/// Energy (J) expressed as E/h in Hz.
pub fn hz_from_energy(energy: f64) -> f64 {
    energy / PLANCK
}

/// C₆ in J·m⁶ from C₆/h in MHz·μm⁶.
pub fn c6_from_mhz_um6(value: f64) -> f64 {
    value * 1e6 * PLANCK * 1e-36
}

pub fn c6_to_mhz_um6(c6: f64) -> f64 {
    c6 / (1e6 * PLANCK * 1e-36)
}
