//! Species, traps, interaction coefficients and the derived characteristic
//! scales of the atom–ion–atom system.
//!
//! Everything is SI internally. The trap centres of the two atoms sit at
//! `(0, 0, +z0)` (atom 1) and `(0, 0, -z0)` (atom 2); the ion trap is centred
//! at the origin.

use std::f64::consts::PI;
use std::fmt;

use crate::bo::IonModeIndex;
use crate::constants::*;
use crate::error::{Diagnostic, Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Species {
    pub name: String,
    /// kg
    pub mass: f64,
}

impl Species {
    pub fn new(name: impl Into<String>, mass: f64) -> Self {
        Self { name: name.into(), mass }
    }

    pub fn from_mass_u(name: impl Into<String>, mass_u: f64) -> Self {
        Self::new(name, mass_u * ATOMIC_MASS_UNIT)
    }
}

/// Radial and axial angular trap frequencies, rad/s.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrapFrequencies {
    pub radial: f64,
    pub axial: f64,
}

impl TrapFrequencies {
    pub fn from_khz(radial_khz: f64, axial_khz: f64) -> Self {
        Self { radial: omega_from_khz(radial_khz), axial: omega_from_khz(axial_khz) }
    }

    /// Geometric mean (ω_ρ² ω_z)^{1/3}.
    pub fn mean(&self) -> f64 {
        (self.radial * self.radial * self.axial).cbrt()
    }

    pub fn scaled(&self, k: f64) -> Self {
        Self { radial: self.radial * k, axial: self.axial * k }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrappedParticle {
    pub species: Species,
    pub trap: TrapFrequencies,
}

impl TrappedParticle {
    pub fn mass(&self) -> f64 {
        self.species.mass
    }

    /// Oscillator length sqrt(ħ/(mω)) for the given angular frequency.
    pub fn oscillator_length(&self, omega: f64) -> f64 {
        (HBAR / (self.species.mass * omega)).sqrt()
    }

    pub fn radial_stiffness(&self) -> f64 {
        self.species.mass * self.trap.radial * self.trap.radial
    }

    pub fn axial_stiffness(&self) -> f64 {
        self.species.mass * self.trap.axial * self.trap.axial
    }
}

/// Internal state of an atom. Only S states are modelled, so the orbital
/// quantum number is always zero and is not stored.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ElectronicState {
    Ground,
    Rydberg { n: u32 },
}

impl ElectronicState {
    pub fn rydberg(n: u32) -> Self {
        ElectronicState::Rydberg { n }
    }

    pub fn is_rydberg(&self) -> bool {
        matches!(self, ElectronicState::Rydberg { .. })
    }

    /// Parses labels such as `"30S"`, `"5S"`, `"g"` or `"ground"`. A label
    /// whose principal number equals `ground_n` is the ground state.
    pub fn parse(label: &str, ground_n: u32) -> Result<Self> {
        let s = label.trim();
        if s.eq_ignore_ascii_case("g") || s.eq_ignore_ascii_case("ground") {
            return Ok(ElectronicState::Ground);
        }
        let digits = s
            .strip_suffix('S')
            .or_else(|| s.strip_suffix('s'))
            .ok_or_else(|| Error::InvalidInput(format!("state `{label}`: only nS states are supported")))?;
        let n: u32 = digits
            .parse()
            .map_err(|_| Error::InvalidInput(format!("state `{label}`: bad principal quantum number")))?;
        if n == ground_n {
            Ok(ElectronicState::Ground)
        } else if n < ground_n {
            Err(Error::InvalidInput(format!("state `{label}` lies below the ground state {ground_n}S")))
        } else {
            Ok(ElectronicState::Rydberg { n })
        }
    }

    pub fn label(&self, ground_n: u32) -> String {
        match self {
            ElectronicState::Ground => format!("{ground_n}S"),
            ElectronicState::Rydberg { n } => format!("{n}S"),
        }
    }
}

/// How C₄ (and C₆) of a Rydberg state is scaled away from the anchor state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum C4Scaling {
    /// Bare principal quantum number: C₄ ∝ n⁷, C₆ ∝ n¹¹.
    BareN,
    /// Effective quantum number n* = n − δ.
    QuantumDefect { defect: f64 },
}

impl C4Scaling {
    fn effective_n(&self, n: u32) -> f64 {
        match *self {
            C4Scaling::BareN => n as f64,
            C4Scaling::QuantumDefect { defect } => n as f64 - defect,
        }
    }
}

/// Ion–atom (−C₄/r⁴) and atom–atom (−C₆/r⁶) coefficients as a function of
/// the electronic states.
#[derive(Debug, Clone, PartialEq)]
pub struct InteractionCoefficients {
    /// C₄ of the ground state, J·m⁴ (attractive positive).
    pub c4_ground: f64,
    /// C₄(anchor) / C₄(ground).
    pub rydberg_ratio: f64,
    pub anchor_n: u32,
    /// Signed C₆ of the anchor–anchor Rydberg pair, J·m⁶.
    pub c6_anchor: f64,
    /// C₆ for pairs involving a ground-state atom, J·m⁶.
    pub c6_with_ground: f64,
    pub scaling: C4Scaling,
    /// Principal quantum number of the atom's ground S state.
    pub ground_n: u32,
}

impl Default for InteractionCoefficients {
    fn default() -> Self {
        Self {
            c4_ground: RB_C4_GROUND,
            rydberg_ratio: RB_C4_RYDBERG_RATIO,
            anchor_n: RB_ANCHOR_N,
            c6_anchor: c6_from_mhz_um6(RB_C6_30S_MHZ_UM6),
            c6_with_ground: 0.0,
            scaling: C4Scaling::BareN,
            ground_n: 5,
        }
    }
}

impl InteractionCoefficients {
    pub fn c4(&self, state: ElectronicState) -> Result<f64> {
        if !(self.c4_ground >= 0.0) {
            return Err(Error::InvalidInput(format!("negative ground-state C4 {:e}", self.c4_ground)));
        }
        match state {
            ElectronicState::Ground => Ok(self.c4_ground),
            ElectronicState::Rydberg { n } => {
                let ratio = self.scaling.effective_n(n) / self.scaling.effective_n(self.anchor_n);
                if !(ratio > 0.0) {
                    return Err(Error::InvalidInput(format!("effective quantum number of {n}S is not positive")));
                }
                Ok(self.rydberg_ratio * self.c4_ground * ratio.powi(7))
            }
        }
    }

    pub fn c6(&self, a: ElectronicState, b: ElectronicState) -> f64 {
        match (a, b) {
            (ElectronicState::Rydberg { n: n1 }, ElectronicState::Rydberg { n: n2 }) => {
                let anchor = self.scaling.effective_n(self.anchor_n);
                let r1 = self.scaling.effective_n(n1) / anchor;
                let r2 = self.scaling.effective_n(n2) / anchor;
                self.c6_anchor * (r1 * r2).powf(5.5)
            }
            _ => self.c6_with_ground,
        }
    }
}

/// C₄ of the n-th S Rydberg state from the ground-state value under the bare
/// n⁷ law anchored at 30S. `n = 0` denotes the ground state.
pub fn rydberg_c4(base_c4_ground: f64, n: u32) -> Result<f64> {
    if !(base_c4_ground >= 0.0) {
        return Err(Error::InvalidInput(format!("negative ground-state C4 {base_c4_ground:e}")));
    }
    match n {
        0 => Ok(base_c4_ground),
        n if n < 5 => Err(Error::InvalidInput(format!("principal quantum number {n} < 5"))),
        RB_ANCHOR_N => Ok(RB_C4_RYDBERG_RATIO * base_c4_ground),
        n => Ok(RB_C4_RYDBERG_RATIO * base_c4_ground * (n as f64 / RB_ANCHOR_N as f64).powi(7)),
    }
}

/// Resolved coupling constants entering every potential: C₄ of atom 1 and
/// atom 2, and the signed pair C₆.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Couplings {
    pub c4: [f64; 2],
    pub c6: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SystemConfig {
    pub ion: TrappedParticle,
    /// Both atoms share species and trap frequencies.
    pub atom: TrappedParticle,
    /// Half the trap-centre separation, m.
    pub z0: f64,
    pub states: [ElectronicState; 2],
    pub coefficients: InteractionCoefficients,
    pub ion_mode: IonModeIndex,
    pub couplings: Couplings,
}

impl SystemConfig {
    pub fn new(
        ion: TrappedParticle,
        atom: TrappedParticle,
        z0: f64,
        states: [ElectronicState; 2],
        coefficients: InteractionCoefficients,
        ion_mode: IonModeIndex,
    ) -> Result<Self> {
        let couplings = Couplings {
            c4: [coefficients.c4(states[0])?, coefficients.c4(states[1])?],
            c6: coefficients.c6(states[0], states[1]),
        };
        Ok(Self { ion, atom, z0, states, coefficients, ion_mode, couplings })
    }

    /// ⁸⁷Rb–⁴⁰Ca⁺–⁸⁷Rb with ω_iρ = 2π·1 MHz, ω_iz = 2π·0.2 MHz,
    /// ω_aρ = 2π·100 kHz, ω_az = 2π·9 kHz and the ion in its motional ground
    /// state.
    pub fn rb_ca_rb(states: [ElectronicState; 2], two_z0: f64) -> Self {
        let ion = TrappedParticle {
            species: Species::from_mass_u("40Ca+", CA40_MASS_U),
            trap: TrapFrequencies::from_khz(1000.0, 200.0),
        };
        let atom = TrappedParticle {
            species: Species::from_mass_u("87Rb", RB87_MASS_U),
            trap: TrapFrequencies::from_khz(100.0, 9.0),
        };
        Self::new(ion, atom, 0.5 * two_z0, states, InteractionCoefficients::default(), IonModeIndex::ground())
            .expect("reference coefficients are valid")
    }

    pub fn with_states(&self, states: [ElectronicState; 2]) -> Result<Self> {
        Self::new(
            self.ion.clone(),
            self.atom.clone(),
            self.z0,
            states,
            self.coefficients.clone(),
            self.ion_mode,
        )
    }

    pub fn with_z0(&self, z0: f64) -> Self {
        Self { z0, ..self.clone() }
    }

    pub fn with_two_z0(&self, two_z0: f64) -> Self {
        self.with_z0(0.5 * two_z0)
    }

    /// Replaces the resolved couplings directly, bypassing the scaling law.
    pub fn with_couplings(&self, c4_1: f64, c4_2: f64, c6: f64) -> Self {
        Self { couplings: Couplings { c4: [c4_1, c4_2], c6 }, ..self.clone() }
    }

    /// Exchanges the roles of the two atoms.
    pub fn swapped(&self) -> Self {
        let mut out = self.clone();
        out.states.swap(0, 1);
        out.couplings.c4.swap(0, 1);
        out
    }

    pub fn pair_label(&self) -> String {
        let g = self.coefficients.ground_n;
        format!("{}-{}", self.states[0].label(g), self.states[1].label(g))
    }

    pub fn scales(&self) -> CharacteristicScales {
        characteristic_scales(self)
    }

    /// Runs [`validate`] and turns errors into [`Error::InvalidConfig`].
    pub fn validated(self) -> Result<Self> {
        let report = validate(&self);
        if report.errors.is_empty() {
            Ok(self)
        } else {
            Err(Error::InvalidConfig(report.errors))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CharacteristicScales {
    /// Atom axial oscillator length sqrt(ħ/(m_a ω_az)), m.
    pub a_z: f64,
    /// Atom radial oscillator length, m.
    pub a_rho: f64,
    /// Ion mean oscillator length, m.
    pub l_i: f64,
    /// Atom mean oscillator length, m.
    pub l_a: f64,
    /// Ion mean trap period, s.
    pub t_i: f64,
    /// Atom mean trap period, s.
    pub t_a: f64,
    /// sqrt(2 C₄ μ_ia)/ħ with the larger of the two C₄; `None` without an
    /// ion-atom interaction.
    pub r_ia_star: Option<f64>,
    /// (2 |C₆| μ_a / ħ²)^{1/4}; `None` without a C₆.
    pub r_aa_star: Option<f64>,
    /// Ratio of average atom speed to average ion speed.
    pub eta: f64,
}

pub fn characteristic_scales(config: &SystemConfig) -> CharacteristicScales {
    let m_i = config.ion.mass();
    let m_a = config.atom.mass();
    let w_i = config.ion.trap.mean();
    let w_a = config.atom.trap.mean();

    let mu_ia = m_a * m_i / (m_a + m_i);
    let mu_aa = 0.5 * m_a;
    let c4 = config.couplings.c4[0].max(config.couplings.c4[1]);
    let c6 = config.couplings.c6.abs();

    CharacteristicScales {
        a_z: config.atom.oscillator_length(config.atom.trap.axial),
        a_rho: config.atom.oscillator_length(config.atom.trap.radial),
        l_i: (HBAR / (m_i * w_i)).sqrt(),
        l_a: (HBAR / (m_a * w_a)).sqrt(),
        t_i: 2.0 * PI / w_i,
        t_a: 2.0 * PI / w_a,
        r_ia_star: (c4 > 0.0).then(|| (2.0 * c4 * mu_ia).sqrt() / HBAR),
        r_aa_star: (c6 > 0.0).then(|| (2.0 * c6 * mu_aa / (HBAR * HBAR)).powf(0.25)),
        eta: (m_i / m_a).sqrt() * (w_a / w_i).sqrt(),
    }
}

/// Outcome of [`validate`]: hard errors and advisory warnings.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Validation {
    pub errors: Vec<Diagnostic>,
    pub warnings: Vec<Diagnostic>,
}

impl Validation {
    pub fn is_valid(&self) -> bool {
        self.errors.is_empty()
    }
}

impl fmt::Display for Validation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.errors {
            writeln!(f, "error: {e}")?;
        }
        for w in &self.warnings {
            writeln!(f, "warning: {w}")?;
        }
        Ok(())
    }
}

/// Checks the preconditions of the adiabatic treatment: positive masses and
/// frequencies, η < 1 and 2z0 ≥ 10 a_z. A separation below the harmonic
/// stability threshold is reported as a warning.
pub fn validate(config: &SystemConfig) -> Validation {
    let mut out = Validation::default();
    let mut err = |field: &str, msg: &str, v: f64| out.errors.push(Diagnostic::new(field, msg, Some(v)));

    for (name, p) in [("ion", &config.ion), ("atom", &config.atom)] {
        if !(p.species.mass > 0.0 && p.species.mass.is_finite()) {
            err(&format!("{name}.mass"), "mass must be positive", p.species.mass);
        }
        if !(p.trap.radial > 0.0 && p.trap.radial.is_finite()) {
            err(&format!("{name}.omega_rho"), "trap frequency must be positive", p.trap.radial);
        }
        if !(p.trap.axial > 0.0 && p.trap.axial.is_finite()) {
            err(&format!("{name}.omega_z"), "trap frequency must be positive", p.trap.axial);
        }
    }
    if !(config.z0 > 0.0 && config.z0.is_finite()) {
        err("z0", "trap separation must be positive", config.z0);
    }
    for (j, s) in config.states.iter().enumerate() {
        if let ElectronicState::Rydberg { n } = *s {
            if n < 5 || n <= config.coefficients.ground_n {
                err(&format!("states[{j}]"), "Rydberg principal quantum number too small", n as f64);
            }
        }
    }
    for (j, c4) in config.couplings.c4.iter().enumerate() {
        if !(*c4 >= 0.0) {
            err(&format!("c4[{j}]"), "ion-atom C4 must be non-negative", *c4);
        }
    }
    if !out.errors.is_empty() {
        return out;
    }

    let scales = characteristic_scales(config);
    if scales.eta >= 1.0 {
        out.errors.push(Diagnostic::new("eta", "adiabaticity ratio must be < 1", Some(scales.eta)));
    }
    let two_z0 = 2.0 * config.z0;
    if two_z0 < 10.0 * scales.a_z {
        out.errors.push(Diagnostic::new(
            "z0",
            format!("2z0 must be at least 10 a_z = {:.4e} m", 10.0 * scales.a_z),
            Some(two_z0),
        ));
    }
    if let Ok(critical) = crate::phonons::critical_separation(config) {
        if two_z0 < critical.critical_2z0 {
            out.warnings.push(Diagnostic::new(
                "z0",
                format!("2z0 below the harmonic stability threshold {:.4e} m", critical.critical_2z0),
                Some(two_z0),
            ));
        }
    }
    out
}
