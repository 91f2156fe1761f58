//! JSON configuration files.
//!
//! ```json
//! {
//!   "ion":  { "species": "40Ca+", "mass_u": 39.963, "omega_rho_kHz": 1000, "omega_z_kHz": 200 },
//!   "atom": { "species": "87Rb", "mass_u": 86.909, "omega_rho_kHz": 100, "omega_z_kHz": 9, "ground_n": 5 },
//!   "z0_um": 8.0,
//!   "states": ["30S", "30S"],
//!   "c4_ground_Jm4": 5.46e-57,
//!   "c6_pair_MHz_um6": -26.61,
//!   "ion_mode": [0, 0, 0],
//!   "scaling": "bare_n"
//! }
//! ```
//!
//! Optional keys: `c4_rydberg_ratio` (C₄ of the anchor state over the ground
//! value, default 3.94e7), `anchor_n` (default 30), `c6_ground_MHz_um6` (C₆
//! of pairs with a ground-state atom, default 0) and `quantum_defect` (used
//! with `"scaling": "quantum_defect"`, default 3.131). `c6_pair_MHz_um6` is
//! the C₆ of the anchor–anchor Rydberg pair.

use std::path::{Path, PathBuf};

use serde::Deserialize;
use sha2::{Digest, Sha256};

use crate::bo::IonModeIndex;
use crate::constants::{c6_from_mhz_um6, MICRON, RB_ANCHOR_N, RB_C4_RYDBERG_RATIO, RB_S_QUANTUM_DEFECT};
use crate::error::{Error, Result};
use crate::model::{
    C4Scaling, ElectronicState, InteractionCoefficients, Species, SystemConfig, TrapFrequencies, TrappedParticle,
};

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
#[allow(non_snake_case)]
struct ParticleFile {
    species: String,
    mass_u: f64,
    omega_rho_kHz: f64,
    omega_z_kHz: f64,
    #[serde(default)]
    ground_n: Option<u32>,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(rename_all = "snake_case")]
enum ScalingFile {
    BareN,
    QuantumDefect,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
#[allow(non_snake_case)]
struct ConfigFile {
    ion: ParticleFile,
    atom: ParticleFile,
    z0_um: f64,
    states: [String; 2],
    c4_ground_Jm4: f64,
    #[serde(default)]
    c4_rydberg_ratio: Option<f64>,
    #[serde(default)]
    anchor_n: Option<u32>,
    c6_pair_MHz_um6: f64,
    #[serde(default)]
    c6_ground_MHz_um6: Option<f64>,
    #[serde(default)]
    ion_mode: Option<[i64; 3]>,
    #[serde(default)]
    scaling: Option<ScalingFile>,
    #[serde(default)]
    quantum_defect: Option<f64>,
}

fn particle(p: &ParticleFile) -> TrappedParticle {
    TrappedParticle {
        species: Species::from_mass_u(p.species.clone(), p.mass_u),
        trap: TrapFrequencies::from_khz(p.omega_rho_kHz, p.omega_z_kHz),
    }
}

fn field_error(path: &str, message: impl Into<String>) -> Error {
    Error::ConfigParse { path: path.into(), message: message.into() }
}

/// Parses and validates a configuration document.
pub fn parse_config(text: &str) -> Result<SystemConfig> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let file: ConfigFile = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        field_error(&path, format!("{inner} (line {}, column {})", inner.line(), inner.column()))
    })?;

    let ground_n = file.atom.ground_n.unwrap_or(5);
    let mut states = [ElectronicState::Ground; 2];
    for (j, label) in file.states.iter().enumerate() {
        states[j] = ElectronicState::parse(label, ground_n)
            .map_err(|e| field_error(&format!("states[{j}]"), e.to_string()))?;
    }
    let [n_rho, m, n_z] = file.ion_mode.unwrap_or([0, 0, 0]);
    if n_rho < 0 || n_z < 0 {
        return Err(field_error("ion_mode", "radial and axial quantum numbers must be non-negative"));
    }
    let m = i32::try_from(m).map_err(|_| field_error("ion_mode", "azimuthal quantum number out of range"))?;
    let ion_mode = IonModeIndex::Cylindrical { n_rho: n_rho as u32, m, n_z: n_z as u32 };

    let scaling = match file.scaling.unwrap_or(ScalingFile::BareN) {
        ScalingFile::BareN => C4Scaling::BareN,
        ScalingFile::QuantumDefect => {
            C4Scaling::QuantumDefect { defect: file.quantum_defect.unwrap_or(RB_S_QUANTUM_DEFECT) }
        }
    };
    let coefficients = InteractionCoefficients {
        c4_ground: file.c4_ground_Jm4,
        rydberg_ratio: file.c4_rydberg_ratio.unwrap_or(RB_C4_RYDBERG_RATIO),
        anchor_n: file.anchor_n.unwrap_or(RB_ANCHOR_N),
        c6_anchor: c6_from_mhz_um6(file.c6_pair_MHz_um6),
        c6_with_ground: c6_from_mhz_um6(file.c6_ground_MHz_um6.unwrap_or(0.0)),
        scaling,
        ground_n,
    };
    if !(file.c4_ground_Jm4 >= 0.0) {
        return Err(field_error("c4_ground_Jm4", format!("must be non-negative, got {:e}", file.c4_ground_Jm4)));
    }

    let config = SystemConfig::new(
        particle(&file.ion),
        particle(&file.atom),
        file.z0_um * MICRON,
        states,
        coefficients,
        ion_mode,
    )?;
    config.validated()
}

/// A parsed configuration together with the SHA-256 digest of its bytes.
#[derive(Debug, Clone)]
pub struct LoadedConfig {
    pub path: PathBuf,
    pub config: SystemConfig,
    pub digest: String,
}

pub fn load_config(path: &Path) -> Result<LoadedConfig> {
    let bytes = std::fs::read(path)?;
    let text = std::str::from_utf8(&bytes).map_err(|e| field_error("", format!("not UTF-8: {e}")))?;
    let config = parse_config(text)?;
    Ok(LoadedConfig { path: path.to_path_buf(), config, digest: hex::encode(Sha256::digest(&bytes)) })
}

#[cfg(test)]
mod tests {
    use super::*;

    const PAPER: &str = include_str!("../configs/rb-ca-rb-30s-30s.json");

    #[test]
    fn reference_file_matches_builtin() {
        let parsed = parse_config(PAPER).unwrap();
        let builtin = SystemConfig::rb_ca_rb([ElectronicState::rydberg(30); 2], 16.0 * MICRON);
        assert_eq!(parsed, builtin);
    }

    #[test]
    fn field_level_diagnostics() {
        let bad = PAPER.replace("\"z0_um\": 8.0", "\"z0_um\": \"eight\"");
        match parse_config(&bad) {
            Err(Error::ConfigParse { path, .. }) => assert_eq!(path, "z0_um"),
            other => panic!("unexpected {other:?}"),
        }
        let bad = PAPER.replace("\"omega_z_kHz\": 9.0", "\"omega_z_kHz\": true");
        match parse_config(&bad) {
            Err(Error::ConfigParse { path, .. }) => assert_eq!(path, "atom.omega_z_kHz"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn ground_label_and_alias() {
        let text = PAPER.replace("[\"30S\", \"30S\"]", "[\"30S\", \"5S\"]");
        let c = parse_config(&text).unwrap();
        assert_eq!(c.states[1], ElectronicState::Ground);
        let text = PAPER.replace("[\"30S\", \"30S\"]", "[\"30S\", \"g\"]");
        assert_eq!(parse_config(&text).unwrap().states[1], ElectronicState::Ground);
    }

    #[test]
    fn rejects_tiny_separation() {
        let text = PAPER.replace("\"z0_um\": 8.0", "\"z0_um\": 0.25");
        assert!(matches!(parse_config(&text), Err(Error::InvalidConfig(_))));
    }
}
