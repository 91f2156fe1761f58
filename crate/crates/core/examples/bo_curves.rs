//! Axial Born–Oppenheimer curves for the three occupation patterns
//! (both atoms Rydberg, one Rydberg, both ground).

use ion_mediated::bo::{axial_bo_curve, IonModeIndex, Placement};
use ion_mediated::constants::{hz_from_energy, khz_from_energy, MICRON};
use ion_mediated::model::ElectronicState;
use ion_mediated::SystemConfig;

fn main() -> ion_mediated::Result<()> {
    let r = ElectronicState::rydberg(30);
    let c = SystemConfig::rb_ca_rb([r, r], 16.0 * MICRON);
    let z: Vec<f64> = (0..=12).map(|i| (10.0 + 2.5 * i as f64) * MICRON).collect();
    let curve = axial_bo_curve(&z, IonModeIndex::ground(), &c, Placement::Symmetric)?;
    println!("{:>6} {:>12} {:>12} {:>12} {:>10} {:>8}", "z/um", "V_rr/kHz", "V_rg/kHz", "V_gg/Hz", "C6/Hz", "rr/rg");
    for row in &curve.rows {
        println!(
            "{:>6.1} {:>12.4} {:>12.4} {:>12.3e} {:>10.4} {:>8.4}",
            row.z / MICRON,
            khz_from_energy(row.rr),
            khz_from_energy(row.rg),
            hz_from_energy(row.gg),
            hz_from_energy(row.vdw_rr),
            row.rr / row.rg
        );
    }
    Ok(())
}
