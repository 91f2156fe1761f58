//! Squared phonon frequencies against separation for the rr and rg pairs.

use ion_mediated::constants::{khz2_from_omega_sq, MICRON};
use ion_mediated::model::ElectronicState;
use ion_mediated::phonons::mode_sweep;
use ion_mediated::SystemConfig;

fn main() -> ion_mediated::Result<()> {
    let r = ElectronicState::rydberg(30);
    let grid: Vec<f64> = (0..=16).map(|i| (9.0 + i as f64) * MICRON).collect();
    for states in [[r, r], [r, ElectronicState::Ground]] {
        let c = SystemConfig::rb_ca_rb(states, 16.0 * MICRON);
        println!("{}  (kHz^2)", c.pair_label());
        println!("{:>6} {:>12} {:>12} {:>12} {:>12}", "2z0", "axial lo", "axial hi", "trans lo", "trans hi");
        for s in mode_sweep(&c, &grid)? {
            let [a0, a1] = s.axial.map(|m| khz2_from_omega_sq(m.omega_sq));
            let [t0, t1] = s.transverse.map(|m| khz2_from_omega_sq(m.omega_sq));
            println!("{:>6.1} {a0:>12.3} {a1:>12.3} {t0:>12.2} {t1:>12.2}{}", 2.0 * s.z0 / MICRON, if s.stable { "" } else { "  unstable" });
        }
        println!();
    }
    Ok(())
}
