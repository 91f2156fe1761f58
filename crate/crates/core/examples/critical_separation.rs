//! Smallest stable trap separation for several state pairs, and the ion's
//! pull on the atoms at 2z0 = 16 μm.

use ion_mediated::constants::MICRON;
use ion_mediated::model::ElectronicState;
use ion_mediated::phonons::{critical_separation, equilibrium_shift};
use ion_mediated::SystemConfig;

fn main() -> ion_mediated::Result<()> {
    let base = SystemConfig::rb_ca_rb([ElectronicState::rydberg(30); 2], 16.0 * MICRON);
    for pair in [[30, 30], [30, 5], [25, 25]] {
        let states = pair.map(|n| if n == 5 { ElectronicState::Ground } else { ElectronicState::rydberg(n) });
        let c = base.with_states(states)?;
        let r = critical_separation(&c)?;
        let [d1, d2] = equilibrium_shift(&c, 8.0 * MICRON)?;
        println!(
            "{:<8} 2z0_c = {:.4} um  limited by {:<15} shift at 16 um: ({:+.3e}, {:+.3e}) um",
            c.pair_label(),
            r.critical_2z0 / MICRON,
            r.limiting_branch.name(),
            d1 / MICRON,
            d2 / MICRON
        );
    }
    Ok(())
}
