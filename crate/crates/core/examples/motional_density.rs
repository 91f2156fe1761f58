//! Ground state of the atoms' axial motion in the full potential, compared
//! with the harmonic (Gaussian) approximation.

use ion_mediated::constants::MICRON;
use ion_mediated::model::ElectronicState;
use ion_mediated::motional::{default_grid, full_ground_state, gaussian_ground_state, pair_density, RampOptions};
use ion_mediated::SystemConfig;

fn main() -> ion_mediated::Result<()> {
    let r = ElectronicState::rydberg(30);
    for two_z0 in [12.0, 16.0, 24.0] {
        let c = SystemConfig::rb_ca_rb([r, r], two_z0 * MICRON);
        let state = full_ground_state(&c, c.z0, RampOptions::default())?;
        let ([m1, m2], [s1, s2]) = state.moments();
        let (z1, z2) = default_grid(&state, 61);
        let rho = pair_density(&state, &z1, &z2)?;
        print!(
            "2z0 = {two_z0:>4} um: n_max {}, <z1'> {:+.4} um, <z2'> {:+.4} um, widths {:.4}/{:.4} um, norm {:.8}",
            state.n_max,
            m1 / MICRON,
            m2 / MICRON,
            s1 / MICRON,
            s2 / MICRON,
            rho.integral
        );
        match gaussian_ground_state(&c, c.z0) {
            Ok(g) => println!(", overlap with Gaussian {:.6}", state.overlap_with(&g).abs()),
            Err(_) => println!(", no harmonic minimum"),
        }
    }
    Ok(())
}
