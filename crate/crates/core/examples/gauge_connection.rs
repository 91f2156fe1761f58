//! Non-adiabatic connection between ion oscillator states and its loop
//! invariants.

use ion_mediated::bo::AtomPairGeometry;
use ion_mediated::constants::{HBAR, MICRON};
use ion_mediated::gauge::*;
use ion_mediated::model::ElectronicState;
use ion_mediated::SystemConfig;
use nalgebra::DMatrix;

fn main() -> ion_mediated::Result<()> {
    let c = SystemConfig::rb_ca_rb([ElectronicState::rydberg(30), ElectronicState::Ground], 14.0 * MICRON);
    let g = AtomPairGeometry::at_trap_centers(c.z0);

    let ket = CartesianMode::ground();
    for bra in [CartesianMode::new(0, 0, 1), CartesianMode::new(1, 0, 0), CartesianMode::new(0, 0, 2)] {
        let a = gauge_element(bra, ket, 0, &g, &c)?.value;
        println!("<{bra}|A_1|{ket}>/hbar = ({:.3e}, {:.3e}, {:.3e}) i /m", a[0].im / HBAR + 0.0, a[1].im / HBAR + 0.0, a[2].im / HBAR + 0.0);
    }

    let modes = mode_cube(2);
    println!("Hermiticity deviation: {:.1e}", gauge_hermiticity_check(&modes, &g, &c)?.relative());

    let (u, v) = (AtomCoordinate::new(0, 0), AtomCoordinate::new(0, 2));
    let path = LoopPath::rectangle(g, u, v, 0.5e-6, 0.5e-6);
    println!("Berry phase of (0,0,1): {:.1e} rad", berry_phase(&path, CartesianMode::new(0, 0, 1), &c)?);

    // the truncated shell has a nonzero curvature; the product box does not
    for (name, set) in [("box n<=2", modes), ("shell n<=3", mode_shell(3))] {
        let n = set.len();
        let w = wilson_loop(&path, &set, &c, 64)?;
        let dev = (&w - DMatrix::identity(n, n)).iter().map(|z| z.norm()).fold(0.0, f64::max);
        println!("Wilson loop, {name}: max |W - I| = {dev:.3e}");
    }
    Ok(())
}
