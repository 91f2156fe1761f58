//! Characteristic length, time and energy scales of the Rb–Ca⁺–Rb system.

use ion_mediated::constants::MICRON;
use ion_mediated::model::ElectronicState;
use ion_mediated::SystemConfig;

fn main() {
    let r = ElectronicState::rydberg(30);
    let c = SystemConfig::rb_ca_rb([r, r], 16.0 * MICRON);
    let s = c.scales();
    println!("eta      = {:.4}", s.eta);
    println!("a_z      = {:.4} um", s.a_z / MICRON);
    println!("a_rho    = {:.4} um", s.a_rho / MICRON);
    println!("L_i, L_a = {:.4e}, {:.4e} um", s.l_i / MICRON, s.l_a / MICRON);
    println!("T_i, T_a = {:.4e}, {:.4e} s", s.t_i, s.t_a);
    if let Some(r) = s.r_ia_star {
        println!("R_ia*    = {:.1} um", r / MICRON);
    }
    if let Some(r) = s.r_aa_star {
        println!("R_aa*    = {:.2} um", r / MICRON);
    }
}
