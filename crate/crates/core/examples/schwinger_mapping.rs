//! The two-mode Bose-Hubbard Hamiltonian and its spin form agree entrywise
//! once the constant offset is included.

use rotsense::model::{schwinger_constant_offset, schwinger_equivalence_check};
use rotsense::spin::SpinQuantum;

fn main() -> rotsense::Result<()> {
    let (omega_l, delta, u, g_eff) = (1600.0, 0.7, 0.05, 0.3);
    for photons in [1u32, 4, 11, 40] {
        let j = SpinQuantum::from_photons(photons)?;
        println!(
            "n = {photons:>3}: offset {:>12.4}, max entry difference {:.2e}",
            schwinger_constant_offset(omega_l, u, photons),
            schwinger_equivalence_check(omega_l, delta, u, g_eff, j)
        );
    }
    Ok(())
}
