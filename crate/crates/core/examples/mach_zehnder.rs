//! Phase sensitivity of the Mach-Zehnder interferometer fed with the probe
//! state, with and without the beam splitters.

use rotsense::metrology::mz_qfi;
use rotsense::spin::SpinQuantum;

fn main() -> rotsense::Result<()> {
    println!(
        "{:>4} {:>14} {:>14} {:>12}",
        "j", "F (MZ)", "2j(j+1)-1", "F (phase only)"
    );
    for j in [1u32, 2, 5, 10, 20, 50] {
        let s = SpinQuantum::new(j as f64)?;
        let with = mz_qfi(s, true)?;
        let without = mz_qfi(s, false)?;
        let exact = 2.0 * s.casimir() - 1.0;
        println!(
            "{j:>4} {:>14.6} {exact:>14.1} {:>12.6}",
            with.value, without.value
        );
    }
    Ok(())
}
