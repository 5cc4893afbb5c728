//! Exact atom + two-mode evolution against the effective spin model.
//!
//! The excited-atom population stays small and the `|n, n>` population
//! follows the spin model when the atom is far detuned.

use rotsense::experiments::linspace;
use rotsense::model::MicroscopicParams;
use rotsense::propagation::dynamics_trace;

fn main() -> rotsense::Result<()> {
    let n = 20;
    for g in [1.0, 2.0, 4.0] {
        let p = MicroscopicParams {
            omega_l: 1600.0,
            delta: 1.0,
            omega_a: 2000.0,
            g_cw: g,
            g_ccw: g,
            n_total: 2 * n,
        };
        let trace = dynamics_trace(&p, n, &linspace(0.0, 2000.0, 2001))?;
        println!(
            "g = {g}: g_eff = {:.4e}, max p_atom = {:.3e}, max |p_exact - p_approx| = {:.3e}",
            trace.g_eff,
            trace.max_p_atom(),
            trace.max_deviation()
        );
    }
    Ok(())
}
