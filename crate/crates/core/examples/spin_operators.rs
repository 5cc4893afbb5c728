//! Dicke-basis angular momentum operators and the probe state.
//!
//! ```text
//! cargo run --example spin_operators -- 3
//! ```

use rotsense::linalg::{c, commutator, max_abs_diff, I};
use rotsense::spin::{build_spin_operators, initial_probe_state, SpinQuantum};

fn main() -> rotsense::Result<()> {
    let j: f64 = std::env::args()
        .nth(1)
        .map_or(Ok(3.0), |s| s.parse())
        .expect("j must be a number");
    let j = SpinQuantum::new(j)?;
    let ops = build_spin_operators(j);

    let xy = commutator(&ops.jx.matrix().view(), &ops.jy.matrix().view());
    let i_jz = ops.jz.matrix().mapv(|z| I * z);
    println!("j = {j}, dimension {}", j.dim());
    println!(
        "max |[Jx, Jy] - i Jz|      = {:.2e}",
        max_abs_diff(&xy.view(), &i_jz.view())
    );
    let casimir = ops
        .jsq
        .matrix()
        .diag()
        .iter()
        .fold(0.0f64, |a, z| a.max((z - c(j.casimir())).norm()));
    println!("max |J^2 - j(j+1)| on diag = {casimir:.2e}");

    let probe = initial_probe_state(j)?;
    println!("probe (|j,0> + |j,1>)/sqrt 2:");
    for (name, op) in [("Jx", &ops.jx), ("Jy", &ops.jy), ("Jz", &ops.jz)] {
        println!(
            "  <{name}> = {:+.6}   Var({name}) = {:.6}",
            probe.expectation(op),
            probe.variance(op)
        );
    }
    Ok(())
}
