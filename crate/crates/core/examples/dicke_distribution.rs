//! Spread of the evolved state over the Dicke basis, linear against Kerr.

use rotsense::analysis::{dicke_distribution, spread_metrics};
use rotsense::model::EffectiveModelParams;
use rotsense::propagation::evolve_probe;
use rotsense::spin::SpinQuantum;

fn main() -> rotsense::Result<()> {
    println!(
        "{:>5} {:>6} {:>10} {:>10} {:>13}",
        "j", "e/d", "mean m", "std m", "participation"
    );
    for j in [20.0, 100.0, 500.0] {
        for e_over_d in [0.0, 0.01] {
            let p = EffectiveModelParams::from_products(
                SpinQuantum::new(j)?,
                1.0,
                10.0,
                10.0,
                e_over_d,
            )?;
            let s = spread_metrics(&dicke_distribution(&evolve_probe(&p)?));
            println!(
                "{j:>5} {e_over_d:>6} {:>10.3} {:>10.3} {:>13.3}",
                s.mean_m, s.std_m, s.participation_ratio
            );
        }
    }
    Ok(())
}
