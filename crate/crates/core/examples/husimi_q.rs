//! Husimi Q function of the evolved probe state on the sphere, written as
//! `(theta, phi, Q)` columns with a JSON sidecar.
//!
//! ```text
//! cargo run --release --example husimi_q -- out/husimi
//! ```

use std::path::PathBuf;

use rotsense::analysis::{husimi_q, SphereGrid};
use rotsense::model::EffectiveModelParams;
use rotsense::propagation::evolve_probe;
use rotsense::spin::SpinQuantum;

fn main() -> rotsense::Result<()> {
    let dir = PathBuf::from(
        std::env::args()
            .nth(1)
            .unwrap_or_else(|| "out/husimi".into()),
    );
    std::fs::create_dir_all(&dir)?;
    let j = SpinQuantum::new(20.0)?;
    let grid = SphereGrid::default_grid();
    for e_over_d in [0.0, 0.2] {
        let p = EffectiveModelParams::from_products(j, 1.0, 10.0, 10.0, e_over_d)?;
        let q = husimi_q(&evolve_probe(&p)?, &grid)?;
        let (theta, phi) = q.argmax();
        println!(
            "e/d = {e_over_d}: integral {:.8} (4/(2j+1) = {:.8}), max {:.5} at ({theta:.3}, {phi:.3}), solid angle {:.3}",
            q.sphere_integral(),
            4.0 / j.dim() as f64,
            q.max(),
            q.occupied_solid_angle()
        );
        q.write(&dir, &format!("q_e{e_over_d}"))?;
    }
    println!("wrote {}", dir.display());
    Ok(())
}
