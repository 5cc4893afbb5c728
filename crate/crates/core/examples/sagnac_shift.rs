//! Rotation-induced splitting of a silica microresonator at 1550 nm.

use std::f64::consts::PI;

use rotsense::model::{sagnac_shift, SagnacParams, EARTH_ROTATION_RATE, SPEED_OF_LIGHT};

fn main() -> rotsense::Result<()> {
    let wavelength = 1.55e-6;
    let omega_l = 2.0 * PI * SPEED_OF_LIGHT / wavelength;
    for radius in [1e-4, 1e-3, 1e-2] {
        let p = SagnacParams::new(
            1.44,
            radius,
            EARTH_ROTATION_RATE,
            omega_l,
            wavelength,
            -1.2e4,
        )?;
        let delta = sagnac_shift(&p)?;
        println!(
            "R = {radius:e} m: Delta(Earth) = {delta:.6e} rad/s, f = {:.6e} rad/s",
            2.0 * delta
        );
    }
    let no_dispersion =
        SagnacParams::new(1.44, 1e-3, EARTH_ROTATION_RATE, omega_l, wavelength, 0.0)?;
    println!(
        "without dispersion (R = 1 mm): {:.6e} rad/s",
        sagnac_shift(&no_dispersion)?
    );
    Ok(())
}
