//! Rotation-rate table: Sagnac splitting and the induced `f = 2 Delta`.

use std::f64::consts::PI;

use serde_json::json;

use super::{linspace, Check, ColumnMeta, ExperimentConfig, RunReport, Writer};
use crate::error::{Error, Result};
use crate::model::{sagnac_shift, SagnacParams, DF_DDELTA, EARTH_ROTATION_RATE, SPEED_OF_LIGHT};
use crate::table::DatTable;

pub fn sagnac_report(cfg: &ExperimentConfig) -> Result<RunReport> {
    let wavelength = cfg.f64("wavelength")?;
    let omega_l = match cfg.f64("omega_l")? {
        0.0 => 2.0 * PI * SPEED_OF_LIGHT / wavelength,
        x => x,
    };
    let base = SagnacParams::new(
        cfg.f64("n0")?,
        cfg.f64("radius")?,
        0.0,
        omega_l,
        wavelength,
        cfg.f64("dn_dlambda")?,
    )?;
    let (max, points) = (cfg.f64("omega_max")?, cfg.usize("points")?);
    if !(max > 0.0) || points == 0 {
        return Err(Error::Config(format!(
            "rotation grid needs omega_max > 0 and points >= 1, got {max}, {points}"
        )));
    }
    let mut omegas = linspace(-max, max, points);
    omegas.extend([0.0, EARTH_ROTATION_RATE]);
    omegas.sort_by(f64::total_cmp);
    omegas.dedup();
    let deltas = omegas
        .iter()
        .map(|&w| sagnac_shift(&base.with_rotation_rate(w)))
        .collect::<Result<Vec<_>>>()?;
    let fs: Vec<f64> = deltas.iter().map(|d| DF_DDELTA * d).collect();

    let mut w = Writer::new(cfg)?;
    let table = DatTable::new()
        .comment("Sagnac splitting of the CW/CCW resonances")
        .comment(format!(
            "n0 = {}  R = {} m  lambda = {} m  dn0/dlambda = {} 1/m  omega_l = {:e} rad/s",
            base.n0, base.radius, base.wavelength, base.dn_dlambda, base.omega_l
        ))
        .column("omega", omegas.clone())
        .column("delta", deltas.clone())
        .column("f", fs);
    w.table(
        "sagnac.dat",
        &table,
        vec![
            ColumnMeta::plain("omega", "rotation rate, rad/s"),
            ColumnMeta::method("delta", "splitting Delta, rad/s", "closed_form"),
            ColumnMeta::method("f", "2 Delta, rad/s", "closed_form"),
        ],
    )?;

    let at = |target: f64| omegas.iter().position(|&x| x == target).map(|k| deltas[k]);
    let earth = at(EARTH_ROTATION_RATE);
    let zero = at(0.0);
    let slope = sagnac_shift(&base.with_rotation_rate(1.0))?;
    let nonlinearity = omegas
        .iter()
        .zip(&deltas)
        .map(|(&o, &d)| (d - slope * o).abs() / (slope * max).abs())
        .fold(0.0, f64::max);
    let checks = vec![
        Check::new(
            "earth_rate_row",
            earth.is_some(),
            format!(
                "Delta(7.292e-5 rad/s) = {:e} rad/s",
                earth.unwrap_or(f64::NAN)
            ),
        ),
        Check::new(
            "zero_rate_zero_shift",
            zero == Some(0.0),
            format!("Delta(0) = {:?}", zero),
        ),
        Check::new(
            "linear_in_rate",
            nonlinearity <= 1e-12,
            format!("max |Delta - (dDelta/dOmega) Omega| relative to range {nonlinearity:.2e}"),
        ),
    ];
    let summary = json!({
        "omega_l": omega_l,
        "ddelta_domega": slope,
        "earth_rate": EARTH_ROTATION_RATE,
        "earth_delta": earth,
    });
    w.finish(checks, summary)
}
