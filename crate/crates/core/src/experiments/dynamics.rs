//! Fig. 5: exact atom + two-mode dynamics against the effective spin model.

use serde_json::json;

use super::{linspace, Check, ColumnMeta, ExperimentConfig, RunReport, Writer};
use crate::error::{Error, Result};
use crate::model::MicroscopicParams;
use crate::propagation::dynamics_trace_with_budget;

pub fn run_fig5(cfg: &ExperimentConfig) -> Result<RunReport> {
    let n = u32::try_from(cfg.usize("n")?).map_err(|_| Error::Config("n is too large".into()))?;
    let g = cfg.f64("g")?;
    let params = MicroscopicParams {
        omega_l: cfg.f64("omega_l")?,
        delta: cfg.f64("delta")?,
        omega_a: cfg.f64("omega_a")?,
        g_cw: g,
        g_ccw: g,
        n_total: 2 * n,
    };
    params.validate()?;
    let (t_max, points) = (cfg.f64("t_max")?, cfg.usize("points")?);
    if !(t_max > 0.0) || points < 2 {
        return Err(Error::Config(format!(
            "time grid needs t_max > 0 and points >= 2, got {t_max}, {points}"
        )));
    }
    let times = linspace(0.0, t_max, points);
    let trace = dynamics_trace_with_budget(&params, n, &times, cfg.usize("max_dim")?)?;

    let mut w = Writer::new(cfg)?;
    w.table(
        "fig5.dat",
        &trace.to_table(),
        vec![
            ColumnMeta::plain("t", "time"),
            ColumnMeta::method("p_exact", "population of |n,n,g>", "exact_evolution"),
            ColumnMeta::method(
                "p_approx",
                "population of |j,0> in the effective model",
                "exact_evolution",
            ),
            ColumnMeta::method("p_atom", "excited-atom population", "exact_evolution"),
        ],
    )?;

    let (p_max, dev_max) = (cfg.f64("p_atom_max")?, cfg.f64("deviation_max")?);
    let (pa, dev) = (trace.max_p_atom(), trace.max_deviation());
    let checks = vec![
        Check::new(
            "atom_stays_ground",
            pa <= p_max,
            format!("max p_atom {pa:.4e} (allowed {p_max})"),
        ),
        Check::new(
            "effective_model_agrees",
            dev <= dev_max,
            format!("max |p_exact - p_approx| {dev:.4e} (allowed {dev_max})"),
        ),
    ];
    let summary = json!({
        "g_eff": trace.g_eff,
        "d_effective": trace.d_effective,
        "max_p_atom": pa,
        "max_deviation": dev,
        "sector_dim": 4 * n + 1,
    });
    w.finish(checks, summary)
}
