//! State-shape scenarios: Dicke distributions (Fig. 3) and Husimi Q (Fig. 4).

use rayon::prelude::*;
use serde_json::json;

use super::{Check, ColumnMeta, ExperimentConfig, RunReport, Writer};
use crate::analysis::{
    dicke_distribution, husimi_q, spread_metrics, DickeDistribution, SphereGrid, SpreadMetrics,
};
use crate::error::Result;
use crate::model::EffectiveModelParams;
use crate::propagation::evolve_probe;
use crate::spin::{SpinQuantum, SpinState};
use crate::table::DatTable;

fn evolved(j: f64, cfg: &ExperimentConfig, e_over_d: f64) -> Result<SpinState> {
    let p = EffectiveModelParams::from_products(
        SpinQuantum::new(j)?,
        cfg.f64("d")?,
        cfg.f64("ft")?,
        cfg.f64("dt")?,
        e_over_d,
    )?;
    evolve_probe(&p)
}

fn dist_meta() -> Vec<ColumnMeta> {
    vec![
        ColumnMeta::plain("m", "Jz eigenvalue"),
        ColumnMeta::method("p", "|<j,m|psi(t)>|^2", "exact_evolution"),
    ]
}

fn label(e_over_d: f64) -> &'static str {
    if e_over_d == 0.0 {
        "linear"
    } else {
        "nonlinear"
    }
}

fn normalization_check(name: &str, d: &DickeDistribution) -> Check {
    let err = (d.total() - 1.0).abs();
    Check::new(name, err <= 1e-10, format!("|sum p - 1| = {err:.2e}"))
}

/// Dicke-basis distributions at two spins, with and without the Kerr term.
pub fn run_fig3(cfg: &ExperimentConfig) -> Result<RunReport> {
    let e = cfg.f64("e_over_d")?;
    let cases: Vec<(f64, f64)> = [cfg.f64("j_small")?, cfg.f64("j_large")?]
        .into_iter()
        .flat_map(|j| [(j, 0.0), (j, e)])
        .collect();
    let dists = cases
        .par_iter()
        .map(|&(j, eod)| evolved(j, cfg, eod).map(|psi| dicke_distribution(&psi)))
        .collect::<Result<Vec<_>>>()?;

    let mut w = Writer::new(cfg)?;
    let mut checks = Vec::new();
    let mut metrics: Vec<SpreadMetrics> = Vec::new();
    for (&(j, eod), d) in cases.iter().zip(&dists) {
        let stem = format!("dist_j{j}_{}", label(eod));
        let table = d.to_table().comment(format!(
            "ft = {}  dt = {}  e/d = {eod}",
            cfg.f64("ft")?,
            cfg.f64("dt")?
        ));
        w.table(&format!("{stem}.dat"), &table, dist_meta())?;
        checks.push(normalization_check(&format!("{stem}_normalized"), d));
        metrics.push(spread_metrics(d));
    }
    let summary_table = DatTable::new()
        .comment("spread of the Dicke distributions")
        .column("j", cases.iter().map(|c| c.0).collect())
        .column("e_over_d", cases.iter().map(|c| c.1).collect())
        .column("mean_m", metrics.iter().map(|m| m.mean_m).collect())
        .column("std_m", metrics.iter().map(|m| m.std_m).collect())
        .column(
            "participation",
            metrics.iter().map(|m| m.participation_ratio).collect(),
        );
    w.table(
        "fig3_summary.dat",
        &summary_table,
        vec![
            ColumnMeta::plain("j", "spin"),
            ColumnMeta::plain("e_over_d", "Kerr strength"),
            ColumnMeta::method("mean_m", "mean of m", "exact_evolution"),
            ColumnMeta::method("std_m", "standard deviation of m", "exact_evolution"),
            ColumnMeta::method("participation", "1 / sum p_m^2", "exact_evolution"),
        ],
    )?;

    let tol = cfg.f64("std_agreement")?;
    let (sl, sn) = (metrics[0].std_m, metrics[1].std_m);
    let rel = (sn - sl).abs() / sl;
    checks.push(Check::new(
        "small_j_similar_spread",
        rel <= tol,
        format!("j = {}: std_m linear {sl:.4}, nonlinear {sn:.4}, relative difference {rel:.4} (allowed {tol})", cases[0].0),
    ));
    let (ll, ln) = (metrics[2].std_m, metrics[3].std_m);
    checks.push(Check::new(
        "large_j_compressed",
        ln < ll,
        format!(
            "j = {}: std_m linear {ll:.4}, nonlinear {ln:.4}",
            cases[2].0
        ),
    ));
    let summary = json!({
        "cases": cases.iter().zip(&metrics).map(|(c, m)| json!({
            "j": c.0, "e_over_d": c.1, "metrics": m,
        })).collect::<Vec<_>>(),
    });
    w.finish(checks, summary)
}

/// Husimi Q functions and Dicke distributions of the linear and nonlinear
/// states at one spin.
pub fn run_fig4(cfg: &ExperimentConfig) -> Result<RunReport> {
    let j = cfg.f64("j")?;
    let e = cfg.f64("e_over_d")?;
    let grid = SphereGrid::gauss(cfg.usize("n_theta")?, cfg.usize("n_phi")?)?;
    let tol = cfg.f64("integral_tolerance")?;

    let mut w = Writer::new(cfg)?;
    let mut checks = Vec::new();
    let mut qs = Vec::new();
    let mut metrics = Vec::new();
    for eod in [0.0, e] {
        let psi = evolved(j, cfg, eod)?;
        let name = label(eod);
        let q = husimi_q(&psi, &grid)?;
        q.write(w.dir(), &format!("q_{name}"))?;
        w.extra(&format!("q_{name}.dat"));
        w.extra(&format!("q_{name}.json"));
        let d = dicke_distribution(&psi);
        w.table(&format!("dist_{name}.dat"), &d.to_table(), dist_meta())?;
        checks.push(normalization_check(&format!("dist_{name}_normalized"), &d));

        let expected = 4.0 / q.j.dim() as f64;
        let integral = q.sphere_integral();
        checks.push(Check::new(
            format!("q_{name}_integral"),
            (integral - expected).abs() <= tol,
            format!("sphere integral {integral:.10} vs 4/(2j+1) = {expected:.10}"),
        ));
        checks.push(Check::new(
            format!("q_{name}_nonnegative"),
            q.min() >= 0.0,
            format!("min Q = {:.3e}", q.min()),
        ));
        metrics.push(spread_metrics(&d));
        qs.push(q);
    }
    let (ql, qn) = (&qs[0], &qs[1]);
    checks.push(Check::new(
        "nonlinear_lower_peak",
        qn.max() < ql.max(),
        format!("max Q linear {:.6e}, nonlinear {:.6e}", ql.max(), qn.max()),
    ));
    checks.push(Check::new(
        "nonlinear_more_uniform",
        qn.occupied_solid_angle() > ql.occupied_solid_angle(),
        format!(
            "Q participation (int Q)^2 / int Q^2: linear {:.4}, nonlinear {:.4}",
            ql.occupied_solid_angle(),
            qn.occupied_solid_angle()
        ),
    ));
    let summary = json!({
        "linear": { "q_max": ql.max(), "q_argmax": ql.argmax(), "q_solid_angle": ql.occupied_solid_angle(), "dicke": metrics[0] },
        "nonlinear": { "q_max": qn.max(), "q_argmax": qn.argmax(), "q_solid_angle": qn.occupied_solid_angle(), "dicke": metrics[1] },
    });
    w.finish(checks, summary)
}
