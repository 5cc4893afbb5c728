//! QFI scenarios: Fig. 2(a), Fig. 2(b) and generic one-axis sweeps.

use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use super::{
    linspace, logspace, scaling_fit, Check, ColumnMeta, ExperimentConfig, RunReport, Writer,
};
use crate::error::{Error, Result};
use crate::metrology::{
    closed_form_qfi_linear, linear_coeffs, nonlinear_coeffs, perturbative_coeffs, qfi_effective_fd,
    qfi_from_coeffs, QfiResult,
};
use crate::model::EffectiveModelParams;
use crate::spin::{initial_probe_state, SpinQuantum};
use crate::table::DatTable;

/// All QFI estimates at one sweep point.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QfiPoint {
    pub params: EffectiveModelParams,
    pub linear_fd: QfiResult,
    pub linear_closed: f64,
    pub nonlinear: Option<NonlinearQfi>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NonlinearQfi {
    pub fd: QfiResult,
    /// Variance of the generator truncated at first order in `e`, with the
    /// coefficients in closed form.
    pub first_order: f64,
    /// Same truncation with the coefficients integrated numerically.
    pub perturbative: f64,
}

impl QfiPoint {
    /// Evaluate at `(j, d, ft, dt)`; the nonlinear estimates are skipped when
    /// `e_over_d == 0`.
    pub fn compute(j: SpinQuantum, d: f64, ft: f64, dt: f64, e_over_d: f64) -> Result<Self> {
        let p_lin = EffectiveModelParams::from_products(j, d, ft, dt, 0.0)?;
        let linear_fd = qfi_effective_fd(&p_lin)?;
        let linear_closed = closed_form_qfi_linear(j, &linear_coeffs(&p_lin)?)?.value;
        let mut params = p_lin;
        let nonlinear = if e_over_d != 0.0 {
            let p = EffectiveModelParams::from_products(j, d, ft, dt, e_over_d)?;
            params = p;
            let probe = initial_probe_state(j)?;
            let psi = probe.amplitudes().as_slice().expect("contiguous");
            Some(NonlinearQfi {
                fd: qfi_effective_fd(&p)?,
                first_order: qfi_from_coeffs(j, &nonlinear_coeffs(&p)?, psi)?,
                perturbative: qfi_from_coeffs(j, &perturbative_coeffs(&p)?, psi)?,
            })
        } else {
            None
        };
        Ok(Self {
            params,
            linear_fd,
            linear_closed,
            nonlinear,
        })
    }
}

/// QFI columns along one parameter axis.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepResult {
    pub axis_name: String,
    pub axis: Vec<f64>,
    pub points: Vec<QfiPoint>,
}

impl SweepResult {
    pub fn qfi_linear(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.linear_fd.value).collect()
    }

    pub fn qfi_linear_closed(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.linear_closed).collect()
    }

    /// Exact nonlinear QFI, if the sweep has `e != 0` everywhere.
    pub fn qfi_nonlinear(&self) -> Option<Vec<f64>> {
        self.points
            .iter()
            .map(|p| p.nonlinear.as_ref().map(|n| n.fd.value))
            .collect()
    }

    pub fn qfi_nonlinear_first_order(&self) -> Option<Vec<f64>> {
        self.points
            .iter()
            .map(|p| p.nonlinear.as_ref().map(|n| n.first_order))
            .collect()
    }

    pub fn qfi_nonlinear_perturbative(&self) -> Option<Vec<f64>> {
        self.points
            .iter()
            .map(|p| p.nonlinear.as_ref().map(|n| n.perturbative))
            .collect()
    }

    pub fn to_table(&self) -> (DatTable, Vec<ColumnMeta>) {
        let mut t = DatTable::new()
            .comment("quantum Fisher information for Delta, probe (|j,0> + |j,1>)/sqrt(2)")
            .column(self.axis_name.clone(), self.axis.clone())
            .column("qfi_linear", self.qfi_linear())
            .column(
                "err_linear",
                self.points
                    .iter()
                    .map(|p| p.linear_fd.error_estimate)
                    .collect(),
            )
            .column("qfi_linear_closed", self.qfi_linear_closed());
        let mut meta = vec![
            ColumnMeta::plain(&self.axis_name, "sweep axis"),
            ColumnMeta::method("qfi_linear", "QFI at e = 0", "finite_difference")
                .with_error("err_linear"),
            ColumnMeta::plain("err_linear", "error estimate of qfi_linear"),
            ColumnMeta::method("qfi_linear_closed", "QFI at e = 0", "closed_form_linear"),
        ];
        if let (Some(fd), Some(fo), Some(pt)) = (
            self.qfi_nonlinear(),
            self.qfi_nonlinear_first_order(),
            self.qfi_nonlinear_perturbative(),
        ) {
            let err = self
                .points
                .iter()
                .map(|p| p.nonlinear.as_ref().map_or(0.0, |n| n.fd.error_estimate))
                .collect();
            t = t
                .column("qfi_nonlinear", fd)
                .column("err_nonlinear", err)
                .column("qfi_nonlinear_first_order", fo)
                .column("qfi_nonlinear_perturbative", pt);
            meta.extend([
                ColumnMeta::method("qfi_nonlinear", "QFI at e != 0", "finite_difference")
                    .with_error("err_nonlinear"),
                ColumnMeta::plain("err_nonlinear", "error estimate of qfi_nonlinear"),
                ColumnMeta::method(
                    "qfi_nonlinear_first_order",
                    "QFI of the generator expanded to first order in e",
                    "first_order_nonlinear",
                ),
                ColumnMeta::method(
                    "qfi_nonlinear_perturbative",
                    "QFI of the generator expanded to first order in e, coefficients by quadrature",
                    "first_order_perturbative",
                ),
            ]);
        }
        (t, meta)
    }
}

struct Point {
    j: SpinQuantum,
    ft: f64,
    dt: f64,
    e_over_d: f64,
}

fn check_budget(points: &[Point], max_two_j: usize) -> Result<()> {
    match points.iter().find(|p| p.j.two_j() as usize > max_two_j) {
        Some(p) => Err(Error::Resource(format!(
            "j = {} (2j = {}) exceeds the limit max_two_j = {max_two_j}",
            p.j.j(),
            p.j.two_j()
        ))),
        None => Ok(()),
    }
}

fn evaluate(name: &str, axis: Vec<f64>, points: Vec<Point>, d: f64) -> Result<SweepResult> {
    let results = points
        .par_iter()
        .map(|p| QfiPoint::compute(p.j, d, p.ft, p.dt, p.e_over_d))
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepResult {
        axis_name: name.into(),
        axis,
        points: results,
    })
}

fn probe_spin(two_j: usize) -> Result<SpinQuantum> {
    if !two_j.is_multiple_of(2) || two_j == 0 {
        return Err(Error::Config(format!(
            "the probe state needs integer j >= 1; 2j = {two_j} is not allowed"
        )));
    }
    SpinQuantum::from_two_j(two_j as u32)
}

fn fit_json(fit: &Result<super::PowerLawFit>) -> serde_json::Value {
    match fit {
        Ok(f) => json!(f),
        Err(e) => json!({ "error": e.to_string() }),
    }
}

fn relative_spread(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs() / x.abs().max(y.abs()).max(f64::MIN_POSITIVE))
        .fold(0.0, f64::max)
}

/// QFI against photon number `2j` at fixed `ft`, `dt`.
pub fn run_fig2a(cfg: &ExperimentConfig) -> Result<(SweepResult, RunReport)> {
    let (lo, hi, step) = (
        cfg.usize("two_j_min")?,
        cfg.usize("two_j_max")?,
        cfg.usize("two_j_step")?,
    );
    if step == 0 || hi < lo {
        return Err(Error::Config(format!(
            "empty photon-number grid {lo}..{hi} step {step}"
        )));
    }
    let (d, ft, dt, e_over_d) = (
        cfg.f64("d")?,
        cfg.f64("ft")?,
        cfg.f64("dt")?,
        cfg.f64("e_over_d")?,
    );
    let two_js: Vec<usize> = (lo..=hi).step_by(step).collect();
    let points = two_js
        .iter()
        .map(|&n| {
            Ok(Point {
                j: probe_spin(n)?,
                ft,
                dt,
                e_over_d,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    check_budget(&points, cfg.usize("max_two_j")?)?;
    let sweep = evaluate(
        "two_j",
        two_js.iter().map(|&n| n as f64).collect(),
        points,
        d,
    )?;

    let mut w = Writer::new(cfg)?;
    let (table, meta) = sweep.to_table();
    let table = table.comment(format!(
        "ft = {ft}  dt = {dt}  d = {d}  e/d = {e_over_d} (nonlinear columns)"
    ));
    w.table("fig2a.dat", &table, meta)?;

    let window = (cfg.f64("fit_min")?, cfg.f64("fit_max")?);
    let top = (cfg.f64("top_window_min")?, hi as f64);
    let (target, tol) = (cfg.f64("slope_target")?, cfg.f64("slope_tolerance")?);
    let nl_min = cfg.f64("nonlinear_slope_min")?;

    let lin = sweep.qfi_linear();
    let lin_fit = scaling_fit(&sweep.axis, &lin, window);
    let mut checks = vec![match &lin_fit {
        Ok(f) => Check::new(
            "linear_slope",
            (f.exponent - target).abs() <= tol,
            format!(
                "slope {:.4} over 2j in [{}, {}], target {target} +/- {tol}",
                f.exponent, window.0, window.1
            ),
        ),
        Err(e) => Check::new("linear_slope", false, e.to_string()),
    }];
    let spread = relative_spread(&lin, &sweep.qfi_linear_closed());
    checks.push(Check::new(
        "linear_methods_agree",
        spread <= 1e-6,
        format!("max relative difference finite-difference vs closed form {spread:.2e}"),
    ));

    let mut summary = json!({ "linear_fit": fit_json(&lin_fit) });
    if let (Some(fd), Some(fo), Some(pt)) = (
        sweep.qfi_nonlinear(),
        sweep.qfi_nonlinear_first_order(),
        sweep.qfi_nonlinear_perturbative(),
    ) {
        let fo_fit = scaling_fit(&sweep.axis, &fo, top);
        checks.push(match &fo_fit {
            Ok(f) => Check::new(
                "nonlinear_top_slope",
                f.exponent > nl_min,
                format!(
                    "first-order nonlinear slope {:.4} over 2j in [{}, {}], needs > {nl_min}",
                    f.exponent, top.0, top.1
                ),
            ),
            Err(e) => Check::new("nonlinear_top_slope", false, e.to_string()),
        });
        let last = lin.len() - 1;
        checks.push(Check::new(
            "nonlinear_exceeds_linear",
            fo[last] > lin[last],
            format!(
                "at 2j = {}: first-order nonlinear {:.6e} vs linear {:.6e}",
                sweep.axis[last], fo[last], lin[last]
            ),
        ));
        summary["nonlinear_first_order_top_fit"] = fit_json(&fo_fit);
        summary["nonlinear_perturbative_top_fit"] = fit_json(&scaling_fit(&sweep.axis, &pt, top));
        summary["nonlinear_exact_top_fit"] = fit_json(&scaling_fit(&sweep.axis, &fd, top));
        summary["at_max_two_j"] = json!({
            "two_j": sweep.axis[last],
            "linear": lin[last],
            "nonlinear_exact": fd[last],
            "nonlinear_first_order": fo[last],
            "nonlinear_perturbative": pt[last],
        });
    }
    let report = w.finish(checks, summary)?;
    Ok((sweep, report))
}

/// QFI against `f` at fixed `j` and `dt`.
pub fn run_fig2b(cfg: &ExperimentConfig) -> Result<(SweepResult, RunReport)> {
    let j = SpinQuantum::new(cfg.f64("j")?)?;
    probe_spin(j.two_j() as usize)?;
    let (d, dt, e_over_d) = (cfg.f64("d")?, cfg.f64("dt")?, cfg.f64("e_over_d")?);
    let (a, b, n) = (
        cfg.f64("f_over_d_min")?,
        cfg.f64("f_over_d_max")?,
        cfg.usize("points")?,
    );
    if !(a > 0.0 && b >= a) || n == 0 {
        return Err(Error::Config(format!(
            "f/d grid needs 0 < min <= max and points >= 1, got [{a}, {b}] x {n}"
        )));
    }
    let ratios = logspace(a, b, n);
    let points: Vec<Point> = ratios
        .iter()
        .map(|&r| Point {
            j,
            ft: r * dt,
            dt,
            e_over_d,
        })
        .collect();
    check_budget(&points, cfg.usize("max_two_j")?)?;
    let sweep = evaluate("f_over_d", ratios, points, d)?;

    let mut w = Writer::new(cfg)?;
    let (table, meta) = sweep.to_table();
    let table = table.comment(format!(
        "j = {}  dt = {dt}  d = {d}  e/d = {e_over_d} (nonlinear columns)",
        j.j()
    ));
    w.table("fig2b.dat", &table, meta)?;

    let all_ok = table
        .columns
        .iter()
        .filter(|(name, _)| name.starts_with("qfi_"))
        .all(|(_, v)| v.iter().all(|x| x.is_finite() && *x > 0.0));
    let mut checks = vec![Check::new(
        "finite_positive",
        all_ok,
        "every QFI column finite and positive",
    )];
    let cross = cfg.f64("crossover_max")?;
    let lin = sweep.qfi_linear();
    let mut summary = json!({});
    if let (Some(fd), Some(fo)) = (sweep.qfi_nonlinear(), sweep.qfi_nonlinear_first_order()) {
        let below: Vec<usize> = (0..lin.len()).filter(|&k| sweep.axis[k] <= cross).collect();
        let fo_wins = below.iter().filter(|&&k| fo[k] > lin[k]).count();
        let fd_wins = below.iter().filter(|&&k| fd[k] > lin[k]).count();
        checks.push(Check::new(
            "nonlinear_exceeds_linear_small_f",
            !below.is_empty() && fo_wins == below.len(),
            format!(
                "first-order nonlinear above linear at {fo_wins}/{} points with f/d <= {cross}",
                below.len()
            ),
        ));
        summary = json!({
            "points_below_crossover": below.len(),
            "first_order_above_linear": fo_wins,
            "exact_above_linear": fd_wins,
        });
    }
    let report = w.finish(checks, summary)?;
    Ok((sweep, report))
}

/// One-axis sweep over `f_over_d`, `dt`, `two_j` or `e_over_d`.
pub fn run_sweep(cfg: &ExperimentConfig) -> Result<(SweepResult, RunReport)> {
    let axis_name = cfg.str("axis")?.to_string();
    let (start, stop, n) = (cfg.f64("start")?, cfg.f64("stop")?, cfg.usize("points")?);
    if n == 0 || stop < start {
        return Err(Error::Config(format!(
            "sweep range [{start}, {stop}] x {n} is empty"
        )));
    }
    let axis = match cfg.str("spacing")? {
        "log" if start > 0.0 => logspace(start, stop, n),
        "log" => return Err(Error::Config("log spacing needs start > 0".into())),
        "linear" => linspace(start, stop, n),
        other => {
            return Err(Error::Config(format!(
                "spacing must be log or linear, got {other}"
            )))
        }
    };
    let (d, ft, dt, e_over_d) = (
        cfg.f64("d")?,
        cfg.f64("ft")?,
        cfg.f64("dt")?,
        cfg.f64("e_over_d")?,
    );
    let j = SpinQuantum::new(cfg.f64("j")?)?;
    let axis = if axis_name == "two_j" {
        // Round onto even photon numbers so the probe state exists.
        let mut v: Vec<f64> = axis
            .iter()
            .map(|x| (2.0 * (x / 2.0).round()).max(2.0))
            .collect();
        v.dedup();
        v
    } else {
        axis
    };
    let points = axis
        .iter()
        .map(|&x| {
            Ok(match axis_name.as_str() {
                "f_over_d" => Point {
                    j,
                    ft: x * dt,
                    dt,
                    e_over_d,
                },
                "dt" => Point {
                    j,
                    ft: ft / dt * x,
                    dt: x,
                    e_over_d,
                },
                "two_j" => Point {
                    j: probe_spin(x as usize)?,
                    ft,
                    dt,
                    e_over_d,
                },
                "e_over_d" => Point {
                    j,
                    ft,
                    dt,
                    e_over_d: x,
                },
                other => {
                    return Err(Error::Config(format!(
                        "unknown sweep axis {other:?}; use f_over_d, dt, two_j or e_over_d"
                    )))
                }
            })
        })
        .collect::<Result<Vec<_>>>()?;
    probe_spin(j.two_j() as usize)?;
    check_budget(&points, cfg.usize("max_two_j")?)?;
    let has_zero_e = points.iter().any(|p| p.e_over_d == 0.0);
    let points = if has_zero_e {
        points
            .into_iter()
            .map(|p| Point { e_over_d: 0.0, ..p })
            .collect()
    } else {
        points
    };
    let sweep = evaluate(&axis_name, axis, points, d)?;

    let mut w = Writer::new(cfg)?;
    let (table, meta) = sweep.to_table();
    w.table("sweep.dat", &table, meta)?;
    let all_ok = table
        .columns
        .iter()
        .filter(|(name, _)| name.starts_with("qfi_"))
        .all(|(_, v)| v.iter().all(|x| x.is_finite() && *x >= 0.0));
    let checks = vec![Check::new(
        "finite_nonnegative",
        all_ok,
        "every QFI column finite and >= 0",
    )];
    let fit = scaling_fit(
        &sweep.axis,
        &sweep.qfi_linear(),
        (f64::MIN_POSITIVE, f64::INFINITY),
    );
    let report = w.finish(checks, json!({ "linear_fit_full_range": fit_json(&fit) }))?;
    Ok((sweep, report))
}
