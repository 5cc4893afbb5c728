//! Figure reproductions, parameter sweeps and scaling fits.
//!
//! Each scenario reads an [`ExperimentConfig`], writes `.dat` column files
//! plus a `manifest.json` into the output directory, and returns a
//! [`RunReport`] whose embedded checks decide the exit status.

pub mod config;
mod dynamics;
mod qfi;
mod sagnac;
mod states;

use std::path::{Path, PathBuf};

use serde::Serialize;

pub use config::{ExperimentConfig, KeySpec, Scenario, Value, CONFIG_DIR_ENV};
pub use dynamics::run_fig5;
pub use qfi::{run_fig2a, run_fig2b, run_sweep, QfiPoint, SweepResult};
pub use sagnac::sagnac_report;
pub use states::{run_fig3, run_fig4};

use crate::error::{Error, Result};
use crate::table::DatTable;

/// One pass/fail assertion embedded in a scenario.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }
}

/// Provenance of one column in an output file.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ColumnMeta {
    pub name: String,
    pub description: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub method: Option<String>,
    /// Column holding this column's numerical error estimate.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error_column: Option<String>,
}

impl ColumnMeta {
    pub fn plain(name: &str, description: &str) -> Self {
        Self {
            name: name.into(),
            description: description.into(),
            method: None,
            error_column: None,
        }
    }

    pub fn method(name: &str, description: &str, method: &str) -> Self {
        Self {
            method: Some(method.into()),
            ..Self::plain(name, description)
        }
    }

    pub fn with_error(mut self, column: &str) -> Self {
        self.error_column = Some(column.into());
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OutputFile {
    pub file: String,
    pub columns: Vec<ColumnMeta>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunReport {
    pub scenario: Scenario,
    pub output_dir: PathBuf,
    pub outputs: Vec<OutputFile>,
    pub checks: Vec<Check>,
    /// Scenario-specific numbers worth reading without opening the data.
    pub summary: serde_json::Value,
}

impl RunReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failed_checks(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            1
        }
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

#[derive(Serialize)]
struct Manifest<'a> {
    tool: &'static str,
    version: &'static str,
    scenario: Scenario,
    config_hash: String,
    parameters: serde_json::Value,
    outputs: &'a [OutputFile],
    checks: &'a [Check],
    summary: &'a serde_json::Value,
}

/// Collects output files for one run.
pub(crate) struct Writer<'a> {
    cfg: &'a ExperimentConfig,
    outputs: Vec<OutputFile>,
}

impl<'a> Writer<'a> {
    pub(crate) fn new(cfg: &'a ExperimentConfig) -> Result<Self> {
        std::fs::create_dir_all(&cfg.output_dir)?;
        Ok(Self {
            cfg,
            outputs: Vec::new(),
        })
    }

    pub(crate) fn dir(&self) -> &Path {
        &self.cfg.output_dir
    }

    pub(crate) fn table(
        &mut self,
        file: &str,
        table: &DatTable,
        columns: Vec<ColumnMeta>,
    ) -> Result<()> {
        debug_assert_eq!(columns.len(), table.columns.len());
        table.write(&self.cfg.output_dir.join(file))?;
        self.outputs.push(OutputFile {
            file: file.into(),
            columns,
        });
        Ok(())
    }

    pub(crate) fn extra(&mut self, file: &str) {
        self.outputs.push(OutputFile {
            file: file.into(),
            columns: Vec::new(),
        });
    }

    pub(crate) fn finish(
        self,
        checks: Vec<Check>,
        summary: serde_json::Value,
    ) -> Result<RunReport> {
        let manifest = Manifest {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            scenario: self.cfg.scenario,
            config_hash: self.cfg.hash(),
            parameters: self.cfg.snapshot(),
            outputs: &self.outputs,
            checks: &checks,
            summary: &summary,
        };
        let text = serde_json::to_string_pretty(&manifest)?;
        std::fs::write(self.cfg.output_dir.join("manifest.json"), text + "\n")?;
        Ok(RunReport {
            scenario: self.cfg.scenario,
            output_dir: self.cfg.output_dir.clone(),
            outputs: self.outputs,
            checks,
            summary,
        })
    }
}

/// Run a scenario on a pool of `jobs` worker threads (0 = rayon default).
pub fn run(cfg: &ExperimentConfig, jobs: usize) -> Result<RunReport> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::Config(format!("cannot build worker pool: {e}")))?;
    pool.install(|| match cfg.scenario {
        Scenario::Fig2a => run_fig2a(cfg).map(|(_, r)| r),
        Scenario::Fig2b => run_fig2b(cfg).map(|(_, r)| r),
        Scenario::Fig3 => run_fig3(cfg),
        Scenario::Fig4 => run_fig4(cfg),
        Scenario::Fig5 => run_fig5(cfg),
        Scenario::CustomSweep => run_sweep(cfg).map(|(_, r)| r),
        Scenario::Sagnac => sagnac_report(cfg),
    })
}

/// Least-squares line through `(ln x, ln y)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PowerLawFit {
    pub exponent: f64,
    /// `ln` of the prefactor.
    pub intercept: f64,
    pub r_squared: f64,
    pub points: usize,
}

/// Fit `y = C x^k` over the points with `x` in `[window.0, window.1]`.
pub fn scaling_fit(axis: &[f64], values: &[f64], window: (f64, f64)) -> Result<PowerLawFit> {
    if axis.len() != values.len() {
        return Err(Error::DimensionMismatch {
            expected: axis.len(),
            found: values.len(),
        });
    }
    let (lo, hi) = window;
    let mut pts = Vec::new();
    for (&x, &y) in axis.iter().zip(values) {
        if x < lo || x > hi {
            continue;
        }
        if !(x > 0.0 && y > 0.0) {
            return Err(Error::Domain(format!(
                "power-law fit needs positive data; found ({x}, {y}) in the window"
            )));
        }
        pts.push((x.ln(), y.ln()));
    }
    if pts.len() < 3 {
        return Err(Error::Domain(format!(
            "power-law fit needs >= 3 points in [{lo}, {hi}], found {}",
            pts.len()
        )));
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = pts.iter().map(|p| (p.1 - my).powi(2)).sum();
    let k = sxy / sxx;
    let b = my - k * mx;
    let ss_res: f64 = pts.iter().map(|p| (p.1 - (k * p.0 + b)).powi(2)).sum();
    Ok(PowerLawFit {
        exponent: k,
        intercept: b,
        r_squared: if syy > 0.0 { 1.0 - ss_res / syy } else { 1.0 },
        points: pts.len(),
    })
}

/// `n` points from `a` to `b` inclusive.
pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![a],
        _ => (0..n)
            .map(|k| a + (b - a) * k as f64 / (n - 1) as f64)
            .collect(),
    }
}

/// `n` log-spaced points from `a` to `b` inclusive (`a, b > 0`).
pub fn logspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    let (la, lb) = (a.ln(), b.ln());
    linspace(la, lb, n).into_iter().map(f64::exp).collect()
}
