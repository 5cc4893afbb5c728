//! Flat key-value scenario configuration.
//!
//! Values are resolved in layers: built-in defaults, then
//! `$ROTSENSE_CONFIG_DIR/<scenario>.toml` if present, then an explicit
//! config file, then `key=value` overrides. Every layer may only set keys the
//! scenario declares, and a value must have the declared type (integers are
//! accepted for float keys).

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

pub const CONFIG_DIR_ENV: &str = "ROTSENSE_CONFIG_DIR";

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scenario {
    Fig2a,
    Fig2b,
    Fig3,
    Fig4,
    Fig5,
    CustomSweep,
    Sagnac,
}

impl Scenario {
    pub const ALL: [Scenario; 7] = [
        Scenario::Fig2a,
        Scenario::Fig2b,
        Scenario::Fig3,
        Scenario::Fig4,
        Scenario::Fig5,
        Scenario::CustomSweep,
        Scenario::Sagnac,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Scenario::Fig2a => "fig2a",
            Scenario::Fig2b => "fig2b",
            Scenario::Fig3 => "fig3",
            Scenario::Fig4 => "fig4",
            Scenario::Fig5 => "fig5",
            Scenario::CustomSweep => "sweep",
            Scenario::Sagnac => "sagnac",
        }
    }

    /// Declared keys with their defaults and one-line descriptions.
    pub fn schema(&self) -> Vec<KeySpec> {
        use Value::{Float as F, Int as I, Str as S};
        let k =
            |key: &'static str, default: Value, doc: &'static str| KeySpec { key, default, doc };
        match self {
            Scenario::Fig2a => vec![
                k("d", F(1.0), "coupling coefficient d = 2 g_eff, rad/s"),
                k("ft", F(10.0), "product f t"),
                k("dt", F(10.0), "product d t"),
                k(
                    "e_over_d",
                    F(0.01),
                    "Kerr strength of the nonlinear column, e / d",
                ),
                k("two_j_min", I(100), "smallest photon number 2j"),
                k("two_j_max", I(1000), "largest photon number 2j"),
                k("two_j_step", I(50), "photon-number spacing"),
                k("max_two_j", I(1200), "resource limit on 2j"),
                k(
                    "fit_min",
                    F(100.0),
                    "lower end of the linear-column fit window",
                ),
                k("fit_max", F(1000.0), "upper end of the fit window"),
                k(
                    "top_window_min",
                    F(600.0),
                    "lower end of the local-slope window for the nonlinear column",
                ),
                k("slope_target", F(2.0), "expected linear-column exponent"),
                k(
                    "slope_tolerance",
                    F(0.1),
                    "allowed deviation from slope_target",
                ),
                k(
                    "nonlinear_slope_min",
                    F(2.3),
                    "required local exponent of the nonlinear column",
                ),
            ],
            Scenario::Fig2b => vec![
                k("j", F(500.0), "spin quantum number"),
                k("d", F(1.0), "coupling coefficient d, rad/s"),
                k("dt", F(10.0), "product d t"),
                k(
                    "e_over_d",
                    F(0.01),
                    "Kerr strength of the nonlinear column, e / d",
                ),
                k("f_over_d_min", F(0.01), "smallest f / d"),
                k("f_over_d_max", F(10.0), "largest f / d"),
                k("points", I(60), "number of log-spaced f values"),
                k(
                    "crossover_max",
                    F(1.0),
                    "largest f / d at which nonlinear must exceed linear",
                ),
                k("max_two_j", I(1200), "resource limit on 2j"),
            ],
            Scenario::Fig3 => vec![
                k("j_small", F(100.0), "smaller spin"),
                k("j_large", F(500.0), "larger spin"),
                k("d", F(1.0), "coupling coefficient d, rad/s"),
                k("ft", F(10.0), "product f t"),
                k("dt", F(10.0), "product d t"),
                k("e_over_d", F(0.01), "Kerr strength of the nonlinear states"),
                k(
                    "std_agreement",
                    F(0.2),
                    "allowed relative std difference at j_small",
                ),
            ],
            Scenario::Fig4 => vec![
                k("j", F(20.0), "spin quantum number"),
                k("d", F(1.0), "coupling coefficient d, rad/s"),
                k("ft", F(10.0), "product f t"),
                k("dt", F(10.0), "product d t"),
                k("e_over_d", F(0.2), "Kerr strength of the nonlinear state"),
                k(
                    "n_theta",
                    I(181),
                    "polar grid size (Gauss-Legendre in cos theta)",
                ),
                k("n_phi", I(181), "azimuthal grid size"),
                k(
                    "integral_tolerance",
                    F(1e-3),
                    "allowed deviation of the sphere integral from 4/(2j+1)",
                ),
            ],
            Scenario::Fig5 => vec![
                k("n", I(20), "photons per mode in |n, n>"),
                k("g", F(1.0), "atom-mode coupling g_cw = g_ccw, rad/s"),
                k("delta", F(1.0), "Sagnac shift, rad/s"),
                k("omega_l", F(1600.0), "bare mode frequency, rad/s"),
                k("omega_a", F(2000.0), "atomic transition frequency, rad/s"),
                k("t_max", F(2000.0), "end of the time grid, s"),
                k("points", I(4001), "time samples including t = 0"),
                k(
                    "p_atom_max",
                    F(0.01),
                    "threshold on max excited-atom population",
                ),
                k(
                    "deviation_max",
                    F(0.05),
                    "threshold on max |p_exact - p_approx|",
                ),
                k("max_dim", I(4096), "sector dimension budget"),
            ],
            Scenario::CustomSweep => vec![
                k(
                    "axis",
                    S("f_over_d".into()),
                    "swept quantity: two_j, f_over_d, dt or e_over_d",
                ),
                k("start", F(0.1), "first axis value"),
                k("stop", F(10.0), "last axis value"),
                k("points", I(21), "number of axis values"),
                k("spacing", S("log".into()), "log or linear"),
                k(
                    "j",
                    F(20.0),
                    "spin quantum number (ignored when axis = two_j)",
                ),
                k("d", F(1.0), "coupling coefficient d, rad/s"),
                k("ft", F(10.0), "product f t (ignored when axis = f_over_d)"),
                k("dt", F(10.0), "product d t (ignored when axis = dt)"),
                k(
                    "e_over_d",
                    F(0.0),
                    "Kerr strength e / d (ignored when axis = e_over_d)",
                ),
                k("max_two_j", I(1200), "resource limit on 2j"),
            ],
            Scenario::Sagnac => vec![
                k("n0", F(1.44), "refractive index"),
                k("radius", F(1e-3), "resonator radius, m"),
                k("wavelength", F(1.55e-6), "probe wavelength, m"),
                k(
                    "dn_dlambda",
                    F(-1.2e4),
                    "material dispersion dn0/dlambda, 1/m",
                ),
                k(
                    "omega_l",
                    F(0.0),
                    "optical angular frequency, rad/s; 0 means 2 pi c / wavelength",
                ),
                k("omega_max", F(1e-3), "largest rotation rate, rad/s"),
                k(
                    "points",
                    I(21),
                    "rotation rates from -omega_max to omega_max",
                ),
            ],
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scenario {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Scenario::ALL
            .into_iter()
            .find(|sc| sc.name() == s || (s == "custom-sweep" && *sc == Scenario::CustomSweep))
            .ok_or_else(|| Error::Config(format!("unknown scenario {s:?}")))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Value {
    Float(f64),
    Int(i64),
    Str(String),
}

impl Value {
    fn type_name(&self) -> &'static str {
        match self {
            Value::Float(_) => "float",
            Value::Int(_) => "integer",
            Value::Str(_) => "string",
        }
    }

    /// Coerce `v` to the type of `self`.
    fn coerce(&self, v: toml::Value) -> Option<Value> {
        match (self, v) {
            (Value::Float(_), toml::Value::Float(x)) => Some(Value::Float(x)),
            (Value::Float(_), toml::Value::Integer(x)) => Some(Value::Float(x as f64)),
            (Value::Int(_), toml::Value::Integer(x)) => Some(Value::Int(x)),
            (Value::Str(_), toml::Value::String(s)) => Some(Value::Str(s)),
            _ => None,
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Float(x) => write!(f, "{x:e}"),
            Value::Int(x) => write!(f, "{x}"),
            Value::Str(s) => write!(f, "{s:?}"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct KeySpec {
    pub key: &'static str,
    pub default: Value,
    pub doc: &'static str,
}

/// A fully resolved scenario configuration.
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub scenario: Scenario,
    pub values: BTreeMap<String, Value>,
    pub output_dir: PathBuf,
}

impl ExperimentConfig {
    /// Built-in defaults, writing to `out/<scenario>`.
    pub fn defaults(scenario: Scenario) -> Self {
        Self {
            scenario,
            values: scenario
                .schema()
                .into_iter()
                .map(|k| (k.key.to_string(), k.default))
                .collect(),
            output_dir: PathBuf::from("out").join(scenario.name()),
        }
    }

    /// Defaults, then the environment config directory, then `file`, then
    /// `overrides`.
    pub fn resolve(scenario: Scenario, file: Option<&Path>, overrides: &[String]) -> Result<Self> {
        let mut cfg = Self::defaults(scenario);
        if let Ok(dir) = std::env::var(CONFIG_DIR_ENV) {
            let path = Path::new(&dir).join(format!("{}.toml", scenario.name()));
            if path.is_file() {
                cfg.apply_file(&path)?;
            }
        }
        if let Some(path) = file {
            cfg.apply_file(path)?;
        }
        for o in overrides {
            cfg.apply_override(o)?;
        }
        Ok(cfg)
    }

    pub fn apply_file(&mut self, path: &Path) -> Result<()> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        self.apply_toml(&text)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }

    pub fn apply_toml(&mut self, text: &str) -> Result<()> {
        let table: toml::Table = text.parse().map_err(|e| Error::Config(format!("{e}")))?;
        for (key, v) in table {
            if key == "output_dir" {
                let toml::Value::String(s) = v else {
                    return Err(Error::Config("output_dir must be a string".into()));
                };
                self.output_dir = PathBuf::from(s);
                continue;
            }
            self.set(&key, v)?;
        }
        Ok(())
    }

    /// Apply one `key=value` override; the value uses TOML syntax, with bare
    /// words taken as strings.
    pub fn apply_override(&mut self, item: &str) -> Result<()> {
        let (key, raw) = item
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("override {item:?} is not key=value")))?;
        let (key, raw) = (key.trim(), raw.trim());
        let parsed = format!("v = {raw}")
            .parse::<toml::Table>()
            .ok()
            .and_then(|mut t| t.remove("v"))
            .unwrap_or_else(|| toml::Value::String(raw.to_string()));
        if key == "output_dir" {
            self.output_dir = PathBuf::from(raw);
            return Ok(());
        }
        self.set(key, parsed)
    }

    fn set(&mut self, key: &str, v: toml::Value) -> Result<()> {
        let Some(current) = self.values.get(key) else {
            let known: Vec<&str> = self.values.keys().map(String::as_str).collect();
            return Err(Error::Config(format!(
                "unknown key {key:?} for scenario {}; known keys: {}",
                self.scenario,
                known.join(", ")
            )));
        };
        let shown = v.to_string();
        let coerced = current.coerce(v).ok_or_else(|| {
            Error::Config(format!(
                "{key} expects a {}, got {shown}",
                current.type_name()
            ))
        })?;
        self.values.insert(key.to_string(), coerced);
        Ok(())
    }

    pub fn f64(&self, key: &str) -> Result<f64> {
        match self.values.get(key) {
            Some(Value::Float(x)) => Ok(*x),
            Some(Value::Int(x)) => Ok(*x as f64),
            _ => Err(Error::Config(format!("missing numeric key {key}"))),
        }
    }

    pub fn usize(&self, key: &str) -> Result<usize> {
        match self.values.get(key) {
            Some(Value::Int(x)) if *x >= 0 => Ok(*x as usize),
            Some(Value::Int(x)) => Err(Error::Config(format!("{key} must be >= 0, got {x}"))),
            _ => Err(Error::Config(format!("missing integer key {key}"))),
        }
    }

    pub fn str(&self, key: &str) -> Result<&str> {
        match self.values.get(key) {
            Some(Value::Str(s)) => Ok(s),
            _ => Err(Error::Config(format!("missing string key {key}"))),
        }
    }

    /// Resolved parameters as JSON, keys sorted.
    pub fn snapshot(&self) -> serde_json::Value {
        serde_json::to_value(&self.values).expect("plain values")
    }

    /// SHA-256 over the scenario name and the canonical JSON of the values.
    pub fn hash(&self) -> String {
        let mut h = Sha256::new();
        h.update(self.scenario.name().as_bytes());
        h.update([0u8]);
        h.update(self.snapshot().to_string().as_bytes());
        h.finalize().iter().map(|b| format!("{b:02x}")).collect()
    }

    /// The resolved configuration as a TOML document.
    pub fn to_toml(&self) -> String {
        let mut out = format!("# scenario: {}\n", self.scenario);
        for spec in self.scenario.schema() {
            let v = &self.values[spec.key];
            let shown = match v {
                Value::Float(x) => format!("{x:?}"),
                other => other.to_string(),
            };
            out.push_str(&format!("{} = {}  # {}\n", spec.key, shown, spec.doc));
        }
        out
    }
}
