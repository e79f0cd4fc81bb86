//! Problem files: TOML with the keys `states`, `drift`, `breakpoints`,
//! `generators`, `discount`, `functional`, `inversion` and `mc`.

use std::collections::BTreeMap;
use std::fmt;

use nalgebra::DMatrix;
use serde::Deserialize;
use sha2::{Digest, Sha256};

use crate::chain::{validate_generator, DriftModel, GeneratorMatrix, RegimeSchedule, GENERATOR_TOL};
use crate::functional::{FunctionalKind, FunctionalSpec};
use crate::laplace::{InversionConfig, InversionMethod};
use crate::mc::SimConfig;

/// Paths used by `mc` and `compare` unless the file says otherwise.
pub const DEFAULT_PATHS: usize = 100_000;
pub const DEFAULT_SEED: u64 = 1;

/// A config problem, located by key path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError {
    pub path: String,
    pub message: String,
}

impl ConfigError {
    fn new(path: impl Into<String>, message: impl Into<String>) -> Self {
        ConfigError { path: path.into(), message: message.into() }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.path.is_empty() {
            f.write_str(&self.message)
        } else {
            write!(f, "{}: {}", self.path, self.message)
        }
    }
}

impl std::error::Error for ConfigError {}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    states: Vec<String>,
    drift: BTreeMap<String, f64>,
    #[serde(default)]
    breakpoints: Vec<f64>,
    generators: Vec<Vec<Vec<f64>>>,
    discount: f64,
    functional: Option<RawFunctional>,
    inversion: Option<RawInversion>,
    mc: Option<RawMc>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFunctional {
    kind: String,
    from: String,
    to: String,
    level: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawInversion {
    method: Option<String>,
    terms: Option<usize>,
    precision: Option<u32>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMc {
    paths: Option<usize>,
    seed: Option<u64>,
    horizon: Option<f64>,
}

/// A validated problem.
#[derive(Debug, Clone)]
pub struct ProblemConfig {
    pub drift: DriftModel,
    pub schedule: RegimeSchedule,
    pub discount: f64,
    pub functional: Option<FunctionalSpec>,
    pub inversion: InversionConfig,
    pub mc: SimConfig,
    /// Hex SHA-256 of the file text.
    pub digest: String,
}

impl ProblemConfig {
    pub fn states(&self) -> &[String] {
        self.drift.labels()
    }

    pub fn require_functional(&self) -> Result<FunctionalSpec, ConfigError> {
        self.functional
            .ok_or_else(|| ConfigError::new("functional", "this command needs a [functional] table"))
    }
}

fn matrix(rows: &[Vec<f64>], dim: usize, path: &str) -> Result<DMatrix<f64>, ConfigError> {
    if rows.len() != dim {
        return Err(ConfigError::new(path, format!("expected {dim} rows, found {}", rows.len())));
    }
    for (r, row) in rows.iter().enumerate() {
        if row.len() != dim {
            return Err(ConfigError::new(format!("{path}[{r}]"), format!("expected {dim} entries, found {}", row.len())));
        }
    }
    Ok(DMatrix::from_fn(dim, dim, |i, j| rows[i][j]))
}

fn state(labels: &[String], name: &str, path: &str) -> Result<usize, ConfigError> {
    labels
        .iter()
        .position(|l| l == name)
        .ok_or_else(|| ConfigError::new(path, format!("unknown state `{name}`")))
}

/// Parse and validate a problem file.
pub fn parse_config(text: &str) -> Result<ProblemConfig, ConfigError> {
    let value: toml::Table = text.parse().map_err(|e: toml::de::Error| ConfigError::new("", e.message().to_string()))?;
    let raw: RawConfig = serde_path_to_error::deserialize(toml::Value::Table(value)).map_err(|e| {
        let path = e.path().to_string();
        ConfigError::new(if path == "." { String::new() } else { path }, e.into_inner().to_string())
    })?;

    let labels = raw.states;
    if labels.is_empty() {
        return Err(ConfigError::new("states", "at least two states are needed"));
    }
    for (i, l) in labels.iter().enumerate() {
        if labels[..i].contains(l) {
            return Err(ConfigError::new("states", format!("duplicate state `{l}`")));
        }
    }
    for key in raw.drift.keys() {
        state(&labels, key, "drift")?;
    }
    let mut rates = Vec::with_capacity(labels.len());
    for l in &labels {
        let v = *raw
            .drift
            .get(l)
            .ok_or_else(|| ConfigError::new("drift", format!("missing rate for state `{l}`")))?;
        if v == 0.0 || !v.is_finite() {
            return Err(ConfigError::new(format!("drift.{l}"), format!("rate for state `{l}` must be nonzero and finite, got {v}")));
        }
        rates.push(v);
    }
    let drift = DriftModel::new(labels.iter().cloned(), &rates).map_err(|e| ConfigError::new("drift", e.to_string()))?;

    for (k, w) in raw.breakpoints.windows(2).enumerate() {
        if !(w[0] < w[1]) {
            return Err(ConfigError::new(format!("breakpoints[{}]", k + 1), "breakpoints must be strictly increasing"));
        }
    }
    if let Some(&b) = raw.breakpoints.first() {
        if !(b > 0.0) {
            return Err(ConfigError::new("breakpoints[0]", "breakpoints must be positive"));
        }
    }
    let expected = raw.breakpoints.len() + 1;
    if raw.generators.len() != expected {
        return Err(ConfigError::new("generators", format!("expected {expected}, found {}", raw.generators.len())));
    }
    let dim = labels.len();
    let mut gens = Vec::with_capacity(expected);
    for (k, rows) in raw.generators.iter().enumerate() {
        let path = format!("generators[{k}]");
        let m = matrix(rows, dim, &path)?;
        let report = validate_generator(&m, GENERATOR_TOL);
        if !report.is_ok() {
            return Err(ConfigError::new(path, report.to_string()));
        }
        gens.push(GeneratorMatrix::new(m).map_err(|e| ConfigError::new(format!("generators[{k}]"), e.to_string()))?);
    }
    let schedule = RegimeSchedule::new(raw.breakpoints, gens).map_err(|e| ConfigError::new("breakpoints", e.to_string()))?;

    if !(raw.discount > 0.0 && raw.discount.is_finite()) {
        return Err(ConfigError::new("discount", format!("must be positive, got {}", raw.discount)));
    }

    let functional = match raw.functional {
        None => None,
        Some(f) => {
            let kind: FunctionalKind = f.kind.parse().map_err(|e: crate::Error| ConfigError::new("functional.kind", e.to_string()))?;
            let spec = FunctionalSpec {
                kind,
                from: state(&labels, &f.from, "functional.from")?,
                to: state(&labels, &f.to, "functional.to")?,
                level: f.level,
            };
            if kind.has_level() && f.level.is_none() {
                return Err(ConfigError::new("functional.level", format!("{kind} needs a level")));
            }
            if !kind.has_level() && f.level.is_some() {
                return Err(ConfigError::new("functional.level", format!("{kind} takes no level")));
            }
            spec.validate(&drift).map_err(|e| ConfigError::new("functional", e.to_string()))?;
            Some(spec)
        }
    };

    let arity = schedule.n_breakpoints();
    let inversion = {
        let raw_inv = raw.inversion.unwrap_or(RawInversion { method: None, terms: None, precision: None });
        let method = match raw_inv.method {
            Some(m) => m.parse::<InversionMethod>().map_err(|e| ConfigError::new("inversion.method", e.to_string()))?,
            None => InversionMethod::GaverStehfest,
        };
        let mut cfg = InversionConfig::for_numerical_evaluator(method, arity);
        if let Some(t) = raw_inv.terms {
            cfg.terms = t;
        }
        if let Some(p) = raw_inv.precision {
            cfg.precision = p;
        }
        cfg.validate().map_err(|e| ConfigError::new("inversion", e.to_string()))?;
        if method.needs_complex() && (drift.plus_states().len() != 1 || drift.minus_states().len() != 1) {
            return Err(ConfigError::new(
                "inversion.method",
                "talbot needs exactly one state with positive and one with negative drift",
            ));
        }
        cfg
    };

    let mc = {
        let raw_mc = raw.mc.unwrap_or(RawMc { paths: None, seed: None, horizon: None });
        let mut cfg = SimConfig::for_discount(raw_mc.paths.unwrap_or(DEFAULT_PATHS), raw.discount, raw_mc.seed.unwrap_or(DEFAULT_SEED));
        if let Some(h) = raw_mc.horizon {
            cfg.horizon = h;
        }
        cfg.validate().map_err(|e| ConfigError::new("mc", e.to_string()))?;
        cfg
    };

    let digest = Sha256::digest(text.as_bytes()).iter().map(|b| format!("{b:02x}")).collect();
    Ok(ProblemConfig { drift, schedule, discount: raw.discount, functional, inversion, mc, digest })
}
