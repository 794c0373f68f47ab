//! Experiment configuration.
//!
//! A config is a TOML file with a flat key schema; per-algorithm settings use
//! dotted prefixes:
//!
//! ```toml
//! functions = ["drop_wave", "schaffer_n2"]
//! dim = 2
//! algorithms = ["qbo", "sa", "qa"]
//! seed_base = 0
//! n_seeds = 50
//! max_evaluations = 100000
//! success_tolerance = 1e-3
//! output_dir = "results"
//! trace = false
//! timing = false
//! box.drop_wave = [-5.12, 5.12]
//! qbo.proposal = "local"
//! sa.alpha = 0.995
//! qa.replicas = 20
//! ```
//!
//! Every key can be overridden from the command line with `key=value`, where
//! the value uses TOML syntax and bare words are read as strings.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::str::FromStr;

use quantopt::objectives::REGISTERED;
use quantopt::{Algorithm, AlgorithmParams64, Error, Objective64, Proposal};
use serde::{Deserialize, Serialize};

use crate::error::{HarnessError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub functions: Vec<String>,
    #[serde(default = "default_dim")]
    pub dim: usize,
    pub algorithms: Vec<String>,
    /// Explicit seed list; exclusive with `seed_base`/`n_seeds`.
    #[serde(default)]
    pub seeds: Option<Vec<u64>>,
    #[serde(default)]
    pub seed_base: Option<u64>,
    #[serde(default)]
    pub n_seeds: Option<u64>,
    #[serde(default = "default_max_evaluations")]
    pub max_evaluations: u64,
    #[serde(default = "default_tolerance")]
    pub success_tolerance: f64,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
    /// Write one JSONL trace per cell.
    #[serde(default)]
    pub trace: bool,
    /// Fill the `wall_ms` column. Off by default because timings make the
    /// results file differ between otherwise identical runs.
    #[serde(default)]
    pub timing: bool,
    /// Per-function search box `[lo, hi]` applied to every coordinate.
    #[serde(default, rename = "box")]
    pub boxes: BTreeMap<String, [f64; 2]>,
    #[serde(default)]
    pub qbo: QboSection,
    #[serde(default)]
    pub sa: SaSection,
    #[serde(default)]
    pub qa: QaSection,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QboSection {
    pub base: Option<u32>,
    pub power_cap: Option<u32>,
    /// `"local"` or `"uniform"`.
    pub proposal: Option<String>,
    pub initial_step: Option<f64>,
    pub global_fraction: Option<f64>,
    pub restart: Option<bool>,
    pub stall_limit: Option<u64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SaSection {
    pub t0: Option<f64>,
    pub alpha: Option<f64>,
    pub step: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QaSection {
    pub replicas: Option<usize>,
    pub gamma0: Option<f64>,
    pub gamma_decay: Option<f64>,
    pub temperature: Option<f64>,
    pub step: Option<f64>,
}

fn default_dim() -> usize {
    2
}

fn default_max_evaluations() -> u64 {
    100_000
}

fn default_tolerance() -> f64 {
    1e-3
}

fn default_output_dir() -> PathBuf {
    PathBuf::from("results")
}

impl ExperimentConfig {
    /// Parses a config, applying `key=value` overrides on top of the file.
    pub fn from_toml_str(text: &str, overrides: &[String]) -> Result<Self> {
        let mut table: toml::Table = text.parse().map_err(|e| HarnessError::Config(format!("{e}")))?;
        for item in overrides {
            apply_override(&mut table, item)?;
        }
        let config: Self = table.try_into().map_err(|e| HarnessError::Config(format!("{e}")))?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &std::path::Path, overrides: &[String]) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
        Self::from_toml_str(&text, overrides)
    }

    /// Checks every precondition so that a run never starts on a bad config.
    pub fn validate(&self) -> Result<()> {
        if self.functions.is_empty() {
            return Err(Error::InvalidArgument("no functions configured".into()).into());
        }
        if self.algorithms.is_empty() {
            return Err(Error::InvalidArgument("no algorithms configured".into()).into());
        }
        for name in &self.functions {
            if !REGISTERED.contains(&name.as_str()) {
                return Err(Error::NotFound(format!("objective `{name}`")).into());
            }
        }
        self.algorithm_list()?;
        if self.dim == 0 {
            return Err(Error::InvalidArgument("dim must be positive".into()).into());
        }
        if self.max_evaluations == 0 {
            return Err(Error::InvalidArgument("max_evaluations must be at least 1".into()).into());
        }
        if self.success_tolerance.is_nan() || self.success_tolerance < 0.0 {
            return Err(Error::InvalidArgument("success_tolerance must be nonnegative".into()).into());
        }
        for (name, [lo, hi]) in &self.boxes {
            if !self.functions.contains(name) {
                return Err(HarnessError::Config(format!("box given for unconfigured function `{name}`")));
            }
            if lo.is_nan() || hi.is_nan() || lo >= hi {
                return Err(Error::InvalidArgument(format!("box for {name} needs lo < hi")).into());
            }
        }
        self.seed_list()?;
        let params = self.params()?;
        params.qbo.validate()?;
        params.sa.validate()?;
        params.qa.validate()?;
        for name in &self.functions {
            self.objective(name)?;
        }
        Ok(())
    }

    pub fn algorithm_list(&self) -> Result<Vec<Algorithm>> {
        self.algorithms.iter().map(|a| Algorithm::from_str(a).map_err(HarnessError::from)).collect()
    }

    pub fn seed_list(&self) -> Result<Vec<u64>> {
        let seeds = match (&self.seeds, self.seed_base, self.n_seeds) {
            (Some(_), Some(_), _) | (Some(_), _, Some(_)) => {
                return Err(HarnessError::Config("give either `seeds` or `seed_base`/`n_seeds`, not both".into()))
            }
            (Some(list), None, None) => list.clone(),
            (None, base, n) => {
                let base = base.unwrap_or(0);
                let n = n.unwrap_or(1);
                (0..n).map(|i| base.wrapping_add(i)).collect()
            }
        };
        if seeds.is_empty() {
            return Err(Error::InvalidArgument("seed list is empty".into()).into());
        }
        Ok(seeds)
    }

    /// The registered objective with any configured box override.
    pub fn objective(&self, name: &str) -> Result<Objective64> {
        let obj = Objective64::by_name(name, self.dim)?;
        Ok(match self.boxes.get(name) {
            Some(&[lo, hi]) => {
                let d = obj.dim();
                obj.with_box(vec![lo; d], vec![hi; d])?
            }
            None => obj,
        })
    }

    pub fn params(&self) -> Result<AlgorithmParams64> {
        let mut p = AlgorithmParams64::default();
        let q = &self.qbo;
        if let Some(v) = q.base {
            p.qbo.base = v;
        }
        if let Some(v) = q.power_cap {
            p.qbo.power_cap = v;
        }
        if let Some(v) = q.restart {
            p.qbo.restart_on_saturation = v;
        }
        if let Some(v) = q.stall_limit {
            p.qbo.stall_limit = v;
        }
        let (mut step, mut global) = match p.qbo.proposal {
            Proposal::Local { initial_step, global_fraction } => (initial_step, global_fraction),
            Proposal::Uniform => (1.0, 0.2),
        };
        step = q.initial_step.unwrap_or(step);
        global = q.global_fraction.unwrap_or(global);
        p.qbo.proposal = match q.proposal.as_deref() {
            None | Some("local") => Proposal::Local { initial_step: step, global_fraction: global },
            Some("uniform") => Proposal::Uniform,
            Some(other) => {
                return Err(HarnessError::Config(format!("qbo.proposal must be `local` or `uniform`, got `{other}`")))
            }
        };
        if self.sa.t0.is_some() {
            p.sa.initial_temperature = self.sa.t0;
        }
        if let Some(v) = self.sa.alpha {
            p.sa.cooling = v;
        }
        if let Some(v) = self.sa.step {
            p.sa.step = v;
        }
        let a = &self.qa;
        if let Some(v) = a.replicas {
            p.qa.replicas = v;
        }
        if let Some(v) = a.gamma0 {
            p.qa.gamma0 = v;
        }
        if let Some(v) = a.gamma_decay {
            p.qa.gamma_decay = v;
        }
        if let Some(v) = a.temperature {
            p.qa.temperature = v;
        }
        if let Some(v) = a.step {
            p.qa.step = v;
        }
        Ok(p)
    }
}

/// Sets `a.b.c = value` in `table`, creating intermediate tables.
fn apply_override(table: &mut toml::Table, item: &str) -> Result<()> {
    let (key, raw) = item
        .split_once('=')
        .ok_or_else(|| HarnessError::Config(format!("override `{item}` is not of the form key=value")))?;
    let key = key.trim();
    let raw = raw.trim();
    let value = match format!("v = {raw}").parse::<toml::Table>() {
        Ok(mut t) => t.remove("v").expect("parsed key"),
        Err(_) => toml::Value::String(raw.to_string()),
    };
    let mut parts: Vec<&str> = key.split('.').collect();
    let last = parts.pop().filter(|s| !s.is_empty()).ok_or_else(|| HarnessError::Config(format!("empty key in `{item}`")))?;
    let mut node = table;
    for part in parts {
        let entry = node.entry(part.to_string()).or_insert_with(|| toml::Value::Table(toml::Table::new()));
        node = entry
            .as_table_mut()
            .ok_or_else(|| HarnessError::Config(format!("`{part}` in `{key}` is not a table")))?;
    }
    node.insert(last.to_string(), value);
    Ok(())
}
