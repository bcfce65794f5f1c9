//! Experiment configuration: a flat `key = value` file plus overrides.

use std::fs;
use std::path::{Path, PathBuf};

use expnn::OperatorFamily;

use crate::error::{CliError, Result};

pub const DEFAULT_SCALES: [u32; 5] = [10, 30, 100, 300, 1000];
pub const DEFAULT_GRID_POINTS: usize = 501;
/// Per-axis grid cap for multivariate sweeps.
pub const MAX_AXIS_POINTS: usize = 41;

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub kernel_name: String,
    pub operator_family: String,
    pub function_name: String,
    /// `None` uses the function's registered domain.
    pub interval: Option<(f64, f64)>,
    pub scales: Vec<u32>,
    pub nu: f64,
    pub grid_points: usize,
    /// `None` uses the kernel's default truncation.
    pub truncation_k: Option<usize>,
    pub output_dir: PathBuf,
    pub seed: u64,
    /// Extra seeded log-uniform evaluation points.
    pub random_points: usize,
    /// Axes for the multivariate operator.
    pub dimension: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            kernel_name: "tanh".into(),
            operator_family: "E_n".into(),
            function_name: "sinlog".into(),
            interval: None,
            scales: DEFAULT_SCALES.to_vec(),
            nu: 0.5,
            grid_points: DEFAULT_GRID_POINTS,
            truncation_k: None,
            output_dir: PathBuf::from("out"),
            seed: 0,
            random_points: 0,
            dimension: 2,
        }
    }
}

fn parse<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .trim()
        .parse()
        .map_err(|_| CliError::Config(format!("bad value for `{key}`: `{value}`")))
}

pub fn parse_interval(value: &str) -> Result<(f64, f64)> {
    let parts: Vec<&str> = value.split(',').map(str::trim).collect();
    if parts.len() != 2 {
        return Err(CliError::Config(format!(
            "interval must be `a,b`, got `{value}`"
        )));
    }
    Ok((parse("interval", parts[0])?, parse("interval", parts[1])?))
}

pub fn parse_scales(value: &str) -> Result<Vec<u32>> {
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| parse("scales", s))
        .collect()
}

impl ExperimentConfig {
    /// Applies one `key = value` setting.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let value = value.trim();
        match key.trim() {
            "kernel" | "kernel_name" => self.kernel_name = value.to_string(),
            "operator" | "operator_family" => self.operator_family = value.to_string(),
            "function" | "function_name" => self.function_name = value.to_string(),
            "interval" => self.interval = Some(parse_interval(value)?),
            "scales" => self.scales = parse_scales(value)?,
            "nu" => self.nu = parse(key, value)?,
            "grid_points" => self.grid_points = parse(key, value)?,
            "truncation_K" | "truncation_k" => self.truncation_k = Some(parse(key, value)?),
            "output_dir" | "out" => self.output_dir = PathBuf::from(value),
            "seed" => self.seed = parse(key, value)?,
            "random_points" => self.random_points = parse(key, value)?,
            "dimension" => self.dimension = parse(key, value)?,
            other => return Err(CliError::Config(format!("unknown key `{other}`"))),
        }
        Ok(())
    }

    /// Parses `key = value` lines; blank lines and `#` comments are skipped.
    pub fn from_kv_str(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::Config(format!("line {}: expected `key = value`", i + 1))
            })?;
            cfg.set(key, value)?;
        }
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_kv_str(&text)
    }

    pub fn family(&self) -> Result<OperatorFamily> {
        Ok(self.operator_family.parse::<OperatorFamily>()?)
    }

    pub fn validate(&self) -> Result<()> {
        if self.scales.is_empty() {
            return Err(CliError::Config("no scales given".into()));
        }
        if self.scales[0] == 0 || self.scales.windows(2).any(|w| w[0] >= w[1]) {
            return Err(CliError::Config(
                "scales must be positive and strictly increasing".into(),
            ));
        }
        if !(self.nu > 0.0 && self.nu < 1.0) {
            return Err(CliError::Config(format!(
                "nu must lie in (0, 1), got {}",
                self.nu
            )));
        }
        if let Some((a, b)) = self.interval {
            if !(a > 0.0 && a < b && b.is_finite()) {
                return Err(CliError::Config(format!(
                    "interval needs 0 < a < b, got [{a}, {b}]"
                )));
            }
        }
        if self.grid_points < 2 {
            return Err(CliError::Config("grid_points must be at least 2".into()));
        }
        if self.truncation_k == Some(0) {
            return Err(CliError::Config("truncation_K must be positive".into()));
        }
        let family = self.family()?;
        if family == OperatorFamily::Multivariate && self.dimension == 0 {
            return Err(CliError::Config("dimension must be positive".into()));
        }
        Ok(())
    }
}
