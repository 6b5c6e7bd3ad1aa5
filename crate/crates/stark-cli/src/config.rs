//! Run configuration: flag values merged over an optional key=value
//! config file, with flags taking precedence.

use anyhow::{bail, Context};
use serde::Serialize;
use stark_core::ModelParams;
use std::collections::BTreeMap;
use std::path::Path;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

impl std::str::FromStr for OutputFormat {
    type Err = anyhow::Error;
    fn from_str(s: &str) -> anyhow::Result<Self> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => bail!("unknown format '{other}' (expected csv or json)"),
        }
    }
}

/// Fully resolved configuration echoed into every output header.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub command: String,
    pub g: f64,
    pub r: f64,
    pub f: f64,
    pub m: f64,
    pub c: f64,
    pub emin: f64,
    pub emax: f64,
    pub n: usize,
    pub rmin: f64,
    pub rmax: f64,
    pub rstep: f64,
    pub format: OutputFormat,
    pub threads: usize,
    pub d_avoid: f64,
}

impl RunConfig {
    pub fn params(&self) -> anyhow::Result<ModelParams> {
        ModelParams::new(self.m, self.c, self.g, self.r, self.f)
            .map_err(|e| anyhow::anyhow!("{e}"))
    }

    pub fn validate_grid(&self) -> anyhow::Result<()> {
        if self.n < 2 {
            bail!("grid count must be >= 2, got {}", self.n);
        }
        if !(self.emin < self.emax) {
            bail!("emin must be < emax ({} vs {})", self.emin, self.emax);
        }
        Ok(())
    }

    pub fn validate_r_range(&self) -> anyhow::Result<()> {
        if !(self.rstep > 0.0) {
            bail!("rstep must be > 0, got {}", self.rstep);
        }
        if !(self.rmin > 0.0 && self.rmin <= self.rmax) {
            bail!("need 0 < rmin <= rmax (got {} .. {})", self.rmin, self.rmax);
        }
        Ok(())
    }

    /// Energy grid with a half-step offset: count points strictly inside
    /// (emin, emax), none landing on the gap edges for generic ranges.
    pub fn energy_grid(&self) -> Vec<f64> {
        let step = (self.emax - self.emin) / self.n as f64;
        (0..self.n)
            .map(|k| self.emin + (k as f64 + 0.5) * step)
            .collect()
    }

    /// One `key=value` line per setting, for the CSV header.
    pub fn echo_lines(&self) -> Vec<String> {
        vec![
            format!("command={}", self.command),
            format!("g={}", self.g),
            format!("R={}", self.r),
            format!("F={}", self.f),
            format!("m={}", self.m),
            format!("c={}", self.c),
            format!("emin={}", self.emin),
            format!("emax={}", self.emax),
            format!("n={}", self.n),
            format!("rmin={}", self.rmin),
            format!("rmax={}", self.rmax),
            format!("rstep={}", self.rstep),
            format!(
                "format={}",
                match self.format {
                    OutputFormat::Csv => "csv",
                    OutputFormat::Json => "json",
                }
            ),
            format!("threads={}", self.threads),
            format!("d-avoid={}", self.d_avoid),
        ]
    }
}

/// Parse a plain-text `key=value` config file (# comments, blank lines).
pub fn read_config_file(path: &Path) -> anyhow::Result<BTreeMap<String, String>> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read config file {}", path.display()))?;
    let mut map = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            bail!(
                "{}:{}: expected key=value, got '{raw}'",
                path.display(),
                lineno + 1
            );
        };
        map.insert(key.trim().to_string(), value.trim().to_string());
    }
    Ok(map)
}
