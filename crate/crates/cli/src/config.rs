//! Batch configuration file. Every key is optional and command-line flags
//! take precedence over it.
//!
//! ```toml
//! input = "data/dolphins.txt"   # relative to this file
//! methods = ["m", "gravity", "ppr"]
//! mu = 0.44
//! beta_fractions = [0.2, 0.4, 0.6, 0.8, 1.0, 1.2, 1.4, 1.6]
//! runs = 100
//! seed = 7
//! ```

use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Deserialize;

use crate::output::Format;

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub input: Option<PathBuf>,
    pub lcc: Option<bool>,
    pub out_dir: Option<PathBuf>,
    pub format: Option<Format>,
    pub precision: Option<usize>,
    pub decimals: Option<usize>,
    pub threads: Option<usize>,

    pub methods: Option<Vec<String>>,
    pub mu: Option<f64>,
    pub mu_sweep: Option<Vec<f64>>,
    pub radius: Option<usize>,
    pub ell: Option<usize>,
    pub teleport: Option<f64>,
    pub preference: Option<String>,
    pub top: Option<usize>,

    pub threshold: Option<String>,
    pub beta_fractions: Option<Vec<f64>>,
    pub runs: Option<usize>,
    pub seed: Option<u64>,

    pub steps: Option<usize>,
    pub order: Option<PathBuf>,
    pub efficiency_norm: Option<String>,

    pub against: Option<Vec<String>>,
    pub p: Option<Vec<f64>>,
    pub depth: Option<usize>,
}

impl Config {
    /// Reads a config file. Relative paths inside it are resolved against
    /// the file's directory.
    pub fn load(path: &Path) -> Result<Config> {
        let text =
            std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        let mut cfg: Config =
            toml::from_str(&text).with_context(|| format!("parsing config {}", path.display()))?;
        let base = path.parent().unwrap_or(Path::new("."));
        for p in [&mut cfg.input, &mut cfg.out_dir, &mut cfg.order].into_iter().flatten() {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
        Ok(cfg)
    }
}
