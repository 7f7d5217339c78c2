//! Flat `key = value` configuration files.
//!
//! The grammar is the top-level table of TOML: one `key = value` per line,
//! `#` comments, no sections. Keys mirror the long flag names with `-`
//! written as `_`:
//!
//! ```toml
//! gen = "clifford"
//! res = 128
//! tol = 1e-8
//! seed = 7
//! offsets = [0.1, 0.2, 0.3]
//! dims = [2, 3, 4]
//! ```
//!
//! Command-line flags take precedence over the file.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::CliError;

#[derive(Debug, Default, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub dim: Option<usize>,
    pub lambda: Option<f64>,
    pub epsilon: Option<f64>,
    pub beta: Option<f64>,

    pub gen: Option<String>,
    pub mesh: Option<PathBuf>,
    pub res: Option<usize>,
    pub res_u: Option<usize>,
    pub res_v: Option<usize>,
    pub r: Option<f64>,
    pub subdiv: Option<usize>,

    pub tol: Option<f64>,
    pub max_iter: Option<usize>,
    pub seed: Option<u64>,
    pub verdict_tol: Option<f64>,
    pub offsets: Option<Vec<f64>>,
    pub t: Option<Vec<f64>>,
    pub no_embedding_check: Option<bool>,

    pub dims: Option<Vec<usize>>,
    pub only: Option<String>,

    pub out: Option<PathBuf>,
    pub csv: Option<PathBuf>,
}

impl Config {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| CliError::Usage(format!("config {}: {e}", path.display())))
    }

    pub fn parse(text: &str) -> Result<Self, toml::de::Error> {
        toml::from_str(text)
    }
}
