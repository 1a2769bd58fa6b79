//! Settings file and flag merging. Precedence: flag, then file, then default.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use dlshrink::Error;

/// Every key is optional; a subcommand reads the keys it understands.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub n: Option<usize>,
    pub q: Option<usize>,
    pub signal: Option<f64>,
    pub design: Option<String>,
    pub replicates: Option<u32>,
    pub methods: Option<Vec<String>>,
    pub iters: Option<usize>,
    pub burnin: Option<usize>,
    pub thin: Option<usize>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub a: Option<f64>,
    pub a_grid: Option<Vec<f64>>,
    pub threads: Option<usize>,
    pub input: Option<PathBuf>,
    pub method: Option<String>,
    pub density_grid: Option<PathBuf>,
    pub deltas: Option<Vec<f64>>,
    pub draws: Option<usize>,
}

impl FileConfig {
    pub fn load(path: Option<&Path>) -> Result<Self, Error> {
        let Some(path) = path else {
            return Ok(FileConfig::default());
        };
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
            path: path.to_path_buf(),
            source: e,
        })?;
        toml::from_str(&text).map_err(|e| Error::Parse {
            line: e
                .span()
                .map(|s| text[..s.start].matches('\n').count() as u64 + 1)
                .unwrap_or(0),
            detail: e.message().to_string(),
        })
    }
}

/// Worker count: `SHRINKAGE_THREADS` beats the flag, which beats the file.
pub fn threads(flag: Option<usize>, file: Option<usize>) -> Result<Option<usize>, Error> {
    match std::env::var("SHRINKAGE_THREADS") {
        Ok(v) if !v.trim().is_empty() => v
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|&t| t > 0)
            .map(Some)
            .ok_or_else(|| Error::Validation(format!("SHRINKAGE_THREADS='{v}' is not a positive integer"))),
        _ => Ok(flag.or(file)),
    }
}
