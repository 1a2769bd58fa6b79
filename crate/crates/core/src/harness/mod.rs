//! Replicated simulation studies, file fitting and prior diagnostics.
//!
//! Random streams are keyed by `(base_seed, replicate, slot)`: slot 0
//! generates a replicate's data and slot `1 + m` runs its `m`-th method, so
//! a replicate's results depend only on its own index.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gibbs::{BlHyper, ChainConfig, ChainOutput, run_bl_chain, run_dl_chain, run_hs_chain};
use crate::prior::DlPriorSpec;

mod fit;
mod prior_check;
mod scenario;

pub use fit::{CoordinateSummary, FitOptions, FitReport, ChainMeta, fit_file, read_input, write_density_grid};
pub use prior_check::{PriorCheckOptions, PriorCheckReport, density_grid, prior_check};
pub use scenario::{
    Design, MethodResult, MethodSummary, ReplicateReport, Scenario, ScenarioReport, generate_data, prostate_like,
    run_scenario,
};

/// Stream id of `slot` within `replicate`.
pub fn stream_id(replicate: u32, slot: u32) -> u64 {
    ((replicate as u64) << 32) | slot as u64
}

/// Prior used to fit a data vector.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum Method {
    /// DL with fixed `a = 1/n`.
    DlInvN,
    /// DL with a fixed concentration.
    DlFixed(f64),
    /// DL with a discrete uniform prior on `a`; `None` selects the default grid.
    DlGrid(Option<Vec<f64>>),
    Bl,
    Hs,
}

impl Method {
    /// The DL prior specification this method uses at dimension `n`.
    pub fn dl_spec(&self, n: usize) -> Option<Result<DlPriorSpec>> {
        match self {
            Method::DlInvN => Some(DlPriorSpec::default_for(n)),
            Method::DlFixed(a) => Some(DlPriorSpec::fixed(n, *a)),
            Method::DlGrid(None) => Some(DlPriorSpec::default_grid(n)),
            Method::DlGrid(Some(g)) => Some(DlPriorSpec::grid(n, g.clone())),
            Method::Bl | Method::Hs => None,
        }
    }

    /// Runs the chain, dropping the sampler-specific final state.
    pub fn run(&self, y: &[f64], cfg: &ChainConfig) -> Result<ChainOutput<()>> {
        match self {
            Method::Bl => Ok(run_bl_chain(y, &BlHyper::default(), cfg)?.discard_state()),
            Method::Hs => Ok(run_hs_chain(y, cfg)?.discard_state()),
            dl => {
                let spec = dl.dl_spec(y.len()).unwrap()?;
                Ok(run_dl_chain(y, &spec, cfg)?.discard_state())
            }
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Method::DlFixed(a) if !(*a > 0.0 && *a <= 1.0) => {
                Err(Error::validation(format!("fixed a = {a} must lie in (0, 1]")))
            }
            Method::DlGrid(Some(g)) => DlPriorSpec::grid(1, g.clone()).map(|_| ()),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Method::DlInvN => write!(f, "DL_1/n"),
            Method::DlFixed(a) => write!(f, "DL_{a}"),
            Method::DlGrid(_) => write!(f, "DL_grid"),
            Method::Bl => write!(f, "BL"),
            Method::Hs => write!(f, "HS"),
        }
    }
}

impl FromStr for Method {
    type Err = Error;

    /// Accepts `dl` or `dl_1/n`, `dl_<a>`, `dl_grid`, `bl`, `hs`
    /// (case-insensitive; `-` and `:` may replace `_`).
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().to_ascii_lowercase().replace(['-', ':'], "_");
        let m = match t.as_str() {
            "dl" | "dl_1/n" => Method::DlInvN,
            "dl_grid" => Method::DlGrid(None),
            "bl" => Method::Bl,
            "hs" => Method::Hs,
            other => match other.strip_prefix("dl_").map(str::parse::<f64>) {
                Some(Ok(a)) => Method::DlFixed(a),
                _ => return Err(Error::validation(format!("unknown method '{s}'"))),
            },
        };
        m.validate()?;
        Ok(m)
    }
}

impl From<Method> for String {
    fn from(m: Method) -> String {
        m.to_string()
    }
}

impl TryFrom<String> for Method {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

pub(crate) fn to_json<T: Serialize>(value: &T) -> Result<String> {
    serde_json::to_string_pretty(value).map_err(|e| Error::Serialize(e.to_string()))
}

pub(crate) fn write_file(path: &std::path::Path, contents: &[u8]) -> Result<()> {
    std::fs::write(path, contents).map_err(|e| Error::io(path, e))
}
