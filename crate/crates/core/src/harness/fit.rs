use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{Method, density_grid, to_json, write_file};
use crate::error::{Error, Result};
use crate::gibbs::ChainConfig;
use crate::inference::{SelectionResult, select_signals, summarize};

/// Largest accepted input, in data rows.
pub const MAX_ROWS: usize = 1_000_000;

#[derive(Clone, Debug, PartialEq)]
pub struct FitOptions {
    pub method: Method,
    pub chain: ChainConfig,
    /// Where to write the prior marginal density at the fitted `a` (DL only).
    pub density_grid: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoordinateSummary {
    pub id: String,
    pub median: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub ess: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChainMeta {
    pub iterations: usize,
    pub burn_in: usize,
    pub thin: usize,
    pub seed: u64,
    pub stream: u64,
    pub retained: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitReport {
    pub method: Method,
    pub n: usize,
    pub chain: ChainMeta,
    /// Fixed `a`, or the posterior mode of `a` in grid mode; absent for BL and HS.
    pub a: Option<f64>,
    pub a_grid: Option<Vec<f64>>,
    pub coordinates: Vec<CoordinateSummary>,
    pub selection: SelectionResult,
    pub selected_ids: Vec<String>,
}

/// Reads a CSV with header `id,z`. Line numbers in errors are 1-based and
/// count the header.
pub fn read_input(path: &Path) -> Result<(Vec<String>, Vec<f64>)> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(file);
    let parse_err = |e: csv::Error| Error::Parse {
        line: e.position().map(|p| p.line()).unwrap_or(1),
        detail: e.to_string(),
    };
    let headers = reader.headers().map_err(parse_err)?.clone();
    if headers.len() != 2 || &headers[0] != "id" || &headers[1] != "z" {
        return Err(Error::Parse {
            line: 1,
            detail: format!("expected header 'id,z', found '{}'", headers.iter().collect::<Vec<_>>().join(",")),
        });
    }
    let mut ids = Vec::new();
    let mut z = Vec::new();
    for record in reader.records() {
        let record = record.map_err(parse_err)?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        if ids.len() == MAX_ROWS {
            return Err(Error::validation(format!("input exceeds {MAX_ROWS} rows")));
        }
        let value: f64 = record[1].parse().map_err(|_| Error::Parse {
            line,
            detail: format!("z value '{}' is not a number", &record[1]),
        })?;
        if !value.is_finite() {
            return Err(Error::validation(format!("z value at line {line} is not finite")));
        }
        ids.push(record[0].to_string());
        z.push(value);
    }
    if z.is_empty() {
        return Err(Error::validation("input has no data rows"));
    }
    Ok((ids, z))
}

/// Fits `opts.method` to the `z` column of `input` and writes the JSON
/// report to `output`.
pub fn fit_file(input: &Path, output: &Path, opts: &FitOptions) -> Result<FitReport> {
    let (ids, z) = read_input(input)?;
    let report = fit_values(ids, &z, opts)?;
    write_file(output, to_json(&report)?.as_bytes())?;
    if let Some(path) = &opts.density_grid {
        let a = report
            .a
            .ok_or_else(|| Error::validation("density grid output needs a DL method"))?;
        write_density_grid(path, a)?;
    }
    Ok(report)
}

pub(crate) fn fit_values(ids: Vec<String>, z: &[f64], opts: &FitOptions) -> Result<FitReport> {
    opts.method.validate()?;
    let chain = opts.method.run(z, &opts.chain)?;
    let summary = summarize(&chain)?;
    let selection = select_signals(&chain, &summary)?;
    let a_grid = match opts.method.dl_spec(z.len()) {
        Some(spec) => match spec?.a_mode {
            crate::prior::AMode::Grid(g) => Some(g),
            crate::prior::AMode::Fixed(_) => None,
        },
        None => None,
    };
    let coordinates = ids
        .iter()
        .enumerate()
        .map(|(j, id)| CoordinateSummary {
            id: id.clone(),
            median: summary.median[j],
            ci_low: summary.ci_low[j],
            ci_high: summary.ci_high[j],
            ess: summary.ess[j],
        })
        .collect();
    let selected_ids = selection.selected.iter().map(|&j| ids[j].clone()).collect();
    let cfg = &opts.chain;
    Ok(FitReport {
        method: opts.method.clone(),
        n: z.len(),
        chain: ChainMeta {
            iterations: cfg.iterations,
            burn_in: cfg.burn_in,
            thin: cfg.thin,
            seed: cfg.seed,
            stream: cfg.stream,
            retained: chain.retained(),
        },
        a: chain.a_mode(),
        a_grid,
        coordinates,
        selection,
        selected_ids,
    })
}

/// `theta,log_pdf,pdf` rows of the DL marginal density at `a`.
pub fn write_density_grid(path: &Path, a: f64) -> Result<()> {
    let rows = density_grid(a)?;
    let mut w = csv::Writer::from_writer(Vec::new());
    let ser = |e: csv::Error| Error::Serialize(e.to_string());
    w.write_record(["theta", "log_pdf", "pdf"]).map_err(ser)?;
    for (t, lp) in rows {
        w.write_record([t.to_string(), lp.to_string(), lp.exp().to_string()])
            .map_err(ser)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Serialize(e.to_string()))?;
    write_file(path, &bytes)
}
