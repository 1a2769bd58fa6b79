use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{to_json, write_density_grid, write_file};
use crate::error::{Error, Result};
use crate::prior::{MIN_TAIL_DRAWS, TailMass, marginal_log_pdf, tail_mass_estimate};
use crate::rng::RngStream;

/// Points per half of the density grid.
const HALF_GRID: usize = 200;
/// The grid leaves out `[-GRID_GAP, GRID_GAP]`, where the density has its pole.
pub const GRID_GAP: f64 = 1e-6;

/// `(θ, ln Π(θ))` on a log-spaced grid symmetric about 0, from `±20` in to
/// `±10 GRID_GAP`.
pub fn density_grid(a: f64) -> Result<Vec<(f64, f64)>> {
    let (lo, hi) = ((10.0 * GRID_GAP).ln(), 20f64.ln());
    let pos: Vec<f64> = (0..HALF_GRID)
        .map(|i| (lo + (hi - lo) * i as f64 / (HALF_GRID - 1) as f64).exp())
        .collect();
    let mut rows = Vec::with_capacity(2 * HALF_GRID);
    for &t in pos.iter().rev() {
        rows.push((-t, marginal_log_pdf(-t, a)?.ln()));
    }
    for &t in &pos {
        rows.push((t, marginal_log_pdf(t, a)?.ln()));
    }
    Ok(rows)
}

#[derive(Clone, Debug, PartialEq)]
pub struct PriorCheckOptions {
    pub n: usize,
    /// Concentration; `1/n` when absent.
    pub a: Option<f64>,
    pub deltas: Vec<f64>,
    pub draws: usize,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PriorCheckReport {
    pub n: usize,
    pub a: f64,
    pub seed: u64,
    pub tails: Vec<TailMass>,
}

/// Writes `density.csv` and `tail.json` into `out_dir`.
pub fn prior_check(opts: &PriorCheckOptions, out_dir: &Path) -> Result<PriorCheckReport> {
    if opts.n == 0 {
        return Err(Error::validation("n must be positive"));
    }
    if opts.draws < MIN_TAIL_DRAWS {
        return Err(Error::validation(format!("draws must be at least {MIN_TAIL_DRAWS}")));
    }
    let a = opts.a.unwrap_or(1.0 / opts.n as f64);
    let mut deltas = opts.deltas.clone();
    deltas.sort_by(|x, y| x.total_cmp(y));
    // common random numbers across δ keep the estimates monotone
    let tails = deltas
        .iter()
        .map(|&d| tail_mass_estimate(&mut RngStream::new(opts.seed, 0), a, d, opts.draws))
        .collect::<Result<Vec<_>>>()?;
    std::fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    write_density_grid(&out_dir.join("density.csv"), a)?;
    let report = PriorCheckReport {
        n: opts.n,
        a,
        seed: opts.seed,
        tails,
    };
    write_file(&out_dir.join("tail.json"), to_json(&report)?.as_bytes())?;
    Ok(report)
}
