//! Posterior summaries, effective sample size, loss, and k-means signal
//! selection.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gibbs::{ChainOutput, Draws};

/// Fewest retained draws accepted by [`summarize`] and
/// [`effective_sample_size`].
pub const MIN_DRAWS: usize = 100;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PosteriorSummary {
    pub median: Vec<f64>,
    pub ci_low: Vec<f64>,
    pub ci_high: Vec<f64>,
    pub ess: Vec<f64>,
}

impl PosteriorSummary {
    pub fn n(&self) -> usize {
        self.median.len()
    }

    pub fn min_ess(&self) -> f64 {
        self.ess.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

/// Quantile of sorted data by linear interpolation between order
/// statistics at position `(N - 1) p`.
pub fn quantile_sorted(sorted: &[f64], p: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * p;
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

pub fn summarize<S>(chain: &ChainOutput<S>) -> Result<PosteriorSummary> {
    summarize_draws(&chain.theta)
}

pub fn summarize_draws(draws: &Draws) -> Result<PosteriorSummary> {
    if draws.len() < MIN_DRAWS {
        return Err(Error::validation(format!(
            "summaries need at least {MIN_DRAWS} retained draws, got {}",
            draws.len()
        )));
    }
    let n = draws.dim();
    let mut s = PosteriorSummary {
        median: Vec::with_capacity(n),
        ci_low: Vec::with_capacity(n),
        ci_high: Vec::with_capacity(n),
        ess: Vec::with_capacity(n),
    };
    for j in 0..n {
        let col = draws.column(j);
        s.ess.push(effective_sample_size(&col)?);
        let mut sorted = col;
        sorted.sort_by(|a, b| a.total_cmp(b));
        s.median.push(quantile_sorted(&sorted, 0.5));
        s.ci_low.push(quantile_sorted(&sorted, 0.025));
        s.ci_high.push(quantile_sorted(&sorted, 0.975));
    }
    Ok(s)
}

/// `N / (1 + 2 Σ ρ_k)`, the autocorrelation sum truncated by Geyer's
/// initial positive sequence rule, clamped to `(0, N]`. A constant series
/// returns `N`.
pub fn effective_sample_size(x: &[f64]) -> Result<f64> {
    let n = x.len();
    if n < MIN_DRAWS {
        return Err(Error::validation(format!(
            "effective sample size needs at least {MIN_DRAWS} draws, got {n}"
        )));
    }
    let nf = n as f64;
    let mean = x.iter().sum::<f64>() / nf;
    let d: Vec<f64> = x.iter().map(|v| v - mean).collect();
    let acov = |k: usize| d[..n - k].iter().zip(&d[k..]).map(|(a, b)| a * b).sum::<f64>() / nf;
    let g0 = acov(0);
    if !(g0 > 0.0) {
        return Ok(nf);
    }
    // Σ_m Γ_m over the initial run of positive pair sums Γ_m = γ_{2m} + γ_{2m+1}
    let mut pairs = 0.0;
    let mut m = 0;
    while 2 * m + 1 < n {
        let gamma = acov(2 * m) + acov(2 * m + 1);
        if gamma <= 0.0 {
            break;
        }
        pairs += gamma;
        m += 1;
    }
    let denom = 2.0 * pairs - g0;
    if !(denom > 0.0) {
        return Ok(nf);
    }
    Ok((nf * g0 / denom).min(nf))
}

/// `Σ_j (estimate_j - truth_j)²`.
pub fn squared_error(estimate: &[f64], truth: &[f64]) -> Result<f64> {
    if estimate.len() != truth.len() {
        return Err(Error::validation(format!(
            "length mismatch: {} vs {}",
            estimate.len(),
            truth.len()
        )));
    }
    Ok(estimate.iter().zip(truth).map(|(e, t)| (e - t).powi(2)).sum())
}

/// Two-cluster Lloyd partition of one-dimensional data.
#[derive(Clone, Debug, PartialEq)]
pub struct KMeans2 {
    /// Size of the smaller cluster.
    pub smaller: usize,
    /// `true` for points in the cluster with the larger center.
    pub upper: Vec<bool>,
    pub centers: [f64; 2],
}

/// Lloyd's algorithm with centers started at the minimum and maximum.
///
/// A point equidistant from both centers joins the lower one. The
/// iteration runs on sorted data, where every partition is a split point,
/// so the result does not depend on input order. Identical inputs have no
/// two-cluster partition and give [`Error::Degenerate`].
pub fn kmeans2_1d(values: &[f64]) -> Result<KMeans2> {
    if values.len() < 2 {
        return Err(Error::validation("k-means needs at least two values"));
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::validation("k-means values must be finite"));
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.total_cmp(b));
    let n = sorted.len();
    if sorted[0] == sorted[n - 1] {
        return Err(Error::Degenerate {
            iteration: 0,
            detail: "all values identical".into(),
        });
    }
    let mut prefix = Vec::with_capacity(n + 1);
    prefix.push(0.0);
    for v in &sorted {
        prefix.push(prefix.last().unwrap() + v);
    }
    let mean = |lo: usize, hi: usize| (prefix[hi] - prefix[lo]) / (hi - lo) as f64;
    let lower = |c: [f64; 2]| sorted.partition_point(|&v| (v - c[0]).abs() <= (c[1] - v).abs());

    let mut centers = [sorted[0], sorted[n - 1]];
    let mut split = lower(centers);
    loop {
        centers = [mean(0, split), mean(split, n)];
        let next = lower(centers);
        if next == split {
            break;
        }
        split = next;
    }
    let upper = values
        .iter()
        .map(|&v| (v - centers[0]).abs() > (centers[1] - v).abs())
        .collect();
    Ok(KMeans2 {
        smaller: split.min(n - split),
        upper,
        centers,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SelectionResult {
    pub m_hat: usize,
    /// 0-based indices of the `m_hat` largest `|median|`, ascending.
    pub selected: Vec<usize>,
}

/// Per retained draw, the smaller k-means cluster size of `|θ|` (0 when
/// the draw is degenerate); `M` is the mode of these counts, smaller on
/// ties.
pub fn selection_counts(draws: &Draws) -> Vec<usize> {
    let mut abs = vec![0.0; draws.dim()];
    draws
        .rows()
        .map(|row| {
            for (a, t) in abs.iter_mut().zip(row) {
                *a = t.abs();
            }
            kmeans2_1d(&abs).map(|k| k.smaller).unwrap_or(0)
        })
        .collect()
}

pub fn select_signals<S>(chain: &ChainOutput<S>, summary: &PosteriorSummary) -> Result<SelectionResult> {
    if summary.n() != chain.n() {
        return Err(Error::validation("summary and chain dimensions differ"));
    }
    if chain.theta.is_empty() {
        return Err(Error::validation("chain has no retained draws"));
    }
    let counts = selection_counts(&chain.theta);
    let mut hist = vec![0usize; chain.n() + 1];
    for &c in &counts {
        hist[c] += 1;
    }
    // first maximum is the smallest count
    let m_hat = hist
        .iter()
        .enumerate()
        .fold((0, 0), |(bm, bc), (m, &c)| if c > bc { (m, c) } else { (bm, bc) })
        .0;
    let mut order: Vec<usize> = (0..summary.n()).collect();
    order.sort_by(|&i, &j| summary.median[j].abs().total_cmp(&summary.median[i].abs()).then(i.cmp(&j)));
    let mut selected = order[..m_hat].to_vec();
    selected.sort_unstable();
    Ok(SelectionResult { m_hat, selected })
}
