//! Blocked Gibbs samplers for `y_j = θ_j + ε_j`, `ε_j ~ N(0, 1)`.
//!
//! [`dl`] is the Dirichlet-Laplace sampler; [`bl`] and [`hs`] are the
//! Bayesian lasso and horseshoe comparators. All three share the chain
//! configuration and output containers defined here.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub mod bl;
pub mod dl;
pub mod hs;

pub use bl::{BlHyper, BlState, bl_sweep, run_bl_chain};
pub use dl::{
    DlState, a_log_weights, a_log_weights_collapsed, dl_step_a, dl_sweep, dl_step_phi, dl_step_psi, dl_step_tau, dl_step_theta,
    run_dl_chain,
};
pub use hs::{HsState, hs_sweep, run_hs_chain};

/// Smallest `|θ_j|` used inside the latent-scale conditionals. Prior mass
/// below ε is about ε^a, so a floor like 1e-10 is not negligible at small a.
pub const THETA_FLOOR: f64 = 1e-300;
/// Default lower clamp on the `χ` argument of conditional giG draws.
pub const DEFAULT_CHI_FLOOR: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ChainConfig {
    pub iterations: usize,
    pub burn_in: usize,
    pub thin: usize,
    pub seed: u64,
    /// Sub-stream of `seed` the chain draws from.
    pub stream: u64,
    pub store_latents: bool,
    pub chi_floor: f64,
}

impl Default for ChainConfig {
    fn default() -> Self {
        ChainConfig {
            iterations: 10_000,
            burn_in: 5_000,
            thin: 1,
            seed: 0,
            stream: 0,
            store_latents: false,
            chi_floor: DEFAULT_CHI_FLOOR,
        }
    }
}

impl ChainConfig {
    pub fn validate(&self) -> Result<()> {
        if self.iterations == 0 {
            return Err(Error::validation("iterations must be positive"));
        }
        if self.burn_in >= self.iterations {
            return Err(Error::validation(format!(
                "burn-in {} must be below iterations {}",
                self.burn_in, self.iterations
            )));
        }
        if self.thin == 0 {
            return Err(Error::validation("thin must be positive"));
        }
        if !(self.chi_floor > 0.0) {
            return Err(Error::validation("chi floor must be positive"));
        }
        Ok(())
    }

    /// `⌈(iterations - burn_in) / thin⌉`.
    pub fn retained(&self) -> usize {
        (self.iterations - self.burn_in).div_ceil(self.thin)
    }

    /// Whether the 0-based iteration `i` is kept.
    pub fn keeps(&self, i: usize) -> bool {
        i >= self.burn_in && (i - self.burn_in) % self.thin == 0
    }
}

/// Retained draws of an `n`-vector, stored draw-major.
#[derive(Clone, Debug, PartialEq)]
pub struct Draws {
    n: usize,
    data: Vec<f64>,
}

impl Draws {
    pub fn new(n: usize) -> Self {
        Draws { n, data: Vec::new() }
    }

    pub fn with_capacity(n: usize, draws: usize) -> Self {
        Draws {
            n,
            data: Vec::with_capacity(n * draws),
        }
    }

    /// Builds from a list of equal-length rows.
    pub fn from_rows(n: usize, rows: &[Vec<f64>]) -> Result<Self> {
        let mut d = Draws::with_capacity(n, rows.len());
        for r in rows {
            if r.len() != n {
                return Err(Error::validation("draw rows must all have length n"));
            }
            d.push(r);
        }
        Ok(d)
    }

    pub fn push(&mut self, row: &[f64]) {
        debug_assert_eq!(row.len(), self.n);
        self.data.extend_from_slice(row);
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        if self.n == 0 { 0 } else { self.data.len() / self.n }
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn rows(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.data.chunks_exact(self.n.max(1))
    }

    /// All retained values of coordinate `j`.
    pub fn column(&self, j: usize) -> Vec<f64> {
        self.rows().map(|r| r[j]).collect()
    }
}

/// Latent traces kept when `store_latents` is set.
#[derive(Clone, Debug, PartialEq)]
pub struct LatentTrace {
    /// τ (DL), λ² (BL) or τ² (HS) per retained draw.
    pub global: Vec<f64>,
    /// ψ (DL, BL) or λ² (HS) per retained draw.
    pub local: Draws,
    /// φ per retained draw (DL only).
    pub phi: Option<Draws>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ChainOutput<S> {
    pub theta: Draws,
    /// Retained values of the Dirichlet concentration (DL chains only).
    pub a_draws: Vec<f64>,
    pub final_state: S,
    pub latents: Option<LatentTrace>,
}

impl<S> ChainOutput<S> {
    pub fn n(&self) -> usize {
        self.theta.dim()
    }

    pub fn retained(&self) -> usize {
        self.theta.len()
    }

    pub fn discard_state(self) -> ChainOutput<()> {
        ChainOutput {
            theta: self.theta,
            a_draws: self.a_draws,
            final_state: (),
            latents: self.latents,
        }
    }

    /// Most frequent retained `a` (smallest on ties); `None` outside DL.
    pub fn a_mode(&self) -> Option<f64> {
        if self.a_draws.is_empty() {
            return None;
        }
        let mut sorted = self.a_draws.clone();
        sorted.sort_by(|x, y| x.total_cmp(y));
        let (mut best, mut best_count) = (sorted[0], 0usize);
        let mut i = 0;
        while i < sorted.len() {
            let j = sorted[i..].iter().take_while(|&&v| v == sorted[i]).count();
            if j > best_count {
                best = sorted[i];
                best_count = j;
            }
            i += j;
        }
        Some(best)
    }
}

pub(crate) fn check_data(y: &[f64]) -> Result<()> {
    if y.is_empty() {
        return Err(Error::validation("data vector is empty"));
    }
    if let Some(j) = y.iter().position(|v| !v.is_finite()) {
        return Err(Error::validation(format!("data value at index {j} is not finite")));
    }
    Ok(())
}

/// Draw from `N(s y / (1 + s), s / (1 + s))`, the conditional of θ_j under
/// a `N(0, s)` prior with unit noise variance.
#[inline]
pub(crate) fn shrink_normal(rng: &mut crate::RngStream, y: f64, prior_var: f64) -> f64 {
    let v = 1.0 / (1.0 + 1.0 / prior_var);
    v * y + v.sqrt() * rng.std_normal()
}
