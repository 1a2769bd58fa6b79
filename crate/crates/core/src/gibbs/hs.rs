//! Horseshoe comparator.
//!
//! `θ_j ~ N(0, λ_j² τ²)` with half-Cauchy `λ_j` and `τ`, written through
//! inverse-gamma auxiliaries: `λ_j² | ν_j ~ IG(1/2, 1/ν_j)`,
//! `ν_j ~ IG(1/2, 1)`, and likewise `τ² | ξ`, `ξ`. Every full conditional
//! is then inverse gamma or normal.

use crate::distributions::log_gamma_variate;
use crate::error::{Error, Result};
use crate::rng::RngStream;

use super::{ChainConfig, ChainOutput, Draws, LatentTrace, check_data, shrink_normal};

#[derive(Clone, Debug, PartialEq)]
pub struct HsState {
    pub theta: Vec<f64>,
    pub lam2: Vec<f64>,
    pub tau2: f64,
    pub nu: Vec<f64>,
    pub xi: f64,
}

/// `IG(shape, scale)` variate: `scale / G`, `G ~ gamma(shape, 1)`.
#[inline]
fn inv_gamma(rng: &mut RngStream, shape: f64, scale: f64) -> f64 {
    let v = if shape == 1.0 {
        scale / rng.std_exponential()
    } else {
        (scale.ln() - log_gamma_variate(rng, shape)).exp()
    };
    v.clamp(f64::MIN_POSITIVE, f64::MAX)
}

pub fn hs_sweep(rng: &mut RngStream, state: &mut HsState, y: &[f64]) {
    let n = state.theta.len();
    let inv_tau2 = 1.0 / state.tau2;
    for j in 0..n {
        let t2 = state.theta[j].powi(2);
        state.lam2[j] = inv_gamma(rng, 1.0, 1.0 / state.nu[j] + 0.5 * t2 * inv_tau2);
        state.nu[j] = inv_gamma(rng, 1.0, 1.0 + 1.0 / state.lam2[j]);
    }
    let ss: f64 = state
        .theta
        .iter()
        .zip(&state.lam2)
        .map(|(t, l)| t.powi(2) / l)
        .sum();
    state.tau2 = inv_gamma(rng, 0.5 * (n as f64 + 1.0), 1.0 / state.xi + 0.5 * ss);
    state.xi = inv_gamma(rng, 1.0, 1.0 + 1.0 / state.tau2);
    for j in 0..n {
        state.theta[j] = shrink_normal(rng, y[j], state.lam2[j] * state.tau2);
    }
}

pub fn run_hs_chain(y: &[f64], cfg: &ChainConfig) -> Result<ChainOutput<HsState>> {
    check_data(y)?;
    cfg.validate()?;
    let n = y.len();
    let keep = cfg.retained();
    let mut rng = RngStream::new(cfg.seed, cfg.stream);
    let mut state = HsState {
        theta: y.to_vec(),
        lam2: vec![1.0; n],
        tau2: 1.0,
        nu: vec![1.0; n],
        xi: 1.0,
    };
    let mut theta = Draws::with_capacity(n, keep);
    let mut latents = cfg.store_latents.then(|| LatentTrace {
        global: Vec::with_capacity(keep),
        local: Draws::with_capacity(n, keep),
        phi: None,
    });
    for it in 0..cfg.iterations {
        hs_sweep(&mut rng, &mut state, y);
        if !state.theta.iter().sum::<f64>().is_finite() {
            return Err(Error::Degenerate {
                iteration: it,
                detail: "non-finite horseshoe state".into(),
            });
        }
        if cfg.keeps(it) {
            theta.push(&state.theta);
            if let Some(l) = latents.as_mut() {
                l.global.push(state.tau2);
                l.local.push(&state.lam2);
            }
        }
    }
    Ok(ChainOutput {
        theta,
        a_draws: Vec::new(),
        final_state: state,
        latents,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use dlshrink_testkit as tk;

    #[test]
    fn inverse_gamma_mean() {
        let mut rng = RngStream::new(21, 0);
        // IG(3, 2): mean 1, variance 1
        let xs: Vec<f64> = (0..100_000).map(|_| inv_gamma(&mut rng, 3.0, 2.0)).collect();
        let (m, se) = tk::mean_se(&xs);
        assert!((m - 1.0).abs() < 4.0 * se);
        let xs: Vec<f64> = (0..100_000).map(|_| 1.0 / inv_gamma(&mut rng, 1.0, 2.0)).collect();
        let (m, se) = tk::mean_se(&xs);
        assert!((m - 0.5).abs() < 4.0 * se);
    }

    #[test]
    fn half_cauchy_augmentation() {
        // λ² | ν ~ IG(1/2, 1/ν), ν ~ IG(1/2, 1) gives λ ~ C+(0, 1): P(λ < 1) = 1/2
        let mut rng = RngStream::new(22, 0);
        let m = 100_000;
        let below = (0..m)
            .filter(|_| {
                let nu = inv_gamma(&mut rng, 0.5, 1.0);
                inv_gamma(&mut rng, 0.5, 1.0 / nu) < 1.0
            })
            .count() as f64
            / m as f64;
        assert!((below - 0.5).abs() < 4.0 * (0.25 / m as f64).sqrt(), "{below}");
    }
}
