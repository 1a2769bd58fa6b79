//! Bayesian lasso comparator.
//!
//! `θ_j ~ N(0, ψ_j)`, `ψ_j ~ Exp(λ²/2)`, `λ² ~ gamma(r, δ)`, so that
//! marginally `θ_j | λ` is Laplace with rate `λ`. Sweep order: `ψ`, `λ²`,
//! then `θ`.

use serde::{Deserialize, Serialize};

use crate::distributions::{ig_variate, log_gamma_variate};
use crate::error::{Error, Result};
use crate::rng::RngStream;

use super::{ChainConfig, ChainOutput, Draws, LatentTrace, THETA_FLOOR, check_data, shrink_normal};

/// Treatment of the global penalty `λ²`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BlHyper {
    /// `λ² ~ gamma(shape, rate)`.
    Gamma { shape: f64, rate: f64 },
    /// `λ²` held at the given value.
    Fixed(f64),
}

impl Default for BlHyper {
    fn default() -> Self {
        BlHyper::Gamma { shape: 1.0, rate: 1.0 }
    }
}

impl BlHyper {
    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            BlHyper::Gamma { shape, rate } => shape > 0.0 && rate > 0.0 && shape.is_finite() && rate.is_finite(),
            BlHyper::Fixed(l2) => l2 > 0.0 && l2.is_finite(),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::validation(format!("invalid lasso hyperparameters {self:?}")))
        }
    }

    fn initial(&self) -> f64 {
        match *self {
            BlHyper::Gamma { shape, rate } => shape / rate,
            BlHyper::Fixed(l2) => l2,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BlState {
    pub theta: Vec<f64>,
    pub psi: Vec<f64>,
    pub lambda2: f64,
}

pub fn bl_sweep(rng: &mut RngStream, state: &mut BlState, y: &[f64], hyper: &BlHyper) {
    let lam = state.lambda2.sqrt();
    for (p, t) in state.psi.iter_mut().zip(&state.theta) {
        let mu = lam / t.abs().max(THETA_FLOOR);
        let zeta = ig_variate(rng, mu, state.lambda2).max(f64::MIN_POSITIVE);
        *p = (1.0 / zeta).min(f64::MAX);
    }
    if let BlHyper::Gamma { shape, rate } = *hyper {
        let n = state.theta.len() as f64;
        let sum_psi: f64 = state.psi.iter().sum();
        let lg = log_gamma_variate(rng, n + shape) - (rate + 0.5 * sum_psi).ln();
        state.lambda2 = lg.exp().max(f64::MIN_POSITIVE);
    }
    for ((t, &p), &yj) in state.theta.iter_mut().zip(&state.psi).zip(y) {
        *t = shrink_normal(rng, yj, p);
    }
}

pub fn run_bl_chain(y: &[f64], hyper: &BlHyper, cfg: &ChainConfig) -> Result<ChainOutput<BlState>> {
    check_data(y)?;
    hyper.validate()?;
    cfg.validate()?;
    let n = y.len();
    let keep = cfg.retained();
    let mut rng = RngStream::new(cfg.seed, cfg.stream);
    let mut state = BlState {
        theta: y.to_vec(),
        psi: vec![1.0; n],
        lambda2: hyper.initial(),
    };
    let mut theta = Draws::with_capacity(n, keep);
    let mut latents = cfg.store_latents.then(|| LatentTrace {
        global: Vec::with_capacity(keep),
        local: Draws::with_capacity(n, keep),
        phi: None,
    });
    for it in 0..cfg.iterations {
        bl_sweep(&mut rng, &mut state, y, hyper);
        if !(state.lambda2.is_finite() && state.theta.iter().sum::<f64>().is_finite()) {
            return Err(Error::Degenerate {
                iteration: it,
                detail: "non-finite lasso state".into(),
            });
        }
        if cfg.keeps(it) {
            theta.push(&state.theta);
            if let Some(l) = latents.as_mut() {
                l.global.push(state.lambda2);
                l.local.push(&state.psi);
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
