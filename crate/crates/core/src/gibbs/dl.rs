//! Gibbs sampler for the Dirichlet-Laplace prior.
//!
//! Works with the normal scale-mixture form
//! `θ_j ~ N(0, ψ_j φ_j² τ²)`, `ψ_j ~ Exp(1/2)`, `φ ~ Dir(a)`,
//! `τ ~ gamma(na, 1/2)`. Each sweep draws the latent block
//! `(φ, τ, ψ) | θ` by composition, `φ | θ` with `ψ, τ` integrated out, then
//! `τ | φ, θ` with `ψ` integrated out, then `ψ | φ, τ, θ`; then
//! `θ | ψ, φ, τ, y`. In grid mode `a | φ, θ`, also with `ψ, τ` integrated
//! out, is drawn between `φ` and `τ`. Both latent blocks are exact
//! conditionals of the joint, and collapsing `τ` matters: given `τ` alone,
//! `a` is pinned to within about `1/√(na)` and the chain crawls.

use crate::distributions::{gig_variate, ig_variate};
use crate::error::{Error, Result};
use crate::prior::{AMode, DlPriorSpec};
use crate::rng::RngStream;
use crate::special::{ln_bessel_k, ln_gamma, lse};

use super::{ChainConfig, ChainOutput, Draws, LatentTrace, THETA_FLOOR, check_data};

#[derive(Clone, Debug, PartialEq)]
pub struct DlState {
    pub theta: Vec<f64>,
    pub psi: Vec<f64>,
    pub phi: Vec<f64>,
    pub tau: f64,
    pub a: f64,
}

impl DlState {
    /// Chain start: `θ = y`, `φ` uniform, `τ` at its prior mean, `ψ = 1`.
    pub fn initial(y: &[f64], spec: &DlPriorSpec) -> Self {
        let n = y.len();
        let a = spec.initial_a();
        DlState {
            theta: y.to_vec(),
            psi: vec![1.0; n],
            phi: vec![1.0 / n as f64; n],
            tau: 2.0 * n as f64 * a,
            a,
        }
    }

    pub fn n(&self) -> usize {
        self.theta.len()
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.n();
        if n == 0 || self.psi.len() != n || self.phi.len() != n {
            return Err(Error::validation("state vectors must share a positive length"));
        }
        if self.theta.iter().any(|t| !t.is_finite()) {
            return Err(Error::validation("theta must be finite"));
        }
        if self.psi.iter().any(|&p| !(p > 0.0 && p.is_finite())) {
            return Err(Error::validation("psi must be positive and finite"));
        }
        if self.phi.iter().any(|&p| !(p >= 0.0)) || (self.phi.iter().sum::<f64>() - 1.0).abs() > 1e-12 {
            return Err(Error::validation("phi must lie on the simplex"));
        }
        if !(self.tau > 0.0 && self.tau.is_finite()) || !(self.a > 0.0) {
            return Err(Error::validation("tau and a must be positive"));
        }
        Ok(())
    }
}

/// `θ_j ~ N(σ_j² y_j, σ_j²)`, `σ_j² = (1 + 1/(ψ_j φ_j² τ²))^{-1}`.
pub fn dl_step_theta(rng: &mut RngStream, state: &mut DlState, y: &[f64]) {
    let ln_tau = state.tau.ln();
    for j in 0..state.theta.len() {
        // the prior variance spans hundreds of decades for small a
        let v = (state.psi[j].ln() + 2.0 * (state.phi[j].ln() + ln_tau)).exp();
        let s2 = 1.0 / (1.0 + 1.0 / v);
        state.theta[j] = s2 * y[j] + s2.sqrt() * rng.std_normal();
    }
}

/// `1/ψ_j ~ iG(φ_j τ / |θ_j|, 1)`, i.e. `ψ_j ~ giG(1/2, 1, θ_j² / (φ_j τ)²)`.
pub fn dl_step_psi(rng: &mut RngStream, state: &mut DlState) {
    for j in 0..state.theta.len() {
        let t = state.theta[j].abs().max(THETA_FLOOR);
        let mu = state.phi[j] * state.tau / t;
        let zeta = ig_variate(rng, mu, 1.0).max(f64::MIN_POSITIVE);
        state.psi[j] = (1.0 / zeta).min(f64::MAX);
    }
}

/// `τ ~ giG(na - n, 1, 2 Σ |θ_j| / φ_j)`.
pub fn dl_step_tau(rng: &mut RngStream, state: &mut DlState, chi_floor: f64) {
    let n = state.n() as f64;
    let chi: f64 = 2.0
        * state
            .theta
            .iter()
            .zip(&state.phi)
            .map(|(t, p)| t.abs().max(THETA_FLOOR) / p)
            .sum::<f64>();
    let tau = gig_variate(rng, n * state.a - n, 1.0, chi.max(chi_floor));
    state.tau = tau.max(f64::MIN_POSITIVE);
}

/// `φ = T / Σ T` with `T_j ~ giG(a - 1, 1, 2|θ_j|)` independently.
pub fn dl_step_phi(rng: &mut RngStream, state: &mut DlState) -> Result<()> {
    let n = state.n();
    if n == 1 {
        state.phi[0] = 1.0;
        return Ok(());
    }
    let mut total = 0.0;
    for j in 0..n {
        let chi = 2.0 * state.theta[j].abs().max(THETA_FLOOR);
        let t = gig_variate(rng, state.a - 1.0, 1.0, chi);
        state.phi[j] = t;
        total += t;
    }
    if !(total > 0.0 && total.is_finite()) {
        return Err(Error::Degenerate {
            iteration: 0,
            detail: format!("phi normalizer is {total}"),
        });
    }
    for p in state.phi.iter_mut() {
        *p /= total;
    }
    Ok(())
}

/// Unnormalized log weights `Σ_j log gamma(φ_j τ; a, 1/2)` for each grid
/// point, computed from the sufficient statistics `Σ ln φ_j + n ln τ` and
/// `τ Σ φ_j`.
pub fn a_log_weights(phi: &[f64], tau: f64, grid: &[f64]) -> Vec<f64> {
    let n = phi.len() as f64;
    let sum_ln = phi.iter().map(|p| p.ln()).sum::<f64>() + n * tau.ln();
    let sum = tau * phi.iter().sum::<f64>();
    let ln_half = -std::f64::consts::LN_2;
    grid.iter()
        .map(|&a| n * (a * ln_half - ln_gamma(a)) + (a - 1.0) * sum_ln - 0.5 * sum)
        .collect()
}

/// Unnormalized log weights of `a | φ, θ` with `ψ` and `τ` integrated out:
/// `-n ln Γ(a) + (a - 1) Σ ln φ_j - na ln 2 + (λ/2) ln χ + ln K_λ(√χ)`,
/// `λ = na - n`, `χ = 2 Σ |θ_j| / φ_j`.
pub fn a_log_weights_collapsed(theta: &[f64], phi: &[f64], grid: &[f64]) -> Vec<f64> {
    let n = phi.len() as f64;
    let sum_ln_phi: f64 = phi.iter().map(|p| p.ln()).sum();
    let chi = 2.0 * theta.iter().zip(phi).map(|(t, p)| t.abs().max(THETA_FLOOR) / p).sum::<f64>();
    let (ln_chi, root) = (chi.ln(), chi.sqrt());
    grid.iter()
        .map(|&a| {
            let lambda = n * a - n;
            -n * ln_gamma(a) + (a - 1.0) * sum_ln_phi - n * a * std::f64::consts::LN_2
                + 0.5 * lambda * ln_chi
                + ln_bessel_k(lambda, root)
        })
        .collect()
}

/// Draws `a | φ, θ` from its discrete full conditional
/// ([`a_log_weights_collapsed`]). A no-op in fixed mode; a singleton grid
/// consumes no random numbers.
pub fn dl_step_a(rng: &mut RngStream, state: &mut DlState, spec: &DlPriorSpec) {
    let AMode::Grid(grid) = &spec.a_mode else {
        return;
    };
    if grid.len() == 1 {
        state.a = grid[0];
        return;
    }
    let w = a_log_weights_collapsed(&state.theta, &state.phi, grid);
    let total = lse(&w);
    let u = rng.uniform();
    let mut acc = 0.0;
    state.a = *grid.last().unwrap();
    for (&a, &lw) in grid.iter().zip(&w) {
        acc += (lw - total).exp();
        if u < acc {
            state.a = a;
            break;
        }
    }
}

/// One full sweep: `φ`, `a`, `τ`, `ψ`, then `θ`.
pub fn dl_sweep(
    rng: &mut RngStream,
    state: &mut DlState,
    y: &[f64],
    spec: &DlPriorSpec,
    chi_floor: f64,
) -> Result<()> {
    dl_step_phi(rng, state)?;
    dl_step_a(rng, state, spec);
    dl_step_tau(rng, state, chi_floor);
    dl_step_psi(rng, state);
    dl_step_theta(rng, state, y);
    Ok(())
}

pub fn run_dl_chain(y: &[f64], spec: &DlPriorSpec, cfg: &ChainConfig) -> Result<ChainOutput<DlState>> {
    check_data(y)?;
    spec.validate()?;
    cfg.validate()?;
    if spec.n != y.len() {
        return Err(Error::validation(format!(
            "prior dimension {} does not match data length {}",
            spec.n,
            y.len()
        )));
    }
    let n = y.len();
    let keep = cfg.retained();
    let mut rng = RngStream::new(cfg.seed, cfg.stream);
    let mut state = DlState::initial(y, spec);
    let mut theta = Draws::with_capacity(n, keep);
    let mut a_draws = Vec::with_capacity(keep);
    let mut latents = cfg.store_latents.then(|| LatentTrace {
        global: Vec::with_capacity(keep),
        local: Draws::with_capacity(n, keep),
        phi: Some(Draws::with_capacity(n, keep)),
    });

    for it in 0..cfg.iterations {
        dl_sweep(&mut rng, &mut state, y, spec, cfg.chi_floor).map_err(|e| match e {
            Error::Degenerate { detail, .. } => Error::Degenerate { iteration: it, detail },
            other => other,
        })?;
        if !state.theta.iter().sum::<f64>().is_finite() {
            return Err(Error::Degenerate {
                iteration: it,
                detail: "non-finite theta".into(),
            });
        }
        if cfg.keeps(it) {
            theta.push(&state.theta);
            a_draws.push(state.a);
            if let Some(l) = latents.as_mut() {
                l.global.push(state.tau);
                l.local.push(&state.psi);
                l.phi.as_mut().unwrap().push(&state.phi);
            }
        }
    }
    Ok(ChainOutput {
        theta,
        a_draws,
        final_state: state,
        latents,
    })
}
