//! The Dirichlet-Laplace prior.
//!
//! Two equivalent hierarchies generate `θ ~ DL_a` on `R^n`:
//!
//! - hierarchical: `θ_j | φ, τ ~ DE(φ_j τ)`, `φ ~ Dir(a, ..., a)`,
//!   `τ ~ gamma(na, 1/2)`;
//! - marginalized: `θ_j | ψ_j ~ DE(ψ_j)`, `ψ_j ~ gamma(a, 1/2)` i.i.d.
//!
//! The second form gives the closed-form marginal density
//! `Π(θ) = |θ|^{(a-1)/2} K_{1-a}(√(2|θ|)) / (2^{(1+a)/2} Γ(a))`.

use serde::{Deserialize, Serialize};

use crate::distributions::log_gamma_variate;
use crate::error::{Error, Result};
use crate::rng::RngStream;
use crate::special::{LogValue, ln_bessel_k, ln_gamma};

/// How the Dirichlet concentration is treated.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AMode {
    Fixed(f64),
    /// Discrete uniform prior over ascending support points.
    Grid(Vec<f64>),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DlPriorSpec {
    pub n: usize,
    pub a_mode: AMode,
}

impl DlPriorSpec {
    /// Fixed concentration `a = 1/n`.
    pub fn default_for(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::validation("dimension n must be positive"));
        }
        Self::fixed(n, 1.0 / n as f64)
    }

    pub fn fixed(n: usize, a: f64) -> Result<Self> {
        let spec = DlPriorSpec {
            n,
            a_mode: AMode::Fixed(a),
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn grid(n: usize, points: Vec<f64>) -> Result<Self> {
        let spec = DlPriorSpec {
            n,
            a_mode: AMode::Grid(points),
        };
        spec.validate()?;
        Ok(spec)
    }

    /// The grid `10(k+1)/n, k = 0, 1, ...` truncated at 1/2. For n < 20 no
    /// such point exists and the grid collapses to `{min(1/n, 1/2)}`.
    pub fn default_grid(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::validation("dimension n must be positive"));
        }
        let mut points: Vec<f64> = (0..)
            .map(|k| 10.0 * (k + 1) as f64 / n as f64)
            .take_while(|&a| a <= 0.5)
            .collect();
        if points.is_empty() {
            points.push((1.0 / n as f64).min(0.5));
        }
        Self::grid(n, points)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::validation("dimension n must be positive"));
        }
        match &self.a_mode {
            AMode::Fixed(a) => {
                if !(*a > 0.0 && *a <= 1.0) {
                    return Err(Error::validation(format!("fixed a = {a} must lie in (0, 1]")));
                }
            }
            AMode::Grid(points) => {
                if points.is_empty() {
                    return Err(Error::validation("a grid must be nonempty"));
                }
                if points.iter().any(|&a| !(a > 0.0 && a < 1.0)) {
                    return Err(Error::validation("a grid points must lie in (0, 1)"));
                }
                if points.windows(2).any(|w| w[1] <= w[0]) {
                    return Err(Error::validation("a grid points must be strictly ascending"));
                }
            }
        }
        Ok(())
    }

    /// Starting value of `a`: the fixed value, or the grid point closest to 1/n.
    pub fn initial_a(&self) -> f64 {
        match &self.a_mode {
            AMode::Fixed(a) => *a,
            AMode::Grid(points) => {
                let target = 1.0 / self.n as f64;
                *points
                    .iter()
                    .min_by(|x, y| (*x - target).abs().total_cmp(&(*y - target).abs()))
                    .unwrap()
            }
        }
    }
}

/// One joint draw of the hierarchical representation.
///
/// `psi[j] = phi[j] * tau`; entries can underflow to zero when `a` is tiny,
/// in which case the matching `theta[j]` is exactly zero.
#[derive(Clone, Debug, PartialEq)]
pub struct PriorDraw {
    pub theta: Vec<f64>,
    pub psi: Vec<f64>,
    pub phi: Vec<f64>,
    pub tau: f64,
}

fn check_a(a: f64) -> Result<()> {
    if !(a > 0.0 && a <= 1.0) {
        return Err(Error::domain("dl_prior", format!("a = {a} must lie in (0, 1]")));
    }
    Ok(())
}

#[inline]
fn signed_laplace(rng: &mut RngStream, log_scale: f64) -> f64 {
    let mag = (log_scale + rng.std_exponential().ln()).exp();
    if rng.uniform() < 0.5 { -mag } else { mag }
}

/// Draw from `φ ~ Dir(a)`, `τ ~ gamma(na, 1/2)`, `θ_j ~ DE(φ_j τ)`.
pub fn sample_prior_hierarchical(rng: &mut RngStream, spec: &DlPriorSpec, a: f64) -> Result<PriorDraw> {
    spec.validate()?;
    check_a(a)?;
    let n = spec.n;
    let log_phi: Vec<f64> = if n == 1 {
        vec![0.0]
    } else {
        let g: Vec<f64> = (0..n).map(|_| log_gamma_variate(rng, a)).collect();
        let total = crate::special::lse(&g);
        g.into_iter().map(|l| l - total).collect()
    };
    let log_tau = log_gamma_variate(rng, n as f64 * a) + std::f64::consts::LN_2;
    let theta: Vec<f64> = log_phi.iter().map(|lp| signed_laplace(rng, lp + log_tau)).collect();
    let tau = log_tau.exp();
    let psi = log_phi.iter().map(|lp| (lp + log_tau).exp()).collect();
    let mut phi: Vec<f64> = log_phi.iter().map(|lp| lp.exp()).collect();
    let s: f64 = phi.iter().sum();
    phi.iter_mut().for_each(|p| *p /= s);
    Ok(PriorDraw { theta, psi, phi, tau })
}

/// Draw `n` i.i.d. coordinates from `ψ_j ~ gamma(a, 1/2)`, `θ_j ~ DE(ψ_j)`.
pub fn sample_prior_marginalized(rng: &mut RngStream, n: usize, a: f64) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(Error::validation("dimension n must be positive"));
    }
    check_a(a)?;
    Ok((0..n)
        .map(|_| {
            let log_psi = log_gamma_variate(rng, a) + std::f64::consts::LN_2;
            signed_laplace(rng, log_psi)
        })
        .collect())
}

/// Log of the closed-form marginal density of one coordinate.
///
/// Returns [`Error::Singularity`] at `theta = 0`, where the density is
/// infinite for every `a <= 1`.
pub fn marginal_log_pdf(theta: f64, a: f64) -> Result<LogValue> {
    if !(a > 0.0) || !a.is_finite() {
        return Err(Error::domain("marginal_log_pdf", format!("a = {a} must be positive")));
    }
    if !theta.is_finite() {
        return Err(Error::domain("marginal_log_pdf", "theta must be finite"));
    }
    if theta == 0.0 {
        return Err(Error::Singularity);
    }
    let t = theta.abs();
    Ok(LogValue(
        -0.5 * (1.0 + a) * std::f64::consts::LN_2 - ln_gamma(a)
            + 0.5 * (a - 1.0) * t.ln()
            + ln_bessel_k(1.0 - a, (2.0 * t).sqrt()),
    ))
}

/// Monte Carlo estimate of `P(|θ_1| > δ)` with its binomial standard error.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TailMass {
    pub delta: f64,
    pub estimate: f64,
    pub se: f64,
    pub draws: usize,
}

pub const MIN_TAIL_DRAWS: usize = 10_000;

pub fn tail_mass_estimate(rng: &mut RngStream, a: f64, delta: f64, draws: usize) -> Result<TailMass> {
    check_a(a)?;
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(Error::validation(format!("delta = {delta} must be positive")));
    }
    if draws < MIN_TAIL_DRAWS {
        return Err(Error::validation(format!(
            "tail mass needs at least {MIN_TAIL_DRAWS} draws, got {draws}"
        )));
    }
    let log_delta = delta.ln();
    // |θ| = ψ E with E ~ Exp(1); compared on the log scale.
    let hits = (0..draws)
        .filter(|_| {
            let log_psi = log_gamma_variate(rng, a) + std::f64::consts::LN_2;
            log_psi + rng.std_exponential().ln() > log_delta
        })
        .count();
    let estimate = hits as f64 / draws as f64;
    Ok(TailMass {
        delta,
        estimate,
        se: (estimate * (1.0 - estimate) / draws as f64).sqrt(),
        draws,
    })
}

/// `|{ j : |θ_j| > δ }|`.
pub fn supp_delta_count(theta: &[f64], delta: f64) -> usize {
    theta.iter().filter(|t| t.abs() > delta).count()
}
