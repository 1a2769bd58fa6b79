//! Random variate generation and log densities for the distributions used by
//! the samplers.
//!
//! Parametrizations:
//! - `gamma(shape, rate)`: density ∝ x^{shape-1} e^{-rate x}.
//! - `iG(μ, λ)`: inverse Gaussian with mean μ and shape λ.
//! - `giG(λ, ρ, χ)`: density ∝ y^{λ-1} e^{-(ρ y + χ / y)/2} on y > 0.
//! - `DE(τ)`: Laplace with density (2τ)^{-1} e^{-|y|/τ}.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::RngStream;
use crate::special::{LogValue, ln_bessel_k, ln_gamma, lse};

/// Inverse Gaussian parameters: mean `mu`, shape `lam`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IgParams {
    pub mu: f64,
    pub lam: f64,
}

impl IgParams {
    pub fn new(mu: f64, lam: f64) -> Result<Self> {
        if !(mu > 0.0 && mu.is_finite()) || !(lam > 0.0 && lam.is_finite()) {
            return Err(Error::domain(
                "inverse_gaussian",
                format!("mean {mu} and shape {lam} must be positive and finite"),
            ));
        }
        Ok(IgParams { mu, lam })
    }

    pub fn mean(&self) -> f64 {
        self.mu
    }

    pub fn variance(&self) -> f64 {
        self.mu.powi(3) / self.lam
    }

    /// The same law written as `giG(-1/2, λ/μ², λ)`.
    pub fn as_gig(&self) -> GigParams {
        GigParams {
            lambda: -0.5,
            rho: self.lam / (self.mu * self.mu),
            chi: self.lam,
        }
    }
}

/// Generalized inverse Gaussian parameters, density ∝ y^{λ-1} e^{-(ρy + χ/y)/2}.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GigParams {
    pub lambda: f64,
    pub rho: f64,
    pub chi: f64,
}

impl GigParams {
    pub fn new(lambda: f64, rho: f64, chi: f64) -> Result<Self> {
        if !lambda.is_finite() || !(rho > 0.0 && rho.is_finite()) || !(chi >= 0.0 && chi.is_finite()) {
            return Err(Error::domain(
                "gig",
                format!("need finite lambda, rho > 0, chi >= 0; got ({lambda}, {rho}, {chi})"),
            ));
        }
        if chi == 0.0 && lambda <= 0.0 {
            return Err(Error::domain(
                "gig",
                format!("chi = 0 with lambda = {lambda} <= 0 is improper"),
            ));
        }
        Ok(GigParams { lambda, rho, chi })
    }

    /// `E[Y] = √(χ/ρ) K_{λ+1}(ω) / K_λ(ω)` with `ω = √(ρχ)`.
    pub fn mean(&self) -> f64 {
        if self.chi == 0.0 {
            return 2.0 * self.lambda / self.rho;
        }
        let omega = (self.rho * self.chi).sqrt();
        (self.chi / self.rho).sqrt()
            * (ln_bessel_k(self.lambda + 1.0, omega) - ln_bessel_k(self.lambda, omega)).exp()
    }
}

pub fn draw_normal(rng: &mut RngStream, mean: f64, sd: f64) -> Result<f64> {
    if !(sd > 0.0) || !sd.is_finite() || !mean.is_finite() {
        return Err(Error::domain("normal", format!("sd = {sd} must be positive and finite")));
    }
    Ok(mean + sd * rng.std_normal())
}

/// Marsaglia-Tsang for shape >= 1, unit rate.
fn gamma_mt(rng: &mut RngStream, shape: f64) -> f64 {
    let d = shape - 1.0 / 3.0;
    let c = 1.0 / (3.0 * d.sqrt());
    loop {
        let x = rng.std_normal();
        let v = 1.0 + c * x;
        if v <= 0.0 {
            continue;
        }
        let v = v * v * v;
        let u = rng.uniform();
        let x2 = x * x;
        if u < 1.0 - 0.0331 * x2 * x2 || u.ln() < 0.5 * x2 + d * (1.0 - v + v.ln()) {
            return d * v;
        }
    }
}

/// `ln G` for `G ~ gamma(shape, 1)`. Exact for any positive shape; for
/// shape < 1 uses `G = G' U^{1/shape}` with `G' ~ gamma(shape + 1, 1)`,
/// which never leaves the log scale.
pub(crate) fn log_gamma_variate(rng: &mut RngStream, shape: f64) -> f64 {
    if shape >= 1.0 {
        gamma_mt(rng, shape).ln()
    } else {
        let g = gamma_mt(rng, shape + 1.0).ln();
        g + rng.uniform().ln() / shape
    }
}

/// Log of a `gamma(shape, rate)` variate; never underflows.
pub fn draw_log_gamma(rng: &mut RngStream, shape: f64, rate: f64) -> Result<f64> {
    check_gamma(shape, rate)?;
    Ok(log_gamma_variate(rng, shape) - rate.ln())
}

/// A `gamma(shape, rate)` variate. Values below the smallest normal double
/// are returned as `f64::MIN_POSITIVE`; use [`draw_log_gamma`] when those
/// matter.
pub fn draw_gamma(rng: &mut RngStream, shape: f64, rate: f64) -> Result<f64> {
    check_gamma(shape, rate)?;
    Ok((log_gamma_variate(rng, shape) - rate.ln()).exp().max(f64::MIN_POSITIVE))
}

fn check_gamma(shape: f64, rate: f64) -> Result<()> {
    if !(shape > 0.0 && shape.is_finite()) || !(rate > 0.0 && rate.is_finite()) {
        return Err(Error::domain(
            "gamma",
            format!("shape {shape} and rate {rate} must be positive and finite"),
        ));
    }
    Ok(())
}

pub fn gamma_log_pdf(x: f64, shape: f64, rate: f64) -> Result<LogValue> {
    check_gamma(shape, rate)?;
    if !(x > 0.0) {
        return Err(Error::domain("gamma_log_pdf", format!("x = {x} must be positive")));
    }
    Ok(LogValue(
        shape * rate.ln() - ln_gamma(shape) + (shape - 1.0) * x.ln() - rate * x,
    ))
}

/// Symmetric Dirichlet(a, ..., a) of dimension `n`. The gamma variates are
/// generated and normalized on the log scale so that concentrations near
/// `1/n` do not underflow to an all-zero vector.
pub fn draw_dirichlet(rng: &mut RngStream, concentration: f64, n: usize) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(Error::domain("dirichlet", "dimension must be positive"));
    }
    if !(concentration > 0.0 && concentration.is_finite()) {
        return Err(Error::domain(
            "dirichlet",
            format!("concentration {concentration} must be positive"),
        ));
    }
    if n == 1 {
        return Ok(vec![1.0]);
    }
    let logs: Vec<f64> = (0..n).map(|_| log_gamma_variate(rng, concentration)).collect();
    Ok(normalize_log_weights(&logs))
}

/// `exp(l_j - lse(l))`, then rescaled so the components sum to one.
pub(crate) fn normalize_log_weights(logs: &[f64]) -> Vec<f64> {
    let total = lse(logs);
    let mut out: Vec<f64> = logs.iter().map(|l| (l - total).exp()).collect();
    let s: f64 = out.iter().sum();
    for v in out.iter_mut() {
        *v /= s;
    }
    out
}

pub fn draw_double_exponential(rng: &mut RngStream, scale: f64) -> Result<f64> {
    if !(scale > 0.0 && scale.is_finite()) {
        return Err(Error::domain("double_exponential", format!("scale {scale} must be positive")));
    }
    let e = scale * rng.std_exponential();
    Ok(if rng.uniform() < 0.5 { -e } else { e })
}

/// Michael-Schucany-Haas transformation with rejection.
pub fn draw_inverse_gaussian(rng: &mut RngStream, p: IgParams) -> Result<f64> {
    let p = IgParams::new(p.mu, p.lam)?;
    Ok(ig_variate(rng, p.mu, p.lam))
}

#[inline]
pub(crate) fn ig_variate(rng: &mut RngStream, mu: f64, lam: f64) -> f64 {
    let z = rng.std_normal();
    let w = mu * z * z / (2.0 * lam);
    // smaller root of the quadratic, written without cancellation or
    // overflow of w² when μ is huge
    let x = mu / (1.0 + w + w.sqrt() * (w + 2.0).sqrt());
    if rng.uniform() * (mu + x) <= mu {
        x
    } else {
        mu * mu / x
    }
}

pub fn ig_log_pdf(y: f64, p: IgParams) -> Result<LogValue> {
    if !(y > 0.0) {
        return Err(Error::domain("ig_log_pdf", format!("y = {y} must be positive")));
    }
    let IgParams { mu, lam } = p;
    Ok(LogValue(
        0.5 * (lam / (2.0 * std::f64::consts::PI * y.powi(3))).ln()
            - lam * (y - mu).powi(2) / (2.0 * mu * mu * y),
    ))
}

/// Normalized log density of `giG(λ, ρ, χ)`.
pub fn gig_log_pdf(y: f64, p: GigParams) -> Result<LogValue> {
    let p = GigParams::new(p.lambda, p.rho, p.chi)?;
    if !(y > 0.0) || !y.is_finite() {
        return Err(Error::domain("gig_log_pdf", format!("y = {y} must be positive")));
    }
    Ok(LogValue(gig_log_norm(&p) + (p.lambda - 1.0) * y.ln() - 0.5 * (p.rho * y + p.chi / y)))
}

fn gig_log_norm(p: &GigParams) -> f64 {
    if p.chi == 0.0 {
        p.lambda * (0.5 * p.rho).ln() - ln_gamma(p.lambda)
    } else {
        let omega = (p.rho * p.chi).sqrt();
        0.5 * p.lambda * (p.rho / p.chi).ln() - std::f64::consts::LN_2 - ln_bessel_k(p.lambda, omega)
    }
}

/// Exact `giG(λ, ρ, χ)` variate.
///
/// Rejection algorithms of Hörmann & Leydold (2014) on the standardized
/// density x^{λ-1} e^{-ω(x + 1/x)/2}, ω = √(ρχ), then scaled by √(χ/ρ):
/// ratio-of-uniforms with mode shift for λ > 2 or ω > 3, without shift for
/// moderate parameters, and a three-piece dominating hat when λ < 1 and ω is
/// small. The last region is the one the DL sampler lives in (λ = a - 1
/// mirrored to 1 - a, ω = √(2|θ|) tiny) and has a bounded rejection rate
/// as ω → 0. Negative λ uses `1/giG(λ, ρ, χ) ~ giG(-λ, χ, ρ)`.
pub fn draw_gig(rng: &mut RngStream, p: GigParams) -> Result<f64> {
    let p = GigParams::new(p.lambda, p.rho, p.chi)?;
    Ok(gig_variate(rng, p.lambda, p.rho, p.chi))
}

/// Unchecked variant used in hot loops; caller guarantees valid parameters.
pub(crate) fn gig_variate(rng: &mut RngStream, lambda: f64, rho: f64, chi: f64) -> f64 {
    if chi == 0.0 {
        return (log_gamma_variate(rng, lambda) - (0.5 * rho).ln()).exp();
    }
    let omega = (rho * chi).sqrt();
    let alpha = (chi / rho).sqrt();
    let l = lambda.abs();
    let x = if l > 2.0 || omega > 3.0 {
        rou_shift(rng, l, omega)
    } else if l >= 1.0 - 2.25 * omega * omega || omega > 0.2 {
        rou_noshift(rng, l, omega)
    } else {
        three_piece(rng, l, omega)
    };
    if lambda < 0.0 { alpha / x } else { alpha * x }
}

#[inline]
fn gig_mode(l: f64, omega: f64) -> f64 {
    if l >= 1.0 {
        ((l - 1.0).hypot(omega) + (l - 1.0)) / omega
    } else {
        omega / ((1.0 - l).hypot(omega) + (1.0 - l))
    }
}

fn rou_noshift(rng: &mut RngStream, l: f64, omega: f64) -> f64 {
    let t = 0.5 * (l - 1.0);
    let s = 0.25 * omega;
    let xm = gig_mode(l, omega);
    let nc = t * xm.ln() - s * (xm + 1.0 / xm);
    let ym = ((l + 1.0) + (l + 1.0).hypot(omega)) / omega;
    let um = (0.5 * (l + 1.0) * ym.ln() - s * (ym + 1.0 / ym) - nc).exp();
    loop {
        let u = um * rng.uniform();
        let v = rng.uniform();
        let x = u / v;
        if v.ln() <= t * x.ln() - s * (x + 1.0 / x) - nc {
            return x;
        }
    }
}

fn rou_shift(rng: &mut RngStream, l: f64, omega: f64) -> f64 {
    let t = 0.5 * (l - 1.0);
    let s = 0.25 * omega;
    let xm = gig_mode(l, omega);
    let nc = t * xm.ln() - s * (xm + 1.0 / xm);

    // Bounding rectangle from the roots of a cubic (Cardano, trigonometric form).
    let a = -(2.0 * (l + 1.0) / omega + xm);
    let b = 2.0 * (l - 1.0) * xm / omega - 1.0;
    let c = xm;
    let p = b - a * a / 3.0;
    let q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
    let fi = (-q / (2.0 * (-(p * p * p) / 27.0).sqrt())).clamp(-1.0, 1.0).acos();
    let fak = 2.0 * (-p / 3.0).sqrt();
    let y1 = fak * (fi / 3.0).cos() - a / 3.0;
    let y2 = fak * (fi / 3.0 + 4.0 / 3.0 * std::f64::consts::PI).cos() - a / 3.0;
    let uplus = (y1 - xm) * (t * y1.ln() - s * (y1 + 1.0 / y1) - nc).exp();
    let uminus = (y2 - xm) * (t * y2.ln() - s * (y2 + 1.0 / y2) - nc).exp();
    loop {
        let u = uminus + rng.uniform() * (uplus - uminus);
        let v = rng.uniform();
        let x = u / v + xm;
        if x > 0.0 && v.ln() <= t * x.ln() - s * (x + 1.0 / x) - nc {
            return x;
        }
    }
}

/// Dominating density: constant on (0, x0), x^{l-1} on (x0, 2/ω),
/// exponential beyond. Valid for 0 <= l < 1, 0 < ω <= 1.
fn three_piece(rng: &mut RngStream, l: f64, omega: f64) -> f64 {
    let xm = gig_mode(l, omega);
    let x0 = omega / (1.0 - l);
    let k0 = ((l - 1.0) * xm.ln() - 0.5 * omega * (xm + 1.0 / xm)).exp();
    let a1 = k0 * x0;
    let (k1, a2, k2, a3);
    if x0 >= 2.0 / omega {
        k1 = 0.0;
        a2 = 0.0;
        k2 = x0.powf(l - 1.0);
        a3 = k2 * 2.0 * (-omega * x0 / 2.0).exp() / omega;
    } else {
        k1 = (-omega).exp();
        a2 = if l == 0.0 {
            k1 * (2.0 / (omega * omega)).ln()
        } else {
            k1 / l * ((2.0 / omega).powf(l) - x0.powf(l))
        };
        k2 = (2.0 / omega).powf(l - 1.0);
        a3 = k2 * 2.0 * (-1.0f64).exp() / omega;
    }
    let total = a1 + a2 + a3;
    loop {
        let mut v = total * rng.uniform();
        let (x, hx);
        if v <= a1 {
            x = x0 * v / a1;
            hx = k0;
        } else {
            v -= a1;
            if v <= a2 {
                if l == 0.0 {
                    x = omega * (v / k1).exp();
                    hx = k1 / x;
                } else {
                    x = (x0.powf(l) + l / k1 * v).powf(1.0 / l);
                    hx = k1 * x.powf(l - 1.0);
                }
            } else {
                v -= a2;
                let start = x0.max(2.0 / omega);
                x = -2.0 / omega * ((-omega / 2.0 * start).exp() - omega / (2.0 * k2) * v).ln();
                hx = k2 * (-omega / 2.0 * x).exp();
            }
        }
        let u = rng.uniform() * hx;
        if u.ln() <= (l - 1.0) * x.ln() - omega / 2.0 * (x + 1.0 / x) {
            return x;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use dlshrink_testkit as tk;

    fn draws<F: FnMut(&mut RngStream) -> f64>(seed: u64, n: usize, mut f: F) -> Vec<f64> {
        let mut rng = RngStream::new(seed, 0);
        (0..n).map(|_| f(&mut rng)).collect()
    }

    #[test]
    fn normal_validation_and_degenerate_sd() {
        let mut rng = RngStream::new(1, 0);
        assert!(draw_normal(&mut rng, 0.0, 0.0).is_err());
        assert!(draw_normal(&mut rng, 0.0, -1.0).is_err());
        let x = draw_normal(&mut rng, 3.0, 1e-12).unwrap();
        assert!((x - 3.0).abs() < 1e-9);
    }

    #[test]
    fn normal_moments() {
        let xs = draws(2, 1_000_000, |r| draw_normal(r, 0.0, 1.0).unwrap());
        let (m, _) = tk::mean_se(&xs);
        assert!(m.abs() < 4.0 / 1000.0);
        let xs = draws(3, 1_000_000, |r| draw_normal(r, 0.0, 2.0).unwrap());
        assert!((tk::variance(&xs) / 4.0 - 1.0).abs() < 0.05);
    }

    #[test]
    fn gamma_validation() {
        let mut rng = RngStream::new(1, 0);
        assert!(draw_gamma(&mut rng, 0.0, 1.0).is_err());
        assert!(draw_gamma(&mut rng, 1.0, 0.0).is_err());
        assert!(draw_gamma(&mut rng, -2.0, 1.0).is_err());
    }

    #[test]
    fn gamma_moments() {
        let xs = draws(4, 1_000_000, |r| draw_gamma(r, 1.0, 0.5).unwrap());
        let (m, _) = tk::mean_se(&xs);
        assert!((m / 2.0 - 1.0).abs() < 0.01);
        let xs = draws(5, 1_000_000, |r| draw_gamma(r, 200.0, 0.5).unwrap());
        let (m, se) = tk::mean_se(&xs);
        assert!((m - 400.0).abs() < 4.0 * se);
        let v = tk::variance(&xs);
        assert!((v - 800.0).abs() < 4.0 * tk::variance_se(&xs));
    }

    #[test]
    fn gamma_tiny_shape_matches_cdf_at_1e_minus_10() {
        let shape = 1e-3;
        let n = 200_000;
        let mut rng = RngStream::new(6, 0);
        let hits = (0..n)
            .filter(|_| draw_log_gamma(&mut rng, shape, 1.0).unwrap() < (1e-10f64).ln())
            .count();
        let p = tk::gamma_cdf(shape, 1.0, 1e-10);
        let frac = hits as f64 / n as f64;
        let se = (p * (1.0 - p) / n as f64).sqrt();
        assert!((frac - p).abs() < 3.0 * se, "frac {frac} vs {p}");
    }

    #[test]
    fn dirichlet_basic_shapes() {
        let mut rng = RngStream::new(7, 0);
        assert!(draw_dirichlet(&mut rng, 1.0, 0).is_err());
        assert_eq!(draw_dirichlet(&mut rng, 0.3, 1).unwrap(), vec![1.0]);
        for &a in &[1e-4, 0.01, 1.0, 5.0] {
            let phi = draw_dirichlet(&mut rng, a, 10_000).unwrap();
            assert!(phi.iter().all(|&v| v >= 0.0));
            assert!((phi.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn dirichlet_two_dim_uniform() {
        let xs = draws(8, 100_000, |r| draw_dirichlet(r, 1.0, 2).unwrap()[0]);
        assert!(tk::ks_one_sample(&xs, |x| x.clamp(0.0, 1.0)) < 0.01);
    }

    #[test]
    fn dirichlet_exchangeable() {
        let mut rng = RngStream::new(9, 0);
        let d = 4;
        let mut cols = vec![Vec::new(); d];
        for _ in 0..50_000 {
            for (c, v) in cols.iter_mut().zip(draw_dirichlet(&mut rng, 0.2, d).unwrap()) {
                c.push(v);
            }
        }
        for c in &cols {
            let (m, se) = tk::mean_se(c);
            assert!((m - 0.25).abs() < 3.0 * se);
        }
    }

    #[test]
    fn dirichlet_small_concentration_max_component() {
        let n = 100_000;
        let mut rng = RngStream::new(10, 0);
        let xs: Vec<f64> = (0..n)
            .map(|_| draw_dirichlet(&mut rng, 0.01, 3).unwrap().into_iter().fold(0.0, f64::max))
            .collect();
        let (m, se) = tk::mean_se(&xs);
        // Oracle: the max share computed directly as 1 / Σ exp(l_j - max l)
        // from log-gamma variates on an unrelated stream.
        let mut orng = RngStream::new(11, 99);
        let ys: Vec<f64> = (0..n)
            .map(|_| {
                let l: Vec<f64> = (0..3).map(|_| log_gamma_variate(&mut orng, 0.01)).collect();
                let mx = l.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                let s: f64 = l.iter().map(|v| (v - mx).exp()).sum();
                1.0 / s
            })
            .collect();
        let (mo, seo) = tk::mean_se(&ys);
        assert!((m - mo).abs() < 3.0 * (se * se + seo * seo).sqrt());
        assert!(m > 0.95);
    }

    #[test]
    fn double_exponential_moments() {
        let mut rng = RngStream::new(12, 0);
        assert!(draw_double_exponential(&mut rng, 0.0).is_err());
        let xs = draws(13, 100_000, |r| draw_double_exponential(r, 2.5).unwrap());
        let pos = xs.iter().filter(|&&x| x > 0.0).count() as f64 / xs.len() as f64;
        assert!((pos - 0.5).abs() < 3.0 * (0.25f64 / xs.len() as f64).sqrt());
        let abs: Vec<f64> = xs.iter().map(|x| x.abs()).collect();
        let (m, se) = tk::mean_se(&abs);
        assert!((m - 2.5).abs() < 3.0 * se);
        assert!((tk::variance(&xs) - 12.5).abs() < 4.0 * tk::variance_se(&xs));
    }

    #[test]
    fn inverse_gaussian_moments_and_validation() {
        let mut rng = RngStream::new(14, 0);
        assert!(draw_inverse_gaussian(&mut rng, IgParams { mu: 0.0, lam: 1.0 }).is_err());
        assert!(draw_inverse_gaussian(&mut rng, IgParams { mu: 1.0, lam: -1.0 }).is_err());
        let p = IgParams::new(1.0, 1.0).unwrap();
        let xs = draws(15, 1_000_000, |r| draw_inverse_gaussian(r, p).unwrap());
        let (m, se) = tk::mean_se(&xs);
        assert!((m - 1.0).abs() < 3.0 * se);
        let p = IgParams::new(2.0, 1.0).unwrap();
        let xs = draws(16, 1_000_000, |r| draw_inverse_gaussian(r, p).unwrap());
        assert!((tk::variance(&xs) / 8.0 - 1.0).abs() < 0.05);
    }

    #[test]
    fn inverse_gaussian_huge_mean_is_levy() {
        // μ → ∞ limit: λ / Z², so P(X <= x) = 2 (1 - Φ(√(λ/x)))
        let xs = draws(17, 100_000, |r| ig_variate(r, 1e300, 2.0));
        assert!(xs.iter().all(|x| x.is_finite() && *x > 0.0));
        let d = tk::ks_one_sample(&xs, |x| 2.0 * (1.0 - tk::normal_cdf((2.0 / x).sqrt())));
        assert!(d < 0.01, "KS {d}");
    }

    #[test]
    fn inverse_gaussian_equals_gig_minus_half() {
        let p = IgParams::new(2.0, 4.0).unwrap();
        let a = draws(17, 100_000, |r| draw_inverse_gaussian(r, p).unwrap());
        let b = draws(18, 100_000, |r| draw_gig(r, p.as_gig()).unwrap());
        assert!(tk::ks_two_sample(&a, &b) < 0.01);
        // giG(-1/2, 1, 4) = iG(2, 4)
        let g = GigParams::new(-0.5, 1.0, 4.0).unwrap();
        assert_eq!(g, p.as_gig());
        for &y in &[0.5, 1.0, 5.0] {
            let d = gig_log_pdf(y, g).unwrap().ln() - ig_log_pdf(y, p).unwrap().ln();
            assert!(d.abs() < 1e-10, "y = {y}: {d}");
        }
    }

    #[test]
    fn gig_validation() {
        let mut rng = RngStream::new(19, 0);
        assert!(draw_gig(&mut rng, GigParams { lambda: -1.0, rho: 1.0, chi: 0.0 }).is_err());
        assert!(draw_gig(&mut rng, GigParams { lambda: 0.0, rho: 1.0, chi: 0.0 }).is_err());
        assert!(draw_gig(&mut rng, GigParams { lambda: 1.0, rho: 0.0, chi: 1.0 }).is_err());
        assert!(draw_gig(&mut rng, GigParams { lambda: 1.0, rho: 1.0, chi: -1.0 }).is_err());
        assert!(gig_log_pdf(0.0, GigParams { lambda: 1.0, rho: 1.0, chi: 1.0 }).is_err());
    }

    #[test]
    fn gig_chi_zero_is_gamma() {
        let p = GigParams::new(3.0, 2.0, 0.0).unwrap();
        let xs = draws(20, 1_000_000, |r| draw_gig(r, p).unwrap());
        let (m, se) = tk::mean_se(&xs);
        assert!((m - 3.0).abs() < 4.0 * se);
        assert!((tk::variance(&xs) - 3.0).abs() < 4.0 * tk::variance_se(&xs));
    }

    #[test]
    fn gig_mean_matches_bessel_ratio() {
        // λ near -1 with tiny χ (the φ-step regime), plus the τ-step regime.
        let cases = [
            (-0.9, 1.0, 0.02),
            (-0.9999, 1.0, 2e-10),
            (-0.5, 1.0, 4.0),
            (0.0, 1.0, 0.5),
            (1.5, 2.0, 1e-6),
            (-99.0, 1.0, 350.0),
            (-999.0, 1.0, 1e-6),
            (999.0, 1.0, 1e-6),
        ];
        for (i, &(l, r, c)) in cases.iter().enumerate() {
            let p = GigParams::new(l, r, c).unwrap();
            let xs = draws(21 + i as u64, 400_000, |rng| draw_gig(rng, p).unwrap());
            let (m, se) = tk::mean_se(&xs);
            let target = p.mean();
            assert!((m - target).abs() < 4.0 * se, "{p:?}: {m} vs {target} (se {se})");
        }
    }

    #[test]
    fn gig_bessel_ratio_mean_cross_checked_by_quadrature() {
        let p = GigParams::new(-0.9, 1.0, 0.02).unwrap();
        let mean = tk::integrate_positive_log(
            |y| y * gig_log_pdf(y, p).unwrap().exp(),
            1e-14,
            200.0,
            1e-12,
        );
        assert!((mean - p.mean()).abs() < 1e-8 * p.mean());
    }

    #[test]
    fn gig_pdf_normalized() {
        for &(l, r, c) in &[(-0.5, 1.0, 4.0), (-0.99, 1.0, 1e-6), (2.5, 4.0, 100.0), (3.0, 2.0, 0.0)] {
            let p = GigParams::new(l, r, c).unwrap();
            let total = tk::integrate_positive_log(|y| gig_log_pdf(y, p).unwrap().exp(), 1e-40, 1e3, 1e-12);
            assert!((total - 1.0).abs() < 1e-8, "{p:?}: {total}");
        }
    }

    #[test]
    fn gig_pdf_ratio_identity() {
        let p = GigParams::new(-0.5, 1.3, 4.0).unwrap();
        let lhs = gig_log_pdf(2.0, p).unwrap().ln() - gig_log_pdf(1.0, p).unwrap().ln();
        let rhs = (p.lambda - 1.0) * 2f64.ln() - 0.5 * (p.rho * (2.0 - 1.0) + p.chi * (0.5 - 1.0));
        assert!((lhs - rhs).abs() < 1e-14);
    }

    #[test]
    fn samplers_reproducible() {
        let p = GigParams::new(-0.99, 1.0, 1e-6).unwrap();
        let a = draws(40, 100, |r| draw_gig(r, p).unwrap());
        let b = draws(40, 100, |r| draw_gig(r, p).unwrap());
        assert_eq!(a, b);
    }
}
