//! Log-scale special functions: `ln Γ`, `ln K_ν` and log-sum-exp.
//!
//! Densities in this crate are evaluated on the log scale throughout. With a
//! Dirichlet concentration as small as `1/n`, `Γ(a)` is of order `n` and the
//! Bessel factor `K_ν(x) ~ x^{-|ν|}` near the origin; either overflows long
//! before the density itself stops being meaningful.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A quantity stored as its natural logarithm.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
#[repr(transparent)]
pub struct LogValue(pub f64);

impl LogValue {
    #[inline]
    pub fn ln(self) -> f64 {
        self.0
    }

    #[inline]
    pub fn exp(self) -> f64 {
        self.0.exp()
    }
}

impl From<LogValue> for f64 {
    fn from(v: LogValue) -> f64 {
        v.0
    }
}

const LANCZOS_G: f64 = 607.0 / 128.0;
const LANCZOS_COEF: [f64; 15] = [
    0.999_999_999_999_997_1,
    57.156_235_665_862_92,
    -59.597_960_355_475_49,
    14.136_097_974_741_747,
    -0.491_913_816_097_620_2,
    3.399_464_998_481_189e-5,
    4.652_362_892_704_858e-5,
    -9.837_447_530_487_956e-5,
    1.580_887_032_249_125e-4,
    -2.102_644_417_241_049e-4,
    2.174_396_181_152_126_4e-4,
    -1.643_181_065_367_639e-4,
    8.441_822_398_385_275e-5,
    -2.619_083_840_158_141e-5,
    3.689_918_265_953_162_5e-6,
];

/// Unchecked `ln Γ(x)` for `x > 0`.
pub(crate) fn ln_gamma(x: f64) -> f64 {
    if x < 0.5 {
        // Γ(x) = Γ(x + 1) / x keeps full relative accuracy as x → 0.
        return ln_gamma(x + 1.0) - x.ln();
    }
    let z = x - 1.0;
    let mut acc = LANCZOS_COEF[0];
    for (k, c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        acc += c / (z + k as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + acc.ln()
}

/// `ln Γ(a)` for `a > 0`.
pub fn log_gamma_fn(a: f64) -> Result<LogValue> {
    if !(a > 0.0) || !a.is_finite() {
        return Err(Error::domain("log_gamma_fn", format!("a = {a} must be positive and finite")));
    }
    Ok(LogValue(ln_gamma(a)))
}

/// `ln Σ exp(v_i)` computed with a max shift. `values` are already logs.
pub fn log_sum_exp(values: &[f64]) -> Result<LogValue> {
    if values.is_empty() {
        return Err(Error::domain("log_sum_exp", "empty input"));
    }
    Ok(LogValue(lse(values)))
}

#[inline]
pub(crate) fn lse(values: &[f64]) -> f64 {
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !max.is_finite() {
        return max;
    }
    let sum: f64 = values.iter().map(|v| (v - max).exp()).sum();
    max + sum.ln()
}

// Chebyshev fits of the Temme auxiliary functions
//   g1(μ) = (1/Γ(1-μ) - 1/Γ(1+μ)) / (2μ),  g2(μ) = (1/Γ(1-μ) + 1/Γ(1+μ)) / 2
// on |μ| <= 1/2, evaluated at 4|μ| - 1.
const TEMME_G1: [f64; 14] = [
    -1.145_164_083_662_683,
    0.006_360_853_113_470_843,
    0.001_862_451_930_072_068_5,
    0.000_152_833_085_873_453_5,
    0.000_017_017_464_011_802_04,
    -6.459_750_292_334_725e-7,
    -5.181_984_843_251_938e-8,
    4.518_909_289_485_818e-10,
    3.243_322_737_102_087e-11,
    6.830_943_402_494_752e-13,
    2.835_350_275_517_21e-14,
    -7.988_390_576_932_359e-16,
    -3.372_667_730_077_195e-17,
    -3.658_633_480_921_052e-20,
];
const TEMME_G2: [f64; 15] = [
    1.882_645_524_949_671_8,
    -0.077_490_658_396_167_52,
    -0.018_256_714_847_324_93,
    0.000_633_803_020_907_489_6,
    0.000_076_229_054_350_872_9,
    -9.550_164_756_172_044e-7,
    -8.892_726_810_788_635e-8,
    -1.952_133_477_231_961_4e-9,
    -9.400_305_273_588_516e-11,
    4.687_513_384_953_239e-12,
    2.265_853_574_692_576e-13,
    -1.172_550_969_848_801_5e-15,
    -7.044_133_820_024_522e-17,
    -2.437_787_831_010_769_4e-18,
    -7.522_524_321_825_39e-20,
];

fn chebyshev(coef: &[f64], y: f64) -> f64 {
    let y2 = 2.0 * y;
    let (mut d, mut dd) = (0.0, 0.0);
    for &c in coef[1..].iter().rev() {
        let tmp = d;
        d = y2 * d - dd + c;
        dd = tmp;
    }
    y * d - dd + 0.5 * coef[0]
}

/// Temme's series for |μ| <= 1/2, x < 2. Returns `(ln K_μ(x), K_{μ+1}/K_μ)`.
fn temme_series(mu: f64, x: f64) -> (f64, f64) {
    let g1 = chebyshev(&TEMME_G1, 4.0 * mu.abs() - 1.0);
    let g2 = chebyshev(&TEMME_G2, 4.0 * mu.abs() - 1.0);
    let inv_gamma_1mmu = 1.0 / (g2 + mu * g1);
    let inv_gamma_1pmu = 1.0 / (g2 - mu * g1);

    let half_x = 0.5 * x;
    let ln_half_x = half_x.ln();
    let half_x_mu = (mu * ln_half_x).exp();
    let pi_mu = PI * mu;
    let sigma = -mu * ln_half_x;
    let sinrat = if pi_mu.abs() < f64::EPSILON { 1.0 } else { pi_mu / pi_mu.sin() };
    let sinhrat = if sigma.abs() < f64::EPSILON { 1.0 } else { sigma.sinh() / sigma };

    let mut fk = sinrat * (sigma.cosh() * g1 - sinhrat * ln_half_x * g2);
    let mut pk = 0.5 / half_x_mu * inv_gamma_1pmu;
    let mut qk = 0.5 * half_x_mu * inv_gamma_1mmu;
    let mut ck = 1.0;
    let mut sum0 = fk;
    let mut sum1 = pk;
    for k in 1..20_000 {
        let k = k as f64;
        fk = (k * fk + pk + qk) / (k * k - mu * mu);
        ck *= half_x * half_x / k;
        pk /= k - mu;
        qk /= k + mu;
        let hk = -k * fk + pk;
        let del0 = ck * fk;
        sum0 += del0;
        sum1 += ck * hk;
        if del0.abs() < 0.5 * sum0.abs() * f64::EPSILON {
            break;
        }
    }
    (sum0.ln(), sum1 * 2.0 / x / sum0)
}

/// Steed's continued fraction (CF2) for |μ| <= 1/2, x >= 2.
/// Returns `(ln K_μ(x), K_{μ+1}/K_μ)`.
fn steed_cf2(mu: f64, x: f64) -> (f64, f64) {
    let mut bi = 2.0 * (1.0 + x);
    let mut di = 1.0 / bi;
    let mut delhi = di;
    let mut hi = di;
    let mut qi = 0.0;
    let mut qip1 = 1.0;
    let mut ai = -(0.25 - mu * mu);
    let a1 = ai;
    let mut ci = -ai;
    let mut bqi = -ai;
    let mut s = 1.0 + bqi * delhi;
    for i in 2..20_000 {
        ai -= 2.0 * (i - 1) as f64;
        ci = -ai * ci / i as f64;
        let tmp = (qi - bi * qip1) / ai;
        qi = qip1;
        qip1 = tmp;
        bqi += ci * qip1;
        bi += 2.0;
        di = 1.0 / (bi + ai * di);
        delhi = (bi * di - 1.0) * delhi;
        hi += delhi;
        let dels = bqi * delhi;
        s += dels;
        if (dels / s).abs() < f64::EPSILON {
            break;
        }
    }
    hi *= -a1;
    let ln_k = 0.5 * (PI / (2.0 * x)).ln() - s.ln() - x;
    (ln_k, (mu + x + 0.5 - hi) / x)
}

/// Orders at or above this use the uniform large-order expansion, whose
/// truncation after four correction terms costs under 1e-12 in `ln K`.
const DEBYE_MIN_ORDER: f64 = 100.0;

/// `ln K_ν(νz) ≈ ½ ln(π / 2ν) - ¼ ln(1 + z²) - νη + ln Σ_k (-1)^k u_k(t) / ν^k`
/// with `t = 1/√(1 + z²)`, `η = √(1 + z²) + ln(z / (1 + √(1 + z²)))`.
fn debye_ln_k(nu: f64, x: f64) -> f64 {
    let z = x / nu;
    let r = z.hypot(1.0);
    let t = 1.0 / r;
    let t2 = t * t;
    // ln(z / (1 + r)) without cancellation for small z
    let eta = r + (z / (1.0 + r)).ln();
    let u1 = t * (3.0 - 5.0 * t2) / 24.0;
    let u2 = t2 * (81.0 + t2 * (-462.0 + t2 * 385.0)) / 1152.0;
    let u3 = t * t2 * (30375.0 + t2 * (-369603.0 + t2 * (765765.0 - t2 * 425425.0))) / 414720.0;
    let u4 = t2
        * t2
        * (4465125.0 + t2 * (-94121676.0 + t2 * (349922430.0 + t2 * (-446185740.0 + t2 * 185910725.0))))
        / 39813120.0;
    let inv = 1.0 / nu;
    let series = 1.0 - inv * (u1 - inv * (u2 - inv * (u3 - inv * u4)));
    0.5 * (std::f64::consts::PI / (2.0 * nu)).ln() - 0.5 * r.ln() - nu * eta + series.ln()
}

/// Unchecked `ln K_ν(x)` for `x > 0`.
pub(crate) fn ln_bessel_k(nu: f64, x: f64) -> f64 {
    let nu = nu.abs();
    if nu >= DEBYE_MIN_ORDER {
        return debye_ln_k(nu, x);
    }
    let steps = (nu + 0.5).floor();
    let mu = nu - steps;
    // Series below x = 2, continued fraction above.
    let (mut ln_k, mut ratio) = if x < 2.0 { temme_series(mu, x) } else { steed_cf2(mu, x) };
    // Upward recurrence on the ratio r_k = K_{μ+k+1} / K_{μ+k}, which stays
    // finite where K itself would overflow.
    let steps = steps as usize;
    for k in 0..steps {
        ln_k += ratio.ln();
        if k + 1 < steps {
            ratio = 2.0 * (mu + (k + 1) as f64) / x + 1.0 / ratio;
        }
    }
    ln_k
}

/// `ln K_ν(x)`, the modified Bessel function of the second kind, for `x > 0`
/// and any real order (`K_{-ν} = K_ν`).
pub fn log_bessel_k(nu: f64, x: f64) -> Result<LogValue> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain("log_bessel_k", format!("x = {x} must be positive and finite")));
    }
    if !nu.is_finite() {
        return Err(Error::domain("log_bessel_k", format!("order {nu} is not finite")));
    }
    Ok(LogValue(ln_bessel_k(nu, x)))
}
