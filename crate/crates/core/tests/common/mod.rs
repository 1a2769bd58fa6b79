//! Oracles shared by the Gibbs tests and the acceptance run.
#![allow(dead_code)]

use dlshrink::gibbs::{DlState, dl_sweep};
use dlshrink::prior::{DlPriorSpec, sample_prior_hierarchical};
use dlshrink::RngStream;
use dlshrink_testkit as tk;

/// Mean and batch-means standard error of an autocorrelated series.
pub fn batch_mean_se(xs: &[f64], batches: usize) -> (f64, f64) {
    let size = xs.len() / batches;
    let means: Vec<f64> = xs
        .chunks_exact(size)
        .map(|c| c.iter().sum::<f64>() / size as f64)
        .collect();
    tk::mean_se(&means)
}

/// Prior draws vs the successive-conditional simulator
/// `y ~ N(θ, I)`, then one Gibbs sweep.
pub fn geweke(spec: &DlPriorSpec, iters: usize, seed: u64) -> Vec<(String, f64)> {
    let n = spec.n;
    let stats = |s: &DlState| -> Vec<f64> {
        vec![
            s.theta[0].abs(),
            s.theta[0].abs().min(2.0).powi(2),
            s.tau.min(20.0),
            s.phi[0],
            s.phi[0].powi(2),
            s.a,
        ]
    };
    let names = ["|theta_1|", "min(|theta_1|,2)^2", "min(tau,20)", "phi_1", "phi_1^2", "a"];
    let k = names.len();

    let mut rng = RngStream::new(seed, 1);
    let mut forward: Vec<Vec<f64>> = vec![Vec::with_capacity(iters); k];
    for _ in 0..iters {
        let a = draw_a(&mut rng, spec);
        let p = sample_prior_hierarchical(&mut rng, spec, a).unwrap();
        let s = DlState { theta: p.theta, psi: vec![1.0; n], phi: p.phi, tau: p.tau, a };
        for (c, v) in forward.iter_mut().zip(stats(&s)) {
            c.push(v);
        }
    }

    let mut rng = RngStream::new(seed, 2);
    let a = draw_a(&mut rng, spec);
    let p = sample_prior_hierarchical(&mut rng, spec, a).unwrap();
    let mut s = DlState { theta: p.theta, psi: vec![1.0; n], phi: p.phi, tau: p.tau, a };
    let mut chain: Vec<Vec<f64>> = vec![Vec::with_capacity(iters); k];
    let mut y = vec![0.0; n];
    for _ in 0..iters {
        for (yj, t) in y.iter_mut().zip(&s.theta) {
            *yj = t + rng.std_normal();
        }
        dl_sweep(&mut rng, &mut s, &y, spec, 1e-12).unwrap();
        for (c, v) in chain.iter_mut().zip(stats(&s)) {
            c.push(v);
        }
    }

    names
        .iter()
        .zip(forward.iter().zip(&chain))
        .map(|(name, (f, c))| {
            let (mf, sf) = tk::mean_se(f);
            let (mc, sc) = batch_mean_se(c, 200);
            let z = if sf + sc == 0.0 { 0.0 } else { (mf - mc) / sf.hypot(sc) };
            (name.to_string(), z)
        })
        .collect()
}

pub fn draw_a(rng: &mut RngStream, spec: &DlPriorSpec) -> f64 {
    match &spec.a_mode {
        dlshrink::AMode::Fixed(a) => *a,
        dlshrink::AMode::Grid(g) => g[((rng.uniform() * g.len() as f64) as usize).min(g.len() - 1)],
    }
}

/// Density of φ_1 for n = 2 given θ, up to a constant:
/// `φ^{a-1} (1-φ)^{a-1} ∫ t^{2a-1} e^{-t/2} (φ t)^{-1} ((1-φ) t)^{-1}
///   exp(-|θ_1|/(φ t) - |θ_2|/((1-φ) t)) dt`.
pub fn phi1_density(phi: f64, a: f64, t1: f64, t2: f64) -> f64 {
    let c = t1 / phi + t2 / (1.0 - phi);
    let pre = (a - 2.0) * (phi.ln() + (1.0 - phi).ln());
    tk::integrate_positive_log(
        |t| (pre + (2.0 * a - 3.0) * t.ln() - 0.5 * t - c / t).exp(),
        1e-12,
        1e4,
        1e-13,
    )
}

/// Tabulated CDF of φ_1 | θ for n = 2.
pub fn phi1_cdf(a: f64, t1: f64, t2: f64) -> tk::TabulatedCdf {
    let nodes: Vec<f64> = (0..=2000).map(|i| 1e-9 + (1.0 - 2e-9) * i as f64 / 2000.0).collect();
    tk::TabulatedCdf::from_pdf(|p| phi1_density(p, a, t1, t2), &nodes, 1e-12).0
}
