use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{Method, stream_id};
use crate::error::{Error, Result};
use crate::gibbs::ChainConfig;
use crate::inference::{MIN_DRAWS, squared_error, summarize};
use crate::rng::RngStream;

/// Placement of the nonzero means.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Design {
    /// The first `q` entries equal `signal`.
    Constant { q: usize, signal: f64 },
    /// Consecutive runs `(count, value)` from index 0; the rest are zero.
    Blocks { blocks: Vec<(usize, f64)> },
}

impl Design {
    /// Ten entries at 10, then ninety at `signal`.
    pub fn ten_then(signal: f64) -> Self {
        Design::Blocks {
            blocks: vec![(10, 10.0), (90, signal)],
        }
    }

    pub fn theta0(&self, n: usize) -> Vec<f64> {
        let mut t = vec![0.0; n];
        let blocks = match self {
            Design::Constant { q, signal } => vec![(*q, *signal)],
            Design::Blocks { blocks } => blocks.clone(),
        };
        let mut at = 0;
        for (count, value) in blocks {
            for v in t.iter_mut().skip(at).take(count) {
                *v = value;
            }
            at += count;
        }
        t
    }

    fn validate(&self, n: usize) -> Result<()> {
        let (total, values): (usize, Vec<f64>) = match self {
            Design::Constant { q, signal } => (*q, vec![*signal]),
            Design::Blocks { blocks } => (blocks.iter().map(|b| b.0).sum(), blocks.iter().map(|b| b.1).collect()),
        };
        if total >= n {
            return Err(Error::validation(format!("{total} signals do not fit below n = {n}")));
        }
        if values.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
            return Err(Error::validation("signal values must be positive and finite"));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub n: usize,
    pub design: Design,
    pub replicates: u32,
    pub methods: Vec<Method>,
    /// Chain settings; `seed` and `stream` are replaced per replicate and method.
    pub chain: ChainConfig,
    pub base_seed: u64,
}

impl Scenario {
    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::validation("n must be positive"));
        }
        self.design.validate(self.n)?;
        if self.replicates == 0 {
            return Err(Error::validation("replicates must be positive"));
        }
        self.chain.validate()?;
        if self.chain.retained() < MIN_DRAWS {
            return Err(Error::validation(format!(
                "chain keeps {} draws; at least {MIN_DRAWS} are needed",
                self.chain.retained()
            )));
        }
        self.methods.iter().try_for_each(Method::validate)
    }

    fn chain_for(&self, replicate: u32, method: usize) -> ChainConfig {
        ChainConfig {
            seed: self.base_seed,
            stream: stream_id(replicate, 1 + method as u32),
            ..self.chain.clone()
        }
    }
}

/// `(y, θ_0)` with `y = θ_0 + N(0, I)`.
pub fn generate_data(rng: &mut RngStream, scenario: &Scenario) -> Result<(Vec<f64>, Vec<f64>)> {
    scenario.design.validate(scenario.n)?;
    let theta0 = scenario.design.theta0(scenario.n);
    let y = theta0.iter().map(|t| t + rng.std_normal()).collect();
    Ok((y, theta0))
}

/// Equality ignores `wall_seconds`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MethodResult {
    pub method: Method,
    /// Squared error of the posterior median; absent when the chain failed.
    pub squared_error: Option<f64>,
    pub min_ess: Option<f64>,
    pub error: Option<String>,
    /// Not serialized, so that reports are byte-reproducible.
    #[serde(skip)]
    pub wall_seconds: f64,
}

impl PartialEq for MethodResult {
    fn eq(&self, o: &Self) -> bool {
        self.method == o.method
            && self.squared_error == o.squared_error
            && self.min_ess == o.min_ess
            && self.error == o.error
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReplicateReport {
    pub replicate: u32,
    pub results: Vec<MethodResult>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MethodSummary {
    pub method: Method,
    pub mean_squared_error: Option<f64>,
    /// Monte Carlo standard error of the mean over replicates.
    pub mc_se: Option<f64>,
    pub completed: usize,
    pub failed: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScenarioReport {
    pub scenario: Scenario,
    pub methods: Vec<MethodSummary>,
    pub replicates: Vec<ReplicateReport>,
}

impl ScenarioReport {
    pub fn failures(&self) -> usize {
        self.methods.iter().map(|m| m.failed).sum()
    }

    pub fn summary(&self, method: &Method) -> Option<&MethodSummary> {
        self.methods.iter().find(|m| &m.method == method)
    }

    pub fn to_json(&self) -> Result<String> {
        super::to_json(self)
    }

    /// One row per method: `method,mean_squared_error,mc_se,completed,failed`.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let ser = |e: csv::Error| Error::Serialize(e.to_string());
        w.write_record(["method", "mean_squared_error", "mc_se", "completed", "failed"])
            .map_err(ser)?;
        let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        for m in &self.methods {
            w.write_record([
                m.method.to_string(),
                opt(m.mean_squared_error),
                opt(m.mc_se),
                m.completed.to_string(),
                m.failed.to_string(),
            ])
            .map_err(ser)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Serialize(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::Serialize(e.to_string()))
    }
}

fn run_replicate(scenario: &Scenario, r: u32) -> ReplicateReport {
    let mut rng = RngStream::new(scenario.base_seed, stream_id(r, 0));
    let (y, theta0) = generate_data(&mut rng, scenario).expect("scenario validated");
    let results = scenario
        .methods
        .iter()
        .enumerate()
        .map(|(m, method)| {
            let start = Instant::now();
            let fitted = method
                .run(&y, &scenario.chain_for(r, m))
                .and_then(|chain| summarize(&chain))
                .and_then(|s| Ok((squared_error(&s.median, &theta0)?, s.min_ess())));
            let wall_seconds = start.elapsed().as_secs_f64();
            match fitted {
                Ok((se, ess)) => MethodResult {
                    method: method.clone(),
                    squared_error: Some(se),
                    min_ess: Some(ess),
                    error: None,
                    wall_seconds,
                },
                Err(e) => MethodResult {
                    method: method.clone(),
                    squared_error: None,
                    min_ess: None,
                    error: Some(e.to_string()),
                    wall_seconds,
                },
            }
        })
        .collect();
    ReplicateReport { replicate: r, results }
}

/// Runs every replicate on a pool of `threads` workers (rayon's default
/// when `None`). Reports are ordered by replicate index, and a failed chain
/// is recorded in its replicate without stopping the others.
pub fn run_scenario(scenario: &Scenario, threads: Option<usize>) -> Result<ScenarioReport> {
    scenario.validate()?;
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = threads {
        builder = builder.num_threads(t.max(1));
    }
    let pool = builder
        .build()
        .map_err(|e| Error::validation(format!("thread pool: {e}")))?;
    let replicates: Vec<ReplicateReport> = pool.install(|| {
        (0..scenario.replicates)
            .into_par_iter()
            .map(|r| run_replicate(scenario, r))
            .collect()
    });

    let methods = scenario
        .methods
        .iter()
        .enumerate()
        .map(|(m, method)| {
            let errs: Vec<f64> = replicates.iter().filter_map(|r| r.results[m].squared_error).collect();
            let k = errs.len();
            let mean = (k > 0).then(|| errs.iter().sum::<f64>() / k as f64);
            let mc_se = (k > 1).then(|| {
                let mu = mean.unwrap();
                (errs.iter().map(|e| (e - mu).powi(2)).sum::<f64>() / ((k - 1) * k) as f64).sqrt()
            });
            MethodSummary {
                method: method.clone(),
                mean_squared_error: mean,
                mc_se,
                completed: k,
                failed: replicates.len() - k,
            }
        })
        .collect();
    Ok(ScenarioReport {
        scenario: scenario.clone(),
        methods,
        replicates,
    })
}

/// A prostate-like screening vector of length 6033: 5933 `N(0, 1)` nulls
/// and 100 signals `N(±4, 1)` at every 60th index with alternating signs.
/// Returns the values and the signal indices.
pub fn prostate_like(seed: u64) -> (Vec<f64>, Vec<usize>) {
    let mut rng = RngStream::new(seed, 0);
    let signals: Vec<usize> = (0..100).map(|k| 60 * k).collect();
    let mut z: Vec<f64> = (0..6033).map(|_| rng.std_normal()).collect();
    for (k, &j) in signals.iter().enumerate() {
        z[j] += if k % 2 == 0 { 4.0 } else { -4.0 };
    }
    (z, signals)
}
