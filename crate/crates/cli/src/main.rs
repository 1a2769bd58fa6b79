//! `dlshrink`: simulation studies, file fits and prior diagnostics.
//!
//! Exit status is 0 on success, 1 for invalid input or configuration, and
//! 2 for runtime failures (including any failed chain in `simulate`).

mod config;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use dlshrink::harness::{
    Design, FitOptions, Method, PriorCheckOptions, Scenario, fit_file, prior_check, run_scenario,
};
use dlshrink::{ChainConfig, Error};

use config::FileConfig;

#[derive(Parser)]
#[command(name = "dlshrink", version, about = "Dirichlet-Laplace shrinkage for sparse normal means")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Replicated squared-error study on simulated data.
    Simulate(SimulateArgs),
    /// Fit a prior to the `z` column of an `id,z` CSV file.
    Fit(FitArgs),
    /// Write the DL marginal density grid and tail-mass estimates.
    PriorCheck(PriorCheckArgs),
}

#[derive(Args)]
struct ChainArgs {
    /// Total Gibbs iterations [default: 10000].
    #[arg(long)]
    iters: Option<usize>,
    /// Discarded initial iterations [default: 5000].
    #[arg(long)]
    burnin: Option<usize>,
    /// Keep every k-th post-burn-in draw [default: 1].
    #[arg(long)]
    thin: Option<usize>,
    /// Base random seed [default: 0].
    #[arg(long)]
    seed: Option<u64>,
}

impl ChainArgs {
    fn resolve(&self, file: &FileConfig) -> ChainConfig {
        let d = ChainConfig::default();
        ChainConfig {
            iterations: self.iters.or(file.iters).unwrap_or(d.iterations),
            burn_in: self.burnin.or(file.burnin).unwrap_or(d.burn_in),
            thin: self.thin.or(file.thin).unwrap_or(d.thin),
            seed: self.seed.or(file.seed).unwrap_or(d.seed),
            ..d
        }
    }
}

#[derive(Args)]
struct SimulateArgs {
    /// TOML settings file; flags take precedence over it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Dimension [default: 100].
    #[arg(long)]
    n: Option<usize>,
    /// Number of nonzero means, placed first [default: 5].
    #[arg(long)]
    q: Option<usize>,
    /// Value A of the nonzero means [default: 7].
    #[arg(long)]
    signal: Option<f64>,
    /// `constant` (q entries at A) or `ten-then` (10 at 10, then 90 at A) [default: constant].
    #[arg(long)]
    design: Option<String>,
    /// Replicate datasets [default: 20].
    #[arg(long)]
    replicates: Option<u32>,
    /// Comma-separated: dl (a = 1/n), dl_a (a from --a), dl_<value>, dl_grid, bl, hs [default: dl,bl,hs].
    #[arg(long, value_delimiter = ',')]
    methods: Option<Vec<String>>,
    #[command(flatten)]
    chain: ChainArgs,
    /// Output directory for report.json and summary.csv.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Fixed concentration used by the `dl_a` method [default: 0.5].
    #[arg(long)]
    a: Option<f64>,
    /// Comma-separated support of a for dl_grid [default: 10(k+1)/n up to 1/2].
    #[arg(long, value_delimiter = ',')]
    a_grid: Option<Vec<f64>>,
    /// Worker threads; the SHRINKAGE_THREADS variable overrides this.
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Args)]
struct FitArgs {
    /// TOML settings file; flags take precedence over it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Input CSV with header `id,z`.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Output JSON path.
    #[arg(long)]
    out: Option<PathBuf>,
    /// dl, dl_a, dl_<value>, dl_grid, bl or hs [default: dl_grid, or dl_a when --a is given].
    #[arg(long)]
    method: Option<String>,
    #[command(flatten)]
    chain: ChainArgs,
    /// Fixed concentration for the dl_a method.
    #[arg(long)]
    a: Option<f64>,
    /// Comma-separated support of a for dl_grid.
    #[arg(long, value_delimiter = ',')]
    a_grid: Option<Vec<f64>>,
    /// Also write the prior marginal density at the fitted a to this CSV.
    #[arg(long)]
    density_grid: Option<PathBuf>,
}

#[derive(Args)]
struct PriorCheckArgs {
    /// TOML settings file; flags take precedence over it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Concentration [default: 1/n].
    #[arg(long)]
    a: Option<f64>,
    /// Dimension [default: 100].
    #[arg(long)]
    n: Option<usize>,
    /// Comma-separated tail thresholds [default: 0.001,0.01,0.1,1].
    #[arg(long, value_delimiter = ',')]
    deltas: Option<Vec<f64>>,
    /// Monte Carlo draws per threshold [default: 100000].
    #[arg(long)]
    draws: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory for density.csv and tail.json.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_method(token: &str, a: Option<f64>, grid: &Option<Vec<f64>>) -> Result<Method, Error> {
    let t = token.trim().to_ascii_lowercase().replace('-', "_");
    let m = match t.as_str() {
        "dl_a" => Method::DlFixed(a.unwrap_or(0.5)),
        _ => token.parse()?,
    };
    let m = match m {
        Method::DlGrid(None) => Method::DlGrid(grid.clone()),
        other => other,
    };
    m.validate()?;
    Ok(m)
}

fn simulate(args: SimulateArgs) -> Result<ExitCode, Error> {
    let file = FileConfig::load(args.config.as_deref())?;
    let n = args.n.or(file.n).unwrap_or(100);
    let signal = args.signal.or(file.signal).unwrap_or(7.0);
    let design = match args.design.or(file.design.clone()).as_deref().unwrap_or("constant") {
        "constant" => Design::Constant {
            q: args.q.or(file.q).unwrap_or(5),
            signal,
        },
        "ten-then" | "ten_then" => Design::ten_then(signal),
        other => return Err(Error::Validation(format!("unknown design '{other}'"))),
    };
    let a = args.a.or(file.a);
    let grid = args.a_grid.or(file.a_grid.clone());
    let tokens = args
        .methods
        .or(file.methods.clone())
        .unwrap_or_else(|| vec!["dl".into(), "bl".into(), "hs".into()]);
    let methods = tokens
        .iter()
        .filter(|t| !t.trim().is_empty())
        .map(|t| parse_method(t, a, &grid))
        .collect::<Result<Vec<_>, _>>()?;
    let chain = args.chain.resolve(&file);
    let scenario = Scenario {
        n,
        design,
        replicates: args.replicates.or(file.replicates).unwrap_or(20),
        methods,
        base_seed: chain.seed,
        chain,
    };
    let threads = config::threads(args.threads, file.threads)?;
    let out = args.out.or(file.out.clone());

    let start = Instant::now();
    let report = run_scenario(&scenario, threads)?;
    eprintln!("simulate: {:.1}s", start.elapsed().as_secs_f64());
    let csv = report.to_csv()?;
    print!("{csv}");
    if let Some(dir) = out {
        std::fs::create_dir_all(&dir).map_err(|e| Error::Io { path: dir.clone(), source: e })?;
        write(&dir.join("report.json"), report.to_json()?.as_bytes())?;
        write(&dir.join("summary.csv"), csv.as_bytes())?;
    }
    for r in &report.replicates {
        for m in &r.results {
            if let Some(e) = &m.error {
                eprintln!("replicate {} {}: {e}", r.replicate, m.method);
            }
        }
    }
    Ok(if report.failures() == 0 { ExitCode::SUCCESS } else { ExitCode::from(2) })
}

fn fit(args: FitArgs) -> Result<ExitCode, Error> {
    let file = FileConfig::load(args.config.as_deref())?;
    let input = args
        .input
        .or(file.input.clone())
        .ok_or_else(|| Error::Validation("--input is required".into()))?;
    let out = args
        .out
        .or(file.out.clone())
        .ok_or_else(|| Error::Validation("--out is required".into()))?;
    let a = args.a.or(file.a);
    let grid = args.a_grid.or(file.a_grid.clone());
    let token = args
        .method
        .or(file.method.clone())
        .unwrap_or_else(|| if a.is_some() { "dl_a".into() } else { "dl_grid".into() });
    let opts = FitOptions {
        method: parse_method(&token, a, &grid)?,
        chain: args.chain.resolve(&file),
        density_grid: args.density_grid.or(file.density_grid.clone()),
    };
    let start = Instant::now();
    let report = fit_file(&input, &out, &opts)?;
    eprintln!(
        "fit: n = {}, M = {}, {:.1}s",
        report.n,
        report.selection.m_hat,
        start.elapsed().as_secs_f64()
    );
    Ok(ExitCode::SUCCESS)
}

fn prior_check_cmd(args: PriorCheckArgs) -> Result<ExitCode, Error> {
    let file = FileConfig::load(args.config.as_deref())?;
    let out = args
        .out
        .or(file.out.clone())
        .ok_or_else(|| Error::Validation("--out is required".into()))?;
    let opts = PriorCheckOptions {
        n: args.n.or(file.n).unwrap_or(100),
        a: args.a.or(file.a),
        deltas: args
            .deltas
            .or(file.deltas.clone())
            .unwrap_or_else(|| vec![0.001, 0.01, 0.1, 1.0]),
        draws: args.draws.or(file.draws).unwrap_or(100_000),
        seed: args.seed.or(file.seed).unwrap_or(0),
    };
    let report = prior_check(&opts, &out)?;
    for t in &report.tails {
        println!("delta {}: {} (se {})", t.delta, t.estimate, t.se);
    }
    Ok(ExitCode::SUCCESS)
}

fn write(path: &std::path::Path, bytes: &[u8]) -> Result<(), Error> {
    std::fs::write(path, bytes).map_err(|e| Error::Io {
        path: path.to_path_buf(),
        source: e,
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // usage errors are configuration errors
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let result = match cli.command {
        Command::Simulate(a) => simulate(a),
        Command::Fit(a) => fit(a),
        Command::PriorCheck(a) => prior_check_cmd(a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
