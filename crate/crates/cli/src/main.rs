//! `minlab`: command-line driver for the contraction experiments.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use commands::Failure;
use config::RunConfig;

#[derive(Parser)]
#[command(name = "minlab", version, about = "Backward minimizers and contraction diagnostics on the circle")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

/// Overrides applied on top of the config file.
#[derive(Args, Default)]
pub struct Common {
    /// Flat `key = value` config file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true)]
    samples: Option<String>,
    #[arg(long, global = true)]
    grid: Option<String>,
    /// Coefficient scale; keeps the configured distribution family.
    #[arg(long, global = true)]
    sigma: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    b: Option<String>,
    /// `kicked` or `white:P`.
    #[arg(long, global = true)]
    mode: Option<String>,
    /// Inclusive range `A..B`.
    #[arg(long, global = true)]
    horizons: Option<String>,
    #[arg(long = "t-halving", global = true)]
    t_halving: Option<String>,
    /// Basis tokens, e.g. `fourier:1c,1s`.
    #[arg(long, global = true)]
    basis: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Mean diameter decay: writes decay.csv and fit.json.
    Decay {
        /// Also write values.csv and omega.csv for sample 0.
        #[arg(long)]
        dump_values: bool,
    },
    /// Refits an existing decay.csv: writes fit.json.
    Fit {
        /// Defaults to `<out>/decay.csv`.
        #[arg(long)]
        input: Option<PathBuf>,
    },
    /// Halving frequency for a fixed gap or a scan over 1..10: writes halving.json.
    Halving,
    /// Distance between the sets of two initial conditions: writes convergence.csv.
    Convergence {
        /// Second initial condition (`zero`, `cos:A`, `sin:A`).
        #[arg(long, default_value = "sin:0.1")]
        psi2: String,
    },
    /// Lyapunov exponent along a backtracked minimizer: writes lyapunov.json.
    Lyapunov {
        #[arg(long, default_value_t = 500)]
        kicks: i64,
        #[arg(long, default_value_t = 0)]
        terminal: usize,
    },
    /// Separation certificate: writes certificate.json.
    Separation {
        #[command(flatten)]
        candidates: Candidates,
        #[arg(long)]
        alpha: Option<f64>,
    },
    /// Embedding check of the basis; exits 1 with a witness on failure.
    Embed,
    /// Solver against exhaustive path enumeration; exits 4 on mismatch.
    Oracle {
        #[arg(long, default_value_t = 16)]
        max_m: usize,
        #[arg(long, default_value_t = 4)]
        max_steps: usize,
        #[arg(long, default_value_t = 50)]
        seeds: u64,
    },
    /// Proof constants for a separation certificate: writes constants.json.
    Constants {
        #[command(flatten)]
        candidates: Candidates,
    },
}

#[derive(Args)]
pub struct Candidates {
    /// Use the three rotated cosines built from `1c` and `1s`.
    #[arg(long)]
    auto3: bool,
    /// Semicolon-separated coefficient vectors, e.g. `1,0;0,1;-1,0`.
    #[arg(long, allow_hyphen_values = true)]
    candidates: Option<String>,
}

fn load(common: &Common) -> Result<RunConfig, Failure> {
    let mut cfg = match &common.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| Failure::Config(format!("{}: {e}", path.display())))?;
            RunConfig::parse(&text).map_err(Failure::Config)?
        }
        None => RunConfig::default(),
    };
    let set = |cfg: &mut RunConfig, key: &str, v: &Option<String>| match v {
        Some(v) => cfg.set(key, v).map_err(Failure::Config),
        None => Ok(()),
    };
    set(&mut cfg, "samples", &common.samples)?;
    set(&mut cfg, "grid", &common.grid)?;
    set(&mut cfg, "b", &common.b)?;
    set(&mut cfg, "mode", &common.mode)?;
    set(&mut cfg, "horizons", &common.horizons)?;
    set(&mut cfg, "t_halving", &common.t_halving)?;
    set(&mut cfg, "basis", &common.basis)?;
    if let Some(seed) = common.seed {
        cfg.seed = seed;
    }
    if let Some(out) = &common.out {
        cfg.out = out.clone();
    }
    if let Some(sigma) = common.sigma {
        if !(sigma.is_finite() && sigma >= 0.0) {
            return Err(Failure::Config("sigma must be finite and >= 0".into()));
        }
        cfg.distribution = cfg.distribution.with_sigma(sigma);
    }
    cfg.validate().map_err(Failure::Config)?;
    Ok(cfg)
}

fn init_threads() -> Result<(), Failure> {
    if let Ok(v) = std::env::var("MINLAB_THREADS") {
        let n: usize = v
            .parse()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| Failure::Config(format!("MINLAB_THREADS must be a positive integer, got '{v}'")))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::Config(e.to_string()))?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    init_threads()?;
    let cfg = load(&cli.common)?;
    match cli.command {
        Command::Decay { dump_values } => commands::decay(&cfg, dump_values),
        Command::Fit { input } => commands::fit(&cfg, input),
        Command::Halving => commands::halving(&cfg),
        Command::Convergence { psi2 } => commands::convergence(&cfg, &psi2),
        Command::Lyapunov { kicks, terminal } => commands::lyapunov(&cfg, kicks, terminal),
        Command::Separation { candidates, alpha } => commands::separation(&cfg, &candidates, alpha),
        Command::Embed => commands::embed(&cfg),
        Command::Oracle { max_m, max_steps, seeds } => commands::oracle(max_m, max_steps, seeds),
        Command::Constants { candidates } => commands::constants(&cfg, &candidates),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {f}");
            ExitCode::from(f.code())
        }
    }
}
