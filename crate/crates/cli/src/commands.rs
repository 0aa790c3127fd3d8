use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};

use crate::config::{Psi, RunConfig};
use crate::Candidates;
use minlab::experiments::{
    decay_experiment, fit_lambda, lyapunov_exponent, proof_constants, rotated_cosine_triple, scan_halving,
    separation_check, two_solution_convergence, DecayFit, DecaySeries, HalvingConfig, SeparationCertificate,
};
use minlab::forcing::{check_embedding, EmbeddingWitness, Forcing, ForcingMode};
use minlab::omega::shock_map_at;
use minlab::output::{decay_csv, omega_csv, parse_decay_csv, sci, values_csv};
use minlab::solver::{backtrack, evolve};
use minlab::Error;

/// Process outcome other than success.
#[derive(Debug)]
pub enum Failure {
    /// A check ran and did not hold (exit 1).
    Check(String),
    /// Bad configuration or input, detected before computing (exit 2).
    Config(String),
    /// Numerical failure during the run (exit 3).
    Numeric(String),
    /// Solver disagrees with the enumeration oracle (exit 4).
    Oracle(String),
}

impl Failure {
    pub fn code(&self) -> u8 {
        match self {
            Failure::Check(_) => 1,
            Failure::Config(_) => 2,
            Failure::Numeric(_) => 3,
            Failure::Oracle(_) => 4,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Check(m) | Failure::Config(m) | Failure::Numeric(m) | Failure::Oracle(m) => f.write_str(m),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::GridTooSmall(..)
            | Error::EmptyBasis
            | Error::InvalidMode(_)
            | Error::InvalidConfig(_)
            | Error::DimensionMismatch { .. } => Failure::Config(e.to_string()),
            _ => Failure::Numeric(e.to_string()),
        }
    }
}

fn write(dir: &Path, name: &str, contents: &str) -> Result<PathBuf, Failure> {
    fs::create_dir_all(dir).map_err(|e| Failure::Config(format!("{}: {e}", dir.display())))?;
    let path = dir.join(name);
    fs::write(&path, contents).map_err(|e| Failure::Config(format!("{}: {e}", path.display())))?;
    Ok(path)
}

fn write_json(dir: &Path, name: &str, value: &Value) -> Result<PathBuf, Failure> {
    let text = serde_json::to_string_pretty(value).expect("json values serialize") + "\n";
    write(dir, name, &text)
}

fn fit_json(cfg: &RunConfig, series: &DecaySeries) -> Result<(), Failure> {
    let burn_in = cfg.burn_in();
    let fit = fit_lambda(series, burn_in);
    let value = match &fit {
        Ok(f) => json!({
            "lambda_hat": f.lambda_hat,
            "C_hat": f.c_hat,
            "r_squared": f.r_squared,
            "n_samples": series.per_sample.len(),
            "burn_in": burn_in,
            "points_used": f.used,
            "sample_envelope": f.sample_envelope,
            "status": if f.decays() { "decay" } else { "no-decay" },
        }),
        Err(e) => json!({
            "lambda_hat": null,
            "C_hat": null,
            "r_squared": null,
            "n_samples": series.per_sample.len(),
            "burn_in": burn_in,
            "status": "too-few-points",
            "reason": e.to_string(),
        }),
    };
    let path = write_json(&cfg.out, "fit.json", &value)?;
    match fit {
        Ok(DecayFit { lambda_hat, r_squared, used, .. }) => {
            println!("lambda_hat = {lambda_hat:.6} (r2 = {r_squared:.4}, {used} points) -> {}", path.display());
            Ok(())
        }
        Err(e) => Err(Failure::Numeric(format!("decay fit impossible: {e}; see {}", path.display()))),
    }
}

pub fn decay(cfg: &RunConfig, dump_values: bool) -> Result<(), Failure> {
    let setup = cfg.setup().map_err(Failure::Config)?;
    let horizons = cfg.horizons.list();
    let series = decay_experiment(&setup, cfg.samples, &horizons)?;
    write(&cfg.out, "decay.csv", &decay_csv(&series))?;
    if dump_values {
        let ev = setup.run(0, *horizons.last().unwrap())?;
        write(&cfg.out, "values.csv", &values_csv(&ev))?;
        let tables = horizons
            .iter()
            .map(|&h| shock_map_at(&ev, setup.s(), setup.time_at(h)))
            .collect::<Result<Vec<_>, _>>()?;
        write(&cfg.out, "omega.csv", &omega_csv(&tables))?;
    }
    fit_json(cfg, &series)
}

pub fn fit(cfg: &RunConfig, input: Option<PathBuf>) -> Result<(), Failure> {
    let path = input.unwrap_or_else(|| cfg.out.join("decay.csv"));
    let text = fs::read_to_string(&path).map_err(|e| Failure::Config(format!("{}: {e}", path.display())))?;
    let (horizons, per_sample) = parse_decay_csv(&text).map_err(|e| Failure::Config(format!("{}: {e}", path.display())))?;
    fit_json(cfg, &DecaySeries::from_samples(cfg.grid, horizons, per_sample))
}

pub fn halving(cfg: &RunConfig) -> Result<(), Failure> {
    let setup = cfg.setup().map_err(Failure::Config)?;
    let base = HalvingConfig {
        t_gap: 1,
        past_len: cfg.halving_past_len,
        n_pasts: cfg.halving_pasts,
        n_futures: cfg.halving_futures,
    };
    let gaps: Vec<i64> = cfg.t_halving.map_or_else(|| (1..=10).collect(), |t| vec![t]);
    let scan = scan_halving(&setup, &base, &gaps)?;
    let best = scan.iter().max_by(|a, b| a.frequency.total_cmp(&b.frequency).then(b.t_gap.cmp(&a.t_gap)));
    let entries: Vec<Value> = scan
        .iter()
        .map(|e| {
            json!({
                "T": e.t_gap,
                "frequency": e.frequency,
                "excluded": e.excluded,
                "confidence": e.half_width,
                "min_over_pasts": e.min_over_pasts,
                "trials": e.trials,
            })
        })
        .collect();
    let path = write_json(&cfg.out, "halving.json", &json!({ "best_T": best.map(|e| e.t_gap), "scan": entries }))?;
    for e in &scan {
        println!("T = {:2}: frequency {:.4} +/- {:.4}, min over pasts {:.4}, excluded {}", e.t_gap, e.frequency, e.half_width, e.min_over_pasts, e.excluded);
    }
    println!("-> {}", path.display());
    Ok(())
}

pub fn convergence(cfg: &RunConfig, psi2: &str) -> Result<(), Failure> {
    let setup = cfg.setup().map_err(Failure::Config)?;
    let psi2: Psi = psi2.parse().map_err(Failure::Config)?;
    let horizons = cfg.horizons.list();
    let psi1 = setup.psi.clone();
    let psi2 = psi2.sample(cfg.grid);
    let mut out = String::from("sample,horizon,distance\n");
    let mut collapsed = 0;
    for k in 0..cfg.samples as u64 {
        let d = two_solution_convergence(&setup, &psi1, &psi2, k, &horizons)?;
        for (h, v) in horizons.iter().zip(&d) {
            out.push_str(&format!("{k},{h},{}\n", sci(*v)));
        }
        if *d.last().unwrap() < 2.0 / cfg.grid as f64 {
            collapsed += 1;
        }
    }
    let path = write(&cfg.out, "convergence.csv", &out)?;
    println!("{collapsed}/{} samples below 2/M at the last horizon -> {}", cfg.samples, path.display());
    Ok(())
}

pub fn lyapunov(cfg: &RunConfig, kicks: i64, terminal: usize) -> Result<(), Failure> {
    if kicks < 1 {
        return Err(Failure::Config("kicks must be positive".into()));
    }
    let setup = cfg.setup().map_err(Failure::Config)?;
    let seq = setup.sequence(0);
    let ev = evolve(&setup.solver_config(kicks), &Forcing::new(&seq, &setup.basis)?)?;
    let path = backtrack(&ev, terminal)?;
    let est = lyapunov_exponent(&path, &seq, &setup.basis)?;
    let file = write_json(
        &cfg.out,
        "lyapunov.json",
        &json!({
            "kicks": est.kicks,
            "terminal": terminal,
            "exponent": est.exponent,
            "second": est.second,
            "max_det_error": est.max_det_error,
            "max_log_det_residual": est.max_log_det_residual,
        }),
    )?;
    println!("top exponent per kick {:.6} over {} kicks -> {}", est.exponent, est.kicks, file.display());
    Ok(())
}

fn candidate_list(cfg: &RunConfig, c: &Candidates) -> Result<Vec<Vec<f64>>, Failure> {
    match (c.auto3, &c.candidates) {
        (true, None) => rotated_cosine_triple(&cfg.basis)
            .ok_or_else(|| Failure::Config("--auto3 needs a basis containing 1c and 1s".into())),
        (false, Some(text)) => text
            .split(';')
            .map(|v| {
                v.split(',')
                    .map(|x| x.trim().parse::<f64>().map_err(|_| Failure::Config(format!("bad coefficient '{x}'"))))
                    .collect()
            })
            .collect(),
        _ => Err(Failure::Config("give exactly one of --auto3 or --candidates".into())),
    }
}

fn certify(cfg: &RunConfig, c: &Candidates, alpha: Option<f64>) -> Result<SeparationCertificate, Failure> {
    let basis = cfg.basis().map_err(Failure::Config)?;
    let cands = candidate_list(cfg, c)?;
    separation_check(&basis, &cands, alpha).map_err(|e| Failure::Check(format!("no separation certificate: {e}")))
}

pub fn separation(cfg: &RunConfig, c: &Candidates, alpha: Option<f64>) -> Result<(), Failure> {
    let cert = certify(cfg, c, alpha)?;
    let m = cert.grid;
    let interval = |a: &minlab::experiments::Arc| {
        let (lo, hi) = a.open_endpoints(m);
        json!([lo, hi])
    };
    let value = json!({
        "grid": m,
        "coefficients": cert.coefficients,
        "x": cert.maxima.iter().map(|&i| i as f64 / m as f64).collect::<Vec<_>>(),
        "max_values": cert.max_values,
        "J": cert.j_intervals.iter().map(interval).collect::<Vec<_>>(),
        "I": cert.i_intervals.iter().map(interval).collect::<Vec<_>>(),
        "alpha0": cert.alpha0,
        "alpha": cert.alpha,
    });
    let path = write_json(&cfg.out, "certificate.json", &value)?;
    println!("alpha0 = {:.6} -> {}", cert.alpha0, path.display());
    Ok(())
}

pub fn constants(cfg: &RunConfig, c: &Candidates) -> Result<(), Failure> {
    let cert = certify(cfg, c, None)?;
    let basis = cfg.basis().map_err(Failure::Config)?;
    let white = match cfg.mode {
        ForcingMode::White(_) => Some(cfg.b),
        ForcingMode::Kicked => None,
    };
    let k = proof_constants(&cert, &basis, white)?;
    let value = serde_json::to_value(&k).expect("constants serialize");
    let path = write_json(&cfg.out, "constants.json", &value)?;
    println!("alpha = {}, N' = {}, N = {} -> {}", k.alpha_exact, k.n_prime, k.n, path.display());
    Ok(())
}

pub fn embed(cfg: &RunConfig) -> Result<(), Failure> {
    let report = check_embedding(&cfg.basis().map_err(Failure::Config)?);
    let m = cfg.grid as f64;
    match report.witness {
        None => {
            println!("embedding ok: {} at M = {}", cfg.basis, cfg.grid);
            Ok(())
        }
        Some(EmbeddingWitness::Collision(i, j)) => Err(Failure::Check(format!(
            "not an embedding: x = {} and x = {} have the same image",
            i as f64 / m,
            j as f64 / m
        ))),
        Some(EmbeddingWitness::Degenerate(i)) => Err(Failure::Check(format!(
            "not an immersion: derivative vanishes near x = {}",
            i as f64 / m
        ))),
    }
}

pub fn oracle(max_m: usize, max_steps: usize, seeds: u64) -> Result<(), Failure> {
    if max_m < 8 || max_steps == 0 || seeds == 0 {
        return Err(Failure::Config("oracle needs max-m >= 8, max-steps >= 1 and seeds >= 1".into()));
    }
    let report = minlab::oracle::run_suite(max_m, max_steps, seeds, 1e-12);
    println!(
        "{} cases: {} value mismatches, {} path mismatches, max relative error {:.3e}",
        report.cases, report.value_mismatches, report.path_mismatches, report.max_relative_error
    );
    if report.passed() {
        Ok(())
    } else {
        for f in report.failures.iter().take(10) {
            eprintln!("  {f}");
        }
        Err(Failure::Oracle("solver disagrees with exhaustive enumeration".into()))
    }
}
