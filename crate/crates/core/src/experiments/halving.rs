use rayon::prelude::*;

use super::Setup;
use crate::error::{Error, Result};
use crate::forcing::{derive_seed, Forcing, KickSequence, Spliced};
use crate::omega::{diameter_cells, omega_set_at};
use crate::solver::evolve;

const FUTURE_SALT: u64 = 0x6a09_e667_f3bc_c908;

/// Conditional halving experiment: a fixed past up to `t = s + past_len`,
/// then independent futures for `t_gap` more unit times.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HalvingConfig {
    pub t_gap: i64,
    pub past_len: i64,
    pub n_pasts: usize,
    pub n_futures: usize,
}

impl Default for HalvingConfig {
    fn default() -> Self {
        HalvingConfig { t_gap: 3, past_len: 1, n_pasts: 20, n_futures: 200 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HalvingEstimate {
    pub t_gap: i64,
    /// Pooled fraction of valid trials with `d_{t+T} ≤ d_t / 2`.
    pub frequency: f64,
    /// 95% binomial half-width of `frequency`.
    pub half_width: f64,
    /// Smallest per-past frequency among pasts with a valid trial.
    pub min_over_pasts: f64,
    pub per_past: Vec<Option<f64>>,
    pub trials: usize,
    /// Trials whose past already sits at the grid floor `d_t < 2/M`.
    pub excluded: usize,
}

/// Estimates the halving probability. Past `p` uses sample stream `p` of
/// `setup`; future `f` of past `p` uses an independent salted stream.
pub fn halving_frequency(setup: &Setup, cfg: &HalvingConfig) -> Result<HalvingEstimate> {
    if cfg.n_pasts == 0 || cfg.n_futures == 0 || cfg.t_gap < 0 || cfg.past_len < 0 {
        return Err(Error::InvalidConfig("halving needs pasts, futures and non-negative times".into()));
    }
    let s = setup.s();
    let t = setup.time_at(cfg.past_len);
    let end = setup.time_at(cfg.past_len + cfg.t_gap);
    let outcomes: Vec<(Option<usize>, usize)> = (0..cfg.n_pasts)
        .into_par_iter()
        .map(|p| {
            let past = setup.sequence(p as u64);
            let ev = evolve(&setup.solver_config(t), &Forcing::new(&past, &setup.basis)?)?;
            let d_t = diameter_cells(&omega_set_at(&ev, s, t)?)?;
            if d_t < 2 {
                return Ok((None, 0));
            }
            let mut hits = 0;
            for f in 0..cfg.n_futures {
                let seed = derive_seed(FUTURE_SALT ^ setup.master_seed, (p * cfg.n_futures + f) as u64);
                let future = KickSequence::new(seed, setup.distribution, setup.mode, setup.basis.dim());
                let field = Spliced {
                    past: Forcing::new(&past, &setup.basis)?,
                    future: Forcing::new(&future, &setup.basis)?,
                    split: t,
                };
                let mut run = ev.clone();
                run.extend(&field, end)?;
                let d_end = diameter_cells(&omega_set_at(&run, s, end)?)?;
                if 2 * d_end <= d_t {
                    hits += 1;
                }
            }
            Ok((Some(hits), cfg.n_futures))
        })
        .collect::<Result<_>>()?;
    let per_past: Vec<Option<f64>> =
        outcomes.iter().map(|&(h, n)| h.map(|h| h as f64 / n as f64)).collect();
    let hits: usize = outcomes.iter().filter_map(|o| o.0).sum();
    let excluded = outcomes.iter().filter(|o| o.0.is_none()).count() * cfg.n_futures;
    let trials = cfg.n_pasts * cfg.n_futures - excluded;
    let frequency = if trials > 0 { hits as f64 / trials as f64 } else { 0.0 };
    let half_width = if trials > 0 { 1.96 * (frequency * (1.0 - frequency) / trials as f64).sqrt() } else { 1.0 };
    let min_over_pasts = per_past.iter().flatten().copied().fold(f64::INFINITY, f64::min);
    Ok(HalvingEstimate {
        t_gap: cfg.t_gap,
        frequency,
        half_width,
        min_over_pasts: if min_over_pasts.is_finite() { min_over_pasts } else { 0.0 },
        per_past,
        trials,
        excluded,
    })
}

/// Runs the experiment for each gap in `gaps` and returns all estimates.
pub fn scan_halving(setup: &Setup, base: &HalvingConfig, gaps: &[i64]) -> Result<Vec<HalvingEstimate>> {
    gaps.iter().map(|&t_gap| halving_frequency(setup, &HalvingConfig { t_gap, ..*base })).collect()
}
