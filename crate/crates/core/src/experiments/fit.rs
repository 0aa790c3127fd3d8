use super::DecaySeries;
use crate::error::{Error, Result};

/// `lambda_hat` at or below this counts as no decay.
pub const NO_DECAY_THRESHOLD: f64 = 1e-6;

/// Log-linear fit `mean ≈ C · exp(−λ h)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayFit {
    pub lambda_hat: f64,
    pub c_hat: f64,
    pub r_squared: f64,
    /// Points that entered the regression.
    pub used: usize,
    /// `max_k max_h d_k(h) · exp(λ̂ h / 2)`: stays bounded when each sample
    /// decays at least at half the mean rate.
    pub sample_envelope: f64,
}

impl DecayFit {
    pub fn decays(&self) -> bool {
        self.lambda_hat > NO_DECAY_THRESHOLD
    }
}

/// First 20% of the horizons.
pub fn default_burn_in(horizons: usize) -> usize {
    horizons / 5
}

/// Ordinary least squares of `ln y` on `x`.
pub fn fit_exponential(xs: &[f64], ys: &[f64]) -> Result<(f64, f64, f64)> {
    if xs.len() != ys.len() {
        return Err(Error::DimensionMismatch { expected: xs.len(), got: ys.len() });
    }
    if xs.len() < 2 {
        return Err(Error::TooFewPoints { usable: xs.len(), needed: 2 });
    }
    let n = xs.len() as f64;
    let ls: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ls.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(&ls).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ls.iter().map(|y| (y - my) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = xs.iter().zip(&ls).map(|(x, y)| (y - intercept - slope * x).powi(2)).sum();
    let r2 = if syy > 0.0 { 1.0 - ss_res / syy } else { 1.0 };
    Ok((slope, intercept, r2))
}

/// Fits the mean diameters past `burn_in`, skipping means below the grid
/// floor `2/M`. Needs at least four usable points.
pub fn fit_lambda(series: &DecaySeries, burn_in: usize) -> Result<DecayFit> {
    let floor = 2.0 / series.grid as f64;
    let (xs, ys): (Vec<f64>, Vec<f64>) = series
        .horizons
        .iter()
        .zip(&series.mean)
        .skip(burn_in)
        .filter(|(_, &m)| m >= floor)
        .map(|(&h, &m)| (h as f64, m))
        .unzip();
    if xs.len() < 4 {
        return Err(Error::TooFewPoints { usable: xs.len(), needed: 4 });
    }
    let (slope, intercept, r_squared) = fit_exponential(&xs, &ys)?;
    let lambda_hat = -slope + 0.0;
    let sample_envelope = series
        .per_sample
        .iter()
        .flat_map(|row| row.iter().zip(&series.horizons).map(|(d, &h)| d * (lambda_hat * h as f64 / 2.0).exp()))
        .fold(0.0, f64::max);
    Ok(DecayFit { lambda_hat, c_hat: intercept.exp(), r_squared, used: xs.len(), sample_envelope })
}
