use crate::error::{Error, Result};
use crate::forcing::{KickPotential, KickSequence, PotentialBasis};
use crate::solver::MinimizerPath;

pub const MIN_LYAPUNOV_KICKS: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LyapunovEstimate {
    /// Top exponent per kick.
    pub exponent: f64,
    /// Second exponent per kick; equals `−exponent` for symplectic products.
    pub second: f64,
    pub kicks: usize,
    /// `max_n |det J_n − 1|`.
    pub max_det_error: f64,
    /// `max_n |ln r₁₁ + ln r₂₂|` over the renormalization steps.
    pub max_log_det_residual: f64,
}

/// Product of the linearized maps `(δx, δv) ↦ (δx + dt·δv', δv')` with
/// `δv' = δv + κ_n δx`, i.e. `J_n = [[1 + dt κ_n, dt], [κ_n, 1]]`, using
/// two-vector Gram–Schmidt renormalization at every kick.
pub fn lyapunov_from_curvatures(curvatures: &[f64], dt: f64) -> Result<LyapunovEstimate> {
    if curvatures.len() < MIN_LYAPUNOV_KICKS {
        return Err(Error::PathTooShort { len: curvatures.len(), needed: MIN_LYAPUNOV_KICKS });
    }
    let mut q1 = [1.0, 0.0];
    let mut q2 = [0.0, 1.0];
    let (mut sum1, mut sum2) = (0.0, 0.0);
    let (mut max_det_error, mut max_log_det_residual) = (0.0f64, 0.0f64);
    let apply = |k: f64, v: [f64; 2]| [(1.0 + dt * k) * v[0] + dt * v[1], k * v[0] + v[1]];
    for &k in curvatures {
        let det = (1.0 + dt * k) - dt * k;
        max_det_error = max_det_error.max((det - 1.0).abs());
        let a1 = apply(k, q1);
        let a2 = apply(k, q2);
        let r11 = a1[0].hypot(a1[1]);
        q1 = [a1[0] / r11, a1[1] / r11];
        let r12 = q1[0] * a2[0] + q1[1] * a2[1];
        let b2 = [a2[0] - r12 * q1[0], a2[1] - r12 * q1[1]];
        let r22 = b2[0].hypot(b2[1]);
        q2 = [b2[0] / r22, b2[1] / r22];
        sum1 += r11.ln();
        sum2 += r22.ln();
        max_log_det_residual = max_log_det_residual.max((r11.ln() + r22.ln()).abs());
    }
    let n = curvatures.len() as f64;
    Ok(LyapunovEstimate {
        exponent: sum1 / n,
        second: sum2 / n,
        kicks: curvatures.len(),
        max_det_error,
        max_log_det_residual,
    })
}

/// Exponent along a minimizer: curvature of each kick at the path point
/// where it is applied.
pub fn lyapunov_exponent(path: &MinimizerPath, seq: &KickSequence, basis: &PotentialBasis) -> Result<LyapunovEstimate> {
    if path.grid != basis.grid_size() {
        return Err(Error::DimensionMismatch { expected: basis.grid_size(), got: path.grid });
    }
    if seq.dim != basis.dim() {
        return Err(Error::DimensionMismatch { expected: basis.dim(), got: seq.dim });
    }
    let curvatures: Vec<f64> = (0..path.windings.len())
        .map(|n| {
            let time = path.start + n as i64;
            let kick = KickPotential { coefficients: seq.coefficients(time), time_index: time };
            kick.sample_curvature(basis)[path.positions[n]]
        })
        .collect();
    lyapunov_from_curvatures(&curvatures, path.step)
}
