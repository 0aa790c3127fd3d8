use serde::Serialize;
use thiserror::Error;

use crate::forcing::{BasisSpec, PotentialBasis, Quadrature};

/// Grid points `start, start + 1, …, start + len − 1` (mod `M`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Arc {
    pub start: usize,
    pub len: usize,
}

impl Arc {
    fn points(&self, m: usize) -> impl Iterator<Item = usize> {
        let start = self.start;
        (0..self.len).map(move |k| (start + k) % m)
    }

    pub fn contains(&self, y: usize, m: usize) -> bool {
        (y + m - self.start) % m < self.len
    }

    /// Endpoints of the open interval `((start − 1)/M, (start + len)/M)`,
    /// each reduced to `[0, 1)`.
    pub fn open_endpoints(&self, m: usize) -> (f64, f64) {
        let a = (self.start + m - 1) % m;
        let b = (self.start + self.len) % m;
        (a as f64 / m as f64, b as f64 / m as f64)
    }
}

/// Three potentials with unique, well separated maxima.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeparationCertificate {
    pub grid: usize,
    /// Indices into the candidate list.
    pub chosen: [usize; 3],
    pub coefficients: Vec<Vec<f64>>,
    /// Grid index of each maximum.
    pub maxima: [usize; 3],
    pub max_values: [f64; 3],
    /// Superlevel depth defining `J_i`.
    pub level: f64,
    pub alpha0: f64,
    pub alpha: f64,
    /// `J_i`: component of `{F̃_i > max − level}` around the maximum.
    pub j_intervals: [Arc; 3],
    /// `I_i(α) ⊂ J_i`: hull of `{F̃_i > max − α}` within `J_i`.
    pub i_intervals: [Arc; 3],
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SeparationFailure {
    #[error("need at least 3 candidates, got {0}")]
    TooFewCandidates(usize),
    #[error("candidate {candidate} has {got} coefficients, basis has {expected}")]
    Dimension { candidate: usize, expected: usize, got: usize },
    #[error("candidate {candidate} has no unique maximum (grid points {first} and {second})")]
    NonUniqueMaximum { candidate: usize, first: usize, second: usize },
    #[error("neighbourhoods of candidates {first} and {second} cannot be separated")]
    Overlap { first: usize, second: usize },
    #[error("alpha must be positive, got {0}")]
    InvalidAlpha(f64),
    #[error("requested alpha {requested} exceeds alpha_0 = {alpha0}")]
    AlphaTooLarge { requested: f64, alpha0: f64 },
}

/// `cos 2π(x − i/3)` for `i = 0, 1, 2`, as coefficient vectors of a basis
/// containing `1c` and `1s`.
pub fn rotated_cosine_triple(spec: &BasisSpec) -> Option<Vec<Vec<f64>>> {
    let c = spec.position(1, Quadrature::Cos)?;
    let s = spec.position(1, Quadrature::Sin)?;
    Some(
        (0..3)
            .map(|i| {
                let theta = 2.0 * std::f64::consts::PI * i as f64 / 3.0;
                let mut v = vec![0.0; spec.terms.len()];
                v[c] = theta.cos();
                v[s] = theta.sin();
                v
            })
            .collect(),
    )
}

/// Certifies the first triple of candidates (in lexicographic order) whose
/// maxima are unique and admit disjoint neighbourhoods. `alpha` defaults to
/// `α₀`. When no triple works, the failure of the first triple is returned.
pub fn separation_check(
    basis: &PotentialBasis,
    candidates: &[Vec<f64>],
    alpha: Option<f64>,
) -> Result<SeparationCertificate, SeparationFailure> {
    let n = candidates.len();
    if n < 3 {
        return Err(SeparationFailure::TooFewCandidates(n));
    }
    if let Some(a) = alpha {
        if a.is_nan() || a <= 0.0 {
            return Err(SeparationFailure::InvalidAlpha(a));
        }
    }
    for (i, c) in candidates.iter().enumerate() {
        if c.len() != basis.dim() {
            return Err(SeparationFailure::Dimension { candidate: i, expected: basis.dim(), got: c.len() });
        }
    }
    let mut first_failure = None;
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                match certify(basis, candidates, [a, b, c], alpha) {
                    Ok(cert) => return Ok(cert),
                    Err(e) => {
                        first_failure.get_or_insert(e);
                    }
                }
            }
        }
    }
    Err(first_failure.expect("at least one triple"))
}

fn unique_max(v: &[f64], candidate: usize) -> Result<(usize, f64), SeparationFailure> {
    let best = (0..v.len()).fold(0, |b, y| if v[y] > v[b] { y } else { b });
    let tol = 1e-9 * v[best].abs().max(1.0);
    if let Some(y) = (0..v.len()).find(|&y| y != best && v[y] >= v[best] - tol) {
        return Err(SeparationFailure::NonUniqueMaximum { candidate, first: best.min(y), second: best.max(y) });
    }
    Ok((best, v[best]))
}

/// Component of `{v > threshold}` around `x`.
fn component(v: &[f64], x: usize, threshold: f64) -> Arc {
    let m = v.len();
    let mut left = 0;
    while left < m - 1 && v[(x + m - left - 1) % m] > threshold {
        left += 1;
    }
    let mut right = 0;
    while left + right < m - 1 && v[(x + right + 1) % m] > threshold {
        right += 1;
    }
    Arc { start: (x + m - left) % m, len: left + right + 1 }
}

/// Disjoint as open intervals: no shared point and no touching points.
fn separated(arcs: &[Arc; 3], m: usize) -> Option<(usize, usize)> {
    let mut owner = vec![None; m];
    for (i, arc) in arcs.iter().enumerate() {
        if arc.len >= m - 1 {
            return Some((i, i));
        }
        for y in arc.points(m) {
            if let Some(j) = owner[y] {
                return Some((j, i));
            }
            owner[y] = Some(i);
        }
    }
    for y in 0..m {
        if let (Some(i), Some(j)) = (owner[y], owner[(y + 1) % m]) {
            if i != j {
                return Some((i.min(j), i.max(j)));
            }
        }
    }
    None
}

fn certify(
    basis: &PotentialBasis,
    candidates: &[Vec<f64>],
    chosen: [usize; 3],
    alpha: Option<f64>,
) -> Result<SeparationCertificate, SeparationFailure> {
    let m = basis.grid_size();
    let values: Vec<Vec<f64>> = chosen.iter().map(|&c| basis.combine_all(basis.values(), &candidates[c])).collect();
    let mut maxima = [0; 3];
    let mut max_values = [0.0; 3];
    for i in 0..3 {
        (maxima[i], max_values[i]) = unique_max(&values[i], chosen[i])?;
    }
    // J_i grows with the depth, and so does α₀; keep the deepest separated level.
    let mut depths: Vec<f64> = (0..3)
        .flat_map(|i| values[i].iter().map(move |&v| max_values[i] - v))
        .filter(|&d| d > 0.0)
        .collect();
    depths.sort_by(f64::total_cmp);
    depths.dedup();
    let arcs_at = |depth: f64| -> [Arc; 3] {
        std::array::from_fn(|i| component(&values[i], maxima[i], max_values[i] - depth))
    };
    let mut best: Option<(f64, [Arc; 3])> = None;
    for &depth in &depths {
        let arcs = arcs_at(depth);
        if let Some((i, j)) = separated(&arcs, m) {
            if best.is_none() {
                return Err(SeparationFailure::Overlap { first: chosen[i], second: chosen[j] });
            }
            break;
        }
        best = Some((depth, arcs));
    }
    let (level, j_intervals) = best.ok_or(SeparationFailure::Overlap { first: chosen[0], second: chosen[1] })?;
    let alpha0 = (0..3)
        .map(|i| {
            let outside = (0..m)
                .filter(|&y| !j_intervals[i].contains(y, m))
                .map(|y| values[i][y])
                .fold(f64::NEG_INFINITY, f64::max);
            max_values[i] - outside
        })
        .fold(f64::INFINITY, f64::min);
    let alpha = alpha.unwrap_or(alpha0);
    if alpha > alpha0 {
        return Err(SeparationFailure::AlphaTooLarge { requested: alpha, alpha0 });
    }
    let i_intervals = std::array::from_fn(|i| {
        let pts: Vec<usize> = j_intervals[i].points(m).collect();
        let inside = |k: &usize| values[i][pts[*k]] > max_values[i] - alpha;
        let first = (0..pts.len()).find(inside).expect("maximum lies in J");
        let last = (0..pts.len()).rev().find(inside).expect("maximum lies in J");
        Arc { start: pts[first], len: last - first + 1 }
    });
    Ok(SeparationCertificate {
        grid: m,
        chosen,
        coefficients: chosen.iter().map(|&c| candidates[c].clone()).collect(),
        maxima,
        max_values,
        level,
        alpha0,
        alpha,
        j_intervals,
        i_intervals,
    })
}
