use super::Setup;
use crate::error::{Error, Result};
use crate::forcing::Forcing;
use crate::omega::{omega_set_at, OmegaSet};
use crate::solver::evolve;

fn circle_cells(a: usize, b: usize, m: usize) -> usize {
    let d = a.abs_diff(b);
    d.min(m - d)
}

/// Hausdorff distance between two point sets on the circle, in grid cells.
pub fn circle_hausdorff(a: &OmegaSet, b: &OmegaSet) -> Result<usize> {
    if a.grid != b.grid {
        return Err(Error::DimensionMismatch { expected: a.grid, got: b.grid });
    }
    if a.points.is_empty() || b.points.is_empty() {
        return Err(Error::EmptySet);
    }
    let directed = |p: &[usize], q: &[usize]| {
        p.iter()
            .map(|&x| q.iter().map(|&y| circle_cells(x, y, a.grid)).min().unwrap())
            .max()
            .unwrap()
    };
    Ok(directed(&a.points, &b.points).max(directed(&b.points, &a.points)))
}

/// Distance (circle units) between `Ω_{s,s+h}` for two initial conditions
/// under the forcing of sample `k`, for each horizon `h`.
pub fn two_solution_convergence(
    setup: &Setup,
    psi1: &[f64],
    psi2: &[f64],
    k: u64,
    horizons: &[i64],
) -> Result<Vec<f64>> {
    let m = setup.grid();
    if psi1.len() != m || psi2.len() != m {
        return Err(Error::DimensionMismatch { expected: m, got: psi1.len().min(psi2.len()) });
    }
    let max_h = horizons.iter().copied().max().ok_or(Error::EmptySet)?;
    let seq = setup.sequence(k);
    let field = Forcing::new(&seq, &setup.basis)?;
    let mut cfg = setup.solver_config(setup.time_at(max_h));
    cfg.psi = psi1.to_vec();
    let ev1 = evolve(&cfg, &field)?;
    cfg.psi = psi2.to_vec();
    let ev2 = evolve(&cfg, &field)?;
    horizons
        .iter()
        .map(|&h| {
            let t = setup.time_at(h);
            let a = omega_set_at(&ev1, setup.s(), t)?;
            let b = omega_set_at(&ev2, setup.s(), t)?;
            Ok(circle_hausdorff(&a, &b)? as f64 / m as f64)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forcing::{CoefficientDist, FourierMode, PotentialBasis};

    fn set(points: Vec<usize>) -> OmegaSet {
        let provenance = points.clone();
        OmegaSet { grid: 16, s: 1, t: 2, points, provenance }
    }

    #[test]
    fn hausdorff_wraps() {
        assert_eq!(circle_hausdorff(&set(vec![0]), &set(vec![15])).unwrap(), 1);
        assert_eq!(circle_hausdorff(&set(vec![0, 8]), &set(vec![0])).unwrap(), 8);
        assert_eq!(circle_hausdorff(&set(vec![2, 5]), &set(vec![2, 5])).unwrap(), 0);
    }

    #[test]
    fn identical_initial_conditions_agree() {
        let basis = PotentialBasis::fourier(&[FourierMode::cos(1), FourierMode::sin(1)], 32).unwrap();
        let setup = Setup::new(basis, CoefficientDist::Uniform(1.0), 0.0, 5);
        let psi = vec![0.0; 32];
        let d = two_solution_convergence(&setup, &psi, &psi, 0, &[0, 2, 4]).unwrap();
        assert_eq!(d, vec![0.0; 3]);
    }
}
