use rayon::prelude::*;

use super::Setup;
use crate::error::{Error, Result};

/// Diameters of `Ω_{s,t}` for each sample and horizon `t − s`.
#[derive(Debug, Clone, PartialEq)]
pub struct DecaySeries {
    pub grid: usize,
    pub horizons: Vec<i64>,
    /// `per_sample[k][h]`
    pub per_sample: Vec<Vec<f64>>,
    pub mean: Vec<f64>,
}

impl DecaySeries {
    pub fn from_samples(grid: usize, horizons: Vec<i64>, per_sample: Vec<Vec<f64>>) -> Self {
        let n = per_sample.len().max(1) as f64;
        let mean = (0..horizons.len())
            .map(|h| per_sample.iter().map(|row| row[h]).sum::<f64>() / n)
            .collect();
        DecaySeries { grid, horizons, per_sample, mean }
    }

    /// Largest increase between consecutive horizons over all samples.
    pub fn worst_increase(&self) -> f64 {
        self.per_sample
            .iter()
            .flat_map(|row| row.windows(2).map(|w| w[1] - w[0]))
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

/// One evolution per sample to the largest horizon; the diameter at each
/// smaller horizon is read from the same run. Samples run in parallel and
/// are keyed by index, so the result does not depend on scheduling.
pub fn decay_experiment(setup: &Setup, n_samples: usize, horizons: &[i64]) -> Result<DecaySeries> {
    if n_samples == 0 {
        return Err(Error::InvalidConfig("need at least one sample".into()));
    }
    if horizons.is_empty() || horizons.windows(2).any(|w| w[0] >= w[1]) || horizons[0] < 0 {
        return Err(Error::InvalidConfig("horizons must be non-negative and strictly increasing".into()));
    }
    let max_h = *horizons.last().unwrap();
    let m = setup.grid() as f64;
    let per_sample = (0..n_samples as u64)
        .into_par_iter()
        .map(|k| {
            let ev = setup.run(k, max_h)?;
            horizons
                .iter()
                .map(|&h| setup.diameter_cells_at(&ev, h).map(|c| c as f64 / m))
                .collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DecaySeries::from_samples(setup.grid(), horizons.to_vec(), per_sample))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forcing::{CoefficientDist, FourierMode, PotentialBasis};

    fn setup(m: usize, sigma: f64) -> Setup {
        let basis = PotentialBasis::fourier(&[FourierMode::cos(1), FourierMode::sin(1)], m).unwrap();
        Setup::new(basis, CoefficientDist::Uniform(sigma), 0.0, 2024)
    }

    #[test]
    fn no_forcing_no_contraction() {
        let s = setup(64, 0.0);
        let series = decay_experiment(&s, 3, &[0, 1, 2, 5]).unwrap();
        for row in &series.per_sample {
            assert!(row.iter().all(|&d| d == 1.0 - 1.0 / 64.0));
        }
    }

    #[test]
    fn strong_forcing_collapses_quickly() {
        for m in [256, 512] {
            let s = setup(m, 5.0);
            let series = decay_experiment(&s, 1, &(1..=8).collect::<Vec<_>>()).unwrap();
            let last = *series.per_sample[0].last().unwrap();
            assert!(last <= 2.0 / m as f64, "M={m}: {:?}", series.per_sample[0]);
        }
    }

    #[test]
    fn samples_are_monotone_and_reproducible() {
        let s = setup(128, 1.0);
        let hs: Vec<i64> = (0..=12).collect();
        let a = decay_experiment(&s, 8, &hs).unwrap();
        let b = decay_experiment(&s, 8, &hs).unwrap();
        assert_eq!(a, b);
        assert!(a.worst_increase() <= 1.0 / 128.0);
        for (h, mean) in a.mean.iter().enumerate() {
            let direct = a.per_sample.iter().map(|r| r[h]).sum::<f64>() / 8.0;
            assert_eq!(*mean, direct);
        }
    }

    #[test]
    fn white_forcing_runs_on_unit_horizons() {
        let mut s = setup(64, 1.0);
        s.distribution = CoefficientDist::Gaussian(1.0);
        s.mode = crate::forcing::ForcingMode::White(4);
        let series = decay_experiment(&s, 2, &[0, 1, 3]).unwrap();
        assert_eq!(series.per_sample[0][0], 1.0 - 1.0 / 64.0);
        assert!(series.worst_increase() <= 1.0 / 64.0);
    }

    #[test]
    fn rejects_bad_horizons() {
        let s = setup(32, 1.0);
        assert!(decay_experiment(&s, 0, &[1]).is_err());
        assert!(decay_experiment(&s, 1, &[2, 1]).is_err());
        assert!(decay_experiment(&s, 1, &[]).is_err());
    }
}
