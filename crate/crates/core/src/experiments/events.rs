use crate::error::{Error, Result};
use crate::forcing::{CoefficientDist, ForcingMode, KickPotential, KickSequence, PotentialBasis};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EventEstimate {
    pub probability: f64,
    /// 95% binomial half-width.
    pub half_width: f64,
    pub hits: usize,
    pub samples: usize,
}

/// Grid sup-norm of a kick potential.
pub fn sup_norm(basis: &PotentialBasis, coefficients: &[f64]) -> f64 {
    basis.combine_all(basis.values(), coefficients).iter().fold(0.0, |a, v| a.max(v.abs()))
}

/// Probability that `n_kicks` consecutive kicks all have sup-norm at most
/// `eps`. Sample `k` uses kicks `k·n_kicks .. (k+1)·n_kicks` of one stream.
pub fn event_probability(
    basis: &PotentialBasis,
    dist: CoefficientDist,
    eps: f64,
    n_kicks: usize,
    n_samples: usize,
    seed: u64,
) -> Result<EventEstimate> {
    if n_kicks == 0 || n_samples == 0 || eps < 0.0 {
        return Err(Error::InvalidConfig("need kicks, samples and eps >= 0".into()));
    }
    let seq = KickSequence::new(seed, dist, ForcingMode::Kicked, basis.dim());
    let hits = (0..n_samples)
        .filter(|&k| {
            (0..n_kicks).all(|i| {
                let j = (k * n_kicks + i) as i64;
                let kick = KickPotential { coefficients: seq.coefficients(j), time_index: j };
                sup_norm(basis, &kick.coefficients) <= eps
            })
        })
        .count();
    let p = hits as f64 / n_samples as f64;
    Ok(EventEstimate { probability: p, half_width: 1.96 * (p * (1.0 - p) / n_samples as f64).sqrt(), hits, samples: n_samples })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forcing::FourierMode;

    fn circle() -> PotentialBasis {
        PotentialBasis::fourier(&[FourierMode::cos(1), FourierMode::sin(1)], 64).unwrap()
    }

    #[test]
    fn large_eps_is_certain() {
        let est = event_probability(&circle(), CoefficientDist::Uniform(1.0), 2.0, 3, 500, 1).unwrap();
        assert_eq!(est.probability, 1.0);
    }

    #[test]
    fn zero_eps_is_impossible() {
        let est = event_probability(&circle(), CoefficientDist::Uniform(1.0), 0.0, 1, 500, 1).unwrap();
        assert_eq!(est.hits, 0);
    }

    #[test]
    fn matches_disc_area() {
        // sup-norm of c₁cos + c₂sin is |c| (up to grid error): P = πε²/4
        let eps = 0.5;
        let est = event_probability(&circle(), CoefficientDist::Uniform(1.0), eps, 1, 40_000, 7).unwrap();
        let exact = std::f64::consts::PI * eps * eps / 4.0;
        assert!((est.probability - exact).abs() < 3.0 * est.half_width.max(1e-3), "{est:?} vs {exact}");
    }

    #[test]
    fn consecutive_kicks_multiply() {
        let eps = 0.7;
        let one = event_probability(&circle(), CoefficientDist::Uniform(1.0), eps, 1, 40_000, 3).unwrap();
        let two = event_probability(&circle(), CoefficientDist::Uniform(1.0), eps, 2, 40_000, 3).unwrap();
        let p = one.probability;
        assert!((two.probability - p * p).abs() < 3.0 * two.half_width + 0.005);
    }
}
