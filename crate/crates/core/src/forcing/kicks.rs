use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::basis::PotentialBasis;
use crate::error::{Error, Result};

/// Law of the coefficient vector `c(j)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CoefficientDist {
    /// Uniform on the box `[−σ, σ]^K`.
    Uniform(f64),
    /// Independent centred normals with standard deviation `σ`.
    Gaussian(f64),
}

impl CoefficientDist {
    pub fn sigma(&self) -> f64 {
        match *self {
            CoefficientDist::Uniform(s) | CoefficientDist::Gaussian(s) => s,
        }
    }

    pub fn with_sigma(&self, sigma: f64) -> Self {
        match self {
            CoefficientDist::Uniform(_) => CoefficientDist::Uniform(sigma),
            CoefficientDist::Gaussian(_) => CoefficientDist::Gaussian(sigma),
        }
    }
}

/// Kicked forcing (one kick per unit time) or white forcing realized as `P`
/// Gaussian sub-kicks per unit time.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ForcingMode {
    Kicked,
    White(u32),
}

impl ForcingMode {
    /// Time between consecutive kicks.
    pub fn step(&self) -> f64 {
        match *self {
            ForcingMode::Kicked => 1.0,
            ForcingMode::White(p) => 1.0 / f64::from(p),
        }
    }

    /// Kicks per unit time.
    pub fn substeps(&self) -> u32 {
        match *self {
            ForcingMode::Kicked => 1,
            ForcingMode::White(p) => p,
        }
    }
}

/// SplitMix64 finalizer, used to derive independent master seeds.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    let mut z = master ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed-keyed stream of coefficient vectors. Kick `j` reads ChaCha stream `j`
/// of the generator keyed by `master_seed`, so every query is a pure function
/// of `(master_seed, j)` and distinct kicks never share random words.
#[derive(Debug, Clone, PartialEq)]
pub struct KickSequence {
    pub master_seed: u64,
    pub distribution: CoefficientDist,
    pub mode: ForcingMode,
    pub dim: usize,
}

impl KickSequence {
    pub fn new(master_seed: u64, distribution: CoefficientDist, mode: ForcingMode, dim: usize) -> Self {
        KickSequence { master_seed, distribution, mode, dim }
    }

    /// Same law and mode under a different master seed.
    pub fn reseeded(&self, master_seed: u64) -> Self {
        KickSequence { master_seed, ..self.clone() }
    }

    pub fn coefficients(&self, j: i64) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.master_seed);
        rng.set_stream(j as u64);
        match (self.mode, self.distribution) {
            (ForcingMode::White(p), dist) => {
                let scale = dist.sigma() / f64::from(p).sqrt();
                (0..self.dim).map(|_| scale * rng.sample::<f64, _>(StandardNormal)).collect()
            }
            (ForcingMode::Kicked, CoefficientDist::Uniform(s)) => {
                (0..self.dim).map(|_| s * (2.0 * rng.random::<f64>() - 1.0)).collect()
            }
            (ForcingMode::Kicked, CoefficientDist::Gaussian(s)) => {
                (0..self.dim).map(|_| s * rng.sample::<f64, _>(StandardNormal)).collect()
            }
        }
    }
}

/// A single kick `Σ_k c_k F^k`.
#[derive(Debug, Clone, PartialEq)]
pub struct KickPotential {
    pub coefficients: Vec<f64>,
    pub time_index: i64,
}

impl KickPotential {
    pub fn zero(dim: usize, time_index: i64) -> Self {
        KickPotential { coefficients: vec![0.0; dim], time_index }
    }

    fn check(&self, basis: &PotentialBasis, i: usize) -> Result<()> {
        if self.coefficients.len() != basis.dim() {
            return Err(Error::DimensionMismatch { expected: basis.dim(), got: self.coefficients.len() });
        }
        if i >= basis.grid_size() {
            return Err(Error::IndexOutOfRange { index: i, size: basis.grid_size() });
        }
        Ok(())
    }

    /// Potential on the whole grid.
    pub fn sample(&self, basis: &PotentialBasis) -> Vec<f64> {
        basis.combine_all(basis.values(), &self.coefficients)
    }

    pub fn sample_curvature(&self, basis: &PotentialBasis) -> Vec<f64> {
        basis.combine_all(basis.curvatures(), &self.coefficients)
    }
}

pub fn kick_at(seq: &KickSequence, basis: &PotentialBasis, j: i64) -> Result<KickPotential> {
    if seq.dim != basis.dim() {
        return Err(Error::DimensionMismatch { expected: basis.dim(), got: seq.dim });
    }
    Ok(KickPotential { coefficients: seq.coefficients(j), time_index: j })
}

pub fn eval_potential(kick: &KickPotential, basis: &PotentialBasis, i: usize) -> Result<f64> {
    kick.check(basis, i)?;
    Ok(PotentialBasis::combine(basis.values(), &kick.coefficients, i))
}

pub fn eval_gradient(kick: &KickPotential, basis: &PotentialBasis, i: usize) -> Result<f64> {
    kick.check(basis, i)?;
    Ok(PotentialBasis::combine(basis.gradients(), &kick.coefficients, i))
}

/// Source of kick potentials sampled on the solver grid.
pub trait KickField: Sync {
    fn grid_size(&self) -> usize;

    /// Potential of the kick applied at `time`.
    fn potential(&self, time: i64) -> Vec<f64>;
}

/// A kick sequence paired with its basis.
#[derive(Debug, Clone, Copy)]
pub struct Forcing<'a> {
    pub seq: &'a KickSequence,
    pub basis: &'a PotentialBasis,
}

impl<'a> Forcing<'a> {
    pub fn new(seq: &'a KickSequence, basis: &'a PotentialBasis) -> Result<Self> {
        if seq.dim != basis.dim() {
            return Err(Error::DimensionMismatch { expected: basis.dim(), got: seq.dim });
        }
        Ok(Forcing { seq, basis })
    }
}

impl KickField for Forcing<'_> {
    fn grid_size(&self) -> usize {
        self.basis.grid_size()
    }

    fn potential(&self, time: i64) -> Vec<f64> {
        KickPotential { coefficients: self.seq.coefficients(time), time_index: time }.sample(self.basis)
    }
}

/// Kicks before `split` come from `past`, the rest from `future`.
#[derive(Debug, Clone, Copy)]
pub struct Spliced<A, B> {
    pub past: A,
    pub future: B,
    pub split: i64,
}

impl<A: KickField, B: KickField> KickField for Spliced<A, B> {
    fn grid_size(&self) -> usize {
        self.past.grid_size()
    }

    fn potential(&self, time: i64) -> Vec<f64> {
        if time < self.split {
            self.past.potential(time)
        } else {
            self.future.potential(time)
        }
    }
}

/// The same potential at every kick time.
#[derive(Debug, Clone, PartialEq)]
pub struct Constant(pub Vec<f64>);

impl KickField for Constant {
    fn grid_size(&self) -> usize {
        self.0.len()
    }

    fn potential(&self, _time: i64) -> Vec<f64> {
        self.0.clone()
    }
}

/// Explicit per-step potentials; `table[n]` is the kick at time `start + n`.
/// Times outside the table receive no kick.
#[derive(Debug, Clone, PartialEq)]
pub struct Tabulated {
    pub start: i64,
    pub table: Vec<Vec<f64>>,
    pub grid: usize,
}

impl KickField for Tabulated {
    fn grid_size(&self) -> usize {
        self.grid
    }

    fn potential(&self, time: i64) -> Vec<f64> {
        usize::try_from(time - self.start)
            .ok()
            .and_then(|n| self.table.get(n).cloned())
            .unwrap_or_else(|| vec![0.0; self.grid])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forcing::FourierMode;

    fn circle(m: usize) -> PotentialBasis {
        PotentialBasis::fourier(&[FourierMode::cos(1), FourierMode::sin(1)], m).unwrap()
    }

    #[test]
    fn zero_sigma_gives_zero_potential() {
        let b = circle(16);
        let seq = KickSequence::new(7, CoefficientDist::Uniform(0.0), ForcingMode::Kicked, 2);
        let k = kick_at(&seq, &b, 3).unwrap();
        assert!(k.coefficients.iter().all(|&c| c == 0.0));
        assert!(k.sample(&b).iter().all(|&v| v == 0.0));
    }

    #[test]
    fn queries_are_deterministic() {
        let b = circle(16);
        let seq = KickSequence::new(42, CoefficientDist::Gaussian(0.7), ForcingMode::Kicked, 2);
        let a = kick_at(&seq, &b, -5).unwrap();
        let _ = kick_at(&seq, &b, 11).unwrap();
        let c = kick_at(&seq, &b, -5).unwrap();
        assert_eq!(a.coefficients.iter().map(|x| x.to_bits()).collect::<Vec<_>>(),
                   c.coefficients.iter().map(|x| x.to_bits()).collect::<Vec<_>>());
        assert_ne!(a.coefficients, kick_at(&seq, &b, -4).unwrap().coefficients);
    }

    #[test]
    fn uniform_stays_in_box() {
        let seq = KickSequence::new(1, CoefficientDist::Uniform(0.5), ForcingMode::Kicked, 3);
        for j in 0..2000 {
            assert!(seq.coefficients(j).iter().all(|c| c.abs() <= 0.5));
        }
    }

    #[test]
    fn white_substeps_sum_to_unit_variance() {
        let sigma = 0.8;
        let p = 16;
        let n = 10_000;
        let mut sums = Vec::with_capacity(n);
        for s in 0..n as u64 {
            let seq = KickSequence::new(derive_seed(99, s), CoefficientDist::Gaussian(sigma), ForcingMode::White(p), 1);
            sums.push((0..i64::from(p)).map(|j| seq.coefficients(j)[0]).sum::<f64>());
        }
        let mean = sums.iter().sum::<f64>() / n as f64;
        let var = sums.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        assert!((var / (sigma * sigma) - 1.0).abs() < 0.05, "var = {var}");
    }

    #[test]
    fn gaussian_mean_near_zero() {
        let sigma = 1.3;
        let n = 20_000;
        let seq = KickSequence::new(5, CoefficientDist::Gaussian(sigma), ForcingMode::Kicked, 2);
        let mut mean = [0.0; 2];
        for j in 0..n {
            let c = seq.coefficients(j);
            mean[0] += c[0];
            mean[1] += c[1];
        }
        for m in mean {
            assert!((m / n as f64).abs() < 4.0 * sigma / (n as f64).sqrt());
        }
    }

    #[test]
    fn evaluation_examples() {
        let b = circle(64);
        let k = KickPotential { coefficients: vec![1.0, 0.0], time_index: 0 };
        assert_eq!(eval_potential(&k, &b, 0).unwrap(), 1.0);
        let k = KickPotential { coefficients: vec![3.0, 4.0], time_index: 0 };
        assert_eq!(eval_potential(&k, &b, 16).unwrap(), 4.0);
        let z = KickPotential::zero(2, 0);
        assert!((0..64).all(|i| eval_potential(&z, &b, i).unwrap() == 0.0));
        assert_eq!(eval_potential(&z, &b, 64), Err(Error::IndexOutOfRange { index: 64, size: 64 }));
        let g = eval_gradient(&KickPotential { coefficients: vec![0.0, 1.0], time_index: 0 }, &b, 0).unwrap();
        assert!((g - std::f64::consts::TAU).abs() < 1e-12);
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let b = circle(16);
        let seq = KickSequence::new(0, CoefficientDist::Uniform(1.0), ForcingMode::Kicked, 3);
        assert!(kick_at(&seq, &b, 0).is_err());
    }

    #[test]
    fn splice_switches_source() {
        let f = Spliced { past: Constant(vec![1.0; 8]), future: Constant(vec![2.0; 8]), split: 3 };
        assert_eq!(f.potential(2)[0], 1.0);
        assert_eq!(f.potential(3)[0], 2.0);
    }

    proptest::proptest! {
        #[test]
        fn evaluation_is_linear(a in -3.0..3.0f64, bb in -3.0..3.0f64,
                                c1 in proptest::collection::vec(-2.0..2.0f64, 2),
                                c2 in proptest::collection::vec(-2.0..2.0f64, 2),
                                i in 0usize..32) {
            let basis = circle(32);
            let mix: Vec<f64> = c1.iter().zip(&c2).map(|(x, y)| a * x + bb * y).collect();
            let lhs = eval_potential(&KickPotential { coefficients: mix, time_index: 0 }, &basis, i).unwrap();
            let e1 = eval_potential(&KickPotential { coefficients: c1.clone(), time_index: 0 }, &basis, i).unwrap();
            let e2 = eval_potential(&KickPotential { coefficients: c2.clone(), time_index: 0 }, &basis, i).unwrap();
            proptest::prop_assert!((lhs - (a * e1 + bb * e2)).abs() < 1e-12);
        }
    }
}
