use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde::Serialize;

use super::SeparationCertificate;
use crate::error::{Error, Result};
use crate::forcing::PotentialBasis;

/// Constants of the halving argument. `α` and the integers are computed in
/// exact rational arithmetic; `N` is far beyond `f64` integer precision.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProofConstants {
    /// `max_i ‖F̃_i‖_{C¹}` on the grid.
    pub c1_norm: f64,
    pub c: f64,
    pub alpha: f64,
    /// Exact `α` as `numerator/denominator`.
    pub alpha_exact: String,
    /// `N′ = ⌊2 + 1/α³⌋ + 1`, decimal.
    pub n_prime: String,
    /// `N = ⌊2/α¹⁰ + 1⌋ + 1`, decimal.
    pub n: String,
}

fn rational(x: f64) -> Result<BigRational> {
    BigRational::from_float(x).ok_or_else(|| Error::InvalidConfig(format!("non-finite value {x}")))
}

fn floor_int(q: &BigRational) -> BigInt {
    q.floor().to_integer()
}

/// Constants from the C¹ bound and `α₀`; `white_b` adds the white-noise
/// cap `α ≤ 1/(10(|b| + 1)²)`.
pub fn constants_from(c1_norm: f64, alpha0: f64, white_b: Option<f64>) -> Result<ProofConstants> {
    if alpha0.is_nan() || alpha0 <= 0.0 || c1_norm.is_nan() || c1_norm < 0.0 {
        return Err(Error::InvalidConfig("need alpha_0 > 0 and a finite C1 norm".into()));
    }
    let one = BigRational::one();
    let ten = BigRational::from_integer(10.into());
    let c = BigRational::from_integer(3.into()) * (rational(c1_norm)? + &one);
    let mut alpha = rational(alpha0)?.min(&one / (&ten * &c));
    if let Some(b) = white_b {
        let s = rational(b.abs())? + &one;
        alpha = alpha.min(&one / (&ten * &s * &s));
    }
    let alpha_f = alpha.to_f64().unwrap_or(f64::NAN);
    if alpha >= BigRational::new(1.into(), 30.into()) {
        return Err(Error::AlphaNotSmall(alpha_f));
    }
    let a3 = &alpha * &alpha * &alpha;
    let a10 = &a3 * &a3 * &a3 * &alpha;
    let two = BigRational::from_integer(2.into());
    let n_prime: BigInt = floor_int(&(&two + &one / &a3)) + 1;
    if BigRational::from_integer(n_prime.clone()) >= &two / &a3 {
        return Err(Error::EmptyInterval("N'"));
    }
    let n: BigInt = floor_int(&(&two / &a10 + &one)) + 1;
    if BigRational::from_integer(n.clone()) >= BigRational::from_integer(4.into()) / &a10 {
        return Err(Error::EmptyInterval("N"));
    }
    Ok(ProofConstants {
        c1_norm,
        c: c.to_f64().unwrap_or(f64::NAN),
        alpha: alpha_f,
        alpha_exact: format!("{}/{}", alpha.numer(), alpha.denom()),
        n_prime: n_prime.to_string(),
        n: n.to_string(),
    })
}

/// Constants for a separation certificate: the C¹ norm is the largest
/// `sup|F̃_i| + sup|F̃_i′|` over the three certified potentials.
pub fn proof_constants(cert: &SeparationCertificate, basis: &PotentialBasis, white_b: Option<f64>) -> Result<ProofConstants> {
    let sup = |v: Vec<f64>| v.iter().fold(0.0f64, |a, x| a.max(x.abs()));
    let mut norm = 0.0f64;
    for c in &cert.coefficients {
        if c.len() != basis.dim() {
            return Err(Error::DimensionMismatch { expected: basis.dim(), got: c.len() });
        }
        let v = basis.combine_all(basis.values(), c);
        let g = basis.combine_all(basis.gradients(), c);
        norm = norm.max(sup(v) + sup(g));
    }
    constants_from(norm, cert.alpha0, white_b)
}
