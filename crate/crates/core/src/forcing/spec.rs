//! Text forms of the forcing configuration:
//! `fourier:1c,1s,2c`, `uniform:0.5` / `gauss:0.5`, `kicked` / `white:16`.

use std::fmt;
use std::str::FromStr;

use super::basis::{FourierMode, PotentialBasis};
use super::kicks::{CoefficientDist, ForcingMode};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Quadrature {
    Cos,
    Sin,
}

/// A Fourier basis named by tokens such as `1c` (cos 2πx) and `2s` (sin 4πx).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisSpec {
    pub terms: Vec<(u32, Quadrature)>,
}

impl BasisSpec {
    pub fn modes(&self) -> Vec<FourierMode> {
        self.terms
            .iter()
            .map(|&(f, q)| match q {
                Quadrature::Cos => FourierMode::cos(f),
                Quadrature::Sin => FourierMode::sin(f),
            })
            .collect()
    }

    pub fn build(&self, grid: usize) -> Result<PotentialBasis> {
        PotentialBasis::fourier(&self.modes(), grid)
    }

    /// Row index of a given term, if present.
    pub fn position(&self, frequency: u32, q: Quadrature) -> Option<usize> {
        self.terms.iter().position(|&t| t == (frequency, q))
    }
}

fn parse_term(tok: &str) -> Result<(u32, Quadrature)> {
    let tok = tok.trim();
    let bad = || Error::InvalidMode(tok.to_string());
    let (num, kind) = tok.split_at(tok.len().checked_sub(1).ok_or_else(bad)?);
    let q = match kind {
        "c" => Quadrature::Cos,
        "s" => Quadrature::Sin,
        _ => return Err(bad()),
    };
    let f: u32 = num.parse().map_err(|_| bad())?;
    if f == 0 {
        return Err(bad());
    }
    Ok((f, q))
}

impl FromStr for BasisSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let body = s
            .trim()
            .strip_prefix("fourier:")
            .ok_or_else(|| Error::InvalidConfig(format!("basis must start with `fourier:`, got `{s}`")))?;
        if body.trim().is_empty() {
            return Err(Error::EmptyBasis);
        }
        let terms = body.split(',').map(parse_term).collect::<Result<Vec<_>>>()?;
        Ok(BasisSpec { terms })
    }
}

impl fmt::Display for BasisSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "fourier:")?;
        for (n, (freq, q)) in self.terms.iter().enumerate() {
            if n > 0 {
                write!(f, ",")?;
            }
            let c = match q {
                Quadrature::Cos => 'c',
                Quadrature::Sin => 's',
            };
            write!(f, "{freq}{c}")?;
        }
        Ok(())
    }
}

fn parse_sigma(s: &str) -> Result<f64> {
    let v: f64 = s
        .trim()
        .parse()
        .map_err(|_| Error::InvalidConfig(format!("bad sigma `{s}`")))?;
    if !v.is_finite() || v < 0.0 {
        return Err(Error::InvalidConfig(format!("sigma must be finite and non-negative, got {v}")));
    }
    Ok(v)
}

impl FromStr for CoefficientDist {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().split_once(':') {
            Some(("uniform", v)) => Ok(CoefficientDist::Uniform(parse_sigma(v)?)),
            Some(("gauss", v)) => Ok(CoefficientDist::Gaussian(parse_sigma(v)?)),
            _ => Err(Error::InvalidConfig(format!("unknown distribution `{s}`"))),
        }
    }
}

impl fmt::Display for CoefficientDist {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoefficientDist::Uniform(s) => write!(f, "uniform:{s}"),
            CoefficientDist::Gaussian(s) => write!(f, "gauss:{s}"),
        }
    }
}

impl FromStr for ForcingMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "kicked" {
            return Ok(ForcingMode::Kicked);
        }
        match s.split_once(':') {
            Some(("white", p)) => match p.trim().parse::<u32>() {
                Ok(p) if p >= 1 => Ok(ForcingMode::White(p)),
                _ => Err(Error::InvalidConfig(format!("bad sub-step count in `{s}`"))),
            },
            _ => Err(Error::InvalidConfig(format!("unknown mode `{s}`"))),
        }
    }
}

impl fmt::Display for ForcingMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ForcingMode::Kicked => write!(f, "kicked"),
            ForcingMode::White(p) => write!(f, "white:{p}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_tokens() {
        let b: BasisSpec = "fourier:1c,1s,2c,2s".parse().unwrap();
        assert_eq!(b.terms.len(), 4);
        assert_eq!(b.terms[3], (2, Quadrature::Sin));
        assert_eq!(b.to_string(), "fourier:1c,1s,2c,2s");
        assert_eq!(b.position(2, Quadrature::Cos), Some(2));
        assert_eq!("uniform:0.5".parse::<CoefficientDist>().unwrap(), CoefficientDist::Uniform(0.5));
        assert_eq!("gauss:2".parse::<CoefficientDist>().unwrap(), CoefficientDist::Gaussian(2.0));
        assert_eq!("white:16".parse::<ForcingMode>().unwrap(), ForcingMode::White(16));
        assert_eq!("kicked".parse::<ForcingMode>().unwrap(), ForcingMode::Kicked);
    }

    #[test]
    fn rejects_garbage() {
        for s in ["fourier:", "fourier:0c", "fourier:1x", "cheb:1c", "fourier:c"] {
            assert!(s.parse::<BasisSpec>().is_err(), "{s}");
        }
        assert!("uniform:-1".parse::<CoefficientDist>().is_err());
        assert!("cauchy:1".parse::<CoefficientDist>().is_err());
        assert!("white:0".parse::<ForcingMode>().is_err());
        assert!("pink".parse::<ForcingMode>().is_err());
    }
}
