//! Flat `key = value` run configuration.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use minlab::experiments::Setup;
use minlab::forcing::{BasisSpec, CoefficientDist, ForcingMode, PotentialBasis};
use minlab::solver::min_winding_bound;

/// Initial condition `ψ`: zero, or `A·cos 2πx` / `A·sin 2πx`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Psi {
    Zero,
    Cos(f64),
    Sin(f64),
}

impl Psi {
    pub fn sample(&self, grid: usize) -> Vec<f64> {
        let angle = |i: usize| 2.0 * std::f64::consts::PI * i as f64 / grid as f64;
        match *self {
            Psi::Zero => vec![0.0; grid],
            Psi::Cos(a) => (0..grid).map(|i| a * angle(i).cos()).collect(),
            Psi::Sin(a) => (0..grid).map(|i| a * angle(i).sin()).collect(),
        }
    }
}

impl FromStr for Psi {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let bad = || format!("bad psi '{s}' (expected zero, cos:A or sin:A)");
        match s.trim().split_once(':') {
            None if s.trim() == "zero" => Ok(Psi::Zero),
            Some(("cos", a)) => a.parse().map(Psi::Cos).map_err(|_| bad()),
            Some(("sin", a)) => a.parse().map(Psi::Sin).map_err(|_| bad()),
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for Psi {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Psi::Zero => write!(f, "zero"),
            Psi::Cos(a) => write!(f, "cos:{a}"),
            Psi::Sin(a) => write!(f, "sin:{a}"),
        }
    }
}

/// Inclusive horizon range `A..B`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Horizons {
    pub first: i64,
    pub last: i64,
}

impl Horizons {
    pub fn list(&self) -> Vec<i64> {
        (self.first..=self.last).collect()
    }
}

impl FromStr for Horizons {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let bad = || format!("bad horizons '{s}' (expected A..B with 0 <= A <= B)");
        let (a, b) = s.trim().split_once("..").ok_or_else(bad)?;
        let first: i64 = a.trim().parse().map_err(|_| bad())?;
        let last: i64 = b.trim().parse().map_err(|_| bad())?;
        if first < 0 || last < first {
            return Err(bad());
        }
        Ok(Horizons { first, last })
    }
}

impl fmt::Display for Horizons {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.first, self.last)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub grid: usize,
    pub b: f64,
    /// `None` picks the smallest bound that always brackets the optimum.
    pub winding_max: Option<i32>,
    pub basis: BasisSpec,
    pub distribution: CoefficientDist,
    pub mode: ForcingMode,
    pub psi: Psi,
    pub samples: usize,
    pub horizons: Horizons,
    /// `None` means the first 20% of horizons.
    pub burn_in: Option<usize>,
    pub out: PathBuf,
    pub seed: u64,
    pub t_halving: Option<i64>,
    pub halving_pasts: usize,
    pub halving_futures: usize,
    pub halving_past_len: i64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            grid: 256,
            b: 0.0,
            winding_max: None,
            basis: "fourier:1c,1s".parse().expect("valid literal"),
            distribution: CoefficientDist::Uniform(1.0),
            mode: ForcingMode::Kicked,
            psi: Psi::Zero,
            samples: 200,
            horizons: Horizons { first: 1, last: 30 },
            burn_in: None,
            out: PathBuf::from("out"),
            seed: 42,
            t_halving: None,
            halving_pasts: 10,
            halving_futures: 20,
            halving_past_len: 1,
        }
    }
}

const KEYS: &[&str] = &[
    "grid",
    "b",
    "winding_max",
    "basis",
    "distribution",
    "mode",
    "psi",
    "samples",
    "horizons",
    "burn_in",
    "out",
    "seed",
    "t_halving",
    "halving_pasts",
    "halving_futures",
    "halving_past_len",
];

fn parse_value<T: FromStr>(key: &str, value: &str) -> Result<T, String>
where
    T::Err: fmt::Display,
{
    value.parse().map_err(|e| format!("{key}: {e}"))
}

fn parse_auto<T: FromStr>(key: &str, value: &str) -> Result<Option<T>, String>
where
    T::Err: fmt::Display,
{
    if value == "auto" {
        Ok(None)
    } else {
        parse_value(key, value).map(Some)
    }
}

fn show_auto<T: fmt::Display>(v: &Option<T>) -> String {
    v.as_ref().map_or("auto".to_string(), |v| v.to_string())
}

impl RunConfig {
    /// Applies one `key = value` assignment.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        let v = value.trim();
        match key {
            "grid" => self.grid = parse_value(key, v)?,
            "b" => self.b = parse_value(key, v)?,
            "winding_max" => self.winding_max = parse_auto(key, v)?,
            "basis" => self.basis = parse_value(key, v)?,
            "distribution" => self.distribution = parse_value(key, v)?,
            "mode" => self.mode = parse_value(key, v)?,
            "psi" => self.psi = parse_value(key, v)?,
            "samples" => self.samples = parse_value(key, v)?,
            "horizons" => self.horizons = parse_value(key, v)?,
            "burn_in" => self.burn_in = parse_auto(key, v)?,
            "out" => self.out = PathBuf::from(v),
            "seed" => self.seed = parse_value(key, v)?,
            "t_halving" => self.t_halving = parse_auto(key, v)?,
            "halving_pasts" => self.halving_pasts = parse_value(key, v)?,
            "halving_futures" => self.halving_futures = parse_value(key, v)?,
            "halving_past_len" => self.halving_past_len = parse_value(key, v)?,
            _ => return Err(format!("unknown key '{key}'")),
        }
        Ok(())
    }

    /// Parses a config file on top of the defaults. Blank lines and `#`
    /// comments are skipped; repeated keys are an error.
    pub fn parse(text: &str) -> Result<Self, String> {
        let mut cfg = RunConfig::default();
        let mut seen = Vec::new();
        for (n, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| format!("line {}: expected key = value", n + 1))?;
            let k = k.trim();
            if seen.contains(&k) {
                return Err(format!("line {}: duplicate key '{k}'", n + 1));
            }
            seen.push(k);
            cfg.set(k, v).map_err(|e| format!("line {}: {e}", n + 1))?;
        }
        Ok(cfg)
    }

    fn value_of(&self, key: &str) -> String {
        match key {
            "grid" => self.grid.to_string(),
            "b" => self.b.to_string(),
            "winding_max" => show_auto(&self.winding_max),
            "basis" => self.basis.to_string(),
            "distribution" => self.distribution.to_string(),
            "mode" => self.mode.to_string(),
            "psi" => self.psi.to_string(),
            "samples" => self.samples.to_string(),
            "horizons" => self.horizons.to_string(),
            "burn_in" => show_auto(&self.burn_in),
            "out" => self.out.display().to_string(),
            "seed" => self.seed.to_string(),
            "t_halving" => show_auto(&self.t_halving),
            "halving_pasts" => self.halving_pasts.to_string(),
            "halving_futures" => self.halving_futures.to_string(),
            "halving_past_len" => self.halving_past_len.to_string(),
            _ => unreachable!("KEYS and value_of agree"),
        }
    }

    /// Range checks that do not need any computation.
    pub fn validate(&self) -> Result<(), String> {
        let check = |ok: bool, msg: &str| if ok { Ok(()) } else { Err(msg.to_string()) };
        check(self.b.is_finite(), "b must be finite")?;
        check(self.distribution.sigma().is_finite() && self.distribution.sigma() >= 0.0, "sigma must be >= 0")?;
        check(self.samples > 0, "samples must be positive")?;
        check(self.winding_max.is_none_or(|w| w >= 1), "winding_max must be >= 1")?;
        check(self.t_halving.is_none_or(|t| t >= 1), "t_halving must be >= 1")?;
        check(self.halving_pasts > 0 && self.halving_futures > 0, "halving trial counts must be positive")?;
        check(self.halving_past_len >= 0, "halving_past_len must be >= 0")?;
        if let ForcingMode::White(0) = self.mode {
            return Err("white mode needs at least one kick per unit time".into());
        }
        self.basis.build(self.grid).map(|_| ()).map_err(|e| e.to_string())
    }

    pub fn basis(&self) -> Result<PotentialBasis, String> {
        self.basis.build(self.grid).map_err(|e| e.to_string())
    }

    pub fn burn_in(&self) -> usize {
        self.burn_in.unwrap_or_else(|| minlab::experiments::default_burn_in(self.horizons.list().len()))
    }

    pub fn setup(&self) -> Result<Setup, String> {
        let basis = self.basis()?;
        let winding_max = self.winding_max.unwrap_or_else(|| min_winding_bound(self.b, self.mode.step()));
        Ok(Setup {
            psi: self.psi.sample(self.grid),
            basis,
            distribution: self.distribution,
            mode: self.mode,
            b: self.b,
            winding_max,
            master_seed: self.seed,
        })
    }
}

impl fmt::Display for RunConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for key in KEYS {
            writeln!(f, "{key} = {}", self.value_of(key))?;
        }
        Ok(())
    }
}
