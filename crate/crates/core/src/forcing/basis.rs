use std::f64::consts::{FRAC_PI_2, TAU};

use crate::error::{Error, Result};

/// Smallest grid the solver accepts.
pub const MIN_GRID: usize = 8;

/// One Fourier row `cos(2π f x − φ)`; phase `π/2` gives `sin(2π f x)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FourierMode {
    pub frequency: u32,
    pub phase: f64,
}

impl FourierMode {
    pub fn cos(frequency: u32) -> Self {
        FourierMode { frequency, phase: 0.0 }
    }

    pub fn sin(frequency: u32) -> Self {
        FourierMode { frequency, phase: FRAC_PI_2 }
    }

    fn angle(&self, x: f64) -> f64 {
        TAU * f64::from(self.frequency) * x - self.phase
    }

    pub fn value(&self, x: f64) -> f64 {
        self.angle(x).cos()
    }

    pub fn gradient(&self, x: f64) -> f64 {
        -TAU * f64::from(self.frequency) * self.angle(x).sin()
    }

    pub fn curvature(&self, x: f64) -> f64 {
        let w = TAU * f64::from(self.frequency);
        -w * w * self.angle(x).cos()
    }
}

/// `K` periodic potentials sampled on the grid `x_i = i / M`, with first and
/// second derivatives.
#[derive(Debug, Clone, PartialEq)]
pub struct PotentialBasis {
    grid: usize,
    values: Vec<Vec<f64>>,
    gradients: Vec<Vec<f64>>,
    curvatures: Vec<Vec<f64>>,
}

impl PotentialBasis {
    /// Rows `cos(2π f x − φ)` with analytic derivatives.
    pub fn fourier(modes: &[FourierMode], grid: usize) -> Result<Self> {
        if grid < MIN_GRID {
            return Err(Error::GridTooSmall(grid, MIN_GRID));
        }
        if modes.is_empty() {
            return Err(Error::EmptyBasis);
        }
        if let Some(m) = modes.iter().find(|m| m.frequency == 0) {
            return Err(Error::InvalidMode(format!("frequency must be positive, got {}", m.frequency)));
        }
        let xs: Vec<f64> = (0..grid).map(|i| i as f64 / grid as f64).collect();
        let table = |f: &dyn Fn(&FourierMode, f64) -> f64| -> Vec<Vec<f64>> {
            modes.iter().map(|m| xs.iter().map(|&x| f(m, x)).collect()).collect()
        };
        Ok(PotentialBasis {
            grid,
            values: table(&FourierMode::value),
            gradients: table(&FourierMode::gradient),
            curvatures: table(&FourierMode::curvature),
        })
    }

    /// Basis from explicit `K × M` tables.
    pub fn from_tables(
        values: Vec<Vec<f64>>,
        gradients: Vec<Vec<f64>>,
        curvatures: Vec<Vec<f64>>,
    ) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptyBasis);
        }
        let grid = values[0].len();
        if grid < MIN_GRID {
            return Err(Error::GridTooSmall(grid, MIN_GRID));
        }
        for table in [&values, &gradients, &curvatures] {
            if table.len() != values.len() {
                return Err(Error::DimensionMismatch { expected: values.len(), got: table.len() });
            }
            if let Some(row) = table.iter().find(|r| r.len() != grid) {
                return Err(Error::DimensionMismatch { expected: grid, got: row.len() });
            }
        }
        Ok(PotentialBasis { grid, values, gradients, curvatures })
    }

    /// Same functions translated by `shift` grid cells: row'(i) = row(i − shift).
    pub fn rotated(&self, shift: usize) -> Self {
        let m = self.grid;
        let rot = |t: &Vec<Vec<f64>>| -> Vec<Vec<f64>> {
            t.iter()
                .map(|row| (0..m).map(|i| row[(i + m - shift % m) % m]).collect())
                .collect()
        };
        PotentialBasis {
            grid: m,
            values: rot(&self.values),
            gradients: rot(&self.gradients),
            curvatures: rot(&self.curvatures),
        }
    }

    pub fn grid_size(&self) -> usize {
        self.grid
    }

    /// Number of basis potentials `K`.
    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[Vec<f64>] {
        &self.values
    }

    pub fn gradients(&self) -> &[Vec<f64>] {
        &self.gradients
    }

    pub fn curvatures(&self) -> &[Vec<f64>] {
        &self.curvatures
    }

    /// Largest `|F^k|` over the grid, per row.
    pub fn sup_norms(&self) -> Vec<f64> {
        self.values
            .iter()
            .map(|row| row.iter().fold(0.0_f64, |a, v| a.max(v.abs())))
            .collect()
    }

    pub(crate) fn combine(table: &[Vec<f64>], coefficients: &[f64], i: usize) -> f64 {
        let mut acc = 0.0;
        for (c, row) in coefficients.iter().zip(table) {
            acc += c * row[i];
        }
        acc
    }

    pub(crate) fn combine_all(&self, table: &[Vec<f64>], coefficients: &[f64]) -> Vec<f64> {
        (0..self.grid).map(|i| Self::combine(table, coefficients, i)).collect()
    }
}
