use crate::error::{Error, Result};

/// Kinetic action of a straight segment with lifted displacement `delta + w`
/// over a step of length `dt`, relative to drift `b`.
#[inline]
pub fn segment_cost(delta: f64, w: i32, b: f64, dt: f64) -> f64 {
    let u = delta + f64::from(w) - b * dt;
    u * u / (2.0 * dt)
}

/// Minimal kinetic cost of a segment and the winding realizing it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KineticCost {
    pub cost: f64,
    pub winding: i32,
}

/// Smallest winding bound for which the minimum is always bracketed.
pub fn min_winding_bound(b: f64, dt: f64) -> i32 {
    1 + (b * dt).abs().ceil() as i32
}

/// `min_{|w| ≤ W} (Δ + w − b·dt)² / (2·dt)` with `Δ = (i_to − i_from)/M mod 1`.
/// Ties go to the smallest winding.
pub fn kinetic_cost(i_from: usize, i_to: usize, grid: usize, b: f64, dt: f64, winding_max: i32) -> Result<KineticCost> {
    if dt.is_nan() || dt <= 0.0 {
        return Err(Error::InvalidConfig(format!("step length must be positive, got {dt}")));
    }
    if winding_max < 0 {
        return Err(Error::InvalidConfig(format!("negative winding bound {winding_max}")));
    }
    let d = (i_to + grid - i_from % grid) % grid;
    let delta = d as f64 / grid as f64;
    let mut best = KineticCost { cost: f64::INFINITY, winding: 0 };
    for w in -winding_max..=winding_max {
        let c = segment_cost(delta, w, b, dt);
        if c < best.cost {
            best = KineticCost { cost: c, winding: w };
        }
    }
    let outside = segment_cost(delta, -winding_max - 1, b, dt).min(segment_cost(delta, winding_max + 1, b, dt));
    if outside < best.cost {
        return Err(Error::WindingBoundTooSmall { bound: winding_max, from: i_from, to: i_to });
    }
    Ok(best)
}

/// Kinetic costs indexed by forward grid offset `d = (x − y) mod M`.
#[derive(Debug, Clone, PartialEq)]
pub struct KineticTable {
    pub grid: usize,
    pub b: f64,
    pub dt: f64,
    pub winding_max: i32,
    pub cost: Vec<f64>,
    pub winding: Vec<i32>,
}

impl KineticTable {
    pub fn new(grid: usize, b: f64, dt: f64, winding_max: i32) -> Result<Self> {
        let mut cost = Vec::with_capacity(grid);
        let mut winding = Vec::with_capacity(grid);
        for d in 0..grid {
            let k = kinetic_cost(0, d, grid, b, dt, winding_max)?;
            cost.push(k.cost);
            winding.push(k.winding);
        }
        Ok(KineticTable { grid, b, dt, winding_max, cost, winding })
    }

    #[inline]
    pub fn offset(&self, from: usize, to: usize) -> usize {
        (to + self.grid - from) % self.grid
    }

    /// Lifted displacement in grid cells of the optimal segment `from → to`.
    pub fn displacement(&self, from: usize, to: usize, w: i32) -> i64 {
        self.offset(from, to) as i64 + i64::from(w) * self.grid as i64
    }
}
