use super::kinetic::{min_winding_bound, KineticTable};
use crate::error::{Error, Result};
use crate::forcing::{KickField, KickPotential, PotentialBasis};

/// Stand-in for `+∞` in value tables.
pub const INFINITY_SENTINEL: f64 = 1e15;

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    pub grid: usize,
    /// First-integral value (mean velocity).
    pub b: f64,
    pub winding_max: i32,
    /// Initial time `r` (kick index).
    pub t_start: i64,
    /// Final time `t` (kick index).
    pub t_end: i64,
    /// Time between kicks: 1 for kicked forcing, `1/P` for white forcing.
    pub step: f64,
    /// Initial condition at `t_start`.
    pub psi: Vec<f64>,
}

impl SolverConfig {
    /// Kicked-mode config with `ψ ≡ 0` and the smallest safe winding bound.
    pub fn kicked(grid: usize, b: f64, t_start: i64, t_end: i64) -> Self {
        SolverConfig {
            grid,
            b,
            winding_max: min_winding_bound(b, 1.0),
            t_start,
            t_end,
            step: 1.0,
            psi: vec![0.0; grid],
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.grid < crate::forcing::MIN_GRID {
            return Err(Error::GridTooSmall(self.grid, crate::forcing::MIN_GRID));
        }
        if self.psi.len() != self.grid {
            return Err(Error::DimensionMismatch { expected: self.grid, got: self.psi.len() });
        }
        if self.step.is_nan() || self.step <= 0.0 || !self.b.is_finite() {
            return Err(Error::InvalidConfig(format!("bad step {} or drift {}", self.step, self.b)));
        }
        let need = min_winding_bound(self.b, self.step);
        if self.winding_max < need {
            return Err(Error::InvalidConfig(format!(
                "winding bound {} below {} required for b = {}",
                self.winding_max, need, self.b
            )));
        }
        if self.t_start > self.t_end {
            return Err(Error::InvalidConfig(format!("t_start {} > t_end {}", self.t_start, self.t_end)));
        }
        Ok(())
    }
}

/// One dynamic-programming transition.
#[derive(Debug, Clone, PartialEq)]
pub struct Step {
    pub phi: Vec<f64>,
    pub backptr: Vec<u32>,
    pub winding: Vec<i32>,
}

/// `phi_next[x] = min_y phi[y] − F(y) + kinetic(y, x)`, scanning sources in
/// increasing index so ties go to the smallest source (then smallest winding,
/// which the kinetic table already resolves).
pub fn lax_oleinik_step(phi: &[f64], potential: &[f64], kinetic: &KineticTable) -> Step {
    let m = kinetic.grid;
    debug_assert_eq!(phi.len(), m);
    debug_assert_eq!(potential.len(), m);
    let g: Vec<f64> = phi.iter().zip(potential).map(|(p, f)| p - f).collect();
    let cost = &kinetic.cost;
    let mut out = Step { phi: vec![0.0; m], backptr: vec![0; m], winding: vec![0; m] };
    for x in 0..m {
        let mut best = f64::INFINITY;
        let mut arg = 0;
        // offsets x - y for y ≤ x, then x + M - y for y > x
        for y in 0..=x {
            let v = g[y] + cost[x - y];
            if v < best {
                best = v;
                arg = y;
            }
        }
        for y in x + 1..m {
            let v = g[y] + cost[x + m - y];
            if v < best {
                best = v;
                arg = y;
            }
        }
        out.phi[x] = best;
        out.backptr[x] = arg as u32;
        out.winding[x] = kinetic.winding[kinetic.offset(arg, x)];
    }
    out
}

/// Step driven by a kick expressed in a basis.
pub fn lax_oleinik_step_kick(
    phi: &[f64],
    kick: &KickPotential,
    basis: &PotentialBasis,
    kinetic: &KineticTable,
) -> Result<Step> {
    if phi.len() != kinetic.grid || basis.grid_size() != kinetic.grid {
        return Err(Error::DimensionMismatch { expected: kinetic.grid, got: phi.len() });
    }
    if kick.coefficients.len() != basis.dim() {
        return Err(Error::DimensionMismatch { expected: basis.dim(), got: kick.coefficients.len() });
    }
    Ok(lax_oleinik_step(phi, &kick.sample(basis), kinetic))
}

/// Value functions and backpointers from `start` to `start + steps()`.
///
/// `phi[n]` is the value at time `start + n`; `backptr[n][x]` and
/// `winding[n][x]` describe the optimal last segment into `x` at time
/// `start + n + 1`, which used the kick `potentials[n]` at time `start + n`.
#[derive(Debug, Clone, PartialEq)]
pub struct ValueEvolution {
    pub start: i64,
    pub kinetic: KineticTable,
    pub phi: Vec<Vec<f64>>,
    pub backptr: Vec<Vec<u32>>,
    pub winding: Vec<Vec<i32>>,
    pub potentials: Vec<Vec<f64>>,
}

impl ValueEvolution {
    pub fn grid(&self) -> usize {
        self.kinetic.grid
    }

    pub fn steps(&self) -> usize {
        self.backptr.len()
    }

    pub fn end(&self) -> i64 {
        self.start + self.steps() as i64
    }

    pub fn step_length(&self) -> f64 {
        self.kinetic.dt
    }

    /// Value table at `time`.
    pub fn value(&self, time: i64) -> Result<&[f64]> {
        Ok(&self.phi[self.index(time)?])
    }

    pub(crate) fn index(&self, time: i64) -> Result<usize> {
        if time < self.start || time > self.end() {
            return Err(Error::TimeOutOfSpan { time, start: self.start, end: self.end() });
        }
        Ok((time - self.start) as usize)
    }

    /// Continues the evolution up to `t_end` with kicks from `field`.
    pub fn extend(&mut self, field: &impl KickField, t_end: i64) -> Result<()> {
        if field.grid_size() != self.grid() {
            return Err(Error::DimensionMismatch { expected: self.grid(), got: field.grid_size() });
        }
        for time in self.end()..t_end {
            let potential = field.potential(time);
            let step = lax_oleinik_step(self.phi.last().expect("phi[0] always present"), &potential, &self.kinetic);
            self.phi.push(step.phi);
            self.backptr.push(step.backptr);
            self.winding.push(step.winding);
            self.potentials.push(potential);
        }
        Ok(())
    }

    /// Evolution truncated at `t_end`.
    pub fn truncated(&self, t_end: i64) -> Result<ValueEvolution> {
        let n = self.index(t_end)?;
        Ok(ValueEvolution {
            start: self.start,
            kinetic: self.kinetic.clone(),
            phi: self.phi[..=n].to_vec(),
            backptr: self.backptr[..n].to_vec(),
            winding: self.winding[..n].to_vec(),
            potentials: self.potentials[..n].to_vec(),
        })
    }

    /// Lifted source position (grid cells, relative to the lifted target) for
    /// every target of step `n`.
    pub fn lifted_sources(&self, n: usize) -> Vec<i64> {
        (0..self.grid())
            .map(|x| {
                let y = self.backptr[n][x] as usize;
                x as i64 - self.kinetic.displacement(y, x, self.winding[n][x])
            })
            .collect()
    }

    /// Checks that every lifted backpointer map is non-decreasing with total
    /// winding one turn, i.e. optimal segments never cross.
    pub fn check_noncrossing(&self) -> Result<()> {
        let m = self.grid() as i64;
        for n in 0..self.steps() {
            let src = self.lifted_sources(n);
            for x in 0..src.len() {
                let next = if x + 1 < src.len() { src[x + 1] } else { src[0] + m };
                if next < src[x] {
                    return Err(Error::MonotonicityViolation(x, (x + 1) % src.len()));
                }
            }
        }
        Ok(())
    }
}

/// Iterates the Lax–Oleinik step from `cfg.t_start` to `cfg.t_end`.
pub fn evolve(cfg: &SolverConfig, field: &impl KickField) -> Result<ValueEvolution> {
    cfg.validate()?;
    if field.grid_size() != cfg.grid {
        return Err(Error::DimensionMismatch { expected: cfg.grid, got: field.grid_size() });
    }
    let kinetic = KineticTable::new(cfg.grid, cfg.b, cfg.step, cfg.winding_max)?;
    let mut ev = ValueEvolution {
        start: cfg.t_start,
        kinetic,
        phi: vec![cfg.psi.clone()],
        backptr: Vec::new(),
        winding: Vec::new(),
        potentials: Vec::new(),
    };
    ev.extend(field, cfg.t_end)?;
    Ok(ev)
}
