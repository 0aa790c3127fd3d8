use super::evolve::{SolverConfig, ValueEvolution};
use super::kinetic::segment_cost;
use crate::error::{Error, Result};
use crate::forcing::KickField;

/// A piecewise-linear grid path; `positions[n]` is the point at time `start + n`.
#[derive(Debug, Clone, PartialEq)]
pub struct MinimizerPath {
    pub start: i64,
    pub step: f64,
    pub grid: usize,
    pub positions: Vec<usize>,
    /// `windings[n]` is the winding of the segment from `positions[n]` to `positions[n + 1]`.
    pub windings: Vec<i32>,
    pub terminal: usize,
}

impl MinimizerPath {
    pub fn end(&self) -> i64 {
        self.start + self.windings.len() as i64
    }

    /// Lifted displacement of segment `n`, in grid cells.
    pub fn displacement(&self, n: usize) -> i64 {
        let m = self.grid;
        let d = (self.positions[n + 1] + m - self.positions[n]) % m;
        d as i64 + i64::from(self.windings[n]) * m as i64
    }

    /// Lifted positions in grid cells, anchored at the terminal.
    pub fn lifted(&self) -> Vec<i64> {
        let mut out = vec![0; self.positions.len()];
        let last = out.len() - 1;
        out[last] = self.terminal as i64;
        for n in (0..last).rev() {
            out[n] = out[n + 1] - self.displacement(n);
        }
        out
    }

    /// Velocity relative to the drift on each segment, `γ̇ − b`.
    pub fn relative_velocities(&self, b: f64) -> Vec<f64> {
        (0..self.windings.len())
            .map(|n| self.displacement(n) as f64 / self.grid as f64 / self.step - b)
            .collect()
    }
}

/// Which optimal predecessor to follow when several achieve the minimum.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TieBreak {
    /// Stored backpointers: smallest source index, then smallest winding.
    Canonical,
    /// Leftmost lifted source among exact minimizers.
    Leftmost,
    /// Rightmost lifted source among exact minimizers.
    Rightmost,
}

pub fn backtrack(ev: &ValueEvolution, terminal: usize) -> Result<MinimizerPath> {
    backtrack_from(ev, terminal, ev.end(), TieBreak::Canonical)
}

/// Backtracks from `terminal` at time `t_end` down to the start of `ev`.
pub fn backtrack_from(ev: &ValueEvolution, terminal: usize, t_end: i64, tie: TieBreak) -> Result<MinimizerPath> {
    let m = ev.grid();
    if terminal >= m {
        return Err(Error::IndexOutOfRange { index: terminal, size: m });
    }
    let steps = ev.index(t_end)?;
    let mut positions = vec![0; steps + 1];
    let mut windings = vec![0; steps];
    positions[steps] = terminal;
    let mut x = terminal;
    for n in (0..steps).rev() {
        let (y, w) = match tie {
            TieBreak::Canonical => (ev.backptr[n][x] as usize, ev.winding[n][x]),
            TieBreak::Leftmost | TieBreak::Rightmost => extreme_predecessor(ev, n, x, tie == TieBreak::Leftmost),
        };
        positions[n] = y;
        windings[n] = w;
        x = y;
    }
    Ok(MinimizerPath { start: ev.start, step: ev.step_length(), grid: m, positions, windings, terminal })
}

/// Among all `(y, w)` reaching `phi[n + 1][x]` exactly, the one with the
/// largest (leftmost) or smallest (rightmost) lifted displacement.
fn extreme_predecessor(ev: &ValueEvolution, n: usize, x: usize, leftmost: bool) -> (usize, i32) {
    let k = &ev.kinetic;
    let target = ev.phi[n + 1][x];
    let mut pick: Option<(i64, usize, i32)> = None;
    for y in 0..ev.grid() {
        let g = ev.phi[n][y] - ev.potentials[n][y];
        let delta = k.offset(y, x) as f64 / k.grid as f64;
        for w in -k.winding_max..=k.winding_max {
            if g + segment_cost(delta, w, k.b, k.dt) == target {
                let disp = k.displacement(y, x, w);
                let better = match pick {
                    None => true,
                    Some((d, _, _)) => (leftmost && disp > d) || (!leftmost && disp < d),
                };
                if better {
                    pick = Some((disp, y, w));
                }
            }
        }
    }
    let (_, y, w) = pick.expect("stored backpointer always attains the minimum");
    (y, w)
}

/// `ψ(γ(r)) + Σ_n [−F(n)(γ(n)) + kinetic_n]`, accumulated in time order.
pub fn path_action(path: &MinimizerPath, field: &impl KickField, cfg: &SolverConfig) -> Result<f64> {
    if path.grid != cfg.grid || field.grid_size() != cfg.grid {
        return Err(Error::PathMismatch(format!("grid {} vs config grid {}", path.grid, cfg.grid)));
    }
    if path.positions.len() != path.windings.len() + 1 || path.positions.last() != Some(&path.terminal) {
        return Err(Error::PathMismatch("positions, windings and terminal are inconsistent".into()));
    }
    if path.start != cfg.t_start || path.end() != cfg.t_end {
        return Err(Error::PathMismatch(format!(
            "path spans [{}, {}], config spans [{}, {}]",
            path.start,
            path.end(),
            cfg.t_start,
            cfg.t_end
        )));
    }
    if path.positions.iter().any(|&p| p >= cfg.grid) {
        return Err(Error::PathMismatch("position outside the grid".into()));
    }
    let m = cfg.grid;
    let mut acc = cfg.psi[path.positions[0]];
    for n in 0..path.windings.len() {
        let y = path.positions[n];
        let potential = field.potential(path.start + n as i64);
        let delta = ((path.positions[n + 1] + m - y) % m) as f64 / m as f64;
        acc = (acc - potential[y]) + segment_cost(delta, path.windings[n], cfg.b, cfg.step);
    }
    Ok(acc)
}
