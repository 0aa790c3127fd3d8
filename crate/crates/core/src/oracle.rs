//! Exhaustive path enumeration for small instances.
//!
//! Nothing here calls into the solver's kinetic table or step: every grid
//! path `(y_0, …, y_{n-1}, x)` is scored directly from the action. The
//! kinetic term is separable over segments, so each segment's winding is
//! minimized on its own by scanning `[-W, W]`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::forcing::{derive_seed, CoefficientDist, Forcing, FourierMode, ForcingMode, KickField, KickSequence, PotentialBasis};
use crate::solver::{backtrack, evolve, SolverConfig};

/// A small problem: initial condition at time 0 and the kicks at times `0..n`.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub grid: usize,
    pub b: f64,
    pub dt: f64,
    pub winding_max: i32,
    pub psi: Vec<f64>,
    pub potentials: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OraclePath {
    pub value: f64,
    pub positions: Vec<usize>,
    pub windings: Vec<i32>,
}

impl OraclePath {
    /// Lifted position at `index`, in grid cells, anchored at the terminal.
    pub fn lifted_at(&self, index: usize, grid: usize) -> i64 {
        let mut p = *self.positions.last().unwrap() as i64;
        for n in (index..self.windings.len()).rev() {
            let d = (self.positions[n + 1] + grid - self.positions[n]) % grid;
            p -= d as i64 + i64::from(self.windings[n]) * grid as i64;
        }
        p
    }
}

impl Instance {
    fn steps(&self) -> usize {
        self.potentials.len()
    }

    fn segment(&self, from: usize, to: usize, w: i32) -> f64 {
        let delta = ((to + self.grid - from) % self.grid) as f64 / self.grid as f64;
        let u = delta + f64::from(w) - self.b * self.dt;
        u * u / (2.0 * self.dt)
    }

    /// Cheapest winding per (from, to); ties to the smaller winding.
    fn segment_table(&self) -> Vec<Vec<(f64, i32)>> {
        (0..self.grid)
            .map(|from| {
                (0..self.grid)
                    .map(|to| {
                        let mut best = (f64::INFINITY, 0);
                        for w in -self.winding_max..=self.winding_max {
                            let c = self.segment(from, to, w);
                            if c < best.0 {
                                best = (c, w);
                            }
                        }
                        best
                    })
                    .collect()
            })
            .collect()
    }

    /// Every interior sequence `(y_0, …, y_{n-1})`, with `y_{n-1}` the most
    /// significant digit, so equal values are met in increasing order of the
    /// reversed tuple.
    fn for_each_path(&self, mut f: impl FnMut(&[usize])) {
        let n = self.steps();
        let mut ys = vec![0usize; n];
        loop {
            f(&ys);
            let mut k = 0;
            loop {
                if k == n {
                    return;
                }
                ys[k] += 1;
                if ys[k] < self.grid {
                    break;
                }
                ys[k] = 0;
                k += 1;
            }
        }
    }

    fn score(&self, ys: &[usize], x: usize, seg: &[Vec<(f64, i32)>]) -> f64 {
        let mut acc = self.psi[ys.first().copied().unwrap_or(x)];
        for k in 0..ys.len() {
            let to = if k + 1 < ys.len() { ys[k + 1] } else { x };
            acc = (acc - self.potentials[k][ys[k]]) + seg[ys[k]][to].0;
        }
        acc
    }

    /// Optimal path into every terminal, ties resolved toward the smallest
    /// last source, then the smallest earlier sources.
    pub fn optimal_paths(&self) -> Vec<OraclePath> {
        let seg = self.segment_table();
        (0..self.grid)
            .map(|x| {
                let mut best: Option<(f64, Vec<usize>)> = None;
                self.for_each_path(|ys| {
                    let v = self.score(ys, x, &seg);
                    if best.as_ref().is_none_or(|(b, _)| v < *b) {
                        best = Some((v, ys.to_vec()));
                    }
                });
                let (value, ys) = best.unwrap();
                let mut positions = ys;
                positions.push(x);
                let windings = positions.windows(2).map(|p| seg[p[0]][p[1]].1).collect();
                OraclePath { value, positions, windings }
            })
            .collect()
    }

    /// All exact minimizers into `x`, including every tied winding.
    pub fn all_optimal(&self, x: usize) -> Vec<OraclePath> {
        let seg = self.segment_table();
        let mut best = f64::INFINITY;
        let mut found: Vec<Vec<usize>> = Vec::new();
        self.for_each_path(|ys| {
            let v = self.score(ys, x, &seg);
            if v < best {
                best = v;
                found.clear();
            }
            if v == best {
                found.push(ys.to_vec());
            }
        });
        let mut out = Vec::new();
        for ys in found {
            let mut positions = ys;
            positions.push(x);
            let choices: Vec<Vec<i32>> = positions
                .windows(2)
                .map(|p| {
                    let c = seg[p[0]][p[1]].0;
                    (-self.winding_max..=self.winding_max).filter(|&w| self.segment(p[0], p[1], w) == c).collect()
                })
                .collect();
            let mut idx = vec![0usize; choices.len()];
            loop {
                let windings = idx.iter().zip(&choices).map(|(&i, c)| c[i]).collect();
                out.push(OraclePath { value: best, positions: positions.clone(), windings });
                let mut k = 0;
                while k < idx.len() {
                    idx[k] += 1;
                    if idx[k] < choices[k].len() {
                        break;
                    }
                    idx[k] = 0;
                    k += 1;
                }
                if k == idx.len() {
                    break;
                }
            }
        }
        out
    }
}

/// Random instance: circle basis kicks at σ = 1, random ψ, and `b` drawn in
/// `[-1, 1]` for odd seeds (zero otherwise).
pub fn random_instance(grid: usize, steps: usize, seed: u64, winding_max: i32) -> Instance {
    let basis = PotentialBasis::fourier(&[FourierMode::cos(1), FourierMode::sin(1)], grid).expect("grid >= 8");
    let seq = KickSequence::new(derive_seed(seed, grid as u64), CoefficientDist::Uniform(1.0), ForcingMode::Kicked, 2);
    let forcing = Forcing { seq: &seq, basis: &basis };
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, 1 << 40));
    let psi = (0..grid).map(|_| rng.random::<f64>() - 0.5).collect();
    let b = if seed % 2 == 1 { 2.0 * rng.random::<f64>() - 1.0 } else { 0.0 };
    Instance {
        grid,
        b,
        dt: 1.0,
        winding_max,
        psi,
        potentials: (0..steps as i64).map(|t| forcing.potential(t)).collect(),
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SuiteReport {
    pub cases: usize,
    pub value_mismatches: usize,
    pub path_mismatches: usize,
    pub max_relative_error: f64,
    pub failures: Vec<String>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.value_mismatches == 0 && self.path_mismatches == 0 && self.failures.is_empty()
    }
}

/// Grid sizes used by the equivalence suite.
pub const SUITE_GRIDS: [usize; 3] = [8, 12, 16];

/// Compares the dynamic-programming solver against enumeration for every
/// grid in [`SUITE_GRIDS`] up to `max_grid`, every horizon `1..=max_steps`,
/// and `seeds` random instances each.
pub fn run_suite(max_grid: usize, max_steps: usize, seeds: u64, tolerance: f64) -> SuiteReport {
    let mut report = SuiteReport::default();
    for &m in SUITE_GRIDS.iter().filter(|&&m| m <= max_grid) {
        for steps in 1..=max_steps {
            for seed in 0..seeds {
                let inst = random_instance(m, steps, seed, 2);
                report.cases += 1;
                compare(&inst, tolerance, &mut report, &format!("M={m} steps={steps} seed={seed}"));
            }
        }
    }
    report
}

fn compare(inst: &Instance, tolerance: f64, report: &mut SuiteReport, label: &str) {
    let cfg = SolverConfig {
        grid: inst.grid,
        b: inst.b,
        winding_max: inst.winding_max,
        t_start: 0,
        t_end: inst.potentials.len() as i64,
        step: inst.dt,
        psi: inst.psi.clone(),
    };
    let field = crate::forcing::Tabulated { start: 0, table: inst.potentials.clone(), grid: inst.grid };
    let ev = match evolve(&cfg, &field) {
        Ok(ev) => ev,
        Err(e) => {
            report.failures.push(format!("{label}: solver error {e}"));
            return;
        }
    };
    let expected = inst.optimal_paths();
    let last = ev.phi.last().unwrap();
    for (x, want) in expected.iter().enumerate() {
        let rel = (last[x] - want.value).abs() / want.value.abs().max(1.0);
        report.max_relative_error = report.max_relative_error.max(rel);
        if rel > tolerance {
            report.value_mismatches += 1;
            report.failures.push(format!("{label} x={x}: value {} vs {}", last[x], want.value));
        }
        let got = backtrack(&ev, x).expect("terminal in range");
        if got.positions != want.positions || got.windings != want.windings {
            report.path_mismatches += 1;
            report
                .failures
                .push(format!("{label} x={x}: path {:?}/{:?} vs {:?}/{:?}", got.positions, got.windings, want.positions, want.windings));
        }
    }
}
