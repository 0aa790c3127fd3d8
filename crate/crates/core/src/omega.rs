//! Positions reached at time `s` by backward minimizers, their circle
//! diameter, and the generalized-flow (shock) map from time `s` to time `t`.

use crate::error::{Error, Result};
use crate::solver::{backtrack_from, TieBreak, ValueEvolution};

/// Distinct grid points reached at time `s` by the minimizers ending at
/// every grid point at time `t`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OmegaSet {
    pub grid: usize,
    pub s: i64,
    pub t: i64,
    /// Sorted, duplicate-free.
    pub points: Vec<usize>,
    /// `provenance[k]` is a terminal whose minimizer reaches `points[k]`:
    /// the first one in lifted order among those that do.
    pub provenance: Vec<usize>,
}

impl OmegaSet {
    pub fn contains(&self, y: usize) -> bool {
        self.points.binary_search(&y).is_ok()
    }

    pub fn is_subset_of(&self, other: &OmegaSet) -> bool {
        self.points.iter().all(|&p| other.contains(p))
    }
}

/// Lifted positions at `s` (grid cells) of the minimizers ending at each
/// terminal at `t`.
pub fn lifted_positions(ev: &ValueEvolution, s: i64, t: i64, tie: TieBreak) -> Result<Vec<i64>> {
    check_times(ev, s, t)?;
    let k = (s - ev.start) as usize;
    (0..ev.grid())
        .map(|x| backtrack_from(ev, x, t, tie).map(|p| p.lifted()[k]))
        .collect()
}

fn check_times(ev: &ValueEvolution, s: i64, t: i64) -> Result<()> {
    if s <= ev.start || s > t {
        return Err(Error::TimeOutOfSpan { time: s, start: ev.start + 1, end: t });
    }
    if t > ev.end() {
        return Err(Error::TimeOutOfSpan { time: t, start: ev.start, end: ev.end() });
    }
    Ok(())
}

/// `Ω` at time `s` for minimizers on `[ev.start, ev.end()]`.
pub fn omega_set(ev: &ValueEvolution, s: i64) -> Result<OmegaSet> {
    omega_set_at(ev, s, ev.end())
}

/// `Ω` at time `s` for the evolution truncated at `t`.
pub fn omega_set_at(ev: &ValueEvolution, s: i64, t: i64) -> Result<OmegaSet> {
    let lifted = lifted_positions(ev, s, t, TieBreak::Canonical)?;
    Ok(omega_from_lifted(&lifted, ev.grid(), s, t))
}

fn omega_from_lifted(lifted: &[i64], grid: usize, s: i64, t: i64) -> OmegaSet {
    let m = grid as i64;
    let mut first: Vec<Option<usize>> = vec![None; grid];
    for x in 0..grid {
        let prev = if x == 0 { lifted[grid - 1] - m } else { lifted[x - 1] };
        let y = lifted[x].rem_euclid(m) as usize;
        // first terminal of a run sharing this lifted position
        if prev != lifted[x] {
            first[y] = Some(x);
        }
    }
    let mut points = Vec::new();
    let mut provenance = Vec::new();
    for (y, f) in first.into_iter().enumerate() {
        if let Some(x) = f {
            points.push(y);
            provenance.push(x);
        }
    }
    OmegaSet { grid, s, t, points, provenance }
}

/// Minimal arc length containing the set, in grid cells: `M − largest gap`.
pub fn diameter_cells(omega: &OmegaSet) -> Result<usize> {
    let pts = &omega.points;
    if pts.is_empty() {
        return Err(Error::EmptySet);
    }
    let m = omega.grid;
    let mut gap = pts[0] + m - pts[pts.len() - 1];
    for w in pts.windows(2) {
        gap = gap.max(w[1] - w[0]);
    }
    Ok(m - gap)
}

/// `d(Z) = 1 − m(Z)`, with `m` the longest complementary arc.
pub fn diameter(omega: &OmegaSet) -> Result<f64> {
    Ok(diameter_cells(omega)? as f64 / omega.grid as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShockKind {
    Minimizer,
    Shock,
}

impl ShockKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ShockKind::Minimizer => "minimizer",
            ShockKind::Shock => "shock",
        }
    }
}

/// `S(y)` for every grid point `y` at time `s`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShockMapTable {
    pub grid: usize,
    pub s: i64,
    pub t: i64,
    pub map: Vec<usize>,
    pub kind: Vec<ShockKind>,
}

impl ShockMapTable {
    /// Number of cyclic descents of the map; a circular monotone map of
    /// degree one has exactly one (or none when constant).
    pub fn descents(&self) -> usize {
        let m = self.map.len();
        (0..m).filter(|&y| self.map[(y + 1) % m] < self.map[y]).count()
    }
}

pub fn shock_map(ev: &ValueEvolution, s: i64) -> Result<ShockMapTable> {
    shock_map_at(ev, s, ev.end())
}

/// Assigns each `y` at time `s` the terminal at time `t` whose minimizer
/// reaches it, or whose leftmost/rightmost minimizers bracket it (a shock
/// interval). Points strictly between the brackets of two consecutive
/// terminals go to the nearer one, ties to the left.
pub fn shock_map_at(ev: &ValueEvolution, s: i64, t: i64) -> Result<ShockMapTable> {
    let m = ev.grid();
    let mi = m as i64;
    let canon = lifted_positions(ev, s, t, TieBreak::Canonical)?;
    let left = lifted_positions(ev, s, t, TieBreak::Leftmost)?;
    let right = lifted_positions(ev, s, t, TieBreak::Rightmost)?;
    for x in 0..m {
        let next_left = if x + 1 < m { left[x + 1] } else { left[0] + mi };
        if right[x] > next_left || left[x] > right[x] {
            return Err(Error::MonotonicityViolation(x, (x + 1) % m));
        }
    }
    // Extend periodically over terminals x ∈ ℤ.
    let at = |v: &[i64], x: i64| v[x.rem_euclid(mi) as usize] + mi * x.div_euclid(mi);
    let mut map = vec![0; m];
    let mut kind = vec![ShockKind::Shock; m];
    for y in 0..m {
        let y_lift = left[0] + (y as i64 - left[0]).rem_euclid(mi);
        let inside = (-mi..2 * mi).find(|&x| at(&left, x) <= y_lift && y_lift <= at(&right, x));
        let x = match inside {
            Some(x) => {
                let reached = (x..2 * mi)
                    .take_while(|&z| at(&left, z) <= y_lift && y_lift <= at(&right, z))
                    .any(|z| [at(&left, z), at(&canon, z), at(&right, z)].contains(&y_lift));
                if reached {
                    kind[y] = ShockKind::Minimizer;
                }
                x
            }
            None => {
                let x = (-mi..2 * mi)
                    .find(|&x| at(&right, x) < y_lift && y_lift < at(&left, x + 1))
                    .expect("intervals and gaps tile the line");
                if y_lift - at(&right, x) <= at(&left, x + 1) - y_lift {
                    x
                } else {
                    x + 1
                }
            }
        };
        map[y] = x.rem_euclid(mi) as usize;
    }
    Ok(ShockMapTable { grid: m, s, t, map, kind })
}
