//! Monte-Carlo and diagnostic layer built on the solver.
//!
//! Times are kick indices. With white forcing there are `P` kicks per unit
//! time; horizons and the gap `r = s − 1` are always given in unit time and
//! converted here.

mod constants;
mod convergence;
mod decay;
mod events;
mod fit;
mod halving;
mod lyapunov;
mod separation;

pub use constants::{constants_from, proof_constants, ProofConstants};
pub use convergence::{circle_hausdorff, two_solution_convergence};
pub use decay::{decay_experiment, DecaySeries};
pub use events::{event_probability, sup_norm, EventEstimate};
pub use fit::{default_burn_in, fit_exponential, fit_lambda, DecayFit, NO_DECAY_THRESHOLD};
pub use halving::{halving_frequency, scan_halving, HalvingConfig, HalvingEstimate};
pub use lyapunov::{lyapunov_exponent, lyapunov_from_curvatures, LyapunovEstimate, MIN_LYAPUNOV_KICKS};
pub use separation::{rotated_cosine_triple, separation_check, Arc, SeparationCertificate, SeparationFailure};

use crate::error::Result;
use crate::forcing::{derive_seed, CoefficientDist, Forcing, ForcingMode, KickSequence, PotentialBasis};
use crate::omega::{diameter_cells, omega_set_at};
use crate::solver::{evolve, min_winding_bound, SolverConfig, ValueEvolution};

/// Everything a Monte-Carlo sample needs except its seed.
#[derive(Debug, Clone, PartialEq)]
pub struct Setup {
    pub basis: PotentialBasis,
    pub distribution: CoefficientDist,
    pub mode: ForcingMode,
    pub b: f64,
    pub winding_max: i32,
    /// Initial condition at `r = s − 1`.
    pub psi: Vec<f64>,
    pub master_seed: u64,
}

impl Setup {
    /// Kicked forcing, `ψ ≡ 0`, smallest safe winding bound.
    pub fn new(basis: PotentialBasis, distribution: CoefficientDist, b: f64, master_seed: u64) -> Self {
        let grid = basis.grid_size();
        Setup {
            basis,
            distribution,
            mode: ForcingMode::Kicked,
            b,
            winding_max: min_winding_bound(b, 1.0),
            psi: vec![0.0; grid],
            master_seed,
        }
    }

    pub fn grid(&self) -> usize {
        self.basis.grid_size()
    }

    /// Kicks per unit time.
    pub fn substeps(&self) -> i64 {
        i64::from(self.mode.substeps())
    }

    /// Kick index of the observation time `s`; the initial time `r` is 0.
    pub fn s(&self) -> i64 {
        self.substeps()
    }

    /// Kick index of `s + horizon` (horizon in unit time).
    pub fn time_at(&self, horizon: i64) -> i64 {
        self.s() + horizon * self.substeps()
    }

    /// The kick stream of sample `k`.
    pub fn sequence(&self, k: u64) -> KickSequence {
        KickSequence::new(derive_seed(self.master_seed, k), self.distribution, self.mode, self.basis.dim())
    }

    pub fn solver_config(&self, t_end: i64) -> SolverConfig {
        SolverConfig {
            grid: self.grid(),
            b: self.b,
            winding_max: self.winding_max,
            t_start: 0,
            t_end,
            step: self.mode.step(),
            psi: self.psi.clone(),
        }
    }

    /// Evolution of sample `k` from `r` up to `s + horizon`.
    pub fn run(&self, k: u64, horizon: i64) -> Result<ValueEvolution> {
        let seq = self.sequence(k);
        evolve(&self.solver_config(self.time_at(horizon)), &Forcing::new(&seq, &self.basis)?)
    }

    /// Diameter of `Ω_{s, s+h}` in grid cells.
    pub fn diameter_cells_at(&self, ev: &ValueEvolution, horizon: i64) -> Result<usize> {
        diameter_cells(&omega_set_at(ev, self.s(), self.time_at(horizon))?)
    }
}
