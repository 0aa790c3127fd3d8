//! Lax–Oleinik dynamic programming for ψ-minimizers on the grid `i / M`.
//!
//! Between kicks minimizers are straight, so restricting to piecewise-linear
//! paths with breakpoints at kick times is exact for kicked forcing. Each
//! step minimizes over all `M` sources; the winding of a segment is chosen
//! by the kinetic table.

mod evolve;
mod kinetic;
mod path;

pub use evolve::{
    evolve, lax_oleinik_step, lax_oleinik_step_kick, SolverConfig, Step, ValueEvolution, INFINITY_SENTINEL,
};
pub use kinetic::{kinetic_cost, min_winding_bound, segment_cost, KineticCost, KineticTable};
pub use path::{backtrack, backtrack_from, path_action, MinimizerPath, TieBreak};
