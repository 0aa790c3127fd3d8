//! Backward ψ-minimizers of kicked random Lagrangian systems on the circle,
//! computed by Lax–Oleinik dynamic programming, and Monte-Carlo diagnostics
//! of how fast the set of minimizer positions contracts.
//!
//! The crate is organized bottom-up:
//!
//! * [`forcing`] builds potential bases and seed-keyed kick sequences;
//! * [`solver`] runs the dynamic program and recovers minimizing paths;
//! * [`omega`] collects minimizer positions, their circle diameter and the
//!   shock map;
//! * [`experiments`] holds decay, halving, convergence, Lyapunov and
//!   separation diagnostics;
//! * [`oracle`] enumerates paths exhaustively on small grids.

pub mod error;
pub mod experiments;
pub mod forcing;
pub mod omega;
pub mod oracle;
pub mod output;
pub mod solver;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/intro.md")]
    mod intro {}
    #[doc = include_str!("../../../book/src/forcing.md")]
    mod forcing {}
    #[doc = include_str!("../../../book/src/solver.md")]
    mod solver {}
    #[doc = include_str!("../../../book/src/omega.md")]
    mod omega {}
    #[doc = include_str!("../../../book/src/contraction.md")]
    mod contraction {}
    #[doc = include_str!("../../../book/src/hyperbolicity.md")]
    mod hyperbolicity {}
    #[doc = include_str!("../../../book/src/separation.md")]
    mod separation {}
}
