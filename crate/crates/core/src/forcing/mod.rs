//! Potential bases on the circle, reproducible random kicks, and checks of
//! the non-degeneracy assumptions on the forcing.

mod basis;
mod embedding;
mod kicks;
mod spec;

pub use basis::{FourierMode, PotentialBasis, MIN_GRID};
pub use embedding::{check_embedding, check_embedding_with, EmbeddingReport, EmbeddingWitness, EMBEDDING_TOLERANCE};
pub use kicks::{
    derive_seed, eval_gradient, eval_potential, kick_at, CoefficientDist, Constant, Forcing, ForcingMode,
    KickField, KickPotential, KickSequence, Spliced, Tabulated,
};
pub use spec::{BasisSpec, Quadrature};
