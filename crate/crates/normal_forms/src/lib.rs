//! Normal forms of a commuting pair `(A, B)` of symmetric operators with
//! `A² + B² = Id` on Lorentzian ℝ³: the five raw cases, the four refined
//! Lagrangian cases, a seeded generator, and the totally geodesic angle filter.

pub mod cases;
pub mod classify;
pub mod generate;
pub mod pair;
pub mod refine;
pub mod spectrum;

pub use cases::{angle_dist, lattice_dist, wrap_2pi, NormalFormCase};
pub use classify::{classify, Classification};
pub use generate::{generate, random_isometry};
pub use pair::{Delta, OperatorPair, PairResiduals};
pub use refine::{
    isometry_angle_map, refine, totally_geodesic_angle_filter, AngleMap, AngleTriple, FilterOutcome,
    CANONICAL_TRIPLES,
};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum NfError {
    #[error("invalid operator pair: {what} (residual {residual:e})")]
    InvalidPair { what: &'static str, residual: f64 },
    #[error("eigenvalue gap {gap:e} lies in the ambiguity band")]
    Ambiguous { gap: f64 },
    #[error("unsupported pair: {0}")]
    Unsupported(String),
    #[error("parameter constraint violated: {0}")]
    Constraint(String),
    #[error("rejected: {relation} fails (residual {residual:e})")]
    Rejected { relation: String, residual: f64 },
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("parse error: {0}")]
    Parse(String),
}
