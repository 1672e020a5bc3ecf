//! Structured linear algebra for delay Vandermonde matrices, the steering
//! matrices of uniformly spaced true-time-delay antenna arrays.
//!
//! A delay Vandermonde matrix of size N is generated by one complex node α,
//! usually `e^{-jθ}` on the unit circle: entry `(k, l)` is `α^{kl}` with rows
//! `k = 1..=N` and columns `l = 0..N-1`. The scaled variant starts its rows
//! at `k = 0` instead. Both factor recursively through powers of the
//! companion matrix of `x^{N/2} - w(x)` at the squared node, which brings
//! the multiply below the dense row-by-row evaluation while every complex
//! addition and multiplication stays individually countable.
//!
//! What the crate offers:
//!
//! - factorization plans ([`build_plan`]) and the fast multiplies
//!   ([`sdvm_multiply`], [`dvm_multiply`]), next to the dense reference
//!   [`direct_multiply`],
//! - closed-form and measured operation counts with table emitters
//!   ([`sdvm_counts_formula`], [`measure_counts`], [`emit_complexity_table`]),
//! - forward rounding-error measurement against an extended-precision
//!   reference and a priori relative error bounds ([`forward_error`],
//!   [`bound_sdvm`], [`bound_dvm`], [`emit_error_table`]),
//! - a frequency-independent multi-beam receive pipeline built on the fast
//!   multiply ([`synthesize`], [`temporal_dft`], [`beamform`]).
//!
//! Nodes with `α^d = 1` for some `d < n` make the factorization's diagonal
//! scalings repeat and the companion coefficients blow up, so such nodes are
//! flagged as degenerate ([`Node::is_degenerate`]): multiplies still run and
//! report honestly, while the bound constructors refuse unless the caller
//! opts into the unchecked variants.

#![forbid(unsafe_code)]

use thiserror::Error;

mod apply;
mod beam;
mod companion;
mod complexity;
mod count;
mod dd;
mod error;
mod node;
mod plan;
mod poly;
mod scalar;

/// Errors reported by plan construction, the multiplies, and the table
/// emitters.
#[derive(Debug, Error)]
pub enum DvmError {
    /// The node value was zero, which generates no Vandermonde structure.
    #[error("node value must be nonzero")]
    ZeroNode,
    /// A size that must be a power of two (of at least 2) was not.
    #[error("size {0} is not a power of two of at least 2")]
    NotPowerOfTwo(usize),
    /// A size outside the range an operation supports.
    #[error("invalid size {size}: {reason}")]
    InvalidSize {
        size: usize,
        reason: &'static str,
    },
    /// An input vector whose length disagrees with the plan or matrix.
    #[error("length mismatch: expected {expected}, got {got}")]
    SizeMismatch { expected: usize, got: usize },
    /// The node has a power equal to 1 below the matrix size, so the
    /// checked error bounds decline to vouch for the factorization.
    #[error("node is degenerate at size {n}: a power of the node below {n} equals 1")]
    DegenerateNode { n: usize },
    /// A bound denominator reached 1, so the a priori estimate carries no
    /// information at this size and precision.
    #[error("error bound is vacuous: accumulated term {value} is not below 1")]
    BoundInapplicable { value: f64 },
    /// A configuration value that failed validation.
    #[error("{0}")]
    InvalidConfig(String),
    /// An underlying I/O failure while writing a table.
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub use apply::{apply_ctilde, direct_multiply, dvm_multiply, sdvm_multiply};
pub use beam::{
    beam_powers, beamform, beamform_with, synthesize, temporal_dft, ArrayConfig, BeamFrame,
    PlanCache, SourcePosition, SourceSpec, SpectralFrame,
};
pub use companion::{companion_power, CompanionPower};
pub use complexity::{
    complexity_rows, direct_counts, dvm_counts_formula, emit_complexity_table, measure_counts,
    sdvm_counts_formula, Algorithm, ComplexityRow, TableFormat, Variant, MAX_TABLE_SIZE,
};
pub use count::OpCount;
pub use dd::Dd;
pub use error::{
    bound_dvm, bound_dvm_unchecked, bound_sdvm, bound_sdvm_unchecked, emit_error_table,
    forward_error, BoundParams, ErrorReport, MAX_ERROR_TABLE_SIZE,
};
pub use node::{Node, DEGENERACY_TOL};
pub use plan::{build_plan, FactorizationPlan, PlanLevel};
pub use poly::poly_coefficients;
pub use scalar::{Real, Wide};
