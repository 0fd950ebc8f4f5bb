//! Error type shared by all modules.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong while validating inputs or running the
/// reconstruction pipeline. Diagnostic magnitudes are reported as `f64`
/// regardless of the working scalar type.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not Hermitian: max |M - M*| = {deviation:.3e} exceeds tol {tol:.3e}")]
    NotHermitian { deviation: f64, tol: f64 },

    #[error("matrix is not idempotent: max |M^2 - M| = {deviation:.3e} exceeds tol {tol:.3e}")]
    NotIdempotent { deviation: f64, tol: f64 },

    #[error(
        "rank check failed: trace gives {trace_rank}, eigenvalue count gives {eigen_rank}, \
         dim {dim} (need 1 <= rank < dim and agreement)"
    )]
    RankMismatch {
        trace_rank: i64,
        eigen_rank: usize,
        dim: usize,
    },

    #[error("trace has non-negligible imaginary part {imag:.3e}")]
    TraceNotReal { imag: f64 },

    #[error("frame columns are not orthonormal: max |F*F - I| = {deviation:.3e} exceeds tol {tol:.3e}")]
    NotOrthonormal { deviation: f64, tol: f64 },

    #[error("eigenvalue cluster not separated: {eigen_rank} eigenvalues above 1/2, expected {rank}")]
    ClusterNotSeparated { eigen_rank: usize, rank: usize },

    #[error("projections are not adjacent")]
    NotAdjacent,

    #[error("projections are not non-orthogonally adjacent")]
    NotNonOrthAdjacent,

    #[error("adjacency cross-check failed: {angles} non-zero principal angles but rank(P-Q) = {rank_diff}")]
    CrossCheckFailed { angles: usize, rank_diff: usize },

    #[error("insufficient samples: {found} membership-passing points ({reason})")]
    InsufficientSamples { found: usize, reason: String },

    #[error("dimension too small: need dim >= {needed}, have {dim}")]
    DimensionTooSmall { dim: usize, needed: usize },

    #[error("projection basis selection failed: Gram rank stalled at {selected} of {needed}")]
    BasisSelectionFailed { selected: usize, needed: usize },

    #[error("oracle returned an invalid projection: {0}")]
    OracleInvalidOutput(String),

    #[error("tabulated oracle has no entry within {tol:.1e} of the requested projection (closest {closest:.3e})")]
    OracleMiss { closest: f64, tol: f64 },

    #[error("oracle table is empty or lacks usable entries: {0}")]
    OracleTableUnusable(String),

    #[error("map does not preserve the transition probability: worst residual {residual:.3e}")]
    NotPreserving { residual: f64 },

    #[error(
        "extended map sends rank-one projections neither to rank-one projections nor to their \
         complement pattern (worst residual {residual:.3e}); the input map is not of Wigner type"
    )]
    NotWigner { residual: f64 },

    #[error("phase fix failed: probe overlap {overlap:.3e} below 1e-6, the rank-one table is inconsistent")]
    PhaseFixFailed { overlap: f64 },

    #[error("linearity test ambiguous: |<linear>| = {linear:.3e}, |<antilinear>| = {antilinear:.3e}")]
    LinearityAmbiguous { linear: f64, antilinear: f64 },

    #[error("verification failed: worst Hilbert-Schmidt mismatch {residual:.3e} exceeds {tol:.3e}")]
    VerificationFailed { residual: f64, tol: f64 },

    #[error("serialization error: {0}")]
    Serialization(String),
}
