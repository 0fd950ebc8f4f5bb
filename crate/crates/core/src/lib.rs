//! Numerical toolkit for rank-n projections on finite-dimensional complex
//! Hilbert spaces: principal angles, transition probabilities, adjacency
//! structure, parametrized families of intermediate projections, real-linear
//! extension of projection maps, and reconstruction of the inducing
//! (anti)unitary operator.

pub mod angles;
pub mod aset;
pub mod error;
pub mod extend;
pub mod matrix;
pub mod projections;
pub mod reconstruct;
pub mod rng;
pub mod scalar;

pub use angles::{AdjacencyClass, PrincipalAngles};
pub use aset::{AdjacentBlocks, CircleParam, DimensionEstimate, ProbeReport};
pub use error::{Error, Result};
pub use extend::{
    ExtendedMap, FnOracle, MapOracle, PreservationReport, RankOneDecomposition, SpanningBasis,
    TabulatedOracle,
};
pub use matrix::{CMat, CVec};
pub use projections::{Frame, Projection};
pub use reconstruct::{DualOracle, Form, Linearity, WignerClassification};
pub use scalar::Real;

/// Concrete aliases for the common double-precision instantiation.
pub type ProjectionF64 = Projection<f64>;
pub type FrameF64 = Frame<f64>;
pub type CMatF64 = CMat<f64>;
pub type ExtendedMapF64 = ExtendedMap<f64>;
pub type WignerClassificationF64 = WignerClassification<f64>;

/// Single-precision variants; tests use these to keep the generic paths
/// honest, production work should prefer f64.
pub type ProjectionF32 = Projection<f32>;
pub type FrameF32 = Frame<f32>;
pub type CMatF32 = CMat<f32>;
pub type ExtendedMapF32 = ExtendedMap<f32>;
pub type WignerClassificationF32 = WignerClassification<f32>;
