//! Principal angles, transition probability, and adjacency classification
//! for pairs of rank-n projections.

use crate::error::{Error, Result};
use crate::matrix::{hermitian_eigen_desc, singular_values_desc, trace};
use crate::projections::{frame_of, Projection};
use crate::scalar::{real, Real};

/// Principal angle spectrum ϑ₁ ≥ ϑ₂ ≥ … ≥ ϑₙ between two rank-n
/// projections, each angle in [0, π/2].
#[derive(Debug, Clone, PartialEq)]
pub struct PrincipalAngles<T: Real> {
    angles: Vec<T>,
}

impl<T: Real> PrincipalAngles<T> {
    pub fn angles(&self) -> &[T] {
        &self.angles
    }

    /// Largest angle ϑ₁.
    pub fn largest(&self) -> T {
        self.angles[0]
    }

    /// Σⱼ cos²ϑⱼ, the angle-side of the two-projections identity.
    pub fn cos_sq_sum(&self) -> T {
        self.angles
            .iter()
            .map(|t| t.cos() * t.cos())
            .fold(T::zero(), |a, b| a + b)
    }

    /// Number of angles exceeding `tol`.
    pub fn nonzero_count(&self, tol: T) -> usize {
        self.angles.iter().filter(|t| **t > tol).count()
    }
}

/// Mutual position of two rank-n projections in the adjacency structure.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AdjacencyClass {
    /// All principal angles zero.
    Equal,
    /// Exactly one nonzero angle and it is π/2.
    OrthogonalAdjacent,
    /// Exactly one nonzero angle, strictly below π/2.
    NonOrthogonalAdjacent,
    /// Two or more nonzero angles.
    NonAdjacent,
}

/// Default tolerance for deciding whether an angle is nonzero.
pub fn default_angle_tol<T: Real>() -> T {
    real(1e-7)
}

fn check_compatible<T: Real>(p: &Projection<T>, q: &Projection<T>) -> Result<()> {
    if p.dim() != q.dim() || p.rank() != q.rank() {
        return Err(Error::DimensionMismatch(format!(
            "projections must share dim and rank, got ({}, {}) and ({}, {})",
            p.dim(),
            p.rank(),
            q.dim(),
            q.rank()
        )));
    }
    Ok(())
}

/// The transition probability tr PQ.
///
/// For projections the trace is real and lies in [0, n]; an imaginary part
/// above 1e−10 (in double precision; scaled by √eps for other widths)
/// signals invalid inputs and is an error.
pub fn transition_probability<T: Real>(p: &Projection<T>, q: &Projection<T>) -> Result<T> {
    check_compatible(p, q)?;
    let t = trace(&(p.matrix() * q.matrix()));
    let guard = T::default_epsilon().sqrt() * real::<T>(1e-10 / f64::EPSILON.sqrt());
    if t.im.abs() > guard {
        return Err(Error::TraceNotReal { imag: t.im.to_f64().unwrap_or(f64::NAN) });
    }
    Ok(t.re)
}

/// Principal angles between P and Q, sorted descending.
///
/// Computed as arccosines of the singular values of the frame overlap
/// F_P* F_Q. These are exactly the n largest singular values of PQ, but the
/// n×n overlap is better conditioned and cheaper than the d×d product.
/// arccos loses precision near zero angles (σ near 1); at the tolerances
/// used here that is acceptable and no sine-based refinement is done.
pub fn principal_angles<T: Real>(p: &Projection<T>, q: &Projection<T>) -> Result<PrincipalAngles<T>> {
    check_compatible(p, q)?;
    let fp = frame_of(p)?;
    let fq = frame_of(q)?;
    let overlap = fp.matrix().adjoint() * fq.matrix();
    let sigma = singular_values_desc(&overlap);
    let mut angles: Vec<T> = sigma
        .iter()
        .map(|s| s.clamp(T::zero(), T::one()).acos())
        .collect();
    angles.reverse();
    Ok(PrincipalAngles { angles })
}

/// |tr PQ − Σⱼ cos²ϑⱼ|, the residual of the two-projections identity.
///
/// Mathematically zero; in floating point it stays at rounding level and is
/// used as a self-consistency check between the trace and SVD pipelines.
pub fn two_projections_identity_residual<T: Real>(
    p: &Projection<T>,
    q: &Projection<T>,
) -> Result<T> {
    let tr = transition_probability(p, q)?;
    let angles = principal_angles(p, q)?;
    Ok((tr - angles.cos_sq_sum()).abs())
}

/// Classifies the pair by its nonzero principal angle count.
///
/// Zero nonzero angles is `Equal`; exactly one is adjacency, split at π/2
/// into the orthogonal and non-orthogonal kinds; two or more is
/// `NonAdjacent`. An adjacent verdict is cross-checked against
/// rank(P−Q) = 2 via the eigenvalues of P−Q.
pub fn classify_adjacency<T: Real>(
    p: &Projection<T>,
    q: &Projection<T>,
    tol: T,
) -> Result<AdjacencyClass> {
    let angles = principal_angles(p, q)?;
    let nonzero = angles.nonzero_count(tol);
    match nonzero {
        0 => Ok(AdjacencyClass::Equal),
        1 => {
            let diff = p.matrix() - q.matrix();
            let (values, _) = hermitian_eigen_desc(&diff);
            let rank_diff = values.iter().filter(|v| v.abs() > tol).count();
            if rank_diff != 2 {
                return Err(Error::CrossCheckFailed { angles: 1, rank_diff });
            }
            if angles.largest() >= T::FRAC_PI_2() - tol {
                Ok(AdjacencyClass::OrthogonalAdjacent)
            } else {
                Ok(AdjacencyClass::NonOrthogonalAdjacent)
            }
        }
        _ => Ok(AdjacencyClass::NonAdjacent),
    }
}
