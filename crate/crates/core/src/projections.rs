//! Rank-n orthogonal projections on ℂ^d: construction, validation, Haar
//! sampling, and frame decomposition.
//!
//! A rank-n projection is identified with its range, an n-dimensional
//! subspace; [`Frame`] carries an orthonormal basis of that range and the two
//! directions of the identification are [`project_from_frame`] and
//! [`frame_of`].

use rand::Rng;

use crate::error::{Error, Result};
use crate::matrix::{
    hermitian_deviation, hermitian_eigen_desc, idempotency_deviation, max_modulus, trace, CMat,
};
use crate::rng::{complex_gaussian, rng_from_seed};
use crate::scalar::{cmod, real, Real};

/// Validated rank-n orthogonal projection on ℂ^d.
///
/// Invariants (enforced by [`validate_projection`] at tolerance `tol`):
/// Hermitian, idempotent, trace within `tol` of the integer `rank`, and
/// `1 <= rank < dim`.
#[derive(Debug, Clone, PartialEq)]
pub struct Projection<T: Real> {
    matrix: CMat<T>,
    rank: usize,
    dim: usize,
    tol: T,
}

impl<T: Real> Projection<T> {
    pub fn matrix(&self) -> &CMat<T> {
        &self.matrix
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Tolerance the projection was validated at.
    pub fn tol(&self) -> T {
        self.tol
    }

    pub fn into_matrix(self) -> CMat<T> {
        self.matrix
    }

    /// Wraps a matrix known to be a rank-n projection by construction,
    /// skipping validation. Callers must guarantee the invariants.
    pub(crate) fn trusted(matrix: CMat<T>, rank: usize, tol: T) -> Self {
        let dim = matrix.nrows();
        Projection { matrix, rank, dim, tol }
    }
}

/// Orthonormal n-frame in ℂ^d, stored as the d×n matrix of its columns.
#[derive(Debug, Clone, PartialEq)]
pub struct Frame<T: Real> {
    matrix: CMat<T>,
    dim: usize,
    rank: usize,
}

impl<T: Real> Frame<T> {
    /// Checks column orthonormality (`‖F*F − I‖_max ≤ tol`) and wraps.
    pub fn new(matrix: CMat<T>, tol: T) -> Result<Self> {
        let dim = matrix.nrows();
        let rank = matrix.ncols();
        if rank == 0 || rank > dim {
            return Err(Error::DimensionMismatch(format!(
                "frame must have between 1 and {dim} columns, got {rank}"
            )));
        }
        let gram = matrix.adjoint() * &matrix;
        let dev = max_modulus(&(gram - CMat::<T>::identity(rank, rank)));
        if dev > tol {
            return Err(Error::NotOrthonormal {
                deviation: dev.to_f64().unwrap_or(f64::NAN),
                tol: tol.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(Frame { matrix, dim, rank })
    }

    pub fn matrix(&self) -> &CMat<T> {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub(crate) fn trusted(matrix: CMat<T>) -> Self {
        let dim = matrix.nrows();
        let rank = matrix.ncols();
        Frame { matrix, dim, rank }
    }
}

/// Default validation tolerance for dimension d: 1e−8·d in double
/// precision, loose enough for accumulated rounding at desk scale (d ≤ 64)
/// and far below any structural deviation. Other scalar widths keep the
/// same position relative to their machine epsilon (√eps·d up to the
/// constant), so f32 resolves to about 2e−4·d.
pub fn default_tol<T: Real>(d: usize) -> T {
    let unit = T::default_epsilon().sqrt() * real::<T>(1e-8 / f64::EPSILON.sqrt());
    unit * real::<T>(d as f64)
}

/// The projection F F* onto the span of the frame's columns.
pub fn project_from_frame<T: Real>(f: &Frame<T>) -> Projection<T> {
    let matrix = f.matrix() * f.matrix().adjoint();
    Projection::trusted(matrix, f.rank(), default_tol(f.dim()))
}

/// Validates a square matrix as a rank-n projection.
///
/// Checks, in order: Hermitian, idempotent, trace real and within `tol` of
/// an integer n with 1 ≤ n < d, and that n matches the count of eigenvalues
/// ≥ 1/2. The rank is never guessed: a trace/eigencount mismatch is an
/// error, not a choice.
pub fn validate_projection<T: Real>(m: CMat<T>, tol: T) -> Result<Projection<T>> {
    let d = m.nrows();
    if m.ncols() != d || d == 0 {
        return Err(Error::DimensionMismatch(format!(
            "projection must be square and nonempty, got {}x{}",
            d,
            m.ncols()
        )));
    }
    let herm = hermitian_deviation(&m);
    if herm > tol {
        return Err(Error::NotHermitian {
            deviation: herm.to_f64().unwrap_or(f64::NAN),
            tol: tol.to_f64().unwrap_or(f64::NAN),
        });
    }
    let idem = idempotency_deviation(&m);
    if idem > tol {
        return Err(Error::NotIdempotent {
            deviation: idem.to_f64().unwrap_or(f64::NAN),
            tol: tol.to_f64().unwrap_or(f64::NAN),
        });
    }
    let t = trace(&m);
    if t.im.abs() > tol {
        return Err(Error::TraceNotReal { imag: t.im.to_f64().unwrap_or(f64::NAN) });
    }
    let tr = t.re.to_f64().unwrap_or(f64::NAN);
    let trace_rank = tr.round() as i64;
    let (values, _) = hermitian_eigen_desc(&m);
    let eigen_rank = values.iter().filter(|v| **v >= real::<T>(0.5)).count();
    let tol_f = tol.to_f64().unwrap_or(f64::NAN);
    if (tr - trace_rank as f64).abs() > tol_f
        || trace_rank < 1
        || trace_rank >= d as i64
        || eigen_rank != trace_rank as usize
    {
        return Err(Error::RankMismatch { trace_rank, eigen_rank, dim: d });
    }
    Ok(Projection { matrix: m, rank: trace_rank as usize, dim: d, tol })
}

/// Haar-random d×n orthonormal frame drawn from the given stream.
///
/// QR of a complex Gaussian matrix with the R-diagonal phase fix: each Q
/// column is divided by the phase of the matching R diagonal entry, which
/// makes the column distribution exactly Haar rather than merely invariant
/// in distribution up to phases.
pub fn haar_frame<T: Real, R: Rng>(d: usize, n: usize, rng: &mut R) -> Frame<T> {
    let g = CMat::<T>::from_fn(d, n, |_, _| complex_gaussian(rng));
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..n {
        let rjj = r[(j, j)];
        let mag = cmod(rjj);
        if mag > T::zero() {
            let phase_conj = rjj.conj() / crate::scalar::cr(mag);
            for i in 0..d {
                q[(i, j)] *= phase_conj;
            }
        }
    }
    Frame::trusted(q)
}

/// Haar-random rank-n projection, deterministic in the seed.
pub fn random_projection<T: Real>(d: usize, n: usize, seed: u64) -> Result<Projection<T>> {
    if n == 0 || n >= d {
        return Err(Error::DimensionMismatch(format!(
            "rank must satisfy 1 <= n < d, got n={n}, d={d}"
        )));
    }
    let mut rng = rng_from_seed(seed);
    Ok(project_from_frame(&haar_frame(d, n, &mut rng)))
}

/// Haar-random d×d unitary, deterministic in the seed.
pub fn random_unitary<T: Real>(d: usize, seed: u64) -> CMat<T> {
    let mut rng = rng_from_seed(seed);
    haar_frame::<T, _>(d, d, &mut rng).matrix().clone()
}

/// The complementary projection I − P, of rank d − n.
pub fn complement<T: Real>(p: &Projection<T>) -> Projection<T> {
    let mut m = -p.matrix().clone();
    for i in 0..p.dim() {
        m[(i, i)] += crate::scalar::cone::<T>();
    }
    Projection::trusted(m, p.dim() - p.rank(), p.tol())
}

/// Orthonormal basis of im P, the eigenvectors with eigenvalue near 1.
///
/// Fails if the spectrum does not split into exactly `rank` eigenvalues on
/// the 1-side of the threshold 1/2.
pub fn frame_of<T: Real>(p: &Projection<T>) -> Result<Frame<T>> {
    let (values, vectors) = hermitian_eigen_desc(p.matrix());
    let cluster = values.iter().filter(|v| **v >= real::<T>(0.5)).count();
    if cluster != p.rank() {
        return Err(Error::ClusterNotSeparated { eigen_rank: cluster, rank: p.rank() });
    }
    Ok(Frame::trusted(vectors.columns(0, p.rank()).into_owned()))
}

/// The projection U P U* with the same rank; U must be unitary.
pub fn conjugated<T: Real>(u: &CMat<T>, p: &Projection<T>) -> Projection<T> {
    let matrix = u * p.matrix() * u.adjoint();
    Projection::trusted(matrix, p.rank(), p.tol())
}

/// The entrywise conjugate of P in the standard basis, again a projection
/// of the same rank.
pub fn conjugate_entrywise<T: Real>(p: &Projection<T>) -> Projection<T> {
    let matrix = p.matrix().map(|z| z.conj());
    Projection::trusted(matrix, p.rank(), p.tol())
}

/// The rank-n projection onto the span of the n leading eigenvectors of a
/// Hermitian matrix. Spectral re-projection: the nearest rank-n projection
/// when the gap between the n-th and (n+1)-th eigenvalues is open.
pub fn nearest_projection<T: Real>(a: &CMat<T>, n: usize) -> Result<Projection<T>> {
    let d = a.nrows();
    if n == 0 || n >= d {
        return Err(Error::DimensionMismatch(format!(
            "need 1 <= n < d for a rank-n projection, got n={n}, d={d}"
        )));
    }
    let (_, vectors) = hermitian_eigen_desc(a);
    let frame = Frame::trusted(vectors.columns(0, n).into_owned());
    Ok(project_from_frame(&frame))
}
