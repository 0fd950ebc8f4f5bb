//! Real-linear extension of a projection map to the full Hermitian space.
//!
//! A map φ on rank-n projections that preserves tr PQ extends uniquely to a
//! real-linear map Φ on Hermitian matrices. The extension is built
//! constructively: every rank-one projection is a real combination of n+1
//! rank-n projections, the standard Hermitian basis elements decompose into
//! rank-ones, and evaluating φ on d² selected rank-n projections pins Φ
//! down as a real d²×d² matrix in Hermitian coordinates.
//!
//! Hermitian coordinates are taken in the orthonormal real basis
//! {Eⱼⱼ; (Eⱼₖ+Eₖⱼ)/√2; i(Eⱼₖ−Eₖⱼ)/√2}, which turns tr(AB) into the
//! Euclidean inner product.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::matrix::{hs_distance, CMat, CVec};
use crate::projections::{
    default_tol, frame_of, random_projection, validate_projection, Projection,
};
use crate::rng::{gaussian, rng_from_seed, split_seed};
use crate::scalar::{ci, cr, real, Real};
use rand::Rng;

/// Position of an element in the standard Hermitian basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisKind {
    /// Eⱼⱼ
    Diagonal(usize),
    /// (Eⱼₖ + Eₖⱼ)/√2 with j < k
    RealOffDiag(usize, usize),
    /// i(Eⱼₖ − Eₖⱼ)/√2 with j < k
    ImagOffDiag(usize, usize),
}

/// One element of the orthonormal Hermitian basis of d×d matrices.
#[derive(Debug, Clone)]
pub struct HermitianBasisElement<T: Real> {
    kind: BasisKind,
    matrix: CMat<T>,
}

impl<T: Real> HermitianBasisElement<T> {
    pub fn kind(&self) -> BasisKind {
        self.kind
    }

    pub fn matrix(&self) -> &CMat<T> {
        &self.matrix
    }
}

fn basis_matrix<T: Real>(d: usize, kind: BasisKind) -> CMat<T> {
    let mut m = CMat::<T>::zeros(d, d);
    let inv_sqrt2 = T::FRAC_1_SQRT_2();
    match kind {
        BasisKind::Diagonal(j) => m[(j, j)] = cr(T::one()),
        BasisKind::RealOffDiag(j, k) => {
            m[(j, k)] = cr(inv_sqrt2);
            m[(k, j)] = cr(inv_sqrt2);
        }
        BasisKind::ImagOffDiag(j, k) => {
            m[(j, k)] = ci(inv_sqrt2);
            m[(k, j)] = ci(-inv_sqrt2);
        }
    }
    m
}

/// Enumerates the basis kinds in the fixed deterministic order: diagonals,
/// then real off-diagonals, then imaginary, each in lexicographic order.
fn basis_kinds(d: usize) -> Vec<BasisKind> {
    let mut kinds = Vec::with_capacity(d * d);
    for j in 0..d {
        kinds.push(BasisKind::Diagonal(j));
    }
    for j in 0..d {
        for k in j + 1..d {
            kinds.push(BasisKind::RealOffDiag(j, k));
        }
    }
    for j in 0..d {
        for k in j + 1..d {
            kinds.push(BasisKind::ImagOffDiag(j, k));
        }
    }
    kinds
}

/// The full orthonormal Hermitian basis of d×d matrices, d² elements.
pub fn hermitian_basis<T: Real>(d: usize) -> Vec<HermitianBasisElement<T>> {
    basis_kinds(d)
        .into_iter()
        .map(|kind| HermitianBasisElement { kind, matrix: basis_matrix(d, kind) })
        .collect()
}

/// Coordinates of a Hermitian matrix in the standard basis; tr(AB) equals
/// the Euclidean dot product of coordinates.
pub fn hermitian_coords<T: Real>(m: &CMat<T>) -> DVector<T> {
    let d = m.nrows();
    let sqrt2 = real::<T>(std::f64::consts::SQRT_2);
    let mut v = DVector::<T>::zeros(d * d);
    let mut a = 0;
    for j in 0..d {
        v[a] = m[(j, j)].re;
        a += 1;
    }
    for j in 0..d {
        for k in j + 1..d {
            v[a] = m[(j, k)].re * sqrt2;
            a += 1;
        }
    }
    for j in 0..d {
        for k in j + 1..d {
            v[a] = m[(j, k)].im * sqrt2;
            a += 1;
        }
    }
    v
}

/// Inverse of [`hermitian_coords`].
pub fn coords_to_hermitian<T: Real>(v: &DVector<T>, d: usize) -> CMat<T> {
    let inv_sqrt2 = T::FRAC_1_SQRT_2();
    let mut m = CMat::<T>::zeros(d, d);
    let mut a = 0;
    for j in 0..d {
        m[(j, j)] = cr(v[a]);
        a += 1;
    }
    let imag_base = a + d * (d - 1) / 2;
    let mut off = 0;
    for j in 0..d {
        for k in j + 1..d {
            let re = v[a + off] * inv_sqrt2;
            let im = v[imag_base + off] * inv_sqrt2;
            m[(j, k)] = cr(re) + ci(im);
            m[(k, j)] = cr(re) - ci(im);
            off += 1;
        }
    }
    m
}

/// A rank-one projection written as a real combination of n+1 rank-n
/// projections: p = Σⱼ tⱼ Pⱼ with t₁ = 1/n − 1 and tⱼ = 1/n for j ≥ 2.
#[derive(Debug, Clone)]
pub struct RankOneDecomposition<T: Real> {
    coefficients: Vec<T>,
    projections: Vec<Projection<T>>,
}

impl<T: Real> RankOneDecomposition<T> {
    pub fn coefficients(&self) -> &[T] {
        &self.coefficients
    }

    pub fn projections(&self) -> &[Projection<T>] {
        &self.projections
    }

    /// Σⱼ tⱼ Pⱼ, for checking the reconstruction residual.
    pub fn reconstruct(&self) -> CMat<T> {
        let d = self.projections[0].dim();
        let mut sum = CMat::<T>::zeros(d, d);
        for (t, p) in self.coefficients.iter().zip(&self.projections) {
            sum += p.matrix() * cr(*t);
        }
        sum
    }
}

// Completes `seed_vectors` to `total` orthonormal vectors by max-pivot
// Gram-Schmidt over the standard basis: each round orthogonalizes every
// remaining candidate and keeps the one with the largest residual.
fn complete_orthonormal<T: Real>(seed_vectors: Vec<CVec<T>>, total: usize) -> Vec<CVec<T>> {
    let d = seed_vectors[0].len();
    let mut set = seed_vectors;
    let mut used = vec![false; d];
    while set.len() < total {
        let mut best: Option<(usize, T, CVec<T>)> = None;
        for i in 0..d {
            if used[i] {
                continue;
            }
            let mut r = CVec::<T>::zeros(d);
            r[i] = cr(T::one());
            for s in &set {
                let overlap = s.dotc(&r);
                r -= s * overlap;
            }
            let norm = r.norm();
            if best.as_ref().map(|(_, b, _)| norm > *b).unwrap_or(true) {
                best = Some((i, norm, r));
            }
        }
        let (i, norm, r) = best.expect("standard basis exhausted before completion");
        used[i] = true;
        set.push(r / cr(norm));
    }
    set
}

// Decomposition of the rank-one projection onto `v` (unit vector) as a real
// combination of n+1 rank-n projections.
fn decompose_unit_vector<T: Real>(v: &CVec<T>, n: usize) -> Result<RankOneDecomposition<T>> {
    let d = v.len();
    if d < n + 1 {
        return Err(Error::DimensionTooSmall { dim: d, needed: n + 1 });
    }
    let vectors = complete_orthonormal(vec![v.clone()], n + 1);
    let mut pi = CMat::<T>::zeros(d, d);
    for e in &vectors {
        pi += e * e.adjoint();
    }
    let tol = default_tol(d);
    let mut coefficients = Vec::with_capacity(n + 1);
    let mut projections = Vec::with_capacity(n + 1);
    let inv_n = T::one() / real::<T>(n as f64);
    for (j, e) in vectors.iter().enumerate() {
        let m = &pi - e * e.adjoint();
        projections.push(Projection::trusted(m, n, tol));
        coefficients.push(if j == 0 { inv_n - T::one() } else { inv_n });
    }
    Ok(RankOneDecomposition { coefficients, projections })
}

/// Writes a rank-one projection as a real combination of n+1 rank-n
/// projections: extend a unit vector e₁ spanning im p to an orthonormal set
/// e₁…e_{n+1}, let Π project onto their span, and take Pⱼ = Π − eⱼeⱼ*.
pub fn rank_one_decomposition<T: Real>(p: &Projection<T>, n: usize) -> Result<RankOneDecomposition<T>> {
    if p.rank() != 1 {
        return Err(Error::DimensionMismatch(format!(
            "rank_one_decomposition needs a rank-one input, got rank {}",
            p.rank()
        )));
    }
    let frame = frame_of(p)?;
    let v: CVec<T> = frame.matrix().column(0).into_owned();
    decompose_unit_vector(&v, n)
}

/// d² rank-n projections spanning the Hermitian space, plus the real
/// change-of-basis matrix expressing each standard basis element in them.
#[derive(Debug, Clone)]
pub struct SpanningBasis<T: Real> {
    projections: Vec<Projection<T>>,
    coords: DMatrix<T>,
    dim: usize,
    rank: usize,
}

impl<T: Real> SpanningBasis<T> {
    pub fn projections(&self) -> &[Projection<T>] {
        &self.projections
    }

    /// Column a holds the coefficients writing the a-th Hermitian basis
    /// element as a combination of the selected projections.
    pub fn coords(&self) -> &DMatrix<T> {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rank
    }
}

// Spectral decomposition of a Hermitian basis element into rank-one
// projections with real weights, in closed form.
fn spectral_rank_ones<T: Real>(d: usize, kind: BasisKind) -> Vec<(T, CVec<T>)> {
    let inv_sqrt2 = T::FRAC_1_SQRT_2();
    match kind {
        BasisKind::Diagonal(j) => {
            let mut v = CVec::<T>::zeros(d);
            v[j] = cr(T::one());
            vec![(T::one(), v)]
        }
        BasisKind::RealOffDiag(j, k) => {
            let mut plus = CVec::<T>::zeros(d);
            plus[j] = cr(inv_sqrt2);
            plus[k] = cr(inv_sqrt2);
            let mut minus = CVec::<T>::zeros(d);
            minus[j] = cr(inv_sqrt2);
            minus[k] = cr(-inv_sqrt2);
            vec![(inv_sqrt2, plus), (-inv_sqrt2, minus)]
        }
        BasisKind::ImagOffDiag(j, k) => {
            // i(Eⱼₖ−Eₖⱼ)/√2 = (1/√2)·v₋v₋* − (1/√2)·v₊v₊* with
            // v± = (eⱼ ± i eₖ)/√2.
            let mut plus = CVec::<T>::zeros(d);
            plus[j] = cr(inv_sqrt2);
            plus[k] = ci(inv_sqrt2);
            let mut minus = CVec::<T>::zeros(d);
            minus[j] = cr(inv_sqrt2);
            minus[k] = ci(-inv_sqrt2);
            vec![(inv_sqrt2, minus), (-inv_sqrt2, plus)]
        }
    }
}

/// Selects d² rank-n projections whose span is the whole Hermitian space.
///
/// Candidates are generated by decomposing each Hermitian basis element
/// into rank-ones and each rank-one into rank-n projections, in a fixed
/// deterministic order; a candidate is kept when it increases the rank of
/// the selection's real Gram matrix. The returned coordinate matrix
/// satisfies B_a = Σ_b coords[(b,a)] P_b for every basis element B_a.
pub fn projection_spanning_basis<T: Real>(d: usize, n: usize) -> Result<SpanningBasis<T>> {
    if n == 0 || n >= d {
        return Err(Error::DimensionMismatch(format!(
            "need 1 <= n < d, got n={n}, d={d}"
        )));
    }
    let total = d * d;
    let mut selected: Vec<Projection<T>> = Vec::with_capacity(total);
    let mut selected_coords: Vec<DVector<T>> = Vec::with_capacity(total);
    let mut span: Vec<DVector<T>> = Vec::with_capacity(total);
    let accept = real::<T>(1e-6);

    'sweep: for kind in basis_kinds(d) {
        for (_, vector) in spectral_rank_ones::<T>(d, kind) {
            let decomposition = decompose_unit_vector(&vector, n)?;
            for p in decomposition.projections() {
                let y = hermitian_coords(p.matrix());
                let mut r = y.clone();
                for u in &span {
                    let overlap = u.dot(&r);
                    r -= u * overlap;
                }
                let norm = r.norm();
                if norm > accept {
                    span.push(r / norm);
                    selected_coords.push(y);
                    selected.push(p.clone());
                    if selected.len() == total {
                        break 'sweep;
                    }
                }
            }
        }
    }
    if selected.len() < total {
        return Err(Error::BasisSelectionFailed { selected: selected.len(), needed: total });
    }

    let mut y_matrix = DMatrix::<T>::zeros(total, total);
    for (b, y) in selected_coords.iter().enumerate() {
        y_matrix.set_column(b, y);
    }
    let coords = y_matrix
        .lu()
        .try_inverse()
        .ok_or(Error::BasisSelectionFailed { selected: total, needed: total })?;
    Ok(SpanningBasis { projections: selected, coords, dim: d, rank: n })
}

/// A map φ from rank-n projections to rank-n projections, evaluable either
/// through a callback or a stored table.
pub trait MapOracle<T: Real> {
    fn dim(&self) -> usize;

    fn rank(&self) -> usize;

    /// φ(p); the result must validate as a rank-n projection.
    fn apply(&self, p: &Projection<T>) -> Result<Projection<T>>;

    /// Projections this oracle can be probed on. The default draws Haar
    /// samples; tabulated oracles return stored inputs instead.
    fn probe_inputs(&self, count: usize, seed: u64) -> Result<Vec<Projection<T>>> {
        (0..count)
            .map(|i| random_projection(self.dim(), self.rank(), split_seed(seed, i as u64)))
            .collect()
    }
}

/// Oracle wrapping a callback; outputs are validated on every call.
pub struct FnOracle<T: Real, F>
where
    F: Fn(&Projection<T>) -> CMat<T>,
{
    dim: usize,
    rank: usize,
    f: F,
    _marker: std::marker::PhantomData<T>,
}

impl<T: Real, F: Fn(&Projection<T>) -> CMat<T>> FnOracle<T, F> {
    pub fn new(dim: usize, rank: usize, f: F) -> Self {
        FnOracle { dim, rank, f, _marker: std::marker::PhantomData }
    }
}

impl<T: Real, F: Fn(&Projection<T>) -> CMat<T>> MapOracle<T> for FnOracle<T, F> {
    fn dim(&self) -> usize {
        self.dim
    }

    fn rank(&self) -> usize {
        self.rank
    }

    fn apply(&self, p: &Projection<T>) -> Result<Projection<T>> {
        let raw = (self.f)(p);
        let out = validate_projection(raw, default_tol(self.dim))
            .map_err(|e| Error::OracleInvalidOutput(e.to_string()))?;
        if out.rank() != self.rank {
            return Err(Error::OracleInvalidOutput(format!(
                "output rank {} does not match oracle rank {}",
                out.rank(),
                self.rank
            )));
        }
        Ok(out)
    }
}

/// Oracle backed by a finite table of (input, output) pairs.
///
/// Lookups match within Hilbert-Schmidt distance 1e−9; anything farther is
/// a hard miss, never an interpolation.
pub struct TabulatedOracle<T: Real> {
    dim: usize,
    rank: usize,
    entries: Vec<(Projection<T>, Projection<T>)>,
    probe_pool: Vec<usize>,
}

impl<T: Real> TabulatedOracle<T> {
    /// `probe_pool` lists the entry indices usable as random probe inputs
    /// (inputs drawn independently of the basis construction).
    pub fn new(
        dim: usize,
        rank: usize,
        entries: Vec<(Projection<T>, Projection<T>)>,
        probe_pool: Vec<usize>,
    ) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::OracleTableUnusable("no entries".into()));
        }
        for (input, output) in &entries {
            if input.dim() != dim || output.dim() != dim || input.rank() != rank {
                return Err(Error::OracleTableUnusable(format!(
                    "entry shape ({}, {}) -> ({}, {}) does not fit oracle ({dim}, {rank})",
                    input.dim(),
                    input.rank(),
                    output.dim(),
                    output.rank()
                )));
            }
        }
        if probe_pool.iter().any(|i| *i >= entries.len()) {
            return Err(Error::OracleTableUnusable("probe pool index out of range".into()));
        }
        Ok(TabulatedOracle { dim, rank, entries, probe_pool })
    }

    pub fn entries(&self) -> &[(Projection<T>, Projection<T>)] {
        &self.entries
    }

    pub fn probe_pool(&self) -> &[usize] {
        &self.probe_pool
    }

    /// The lookup tolerance shared by all tables.
    pub fn lookup_tol() -> T {
        real(1e-9)
    }
}

impl<T: Real> MapOracle<T> for TabulatedOracle<T> {
    fn dim(&self) -> usize {
        self.dim
    }

    fn rank(&self) -> usize {
        self.rank
    }

    fn apply(&self, p: &Projection<T>) -> Result<Projection<T>> {
        let mut closest = f64::INFINITY;
        for (input, output) in &self.entries {
            let dist = hs_distance(input.matrix(), p.matrix());
            if dist <= Self::lookup_tol() {
                return Ok(output.clone());
            }
            closest = closest.min(dist.to_f64().unwrap_or(f64::INFINITY));
        }
        Err(Error::OracleMiss {
            closest,
            tol: Self::lookup_tol().to_f64().unwrap_or(f64::NAN),
        })
    }

    fn probe_inputs(&self, count: usize, seed: u64) -> Result<Vec<Projection<T>>> {
        if self.probe_pool.is_empty() {
            return Err(Error::OracleTableUnusable(
                "table has no probe-pool entries to sample from".into(),
            ));
        }
        let mut rng = rng_from_seed(seed);
        Ok((0..count)
            .map(|_| {
                let idx = self.probe_pool[rng.random_range(0..self.probe_pool.len())];
                self.entries[idx].0.clone()
            })
            .collect())
    }
}

/// The real-linear extension Φ as a d²×d² real matrix acting on Hermitian
/// coordinates.
#[derive(Debug, Clone)]
pub struct ExtendedMap<T: Real> {
    matrix: DMatrix<T>,
    dim: usize,
    rank: usize,
}

impl<T: Real> ExtendedMap<T> {
    pub fn new(matrix: DMatrix<T>, dim: usize, rank: usize) -> Result<Self> {
        if matrix.nrows() != dim * dim || matrix.ncols() != dim * dim {
            return Err(Error::DimensionMismatch(format!(
                "extended map for dim {dim} must be {0}x{0}, got {1}x{2}",
                dim * dim,
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        Ok(ExtendedMap { matrix, dim, rank })
    }

    pub fn matrix(&self) -> &DMatrix<T> {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Φ(A) for a Hermitian A.
    pub fn apply(&self, a: &CMat<T>) -> CMat<T> {
        let alpha = hermitian_coords(a);
        let beta = &self.matrix * alpha;
        coords_to_hermitian(&beta, self.dim)
    }

    /// Smallest singular value; bounded away from zero for extensions of
    /// genuinely transition-preserving maps.
    pub fn smallest_singular_value(&self) -> T {
        let svd = self.matrix.clone().svd(false, false);
        svd.singular_values.min()
    }
}

/// Builds Φ by evaluating the oracle on a spanning set of d² rank-n
/// projections. Deterministic given the oracle and (d, n).
pub fn extend_map<T: Real>(oracle: &dyn MapOracle<T>, d: usize, n: usize) -> Result<ExtendedMap<T>> {
    if oracle.dim() != d || oracle.rank() != n {
        return Err(Error::DimensionMismatch(format!(
            "oracle is ({}, {}), requested ({d}, {n})",
            oracle.dim(),
            oracle.rank()
        )));
    }
    let basis = projection_spanning_basis::<T>(d, n)?;
    let total = d * d;
    let mut w = DMatrix::<T>::zeros(total, total);
    for (b, p) in basis.projections().iter().enumerate() {
        let image = oracle.apply(p)?;
        w.set_column(b, &hermitian_coords(image.matrix()));
    }
    let matrix = w * basis.coords();
    ExtendedMap::new(matrix, d, n)
}

/// Max |tr Φ(A)Φ(B) − tr AB| over random Hermitian pairs. In Hermitian
/// coordinates this is a dot-product comparison.
pub fn check_trace_form<T: Real>(phi: &ExtendedMap<T>, trials: usize, seed: u64) -> T {
    let mut rng = rng_from_seed(seed);
    let total = phi.dim() * phi.dim();
    let mut worst = T::zero();
    for _ in 0..trials {
        let a = DVector::<T>::from_fn(total, |_, _| gaussian(&mut rng));
        let b = DVector::<T>::from_fn(total, |_, _| gaussian(&mut rng));
        let lhs = (phi.matrix() * &a).dot(&(phi.matrix() * &b));
        let rhs = a.dot(&b);
        worst = worst.max((lhs - rhs).abs());
    }
    worst
}

/// Default residual threshold above which a map counts as non-preserving.
pub fn default_preservation_tol<T: Real>() -> T {
    real(1e-8)
}

/// Outcome of probing an oracle for transition-probability preservation.
#[derive(Debug, Clone)]
pub struct PreservationReport<T: Real> {
    pub max_residual: T,
    /// The worst pair, present when `max_residual` exceeds the default
    /// preservation tolerance.
    pub violating_pair: Option<(Projection<T>, Projection<T>)>,
}

/// Samples random pairs through the oracle and reports the worst
/// |tr φ(P)φ(Q) − tr PQ|.
pub fn check_transition_preserving<T: Real>(
    oracle: &dyn MapOracle<T>,
    trials: usize,
    seed: u64,
) -> Result<PreservationReport<T>> {
    use crate::angles::transition_probability;
    let inputs = oracle.probe_inputs(2 * trials, seed)?;
    let mut worst = T::zero();
    let mut witness: Option<(Projection<T>, Projection<T>)> = None;
    for pair in inputs.chunks_exact(2) {
        let (p, q) = (&pair[0], &pair[1]);
        let fp = oracle.apply(p)?;
        let fq = oracle.apply(q)?;
        let lhs = transition_probability(&fp, &fq)?;
        let rhs = transition_probability(p, q)?;
        let residual = (lhs - rhs).abs();
        if residual > worst {
            worst = residual;
            witness = Some((p.clone(), q.clone()));
        }
    }
    let violating_pair = if worst > default_preservation_tol() { witness } else { None };
    Ok(PreservationReport { max_residual: worst, violating_pair })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{identity, max_modulus, trace};
    use crate::projections::random_unitary;
    use crate::scalar::{cone, czero};

    fn assert_close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
    }

    #[test]
    fn coords_roundtrip_and_trace_form() {
        let u = random_unitary::<f64>(4, 1);
        let p = random_projection::<f64>(4, 2, 2).unwrap();
        // A generic Hermitian built from a projection conjugate.
        let a = u.adjoint() * p.matrix() * &u + p.matrix();
        let v = hermitian_coords(&a);
        let back = coords_to_hermitian(&v, 4);
        assert!(max_modulus(&(&a - back)) <= 1e-14);

        let q = random_projection::<f64>(4, 2, 3).unwrap();
        let b = q.matrix().clone();
        let dot = hermitian_coords(&a).dot(&hermitian_coords(&b));
        let tr = trace(&(&a * &b));
        assert_close(dot, tr.re, 1e-12);
        assert_close(tr.im, 0.0, 1e-12);
    }

    #[test]
    fn basis_is_orthonormal() {
        let basis = hermitian_basis::<f64>(3);
        assert_eq!(basis.len(), 9);
        for (i, a) in basis.iter().enumerate() {
            for (j, b) in basis.iter().enumerate() {
                let dot = trace(&(a.matrix() * b.matrix())).re;
                let expected = if i == j { 1.0 } else { 0.0 };
                assert_close(dot, expected, 1e-14);
            }
        }
    }

    #[test]
    fn decomposition_coefficients_are_the_stated_ones() {
        let p = random_projection::<f64>(6, 1, 4).unwrap();
        let dec = rank_one_decomposition(&p, 3).unwrap();
        assert_eq!(dec.coefficients().len(), 4);
        assert_close(dec.coefficients()[0], 1.0 / 3.0 - 1.0, 1e-15);
        for t in &dec.coefficients()[1..] {
            assert_close(*t, 1.0 / 3.0, 1e-15);
        }
        let sum: f64 = dec.coefficients().iter().sum();
        assert_close(sum, 1.0 / 3.0, 1e-12);
    }

    #[test]
    fn diagonal_example_in_three_dimensions() {
        let mut m = CMat::<f64>::zeros(3, 3);
        m[(0, 0)] = cone();
        let p = validate_projection(m, default_tol(3)).unwrap();
        let dec = rank_one_decomposition(&p, 2).unwrap();
        assert_eq!(dec.coefficients(), &[-0.5, 0.5, 0.5]);
        // The three projections are I − eⱼeⱼ*.
        for proj in dec.projections() {
            assert_eq!(proj.rank(), 2);
        }
        let back = dec.reconstruct();
        assert!(max_modulus(&(&back - p.matrix())) <= 1e-15);
    }

    #[test]
    fn reconstruction_residual_stays_tiny() {
        for (d, n, seed) in [(4, 2, 5u64), (6, 3, 6), (9, 5, 7), (16, 7, 8)] {
            let p = random_projection::<f64>(d, 1, seed).unwrap();
            let dec = rank_one_decomposition(&p, n).unwrap();
            let residual = max_modulus(&(dec.reconstruct() - p.matrix()));
            assert!(residual <= 1e-12, "residual {residual} at d={d}, n={n}");
            let sum: f64 = dec.coefficients().iter().sum();
            assert_close(sum, 1.0 / n as f64, 1e-12);
        }
    }

    #[test]
    fn decomposition_needs_room() {
        let p = random_projection::<f64>(3, 1, 9).unwrap();
        match rank_one_decomposition(&p, 3).unwrap_err() {
            Error::DimensionTooSmall { dim, needed } => assert_eq!((dim, needed), (3, 4)),
            other => panic!("expected DimensionTooSmall, got {other}"),
        }
    }

    #[test]
    fn spanning_basis_has_full_rank_and_reproduces_elements() {
        let basis = projection_spanning_basis::<f64>(3, 2).unwrap();
        assert_eq!(basis.projections().len(), 9);
        for p in basis.projections() {
            let v = validate_projection(p.matrix().clone(), default_tol(3)).unwrap();
            assert_eq!(v.rank(), 2);
        }
        // Substituting the coordinates reproduces every basis element.
        let elements = hermitian_basis::<f64>(3);
        for (a, element) in elements.iter().enumerate() {
            let mut sum = CMat::<f64>::zeros(3, 3);
            for (b, p) in basis.projections().iter().enumerate() {
                sum += p.matrix() * cr(basis.coords()[(b, a)]);
            }
            let dev = max_modulus(&(sum - element.matrix()));
            assert!(dev <= 1e-10, "element {a} off by {dev}");
        }
    }

    #[test]
    fn identity_map_extends_to_identity_matrix() {
        let oracle = FnOracle::new(3, 2, |p: &Projection<f64>| p.matrix().clone());
        let phi = extend_map(&oracle, 3, 2).unwrap();
        let dev = (phi.matrix() - DMatrix::<f64>::identity(9, 9)).abs().max();
        assert!(dev <= 1e-10, "deviation {dev}");
    }

    #[test]
    fn unitary_conjugation_extends_to_conjugation() {
        let u = random_unitary::<f64>(4, 10);
        let uc = u.clone();
        let oracle = FnOracle::new(4, 2, move |p: &Projection<f64>| &uc * p.matrix() * uc.adjoint());
        let phi = extend_map(&oracle, 4, 2).unwrap();
        for seed in 0..20u64 {
            let w = random_unitary::<f64>(4, 100 + seed);
            let h = random_projection::<f64>(4, 2, 200 + seed).unwrap();
            // Generic Hermitian test matrix.
            let a = w.adjoint() * h.matrix() * &w + h.matrix() * cr(0.5);
            let via_phi = phi.apply(&a);
            let direct = &u * a * u.adjoint();
            assert!(max_modulus(&(via_phi - direct)) <= 1e-9);
        }
    }

    #[test]
    fn extension_agrees_with_the_map_off_basis() {
        let u = random_unitary::<f64>(4, 11);
        let uc = u.clone();
        let oracle = FnOracle::new(4, 2, move |p: &Projection<f64>| &uc * p.matrix() * uc.adjoint());
        let phi = extend_map(&oracle, 4, 2).unwrap();
        for seed in 0..50u64 {
            let p = random_projection::<f64>(4, 2, 300 + seed).unwrap();
            let via_phi = phi.apply(p.matrix());
            let direct = oracle.apply(&p).unwrap();
            assert!(max_modulus(&(via_phi - direct.matrix())) <= 1e-8);
        }
    }

    #[test]
    fn extension_preserves_trace_for_preserving_maps() {
        let u = random_unitary::<f64>(3, 12);
        let uc = u.clone();
        let oracle = FnOracle::new(3, 1, move |p: &Projection<f64>| &uc * p.matrix() * uc.adjoint());
        let phi = extend_map(&oracle, 3, 1).unwrap();
        for seed in 0..10u64 {
            let h = random_projection::<f64>(3, 1, 400 + seed).unwrap();
            let w = random_unitary::<f64>(3, 500 + seed);
            let a = w.adjoint() * h.matrix() * &w * cr(1.7) + h.matrix();
            let lhs = trace(&phi.apply(&a));
            let rhs = trace(&a);
            assert_close(lhs.re, rhs.re, 1e-9);
        }
    }

    #[test]
    fn extension_is_injective_for_preserving_maps() {
        let u = random_unitary::<f64>(4, 13);
        let uc = u.clone();
        let oracle = FnOracle::new(4, 2, move |p: &Projection<f64>| &uc * p.matrix() * uc.adjoint());
        let phi = extend_map(&oracle, 4, 2).unwrap();
        let sigma = phi.smallest_singular_value();
        assert!(sigma >= 1e-6, "smallest singular value {sigma}");
    }

    #[test]
    fn extend_map_is_deterministic() {
        let oracle = FnOracle::new(3, 2, |p: &Projection<f64>| p.matrix().transpose());
        let a = extend_map(&oracle, 3, 2).unwrap();
        let b = extend_map(&oracle, 3, 2).unwrap();
        assert_eq!(a.matrix(), b.matrix());
    }

    #[test]
    fn trace_form_residuals() {
        let oracle = FnOracle::new(3, 2, |p: &Projection<f64>| p.matrix().clone());
        let phi = extend_map(&oracle, 3, 2).unwrap();
        assert!(check_trace_form(&phi, 50, 14) <= 1e-10);

        let u = random_unitary::<f64>(4, 15);
        let uc = u.clone();
        let conj = FnOracle::new(4, 2, move |p: &Projection<f64>| &uc * p.matrix() * uc.adjoint());
        let phi_u = extend_map(&conj, 4, 2).unwrap();
        assert!(check_trace_form(&phi_u, 50, 16) <= 1e-8);

        // Scaling by 2 violates the form with the predicted 3|tr AB|
        // pattern; confirm the residual is macroscopic.
        let doubled = ExtendedMap::new(DMatrix::<f64>::identity(9, 9) * 2.0, 3, 2).unwrap();
        assert!(check_trace_form(&doubled, 50, 17) > 1.0);
    }

    #[test]
    fn preservation_check_on_standard_maps() {
        let u = random_unitary::<f64>(4, 18);
        let uc = u.clone();
        let conj = FnOracle::new(4, 2, move |p: &Projection<f64>| &uc * p.matrix() * uc.adjoint());
        let report = check_transition_preserving(&conj, 30, 19).unwrap();
        assert!(report.max_residual <= 1e-10);
        assert!(report.violating_pair.is_none());

        let transpose = FnOracle::new(4, 2, |p: &Projection<f64>| p.matrix().transpose());
        let report = check_transition_preserving(&transpose, 30, 20).unwrap();
        assert!(report.max_residual <= 1e-10);

        // Complement composed with a unitary at d = 2n.
        let v = random_unitary::<f64>(4, 21);
        let vc = v.clone();
        let comp = FnOracle::new(4, 2, move |p: &Projection<f64>| {
            identity::<f64>(4) - &vc * p.matrix() * vc.adjoint()
        });
        let report = check_transition_preserving(&comp, 30, 22).unwrap();
        assert!(report.max_residual <= 1e-10);
    }

    #[test]
    fn preservation_check_flags_violators() {
        let fixed = random_projection::<f64>(4, 2, 23).unwrap();
        let fm = fixed.matrix().clone();
        let constant = FnOracle::new(4, 2, move |_: &Projection<f64>| fm.clone());
        let report = check_transition_preserving(&constant, 30, 24).unwrap();
        assert!(report.max_residual > 0.01);
        assert!(report.violating_pair.is_some());
    }

    #[test]
    fn tabulated_oracle_matches_its_source() {
        let u = random_unitary::<f64>(3, 25);
        let uc = u.clone();
        let source = FnOracle::new(3, 1, move |p: &Projection<f64>| &uc * p.matrix() * uc.adjoint());
        let basis = projection_spanning_basis::<f64>(3, 1).unwrap();
        let mut entries = Vec::new();
        for p in basis.projections() {
            entries.push((p.clone(), source.apply(p).unwrap()));
        }
        let random_start = entries.len();
        for seed in 0..6u64 {
            let p = random_projection::<f64>(3, 1, 600 + seed).unwrap();
            entries.push((p.clone(), source.apply(&p).unwrap()));
        }
        let pool: Vec<usize> = (random_start..entries.len()).collect();
        let table = TabulatedOracle::new(3, 1, entries, pool).unwrap();

        // Lookup hits reproduce the source; misses are hard errors.
        let hit = table.entries()[0].0.clone();
        assert!(table.apply(&hit).is_ok());
        let miss = random_projection::<f64>(3, 1, 999).unwrap();
        match table.apply(&miss).unwrap_err() {
            Error::OracleMiss { .. } => {}
            other => panic!("expected OracleMiss, got {other}"),
        }

        // The extension built from the table equals the one from the
        // callback.
        let phi_table = extend_map(&table, 3, 1).unwrap();
        let phi_fn = extend_map(&source, 3, 1).unwrap();
        let dev = (phi_table.matrix() - phi_fn.matrix()).abs().max();
        assert!(dev <= 1e-12);

        // Probe inputs come from the declared pool only.
        let probes = table.probe_inputs(10, 26).unwrap();
        for probe in &probes {
            let in_pool = table
                .probe_pool()
                .iter()
                .any(|i| hs_distance(table.entries()[*i].0.matrix(), probe.matrix()) <= 1e-12);
            assert!(in_pool);
        }
    }

    #[test]
    fn oracle_rejects_invalid_outputs() {
        let oracle = FnOracle::new(3, 1, |p: &Projection<f64>| p.matrix() * cr(2.0));
        let p = random_projection::<f64>(3, 1, 27).unwrap();
        match oracle.apply(&p).unwrap_err() {
            Error::OracleInvalidOutput(_) => {}
            other => panic!("expected OracleInvalidOutput, got {other}"),
        }
        let zero = FnOracle::new(3, 1, |_: &Projection<f64>| {
            let mut m = CMat::<f64>::zeros(3, 3);
            m[(0, 0)] = czero();
            m
        });
        assert!(zero.apply(&p).is_err());
    }
}
