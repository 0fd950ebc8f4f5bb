//! The sets A^(n)_{P,Q} = {R rank-n : P + Q − R is a rank-n projection}:
//! membership, explicit circle parametrization for non-orthogonally adjacent
//! pairs, and a numerical probe of the set's local dimension.
//!
//! For adjacent P, Q the space splits as M1 ⊕ M2 ⊕ M3 with M1 the common
//! range intersection, M2 a two-dimensional block carrying all the action,
//! and M3 the untouched orthogonal complement. Members of the A-set are
//! Π_M1 plus a rank-one projection inside M2, and for a non-orthogonal pair
//! those rank-ones form a circle.

use nalgebra::Vector3;
use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::matrix::{hermitian_eigen_desc, idempotency_deviation, identity, trace, CMat, CVec};
use crate::projections::{
    default_tol, frame_of, haar_frame, project_from_frame, validate_projection, Frame, Projection,
};
use crate::rng::rng_from_seed;
use crate::scalar::{ci, cone, cr, real, Real, C};

/// Orthogonal decomposition ℂ^d = M1 ⊕ M2 ⊕ M3 attached to an adjacent
/// pair: M1 = im P ∩ im Q (dimension n−1), M2 the two-dimensional
/// complement of M1 inside im P + im Q, M3 the rest. `p2` and `q2` are the
/// rank-one compressions of P and Q to M2.
#[derive(Debug, Clone)]
pub struct AdjacentBlocks<T: Real> {
    m1: Frame<T>,
    m2: Frame<T>,
    m3: Frame<T>,
    p2: CMat<T>,
    q2: CMat<T>,
}

impl<T: Real> AdjacentBlocks<T> {
    /// Basis of im P ∩ im Q (may have zero columns when n = 1).
    pub fn m1(&self) -> &Frame<T> {
        &self.m1
    }

    /// Basis of the active two-dimensional block.
    pub fn m2(&self) -> &Frame<T> {
        &self.m2
    }

    /// Basis of the orthogonal complement of im P + im Q (may be empty).
    pub fn m3(&self) -> &Frame<T> {
        &self.m3
    }

    /// P compressed to M2; rank-one.
    pub fn p2(&self) -> &CMat<T> {
        &self.p2
    }

    /// Q compressed to M2; rank-one.
    pub fn q2(&self) -> &CMat<T> {
        &self.q2
    }

    /// Π_M1 + M2 r M2* for a 2×2 block r: the d×d operator whose M2-block
    /// is r and which acts as the identity on M1 and zero on M3.
    pub fn embed(&self, r: &CMat<T>) -> CMat<T> {
        let m1 = self.m1.matrix();
        let m2 = self.m2.matrix();
        m1 * m1.adjoint() + m2 * r * m2.adjoint()
    }
}

/// The circle of rank-one blocks making up the reduced A-set of a
/// non-orthogonally adjacent pair. In the eigenbasis of p2 + q2 (eigenvalues
/// s and 2−s, 0 < s < 1) a member is
///   [[ s/2,            ρ e^{it} ],
///    [ ρ e^{−it},      (2−s)/2  ]]        with ρ = √(s(2−s))/2.
#[derive(Debug, Clone)]
pub struct CircleParam<T: Real> {
    s: T,
    basis_change: CMat<T>,
}

impl<T: Real> CircleParam<T> {
    /// Diagonalizes p2 + q2 and checks its spectrum is {s, 2−s} with
    /// 0 < s < 1; fails for equal (s ≈ 0) and orthogonal (s ≈ 1) pairs.
    pub fn from_block_sum(sum: &CMat<T>, margin: T) -> Result<Self> {
        let (values, vectors) = hermitian_eigen_desc(sum);
        let s = values[1];
        let large = values[0];
        if s < margin || s > T::one() - margin {
            return Err(Error::NotNonOrthAdjacent);
        }
        let two = real::<T>(2.0);
        if (large - (two - s)).abs() > real::<T>(1e-8) {
            return Err(Error::NotNonOrthAdjacent);
        }
        // First basis vector carries the eigenvalue s, second 2−s.
        let mut basis_change = CMat::<T>::zeros(2, 2);
        basis_change.set_column(0, &vectors.column(1).into_owned());
        basis_change.set_column(1, &vectors.column(0).into_owned());
        Ok(CircleParam { s, basis_change })
    }

    /// The smaller eigenvalue s of p2 + q2.
    pub fn s(&self) -> T {
        self.s
    }

    /// Unitary mapping eigenbasis coordinates back to M2 coordinates.
    pub fn basis_change(&self) -> &CMat<T> {
        &self.basis_change
    }

    /// The circle member r(t), expressed in M2 coordinates.
    pub fn at(&self, t: T) -> CMat<T> {
        let two = real::<T>(2.0);
        let s = self.s;
        let rho = (s * (two - s)).sqrt() / two;
        let phase = C::new(t.cos(), t.sin());
        let mut r = CMat::<T>::zeros(2, 2);
        r[(0, 0)] = cr(s / two);
        r[(1, 1)] = cr((two - s) / two);
        r[(0, 1)] = cr(rho) * phase;
        r[(1, 0)] = cr(rho) * phase.conj();
        &self.basis_change * r * self.basis_change.adjoint()
    }

    /// The parameter t at which the circle passes through the given
    /// rank-one member (e.g. p2 itself), read off the off-diagonal phase in
    /// the eigenbasis.
    pub fn parameter_of(&self, member: &CMat<T>) -> T {
        let e = self.basis_change.adjoint() * member * &self.basis_change;
        e[(0, 1)].im.atan2(e[(0, 1)].re)
    }
}

/// Local dimension verdict of the A-set probe.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DimensionEstimate {
    /// The set is the single point {P}.
    Zero,
    /// A one-dimensional set (the circle).
    One,
    /// A two-dimensional set (the whole sphere of the reduced problem).
    Two,
    /// Dimension at least two, from the block product family.
    AtLeastTwo,
}

/// Outcome of [`aset_dimension_probe`]: the verdict plus the count of
/// distinct membership-passing samples it rests on.
#[derive(Debug, Clone, Copy)]
pub struct ProbeReport {
    pub estimate: DimensionEstimate,
    pub members_found: usize,
}

/// True iff R and P + Q − R are both rank-n projections at tolerance `tol`.
///
/// R arrives as an already-validated `Projection`, so only its rank and
/// shape are re-checked before validating the combination.
pub fn aset_membership<T: Real>(
    p: &Projection<T>,
    q: &Projection<T>,
    r: &Projection<T>,
    tol: T,
) -> bool {
    if p.dim() != q.dim() || p.rank() != q.rank() {
        return false;
    }
    if r.dim() != p.dim() || r.rank() != p.rank() {
        return false;
    }
    let combination = p.matrix() + q.matrix() - r.matrix();
    matches!(
        validate_projection(combination, tol),
        Ok(s) if s.rank() == p.rank()
    )
}

/// Membership test for a raw candidate matrix: validates both R and
/// P + Q − R as rank-n projections at tolerance `tol`.
fn membership_raw<T: Real>(p: &Projection<T>, q: &Projection<T>, r: &CMat<T>, tol: T) -> bool {
    match validate_projection(r.clone(), tol) {
        Ok(rp) if rp.rank() == p.rank() => aset_membership(p, q, &rp, tol),
        _ => false,
    }
}

/// Splits ℂ^d along an adjacent pair P, Q into M1 ⊕ M2 ⊕ M3.
///
/// M1 is read off the compression F_P* Q F_P of Q to im P: eigenvalues
/// within 1e−7 of 1 mark intersection directions, and adjacency demands
/// exactly n−1 of them. The verdict comes from this eigenstructure alone;
/// the function never consults `classify_adjacency`.
pub fn adjacent_blocks<T: Real>(p: &Projection<T>, q: &Projection<T>) -> Result<AdjacentBlocks<T>> {
    if p.dim() != q.dim() || p.rank() != q.rank() {
        return Err(Error::DimensionMismatch(format!(
            "projections must share dim and rank, got ({}, {}) and ({}, {})",
            p.dim(),
            p.rank(),
            q.dim(),
            q.rank()
        )));
    }
    let d = p.dim();
    let n = p.rank();
    let threshold = real::<T>(1e-7);

    let fp = frame_of(p)?;
    let overlap_op = fp.matrix().adjoint() * q.matrix() * fp.matrix();
    let (values, vectors) = hermitian_eigen_desc(&overlap_op);
    let intersection = values.iter().filter(|v| (T::one() - **v).abs() <= threshold).count();
    if intersection != n - 1 {
        return Err(Error::NotAdjacent);
    }

    // Intersection directions, carried back to the ambient space.
    let m1 = fp.matrix() * vectors.columns(0, n - 1).into_owned();
    // The remaining direction of im P, orthogonal to the intersection.
    let v_p: CVec<T> = (fp.matrix() * vectors.column(n - 1).into_owned()).column(0).into_owned();

    // The part of im Q sticking out of im P: rank one for adjacent pairs.
    // Extracted as the top eigenvector of the Hermitian (I−P)Q(I−P), whose
    // only nonzero eigenvalue is sin²ϑ; an SVD of (I−P)F_Q would compute
    // the same direction but degrades on this nearly rank-deficient input.
    let complement_p = identity::<T>(d) - p.matrix();
    let outside = &complement_p * q.matrix() * &complement_p;
    let (out_values, out_vectors) = hermitian_eigen_desc(&outside);
    if out_values[0] <= threshold {
        return Err(Error::NotAdjacent);
    }
    let u: CVec<T> = out_vectors.column(0).into_owned();

    let mut m2 = CMat::<T>::zeros(d, 2);
    m2.set_column(0, &v_p);
    m2.set_column(1, &u);

    // im P + im Q is im P plus the u-direction; its kernel is M3.
    let sum_proj = p.matrix() + &u * u.adjoint();
    let (sum_values, sum_vectors) = hermitian_eigen_desc(&sum_proj);
    let above = sum_values.iter().filter(|v| **v >= real::<T>(0.5)).count();
    if above != n + 1 {
        return Err(Error::NotAdjacent);
    }
    let m3 = sum_vectors.columns(n + 1, d - n - 1).into_owned();

    let p2 = m2.adjoint() * p.matrix() * &m2;
    let q2 = m2.adjoint() * q.matrix() * &m2;

    Ok(AdjacentBlocks {
        m1: Frame::trusted(m1),
        m2: Frame::trusted(m2),
        m3: Frame::trusted(m3),
        p2,
        q2,
    })
}

/// The A-set member at circle parameter t for a non-orthogonally adjacent
/// pair: Π_M1 plus the M2-block r(t).
pub fn aset_parametrize<T: Real>(p: &Projection<T>, q: &Projection<T>, t: T) -> Result<Projection<T>> {
    let blocks = adjacent_blocks(p, q)?;
    let circle = CircleParam::from_block_sum(&(blocks.p2() + blocks.q2()), real(1e-7))?;
    let matrix = blocks.embed(&circle.at(t));
    Ok(Projection::trusted(matrix, p.rank(), default_tol(p.dim())))
}

// Rank-one 2×2 projection with the given Bloch vector: (I + b·σ)/2.
fn bloch_to_block<T: Real>(b: &Vector3<T>) -> CMat<T> {
    let half = real::<T>(0.5);
    let mut r = CMat::<T>::zeros(2, 2);
    r[(0, 0)] = cr((T::one() + b[2]) * half);
    r[(1, 1)] = cr((T::one() - b[2]) * half);
    r[(0, 1)] = (cr(b[0]) - ci(b[1])) * cr(half);
    r[(1, 0)] = (cr(b[0]) + ci(b[1])) * cr(half);
    r
}

// Bloch vector of a 2×2 Hermitian matrix with trace 1.
fn block_to_bloch<T: Real>(r: &CMat<T>) -> Vector3<T> {
    let two = real::<T>(2.0);
    Vector3::new(
        r[(0, 1)].re * two,
        -r[(0, 1)].im * two,
        r[(0, 0)].re - r[(1, 1)].re,
    )
}

// Fast membership check on the reduced 2×2 problem: r and sum − r must both
// be rank-one projections (Hermitian is automatic by construction).
fn reduced_membership<T: Real>(sum: &CMat<T>, r: &CMat<T>, tol: T) -> bool {
    let other = sum - r;
    if idempotency_deviation(r) > tol || idempotency_deviation(&other) > tol {
        return false;
    }
    let tr = trace(&other);
    (tr.re - T::one()).abs() <= tol && tr.im.abs() <= tol && (trace(r).re - T::one()).abs() <= tol
}

// Alternating projections between the spheres |b| = 1 and |c − b| = 1,
// starting from b0. The azimuth around the c-axis is preserved, so a grid
// of starts converges to a spread of solution points rather than a single
// one. Returns the refined vector; callers re-test membership.
fn refine_candidate<T: Real>(c: &Vector3<T>, b0: &Vector3<T>) -> Vector3<T> {
    let mut b = *b0;
    let eps = real::<T>(1e-12);
    // Linear convergence; bad starts (near the axis through the circle's
    // center) need a few hundred rounds, good ones break out in tens.
    for _ in 0..400 {
        let nb = b.norm();
        if nb > T::zero() {
            b /= nb;
        } else {
            b = Vector3::new(T::one(), T::zero(), T::zero());
        }
        let diff = c - b;
        let nd = diff.norm();
        if nd > T::zero() {
            b = c - diff / nd;
        }
        if (b.norm() - T::one()).abs() <= eps && ((c - b).norm() - T::one()).abs() <= eps {
            break;
        }
    }
    b
}

// A point on the latitude circle {b : |b| = 1, |c − b| = 1} at angle t.
// For c = 0 the constraint degenerates to the whole sphere and the equator
// of the z-axis is used as a representative circle.
fn latitude_circle_point<T: Real>(c: &Vector3<T>, t: T) -> Vector3<T> {
    let nc = c.norm();
    if nc < real::<T>(1e-9) {
        return Vector3::new(t.cos(), t.sin(), T::zero());
    }
    let axis = c / nc;
    let pick = if axis[2].abs() < real::<T>(0.9) {
        Vector3::new(T::zero(), T::zero(), T::one())
    } else {
        Vector3::new(T::one(), T::zero(), T::zero())
    };
    let e1 = (pick - axis * axis.dot(&pick)).normalize();
    let e2 = axis.cross(&e1);
    let half = real::<T>(0.5);
    let radius_sq = T::one() - nc * nc * half * half;
    let radius = radius_sq.max(T::zero()).sqrt();
    c * half + (e1 * t.cos() + e2 * t.sin()) * radius
}

// Deduplicates Bloch points by quantizing coordinates to 1e−8 cells.
fn dedupe_points<T: Real>(points: &[Vector3<T>]) -> Vec<Vector3<T>> {
    let mut seen: HashMap<(i64, i64, i64), ()> = HashMap::new();
    let mut out = Vec::new();
    for p in points {
        let key = (
            (p[0].to_f64().unwrap_or(0.0) / 1e-8).floor() as i64,
            (p[1].to_f64().unwrap_or(0.0) / 1e-8).floor() as i64,
            (p[2].to_f64().unwrap_or(0.0) / 1e-8).floor() as i64,
        );
        if seen.insert(key, ()).is_none() {
            out.push(*p);
        }
    }
    out
}

// Local dimension at a center: PCA over the cloud points within `radius`,
// counting singular values above 10% of the largest. Returns None when the
// neighborhood is too small to decide.
fn local_dimension<T: Real>(cloud: &[Vector3<T>], center: &Vector3<T>, radius: T) -> Option<usize> {
    let nearby: Vec<&Vector3<T>> =
        cloud.iter().filter(|p| (*p - center).norm() <= radius).collect();
    if nearby.len() < 4 {
        return None;
    }
    let inv = T::one() / real::<T>(nearby.len() as f64);
    let mut mean = Vector3::zeros();
    for p in &nearby {
        mean += **p;
    }
    mean *= inv;
    let mut data = nalgebra::DMatrix::<T>::zeros(nearby.len(), 3);
    for (i, p) in nearby.iter().enumerate() {
        for j in 0..3 {
            data[(i, j)] = (*p)[j] - mean[j];
        }
    }
    let svd = data.svd(false, false);
    let top = svd.singular_values[0];
    if top <= T::zero() {
        return Some(0);
    }
    let cut = top * real::<T>(0.1);
    Some(svd.singular_values.iter().filter(|s| **s > cut).count())
}

/// Numerically probes the local dimension of A^(n)_{P,Q}.
///
/// Independent of `classify_adjacency` by construction: the branch is
/// chosen by rank(P−Q) alone. For rank 2 the problem reduces to rank-one
/// 2×2 blocks, which are Bloch vectors on the unit sphere; membership there
/// means |b| = 1 and |c − b| = 1 with c the Bloch sum of the two blocks. A
/// (√samples)² grid of starts is refined onto the solution set by
/// alternating projections, deduplicated, and the surviving cloud's local
/// dimension is estimated by PCA in small neighborhoods (majority vote).
/// For rank(P−Q) > 2 the probe exhibits a two-parameter product family over
/// two principal-angle blocks and reports `AtLeastTwo`.
pub fn aset_dimension_probe<T: Real>(
    p: &Projection<T>,
    q: &Projection<T>,
    samples: usize,
    seed: u64,
) -> Result<ProbeReport> {
    if p.dim() != q.dim() || p.rank() != q.rank() {
        return Err(Error::DimensionMismatch(format!(
            "projections must share dim and rank, got ({}, {}) and ({}, {})",
            p.dim(),
            p.rank(),
            q.dim(),
            q.rank()
        )));
    }
    if samples < 100 {
        return Err(Error::InsufficientSamples {
            found: 0,
            reason: format!("need at least 100 samples, got {samples}"),
        });
    }
    let tol = real::<T>(1e-7);
    let diff = p.matrix() - q.matrix();
    let (diff_values, _) = hermitian_eigen_desc(&diff);
    let rank_diff = diff_values.iter().filter(|v| v.abs() > tol).count();

    if rank_diff == 0 {
        // A^(n)_{P,P} = {P}: confirm the single member and report a point.
        let members = usize::from(aset_membership(p, q, p, real(1e-6)));
        return Ok(ProbeReport { estimate: DimensionEstimate::Zero, members_found: members });
    }

    if rank_diff <= 2 {
        probe_reduced(p, q, samples)
    } else {
        probe_product_family(p, q, seed)
    }
}

// Polar grid over the reduced Bloch sphere: refine every node onto the
// solution set, keep the hits, collapse near-duplicates.
fn reduced_member_cloud<T: Real>(
    blocks: &AdjacentBlocks<T>,
    samples: usize,
) -> Result<(Vec<Vector3<T>>, usize)> {
    let sum = blocks.p2() + blocks.q2();
    let c = block_to_bloch(blocks.p2()) + block_to_bloch(blocks.q2());

    let res = (samples as f64).sqrt().floor() as usize;
    let membership_tol = real::<T>(1e-6);
    let mut passing: Vec<Vector3<T>> = Vec::new();
    for i in 0..res {
        let theta = real::<T>(std::f64::consts::PI * (i as f64 + 0.5) / res as f64);
        for j in 0..res {
            let phi = real::<T>(2.0 * std::f64::consts::PI * j as f64 / res as f64);
            let b0 = Vector3::new(theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos());
            let b = refine_candidate(&c, &b0);
            let r = bloch_to_block(&b);
            if reduced_membership(&sum, &r, membership_tol) {
                passing.push(b);
            }
        }
    }

    if passing.len() < 10 {
        return Err(Error::InsufficientSamples {
            found: passing.len(),
            reason: "fewer than 10 grid points refined onto the solution set".into(),
        });
    }
    Ok((dedupe_points(&passing), res))
}

/// Distinct members of the reduced solution set located by the probe grid,
/// as 2×2 blocks in the coordinates of [`AdjacentBlocks::p2`]. Same sweep
/// the dimension probe runs; exposed so callers can inspect where the
/// members actually sit (e.g. against [`CircleParam::at`]).
pub fn reduced_grid_members<T: Real>(
    p: &Projection<T>,
    q: &Projection<T>,
    samples: usize,
) -> Result<Vec<CMat<T>>> {
    let blocks = adjacent_blocks(p, q)?;
    let (cloud, _) = reduced_member_cloud(&blocks, samples)?;
    Ok(cloud.iter().map(bloch_to_block).collect())
}

// rank(P−Q) = 2 branch: grid + refinement over the Bloch sphere of the
// reduced 2×2 problem.
fn probe_reduced<T: Real>(p: &Projection<T>, q: &Projection<T>, samples: usize) -> Result<ProbeReport> {
    let blocks = adjacent_blocks(p, q)?;
    let (cloud, res) = reduced_member_cloud(&blocks, samples)?;
    let members_found = cloud.len();

    // 5× the polar grid spacing: the PCA neighborhood radius.
    let ball = real::<T>(5.0 * std::f64::consts::PI / res as f64);

    // The probe cannot tell a small circle from a point cluster once the
    // whole solution set fits inside a few neighborhoods.
    let mut lo = cloud[0];
    let mut hi = cloud[0];
    for pt in &cloud {
        for k in 0..3 {
            lo[k] = lo[k].min(pt[k]);
            hi[k] = hi[k].max(pt[k]);
        }
    }
    let box_diag = (hi - lo).norm();
    if box_diag < ball * real::<T>(6.0) {
        return Err(Error::InsufficientSamples {
            found: members_found,
            reason: "solution set smaller than the probe resolution".into(),
        });
    }

    let stride = (cloud.len() / 64).max(1);
    let mut votes = [0usize; 4];
    for center in cloud.iter().step_by(stride).take(64) {
        if let Some(dim) = local_dimension(&cloud, center, ball) {
            if dim < 4 {
                votes[dim] += 1;
            }
        }
    }
    let decided: usize = votes.iter().sum();
    if decided == 0 {
        return Err(Error::InsufficientSamples {
            found: members_found,
            reason: "all probe neighborhoods were too sparse for PCA".into(),
        });
    }
    let verdict = (0..4).max_by_key(|d| votes[*d]).unwrap();
    let estimate = match verdict {
        1 => DimensionEstimate::One,
        _ => DimensionEstimate::Two,
    };
    Ok(ProbeReport { estimate, members_found })
}

// rank(P−Q) > 2 branch: vary members independently inside two principal
// blocks. Each block contributes a circle (or sphere) of rank-one
// replacements, so the product family already has dimension two.
fn probe_product_family<T: Real>(p: &Projection<T>, q: &Projection<T>, _seed: u64) -> Result<ProbeReport> {
    let fp = frame_of(p)?;
    let fq = frame_of(q)?;
    let overlap = fp.matrix().adjoint() * fq.matrix();
    let svd = overlap.clone().svd(true, true);
    let u = svd.u.as_ref().expect("svd with u requested");
    let v_t = svd.v_t.as_ref().expect("svd with v_t requested");
    let threshold = real::<T>(1e-7);

    // Principal directions with a genuinely nonzero angle whose sine is
    // also away from zero give usable two-dimensional blocks.
    let mut block_frames: Vec<CMat<T>> = Vec::new();
    let mut block_cs: Vec<Vector3<T>> = Vec::new();
    for i in 0..svd.singular_values.len() {
        if block_frames.len() == 2 {
            break;
        }
        let sigma = svd.singular_values[i].clamp(T::zero(), T::one());
        if sigma >= T::one() - threshold {
            continue;
        }
        let x: CVec<T> = (fp.matrix() * u.column(i).into_owned()).column(0).into_owned();
        let y: CVec<T> = (fq.matrix() * v_t.row(i).adjoint()).column(0).into_owned();
        let g_raw = &y - &x * cr(sigma);
        let g_norm = g_raw.norm();
        if g_norm <= threshold {
            continue;
        }
        let g = g_raw / cr(g_norm);
        let mut frame = CMat::<T>::zeros(p.dim(), 2);
        frame.set_column(0, &x);
        frame.set_column(1, &g);
        // In block coordinates the P-side is diag(1,0) with Bloch vector
        // e_z; the Q-side has Bloch vector (2σμ, 0, σ²−μ²).
        let mu = (T::one() - sigma * sigma).max(T::zero()).sqrt();
        let two = real::<T>(2.0);
        let bq = Vector3::new(two * sigma * mu, T::zero(), sigma * sigma - mu * mu);
        block_cs.push(Vector3::new(T::zero(), T::zero(), T::one()) + bq);
        block_frames.push(frame);
    }
    if block_frames.len() < 2 {
        return Err(Error::InsufficientSamples {
            found: 0,
            reason: "fewer than two resolvable principal blocks".into(),
        });
    }

    let p_block = {
        let mut m = CMat::<T>::zeros(2, 2);
        m[(0, 0)] = cone::<T>();
        m
    };
    let membership_tol = real::<T>(1e-6);
    let grid = 8usize;
    let mut members_found = 0usize;
    for a in 0..grid {
        let ta = real::<T>(2.0 * std::f64::consts::PI * a as f64 / grid as f64);
        let ra = bloch_to_block(&latitude_circle_point(&block_cs[0], ta));
        for b in 0..grid {
            let tb = real::<T>(2.0 * std::f64::consts::PI * b as f64 / grid as f64);
            let rb = bloch_to_block(&latitude_circle_point(&block_cs[1], tb));
            let candidate = p.matrix()
                + &block_frames[0] * (&ra - &p_block) * block_frames[0].adjoint()
                + &block_frames[1] * (&rb - &p_block) * block_frames[1].adjoint();
            if membership_raw(p, q, &candidate, membership_tol) {
                members_found += 1;
            }
        }
    }
    if members_found < 10 {
        return Err(Error::InsufficientSamples {
            found: members_found,
            reason: "block product family mostly failed membership".into(),
        });
    }
    Ok(ProbeReport { estimate: DimensionEstimate::AtLeastTwo, members_found })
}

/// Adjacent pair with prescribed single principal angle `theta`: both
/// ranges share n−1 Haar-random directions and differ by a rotation of the
/// last one. Test-data generator.
pub fn random_adjacent_pair<T: Real>(
    d: usize,
    n: usize,
    theta: T,
    seed: u64,
) -> Result<(Projection<T>, Projection<T>)> {
    if n == 0 || n + 1 >= d + 1 || n + 1 > d {
        return Err(Error::DimensionMismatch(format!(
            "need 1 <= n and n+1 <= d for an adjacent pair, got n={n}, d={d}"
        )));
    }
    let mut rng = rng_from_seed(seed);
    let basis = haar_frame::<T, _>(d, n + 1, &mut rng);
    let m = basis.matrix();
    let common = m.columns(0, n - 1);
    let v = m.column(n - 1);
    let u = m.column(n);

    let mut fp = CMat::<T>::zeros(d, n);
    let mut fq = CMat::<T>::zeros(d, n);
    for j in 0..n - 1 {
        fp.set_column(j, &common.column(j).into_owned());
        fq.set_column(j, &common.column(j).into_owned());
    }
    fp.set_column(n - 1, &v.into_owned());
    let w = v.into_owned() * cr(theta.cos()) + u.into_owned() * cr(theta.sin());
    fq.set_column(n - 1, &w);

    let p = project_from_frame(&Frame::trusted(fp));
    let q = project_from_frame(&Frame::trusted(fq));
    Ok((p, q))
}

/// Orthogonal-adjacent pair: single principal angle exactly π/2.
pub fn random_orthogonal_adjacent_pair<T: Real>(
    d: usize,
    n: usize,
    seed: u64,
) -> Result<(Projection<T>, Projection<T>)> {
    random_adjacent_pair(d, n, T::FRAC_PI_2(), seed)
}
