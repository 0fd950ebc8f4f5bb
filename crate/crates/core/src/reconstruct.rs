//! Classification of a transition-probability-preserving map and
//! reconstruction of the operator inducing it.
//!
//! A preserving map φ on rank-n projections, once extended to the real-linear
//! Φ, sends rank-one projections either to rank-one projections (plain form)
//! or, when d = 2n, to (1/n)I minus a rank-one projection (complement form).
//! In both cases the rank-one action is induced by a unitary V, acting
//! linearly as p ↦ VpV* or antilinearly as p ↦ V·conj(p)·V*. The pipeline
//! here decides the form, recovers V column by column from a small probe
//! family, decides linearity, and verifies the result against fresh samples.

use crate::error::{Error, Result};
use crate::extend::{check_transition_preserving, extend_map, ExtendedMap, MapOracle};
use crate::matrix::{hermitian_eigen_desc, hs_distance, identity, max_modulus, CMat, CVec};
use crate::projections::{
    complement, default_tol, random_projection, validate_projection, Projection,
};
use crate::rng::split_seed;
use crate::scalar::{ci, cmod, cr, real, Real, C};

/// Which of the two conclusions of the classification holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Form {
    /// φ(P) = VPV* (with conj(P) in the antilinear case).
    Plain,
    /// φ(P) = I − VPV*, only possible at d = 2n.
    Complement,
}

/// Whether the inducing operator is linear or antilinear.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Linearity {
    Linear,
    Antilinear,
}

/// Outcome of a successful classification.
#[derive(Debug, Clone)]
pub struct WignerClassification<T: Real> {
    pub form: Form,
    pub linearity: Linearity,
    /// The inducing operator, unitary within 1e−8, gauge-fixed so the first
    /// nonzero entry of its first column is real positive.
    pub v: CMat<T>,
    /// Worst projection-level mismatch over the verification sample.
    pub residual: T,
    pub verified_pairs: usize,
}

/// Φ applied to a rank-one projection; Hermitian but not necessarily a
/// projection (the complement form yields (1/n)I minus a rank-one).
pub fn rank_one_image<T: Real>(phi: &ExtendedMap<T>, p: &Projection<T>) -> CMat<T> {
    phi.apply(p.matrix())
}

// Deviation of a Hermitian matrix from being a rank-one projection,
// measured as max entry deviation of m² from m.
fn projection_deviation<T: Real>(m: &CMat<T>) -> T {
    max_modulus(&(m * m - m))
}

/// Decides whether Φ maps rank-ones to rank-ones (plain) or, at d = 2n, to
/// (1/n)I minus rank-ones (complement), by sampling.
pub fn detect_form<T: Real>(
    phi: &ExtendedMap<T>,
    d: usize,
    n: usize,
    trials: usize,
    seed: u64,
) -> Result<Form> {
    let tol = real::<T>(1e-6);
    let mut worst_plain = T::zero();
    let mut worst_comp = T::zero();
    let mut plain_ok = true;
    let mut comp_ok = d == 2 * n;
    let inv_n = T::one() / real::<T>(n as f64);
    for i in 0..trials {
        let p = random_projection::<T>(d, 1, split_seed(seed, i as u64))?;
        let image = rank_one_image(phi, &p);
        if plain_ok {
            worst_plain = worst_plain.max(projection_deviation(&image));
            plain_ok = matches!(
                validate_projection(image.clone(), tol).map(|v| v.rank()),
                Ok(1)
            );
        }
        if comp_ok {
            let flipped = identity::<T>(d) * cr(inv_n) - &image;
            worst_comp = worst_comp.max(projection_deviation(&flipped));
            comp_ok = matches!(validate_projection(flipped, tol).map(|v| v.rank()), Ok(1));
        }
        if !plain_ok && !comp_ok {
            break;
        }
    }
    if plain_ok {
        Ok(Form::Plain)
    } else if comp_ok {
        Ok(Form::Complement)
    } else {
        let residual = if d == 2 * n { worst_plain.min(worst_comp) } else { worst_plain };
        Err(Error::NotWigner { residual: residual.to_f64().unwrap_or(f64::NAN) })
    }
}

/// The 2d − 1 rank-one probes determining V, in order: the coordinate
/// projections e₀e₀* and eⱼeⱼ* for j ≥ 2, the d − 1 phase-fixing
/// projections onto e₀ + eⱼ, and the linearity probe onto e₀ + i·e₁.
///
/// The diagonal probe e₁e₁* is redundant: the linearity probe's image lies
/// in span{f₀, f₁} and determines the direction of f₁ once f₀ is known.
pub fn probe_family<T: Real>(d: usize) -> Vec<Projection<T>> {
    let tol = default_tol(d);
    let unit_proj = |v: &CVec<T>| {
        let v = v / cr(v.norm());
        Projection::trusted(&v * v.adjoint(), 1, tol)
    };
    let mut family = Vec::with_capacity(2 * d - 1);
    for j in std::iter::once(0).chain(2..d) {
        let mut v = CVec::<T>::zeros(d);
        v[j] = cr(T::one());
        family.push(unit_proj(&v));
    }
    for j in 1..d {
        let mut v = CVec::<T>::zeros(d);
        v[0] = cr(T::one());
        v[j] = cr(T::one());
        family.push(unit_proj(&v));
    }
    let mut v = CVec::<T>::zeros(d);
    v[0] = cr(T::one());
    v[1] = ci(T::one());
    family.push(unit_proj(&v));
    family
}

fn top_eigenvector<T: Real>(m: &CMat<T>) -> CVec<T> {
    let (_, vectors) = hermitian_eigen_desc(m);
    vectors.column(0).into_owned()
}

fn unit_phase<T: Real>(z: C<T>) -> C<T> {
    z / cr(cmod(z))
}

/// Recovers the inducing operator from a rank-one map evaluated on the
/// probe family.
///
/// Column f₀ spans im ψ(e₀e₀*); the direction of f₁ is the component of
/// im ψ(proj(e₀+i·e₁)) orthogonal to f₀; column fⱼ for j ≥ 2 spans
/// im ψ(eⱼeⱼ*). Each fⱼ has its phase fixed so f₀ + fⱼ spans
/// im ψ(proj(e₀+eⱼ)), and linearity is decided by whether the probe image
/// is spanned by f₀ + i·f₁ or f₀ − i·f₁. The result is gauge-fixed: first
/// nonzero entry of f₀ real positive.
pub fn reconstruct_isometry<T: Real>(
    psi: impl Fn(&Projection<T>) -> Result<CMat<T>>,
    d: usize,
) -> Result<(CMat<T>, Linearity)> {
    let family = probe_family::<T>(d);
    let min_overlap = real::<T>(1e-6);

    let f0 = top_eigenvector(&psi(&family[0])?);
    let w = top_eigenvector(&psi(&family[2 * d - 2])?);

    // Unphased column directions, index j − 1 for j = 1..d.
    let mut directions: Vec<CVec<T>> = Vec::with_capacity(d - 1);
    let residual = &w - &f0 * f0.dotc(&w);
    let norm = residual.norm();
    if norm < min_overlap {
        return Err(Error::PhaseFixFailed { overlap: norm.to_f64().unwrap_or(f64::NAN) });
    }
    directions.push(residual / cr(norm));
    for j in 2..d {
        directions.push(top_eigenvector(&psi(&family[j - 1])?));
    }

    let mut columns = vec![f0.clone()];
    for j in 1..d {
        let g = &directions[j - 1];
        let m = top_eigenvector(&psi(&family[d - 2 + j])?);
        let z = g.dotc(&m) * m.dotc(&f0);
        let overlap = cmod(z);
        if overlap < min_overlap {
            return Err(Error::PhaseFixFailed { overlap: overlap.to_f64().unwrap_or(f64::NAN) });
        }
        columns.push(g * unit_phase(z));
    }
    let half = cr(T::FRAC_1_SQRT_2());
    let lin_probe = (&columns[0] + &columns[1] * ci(T::one())) * half;
    let anti_probe = (&columns[0] - &columns[1] * ci(T::one())) * half;
    let lin_score = cmod(lin_probe.dotc(&w)).powi(2);
    let anti_score = cmod(anti_probe.dotc(&w)).powi(2);
    let threshold = real::<T>(0.99);
    let linearity = if lin_score >= threshold {
        Linearity::Linear
    } else if anti_score >= threshold {
        Linearity::Antilinear
    } else {
        return Err(Error::LinearityAmbiguous {
            linear: lin_score.to_f64().unwrap_or(f64::NAN),
            antilinear: anti_score.to_f64().unwrap_or(f64::NAN),
        });
    };

    let mut v = CMat::<T>::zeros(d, d);
    for (j, col) in columns.iter().enumerate() {
        v.set_column(j, col);
    }
    let gauge_floor = real::<T>(1e-8);
    if let Some(k) = (0..d).find(|k| cmod(v[(*k, 0)]) > gauge_floor) {
        let phase = unit_phase(v[(k, 0)]).conj();
        v *= phase;
    }
    Ok((v, linearity))
}

// conj(m): entrywise conjugation in the standard basis.
fn entrywise_conj<T: Real>(m: &CMat<T>) -> CMat<T> {
    m.map(|z| z.conj())
}

// The model map's prediction for φ(P) given the classification.
fn predicted<T: Real>(v: &CMat<T>, form: Form, linearity: Linearity, p: &Projection<T>) -> CMat<T> {
    let inner = match linearity {
        Linearity::Linear => p.matrix().clone(),
        Linearity::Antilinear => entrywise_conj(p.matrix()),
    };
    let image = v * inner * v.adjoint();
    match form {
        Form::Plain => image,
        Form::Complement => identity::<T>(p.dim()) - image,
    }
}

/// Full pipeline: preservation check, extension, form detection, operator
/// reconstruction, and verification on fresh samples. Deterministic for a
/// fixed seed.
pub fn classify_map<T: Real>(
    oracle: &dyn MapOracle<T>,
    d: usize,
    n: usize,
    seed: u64,
) -> Result<WignerClassification<T>> {
    if !(d > n && n >= 2) {
        return Err(Error::DimensionMismatch(format!(
            "classification needs d > n >= 2, got d={d}, n={n}"
        )));
    }
    let report = check_transition_preserving(oracle, 50, split_seed(seed, 1))?;
    if report.violating_pair.is_some() {
        return Err(Error::NotPreserving {
            residual: report.max_residual.to_f64().unwrap_or(f64::NAN),
        });
    }

    let phi = extend_map(oracle, d, n)?;
    let form = detect_form(&phi, d, n, 20, split_seed(seed, 2))?;

    let inv_n = T::one() / real::<T>(n as f64);
    let psi = |p: &Projection<T>| -> Result<CMat<T>> {
        let image = rank_one_image(&phi, p);
        Ok(match form {
            Form::Plain => image,
            Form::Complement => identity::<T>(d) * cr(inv_n) - image,
        })
    };
    let (v, linearity) = reconstruct_isometry(psi, d)?;

    let unitarity = max_modulus(&(v.adjoint() * &v - identity::<T>(d)));
    if unitarity > real::<T>(1e-8) {
        return Err(Error::VerificationFailed {
            residual: unitarity.to_f64().unwrap_or(f64::NAN),
            tol: 1e-8,
        });
    }

    let verified_pairs = 50;
    let samples = oracle.probe_inputs(verified_pairs, split_seed(seed, 3))?;
    let mut residual = T::zero();
    for p in &samples {
        let actual = oracle.apply(p)?;
        let model = predicted(&v, form, linearity, p);
        residual = residual.max(hs_distance(actual.matrix(), &model));
    }
    let verify_tol = real::<T>(1e-6);
    if residual > verify_tol {
        return Err(Error::VerificationFailed {
            residual: residual.to_f64().unwrap_or(f64::NAN),
            tol: 1e-6,
        });
    }
    Ok(WignerClassification { form, linearity, v, residual, verified_pairs })
}

/// The dual map P̃ ↦ I − φ(I − P̃) on rank d − m projections, which
/// preserves transition probabilities whenever φ does. Dualizing twice
/// gives back the original action.
pub struct DualOracle<'a, T: Real> {
    inner: &'a dyn MapOracle<T>,
}

/// Wraps an oracle on rank-m projections as its dual on rank d − m.
pub fn dualize_oracle<T: Real>(oracle: &dyn MapOracle<T>, d: usize) -> DualOracle<'_, T> {
    assert_eq!(oracle.dim(), d, "oracle dimension does not match d");
    assert!(oracle.rank() < d, "dual rank would be zero");
    DualOracle { inner: oracle }
}

impl<T: Real> MapOracle<T> for DualOracle<'_, T> {
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn rank(&self) -> usize {
        self.inner.dim() - self.inner.rank()
    }

    fn apply(&self, p: &Projection<T>) -> Result<Projection<T>> {
        let image = self.inner.apply(&complement(p))?;
        Ok(complement(&image))
    }

    fn probe_inputs(&self, count: usize, seed: u64) -> Result<Vec<Projection<T>>> {
        Ok(self
            .inner
            .probe_inputs(count, seed)?
            .iter()
            .map(complement)
            .collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extend::FnOracle;
    use crate::projections::{nearest_projection, random_unitary};
    use crate::rng::{complex_gaussian, rng_from_seed};

    fn conjugation_oracle(d: usize, n: usize, seed: u64) -> FnOracle<f64, impl Fn(&Projection<f64>) -> CMat<f64>> {
        let u = random_unitary::<f64>(d, seed);
        FnOracle::new(d, n, move |p: &Projection<f64>| &u * p.matrix() * u.adjoint())
    }

    #[test]
    fn identity_rank_one_action_gives_identity_operator() {
        let psi = |p: &Projection<f64>| Ok(p.matrix().clone());
        let (v, linearity) = reconstruct_isometry(psi, 4).unwrap();
        assert_eq!(linearity, Linearity::Linear);
        assert!(max_modulus(&(&v - identity::<f64>(4))) <= 1e-12);
    }

    #[test]
    fn conjugate_rank_one_action_is_antilinear() {
        let psi = |p: &Projection<f64>| Ok(entrywise_conj(p.matrix()));
        let (v, linearity) = reconstruct_isometry(psi, 4).unwrap();
        assert_eq!(linearity, Linearity::Antilinear);
        assert!(max_modulus(&(&v - identity::<f64>(4))) <= 1e-12);
    }

    #[test]
    fn unitary_rank_one_action_recovers_the_unitary() {
        let u = random_unitary::<f64>(5, 31);
        let uc = u.clone();
        let psi = move |p: &Projection<f64>| Ok(&uc * p.matrix() * uc.adjoint());
        let (v, linearity) = reconstruct_isometry(psi, 5).unwrap();
        assert_eq!(linearity, Linearity::Linear);
        // Projection-level agreement eliminates the global phase.
        for seed in 0..10u64 {
            let p = random_projection::<f64>(5, 1, 700 + seed).unwrap();
            let lhs = &v * p.matrix() * v.adjoint();
            let rhs = &u * p.matrix() * u.adjoint();
            assert!(max_modulus(&(lhs - rhs)) <= 1e-8);
        }
    }

    #[test]
    fn detect_form_distinguishes_the_two_patterns() {
        let plain = conjugation_oracle(4, 2, 32);
        let phi = extend_map(&plain, 4, 2).unwrap();
        assert_eq!(detect_form(&phi, 4, 2, 10, 33).unwrap(), Form::Plain);

        let u = random_unitary::<f64>(4, 34);
        let comp = FnOracle::new(4, 2, move |p: &Projection<f64>| {
            identity::<f64>(4) - &u * p.matrix() * u.adjoint()
        });
        let phi = extend_map(&comp, 4, 2).unwrap();
        assert_eq!(detect_form(&phi, 4, 2, 10, 35).unwrap(), Form::Complement);
    }

    #[test]
    fn classify_plain_linear() {
        let oracle = conjugation_oracle(6, 2, 36);
        let c = classify_map(&oracle, 6, 2, 37).unwrap();
        assert_eq!(c.form, Form::Plain);
        assert_eq!(c.linearity, Linearity::Linear);
        assert!(c.residual <= 1e-8, "residual {}", c.residual);
        assert_eq!(c.verified_pairs, 50);
        assert!(max_modulus(&(c.v.adjoint() * &c.v - identity::<f64>(6))) <= 1e-8);
    }

    #[test]
    fn classify_complement_antilinear() {
        let u = random_unitary::<f64>(4, 38);
        let oracle = FnOracle::new(4, 2, move |p: &Projection<f64>| {
            identity::<f64>(4) - &u * entrywise_conj(p.matrix()) * u.adjoint()
        });
        let c = classify_map(&oracle, 4, 2, 39).unwrap();
        assert_eq!(c.form, Form::Complement);
        assert_eq!(c.linearity, Linearity::Antilinear);
        assert!(c.residual <= 1e-8, "residual {}", c.residual);
    }

    #[test]
    fn classification_is_gauge_invariant() {
        let u = random_unitary::<f64>(5, 40);
        let phase = C::<f64>::new(0.6, 0.8);
        let u2 = &u * phase;
        let mk = |w: CMat<f64>| {
            FnOracle::new(5, 2, move |p: &Projection<f64>| &w * p.matrix() * w.adjoint())
        };
        let a = classify_map(&mk(u), 5, 2, 41).unwrap();
        let b = classify_map(&mk(u2), 5, 2, 41).unwrap();
        assert_eq!(a.form, b.form);
        assert_eq!(a.linearity, b.linearity);
        // The gauge fix pins the same representative for both.
        assert!(max_modulus(&(&a.v - &b.v)) <= 1e-8);
    }

    #[test]
    fn distortion_is_caught_as_non_preserving() {
        let mut rng = rng_from_seed(42);
        let mut t = identity::<f64>(4);
        for i in 0..4 {
            for j in 0..4 {
                t[(i, j)] += complex_gaussian::<f64, _>(&mut rng) * cr(0.3);
            }
        }
        let oracle = FnOracle::new(4, 2, move |p: &Projection<f64>| {
            nearest_projection(&(&t * p.matrix() * t.adjoint()), 2)
                .unwrap()
                .into_matrix()
        });
        match classify_map(&oracle, 4, 2, 43).unwrap_err() {
            Error::NotPreserving { residual } => assert!(residual > 1e-3, "residual {residual}"),
            other => panic!("expected NotPreserving, got {other}"),
        }
    }

    #[test]
    fn classify_rejects_small_ranks() {
        let oracle = conjugation_oracle(4, 1, 44);
        assert!(classify_map(&oracle, 4, 1, 45).is_err());
    }

    #[test]
    fn dual_of_conjugation_is_conjugation() {
        let u = random_unitary::<f64>(5, 46);
        let uc = u.clone();
        let oracle = FnOracle::new(5, 2, move |p: &Projection<f64>| &uc * p.matrix() * uc.adjoint());
        let dual = dualize_oracle(&oracle, 5);
        assert_eq!(dual.rank(), 3);
        let p = random_projection::<f64>(5, 3, 47).unwrap();
        let via_dual = dual.apply(&p).unwrap();
        let direct = &u * p.matrix() * u.adjoint();
        assert!(max_modulus(&(via_dual.matrix() - direct)) <= 1e-12);
    }

    #[test]
    fn dualizing_twice_is_the_identity() {
        let u = random_unitary::<f64>(5, 48);
        let oracle = FnOracle::new(5, 2, move |p: &Projection<f64>| &u * p.matrix() * u.adjoint());
        let dual = dualize_oracle(&oracle, 5);
        let double = dualize_oracle(&dual, 5);
        assert_eq!(double.rank(), 2);
        let p = random_projection::<f64>(5, 2, 49).unwrap();
        let a = oracle.apply(&p).unwrap();
        let b = double.apply(&p).unwrap();
        assert!(hs_distance(a.matrix(), b.matrix()) <= 1e-12);
    }

    #[test]
    fn preservation_transfers_to_the_dual() {
        let u = random_unitary::<f64>(6, 50);
        let oracle = FnOracle::new(6, 2, move |p: &Projection<f64>| &u * p.matrix() * u.adjoint());
        let dual = dualize_oracle(&oracle, 6);
        let report = check_transition_preserving(&dual, 30, 51).unwrap();
        assert!(report.max_residual <= 1e-10);
        assert!(report.violating_pair.is_none());
    }

    #[test]
    fn roundtrip_over_the_generator_grid() {
        // One generator per configuration; the acceptance suite runs many.
        let configs: [(usize, usize, Form, Linearity); 4] = [
            (5, 2, Form::Plain, Linearity::Linear),
            (6, 3, Form::Plain, Linearity::Antilinear),
            (4, 2, Form::Complement, Linearity::Linear),
            (6, 3, Form::Complement, Linearity::Antilinear),
        ];
        for (idx, (d, n, form, linearity)) in configs.into_iter().enumerate() {
            let u = random_unitary::<f64>(d, 60 + idx as u64);
            let oracle = FnOracle::new(d, n, move |p: &Projection<f64>| {
                let inner = match linearity {
                    Linearity::Linear => p.matrix().clone(),
                    Linearity::Antilinear => entrywise_conj(p.matrix()),
                };
                let image = &u * inner * u.adjoint();
                match form {
                    Form::Plain => image,
                    Form::Complement => identity::<f64>(d) - image,
                }
            });
            let c = classify_map(&oracle, d, n, 70 + idx as u64).unwrap();
            assert_eq!((c.form, c.linearity), (form, linearity), "config {idx}");
            assert!(c.residual <= 1e-7, "config {idx} residual {}", c.residual);
        }
    }
}
