//! Dense complex matrix helpers shared across the crate.
//!
//! Everything here is a thin layer over `nalgebra`; matrices are owned
//! `DMatrix<Complex<T>>` values in row-major semantics at the JSON boundary
//! and column-major in memory (nalgebra's layout).

use nalgebra::{DMatrix, DVector};

use crate::scalar::{cmod, cr, czero, real, Real, C};

/// Dense complex matrix over the working scalar.
pub type CMat<T> = DMatrix<C<T>>;
/// Dense complex vector over the working scalar.
pub type CVec<T> = DVector<C<T>>;

/// Largest entry modulus, the max-norm used by all validation checks.
pub fn max_modulus<T: Real>(m: &CMat<T>) -> T {
    m.iter().map(|z| cmod(*z)).fold(T::zero(), |a, b| a.max(b))
}

/// Max-norm deviation from being Hermitian.
pub fn hermitian_deviation<T: Real>(m: &CMat<T>) -> T {
    max_modulus(&(m - m.adjoint()))
}

/// Max-norm deviation from being idempotent.
pub fn idempotency_deviation<T: Real>(m: &CMat<T>) -> T {
    max_modulus(&(m * m - m))
}

/// Complex trace.
pub fn trace<T: Real>(m: &CMat<T>) -> C<T> {
    let mut t = czero::<T>();
    for i in 0..m.nrows().min(m.ncols()) {
        t += m[(i, i)];
    }
    t
}

/// Hilbert-Schmidt (Frobenius) norm.
pub fn hs_norm<T: Real>(m: &CMat<T>) -> T {
    m.iter().map(|z| z.norm_sqr()).fold(T::zero(), |a, b| a + b).sqrt()
}

/// Hilbert-Schmidt distance between two matrices of equal shape.
pub fn hs_distance<T: Real>(a: &CMat<T>, b: &CMat<T>) -> T {
    hs_norm(&(a - b))
}

/// Complex identity matrix.
pub fn identity<T: Real>(d: usize) -> CMat<T> {
    CMat::<T>::identity(d, d)
}

/// Compression `F* M F` of an operator to the subspace spanned by the
/// (orthonormal) columns of `f`.
pub fn compress<T: Real>(f: &CMat<T>, m: &CMat<T>) -> CMat<T> {
    f.adjoint() * m * f
}

/// Embedding `F B F*` of a block operator back into the ambient space.
pub fn embed<T: Real>(f: &CMat<T>, b: &CMat<T>) -> CMat<T> {
    f * b * f.adjoint()
}

/// Eigendecomposition of a Hermitian matrix with eigenvalues sorted in
/// descending order and eigenvectors permuted to match.
///
/// The input is symmetrized as `(M + M*)/2` first so that tiny Hermiticity
/// violations do not leak complex eigenvalues into the result.
pub fn hermitian_eigen_desc<T: Real>(m: &CMat<T>) -> (Vec<T>, CMat<T>) {
    let h = (m + m.adjoint()).scale(real::<T>(0.5));
    let eig = nalgebra::linalg::SymmetricEigen::new(h);
    let d = eig.eigenvalues.len();
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&i, &j| {
        eig.eigenvalues[j]
            .partial_cmp(&eig.eigenvalues[i])
            .expect("eigenvalues are finite")
    });
    let values: Vec<T> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = CMat::<T>::zeros(d, d);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    (values, vectors)
}

/// Singular values of a complex matrix, sorted in descending order.
pub fn singular_values_desc<T: Real>(m: &CMat<T>) -> Vec<T> {
    let svd = m.clone().svd(false, false);
    let mut sv: Vec<T> = svd.singular_values.iter().copied().collect();
    sv.sort_by(|a, b| b.partial_cmp(a).expect("singular values are finite"));
    sv
}

/// Rank of a Hermitian matrix counted as the number of eigenvalues whose
/// absolute value exceeds `tol`.
pub fn hermitian_rank<T: Real>(m: &CMat<T>, tol: T) -> usize {
    let (values, _) = hermitian_eigen_desc(m);
    values.iter().filter(|v| v.abs() > tol).count()
}

/// Scales a matrix by a real factor.
pub fn scale_re<T: Real>(m: &CMat<T>, s: T) -> CMat<T> {
    m.map(|z| z * cr(s))
}
