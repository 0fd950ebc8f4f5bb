//! Generic scalar support.
//!
//! All numerical code in this crate is generic over the real scalar type
//! through the [`Real`] trait; complex entries are `Complex<T>` on top of it.
//! The crate root exports `f64` and `f32` aliases for the main types.

use nalgebra::{Complex, RealField};
use num_traits::{FloatConst, FromPrimitive, ToPrimitive};

/// Real scalar type the library is generic over.
pub trait Real: RealField + Copy + FloatConst + FromPrimitive + ToPrimitive + Default {}

impl Real for f32 {}
impl Real for f64 {}

/// Shorthand for the complex scalar built on `T`.
pub type C<T> = Complex<T>;

/// Converts an `f64` constant into the working scalar type.
///
/// Panics only if the target type cannot represent any `f64` at all, which
/// none of the supported scalars do.
#[inline]
pub fn real<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("f64 constant must convert into the scalar type")
}

/// Real value promoted to a complex scalar.
#[inline]
pub fn cr<T: Real>(x: T) -> C<T> {
    Complex::new(x, T::zero())
}

/// Purely imaginary complex scalar.
#[inline]
pub fn ci<T: Real>(x: T) -> C<T> {
    Complex::new(T::zero(), x)
}

/// Complex zero.
#[inline]
pub fn czero<T: Real>() -> C<T> {
    Complex::new(T::zero(), T::zero())
}

/// Complex one.
#[inline]
pub fn cone<T: Real>() -> C<T> {
    Complex::new(T::one(), T::zero())
}

/// Modulus of a complex scalar.
///
/// `Complex::norm` needs `num_traits::Float`, which `RealField` scalars do
/// not carry; this computes the same value through `RealField::sqrt`.
#[inline]
pub fn cmod<T: Real>(z: C<T>) -> T {
    (z.re * z.re + z.im * z.im).sqrt()
}
