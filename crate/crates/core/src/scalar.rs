//! Scalar abstraction shared by every numerical routine in the crate.
//!
//! All math is written against [`Real`], which is implemented for `f32` and
//! `f64`. Amplitudes and matrix entries are `Complex<T>`.

use std::fmt::{Debug, Display};

use nalgebra::{Complex, DMatrix, DVector, RealField};
use num_traits::{FromPrimitive, ToPrimitive};

/// Dense complex matrix over the scalar `T`.
pub type CMatrix<T> = DMatrix<Complex<T>>;
/// Dense complex column vector over the scalar `T`.
pub type CVector<T> = DVector<Complex<T>>;

/// Real floating-point scalar usable throughout the crate.
pub trait Real:
    RealField + Copy + FromPrimitive + ToPrimitive + Display + Debug + Send + Sync + 'static
{
    /// Tolerances appropriate for this precision.
    fn default_tolerances() -> Tolerances<Self>;
}

impl Real for f64 {
    fn default_tolerances() -> Tolerances<f64> {
        Tolerances {
            hermitian: 1e-12,
            unit_diagonal: 1e-12,
            eps_pd: 1e-9,
            normalization: 1e-10,
            eigen_residual: 1e-10,
            majorization: 1e-12,
            clamp: 1e-12,
            eigen_max_iter: 10_000,
        }
    }
}

impl Real for f32 {
    fn default_tolerances() -> Tolerances<f32> {
        Tolerances {
            hermitian: 1e-6,
            unit_diagonal: 1e-6,
            eps_pd: 1e-4,
            normalization: 1e-5,
            eigen_residual: 1e-5,
            majorization: 1e-6,
            clamp: 1e-6,
            eigen_max_iter: 10_000,
        }
    }
}

/// Numerical thresholds used by validation and comparison routines.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances<T> {
    /// Largest `|S_ij - conj(S_ji)|` that is repaired by symmetrization.
    pub hermitian: T,
    /// Largest `|S_ii - 1|` accepted for a Gram matrix.
    pub unit_diagonal: T,
    /// Smallest eigenvalue must exceed this for a Gram matrix to be accepted.
    pub eps_pd: T,
    /// Accepted deviation of a state norm from one.
    pub normalization: T,
    /// Max-norm residual accepted for `S - U Λ U†`.
    pub eigen_residual: T,
    /// Slack in tail-sum comparisons.
    pub majorization: T,
    /// Probabilities may leave `[0, 1]` by at most this before it is an error.
    pub clamp: T,
    pub eigen_max_iter: usize,
}

impl<T: Real> Default for Tolerances<T> {
    fn default() -> Self {
        T::default_tolerances()
    }
}

/// Converts an `f64` literal into `T`.
#[inline]
pub fn lit<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("f64 literal representable in scalar type")
}

/// Lossy conversion to `f64`, for error payloads and output.
#[inline]
pub fn to_f64<T: Real>(x: T) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

#[inline]
pub(crate) fn c<T: Real>(re: T, im: T) -> Complex<T> {
    Complex::new(re, im)
}

#[inline]
pub(crate) fn creal<T: Real>(re: T) -> Complex<T> {
    Complex::new(re, T::zero())
}

/// `|z|²`
#[inline]
pub fn abs2<T: Real>(z: Complex<T>) -> T {
    z.re * z.re + z.im * z.im
}

/// `|z|`
#[inline]
pub fn abs<T: Real>(z: Complex<T>) -> T {
    z.re.hypot(z.im)
}

/// Largest entry modulus of a complex matrix.
pub fn max_abs<T: Real>(m: &CMatrix<T>) -> T {
    m.iter().fold(T::zero(), |acc, &z| acc.max(abs(z)))
}

/// Largest entry modulus of `a - b`.
pub fn max_abs_diff<T: Real>(a: &CMatrix<T>, b: &CMatrix<T>) -> T {
    assert_eq!(a.shape(), b.shape());
    a.iter()
        .zip(b.iter())
        .fold(T::zero(), |acc, (&x, &y)| acc.max(abs(x - y)))
}

/// Largest componentwise modulus of `a - b`.
pub fn max_abs_diff_vec<T: Real>(a: &CVector<T>, b: &CVector<T>) -> T {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b.iter())
        .fold(T::zero(), |acc, (&x, &y)| acc.max(abs(x - y)))
}

/// Builds a complex vector from real amplitudes.
pub fn real_vector<T: Real>(values: &[T]) -> CVector<T> {
    CVector::from_iterator(values.len(), values.iter().map(|&x| creal(x)))
}

/// Distance between two vectors after removing the best global phase.
///
/// Returns `max_i |a_i - e^{iθ} b_i|` with `e^{iθ}` chosen to align `b` onto `a`.
pub fn phase_aligned_diff<T: Real>(a: &CVector<T>, b: &CVector<T>) -> T {
    let overlap = b.dotc(a);
    let m = abs(overlap);
    let phase = if m > T::zero() {
        overlap / creal(m)
    } else {
        creal(T::one())
    };
    let rotated = b.map(|z| z * phase);
    max_abs_diff_vec(a, &rotated)
}
