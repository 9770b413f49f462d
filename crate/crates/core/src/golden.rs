//! Maximally coherent states and their images under the backward Löwdin map,
//! the golden (maximal superposition) states for uniform overlaps.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::gram::UniformOverlap;
use crate::lso::LowdinMap;
use crate::scalar::{abs2, c, lit, real_vector, to_f64, CVector, Real, Tolerances};
use crate::states::{CoherentState, SuperpositionState};

/// `(1/√d) Σ e^{iθ_k} |l_k>`; phases default to zero.
pub fn maximally_coherent<T: Real>(d: usize, phases: Option<&[T]>) -> Result<CoherentState<T>> {
    if d < 2 {
        return Err(Error::InvalidDimension(d));
    }
    let amp = T::one() / lit::<T>(d as f64).sqrt();
    let coefficients = match phases {
        None => CVector::from_element(d, c(amp, T::zero())),
        Some(theta) => {
            if theta.len() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    found: theta.len(),
                });
            }
            CVector::from_iterator(
                d,
                theta.iter().map(|&t| c(amp * t.cos(), amp * t.sin())),
            )
        }
    };
    Ok(CoherentState::from_raw(coefficients))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GoldenSign {
    Plus,
    /// Only defined for `d = 2`.
    Minus,
}

/// Parameters of a golden state over a uniform overlap.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GoldenSpec<T> {
    pub d: usize,
    pub s: T,
    pub sign: GoldenSign,
}

impl<T: Real> GoldenSpec<T> {
    /// `Plus` needs `s ∈ (1/(1-d), 0]`; `Minus` needs `d = 2` and `s ∈ [0, 1)`.
    pub fn new(d: usize, s: T, sign: GoldenSign) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidDimension(d));
        }
        let (lower, upper) = UniformOverlap::<T>::open_range(d);
        let ok = match sign {
            GoldenSign::Plus => s > lower && s <= T::zero(),
            GoldenSign::Minus => d == 2 && s >= T::zero() && s < upper,
        };
        if !ok {
            return Err(Error::OverlapOutOfGoldenRange { d, s: to_f64(s) });
        }
        Ok(GoldenSpec { d, s, sign })
    }

    pub fn build(&self) -> Result<SuperpositionState<T>> {
        match self.sign {
            GoldenSign::Plus => golden_plus(self.d, self.s),
            GoldenSign::Minus => golden_minus_2d(self.s),
        }
    }
}

/// `(|c_0> + … + |c_{d-1}>) / √(d(1 + (d-1)s))` over the uniform overlap `s ≤ 0`.
pub fn golden_plus<T: Real>(d: usize, s: T) -> Result<SuperpositionState<T>> {
    GoldenSpec::new(d, s, GoldenSign::Plus)?;
    let gram = Arc::new(UniformOverlap::new(d, s)?.to_gram()?);
    let dt: T = lit(d as f64);
    let amp = T::one() / (dt * (T::one() + (dt - T::one()) * s)).sqrt();
    SuperpositionState::new(real_vector(&vec![amp; d]), gram, &Tolerances::default())
}

/// `(|c_0> - |c_1>) / √(2(1 - s))` over the two-dimensional overlap `s ≥ 0`.
pub fn golden_minus_2d<T: Real>(s: T) -> Result<SuperpositionState<T>> {
    GoldenSpec::new(2, s, GoldenSign::Minus)?;
    let gram = Arc::new(UniformOverlap::new(2, s)?.to_gram()?);
    let amp = T::one() / (lit::<T>(2.0) * (T::one() - s)).sqrt();
    SuperpositionState::new(real_vector(&[amp, -amp]), gram, &Tolerances::default())
}

/// Backward image of a maximally coherent state.
pub fn golden_from_coherent<T: Real>(
    map: &LowdinMap<T>,
    phi: &CoherentState<T>,
) -> Result<SuperpositionState<T>> {
    let tol = Tolerances::<T>::default();
    let target = T::one() / lit::<T>(phi.dim() as f64);
    let deviation = phi
        .coefficients()
        .iter()
        .fold(T::zero(), |acc, &z| acc.max((abs2(z) - target).abs()));
    if deviation > tol.normalization {
        return Err(Error::NotMaximallyCoherent {
            deviation: to_f64(deviation),
        });
    }
    map.backward(phi)
}
