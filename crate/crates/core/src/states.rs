//! Pure states over the nonorthogonal basis and over the Löwdin basis, plus
//! density coefficients in either basis.

use std::sync::Arc;

use nalgebra::Complex;

use crate::error::{Error, Result};
use crate::gram::GramMatrix;
use crate::scalar::{abs, abs2, creal, max_abs_diff, to_f64, CMatrix, CVector, Real, Tolerances};

/// `|ψ> = Σ ψ_i |c_i>`, normalized so that `ψ† S ψ = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct SuperpositionState<T: Real> {
    coefficients: CVector<T>,
    gram: Arc<GramMatrix<T>>,
    scale: T,
}

impl<T: Real> SuperpositionState<T> {
    /// Rescales `coefficients` to unit norm under `gram`; the applied factor
    /// is kept in [`scale`](Self::scale).
    pub fn make(coefficients: CVector<T>, gram: Arc<GramMatrix<T>>) -> Result<Self> {
        check_dim(gram.dim(), coefficients.len())?;
        let norm_sq = gram_norm_sq(&coefficients, &gram);
        if !(norm_sq > T::zero()) || !norm_sq.is_finite() {
            return Err(Error::ZeroVector);
        }
        let scale = T::one() / norm_sq.sqrt();
        let coefficients = coefficients.map(|z| z * creal(scale));
        Ok(SuperpositionState {
            coefficients,
            gram,
            scale,
        })
    }

    /// Accepts coefficients that are already normalized within `tol.normalization`.
    pub fn new(
        coefficients: CVector<T>,
        gram: Arc<GramMatrix<T>>,
        tol: &Tolerances<T>,
    ) -> Result<Self> {
        check_dim(gram.dim(), coefficients.len())?;
        let norm_sq = gram_norm_sq(&coefficients, &gram);
        if !((norm_sq - T::one()).abs() <= tol.normalization) {
            return Err(Error::NotNormalized {
                norm_sq: to_f64(norm_sq),
            });
        }
        Ok(SuperpositionState {
            coefficients,
            gram,
            scale: T::one(),
        })
    }

    pub fn coefficients(&self) -> &CVector<T> {
        &self.coefficients
    }

    pub fn gram(&self) -> &Arc<GramMatrix<T>> {
        &self.gram
    }

    pub fn dim(&self) -> usize {
        self.coefficients.len()
    }

    /// Factor applied by [`make`](Self::make); 1 for states built with [`new`](Self::new).
    pub fn scale(&self) -> T {
        self.scale
    }

    /// `ψ† S ψ`
    pub fn norm_sq(&self) -> T {
        gram_norm_sq(&self.coefficients, &self.gram)
    }

    /// Whether `other` is expressed against the same Gram matrix.
    pub fn same_gram(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.gram, &other.gram) || *self.gram == *other.gram
    }
}

/// `a† S b` for two states over the same basis.
pub fn s_inner<T: Real>(a: &SuperpositionState<T>, b: &SuperpositionState<T>) -> Result<Complex<T>> {
    if !a.same_gram(b) {
        return Err(Error::GramMismatch);
    }
    let sb = a.gram.entries() * &b.coefficients;
    Ok(a.coefficients.dotc(&sb))
}

fn gram_norm_sq<T: Real>(x: &CVector<T>, gram: &GramMatrix<T>) -> T {
    x.dotc(&(gram.entries() * x)).re
}

fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DimensionMismatch { expected, found });
    }
    Ok(())
}

/// `Σ_k a_k |l_k>` over an orthonormal (Löwdin) basis, with `Σ |a_k|² = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoherentState<T: Real> {
    coefficients: CVector<T>,
}

impl<T: Real> CoherentState<T> {
    /// Rescales to unit Euclidean norm.
    pub fn normalized(coefficients: CVector<T>) -> Result<Self> {
        let norm_sq = coefficients.iter().fold(T::zero(), |acc, &z| acc + abs2(z));
        if !(norm_sq > T::zero()) || !norm_sq.is_finite() {
            return Err(Error::ZeroVector);
        }
        let k = creal(T::one() / norm_sq.sqrt());
        Ok(CoherentState {
            coefficients: coefficients.map(|z| z * k),
        })
    }

    /// Accepts coefficients already normalized within `tol.normalization`.
    pub fn new(coefficients: CVector<T>, tol: &Tolerances<T>) -> Result<Self> {
        let norm_sq = coefficients.iter().fold(T::zero(), |acc, &z| acc + abs2(z));
        if !((norm_sq - T::one()).abs() <= tol.normalization) {
            return Err(Error::NotNormalized {
                norm_sq: to_f64(norm_sq),
            });
        }
        Ok(CoherentState { coefficients })
    }

    pub(crate) fn from_raw(coefficients: CVector<T>) -> Self {
        CoherentState { coefficients }
    }

    pub fn coefficients(&self) -> &CVector<T> {
        &self.coefficients
    }

    pub fn dim(&self) -> usize {
        self.coefficients.len()
    }

    /// `|a_k|²` in basis order.
    pub fn probabilities(&self) -> Vec<T> {
        self.coefficients.iter().map(|&z| abs2(z)).collect()
    }

    /// `|a_k|²` sorted non-increasing.
    pub fn sorted_probs(&self) -> Vec<T> {
        sort_descending(self.probabilities())
    }

    /// Number of nonzero amplitudes.
    pub fn support(&self) -> usize {
        self.coefficients
            .iter()
            .filter(|&&z| abs(z) > T::zero())
            .count()
    }
}

pub(crate) fn sort_descending<T: Real>(mut p: Vec<T>) -> Vec<T> {
    p.sort_by(|a, b| b.partial_cmp(a).expect("finite probabilities"));
    p
}

/// Which basis a density matrix's coefficients refer to.
#[derive(Debug, Clone, PartialEq)]
pub enum DensityBasis<T: Real> {
    /// `ρ = Σ ρ_ij |c_i><c_j|`; normalization is `Tr[ρ S] = 1`.
    Nonorthogonal(Arc<GramMatrix<T>>),
    /// `ρ = Σ ρ_ij |l_i><l_j|`; normalization is `Tr ρ = 1`.
    Lowdin,
}

/// Coefficients `ρ_ij` of a density operator in a given basis.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityCoefficients<T: Real> {
    matrix: CMatrix<T>,
    basis: DensityBasis<T>,
}

impl<T: Real> DensityCoefficients<T> {
    /// Checks Hermiticity and the basis-appropriate trace condition.
    pub fn new(matrix: CMatrix<T>, basis: DensityBasis<T>, tol: &Tolerances<T>) -> Result<Self> {
        let (rows, cols) = matrix.shape();
        if rows != cols {
            return Err(Error::NotSquare { rows, cols });
        }
        let asym = max_abs_diff(&matrix, &matrix.adjoint());
        if asym > tol.normalization {
            return Err(Error::InvalidDensity(format!(
                "not Hermitian (asymmetry {:e})",
                to_f64(asym)
            )));
        }
        let trace = match &basis {
            DensityBasis::Lowdin => matrix.trace().re,
            DensityBasis::Nonorthogonal(g) => {
                check_dim(g.dim(), rows)?;
                (&matrix * g.entries()).trace().re
            }
        };
        if !((trace - T::one()).abs() <= tol.normalization) {
            return Err(Error::InvalidDensity(format!(
                "trace condition violated ({})",
                to_f64(trace)
            )));
        }
        Ok(DensityCoefficients { matrix, basis })
    }

    /// `ρ_ij = ψ_i ψ_j*` over the nonorthogonal basis.
    pub fn from_superposition(state: &SuperpositionState<T>) -> Self {
        let x = state.coefficients();
        DensityCoefficients {
            matrix: x * x.adjoint(),
            basis: DensityBasis::Nonorthogonal(state.gram().clone()),
        }
    }

    /// `ρ_ij = a_i a_j*` over the Löwdin basis.
    pub fn from_coherent(state: &CoherentState<T>) -> Self {
        let x = state.coefficients();
        DensityCoefficients {
            matrix: x * x.adjoint(),
            basis: DensityBasis::Lowdin,
        }
    }

    pub fn matrix(&self) -> &CMatrix<T> {
        &self.matrix
    }

    pub fn basis(&self) -> &DensityBasis<T> {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }
}
