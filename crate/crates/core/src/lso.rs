//! Löwdin symmetric orthogonalization.
//!
//! The Löwdin basis is `|l_k> = Σ_j |c_j> (S^{-1/2})_{jk}`. Hence
//! `|c_j> = Σ_k |l_k> (S^{1/2})_{kj}`, and a state `Σ ψ_j |c_j>` has Löwdin
//! amplitudes `ψ̄ = S^{1/2} ψ` (forward map). The backward map is
//! `φ = S^{-1/2} φ̄`. For real overlaps `S^{±1/2}` is symmetric and the row and
//! column conventions coincide; for complex overlaps this orientation is the
//! one that keeps `<l_i|l_k> = δ_ik` and `ψ̄†φ̄ = ψ†Sφ`.

use std::sync::Arc;

use log::warn;

use crate::error::{Error, Result};
use crate::gram::{GramMatrix, UniformOverlap};
use crate::scalar::{abs2, creal, lit, max_abs_diff, to_f64, CMatrix, CVector, Real, Tolerances};
use crate::states::{CoherentState, SuperpositionState};

/// Precomputed change of basis between `{|c_i>}` and its Löwdin basis.
#[derive(Debug, Clone)]
pub struct LowdinMap<T: Real> {
    gram: Arc<GramMatrix<T>>,
    sqrt_s: CMatrix<T>,
    inv_sqrt_s: CMatrix<T>,
    tol: Tolerances<T>,
}

impl<T: Real> LowdinMap<T> {
    pub fn build(gram: Arc<GramMatrix<T>>) -> Result<Self> {
        Self::build_with(gram, Tolerances::default())
    }

    pub fn build_with(gram: Arc<GramMatrix<T>>, tol: Tolerances<T>) -> Result<Self> {
        let sqrt_s = gram.matrix_sqrt();
        let inv_sqrt_s = gram.matrix_inv_sqrt();
        let d = gram.dim();
        let id = CMatrix::identity(d, d);
        let ortho = max_abs_diff(&(&inv_sqrt_s * gram.entries() * &inv_sqrt_s), &id);
        let inverse = max_abs_diff(&(&sqrt_s * &inv_sqrt_s), &id);
        // Residuals scale with the condition number of S.
        let cond = gram.spectral_decompose().eigenvalues[d - 1] / gram.spectral_decompose().min_eigenvalue();
        let bound = tol.eigen_residual * T::one().max(cond);
        if !(ortho <= bound && inverse <= bound) {
            return Err(Error::ConvergenceFailure(format!(
                "Löwdin map residuals too large (orthonormality {:e}, inverse {:e})",
                to_f64(ortho),
                to_f64(inverse)
            )));
        }
        Ok(LowdinMap {
            gram,
            sqrt_s,
            inv_sqrt_s,
            tol,
        })
    }

    pub fn gram(&self) -> &Arc<GramMatrix<T>> {
        &self.gram
    }

    pub fn dim(&self) -> usize {
        self.gram.dim()
    }

    /// `S^{1/2}`
    pub fn sqrt_s(&self) -> &CMatrix<T> {
        &self.sqrt_s
    }

    /// `S^{-1/2}`
    pub fn inv_sqrt_s(&self) -> &CMatrix<T> {
        &self.inv_sqrt_s
    }

    /// Coefficients of `|l_k>` over `{|c_j>}`.
    pub fn basis_vector(&self, k: usize) -> CVector<T> {
        self.inv_sqrt_s.column(k).into_owned()
    }

    /// Re-expresses a superposition state in the Löwdin basis.
    pub fn forward(&self, psi: &SuperpositionState<T>) -> Result<CoherentState<T>> {
        if !(Arc::ptr_eq(&self.gram, psi.gram()) || *self.gram == **psi.gram()) {
            return Err(Error::GramMismatch);
        }
        let bar = CoherentState::from_raw(&self.sqrt_s * psi.coefficients());
        let floor = self.tol.normalization;
        if effective_support(bar.coefficients(), floor) <= 1
            && effective_support(psi.coefficients(), floor) > 1
        {
            warn!("forward map produced an incoherent state from a superposition state");
        }
        Ok(bar)
    }

    /// Re-expresses a Löwdin-basis state over the nonorthogonal basis.
    pub fn backward(&self, bar: &CoherentState<T>) -> Result<SuperpositionState<T>> {
        if bar.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: bar.dim(),
            });
        }
        let phi = &self.inv_sqrt_s * bar.coefficients();
        SuperpositionState::new(phi, self.gram.clone(), &self.tol)
    }

    /// Total squared displacement `Σ_i ‖c_i - l_i‖²` of the Löwdin basis.
    pub fn displacement(&self) -> T {
        orthonormalization_distance(&self.gram, &self.inv_sqrt_s)
    }
}

fn effective_support<T: Real>(v: &CVector<T>, floor: T) -> usize {
    v.iter().filter(|&&z| abs2(z) > floor).count()
}

/// `Σ_i ‖c_i - v_i‖²` for vectors `|v_i> = Σ_j |c_j> m_{ji}`, evaluated from
/// the Gram matrix alone:
/// `Σ_i [S_ii + (m† S m)_ii - 2 Re (S m)_ii]`.
pub fn orthonormalization_distance<T: Real>(gram: &GramMatrix<T>, m: &CMatrix<T>) -> T {
    let s = gram.entries();
    let sm = s * m;
    let msm = m.adjoint() * &sm;
    let two: T = lit(2.0);
    (0..gram.dim()).fold(T::zero(), |acc, i| {
        acc + s[(i, i)].re + msm[(i, i)].re - two * sm[(i, i)].re
    })
}

/// Closed-form entries of `S^{-1/2}` for a uniform overlap: `μ` on the
/// diagonal and `κ` off it. For `d = 2`, `α = μ` and `β = κ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniformClosedForm<T> {
    pub d: usize,
    pub s: T,
    pub mu: T,
    pub kappa: T,
    pub alpha: Option<T>,
    pub beta: Option<T>,
}

pub fn uniform_mu_kappa<T: Real>(d: usize, s: T) -> Result<UniformClosedForm<T>> {
    let u = UniformOverlap::new(d, s)?;
    let dt: T = lit(d as f64);
    let low = T::one() - s;
    let high = T::one() + (dt - T::one()) * s;
    let inv_low = T::one() / low.sqrt();
    let inv_high = T::one() / high.sqrt();
    let mu = (inv_high + (dt - T::one()) * inv_low) / dt;
    let kappa = (inv_high - inv_low) / dt;
    let (alpha, beta) = if d == 2 {
        let half: T = lit(0.5);
        (Some(half * (inv_high + inv_low)), Some(half * (inv_high - inv_low)))
    } else {
        (None, None)
    };
    Ok(UniformClosedForm {
        d: u.dim(),
        s,
        mu,
        kappa,
        alpha,
        beta,
    })
}

impl<T: Real> UniformClosedForm<T> {
    /// `√(λ_{d-1} λ_0)`
    fn eigen_scale(&self) -> T {
        let dm1: T = lit(self.d as f64 - 1.0);
        ((T::one() - self.s) * (T::one() + dm1 * self.s)).sqrt()
    }

    /// Löwdin amplitudes
    /// `g_i = √(λ_{d-1} λ_0) [(μ + (d-2)κ) x_i - κ Σ_{j≠i} x_j]`.
    pub fn forward_coefficients(&self, x: &CVector<T>) -> CVector<T> {
        let dm2: T = lit(self.d as f64 - 2.0);
        let diag = creal(self.eigen_scale() * (self.mu + dm2 * self.kappa));
        let off = creal(self.eigen_scale() * self.kappa);
        let total = x.sum();
        x.map(|xi| diag * xi - off * (total - xi))
    }

    /// `φ_i = μ g_i + κ Σ_{j≠i} g_j`.
    pub fn backward_coefficients(&self, g: &CVector<T>) -> CVector<T> {
        let total = g.sum();
        let mu = creal(self.mu);
        let kappa = creal(self.kappa);
        g.map(|gi| mu * gi + kappa * (total - gi))
    }

    /// Dense `S^{-1/2}` assembled from `μ` and `κ`.
    pub fn inv_sqrt_matrix(&self) -> CMatrix<T> {
        CMatrix::from_fn(self.d, self.d, |i, j| {
            creal(if i == j { self.mu } else { self.kappa })
        })
    }
}

/// Löwdin amplitudes of `x` via the uniform-overlap closed form.
///
/// `x` must be expressed against the uniform overlap `(d, s)`.
pub fn uniform_g<T: Real>(x: &SuperpositionState<T>, d: usize, s: T) -> Result<CoherentState<T>> {
    let form = uniform_mu_kappa(d, s)?;
    let tol = Tolerances::<T>::default();
    match x.gram().as_uniform(tol.hermitian) {
        Some(u) if u.dim() == d && (u.overlap() - s).abs() <= tol.hermitian => {}
        _ => return Err(Error::GramMismatch),
    }
    Ok(CoherentState::from_raw(
        form.forward_coefficients(x.coefficients()),
    ))
}
