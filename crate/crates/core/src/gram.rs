//! Overlap (Gram) matrices of a nonorthogonal basis and their matrix functions.
//!
//! A [`GramMatrix`] holds `S_ij = <c_i|c_j>` for a normalized, linearly
//! independent basis `{|c_i>}`. It is validated once on construction and caches
//! its eigensystem, so `S^{1/2}` and `S^{-1/2}` are obtained as `U f(Λ) U†`
//! without re-diagonalizing. Degenerate eigenspaces are harmless: only matrix
//! functions of `S` are ever formed, never individual eigenvectors.

use nalgebra::{DVector, SymmetricEigen};

use crate::error::{Error, Result};
use crate::scalar::{abs, creal, lit, max_abs, max_abs_diff, to_f64, CMatrix, Real, Tolerances};

/// Eigen-decomposition `S = U Λ U†` of a Hermitian matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenSystem<T: Real> {
    /// Ascending.
    pub eigenvalues: DVector<T>,
    /// Unitary; column `k` belongs to `eigenvalues[k]`.
    pub eigenvectors: CMatrix<T>,
}

impl<T: Real> EigenSystem<T> {
    /// Diagonalizes a Hermitian matrix. Only the lower triangle is read.
    pub fn hermitian(m: &CMatrix<T>, tol: &Tolerances<T>) -> Result<Self> {
        let (rows, cols) = m.shape();
        if rows != cols {
            return Err(Error::NotSquare { rows, cols });
        }
        if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidInput("matrix has non-finite entries".into()));
        }
        let eig = SymmetricEigen::try_new(m.clone(), T::default_epsilon(), tol.eigen_max_iter)
            .ok_or_else(|| {
                Error::ConvergenceFailure(format!(
                    "Hermitian eigensolver did not converge within {} iterations",
                    tol.eigen_max_iter
                ))
            })?;
        let mut order: Vec<usize> = (0..rows).collect();
        order.sort_by(|&a, &b| {
            eig.eigenvalues[a]
                .partial_cmp(&eig.eigenvalues[b])
                .expect("finite eigenvalues")
        });
        let eigenvalues = DVector::from_iterator(rows, order.iter().map(|&k| eig.eigenvalues[k]));
        let eigenvectors = CMatrix::from_fn(rows, rows, |i, j| eig.eigenvectors[(i, order[j])]);
        let sys = EigenSystem {
            eigenvalues,
            eigenvectors,
        };
        let scale = T::one().max(max_abs(m));
        let residual = sys.reconstruction_residual(m);
        if !(residual <= tol.eigen_residual * scale) {
            return Err(Error::ConvergenceFailure(format!(
                "reconstruction residual {:e} exceeds tolerance",
                to_f64(residual)
            )));
        }
        Ok(sys)
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn min_eigenvalue(&self) -> T {
        self.eigenvalues[0]
    }

    /// `U diag(f(λ)) U†`.
    pub fn map(&self, f: impl Fn(T) -> T) -> CMatrix<T> {
        let d = self.dim();
        let u = &self.eigenvectors;
        let mut scaled = u.clone();
        for k in 0..d {
            let fk = creal(f(self.eigenvalues[k]));
            scaled.column_mut(k).iter_mut().for_each(|z| *z *= fk);
        }
        scaled * u.adjoint()
    }

    /// `‖m - U Λ U†‖_max`.
    pub fn reconstruction_residual(&self, m: &CMatrix<T>) -> T {
        max_abs_diff(m, &self.map(|x| x))
    }
}

/// Validated Hermitian positive-definite overlap matrix with unit diagonal.
#[derive(Debug, Clone)]
pub struct GramMatrix<T: Real> {
    entries: CMatrix<T>,
    eigen: EigenSystem<T>,
}

impl<T: Real> PartialEq for GramMatrix<T> {
    fn eq(&self, other: &Self) -> bool {
        self.entries == other.entries
    }
}

impl<T: Real> GramMatrix<T> {
    /// Validates with default tolerances.
    pub fn new(raw: CMatrix<T>) -> Result<Self> {
        Self::validate_with(raw, &Tolerances::default())
    }

    /// Validates with default tolerances and the given positive-definiteness floor.
    pub fn validate(raw: CMatrix<T>, eps_pd: T) -> Result<Self> {
        let tol = Tolerances {
            eps_pd,
            ..Tolerances::default()
        };
        Self::validate_with(raw, &tol)
    }

    /// Checks the Hermitian, unit-diagonal and positive-definite invariants.
    ///
    /// Asymmetry up to `tol.hermitian` is repaired by `S <- (S + S†)/2`;
    /// anything larger is rejected.
    pub fn validate_with(raw: CMatrix<T>, tol: &Tolerances<T>) -> Result<Self> {
        let (rows, cols) = raw.shape();
        if rows != cols {
            return Err(Error::NotSquare { rows, cols });
        }
        if rows < 2 {
            return Err(Error::InvalidDimension(rows));
        }
        if raw.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidInput("Gram matrix has non-finite entries".into()));
        }
        let adjoint = raw.adjoint();
        let asymmetry = max_abs_diff(&raw, &adjoint);
        if asymmetry > tol.hermitian {
            return Err(Error::NotHermitian {
                asymmetry: to_f64(asymmetry),
            });
        }
        let entries = if asymmetry > T::zero() {
            (&raw + &adjoint).map(|z| z * creal(lit(0.5)))
        } else {
            raw
        };
        for i in 0..rows {
            if abs(entries[(i, i)] - creal(T::one())) > tol.unit_diagonal {
                return Err(Error::NotUnitDiagonal {
                    index: i,
                    value: to_f64(entries[(i, i)].re),
                });
            }
        }
        let eigen = EigenSystem::hermitian(&entries, tol)?;
        let min = eigen.min_eigenvalue();
        if !(min > tol.eps_pd) {
            return Err(Error::NotPositiveDefinite {
                min_eigenvalue: to_f64(min),
                eps_pd: to_f64(tol.eps_pd),
            });
        }
        Ok(GramMatrix { entries, eigen })
    }

    /// Gram matrix of an orthonormal basis.
    pub fn identity(d: usize) -> Result<Self> {
        Self::new(CMatrix::identity(d, d))
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &CMatrix<T> {
        &self.entries
    }

    pub fn spectral_decompose(&self) -> &EigenSystem<T> {
        &self.eigen
    }

    /// `S^{1/2} = U Λ^{1/2} U†`, Hermitian positive definite.
    pub fn matrix_sqrt(&self) -> CMatrix<T> {
        self.eigen.map(|x| x.sqrt())
    }

    /// `S^{-1/2} = U Λ^{-1/2} U†`.
    pub fn matrix_inv_sqrt(&self) -> CMatrix<T> {
        self.eigen.map(|x| T::one() / x.sqrt())
    }

    /// Recognizes a real uniform overlap (every off-diagonal entry equal to the same real `s`).
    pub fn as_uniform(&self, tol: T) -> Option<UniformOverlap<T>> {
        let d = self.dim();
        let s = self.entries[(0, 1)].re;
        for i in 0..d {
            for j in 0..d {
                if i != j && abs(self.entries[(i, j)] - creal(s)) > tol {
                    return None;
                }
            }
        }
        UniformOverlap::new(d, s).ok()
    }
}

/// Basis in which every pair of distinct vectors has the same real overlap `s`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniformOverlap<T> {
    d: usize,
    s: T,
}

impl<T: Real> UniformOverlap<T> {
    /// Requires `d >= 2` and `1/(1-d) < s < 1`.
    pub fn new(d: usize, s: T) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidDimension(d));
        }
        let (lower, upper) = Self::open_range(d);
        if !(s > lower && s < upper) {
            return Err(Error::OverlapOutOfRange {
                d,
                s: to_f64(s),
                lower: to_f64(lower),
                upper: to_f64(upper),
            });
        }
        Ok(UniformOverlap { d, s })
    }

    /// Open interval of overlaps for which the Gram matrix is positive definite.
    pub fn open_range(d: usize) -> (T, T) {
        let dm1: T = lit((d as f64) - 1.0);
        (-T::one() / dm1, T::one())
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn overlap(&self) -> T {
        self.s
    }

    /// Dense matrix with 1 on the diagonal and `s` elsewhere.
    pub fn to_matrix(&self) -> CMatrix<T> {
        Self::matrix(self.d, self.s)
    }

    /// Same as [`to_matrix`](Self::to_matrix) without the range check.
    pub fn matrix(d: usize, s: T) -> CMatrix<T> {
        CMatrix::from_fn(d, d, |i, j| {
            if i == j {
                creal(T::one())
            } else {
                creal(s)
            }
        })
    }

    pub fn to_gram(&self) -> Result<GramMatrix<T>> {
        GramMatrix::new(self.to_matrix())
    }

    /// Closed-form spectrum, ascending when `s > 0`: `1-s` with multiplicity
    /// `d-1`, then `1+(d-1)s`.
    pub fn eigenvalues(&self) -> Vec<T> {
        let dm1: T = lit((self.d as f64) - 1.0);
        let mut ev = vec![T::one() - self.s; self.d - 1];
        ev.push(T::one() + dm1 * self.s);
        ev
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::c;
    use approx::assert_abs_diff_eq;

    fn uniform(d: usize, s: f64) -> GramMatrix<f64> {
        UniformOverlap::new(d, s).unwrap().to_gram().unwrap()
    }

    #[test]
    fn identity_is_valid() {
        let g = GramMatrix::<f64>::identity(3).unwrap();
        assert_eq!(g.dim(), 3);
        for &l in g.spectral_decompose().eigenvalues.iter() {
            assert_abs_diff_eq!(l, 1.0, epsilon = 1e-14);
        }
        assert!(max_abs_diff(&g.matrix_sqrt(), &CMatrix::identity(3, 3)) < 1e-14);
        assert!(max_abs_diff(&g.matrix_inv_sqrt(), &CMatrix::identity(3, 3)) < 1e-14);
    }

    #[test]
    fn two_dim_half_overlap_spectrum() {
        let g = uniform(2, 0.5);
        let ev = &g.spectral_decompose().eigenvalues;
        assert_abs_diff_eq!(ev[0], 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(ev[1], 1.5, epsilon = 1e-12);
    }

    #[test]
    fn four_dim_spectrum_matches_closed_form() {
        let u = UniformOverlap::new(4, 0.2).unwrap();
        let mut closed = u.eigenvalues();
        closed.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_eq!(closed.len(), 4);
        for (k, &want) in [0.8, 0.8, 0.8, 1.6].iter().enumerate() {
            assert_abs_diff_eq!(closed[k], want, epsilon = 1e-15);
        }
        let g = u.to_gram().unwrap();
        let ev = &g.spectral_decompose().eigenvalues;
        for k in 0..4 {
            assert_abs_diff_eq!(ev[k], closed[k], epsilon = 1e-10);
        }
    }

    #[test]
    fn boundary_overlap_is_not_positive_definite() {
        let raw = UniformOverlap::<f64>::matrix(3, -0.5);
        match GramMatrix::validate(raw, 1e-9) {
            Err(Error::NotPositiveDefinite { min_eigenvalue, .. }) => {
                assert!(min_eigenvalue.abs() < 1e-12)
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            UniformOverlap::new(3, -0.5),
            Err(Error::OverlapOutOfRange { .. })
        ));
    }

    #[test]
    fn rejects_asymmetric_and_bad_diagonal() {
        let mut raw = uniform(2, 0.3).entries().clone();
        raw[(0, 1)] = c(0.3, 1e-6);
        assert!(matches!(GramMatrix::new(raw), Err(Error::NotHermitian { .. })));

        let mut raw = uniform(2, 0.3).entries().clone();
        raw[(1, 1)] = creal(1.01);
        assert!(matches!(
            GramMatrix::new(raw),
            Err(Error::NotUnitDiagonal { index: 1, .. })
        ));

        let raw = CMatrix::<f64>::identity(2, 3);
        assert!(matches!(GramMatrix::new(raw), Err(Error::NotSquare { .. })));
        assert!(matches!(
            GramMatrix::<f64>::identity(1),
            Err(Error::InvalidDimension(1))
        ));
    }

    #[test]
    fn tiny_asymmetry_is_symmetrized() {
        let mut raw = uniform(2, 0.3).entries().clone();
        raw[(0, 1)] = c(0.3, 5e-13);
        let g = GramMatrix::new(raw).unwrap();
        let e = g.entries();
        assert_eq!(e[(0, 1)], e[(1, 0)].conj());
    }

    #[test]
    fn sqrt_two_dim_closed_form() {
        let g = uniform(2, 0.5);
        let a = (1.5f64.sqrt() + 0.5f64.sqrt()) / 2.0;
        let b = (1.5f64.sqrt() - 0.5f64.sqrt()) / 2.0;
        let want = CMatrix::from_row_slice(2, 2, &[creal(a), creal(b), creal(b), creal(a)]);
        let m = g.matrix_sqrt();
        assert!(max_abs_diff(&m, &want) < 1e-12);
        assert!(max_abs_diff(&(&m * &m), g.entries()) < 1e-10);
    }

    #[test]
    fn inv_sqrt_two_dim_closed_form() {
        let g = uniform(2, 0.5);
        let alpha = (1.0 / 1.5f64.sqrt() + 1.0 / 0.5f64.sqrt()) / 2.0;
        let beta = (1.0 / 1.5f64.sqrt() - 1.0 / 0.5f64.sqrt()) / 2.0;
        assert_abs_diff_eq!(alpha, 1.115355, epsilon = 1e-6);
        assert_abs_diff_eq!(beta, -0.298858, epsilon = 1e-6);
        let want = CMatrix::from_row_slice(
            2,
            2,
            &[creal(alpha), creal(beta), creal(beta), creal(alpha)],
        );
        let m = g.matrix_inv_sqrt();
        assert!(max_abs_diff(&m, &want) < 1e-12);
        let inv = g.matrix_sqrt().try_inverse().unwrap();
        assert!(max_abs_diff(&m, &inv) < 1e-10);
    }

    #[test]
    fn three_dim_sqrt_squares_back() {
        let g = uniform(3, 0.3);
        let m = g.matrix_sqrt();
        assert!(max_abs_diff(&(&m * &m), g.entries()) < 1e-10);
        let w = g.matrix_inv_sqrt();
        let id = CMatrix::identity(3, 3);
        assert!(max_abs_diff(&(&w * g.entries() * &w), &id) < 1e-10);
        assert!(max_abs_diff(&(&m * &w), &id) < 1e-10);
    }

    #[test]
    fn complex_gram_matrix_functions() {
        let raw = CMatrix::from_row_slice(
            3,
            3,
            &[
                creal(1.0),
                c(0.2, 0.3),
                c(-0.1, 0.05),
                c(0.2, -0.3),
                creal(1.0),
                c(0.4, -0.2),
                c(-0.1, -0.05),
                c(0.4, 0.2),
                creal(1.0),
            ],
        );
        let g = GramMatrix::new(raw).unwrap();
        let s = g.entries();
        let m = g.matrix_sqrt();
        let w = g.matrix_inv_sqrt();
        assert!(max_abs_diff(&m, &m.adjoint()) < 1e-12);
        assert!(max_abs_diff(&w, &w.adjoint()) < 1e-12);
        assert!(max_abs_diff(&(&m * &m), s) < 1e-10);
        assert!(max_abs_diff(&(&w * s * &w), &CMatrix::identity(3, 3)) < 1e-10);
        assert!(max_abs_diff(&(&m * s), &(s * &m)) < 1e-10);
        assert!(max_abs_diff(&(&w * s), &(s * &w)) < 1e-10);
        assert!(g.spectral_decompose().reconstruction_residual(s) < 1e-10);
    }

    #[test]
    fn recognizes_uniform() {
        let g = uniform(4, -0.1);
        let u = g.as_uniform(1e-12).unwrap();
        assert_eq!(u.dim(), 4);
        assert_eq!(u.overlap(), -0.1);
        let mut raw = g.entries().clone();
        raw[(0, 2)] = creal(0.0);
        raw[(2, 0)] = creal(0.0);
        assert!(GramMatrix::new(raw).unwrap().as_uniform(1e-12).is_none());
    }

    #[test]
    fn works_in_single_precision() {
        let g = UniformOverlap::<f32>::new(3, 0.3).unwrap().to_gram().unwrap();
        let w = g.matrix_inv_sqrt();
        let id = CMatrix::<f32>::identity(3, 3);
        assert!(max_abs_diff(&(&w * g.entries() * &w), &id) < 1e-5);
    }
}
