//! JSON file formats for Gram matrices and states.
//!
//! Gram matrix:
//! `{"kind":"matrix","re":[[...]],"im":[[...]]}` or `{"kind":"uniform","d":3,"s":0.2}`.
//! State:
//! `{"basis":"nonorthogonal"|"lowdin","coefficients":{"re":[...],"im":[...]},"overlap":<gram>}`.
//! `im` is optional everywhere and defaults to zero; `overlap` is required for
//! the nonorthogonal basis and optional for the Löwdin basis.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gram::{GramMatrix, UniformOverlap};
use crate::scalar::{c, CMatrix, CVector, Tolerances};
use crate::states::{CoherentState, SuperpositionState};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum GramSpec {
    Matrix {
        re: Vec<Vec<f64>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        im: Option<Vec<Vec<f64>>>,
    },
    Uniform {
        d: usize,
        s: f64,
    },
}

impl GramSpec {
    /// Dense matrix described by this spec, before validation.
    pub fn raw_matrix(&self) -> Result<CMatrix<f64>> {
        match self {
            GramSpec::Uniform { d, s } => {
                if *d < 2 {
                    return Err(Error::InvalidDimension(*d));
                }
                Ok(UniformOverlap::matrix(*d, *s))
            }
            GramSpec::Matrix { re, im } => {
                let rows = re.len();
                for row in re {
                    if row.len() != rows {
                        return Err(Error::NotSquare {
                            rows,
                            cols: row.len(),
                        });
                    }
                }
                if let Some(im) = im {
                    if im.len() != rows || im.iter().any(|r| r.len() != rows) {
                        return Err(Error::InvalidInput(
                            "imaginary part has a different shape than the real part".into(),
                        ));
                    }
                }
                Ok(CMatrix::from_fn(rows, rows, |i, j| {
                    c(re[i][j], im.as_ref().map_or(0.0, |m| m[i][j]))
                }))
            }
        }
    }

    pub fn to_gram(&self, tol: &Tolerances<f64>) -> Result<GramMatrix<f64>> {
        GramMatrix::validate_with(self.raw_matrix()?, tol)
    }

    /// Full-precision `matrix` form of a validated Gram matrix.
    pub fn from_gram(gram: &GramMatrix<f64>) -> Self {
        let e = gram.entries();
        let d = gram.dim();
        let re = (0..d).map(|i| (0..d).map(|j| e[(i, j)].re).collect()).collect();
        let im: Vec<Vec<f64>> = (0..d).map(|i| (0..d).map(|j| e[(i, j)].im).collect()).collect();
        let im = if im.iter().flatten().all(|&x| x == 0.0) {
            None
        } else {
            Some(im)
        };
        GramSpec::Matrix { re, im }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComplexVec {
    pub re: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub im: Option<Vec<f64>>,
}

impl ComplexVec {
    pub fn to_vector(&self) -> Result<CVector<f64>> {
        if let Some(im) = &self.im {
            if im.len() != self.re.len() {
                return Err(Error::DimensionMismatch {
                    expected: self.re.len(),
                    found: im.len(),
                });
            }
        }
        Ok(CVector::from_iterator(
            self.re.len(),
            (0..self.re.len()).map(|i| c(self.re[i], self.im.as_ref().map_or(0.0, |m| m[i]))),
        ))
    }

    pub fn from_vector(v: &CVector<f64>) -> Self {
        let re = v.iter().map(|z| z.re).collect();
        let im: Vec<f64> = v.iter().map(|z| z.im).collect();
        let im = if im.iter().all(|&x| x == 0.0) { None } else { Some(im) };
        ComplexVec { re, im }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BasisTag {
    Nonorthogonal,
    Lowdin,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateSpec {
    pub basis: BasisTag,
    pub coefficients: ComplexVec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub overlap: Option<GramSpec>,
}

/// A state file after validation. Coefficients are normalized on load.
#[derive(Debug, Clone)]
pub enum LoadedState {
    Superposition(SuperpositionState<f64>),
    Coherent {
        state: CoherentState<f64>,
        overlap: Option<Arc<GramMatrix<f64>>>,
    },
}

impl StateSpec {
    pub fn load(&self, tol: &Tolerances<f64>) -> Result<LoadedState> {
        let coefficients = self.coefficients.to_vector()?;
        let overlap = match &self.overlap {
            Some(g) => Some(Arc::new(g.to_gram(tol)?)),
            None => None,
        };
        match self.basis {
            BasisTag::Nonorthogonal => {
                let gram = overlap.ok_or_else(|| {
                    Error::InvalidInput("\"overlap\" is required for basis \"nonorthogonal\"".into())
                })?;
                Ok(LoadedState::Superposition(SuperpositionState::make(
                    coefficients,
                    gram,
                )?))
            }
            BasisTag::Lowdin => {
                if let Some(g) = &overlap {
                    if g.dim() != coefficients.len() {
                        return Err(Error::DimensionMismatch {
                            expected: g.dim(),
                            found: coefficients.len(),
                        });
                    }
                }
                Ok(LoadedState::Coherent {
                    state: CoherentState::normalized(coefficients)?,
                    overlap,
                })
            }
        }
    }

    pub fn from_superposition(state: &SuperpositionState<f64>) -> Self {
        StateSpec {
            basis: BasisTag::Nonorthogonal,
            coefficients: ComplexVec::from_vector(state.coefficients()),
            overlap: Some(GramSpec::from_gram(state.gram())),
        }
    }

    pub fn from_coherent(state: &CoherentState<f64>, overlap: Option<&GramMatrix<f64>>) -> Self {
        StateSpec {
            basis: BasisTag::Lowdin,
            coefficients: ComplexVec::from_vector(state.coefficients()),
            overlap: overlap.map(GramSpec::from_gram),
        }
    }
}
