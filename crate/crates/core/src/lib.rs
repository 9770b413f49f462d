//! Löwdin symmetric orthogonalization as a bridge between the resource
//! theories of superposition (nonorthogonal basis) and coherence (orthonormal
//! basis).
//!
//! * [`gram`]: validated overlap matrices, `S^{1/2}` and `S^{-1/2}`.
//! * [`states`]: pure states over either basis and density coefficients.
//! * [`lso`]: forward/backward maps and the uniform-overlap closed forms.
//! * [`transform`]: majorization, conversion and distillation probabilities.
//! * [`golden`]: maximally coherent and golden states.
//! * [`measures`]: l1 measures, relative entropy of coherence, qubit sweeps.
//! * [`schema`]: JSON file formats.
//!
//! Everything is generic over the real scalar ([`Real`], implemented for `f32`
//! and `f64`). The `*64` and `*32` aliases below fix the precision.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod format;
pub mod golden;
pub mod gram;
pub mod lso;
pub mod measures;
pub mod scalar;
pub mod schema;
pub mod states;
pub mod transform;

pub use error::{Error, Result};
pub use golden::{golden_from_coherent, golden_minus_2d, golden_plus, maximally_coherent, GoldenSign, GoldenSpec};
pub use gram::{EigenSystem, GramMatrix, UniformOverlap};
pub use lso::{orthonormalization_distance, uniform_g, uniform_mu_kappa, LowdinMap, UniformClosedForm};
pub use measures::{
    l1_measure, l1_pair_qubit, rel_entropy_coherence, sweep_l1, zero_coherence_overlap, SweepRow,
};
pub use scalar::{CMatrix, CVector, Real, Tolerances};
pub use states::{s_inner, CoherentState, DensityBasis, DensityCoefficients, SuperpositionState};
pub use transform::{
    distill_coherence_prob, is_majorized_by, max_coherence_transform_prob, superposition_distill,
    superposition_transform, TransformReport,
};

pub type GramMatrix64 = GramMatrix<f64>;
pub type UniformOverlap64 = UniformOverlap<f64>;
pub type EigenSystem64 = EigenSystem<f64>;
pub type LowdinMap64 = LowdinMap<f64>;
pub type SuperpositionState64 = SuperpositionState<f64>;
pub type CoherentState64 = CoherentState<f64>;
pub type DensityCoefficients64 = DensityCoefficients<f64>;
pub type TransformReport64 = TransformReport<f64>;
pub type Tolerances64 = Tolerances<f64>;

pub type GramMatrix32 = GramMatrix<f32>;
pub type UniformOverlap32 = UniformOverlap<f32>;
pub type EigenSystem32 = EigenSystem<f32>;
pub type LowdinMap32 = LowdinMap<f32>;
pub type SuperpositionState32 = SuperpositionState<f32>;
pub type CoherentState32 = CoherentState<f32>;
pub type DensityCoefficients32 = DensityCoefficients<f32>;
pub type TransformReport32 = TransformReport<f32>;
pub type Tolerances32 = Tolerances<f32>;
