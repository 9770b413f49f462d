//! Majorization and optimal single-copy conversion probabilities.
//!
//! A pure coherent state with sorted probabilities `p` converts into one with
//! sorted probabilities `q` under incoherent operations with maximal
//! probability `min_{j ≥ 1} min{1, T_j(p) / T_j(q)}`, where `T_j` is the tail
//! sum `Σ_{i ≥ j}`. Superposition states are handled by mapping both into the
//! Löwdin basis, converting there, and mapping the target back.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::golden::maximally_coherent;
use crate::lso::LowdinMap;
use crate::scalar::{lit, to_f64, Real, Tolerances};
use crate::states::{CoherentState, SuperpositionState};

/// Outcome of a single-copy conversion.
#[derive(Debug, Clone)]
pub struct TransformReport<T: Real> {
    pub probability: T,
    pub deterministic: bool,
    pub source_bar: CoherentState<T>,
    pub target_bar: CoherentState<T>,
    /// Tail index `j*` attaining the minimum; `None` when no tail ratio binds.
    pub binding_index: Option<usize>,
    /// Target mapped back to the nonorthogonal basis, for superposition pipelines.
    pub target_state: Option<SuperpositionState<T>>,
}

/// `tails[j] = Σ_{i ≥ j} p_i`, accumulated from the last entry.
pub fn tail_sums<T: Real>(p: &[T]) -> Vec<T> {
    let mut tails = vec![T::zero(); p.len()];
    let mut acc = T::zero();
    for i in (0..p.len()).rev() {
        acc += p[i];
        tails[i] = acc;
    }
    tails
}

fn padded<T: Real>(mut p: Vec<T>, len: usize) -> Vec<T> {
    p.resize(len, T::zero());
    p
}

fn check_distribution<T: Real>(p: &[T], tol: &Tolerances<T>) -> Result<()> {
    if p.windows(2).any(|w| w[0] < w[1]) {
        return Err(Error::InvalidInput("probabilities are not sorted non-increasing".into()));
    }
    let total = p.iter().fold(T::zero(), |a, &x| a + x);
    if !((total - T::one()).abs() <= tol.normalization) {
        return Err(Error::InvalidInput(format!(
            "probabilities sum to {}",
            to_f64(total)
        )));
    }
    Ok(())
}

/// Whether `p` is majorized by `q` (`p ≺ q`): every tail sum of `p` is at
/// least the matching tail sum of `q`, up to `tol.majorization`. This is the
/// condition for `p → q` to be deterministic.
///
/// Both inputs must be sorted non-increasing and sum to one; the shorter one
/// is zero-padded.
pub fn is_majorized_by<T: Real>(p: &[T], q: &[T], tol: &Tolerances<T>) -> Result<bool> {
    check_distribution(p, tol)?;
    check_distribution(q, tol)?;
    let n = p.len().max(q.len());
    let tp = tail_sums(&padded(p.to_vec(), n));
    let tq = tail_sums(&padded(q.to_vec(), n));
    Ok(tp.iter().zip(&tq).all(|(&a, &b)| a >= b - tol.majorization))
}

/// Values within `tol.clamp` of the unit interval are pulled into it.
fn clamp_probability<T: Real>(p: T, tol: &Tolerances<T>) -> Result<T> {
    if !(p >= -tol.clamp && p <= T::one() + tol.clamp) {
        return Err(Error::Internal(format!(
            "probability {} outside [0, 1]",
            to_f64(p)
        )));
    }
    if p <= tol.clamp {
        Ok(p.max(T::zero()))
    } else if p >= T::one() - tol.clamp {
        Ok(T::one())
    } else {
        Ok(p)
    }
}

/// Maximal probability of `src → tgt` under incoherent operations.
///
/// A tail ratio whose denominator is zero never binds.
pub fn max_coherence_transform_prob<T: Real>(
    src: &CoherentState<T>,
    tgt: &CoherentState<T>,
) -> Result<TransformReport<T>> {
    max_coherence_transform_prob_with(src, tgt, &Tolerances::default())
}

pub fn max_coherence_transform_prob_with<T: Real>(
    src: &CoherentState<T>,
    tgt: &CoherentState<T>,
    tol: &Tolerances<T>,
) -> Result<TransformReport<T>> {
    let n = src.dim().max(tgt.dim());
    let tp = tail_sums(&padded(src.sorted_probs(), n));
    let tq = tail_sums(&padded(tgt.sorted_probs(), n));
    let mut probability = T::one();
    let mut binding_index = None;
    for j in 1..n {
        if tq[j] > T::zero() {
            let ratio = tp[j] / tq[j];
            if ratio < probability {
                probability = ratio;
                binding_index = Some(j);
            }
        }
    }
    let probability = clamp_probability(probability, tol)?;
    if probability == T::one() {
        binding_index = None;
    }
    Ok(TransformReport {
        probability,
        deterministic: probability == T::one(),
        source_bar: src.clone(),
        target_bar: tgt.clone(),
        binding_index,
        target_state: None,
    })
}

/// Three-stage conversion `ψ → ψ̄ → φ̄ → φ` between superposition states over
/// the same basis.
pub fn superposition_transform<T: Real>(
    map: &LowdinMap<T>,
    psi: &SuperpositionState<T>,
    phi: &SuperpositionState<T>,
) -> Result<TransformReport<T>> {
    if !psi.same_gram(phi) {
        return Err(Error::GramMismatch);
    }
    let source_bar = map.forward(psi)?;
    let target_bar = map.forward(phi)?;
    let mut report = max_coherence_transform_prob(&source_bar, &target_bar)?;
    report.target_state = Some(map.backward(&report.target_bar)?);
    Ok(report)
}

/// Single-copy probability of reaching the maximally coherent state:
/// `d · min_i |a_i|²`.
pub fn distill_coherence_prob<T: Real>(bar: &CoherentState<T>) -> T {
    let min = bar
        .probabilities()
        .into_iter()
        .fold(T::one(), |acc, p| acc.min(p));
    let d: T = lit(bar.dim() as f64);
    let p = d * min;
    clamp_probability(p, &Tolerances::default()).unwrap_or_else(|_| p.max(T::zero()).min(T::one()))
}

/// Distills the golden state `Ψ_d⁺` from `psi` through the Löwdin basis.
///
/// Requires a real uniform overlap with `s ≤ 0`.
pub fn superposition_distill<T: Real>(
    map: &LowdinMap<T>,
    psi: &SuperpositionState<T>,
) -> Result<TransformReport<T>> {
    let tol = Tolerances::<T>::default();
    let uniform = map
        .gram()
        .as_uniform(tol.hermitian)
        .ok_or(Error::NotUniformOverlap)?;
    if uniform.overlap() > T::zero() {
        return Err(Error::OverlapOutOfGoldenRange {
            d: uniform.dim(),
            s: to_f64(uniform.overlap()),
        });
    }
    if !Arc::ptr_eq(map.gram(), psi.gram()) && **map.gram() != **psi.gram() {
        return Err(Error::GramMismatch);
    }
    let d = map.dim();
    let source_bar = map.forward(psi)?;
    let probability = distill_coherence_prob(&source_bar);
    let target_bar = maximally_coherent(d, None)?;
    let target_state = map.backward(&target_bar)?;
    let deterministic = probability == T::one();
    Ok(TransformReport {
        probability,
        deterministic,
        source_bar,
        target_bar,
        binding_index: if deterministic { None } else { Some(d - 1) },
        target_state: Some(target_state),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gram::UniformOverlap;
    use crate::golden::golden_plus;
    use crate::scalar::{max_abs_diff_vec, phase_aligned_diff, real_vector};
    use approx::assert_abs_diff_eq;

    fn coherent(p: &[f64]) -> CoherentState<f64> {
        let amps: Vec<f64> = p.iter().map(|x| x.sqrt()).collect();
        CoherentState::new(real_vector(&amps), &Tolerances::default()).unwrap()
    }

    fn uniform_map(d: usize, s: f64) -> LowdinMap<f64> {
        LowdinMap::build(Arc::new(UniformOverlap::new(d, s).unwrap().to_gram().unwrap())).unwrap()
    }

    #[test]
    fn majorization_examples() {
        let tol = Tolerances::default();
        let p = [0.766469, 0.233531];
        let q = [0.809295, 0.190705];
        assert!(is_majorized_by(&p, &p, &tol).unwrap());
        assert!(is_majorized_by(&p, &q, &tol).unwrap());
        assert!(!is_majorized_by(&q, &p, &tol).unwrap());
        let flat = [0.25; 4];
        assert!(is_majorized_by(&flat, &[0.4, 0.3, 0.2, 0.1], &tol).unwrap());
        assert!(is_majorized_by(&flat, &[1.0], &tol).unwrap());
        assert!(is_majorized_by(&[0.5, 0.5], &[0.7, 0.2, 0.1], &tol).is_ok());
        assert!(is_majorized_by(&[0.2, 0.8], &q, &tol).is_err());
        assert!(is_majorized_by(&[0.5, 0.4], &q, &tol).is_err());
    }

    #[test]
    fn deterministic_when_tails_dominate() {
        let r = max_coherence_transform_prob(&coherent(&[0.6, 0.4]), &coherent(&[0.7, 0.3])).unwrap();
        assert_eq!(r.probability, 1.0);
        assert!(r.deterministic);
        assert_eq!(r.binding_index, None);
    }

    #[test]
    fn worked_example_pair_is_deterministic() {
        let r = max_coherence_transform_prob(
            &coherent(&[0.766469, 0.233531]),
            &coherent(&[0.809295, 0.190705]),
        )
        .unwrap();
        assert_eq!(r.probability, 1.0);
        assert!(r.deterministic);
    }

    #[test]
    fn two_dim_probability() {
        let r = max_coherence_transform_prob(&coherent(&[0.9, 0.1]), &coherent(&[0.5, 0.5])).unwrap();
        // min{1, 0.1/0.5}
        assert_abs_diff_eq!(r.probability, 0.2, epsilon = 1e-14);
        assert!(!r.deterministic);
        assert_eq!(r.binding_index, Some(1));
        // Order of amplitudes does not matter.
        let r2 = max_coherence_transform_prob(&coherent(&[0.1, 0.9]), &coherent(&[0.5, 0.5])).unwrap();
        assert_eq!(r.probability, r2.probability);
    }

    #[test]
    fn zero_target_tail_is_non_binding() {
        let r = max_coherence_transform_prob(&coherent(&[0.5, 0.3, 0.2]), &coherent(&[0.6, 0.4, 0.0])).unwrap();
        assert_eq!(r.probability, 1.0);
        // Source with smaller support cannot gain support.
        let r = max_coherence_transform_prob(&coherent(&[0.5, 0.5, 0.0]), &coherent(&[0.4, 0.3, 0.3])).unwrap();
        assert_eq!(r.probability, 0.0);
        assert_eq!(r.binding_index, Some(2));
    }

    #[test]
    fn mismatched_dimensions_are_padded() {
        let r = max_coherence_transform_prob(&coherent(&[0.5, 0.5]), &coherent(&[0.8, 0.1, 0.1])).unwrap();
        // tails of (0.5,0.5,0) vs (0.8,0.1,0.1): j=1 → 0.5/0.2, j=2 → 0/0.1
        assert_eq!(r.probability, 0.0);
    }

    #[test]
    fn superposition_pipeline_worked_example() {
        let map = uniform_map(2, 0.5);
        let psi = SuperpositionState::make(real_vector(&[3.0, 1.0]), map.gram().clone()).unwrap();
        let phi = SuperpositionState::make(real_vector(&[4.0, 1.0]), map.gram().clone()).unwrap();
        let r = superposition_transform(&map, &psi, &phi).unwrap();
        assert_eq!(r.probability, 1.0);
        assert!(r.deterministic);
        let back = r.target_state.unwrap();
        assert!(phase_aligned_diff(phi.coefficients(), back.coefficients()) < 1e-10);

        let same = superposition_transform(&map, &psi, &psi).unwrap();
        assert_eq!(same.probability, 1.0);
        assert_eq!(same.binding_index, None);

        let other = SuperpositionState::make(real_vector(&[4.0, 1.0]), uniform_map(2, 0.4).gram().clone()).unwrap();
        assert!(matches!(
            superposition_transform(&map, &psi, &other),
            Err(Error::GramMismatch)
        ));
    }

    #[test]
    fn golden_source_reaches_anything() {
        let map = uniform_map(2, -0.3);
        let golden = golden_plus(2, -0.3).unwrap();
        let golden = SuperpositionState::make(golden.coefficients().clone(), map.gram().clone()).unwrap();
        for x in [[1.0, 0.0], [0.3, 0.9], [2.0, -1.0]] {
            let phi = SuperpositionState::make(real_vector(&x), map.gram().clone()).unwrap();
            let r = superposition_transform(&map, &golden, &phi).unwrap();
            assert_eq!(r.probability, 1.0);
        }
    }

    #[test]
    fn coherence_distillation() {
        for d in 2..=6 {
            let m = maximally_coherent::<f64>(d, None).unwrap();
            assert_eq!(distill_coherence_prob(&m), 1.0);
        }
        assert_eq!(distill_coherence_prob(&coherent(&[0.7, 0.3, 0.0])), 0.0);
        let p = distill_coherence_prob(&coherent(&[0.766469, 0.233531]));
        assert_abs_diff_eq!(p, 0.467062, epsilon = 1e-4);
    }

    #[test]
    fn distillation_matches_general_formula_with_uniform_target() {
        let src = coherent(&[0.5, 0.3, 0.15, 0.05]);
        let via_transform = max_coherence_transform_prob(&src, &maximally_coherent(4, None).unwrap()).unwrap();
        assert_abs_diff_eq!(via_transform.probability, distill_coherence_prob(&src), epsilon = 1e-14);
        assert_eq!(via_transform.binding_index, Some(3));
    }

    #[test]
    fn superposition_distillation() {
        let map = uniform_map(2, 0.0);
        let psi = SuperpositionState::make(real_vector(&[0.9f64.sqrt(), 0.1f64.sqrt()]), map.gram().clone()).unwrap();
        let r = superposition_distill(&map, &psi).unwrap();
        assert_abs_diff_eq!(r.probability, 0.2, epsilon = 1e-14);
        assert_eq!(r.binding_index, Some(1));

        let map = uniform_map(3, -0.2);
        let golden = golden_plus(3, -0.2).unwrap();
        let golden = SuperpositionState::make(golden.coefficients().clone(), map.gram().clone()).unwrap();
        let r = superposition_distill(&map, &golden).unwrap();
        assert_eq!(r.probability, 1.0);
        let fin = r.target_state.unwrap();
        assert!(phase_aligned_diff(fin.coefficients(), golden.coefficients()) < 1e-10);
        assert!(max_abs_diff_vec(fin.coefficients(), golden.coefficients()) < 1e-10);

        let positive = uniform_map(3, 0.2);
        let psi = SuperpositionState::make(real_vector(&[1.0, 0.5, 0.2]), positive.gram().clone()).unwrap();
        assert!(matches!(
            superposition_distill(&positive, &psi),
            Err(Error::OverlapOutOfGoldenRange { .. })
        ));
    }

    #[test]
    fn tail_sum_accumulation() {
        assert_eq!(tail_sums(&[0.5, 0.25, 0.25]), vec![1.0, 0.5, 0.25]);
        assert!(tail_sums::<f64>(&[]).is_empty());
    }
}
