//! Resource quantifiers: l1 measures, relative entropy of coherence, and the
//! qubit l1 comparison between a superposition state and its Löwdin image.

use std::io::{self, Write};

use log::warn;

use crate::error::{Error, Result};
use crate::format::significant;
use crate::gram::EigenSystem;
use crate::lso::LowdinMap;
use crate::scalar::{abs, abs2, lit, to_f64, Real, Tolerances};
use crate::states::{CoherentState, DensityBasis, DensityCoefficients, SuperpositionState};

/// `Σ_{i≠j} |ρ_ij|` in the density's own basis.
pub fn l1_measure<T: Real>(rho: &DensityCoefficients<T>) -> T {
    let m = rho.matrix();
    let d = rho.dim();
    let mut total = T::zero();
    for i in 0..d {
        for j in 0..d {
            if i != j {
                total += abs(m[(i, j)]);
            }
        }
    }
    total
}

/// l1 measure of superposition of `|ψ><ψ|`.
pub fn l1_superposition<T: Real>(psi: &SuperpositionState<T>) -> T {
    l1_measure(&DensityCoefficients::from_superposition(psi))
}

/// l1 measure of coherence of `|ψ̄><ψ̄|`.
pub fn l1_coherence<T: Real>(bar: &CoherentState<T>) -> T {
    l1_measure(&DensityCoefficients::from_coherent(bar))
}

/// Closed-form qubit pair `(M_l1(ρ), M_l1(ρ̄))` for real amplitudes
/// normalized under overlap `s`:
/// `(2|ψ_0ψ_1|, |2ψ_0ψ_1 + s(ψ_0² + ψ_1²)|)`.
pub fn l1_pair_qubit<T: Real>(psi0: T, psi1: T, s: T) -> Result<(T, T)> {
    if !(s > -T::one() && s < T::one()) {
        return Err(Error::OverlapOutOfRange {
            d: 2,
            s: to_f64(s),
            lower: -1.0,
            upper: 1.0,
        });
    }
    let two: T = lit(2.0);
    let norm_sq = psi0 * psi0 + psi1 * psi1 + two * s * psi0 * psi1;
    if !((norm_sq - T::one()).abs() <= T::default_tolerances().normalization) {
        return Err(Error::NotNormalized {
            norm_sq: to_f64(norm_sq),
        });
    }
    let cross = two * psi0 * psi1;
    Ok((cross.abs(), (cross + s * (psi0 * psi0 + psi1 * psi1)).abs()))
}

/// `S(ρ_diag) - S(ρ)` in nats for a density over the Löwdin basis.
pub fn rel_entropy_coherence<T: Real>(rho: &DensityCoefficients<T>) -> Result<T> {
    if *rho.basis() != DensityBasis::Lowdin {
        return Err(Error::InvalidDensity(
            "relative entropy of coherence needs Löwdin-basis coefficients".into(),
        ));
    }
    let tol = Tolerances::<T>::default();
    let m = rho.matrix();
    let eig = EigenSystem::hermitian(m, &tol)?;
    if eig.min_eigenvalue() < -tol.normalization {
        return Err(Error::InvalidDensity(format!(
            "not positive semidefinite (eigenvalue {:e})",
            to_f64(eig.min_eigenvalue())
        )));
    }
    let diag: Vec<T> = (0..rho.dim()).map(|i| m[(i, i)].re).collect();
    let value = shannon(diag.iter().copied()) - shannon(eig.eigenvalues.iter().copied());
    let ln_d = lit::<T>(rho.dim() as f64).ln();
    Ok(value.max(T::zero()).min(ln_d))
}

/// Shannon entropy of the squared amplitudes of a pure Löwdin-basis state.
pub fn rel_entropy_coherence_pure<T: Real>(bar: &CoherentState<T>) -> T {
    shannon(bar.coefficients().iter().map(|&z| abs2(z)))
}

/// `-Σ p ln p`, ignoring non-positive entries.
fn shannon<T: Real>(p: impl Iterator<Item = T>) -> T {
    p.filter(|&x| x > T::zero())
        .fold(T::zero(), |acc, x| acc - x * x.ln())
}

/// Overlap `s = -2η/(η² + 1)` at which `x(η|c_0> + |c_1>)` maps to an
/// incoherent Löwdin state.
pub fn zero_coherence_overlap<T: Real>(eta: T) -> Result<T> {
    if eta == T::zero() || !eta.is_finite() {
        return Err(Error::ZeroEta);
    }
    let s = -(eta + eta) / (eta * eta + T::one());
    if !(s > -T::one() && s < T::one()) {
        return Err(Error::OverlapOutOfRange {
            d: 2,
            s: to_f64(s),
            lower: -1.0,
            upper: 1.0,
        });
    }
    Ok(s)
}

/// One overlap value of the qubit l1 comparison.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow<T> {
    pub s: T,
    pub m_l1_sup: T,
    pub m_l1_coh: T,
}

/// Normalization denominators at or below this are skipped.
pub const SWEEP_SINGULARITY: f64 = 1e-9;

/// l1 measures of `x(η|c_0> + |c_1>)` and its Löwdin image for
/// `s = s_min, s_min + step, …, ≤ s_max`, with `x² = 1/(η² + 2sη + 1)`.
pub fn sweep_l1<T: Real>(eta: T, s_min: T, s_max: T, step: T) -> Result<Vec<SweepRow<T>>> {
    if !(step > T::zero()) || !step.is_finite() {
        return Err(Error::InvalidStep(to_f64(step)));
    }
    if !(s_min <= s_max) {
        return Err(Error::EmptyRange {
            s_min: to_f64(s_min),
            s_max: to_f64(s_max),
        });
    }
    for s in [s_min, s_max] {
        if !(s > -T::one() && s < T::one()) {
            return Err(Error::OverlapOutOfRange {
                d: 2,
                s: to_f64(s),
                lower: -1.0,
                upper: 1.0,
            });
        }
    }
    let slack: T = lit(1e-9);
    let count = ((s_max - s_min) / step + slack).floor();
    let count = count.to_usize().unwrap_or(0);
    let two: T = lit(2.0);
    let mut rows = Vec::with_capacity(count + 1);
    for k in 0..=count {
        let s = s_min + lit::<T>(k as f64) * step;
        let denom = eta * eta + two * s * eta + T::one();
        if denom <= lit(SWEEP_SINGULARITY) {
            warn!("skipping s = {s}: normalization denominator {denom} is not positive");
            continue;
        }
        let x2 = T::one() / denom;
        rows.push(SweepRow {
            s,
            m_l1_sup: (two * eta).abs() * x2,
            m_l1_coh: (two * eta + s * (eta * eta + T::one())).abs() * x2,
        });
    }
    Ok(rows)
}

pub const SWEEP_CSV_HEADER: &str = "s,m_l1_superposition,m_l1_coherent";

/// Writes sweep rows as CSV with `digits` significant digits.
pub fn write_sweep_csv<T: Real, W: Write>(
    rows: &[SweepRow<T>],
    digits: usize,
    mut out: W,
) -> io::Result<()> {
    writeln!(out, "{SWEEP_CSV_HEADER}")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{}",
            significant(to_f64(r.s), digits),
            significant(to_f64(r.m_l1_sup), digits),
            significant(to_f64(r.m_l1_coh), digits)
        )?;
    }
    Ok(())
}

/// l1 coherence of the forward-mapped state, via the matrix path.
pub fn l1_coherence_of_forward<T: Real>(
    map: &LowdinMap<T>,
    psi: &SuperpositionState<T>,
) -> Result<T> {
    Ok(l1_coherence(&map.forward(psi)?))
}
