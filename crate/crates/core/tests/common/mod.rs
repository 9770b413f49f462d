#![allow(dead_code)]

use std::sync::Arc;

use lowdin::{CMatrix, CVector, CoherentState, GramMatrix, SuperpositionState, UniformOverlap};
use nalgebra::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian(rng: &mut impl Rng) -> Complex<f64> {
    Complex::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

pub fn gaussian_vector(rng: &mut impl Rng, n: usize) -> CVector<f64> {
    CVector::from_fn(n, |_, _| gaussian(rng))
}

/// Gram matrix of `d` random unit vectors in `C^(d+2)`; resamples until valid.
pub fn random_gram(rng: &mut impl Rng, d: usize) -> Arc<GramMatrix<f64>> {
    loop {
        let mut c = CMatrix::<f64>::from_fn(d + 2, d, |_, _| gaussian(rng));
        for mut col in c.column_iter_mut() {
            let n = col.norm();
            col /= Complex::new(n, 0.0);
        }
        let mut s = c.adjoint() * &c;
        for i in 0..d {
            s[(i, i)] = Complex::new(1.0, 0.0);
        }
        if let Ok(g) = GramMatrix::new(s) {
            return Arc::new(g);
        }
    }
}

pub fn uniform_gram(d: usize, s: f64) -> Arc<GramMatrix<f64>> {
    Arc::new(UniformOverlap::new(d, s).unwrap().to_gram().unwrap())
}

/// `k` overlaps strictly inside the admissible interval for dimension `d`.
pub fn overlap_grid(d: usize, k: usize) -> Vec<f64> {
    let (lo, hi) = UniformOverlap::<f64>::open_range(d);
    (1..=k).map(|i| lo + (hi - lo) * i as f64 / (k + 1) as f64).collect()
}

/// Haar-distributed unitary via QR of a complex Ginibre matrix.
pub fn haar_unitary(rng: &mut impl Rng, d: usize) -> CMatrix<f64> {
    let z = CMatrix::<f64>::from_fn(d, d, |_, _| gaussian(rng));
    let qr = z.qr();
    let (mut q, r) = (qr.q(), qr.r());
    for j in 0..d {
        let rjj = r[(j, j)];
        let phase = rjj / Complex::new(rjj.norm(), 0.0);
        let mut col = q.column_mut(j);
        col *= phase;
    }
    q
}

pub fn random_state(rng: &mut impl Rng, gram: &Arc<GramMatrix<f64>>) -> SuperpositionState<f64> {
    SuperpositionState::make(gaussian_vector(rng, gram.dim()), gram.clone()).unwrap()
}

pub fn random_coherent(rng: &mut impl Rng, d: usize) -> CoherentState<f64> {
    CoherentState::normalized(gaussian_vector(rng, d)).unwrap()
}

pub fn real_state(x: &[f64], gram: &Arc<GramMatrix<f64>>) -> SuperpositionState<f64> {
    let v = CVector::from_iterator(x.len(), x.iter().map(|&r| Complex::new(r, 0.0)));
    SuperpositionState::make(v, gram.clone()).unwrap()
}

pub fn max_abs_diff(a: &CMatrix<f64>, b: &CMatrix<f64>) -> f64 {
    (a - b).iter().fold(0.0, |m, z| m.max(z.norm()))
}

pub fn max_abs_diff_vec(a: &CVector<f64>, b: &CVector<f64>) -> f64 {
    (a - b).iter().fold(0.0, |m, z| m.max(z.norm()))
}

/// Brute-force `min_{j ≥ 1} min{1, T_j(p)/T_j(q)}` with zero-denominator
/// tails skipped.
pub fn brute_force_probability(p: &[f64], q: &[f64]) -> f64 {
    let sort = |v: &[f64]| {
        let mut v = v.to_vec();
        v.sort_by(|a, b| b.partial_cmp(a).unwrap());
        v
    };
    let n = p.len().max(q.len());
    let (mut p, mut q) = (sort(p), sort(q));
    p.resize(n, 0.0);
    q.resize(n, 0.0);
    let mut best = 1.0f64;
    for j in 1..n {
        let mut tp = 0.0;
        let mut tq = 0.0;
        for i in (j..n).rev() {
            tp += p[i];
            tq += q[i];
        }
        if tq > 0.0 {
            best = best.min(tp / tq);
        }
    }
    best
}
