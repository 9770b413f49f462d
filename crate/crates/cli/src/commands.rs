use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::Context;
use log::info;
use lowdin::measures::{l1_coherence, l1_superposition, rel_entropy_coherence_pure, write_sweep_csv};
use lowdin::schema::{GramSpec, LoadedState};
use lowdin::transform::superposition_distill;
use lowdin::{
    distill_coherence_prob, max_coherence_transform_prob, maximally_coherent, orthonormalization_distance,
    superposition_transform, sweep_l1, uniform_mu_kappa, CMatrix, CoherentState64, Error, GoldenSign,
    GoldenSpec, GramMatrix64, LowdinMap64, Tolerances64, TransformReport64,
};
use nalgebra::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde_json::{json, Map, Value};

use crate::args::{Format, Sign};
use crate::load::{self, BadInput};
use crate::render::Rounder;

pub struct Ctx {
    pub tol: Tolerances64,
    pub round: Rounder,
    pub log2: bool,
}

impl Ctx {
    fn map(&self, gram: Arc<GramMatrix64>) -> lowdin::Result<LowdinMap64> {
        LowdinMap64::build_with(gram, self.tol)
    }

    fn entropy(&self, nats: f64) -> Value {
        self.round.num(if self.log2 { nats / std::f64::consts::LN_2 } else { nats })
    }

    fn entropy_unit(&self) -> &'static str {
        if self.log2 {
            "bits"
        } else {
            "nats"
        }
    }
}

fn gram_echo(gram: &GramMatrix64) -> anyhow::Result<Value> {
    Ok(serde_json::to_value(GramSpec::from_gram(gram))?)
}

pub fn lowdin(ctx: &Ctx, path: &Path, verify: Option<usize>, seed: u64) -> anyhow::Result<Value> {
    let gram = load::gram(path, &ctx.tol)?;
    let map = ctx.map(gram.clone())?;
    let r = ctx.round;
    let d = gram.dim();
    let mut out = Map::new();
    out.insert("gram".into(), gram_echo(&gram)?);
    out.insert("dimension".into(), json!(d));
    out.insert("eigenvalues".into(), r.nums(gram.spectral_decompose().eigenvalues.as_slice()));
    out.insert("sqrt_s".into(), r.cmat(map.sqrt_s()));
    out.insert("inv_sqrt_s".into(), r.cmat(map.inv_sqrt_s()));
    out.insert(
        "lowdin_basis".into(),
        Value::Array((0..d).map(|k| r.cvec(&map.basis_vector(k))).collect()),
    );
    out.insert("displacement".into(), r.num(map.displacement()));
    if let Some(u) = gram.as_uniform(ctx.tol.hermitian) {
        let f = uniform_mu_kappa(u.dim(), u.overlap())?;
        let mut m = Map::new();
        m.insert("s".into(), r.num(f.s));
        m.insert("mu".into(), r.num(f.mu));
        m.insert("kappa".into(), r.num(f.kappa));
        if let (Some(a), Some(b)) = (f.alpha, f.beta) {
            m.insert("alpha".into(), r.num(a));
            m.insert("beta".into(), r.num(b));
        }
        out.insert("uniform".into(), Value::Object(m));
    }
    if let Some(n) = verify {
        out.insert("minimality".into(), verify_minimality(ctx, &map, n, seed)?);
    }
    Ok(Value::Object(out))
}

fn haar_unitary(rng: &mut impl Rng, d: usize) -> CMatrix<f64> {
    let z = CMatrix::<f64>::from_fn(d, d, |_, _| {
        Complex::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    let qr = z.qr();
    let (mut q, r) = (qr.q(), qr.r());
    for j in 0..d {
        let phase = r[(j, j)] / Complex::new(r[(j, j)].norm(), 0.0);
        let mut col = q.column_mut(j);
        col *= phase;
    }
    q
}

fn verify_minimality(ctx: &Ctx, map: &LowdinMap64, n: usize, seed: u64) -> anyhow::Result<Value> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let base = map.displacement();
    let mut min_margin = f64::INFINITY;
    let mut violations = 0usize;
    for _ in 0..n {
        let w = haar_unitary(&mut rng, map.dim());
        let margin = orthonormalization_distance(map.gram(), &(map.inv_sqrt_s() * w)) - base;
        min_margin = min_margin.min(margin);
        if margin < -1e-10 {
            violations += 1;
        }
    }
    info!("minimality: {n} samples, smallest margin {min_margin:e}");
    if violations > 0 {
        return Err(Error::Internal(format!(
            "symmetric orthonormalization beaten by {violations} of {n} random unitaries"
        ))
        .into());
    }
    Ok(json!({
        "samples": n,
        "seed": seed,
        "min_margin": if n == 0 { Value::Null } else { ctx.round.num(min_margin) },
        "violations": violations,
    }))
}

pub fn forward(ctx: &Ctx, path: &Path) -> anyhow::Result<Value> {
    let psi = match load::state(path, &ctx.tol)? {
        LoadedState::Superposition(psi) => psi,
        LoadedState::Coherent { .. } => {
            return Err(BadInput("forward expects a state with basis \"nonorthogonal\"".into()).into())
        }
    };
    let map = ctx.map(psi.gram().clone())?;
    let bar = map.forward(&psi)?;
    let r = ctx.round;
    Ok(json!({
        "basis": "lowdin",
        "coefficients": r.cvec(bar.coefficients()),
        "overlap": gram_echo(psi.gram())?,
        "probabilities": r.nums(&bar.probabilities()),
        "support": bar.support(),
        "l1_coherence": r.num(l1_coherence(&bar)),
    }))
}

pub fn backward(ctx: &Ctx, path: &Path, gram: Option<&PathBuf>) -> anyhow::Result<Value> {
    let (bar, overlap) = match load::state(path, &ctx.tol)? {
        LoadedState::Coherent { state, overlap } => (state, overlap),
        LoadedState::Superposition(_) => {
            return Err(BadInput("backward expects a state with basis \"lowdin\"".into()).into())
        }
    };
    let gram = match gram {
        Some(p) => load::gram(p, &ctx.tol)?,
        None => overlap.ok_or_else(|| BadInput("no overlap given: add \"overlap\" to the state or pass --gram".into()))?,
    };
    let map = ctx.map(gram.clone())?;
    let phi = map.backward(&bar)?;
    let r = ctx.round;
    Ok(json!({
        "basis": "nonorthogonal",
        "coefficients": r.cvec(phi.coefficients()),
        "overlap": gram_echo(&gram)?,
        "l1_superposition": r.num(l1_superposition(&phi)),
    }))
}

fn report_value(ctx: &Ctx, rep: &TransformReport64) -> Value {
    let r = ctx.round;
    json!({
        "probability": r.num(rep.probability),
        "deterministic": rep.deterministic,
        "binding_index": rep.binding_index,
        "source_bar": r.cvec(rep.source_bar.coefficients()),
        "target_bar": r.cvec(rep.target_bar.coefficients()),
        "source_probabilities": r.nums(&rep.source_bar.sorted_probs()),
        "target_probabilities": r.nums(&rep.target_bar.sorted_probs()),
        "target_state": rep.target_state.as_ref().map(|s| r.cvec(s.coefficients())),
    })
}

pub fn transform(ctx: &Ctx, source: &Path, target: &Path) -> anyhow::Result<Value> {
    let rep = match (load::state(source, &ctx.tol)?, load::state(target, &ctx.tol)?) {
        (LoadedState::Superposition(psi), LoadedState::Superposition(phi)) => {
            if !psi.same_gram(&phi) {
                return Err(Error::GramMismatch.into());
            }
            superposition_transform(&ctx.map(psi.gram().clone())?, &psi, &phi)?
        }
        (
            LoadedState::Coherent { state: a, overlap: ga },
            LoadedState::Coherent { state: b, overlap: gb },
        ) => {
            if let (Some(ga), Some(gb)) = (&ga, &gb) {
                if ga != gb {
                    return Err(Error::GramMismatch.into());
                }
            }
            max_coherence_transform_prob(&a, &b)?
        }
        _ => return Err(BadInput("source and target must use the same basis".into()).into()),
    };
    Ok(report_value(ctx, &rep))
}

pub fn distill(ctx: &Ctx, path: &Path) -> anyhow::Result<Value> {
    let rep = match load::state(path, &ctx.tol)? {
        LoadedState::Superposition(psi) => superposition_distill(&ctx.map(psi.gram().clone())?, &psi)?,
        LoadedState::Coherent { state, .. } => coherent_distill(&state)?,
    };
    Ok(report_value(ctx, &rep))
}

fn coherent_distill(bar: &CoherentState64) -> lowdin::Result<TransformReport64> {
    let probability = distill_coherence_prob(bar);
    let deterministic = probability == 1.0;
    Ok(TransformReport64 {
        probability,
        deterministic,
        source_bar: bar.clone(),
        target_bar: maximally_coherent(bar.dim(), None)?,
        binding_index: if deterministic { None } else { Some(bar.dim() - 1) },
        target_state: None,
    })
}

pub fn golden(ctx: &Ctx, d: usize, s: f64, sign: Sign) -> anyhow::Result<Value> {
    let sign = match sign {
        Sign::Plus => GoldenSign::Plus,
        Sign::Minus => GoldenSign::Minus,
    };
    let psi = GoldenSpec::new(d, s, sign)?.build()?;
    let bar = ctx.map(psi.gram().clone())?.forward(&psi)?;
    let r = ctx.round;
    Ok(json!({
        "basis": "nonorthogonal",
        "coefficients": r.cvec(psi.coefficients()),
        "overlap": serde_json::to_value(GramSpec::Uniform { d, s })?,
        "lowdin_coefficients": r.cvec(bar.coefficients()),
        "l1_superposition": r.num(l1_superposition(&psi)),
    }))
}

pub fn measure(ctx: &Ctx, path: &Path) -> anyhow::Result<Value> {
    let r = ctx.round;
    let mut out = Map::new();
    let bar = match load::state(path, &ctx.tol)? {
        LoadedState::Superposition(psi) => {
            out.insert("l1_superposition".into(), r.num(l1_superposition(&psi)));
            ctx.map(psi.gram().clone())?.forward(&psi)?
        }
        LoadedState::Coherent { state, .. } => state,
    };
    out.insert("l1_coherence".into(), r.num(l1_coherence(&bar)));
    out.insert(
        "relative_entropy_coherence".into(),
        ctx.entropy(rel_entropy_coherence_pure(&bar)),
    );
    out.insert("entropy_unit".into(), json!(ctx.entropy_unit()));
    Ok(Value::Object(out))
}

pub struct SweepArgs<'a> {
    pub eta: f64,
    pub s_min: f64,
    pub s_max: f64,
    pub step: f64,
    pub out: Option<&'a Path>,
}

/// Writes its own output: CSV unless JSON is requested.
pub fn sweep(ctx: &Ctx, a: SweepArgs<'_>, format: Format) -> anyhow::Result<()> {
    if a.eta == 0.0 || !a.eta.is_finite() {
        return Err(Error::ZeroEta.into());
    }
    let rows = sweep_l1(a.eta, a.s_min, a.s_max, a.step)?;
    let mut sink: Box<dyn Write> = match a.out {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("cannot create {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    if format == Format::Json {
        let r = ctx.round;
        let rows: Vec<Value> = rows
            .iter()
            .map(|row| {
                json!({
                    "s": r.num(row.s),
                    "m_l1_superposition": r.num(row.m_l1_sup),
                    "m_l1_coherent": r.num(row.m_l1_coh),
                })
            })
            .collect();
        serde_json::to_writer_pretty(&mut sink, &rows)?;
        writeln!(sink)?;
    } else {
        write_sweep_csv(&rows, ctx.round.digits, &mut sink)?;
    }
    sink.flush()?;
    Ok(())
}
