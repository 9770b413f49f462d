mod args;
mod commands;
mod load;
mod render;

use std::io::{self, Write};
use std::process::ExitCode;

use clap::Parser;
use log::LevelFilter;
use lowdin::Tolerances64;

use args::{Cli, Command, GlobalOpts};
use commands::{Ctx, SweepArgs};
use load::BadInput;
use render::Rounder;

fn tolerances(g: &GlobalOpts) -> Result<Tolerances64, BadInput> {
    let mut tol = Tolerances64::default();
    for (name, value) in [("--eps-pd", g.eps_pd), ("--tol", g.tol)] {
        if let Some(v) = value {
            if !(v > 0.0 && v.is_finite()) {
                return Err(BadInput(format!("{name} must be positive and finite, got {v}")));
            }
        }
    }
    if let Some(v) = g.eps_pd {
        tol.eps_pd = v;
    }
    if let Some(v) = g.tol {
        tol.hermitian = v;
        tol.unit_diagonal = v;
        tol.normalization = v;
    }
    Ok(tol)
}

fn run(cli: Cli) -> anyhow::Result<()> {
    let g = &cli.global;
    let ctx = Ctx {
        tol: tolerances(g)?,
        round: Rounder {
            digits: g.digits as usize,
        },
        log2: g.log2,
    };
    let value = match &cli.command {
        Command::Lowdin {
            gram,
            verify_minimality,
            seed,
        } => commands::lowdin(&ctx, gram, *verify_minimality, *seed)?,
        Command::Forward { state } => commands::forward(&ctx, state)?,
        Command::Backward { state, gram } => commands::backward(&ctx, state, gram.as_ref())?,
        Command::Transform { source, target } => commands::transform(&ctx, source, target)?,
        Command::Distill { state } => commands::distill(&ctx, state)?,
        Command::Golden { d, s, sign } => commands::golden(&ctx, *d, *s, *sign)?,
        Command::Measure { state } => commands::measure(&ctx, state)?,
        Command::Sweep {
            eta,
            s_min,
            s_max,
            step,
            out,
        } => {
            let a = SweepArgs {
                eta: *eta,
                s_min: *s_min,
                s_max: *s_max,
                step: *step,
                out: out.as_deref(),
            };
            return commands::sweep(&ctx, a, g.format);
        }
    };
    let mut out = io::stdout().lock();
    render::emit(&value, g.format, ctx.round.digits, &mut out)?;
    out.flush()?;
    Ok(())
}

/// 2 for bad input, 1 for numerical or I/O failures.
fn exit_code(err: &anyhow::Error) -> u8 {
    if let Some(e) = err.downcast_ref::<lowdin::Error>() {
        return if e.is_validation() { 2 } else { 1 };
    }
    if err.downcast_ref::<BadInput>().is_some() {
        return 2;
    }
    1
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.global.verbose {
        0 => LevelFilter::Warn,
        1 => LevelFilter::Info,
        2 => LevelFilter::Debug,
        _ => LevelFilter::Trace,
    };
    env_logger::Builder::new().filter_level(level).format_timestamp(None).init();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
