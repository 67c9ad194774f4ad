//! The subcommands, writing to any sink so they can be driven from tests.

use std::io::Write;
use std::sync::Arc;

use ehall_core::hopf::Coproduct;
use ehall_core::kfield::{Coeff, KError};
use ehall_core::lattice::{enumerate_convex, minimal_paths, LatticeError, Path, Region, Segment};
use ehall_core::par::{par_map, set_jobs};
use ehall_core::presentation::{Ordered, VerificationReport};
use serde_json::json;
use thiserror::Error;

use crate::config::{Format, RunConfig};
use crate::eval::{EvalError, Evaluator};
use crate::expr::{parse, SyntaxError};
use crate::suites::{self, Ctx, SuiteError};

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error(transparent)]
    Suite(#[from] SuiteError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Field(#[from] KError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("{0}")]
    Other(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl CliError {
    /// 2 for bad input, 1 for everything else.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Syntax(_) | CliError::Lattice(_) => 2,
            CliError::Suite(SuiteError::Unknown(_)) => 2,
            CliError::Eval(EvalError::RankBound { .. } | EvalError::NonScalarDivision | EvalError::NegativePower(_)) => 2,
            _ => 1,
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

fn evaluator<C: Coeff>(cx: &Ctx<C>) -> Evaluator<'_, C> {
    Evaluator { pres: &cx.pres, window: cx.cfg.window, rank_bound: cx.cfg.rank_bound }
}

fn eval_in<C: Coeff>(cx: &Ctx<C>, text: &str, out: &mut dyn Write) -> Result<()> {
    let e = parse(text)?;
    let v = evaluator(cx).element(&e)?;
    match cx.cfg.format {
        Format::Text => writeln!(out, "{v}")?,
        Format::Json => writeln!(out, "{}", json!({"expr": e.to_string(), "value": v.to_json()}))?,
        Format::Csv => {
            writeln!(out, "pos,zero,neg,coeff")?;
            let join = |v: Vec<String>| v.join(";");
            for (k, c) in v.terms() {
                let pos = join(k.pos.iter().map(|x| x.to_string()).collect());
                let zero = join(k.zero.iter().map(|x| x.to_string()).collect());
                let neg = join(k.neg.iter().map(|x| x.to_string()).collect());
                writeln!(out, "{pos},{zero},{neg},\"{c}\"")?;
            }
        }
    }
    Ok(())
}

/// Evaluate an expression to its triangular normal form.
pub fn eval(cfg: &RunConfig, text: &str, out: &mut dyn Write) -> Result<()> {
    set_jobs(cfg.jobs);
    on_field!(cfg, eval_in, text, out)
}

fn report_line(r: &VerificationReport, format: Format) -> String {
    match format {
        Format::Json => r.to_json().to_string(),
        Format::Text => {
            let opt = |v: Option<i64>| v.map_or("-".to_string(), |x| x.to_string());
            let win = r.cell.window.map_or("-".to_string(), |w| format!("{}..{}", w[0], w[1]));
            let ranks: Vec<String> = r.ranks.iter().map(|(k, v)| format!("{k}={v}")).collect();
            let status = if r.passed() { "PASS" } else { "FAIL" };
            format!("{status} {} r={} d={} window={win} {}", r.suite, opt(r.cell.r), opt(r.cell.d), ranks.join(" "))
        }
        Format::Csv => {
            let opt = |v: Option<i64>| v.map_or(String::new(), |x| x.to_string());
            let (lo, hi) = r.cell.window.map_or((None, None), |w| (Some(w[0]), Some(w[1])));
            let status = if r.passed() { "PASS" } else { "FAIL" };
            format!("{},{},{},{},{},{status}", r.suite, opt(r.cell.r), opt(r.cell.d), opt(lo), opt(hi))
        }
    }
}

/// Run suites, one record per line. Returns whether all passed.
pub fn verify(cfg: &RunConfig, names: &[String], out: &mut dyn Write) -> Result<bool> {
    let names = suites::resolve(names)?;
    if cfg.format == Format::Csv {
        writeln!(out, "suite,r,d,window_lo,window_hi,status")?;
    }
    let mut io = Ok(());
    let ok = suites::run_suites(cfg, &names, |r| {
        if io.is_ok() {
            io = writeln!(out, "{}", report_line(r, cfg.format));
        }
    })?;
    io?;
    Ok(ok)
}

fn region_for(z: Segment) -> Region {
    match (z.p.signum(), z.q.signum()) {
        (1, _) => Region::Gt,
        (-1, _) => Region::Lt,
        (_, 1) => Region::Plus,
        _ => Region::Minus,
    }
}

fn dims_in<C: Coeff>(cx: &Ctx<C>, max_rank: i64, out: &mut dyn Write) -> Result<()> {
    let w = cx.cfg.window;
    let cells: Vec<(i64, i64)> = (1..=max_rank).flat_map(|r| (r * w.lo..=r * w.hi).map(move |d| (r, d))).collect();
    let rows = par_map(cells, |(r, d)| -> Result<(i64, i64, usize, usize)> {
        let family = enumerate_convex(Segment::of(r, d), Region::Gt, w)?;
        let images = family.iter().map(|p| cx.alg().path_image(p)).collect::<std::result::Result<Vec<_>, _>>();
        let images = images.map_err(|e| CliError::Other(e.to_string()))?;
        Ok((r, d, family.len(), cx.alg().rank_of(&images)))
    });
    if cx.cfg.format != Format::Json {
        writeln!(out, "r,d,window_lo,window_hi,convex_count,rank")?;
    }
    for row in rows {
        let (r, d, n, rank) = row?;
        match cx.cfg.format {
            Format::Json => writeln!(
                out,
                "{}",
                json!({"r": r, "d": d, "window_lo": w.lo, "window_hi": w.hi, "convex_count": n, "rank": rank})
            )?,
            _ => writeln!(out, "{r},{d},{},{},{n},{rank}", w.lo, w.hi)?,
        }
    }
    Ok(())
}

/// Convex-path counts and shuffle ranks per bidegree, for ranks up to
/// `max_rank` and segment degrees in the window.
pub fn dims(cfg: &RunConfig, max_rank: i64, out: &mut dyn Write) -> Result<()> {
    set_jobs(cfg.jobs);
    if max_rank as usize > cfg.rank_bound {
        return Err(CliError::Other(format!("rank {max_rank} exceeds the rank bound {}", cfg.rank_bound)));
    }
    on_field!(cfg, dims_in, max_rank, out)
}

fn write_paths(paths: &[Path], format: Format, out: &mut dyn Write) -> Result<()> {
    match format {
        Format::Json => writeln!(out, "{}", serde_json::to_string(paths).expect("paths serialize"))?,
        Format::Text => {
            for p in paths {
                writeln!(out, "{p}")?;
            }
        }
        Format::Csv => {
            writeln!(out, "index,p,q")?;
            for (i, p) in paths.iter().enumerate() {
                for s in p.segments() {
                    writeln!(out, "{i},{},{}", s.p, s.q)?;
                }
            }
        }
    }
    Ok(())
}

/// The minimal paths `(x, z - x)` of weight `z`.
pub fn minpath(cfg: &RunConfig, r: i64, d: i64, out: &mut dyn Write) -> Result<()> {
    let paths: Vec<Path> = minimal_paths(Segment::new(r, d)?)?.into_iter().map(|(x, y)| Path::new(vec![x, y])).collect();
    write_paths(&paths, cfg.format, out)
}

/// Convex paths of weight `(r, d)` with segment degrees in the window.
pub fn paths(cfg: &RunConfig, r: i64, d: i64, out: &mut dyn Write) -> Result<()> {
    let z = Segment::new(r, d)?;
    write_paths(&enumerate_convex(z, region_for(z), cfg.window)?, cfg.format, out)
}

fn show_ordered(t: &Ordered) -> String {
    let f: Vec<String> = t
        .pos
        .iter()
        .map(|b| format!("u(1,{b})"))
        .chain(t.zero.iter().map(|l| format!("u(0,{l})")))
        .chain(t.neg.iter().map(|a| format!("u(-1,{a})")))
        .collect();
    if f.is_empty() {
        "1".into()
    } else {
        f.join("*")
    }
}

fn coproduct_in<C: Coeff>(cx: &Ctx<C>, text: &str, n: i64, out: &mut dyn Write) -> Result<()> {
    let e = parse(text)?;
    let x = evaluator(cx).element(&e)?;
    let cop = Coproduct::new(Arc::clone(&cx.pres));
    let t = cop.element(&x, n).map_err(|e| CliError::Other(e.to_string()))?;
    match cx.cfg.format {
        Format::Json => writeln!(out, "{}", t.to_json(&cx.pres))?,
        Format::Text => {
            for (k, c) in t.terms() {
                let f: Vec<String> = k.iter().map(show_ordered).collect();
                writeln!(out, "({c}) {}", f.join(" (x) "))?;
            }
            writeln!(out, "# truncation {n}: {} raw terms, {} dropped, tail {}", t.raw_terms(), t.dropped(), t.has_tail())?;
        }
        Format::Csv => {
            writeln!(out, "left,right,coeff")?;
            for (k, c) in t.terms() {
                writeln!(out, "{},{},\"{c}\"", show_ordered(&k[0]), show_ordered(&k[1]))?;
            }
        }
    }
    Ok(())
}

/// The coproduct of an expression, keeping tensor factors of degree at
/// most `n` in absolute value.
pub fn coproduct(cfg: &RunConfig, text: &str, n: i64, out: &mut dyn Write) -> Result<()> {
    set_jobs(cfg.jobs);
    on_field!(cfg, coproduct_in, text, n, out)
}
