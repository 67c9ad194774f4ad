//! Bases, spanning, normal forms and the coproduct.

use std::collections::BTreeSet;

use ehall_core::hopf::{cross_instance, transport_instance, Coproduct};
use ehall_core::kfield::{Coeff, Rat};
use ehall_core::lattice::{enumerate_convex, minimal_paths, Region, Segment, Window};
use ehall_core::par::par_map;
use ehall_core::presentation::{
    in_spanning_family, isomorphism_certify, Cell, GenMode, Side, TriangularElement, VerificationReport, Word,
};
use ehall_core::shuffle::SymLaurent;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use super::{point_ctx, ranks, report, symbolic_ctx, Ctx, SuiteError};
use crate::config::{FieldMode, RunConfig};

const IDEMPOTENCE_WORDS: usize = 200;
const ASSOC_TRIPLES: usize = 100;
const SYMBOLIC_TRIPLES: usize = 10;
const HOPF_TRUNCATION: i64 = 6;

fn err(e: impl ToString) -> Value {
    json!({"error": e.to_string()})
}

/// Every minimal path of a weight gives the same commutator.
pub(crate) fn minimal_paths_agree<C: Coeff>(cx: &Ctx<C>) -> Vec<VerificationReport> {
    let cells: Vec<(i64, i64)> = (2..=5).flat_map(|r| (-5..=5).map(move |d| (r, d))).collect();
    par_map(cells, |(r, d)| {
        let cell = Cell { r: Some(r), d: Some(d), window: None };
        let z = Segment::of(r, d);
        let pairs = match minimal_paths(z) {
            Ok(p) => p,
            Err(e) => return report("minimal-paths", cell, false, vec![err(e)], Default::default()),
        };
        let mut first: Option<SymLaurent<C>> = None;
        let mut steps = Vec::new();
        for (x, y) in &pairs {
            match cx.alg().theta_from_pair(*x, *y) {
                Ok(t) => match &first {
                    None => first = Some(t),
                    Some(f) if *f != t => steps.push(json!({"path": [x, y], "differs": true})),
                    Some(_) => {}
                },
                Err(e) => steps.push(err(e)),
            }
        }
        let ok = !pairs.is_empty() && steps.is_empty();
        report("minimal-paths", cell, ok, steps, ranks([("minimal_paths", pairs.len() as i64)]))
    })
}

/// Convex paths with segment degrees in the window have independent
/// shuffle images.
pub(crate) fn basis<C: Coeff>(cx: &Ctx<C>) -> Vec<VerificationReport> {
    let window = cx.cfg.window;
    let cells: Vec<(i64, i64)> = [2, 3].into_iter().flat_map(|r| (-2..=2).map(move |d| (r, d))).collect();
    par_map(cells, |(r, d)| {
        let cell = Cell::new(r, d, window);
        let family = match enumerate_convex(Segment::of(r, d), Region::Gt, window) {
            Ok(f) => f,
            Err(e) => return report("basis", cell, false, vec![err(e)], Default::default()),
        };
        let images: Result<Vec<_>, _> = family.iter().map(|p| cx.alg().path_image(p)).collect();
        match images {
            Ok(im) => {
                let rank = cx.alg().rank_of(&im) as i64;
                let n = family.len() as i64;
                report("basis", cell, rank == n, vec![], ranks([("count", n), ("rank", rank)]))
            }
            Err(e) => report("basis", cell, false, vec![err(e)], Default::default()),
        }
    })
}

/// Rank-2 words rewritten into the spanning family by the quadratic
/// relation, every step checked in the shuffle model.
pub(crate) fn span<C: Coeff>(cx: &Ctx<C>) -> Vec<VerificationReport> {
    let window = cx.cfg.window;
    let red = cx.reducer(true);
    let degrees: Vec<i64> = (2 * window.lo..=2 * window.hi).collect();
    par_map(degrees, |d| {
        let cell = Cell::new(2, d, window);
        let (log, out) = match red.span_certify(d, window) {
            Ok(v) => v,
            Err(e) => return report("span", cell, false, vec![err(e)], Default::default()),
        };
        let mut steps = Vec::new();
        let mut reached = BTreeSet::new();
        for (w, sum) in &out {
            let mut acc = cx.alg().word_image(w).neg();
            for (&(k, l), c) in sum {
                reached.insert((k, l));
                if !in_spanning_family(k, l) {
                    steps.push(json!({"word": w, "outside": [k, l]}));
                }
                acc = acc.add(&cx.alg().word_image(&[k, l]).scale(c));
            }
            if !acc.is_zero() {
                steps.push(json!({"word": w, "image_differs": true}));
            }
        }
        let unverified = log.steps.iter().filter(|s| !s.verified).count();
        if unverified > 0 {
            steps.push(json!({"unverified_steps": unverified}));
        }
        let ok = steps.is_empty();
        steps.extend(log.to_json());
        report(
            "span",
            cell,
            ok,
            steps,
            ranks([("words", out.len() as i64), ("steps", log.len() as i64), ("family_words", reached.len() as i64)]),
        )
    })
}

pub(crate) fn isomorphism<C: Coeff>(cx: &Ctx<C>) -> Vec<VerificationReport> {
    let red = cx.reducer(false);
    let window = cx.cfg.window;
    let cells: Vec<(i64, i64)> = (1..=3).flat_map(|r| (-2..=2).map(move |d| (r, d))).collect();
    par_map(cells, |(r, d)| isomorphism_certify(&red, r, d, window))
}

fn random_mode(rng: &mut ChaCha8Rng) -> GenMode {
    match rng.gen_range(0..5) {
        0 => GenMode::Upos(rng.gen_range(-2..=2)),
        1 => GenMode::Uneg(rng.gen_range(-2..=2)),
        2 => GenMode::ThetaPlus(rng.gen_range(1..=2)),
        3 => GenMode::ThetaMinus(rng.gen_range(1..=2)),
        _ => GenMode::Uzero(if rng.gen() { 1 } else { -1 } * rng.gen_range(1..=2)),
    }
}

fn random_word(rng: &mut ChaCha8Rng, max: usize) -> Vec<GenMode> {
    let n = rng.gen_range(1..=max);
    (0..n).map(|_| random_mode(rng)).collect()
}

fn show(w: &[GenMode]) -> String {
    w.iter().map(|m| m.to_string()).collect::<Vec<_>>().join("*")
}

/// Normal forms are fixed by renormalizing, through the recorded ordered
/// expression and through a fresh decomposition.
fn idempotence<C: Coeff>(cx: &Ctx<C>, words: Vec<Vec<GenMode>>) -> VerificationReport {
    let window = cx.cfg.window;
    let fails: Vec<Option<Value>> = par_map(words, |w| {
        let check = || -> Result<bool, ehall_core::presentation::PresentationError> {
            let x = cx.pres.normalize(&Word::new(w.clone()))?;
            let again = cx.pres.normalize_ordered(x.witness().expect("normalize records a witness"))?;
            let fresh = cx.pres.normalize_ordered(&cx.pres.expand(&x, window)?)?;
            Ok(again == x && fresh == x)
        };
        match check() {
            Ok(true) => None,
            Ok(false) => Some(json!({"word": show(&w)})),
            Err(e) => Some(json!({"word": show(&w), "error": e.to_string()})),
        }
    });
    let steps: Vec<Value> = fails.into_iter().flatten().collect();
    let n = steps.len() as i64;
    report("normal-form", Cell::default(), n == 0, steps, ranks([("idempotence_words", IDEMPOTENCE_WORDS as i64), ("failures", n)]))
}

/// `(xy)z = x(yz)`, also when the inner product has to be decomposed
/// afresh instead of reusing its ordered expression.
fn associativity<C: Coeff>(cx: &Ctx<C>, triples: Vec<[Vec<GenMode>; 3]>, label: &str) -> VerificationReport {
    let window = cx.cfg.window;
    let count = triples.len() as i64;
    let fails: Vec<Option<Value>> = par_map(triples, |t| {
        let check = || -> Result<bool, ehall_core::presentation::PresentationError> {
            let [x, y, z]: [TriangularElement<C>; 3] = [
                cx.pres.normalize(&Word::new(t[0].clone()))?,
                cx.pres.normalize(&Word::new(t[1].clone()))?,
                cx.pres.normalize(&Word::new(t[2].clone()))?,
            ];
            let xy = cx.pres.multiply(&x, &y, window)?;
            let yz = cx.pres.multiply(&y, &z, window)?;
            let left = cx.pres.multiply(&xy, &z, window)?;
            let right = cx.pres.multiply(&x, &yz, window)?;
            let left_fresh = cx.pres.multiply(&xy.forget_witness(), &z, window)?;
            let right_fresh = cx.pres.multiply(&x, &yz.forget_witness(), window)?;
            Ok(left == right && left_fresh == left && right_fresh == right)
        };
        let words: Vec<String> = t.iter().map(|w| show(w)).collect();
        match check() {
            Ok(true) => None,
            Ok(false) => Some(json!({"triple": words})),
            Err(e) => Some(json!({"triple": words, "error": e.to_string()})),
        }
    });
    let steps: Vec<Value> = fails.into_iter().flatten().collect();
    let n = steps.len() as i64;
    let mut rk = ranks([("triples", count), ("failures", n)]);
    rk.insert(format!("{label}_field"), 1);
    report("normal-form", Cell::default(), n == 0, steps, rk)
}

/// Idempotence and associativity at a rational point (the configured one,
/// or sigma = 2, sigma-bar = 3), and associativity over the function field.
pub(crate) fn normal_form(cfg: &RunConfig) -> Result<Vec<VerificationReport>, SuiteError> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(11);
    let words: Vec<Vec<GenMode>> = (0..IDEMPOTENCE_WORDS).map(|_| random_word(&mut rng, 6)).collect();
    let triple = |rng: &mut ChaCha8Rng| [random_word(rng, 2), random_word(rng, 2), random_word(rng, 2)];
    let triples: Vec<_> = (0..ASSOC_TRIPLES).map(|_| triple(&mut rng)).collect();
    let symbolic_triples: Vec<_> = (0..SYMBOLIC_TRIPLES).map(|_| triple(&mut rng)).collect();
    let (s, t) = match &cfg.field {
        FieldMode::Point(s, t) => (s.clone(), t.clone()),
        FieldMode::Symbolic => (BigRational::from_integer(2.into()), BigRational::from_integer(3.into())),
    };
    let cx: Ctx<Rat> = point_ctx(cfg, &s, &t)?;
    let sym = symbolic_ctx(cfg);
    Ok(vec![idempotence(&cx, words), associativity(&cx, triples, "point"), associativity(&sym, symbolic_triples, "symbolic")])
}

/// Coassociativity on the generators and compatibility of the coproduct
/// with the cross and transport relations, at truncation 6.
pub(crate) fn hopf<C: Coeff>(cx: &Ctx<C>) -> Vec<VerificationReport> {
    enum Case {
        Gen(GenMode),
        Cross(i64, i64),
        Transport(i64, Side, i64),
    }
    let n = HOPF_TRUNCATION;
    let mut cases: Vec<Case> = Vec::new();
    for l in -2..=2 {
        cases.push(Case::Gen(GenMode::Upos(l)));
        cases.push(Case::Gen(GenMode::Uneg(l)));
    }
    for l in [-2, -1, 1, 2] {
        cases.push(Case::Gen(GenMode::Uzero(l)));
    }
    for l in 1..=2 {
        cases.push(Case::Gen(GenMode::ThetaPlus(l)));
        cases.push(Case::Gen(GenMode::ThetaMinus(l)));
    }
    for a in -2..=2 {
        for b in -2..=2 {
            cases.push(Case::Cross(a, b));
        }
    }
    for l in [-2, -1, 1, 2] {
        for m in -2..=2 {
            cases.push(Case::Transport(l, Side::PosGen, m));
            cases.push(Case::Transport(l, Side::NegGen, m));
        }
    }
    let cop = Coproduct::new(cx.pres.clone());
    let window = Window { lo: -n, hi: n };
    par_map(cases, |c| {
        let (what, cell, res) = match c {
            Case::Gen(g) => {
                let (r, d) = g.weight();
                (json!({"coassociative": g.to_string()}), Cell { r: Some(r), d: Some(d), window: Some([window.lo, window.hi]) }, cop.coassociative(g, n))
            }
            Case::Cross(a, b) => {
                let res = cross_instance(&cx.pres, a, b).and_then(|(l, r)| cop.compatible(&l, &r, n));
                (json!({"cross": [a, b]}), Cell { r: Some(0), d: Some(a + b), window: Some([window.lo, window.hi]) }, res)
            }
            Case::Transport(l, side, m) => {
                let (lhs, rhs) = transport_instance(l, side, m);
                let r = if side == Side::PosGen { 1 } else { -1 };
                let name = if side == Side::PosGen { "positive" } else { "negative" };
                (json!({"transport": [l, m], "side": name}), Cell { r: Some(r), d: Some(l + m), window: Some([window.lo, window.hi]) }, cop.compatible(&lhs, &rhs, n))
            }
        };
        match res {
            Ok(ok) => report("hopf", cell, ok, vec![what], ranks([("truncation", n)])),
            Err(e) => report("hopf", cell, false, vec![what, err(e)], ranks([("truncation", n)])),
        }
    })
}
