//! The defining relations of the positive and negative halves.

use std::collections::BTreeMap;

use ehall_core::kfield::Coeff;
use ehall_core::lattice::Window;
use ehall_core::par::par_map;
use ehall_core::presentation::{Cell, GenMode, VerificationReport, Word};
use ehall_core::shuffle::SymLaurent;
use serde_json::json;

use super::{ranks, report, Ctx};
use crate::eval::Evaluator;
use crate::expr::parse;

/// `[[u(1,l+1), u(1,l-1)], u(1,l)]` and its mirror in the negative half,
/// evaluated from their text form.
pub(crate) fn cubic<C: Coeff>(cx: &Ctx<C>) -> Vec<VerificationReport> {
    let cases: Vec<(i64, i64)> = (-2..=2).flat_map(|l| [(1, l), (-1, l)]).collect();
    par_map(cases, |(eps, l)| {
        let text = if eps == 1 {
            format!("[[u(1,{}), u(1,{})], u(1,{l})]", l + 1, l - 1)
        } else {
            format!("[[u(-1,{}), u(-1,{})], u(-1,{l})]", l - 1, l + 1)
        };
        let ev = Evaluator { pres: &cx.pres, window: cx.cfg.window, rank_bound: cx.cfg.rank_bound };
        let cell = Cell::new(3 * eps, 3 * l, cx.cfg.window);
        match parse(&text).map_err(|e| e.to_string()).and_then(|e| ev.element(&e).map_err(|e| e.to_string())) {
            Ok(v) => report("cubic", cell, v.is_zero(), vec![json!({"expr": text, "value": v.to_string()})], ranks([("terms", v.len() as i64)])),
            Err(e) => report("cubic", cell, false, vec![json!({"expr": text, "error": e})], Default::default()),
        }
    })
}

/// `chi_1(z, w)` as (power of z, power of w, coefficient).
fn chi1<C: Coeff>(cx: &Ctx<C>) -> Vec<(i64, i64, C)> {
    let p = cx.alg().params();
    vec![(3, 0, C::one()), (2, 1, p.e1().neg()), (1, 2, p.e2().clone()), (0, 3, C::from_int(-1))]
}

/// The coefficient of `z^n w^m` in `chi_e(z,w) T_e(z) T_e(w) = -chi_e(w,z) T_e(w) T_e(z)`
/// for both signs `e`, checked in the rank-2 shuffle algebra. Negative
/// modes go through the mirror, which reverses words.
pub(crate) fn quadratic<C: Coeff>(cx: &Ctx<C>) -> Vec<VerificationReport> {
    let chi = chi1(cx);
    // chi_{-1}(z, w) = -chi_1(w, z)
    let chim: Vec<(i64, i64, C)> = chi.iter().map(|(i, j, c)| (*j, *i, c.neg())).collect();
    let cases: Vec<(i64, i64)> = (-3..=3).flat_map(|n| (-3..=3).map(move |m| (n, m))).collect();
    let alg = cx.alg();
    par_map(cases, |(n, m)| {
        // sum lc a(n-i) a(m-j) - sum rc a(m-j) a(n-i), as words in the positive half
        let side = |lc: &[(i64, i64, C)], rc: &[(i64, i64, C)], mirror: bool| {
            let mut acc = SymLaurent::zero(2);
            for (i, j, c) in lc {
                let w = [(n - i) as i32, (m - j) as i32];
                let w = if mirror { [w[1], w[0]] } else { w };
                acc = acc.add(&alg.word_image(&w).scale(c));
            }
            for (i, j, c) in rc {
                let w = [(m - j) as i32, (n - i) as i32];
                let w = if mirror { [w[1], w[0]] } else { w };
                acc = acc.sub(&alg.word_image(&w).scale(c));
            }
            acc
        };
        let pos = side(&chi, &chim, false);
        let neg = side(&chim, &chi, true);
        let cell = Cell::new(2, n + m - 3, Window { lo: -3, hi: 3 });
        report(
            "quadratic",
            cell,
            pos.is_zero() && neg.is_zero(),
            vec![json!({"n": n, "m": m, "positive_defect": pos.len(), "negative_defect": neg.len()})],
            ranks([("positive_defect", pos.len() as i64), ("negative_defect", neg.len() as i64)]),
        )
    })
}

/// A noncommutative polynomial with integer coefficients in the modes of
/// one current.
type NcPoly = BTreeMap<Vec<i64>, i64>;

fn nc_add(p: &mut NcPoly, w: Vec<i64>, c: i64) {
    let e = p.entry(w.clone()).or_insert(0);
    *e += c;
    if *e == 0 {
        p.remove(&w);
    }
}

fn nc_comm(a: &NcPoly, b: &NcPoly) -> NcPoly {
    let mut out = NcPoly::new();
    for (x, c) in a {
        for (y, d) in b {
            nc_add(&mut out, [x.as_slice(), y].concat(), c * d);
            nc_add(&mut out, [y.as_slice(), x].concat(), -c * d);
        }
    }
    out
}

fn nc_var(l: i64) -> NcPoly {
    NcPoly::from([(vec![l], 1)])
}

/// Laurent polynomial in `z, y, w` as exponent triples.
type Poly3 = BTreeMap<[i64; 3], i64>;

fn p3_mul(a: &Poly3, b: &Poly3) -> Poly3 {
    let mut out = Poly3::new();
    for (x, c) in a {
        for (y, d) in b {
            let e = [x[0] + y[0], x[1] + y[1], x[2] + y[2]];
            *out.entry(e).or_insert(0) += c * d;
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

/// `Res_{z,y,w} P(z,y,w) T(z) T(y) T(w)` with `T(z) = sum_l u_l z^l` and
/// `Res_z` taking the coefficient of `z^-1`: the monomial `z^a y^b w^c`
/// contributes the word `u_{-1-a} u_{-1-b} u_{-1-c}`.
fn residue_words(p: &Poly3) -> NcPoly {
    let mut out = NcPoly::new();
    for (e, c) in p {
        nc_add(&mut out, e.iter().map(|a| -1 - a).collect(), *c);
    }
    out
}

/// `(zyw)^m (z + w)(y^2 - zw)`.
fn residue_kernel(m: i64) -> Poly3 {
    let scale = Poly3::from([([m, m, m], 1)]);
    let sum = Poly3::from([([1, 0, 0], 1), ([0, 0, 1], 1)]);
    let diff = Poly3::from([([0, 2, 0], 1), ([1, 0, 1], -1)]);
    p3_mul(&p3_mul(&scale, &sum), &diff)
}

/// The residue form of the cubic relation, expanded into modes, against
/// the bracket form: the expansion must be `+-` the bracket at the mode
/// fixed by the degree, and both must vanish in the algebra.
pub(crate) fn residue<C: Coeff>(cx: &Ctx<C>) -> Vec<VerificationReport> {
    let cases: Vec<(i64, i64)> = (-2..=1).flat_map(|m| [(m, 1), (m, -1)]).collect();
    par_map(cases, |(m, eps)| {
        let res = residue_words(&residue_kernel(m));
        let total: i64 = res.keys().next().map_or(0, |w| w.iter().sum());
        let l = total.div_euclid(3);
        let bracket = if eps == 1 {
            nc_comm(&nc_comm(&nc_var(l + 1), &nc_var(l - 1)), &nc_var(l))
        } else {
            nc_comm(&nc_comm(&nc_var(l - 1), &nc_var(l + 1)), &nc_var(l))
        };
        let negated: NcPoly = bracket.iter().map(|(w, c)| (w.clone(), -c)).collect();
        let sign = if res == bracket {
            1
        } else if res == negated {
            -1
        } else {
            0
        };
        let gen = |k: i64| if eps == 1 { GenMode::Upos(k) } else { GenMode::Uneg(k) };
        let mut value = ehall_core::presentation::TriangularElement::zero();
        let mut error = None;
        for (w, c) in &res {
            let word = Word { modes: w.iter().map(|&k| gen(k)).collect(), coeff: C::from_int(*c) };
            match cx.pres.normalize(&word) {
                Ok(v) => value = value.add(&v),
                Err(e) => error = Some(e.to_string()),
            }
        }
        let ok = sign != 0 && total % 3 == 0 && error.is_none() && value.is_zero();
        let words: Vec<_> = res.iter().map(|(w, c)| json!({"word": w, "coeff": c})).collect();
        let mut step = json!({"m": m, "epsilon": eps, "l": l, "expansion": words, "value": value.to_string()});
        if let Some(e) = error {
            step["error"] = json!(e);
        }
        report("residue", Cell::new(3 * eps, 3 * l, cx.cfg.window), ok, vec![step], ranks([("sign", sign), ("words", res.len() as i64)]))
    })
}
