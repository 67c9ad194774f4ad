use std::sync::Arc;

use super::reduce::{in_spanning_family, slope_window_family};
use super::*;
use crate::kfield::{FieldElem, Params, Rat};
use crate::lattice::{enumerate_convex, is_minimal_pair, Region};
use crate::shuffle::ShuffleAlgebra;

type TE = TriangularElement<Rat>;

fn pres() -> Presentation<Rat> {
    Presentation::new(Arc::new(ShuffleAlgebra::new(Params::from_ints(2, 3).unwrap(), 6)))
}

fn win() -> Window {
    Window::new(-3, 3).unwrap()
}

fn seg(p: i64, q: i64) -> Segment {
    Segment::of(p, q)
}

fn word(modes: &[GenMode]) -> Word<Rat> {
    Word::new(modes.to_vec())
}

/// chi_1(z, w) and chi_{-1}(z, w) as (power of z, power of w, coefficient).
fn chis(p: &Params<Rat>) -> (Vec<(i64, i64, Rat)>, Vec<(i64, i64, Rat)>) {
    let (e1, e2) = (p.e1().clone(), p.e2().clone());
    let chi1 = vec![(3, 0, Rat::one()), (2, 1, e1.neg()), (1, 2, e2.clone()), (0, 3, Rat::from_int(-1))];
    // chi_{-1}(z, w) = -chi_1(w, z)
    let chim = chi1.iter().map(|(i, j, c)| (*j, *i, c.neg())).collect();
    (chi1, chim)
}

/// `sum lc a(n-i) b(m-j) = sum rc b(m-j) a(n-i)` in the presented algebra.
fn current_relation(
    pr: &Presentation<Rat>,
    lc: &[(i64, i64, Rat)],
    rc: &[(i64, i64, Rat)],
    a: &dyn Fn(i64) -> TE,
    b: &dyn Fn(i64) -> TE,
    n: i64,
    m: i64,
) -> bool {
    let mut lhs = TE::zero();
    for (i, j, c) in lc {
        lhs = lhs.add(&pr.multiply(&a(n - i), &b(m - j), win()).unwrap().scale(c));
    }
    let mut rhs = TE::zero();
    for (i, j, c) in rc {
        rhs = rhs.add(&pr.multiply(&b(m - j), &a(n - i), win()).unwrap().scale(c));
    }
    lhs == rhs
}

#[test]
fn cross_commutator_examples() {
    let pr = pres();
    let a1 = pr.algebra().params().alpha(1);
    assert!(pr.cross_commutator(0, 0).unwrap().is_empty());
    let expect: ZeroPoly<Rat> = pr.theta_poly(2).unwrap().into_iter().map(|(k, v)| (k, v.mul(&a1.inv().unwrap()).neg())).collect();
    assert_eq!(pr.cross_commutator(0, 2).unwrap(), expect);
    let expect: ZeroPoly<Rat> = pr.theta_poly(-2).unwrap().into_iter().map(|(k, v)| (k, v.mul(&a1.inv().unwrap()))).collect();
    assert_eq!(pr.cross_commutator(-3, 1).unwrap(), expect);
    for a in -3..=3 {
        assert!(pr.cross_commutator(a, -a).unwrap().is_empty());
    }
}

#[test]
fn theta_transport_examples() {
    let w: Word<Rat> = theta_transport(2, Side::PosGen, -1);
    assert_eq!((w.modes, w.coeff), (vec![GenMode::Upos(1)], Rat::one()));
    let w: Word<Rat> = theta_transport(-1, Side::PosGen, 0);
    assert_eq!((w.modes, w.coeff), (vec![GenMode::Upos(-1)], Rat::from_int(-1)));
    let w: Word<Rat> = theta_transport(1, Side::NegGen, 0);
    assert_eq!((w.modes, w.coeff), (vec![GenMode::Uneg(1)], Rat::from_int(-1)));
}

#[test]
fn transport_agrees_with_normalize() {
    let pr = pres();
    for l in [-2, -1, 1, 2] {
        for n in -1..=1 {
            for (side, g) in [(Side::PosGen, GenMode::Upos(n)), (Side::NegGen, GenMode::Uneg(n))] {
                let lhs = pr.commutator(&pr.generator(GenMode::Uzero(l)).unwrap(), &pr.generator(g).unwrap(), win()).unwrap();
                let t = theta_transport::<Rat>(l, side, n);
                assert_eq!(lhs, pr.normalize(&t).unwrap(), "l = {l}, {g}");
            }
        }
    }
}

#[test]
fn theta_u_conversion() {
    let pr = pres();
    let p = pr.algebra().params().clone();
    let tab = pr.theta_u_convert(Conversion::ThetaToU, 2).unwrap();
    assert_eq!(tab[0], ZeroPoly::from([(vec![1], p.alpha(1))]));
    let half = Rat::new(1, 2);
    assert_eq!(
        tab[1],
        ZeroPoly::from([(vec![1, 1], p.alpha(1).mul(&p.alpha(1)).mul(&half)), (vec![2], p.alpha(2))])
    );
    // u -> theta -> u is the identity
    let inv = pr.theta_u_convert(Conversion::UToTheta, 5).unwrap();
    for (i, poly) in inv.iter().enumerate() {
        let back = pr.theta_to_u(poly).unwrap();
        assert_eq!(back, ZeroPoly::from([(vec![i as i64 + 1], Rat::one())]), "l = {}", i + 1);
    }
}

#[test]
fn theta_minus_uses_negative_modes() {
    let pr = pres();
    let p = pr.theta_poly(-1).unwrap();
    assert_eq!(p, ZeroPoly::from([(vec![-1], pr.algebra().params().alpha(1))]));
    assert_eq!(pr.theta_poly(0).unwrap(), ZeroPoly::from([(vec![], Rat::one())]));
}

#[test]
fn normalize_single_generator() {
    let pr = pres();
    let e = pr.normalize(&word(&[GenMode::Upos(3)])).unwrap();
    let terms: Vec<_> = e.terms().collect();
    assert_eq!(terms.len(), 1);
    assert_eq!(terms[0].0, &TriKey { pos: vec![3], ..Default::default() });
    assert_eq!(e.weights(), vec![(1, 3)]);
}

#[test]
fn normalize_one_cross_step() {
    let pr = pres();
    for (a, b) in [(0, 0), (0, 2), (-3, 1), (1, 1)] {
        let lhs = pr.normalize(&word(&[GenMode::Uneg(b), GenMode::Upos(a)])).unwrap();
        let ordered = pr.normalize(&word(&[GenMode::Upos(a), GenMode::Uneg(b)])).unwrap();
        let corr = TE::from_zero(&pr.cross_commutator(b, a).unwrap());
        assert_eq!(lhs, ordered.add(&corr), "a = {a}, b = {b}");
    }
}

#[test]
fn unit_and_two_code_paths() {
    let pr = pres();
    let y = pr.normalize(&word(&[GenMode::Uneg(1), GenMode::ThetaPlus(1), GenMode::Upos(0)])).unwrap();
    assert_eq!(pr.multiply(&TE::one(), &y, win()).unwrap(), y);
    assert_eq!(pr.multiply(&y, &TE::one(), win()).unwrap(), y);
    let x = pr.multiply(&pr.generator(GenMode::Upos(0)).unwrap(), &pr.generator(GenMode::Uneg(0)).unwrap(), win()).unwrap();
    assert_eq!(x, pr.normalize(&word(&[GenMode::Upos(0), GenMode::Uneg(0)])).unwrap());
}

#[test]
fn multiply_without_witness_decomposes() {
    let pr = pres();
    let x = pr.normalize(&word(&[GenMode::Uneg(1), GenMode::Uneg(-1)])).unwrap();
    let y = pr.normalize(&word(&[GenMode::Upos(0), GenMode::Upos(1)])).unwrap();
    let with = pr.multiply(&x, &y, win()).unwrap();
    let without = pr.multiply(&x.clone().forget_witness(), &y.clone().forget_witness(), win()).unwrap();
    assert_eq!(with, without);
}

#[test]
fn associativity_on_mixed_triples() {
    use GenMode::*;
    let pr = pres();
    let triples = [
        (vec![Uneg(0), Uneg(1)], vec![Upos(1), Upos(-1)], vec![Upos(0)]),
        (vec![Uneg(-1)], vec![Uneg(2)], vec![Upos(0), Upos(1)]),
        (vec![ThetaMinus(1), Upos(2)], vec![Uneg(-2), Uzero(1)], vec![Upos(-1), ThetaPlus(2)]),
        (vec![Uzero(-2)], vec![Uneg(1), Upos(1)], vec![Uneg(0)]),
    ];
    for (a, b, c) in triples {
        let (x, y, z) = (pr.normalize(&word(&a)).unwrap(), pr.normalize(&word(&b)).unwrap(), pr.normalize(&word(&c)).unwrap());
        let l = pr.multiply(&pr.multiply(&x, &y, win()).unwrap(), &z, win()).unwrap();
        let r = pr.multiply(&x, &pr.multiply(&y, &z, win()).unwrap(), win()).unwrap();
        assert_eq!(l, r, "{a:?} {b:?} {c:?}");
        // and the concatenated word
        let mut all = a.clone();
        all.extend(b.iter().chain(&c));
        assert_eq!(l, pr.normalize(&word(&all)).unwrap());
    }
}

#[test]
fn normalize_is_idempotent() {
    use GenMode::*;
    let pr = pres();
    for w in [
        vec![Uneg(1), Upos(0), Upos(-1)],
        vec![Uneg(0), ThetaPlus(2), Uneg(-1), Upos(2)],
        vec![ThetaMinus(1), Upos(1), Uzero(2), Uneg(0)],
    ] {
        let t = pr.normalize(&word(&w)).unwrap();
        let again = pr.normalize_ordered(&pr.expand(&t, win()).unwrap()).unwrap();
        assert_eq!(again, t, "{w:?}");
    }
}

#[test]
fn zero_current_relations() {
    // chi_{e}(z,w) T_0^{+-}(z) T_e(w) = chi_{-e}(z,w) T_e(w) T_0^{+-}(z)
    let pr = pres();
    let (chi1, chim) = chis(pr.algebra().params());
    let plus = |k: i64| if k >= 0 { pr.theta_element(0, k).unwrap() } else { TE::zero() };
    let minus = |k: i64| if k <= 0 { pr.theta_element(0, k).unwrap() } else { TE::zero() };
    let up = |k: i64| pr.generator(GenMode::Upos(k)).unwrap();
    let un = |k: i64| pr.generator(GenMode::Uneg(k)).unwrap();
    for n in -3..=3 {
        for m in -1..=1 {
            assert!(current_relation(&pr, &chi1, &chim, &plus, &up, n, m), "plus, pos, {n} {m}");
            assert!(current_relation(&pr, &chim, &chi1, &plus, &un, n, m), "plus, neg, {n} {m}");
            assert!(current_relation(&pr, &chi1, &chim, &minus, &up, n, m), "minus, pos, {n} {m}");
            assert!(current_relation(&pr, &chim, &chi1, &minus, &un, n, m), "minus, neg, {n} {m}");
        }
    }
}

#[test]
fn quadratic_and_cubic_on_both_halves() {
    let pr = pres();
    let (chi1, chim) = chis(pr.algebra().params());
    let up = |k: i64| pr.generator(GenMode::Upos(k)).unwrap();
    let un = |k: i64| pr.generator(GenMode::Uneg(k)).unwrap();
    for n in -1..=2 {
        for m in -1..=1 {
            assert!(current_relation(&pr, &chi1, &chim, &up, &up, n, m));
            assert!(current_relation(&pr, &chim, &chi1, &un, &un, n, m));
        }
    }
    let w = win();
    for l in -1..=1 {
        let c = pr.commutator(&pr.commutator(&up(l + 1), &up(l - 1), w).unwrap(), &up(l), w).unwrap();
        assert!(c.is_zero());
        let c = pr.commutator(&pr.commutator(&un(l - 1), &un(l + 1), w).unwrap(), &un(l), w).unwrap();
        assert!(c.is_zero());
    }
}

#[test]
fn symbolic_cross_relation() {
    let alg = Arc::new(ShuffleAlgebra::new(Params::symbolic(), 3));
    let pr = Presentation::new(alg);
    let x = pr.generator(GenMode::Uneg(0)).unwrap();
    let y = pr.generator(GenMode::Upos(2)).unwrap();
    let c = pr.commutator(&x, &y, win()).unwrap();
    let a1 = pr.algebra().params().alpha(1);
    let expect = pr.theta_element(0, 2).unwrap().scale(&a1.inv().unwrap().neg());
    assert_eq!(c, expect);
    assert!(pr.commutator(&pr.generator(GenMode::Uneg(1)).unwrap(), &pr.generator(GenMode::Upos(-1)).unwrap(), win()).unwrap().is_zero());
    let _: &FieldElem = &a1;
}

#[test]
fn higher_rank_atoms() {
    let pr = pres();
    let a1 = pr.algebra().params().alpha(1);
    // [u_{1,1}, u_{1,0}] = theta_{(2,1)} / alpha_1 = u_{(2,1)}
    let c = pr.commutator(&pr.u_element(1, 1).unwrap(), &pr.u_element(1, 0).unwrap(), win()).unwrap();
    assert_eq!(c, pr.u_element(2, 1).unwrap());
    assert_eq!(pr.theta_element(2, 1).unwrap(), pr.u_element(2, 1).unwrap().scale(&a1));
}

#[test]
fn span_certify_examples() {
    let alg = Arc::new(ShuffleAlgebra::new(Params::from_ints(2, 3).unwrap(), 4));
    let red = Reducer::new(alg, true);
    let mut log = DerivationLog::default();
    let r = red.reduce_quadratic(1, -1, &mut log).unwrap();
    assert_eq!(log.len(), 0, "u(1,1)u(1,-1) is already in the family");
    assert!(r.contains_key(&(1, -1)));
    let r = red.reduce_quadratic(2, -2, &mut log).unwrap();
    assert_eq!(log.len(), 1);
    assert!(r.keys().all(|&(k, l)| in_spanning_family(k, l)));
    let mut log = DerivationLog::default();
    let r = red.reduce_quadratic(3, -3, &mut log).unwrap();
    assert!(log.len() >= 2);
    assert!(log.steps.iter().all(|s| s.verified));
    assert!(r.keys().all(|&(k, l)| in_spanning_family(k, l)));
    let mut log = DerivationLog::default();
    assert_eq!(red.reduce_quadratic(0, 0, &mut log).unwrap(), BTreeMap::from([((0, 0), Rat::one())]));
    // odd degree with a self-referential swap
    let r = red.reduce_quadratic(2, -1, &mut log).unwrap();
    assert!(r.keys().all(|&(k, l)| in_spanning_family(k, l)));
    let (log, out) = red.span_certify(0, Window::new(-2, 2).unwrap()).unwrap();
    assert_eq!(out.len(), 5);
    assert!(log.steps.iter().all(|s| s.verified));
}

#[test]
fn case_reduce_examples() {
    let alg = Arc::new(ShuffleAlgebra::new(Params::from_ints(2, 3).unwrap(), 4));
    let red = Reducer::new(alg, true);
    let p = Path::new(vec![seg(1, 1), seg(1, -1), seg(1, 0)]);
    let mut log = DerivationLog::default();
    red.case_reduce(&p, &mut log).unwrap();
    assert_eq!(log.steps[0].rule, Rule::CaseI);
    assert!(log.steps[0].area_after < log.steps[0].area_before);
    assert!(log.areas_decrease());

    let p = Path::new(vec![seg(1, 1), seg(1, -1)]);
    let mut log = DerivationLog::default();
    let out = red.case_reduce(&p, &mut log).unwrap();
    assert!(is_minimal_pair(seg(1, 1), seg(2, 0)));
    assert_eq!(log.steps.last().unwrap().rule, Rule::CaseIIb);
    assert!(out.keys().all(|q| crate::lattice::is_convex(q, Region::Gt).unwrap()));

    let p = Path::new(vec![seg(1, -1), seg(1, 1)]);
    let mut log = DerivationLog::default();
    assert_eq!(red.case_reduce(&p, &mut log).unwrap().len(), 1);
    assert!(log.is_empty());
}

#[test]
fn case_reduce_rank_three_reroutes() {
    let alg = Arc::new(ShuffleAlgebra::new(Params::from_ints(2, 3).unwrap(), 4));
    let red = Reducer::new(alg, true);
    for p in [
        Path::new(vec![seg(2, 3), seg(1, -3)]),
        Path::new(vec![seg(1, 2), seg(2, -2)]),
        Path::new(vec![seg(1, 2), seg(1, -2), seg(1, 0)]),
        Path::new(vec![seg(2, 1), seg(1, -1)]),
    ] {
        let mut log = DerivationLog::default();
        red.case_reduce(&p, &mut log).unwrap();
        assert!(log.areas_decrease(), "{p}");
        assert!(log.steps.iter().all(|s| s.verified));
    }
}

#[test]
fn certify_small_cells() {
    let alg = Arc::new(ShuffleAlgebra::new(Params::from_ints(2, 3).unwrap(), 4));
    let red = Reducer::new(alg, true);
    let w = Window::new(-2, 2).unwrap();
    let rep = isomorphism_certify(&red, 2, 0, w);
    assert!(rep.passed(), "{:?}", rep);
    let count = enumerate_convex(seg(2, 0), Region::Gt, w).unwrap().len() as i64;
    assert_eq!(rep.ranks["family"], count);
    assert_eq!(slope_window_family(2, 0, w).unwrap().len() as i64, count);
    assert!(isomorphism_certify(&red, 1, 5, w).passed());
    let rep = isomorphism_certify(&red, 3, 1, w);
    assert!(rep.passed(), "{:?}", rep.steps.last());
    assert_eq!(rep.ranks["rank"], rep.ranks["family"]);
}
