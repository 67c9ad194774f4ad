use std::sync::Arc;

use super::*;
use crate::kfield::{Params, Rat};
use crate::shuffle::ShuffleAlgebra;

fn pres() -> Arc<Presentation<Rat>> {
    Arc::new(Presentation::new(Arc::new(ShuffleAlgebra::new(Params::from_ints(2, 3).unwrap(), 4))))
}

fn zero_part(p: &Presentation<Rat>, k: i64) -> OrderedSum<Rat> {
    p.theta_poly(k).unwrap().into_iter().map(|(zero, c)| (Ordered { zero, ..Default::default() }, c)).collect()
}

/// Sum of pure tensors given factor by factor.
fn tensor(n: i64, parts: Vec<(OrderedSum<Rat>, OrderedSum<Rat>)>) -> TruncatedTensor<Rat> {
    let mut t = TruncatedTensor::zero(2, n);
    for (a, b) in parts {
        for (x, c) in &a {
            for (y, d) in &b {
                tt_add(&mut t.terms, vec![x.clone(), y.clone()], c.mul(d));
            }
        }
    }
    t
}

#[test]
fn theta_one_is_primitive_like() {
    let p = pres();
    let d = Coproduct::new(p.clone());
    let t = d.generator(GenMode::ThetaPlus(1), 3).unwrap();
    let one = single(Ordered::default());
    let expect = tensor(3, vec![(zero_part(&p, 1), one.clone()), (one, zero_part(&p, 1))]);
    assert!(t.same_as(&expect, &p));
    assert_eq!(t.raw_terms(), 2);
}

#[test]
fn u_one_zero_at_two() {
    let p = pres();
    let d = Coproduct::new(p.clone());
    let t = d.generator(GenMode::Upos(0), 2).unwrap();
    let one = || single(Ordered::default());
    let expect = tensor(
        2,
        vec![
            (single(pos(0)), one()),
            (one(), single(pos(0))),
            (zero_part(&p, 1), single(pos(-1))),
            (zero_part(&p, 2), single(pos(-2))),
        ],
    );
    assert!(t.same_as(&expect, &p));
    assert_eq!(t.raw_terms(), 4);
    assert!(t.has_tail());
}

#[test]
fn unit_maps_to_unit() {
    let p = pres();
    let d = Coproduct::new(p.clone());
    let t = d.word(&Word::new(vec![]), 2).unwrap();
    assert!(t.same_as(&TruncatedTensor::one(2, 2), &p));
    assert!(!t.has_tail());
}

#[test]
fn theta_group_like_term_count() {
    let p = pres();
    let d = Coproduct::new(p.clone());
    for l in 1..=4 {
        for g in [GenMode::ThetaPlus(l), GenMode::ThetaMinus(l)] {
            let t = d.generator(g, 4).unwrap();
            assert_eq!(t.raw_terms(), (l + 1) as usize);
            // the same from the primitive zero modes
            let w = d.word(&Word::new(vec![g]), 4).unwrap();
            assert!(t.same_as(&w, &p), "{g}");
        }
    }
}

#[test]
fn truncation_records_drops() {
    let p = pres();
    let d = Coproduct::new(p.clone());
    let t = d.generator(GenMode::Upos(2), 1).unwrap();
    assert!(t.dropped() > 0);
    let expect = tensor(1, vec![(zero_part(&p, 1), single(pos(1)))]);
    assert!(t.same_as(&expect, &p));
    assert!(t.terms().all(|(k, _)| k.iter().all(|f| f.weight().1.abs() <= 1)));
}

#[test]
fn coassociative_on_small_generators() {
    let d = Coproduct::new(pres());
    for g in [GenMode::Upos(0), GenMode::Uneg(1), GenMode::ThetaPlus(2), GenMode::ThetaMinus(1), GenMode::Uzero(-1)] {
        assert!(d.coassociative(g, 3).unwrap(), "{g}");
    }
}

#[test]
fn compatible_with_cross_and_transport() {
    let p = pres();
    let d = Coproduct::new(p.clone());
    for a in -1..=1 {
        for b in -1..=1 {
            let (l, r) = cross_instance(&p, a, b).unwrap();
            assert!(d.compatible(&l, &r, 3).unwrap(), "cross {a} {b}");
        }
    }
    for l in [-2, -1, 1, 2] {
        for side in [Side::PosGen, Side::NegGen] {
            let (x, y) = transport_instance::<Rat>(l, side, 0);
            assert!(d.compatible(&x, &y, 3).unwrap(), "transport {l} {side:?}");
        }
    }
}

#[test]
fn literal_minus_formula_breaks_cross_relation() {
    let p = pres();
    let d = Coproduct::literal_minus(p.clone());
    let (l, r) = cross_instance(&p, 0, 1).unwrap();
    assert!(!d.compatible(&l, &r, 3).unwrap());
}

#[test]
fn element_matches_word() {
    let p = pres();
    let d = Coproduct::new(p.clone());
    let w = Word::new(vec![GenMode::Uneg(0), GenMode::Upos(1)]);
    let x = p.normalize(&w).unwrap();
    assert!(d.element(&x, 3).unwrap().same_as(&d.word(&w, 3).unwrap(), &p));
}

#[test]
fn apply_out_of_range() {
    let d = Coproduct::new(pres());
    let t = TruncatedTensor::<Rat>::one(2, 1);
    assert_eq!(d.apply_at(&t, 2, 1).unwrap_err(), HopfError::Position { pos: 2, arity: 2 });
}

#[test]
fn json_shape() {
    let p = pres();
    let d = Coproduct::new(p.clone());
    let v = d.generator(GenMode::ThetaPlus(1), 2).unwrap().to_json(&p);
    assert_eq!(v["arity"], 2);
    assert_eq!(v["terms"].as_array().unwrap().len(), 2);
    assert_eq!(v["terms"][0]["factors"].as_array().unwrap().len(), 2);
}
