use super::multi::shuffle_naive;
use super::*;
use crate::kfield::{alpha, parse_k, LaurentPoly2};
use crate::lattice::Segment;

fn at(s: (i64, i64), t: (i64, i64)) -> ShuffleAlgebra<Rat> {
    let p = Params::specialized(BigRational::new(s.0.into(), s.1.into()), BigRational::new(t.0.into(), t.1.into())).unwrap();
    ShuffleAlgebra::new(p, 6)
}

fn z<C: Coeff>(d: i32) -> SymLaurent<C> {
    SymLaurent::monomial(d)
}

fn seg(p: i64, q: i64) -> Segment {
    Segment::of(p, q)
}

#[test]
fn zeta_numerator_coefficients() {
    let k = zeta_kernel();
    assert_eq!(k.numerator[1], parse_k("-(s + t + 1/(s*t))").unwrap());
    assert_eq!(k.numerator[2], parse_k("s*t + 1/s + 1/t").unwrap());
    // at s = t = 1 the numerator is (1 - z)^3
    let one = BigRational::from_integer(1.into());
    let spec: Vec<BigRational> = k.numerator.iter().map(|c| c.specialize(&one, &one).unwrap()).collect();
    let expect: Vec<BigRational> = [1, -3, 3, -1].iter().map(|&v| BigRational::from_integer(v.into())).collect();
    assert_eq!(spec, expect);
}

#[test]
fn zeta_numerator_homogenized_is_chi_one_swapped() {
    // w^3 num(z/w) = chi_1(w, z) = (w - s z)(w - t z)(w - z/(st))
    let k = zeta_kernel();
    let (s, t) = (FieldElem::sigma(), FieldElem::sigmabar());
    let qi = s.mul(&t).inv().unwrap();
    // coefficients of z^i w^(3-i) in chi_1(w, z)
    let lin = |c: &FieldElem| [FieldElem::one(), c.neg()];
    let mul = |a: &[FieldElem], b: &[FieldElem]| {
        let mut out = vec![FieldElem::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                out[i + j] = out[i + j].add(&x.mul(y));
            }
        }
        out
    };
    let chi = mul(&mul(&lin(&s), &lin(&t)), &lin(&qi));
    assert_eq!(chi, k.numerator.to_vec());
}

#[test]
fn schur_product_matches_naive_sum() {
    let alg = at((2, 1), (3, 1));
    let cases: Vec<(SymLaurent<Rat>, SymLaurent<Rat>)> = vec![
        (z(0), z(1)),
        (z(-1), z(2)),
        (SymLaurent::schur(vec![1, -1], Rat::new(2, 3)), z(0)),
        (z(1), SymLaurent::from_terms(2, [(vec![0, 0], Rat::one()), (vec![2, -1], Rat::new(-1, 1))])),
        (SymLaurent::schur(vec![1, 0], Rat::one()), SymLaurent::schur(vec![0, -1], Rat::one())),
        (z(2), SymLaurent::schur(vec![0, 0, -1], Rat::new(1, 5))),
    ];
    for (h, f) in cases {
        let fast = alg.mul(&h, &f);
        let naive = shuffle_naive(alg.params(), &h.to_monomials().unwrap(), &f.to_monomials().unwrap()).unwrap();
        assert_eq!(SymLaurent::from_monomials(&naive).unwrap(), fast, "h = {h}, f = {f}");
    }
}

#[test]
fn schur_product_matches_naive_sum_symbolically() {
    let alg = ShuffleAlgebra::new(Params::symbolic(), 4);
    let (h, f) = (z::<FieldElem>(1), z::<FieldElem>(-1));
    let fast = alg.mul(&h, &f);
    let naive = shuffle_naive(alg.params(), &h.to_monomials().unwrap(), &f.to_monomials().unwrap()).unwrap();
    assert_eq!(SymLaurent::from_monomials(&naive).unwrap(), fast);
}

#[test]
fn psi_matches_naive_symmetrization() {
    let alg = at((-3, 2), (5, 1));
    let polys = vec![
        MultiLaurent::monomial(vec![3], Rat::one()),
        MultiLaurent::one(2),
        MultiLaurent::from_terms(3, [(vec![1, 0, -1], Rat::new(2, 1)), (vec![0, 2, 0], Rat::new(-1, 3))]),
        MultiLaurent::from_terms(4, [(vec![0, 1, 0, -1], Rat::one())]),
    ];
    for p in polys {
        let fast = symmetrize_psi(alg.params(), &p);
        let naive = symmetrize_naive(alg.params(), &p).unwrap();
        assert_eq!(fast.to_monomials().unwrap(), naive);
    }
}

#[test]
fn unit_and_associativity() {
    let alg = at((2, 1), (3, 1));
    let f = alg.mul(&z(1), &z(-1));
    assert_eq!(alg.mul(&SymLaurent::one(), &f), f);
    let left = alg.mul(&alg.mul(&z(0), &z(1)), &z(-1));
    let right = alg.mul(&z(0), &alg.mul(&z(1), &z(-1)));
    assert_eq!(left, right);
}

#[test]
fn cubic_relation_at_a_point() {
    let alg = at((2, 1), (3, 1));
    for l in -2..=2 {
        let inner = alg.commutator(&z(l + 1), &z(l - 1));
        assert!(alg.commutator(&inner, &z(l)).is_zero(), "l = {l}");
    }
}

/// `sum chi_1-coefficients u_{N-i} u_{M-j}` minus the mirrored side.
fn quadratic_defect<C: Coeff>(alg: &ShuffleAlgebra<C>, n: i32, m: i32) -> SymLaurent<C> {
    let p = alg.params();
    let left = [(3, 0, C::one()), (2, 1, p.e1().neg()), (1, 2, p.e2().clone()), (0, 3, C::one().neg())];
    let right = [(3, 0, C::one()), (2, 1, p.e2().neg()), (1, 2, p.e1().clone()), (0, 3, C::one().neg())];
    let mut acc = SymLaurent::zero(2);
    for (i, j, c) in left {
        acc = acc.add(&alg.mul(&z(n - i), &z(m - j)).scale(&c));
    }
    for (i, j, c) in right {
        acc = acc.sub(&alg.mul(&z(m - j), &z(n - i)).scale(&c));
    }
    acc
}

#[test]
fn quadratic_relation_in_modes() {
    let alg = at((2, 1), (3, 1));
    for n in -3..=3 {
        for m in -3..=3 {
            assert!(quadratic_defect(&alg, n, m).is_zero(), "n = {n}, m = {m}");
        }
    }
}

#[test]
fn quadratic_relation_symbolic_sample() {
    let alg = ShuffleAlgebra::new(Params::symbolic(), 3);
    assert!(quadratic_defect(&alg, 1, -2).is_zero());
}

#[test]
fn degree_one_anchor() {
    let alg = at((2, 1), (-3, 2));
    for x in [seg(2, 1), seg(2, -1), seg(3, 1), seg(3, 2), seg(4, -1)] {
        let theta = alg.theta_image(x).unwrap();
        assert_eq!(theta, alg.u_image(x).unwrap().scale(&alg.params().alpha(1)));
        let (a, b) = minimal_paths(x).unwrap()[0];
        assert_eq!(theta, alg.theta_from_pair(a, b).unwrap());
    }
}

#[test]
fn theta_second_order_term() {
    let alg = at((2, 1), (3, 1));
    let x0 = seg(1, 0);
    let x = seg(2, 0);
    let u1 = alg.u_image(x0).unwrap();
    let a1 = alg.params().alpha(1);
    let expect = alg
        .u_image(x)
        .unwrap()
        .scale(&alg.params().alpha(2))
        .add(&alg.mul(&u1, &u1).scale(&a1.mul(&a1).mul(&Rat::new(1, 2))));
    assert_eq!(alg.theta_image(x).unwrap(), expect);
    // and theta_x is the commutator of either minimal path
    for (a, b) in minimal_paths(x).unwrap() {
        assert_eq!(alg.theta_from_pair(a, b).unwrap(), expect);
    }
}

#[test]
fn minimal_path_independence_small() {
    let alg = at((2, 1), (3, 1));
    for (r, d) in [(2, 0), (3, 0), (3, 1), (4, 0), (4, 2), (3, -2)] {
        let x = seg(r, d);
        let pairs = minimal_paths(x).unwrap();
        let first = alg.theta_from_pair(pairs[0].0, pairs[0].1).unwrap();
        for &(a, b) in &pairs[1..] {
            assert_eq!(alg.theta_from_pair(a, b).unwrap(), first, "z = {x}");
        }
    }
}

#[test]
fn relation_two_beyond_minimal_paths() {
    // [u_y, u_x] = eps_{x,y} theta_{x+y} / alpha_1 for deg x = 1 and an
    // empty triangle, with y of rank 2.
    let alg = at((2, 1), (3, 1));
    let a1 = alg.params().alpha(1);
    for (x, y) in [(seg(1, 0), seg(2, 1)), (seg(1, 1), seg(2, 1)), (seg(1, -1), seg(2, -1))] {
        let Ok(0) = crate::lattice::interior_count(x, y) else { continue };
        if y.deg() != 1 && x.deg() != 1 {
            continue;
        }
        let eps = crate::lattice::epsilon(x, y).unwrap();
        let lhs = alg.commutator(&alg.u_image(y).unwrap(), &alg.u_image(x).unwrap());
        let rhs = alg.theta_image(x.plus(y).unwrap()).unwrap().scale(&a1.inv().unwrap().mul_int(eps));
        assert_eq!(lhs, rhs, "x = {x}, y = {y}");
    }
}

#[test]
fn collinear_images_commute() {
    let alg = at((2, 1), (3, 1));
    let pairs = [(seg(1, 0), seg(2, 0)), (seg(1, 1), seg(2, 2)), (seg(2, 1), seg(2, 1)), (seg(1, 0), seg(3, 0))];
    for (a, b) in pairs {
        let (ua, ub) = (alg.u_image(a).unwrap(), alg.u_image(b).unwrap());
        assert!(alg.commutator(&ua, &ub).is_zero(), "{a} {b}");
    }
}

#[test]
fn path_image_examples() {
    let alg = at((2, 1), (3, 1));
    let p = Path::new(vec![seg(1, 0), seg(1, 1)]);
    assert_eq!(alg.path_image(&p).unwrap(), alg.mul(&z(0), &z(1)));
    assert_eq!(alg.path_image(&Path::empty()).unwrap(), SymLaurent::one());
}

#[test]
fn rank_bound_is_enforced() {
    let alg = ShuffleAlgebra::new(Params::specialized(BigRational::from_integer(2.into()), BigRational::from_integer(3.into())).unwrap(), 2);
    assert!(matches!(alg.u_image(seg(3, 0)), Err(ShuffleError::RankBoundExceeded { .. })));
    assert!(matches!(alg.u_image(seg(-1, 0)), Err(ShuffleError::Lattice(_))));
}

#[test]
fn decomposition_examples() {
    let alg = at((2, 1), (3, 1));
    let w = Window::new(-1, 2).unwrap();
    assert_eq!(alg.decompose_to_words(&z(3), Window::new(3, 3).unwrap()).unwrap(), vec![(vec![3], Rat::one())]);
    let f = alg.u_image(seg(2, 1)).unwrap();
    let words = alg.decompose_to_words(&f, w).unwrap();
    let mut back = SymLaurent::zero(2);
    for (word, c) in &words {
        back = back.add(&alg.word_image(word).scale(c));
    }
    assert_eq!(&back, f.as_ref());
    assert!(matches!(
        alg.decompose_to_words(&z(1), Window::new(0, 0).unwrap()),
        Err(ShuffleError::WindowExhausted { .. })
    ));
}

#[test]
fn symbolic_decomposition_round_trip() {
    let alg = ShuffleAlgebra::new(Params::symbolic(), 3);
    let f = alg.u_image(seg(2, 1)).unwrap();
    let words = alg.decompose_to_words(&f, Window::new(0, 1).unwrap()).unwrap();
    let mut back = SymLaurent::zero(2);
    for (word, c) in &words {
        back = back.add(&alg.word_image(word).scale(c));
    }
    assert_eq!(&back, f.as_ref());
}

#[test]
fn symbolic_images_specialize_to_point_images() {
    let sym = ShuffleAlgebra::new(Params::symbolic(), 3);
    let pt = at((2, 1), (3, 1));
    let (s, t) = pt.params().point();
    for x in [seg(2, 0), seg(2, 1), seg(3, 1)] {
        let a = sym.u_image(x).unwrap().try_map(|c| c.specialize(&s, &t).map(Rat)).unwrap();
        assert_eq!(&a, pt.u_image(x).unwrap().as_ref());
    }
}

#[test]
fn alpha_one_is_a_polynomial_in_e1_e2() {
    let p = Params::symbolic();
    assert_eq!(alpha(1), p.e2().sub(p.e1()));
    let _ = LaurentPoly2::one();
}
