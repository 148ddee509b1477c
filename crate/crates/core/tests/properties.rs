mod common;

use std::collections::BTreeMap;

use num_bigint::BigInt;
use proptest::prelude::*;

use valq::exactalg::{tower_reduce, Frac, Level, MPoly, Scalar, TowerElem, UPoly};
use valq::nagata::{change_of_variable, is_nagata};
use valq::newton::newton_run;
use valq::ordgroup::{hull, ok_stabilize, GroupValue, Stabilization};
use valq::valring::{Locality, ValuedRing};

const NV: usize = 2;

fn ring2() -> ValuedRing {
    ValuedRing::new(vec!["u".into(), "t".into()], vec![vec![1, 0], vec![0, 1]]).unwrap()
}

fn mpoly_s(max_terms: usize, max_deg: u32) -> impl Strategy<Value = MPoly> {
    prop::collection::vec(((0..=max_deg, 0..=max_deg), -6i64..=6), 0..=max_terms).prop_map(|ts| {
        MPoly::from_terms(NV, ts.into_iter().map(|((a, b), c)| (vec![a, b], BigInt::from(c))))
    })
}

/// Elements of R: denominators with a nonzero constant term.
fn local_s() -> impl Strategy<Value = Frac> {
    (mpoly_s(4, 3), mpoly_s(3, 2), 1i64..=4).prop_map(|(n, d, c)| {
        let d = d.sub(&MPoly::constant(NV, d.constant_term())).add(&MPoly::from_int(NV, c));
        Frac::new(n, d).unwrap()
    })
}

fn frac_s() -> impl Strategy<Value = Frac> {
    (mpoly_s(4, 3), mpoly_s(3, 2)).prop_filter_map("zero denominator", |(n, d)| Frac::new(n, d).ok())
}

/// Product by the definition, independent of the library's multiplication.
fn naive_mul(a: &MPoly, b: &MPoly) -> BTreeMap<Vec<u32>, BigInt> {
    let mut acc: BTreeMap<Vec<u32>, BigInt> = BTreeMap::new();
    for (ea, ca) in a.terms() {
        for (eb, cb) in b.terms() {
            let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            *acc.entry(e).or_default() += ca * cb;
        }
    }
    acc.retain(|_, c| *c != BigInt::from(0));
    acc
}

fn as_map(p: &MPoly) -> BTreeMap<Vec<u32>, BigInt> {
    p.terms().map(|(e, c)| (e.clone(), c.clone())).collect()
}

fn gv_s(rank: usize) -> impl Strategy<Value = GroupValue> {
    prop::collection::vec(-20i64..=20, rank).prop_map(GroupValue::new)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn mpoly_product_matches_definition(a in mpoly_s(8, 5), b in mpoly_s(8, 5)) {
        prop_assert_eq!(as_map(&a.mul(&b)), naive_mul(&a, &b));
    }

    #[test]
    fn frac_field_axioms(a in frac_s(), b in frac_s(), c in frac_s()) {
        prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert_eq!(a.add(&b), b.add(&a));
        prop_assert!(a.sub(&a).is_zero());
        if !a.is_zero() {
            prop_assert!(a.mul(&a.inv().unwrap()).is_one());
        }
    }

    #[test]
    fn valuation_axioms(a in frac_s(), b in frac_s()) {
        let r = ring2();
        prop_assert_eq!(r.value_of(&a.mul(&b)), r.value_of(&a).add(&r.value_of(&b)));
        let (va, vb) = (r.value_of(&a), r.value_of(&b));
        let vs = r.value_of(&a.add(&b));
        prop_assert!(vs >= va.clone().min(vb.clone()));
        if va != vb {
            prop_assert_eq!(vs, va.min(vb));
        }
    }

    #[test]
    fn truncated_difference_value(a in frac_s(), b in frac_s()) {
        let r = ring2();
        prop_assert_eq!(r.value_of_difference(&a, &b), r.value_of(&a.sub(&b)));
        prop_assert!(r.value_of_difference(&a, &a).is_inf());
    }

    #[test]
    fn locality_matches_value(a in local_s()) {
        let r = ring2();
        let v = r.value_of(&a);
        let want = if v.is_positive() || v.is_inf() { Locality::MaximalIdeal } else { Locality::Unit };
        prop_assert_eq!(r.is_local(&a), want);
    }

    #[test]
    fn residue_map_is_a_ring_morphism(a in local_s(), b in local_s()) {
        let r = ring2();
        let q = r.quotient(hull(&GroupValue::new(vec![0, 1])).unwrap()).unwrap();
        let (ra, rb) = (q.reduce(&a).unwrap(), q.reduce(&b).unwrap());
        prop_assert_eq!(q.reduce(&a.mul(&b)).unwrap(), ra.mul(&rb));
        prop_assert_eq!(q.reduce(&a.add(&b)).unwrap(), ra.add(&rb));
        prop_assert_eq!(q.reduce(&q.lift(&ra)).unwrap(), ra);
    }

    #[test]
    fn taylor_expansion(cs in prop::collection::vec(frac_s(), 1..5), a in frac_s(), x in frac_s()) {
        let like = Frac::zero_n(NV);
        let h = UPoly::new(cs, &like);
        let s = h.shift(&a);
        for m in 0..=h.degree().unwrap_or(0) {
            prop_assert_eq!(s.coeff(m), h.hasse(m).eval(&a));
        }
        prop_assert_eq!(s.eval(&x), h.eval(&x.add(&a)));
        let sum = h.taylor().iter().enumerate().fold(like.clone(), |acc, (m, hm)| {
            acc.add(&hm.eval(&a).mul(&x.pow(m as u32)))
        });
        prop_assert_eq!(sum, h.eval(&a.add(&x)));
    }

    #[test]
    fn change_of_variable_keeps_nagata(c in local_s(), lin in local_s(), alpha in local_s(), top in local_s()) {
        let r = ring2();
        let in_m = |x: &Frac| x.mul(&Frac::var(NV, 1));
        let unit = lin.mul(&lin).add(&Frac::one_n(NV)).add(&in_m(&lin));
        prop_assume!(r.is_local(&unit) == Locality::Unit);
        let like = Frac::zero_n(NV);
        let f = UPoly::new(vec![in_m(&c), unit, in_m(&top), Frac::one_n(NV)], &like);
        let f = is_nagata(&r, &f).unwrap();
        let g = change_of_variable(&r, &f, &in_m(&alpha)).unwrap();
        prop_assert_eq!(g.poly().eval(&Frac::zero_n(NV)), f.poly().eval(&in_m(&alpha)));
        prop_assert!(change_of_variable(&r, &f, &Frac::one_n(NV)).is_err());
    }

    #[test]
    fn newton_invariants_on_random_quadratics(c in mpoly_s(3, 2), k in 1i64..=3) {
        let r = ring2();
        let c = Frac::from_poly(c.sub(&MPoly::constant(NV, c.constant_term())));
        prop_assume!(!c.is_zero());
        let like = Frac::zero_n(NV);
        let f = UPoly::new(vec![c.neg(), Frac::int(NV, k), Frac::one_n(NV)], &like);
        let f = is_nagata(&r, &f).unwrap();
        let t = newton_run(&r, &f, 4).unwrap();
        for (i, fl) in t.flags.iter().enumerate() {
            prop_assert!(fl.all_pass(), "step {} flags {}", i, fl);
        }
        for w in t.nu_delta.windows(2) {
            prop_assert!(w[1] >= w[0].scale(2));
        }
    }

    #[test]
    fn lex_order_is_translation_invariant(a in gv_s(3), b in gv_s(3), c in gv_s(3)) {
        prop_assert_eq!(a < b, a.add(&c) < b.add(&c));
        prop_assert_eq!(GroupValue::parse(&a.tuple()), Some(a.clone()));
        prop_assert_eq!(a.add(&b).sub(&b), Some(a));
    }

    #[test]
    fn hull_contains_its_element(a in gv_s(3)) {
        prop_assume!(!a.is_zero());
        let h = hull(&a).unwrap();
        prop_assert!(h.contains(&a));
        if h.level > 1 {
            let smaller = valq::ordgroup::ConvexSubgroup::new(h.level - 1, 3).unwrap();
            prop_assert!(!smaller.contains(&a));
        }
    }

    #[test]
    fn ok_stabilize_ignores_term_order(
        betas in prop::collection::vec(gv_s(2), 1..=4),
        steps in prop::collection::vec((1i64..=3, -3i64..=3), 12),
        seed in 0usize..24,
    ) {
        let terms: Vec<(GroupValue, u64)> = betas.into_iter().enumerate().map(|(k, b)| (b, k as u64)).collect();
        let mut g = GroupValue::new(vec![0, 0]);
        let gamma: Vec<GroupValue> = steps.iter().map(|(a, b)| {
            g = g.add(&GroupValue::new(vec![*a, *b]));
            g.clone()
        }).collect();
        let mut perm = terms.clone();
        perm.rotate_left(seed % terms.len());
        let a = ok_stabilize(&terms, &gamma).unwrap();
        let b = ok_stabilize(&perm, &gamma).unwrap();
        match (a, b) {
            (Stabilization::Stable { iota: i, order: oa }, Stabilization::Stable { iota: j, order: ob }) => {
                prop_assert_eq!(i, j);
                let ma: Vec<u64> = oa.iter().map(|&k| terms[k].1).collect();
                let mb: Vec<u64> = ob.iter().map(|&k| perm[k].1).collect();
                prop_assert_eq!(ma, mb);
            }
            (Stabilization::Inconclusive, Stabilization::Inconclusive) => {}
            (x, y) => prop_assert!(false, "{:?} vs {:?}", x, y),
        }
    }

    #[test]
    fn tower_reduce_is_a_normal_form(cs in prop::collection::vec(-4i64..=4, 1..6), ds in prop::collection::vec(-4i64..=4, 1..6)) {
        // Y^2 + Y - t over Q(t)
        let base = |x: Frac| TowerElem::Base(x);
        let one = base(Frac::one_n(1));
        let q = UPoly::new(vec![base(Frac::var(1, 0).neg()), one.clone(), one.clone()], &one);
        let l = Level::new(None, q, "Y").unwrap();
        let y = l.generator();
        let poly_in_y = |ks: &[i64]| ks.iter().rev().fold(one.zero_like(), |acc, k| acc.mul(&y).add(&one.int_like(*k)));
        let (a, b) = (poly_in_y(&cs), poly_in_y(&ds));
        let ab = a.mul(&b);
        prop_assert_eq!(tower_reduce(&ab), ab.clone());
        prop_assert_eq!(tower_reduce(&tower_reduce(&ab)), tower_reduce(&ab));
        prop_assert_eq!(ab, b.mul(&a));
    }
}

#[test]
fn large_products_use_the_fast_path_correctly() {
    // big enough to go through Kronecker substitution
    let mk = |seed: i64| {
        MPoly::from_terms(
            NV,
            (0..60u32).flat_map(|i| (0..5u32).map(move |j| (vec![i, j], BigInt::from((i as i64 * 7 + j as i64 * 3 + seed) % 11 - 5)))),
        )
    };
    let (a, b) = (mk(1), mk(4));
    assert_eq!(as_map(&a.mul(&b)), naive_mul(&a, &b));
    let big = MPoly::from_terms(1, (0..300u32).map(|i| (vec![i], BigInt::from(3).pow(i) - BigInt::from(i))));
    let big2 = MPoly::from_terms(1, (0..200u32).map(|i| (vec![i * 2], -BigInt::from(5).pow(i % 40) + 1)));
    assert_eq!(as_map(&big.mul(&big2)), naive_mul(&big, &big2));
}

#[test]
fn series_oracle_sanity() {
    // the root of X^2 + X - t is sum (-1)^(k+1) Catalan(k-1) t^k
    let fx = common::fixture("quad");
    let z = common::series_root(fx.poly("F").unwrap(), 1, 12);
    let catalan = [1i64, 1, 2, 5, 14, 42, 132, 429, 1430, 4862, 16796];
    for k in 1..12u32 {
        let sign = if k % 2 == 1 { 1 } else { -1 };
        let want = num_rational::BigRational::from_integer(BigInt::from(sign * catalan[k as usize - 1]));
        assert_eq!(z.coeff(&[k]), want, "coefficient of t^{k}");
    }
}
