use parabolic::blowup::{blowup_diffeo, blowup_vf, characteristic_points, DivisorPoint};
use parabolic::coeffs::{classify_index, ClassifyConfig, Coefficient, ComplexFloat, GaussianRational, IndexValue};
use parabolic::germs::{compose, exp_apply, exp_vf, exp_vf_at, log_diffeo, order_of, saturate, VectorFieldGerm};
use parabolic::indices::{cs_index, divisor_index_report, IndexEntry};
use parabolic::jets::{Chart, Jet2, Valuation, Var};
use parabolic::parser::parse_poly;
use parabolic::poly::UniPoly;

use num_complex::Complex64;
use proptest::prelude::*;

type G = GaussianRational;

const T: u32 = 7;

fn gq() -> impl Strategy<Value = G> {
    (-5i64..=5, 1i64..=4, -3i64..=3, 1i64..=3).prop_map(|(a, b, c, d)| G::from_parts(a, b, c, d))
}

fn small_real() -> impl Strategy<Value = G> {
    (-3i64..=3, 1i64..=3).prop_map(|(a, b)| G::from_ratio(a, b))
}

/// Sparse jet with terms of degree in `lo..=hi`.
fn jet(lo: u32, hi: u32, trunc: u32, max_terms: usize) -> impl Strategy<Value = Jet2<G>> {
    prop::collection::vec((lo..=hi, 0u32..=hi, gq()), 0..=max_terms).prop_map(move |ts| {
        Jet2::from_terms(ts.into_iter().map(|(d, i, c)| ((i.min(d), d - i.min(d)), c)), trunc)
    })
}

fn field(trunc: u32) -> impl Strategy<Value = VectorFieldGerm<G>> {
    (jet(2, trunc, trunc, 4), jet(2, trunc, trunc, 4))
        .prop_filter("nonzero field", |(a, b)| !(a.is_zero() && b.is_zero()))
        .prop_map(|(a, b)| VectorFieldGerm::new(a, b))
}

/// A field of order 2 whose tangent cone contains `[1 : c]`.
fn field_with_direction(trunc: u32) -> impl Strategy<Value = (VectorFieldGerm<G>, G)> {
    (jet(2, 2, trunc, 3), jet(2, 2, trunc, 3), jet(3, trunc, trunc, 3), jet(3, trunc, trunc, 3), small_real()).prop_filter_map(
        "order 2, non-dicritical",
        move |(a2, b2, a, b, c)| {
            let r = b2.eval(&G::one(), &c) - c.clone() * a2.eval(&G::one(), &c);
            let b2 = b2.sub(&Jet2::monomial(2, 0, r, trunc));
            let x = VectorFieldGerm::new(a2.add(&a), b2.add(&b));
            let tangent = x.tangent_cone_polynomial()?;
            (x.order() == Valuation::Finite(2) && !tangent.is_zero()).then_some((x, c))
        },
    )
}

fn exact_eq<C: Coefficient>(a: &Jet2<C>, b: &Jet2<C>) -> bool {
    let t = a.trunc().min(b.trunc());
    a.truncate(t) == b.truncate(t)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, ..ProptestConfig::default() })]

    #[test]
    fn exp_log_bijection(x in field(T)) {
        let f = exp_vf(&x).unwrap();
        prop_assert_eq!(log_diffeo(&f).unwrap(), x);
        prop_assert_eq!(exp_vf(&log_diffeo(&f).unwrap()).unwrap(), f);
    }

    #[test]
    fn exp_is_algebra_homomorphism(x in field(T), f in jet(0, T, T, 3), g in jet(0, T, T, 3), t in small_real()) {
        let lhs = exp_apply(&x, &f.mul(&g), &t).unwrap();
        let rhs = exp_apply(&x, &f, &t).unwrap().mul(&exp_apply(&x, &g, &t).unwrap());
        prop_assert!(exact_eq(&lhs, &rhs));
    }

    #[test]
    fn flow_group_law(x in field(T), s in small_real(), t in small_real()) {
        let st = exp_vf_at(&x, &(s.clone() + t.clone())).unwrap();
        let composed = compose(&exp_vf_at(&x, &s).unwrap(), &exp_vf_at(&x, &t).unwrap());
        prop_assert_eq!(st, composed);
    }

    #[test]
    fn exp_preserves_order(x in field(T)) {
        prop_assert_eq!(order_of(&exp_vf(&x).unwrap()), x.order());
    }

    #[test]
    fn saturation_factors(x in field(T), i in 0u32..2, j in 0u32..2) {
        let shifted = VectorFieldGerm::new(x.a.shift(i, j), x.b.shift(i, j));
        let s = saturate(&shifted).unwrap();
        prop_assert!(exact_eq(&s.factor.mul(&s.xprime.a), &shifted.a));
        prop_assert!(exact_eq(&s.factor.mul(&s.xprime.b), &shifted.b));
        prop_assert!(s.factor.valuation() >= Valuation::Finite(i + j));
    }

    #[test]
    fn recenter_round_trip(f in jet(0, T, T, 5), c in gq()) {
        prop_assert_eq!(f.recenter(Var::Y, &c).recenter(Var::Y, &(-c.clone())), f.clone());
        let u = f.restrict_zero(Var::X);
        prop_assert_eq!(u.recenter(&c).recenter(&(-c)), u);
    }

    #[test]
    fn division_by_unit(f in jet(0, T, T, 4), u in jet(1, T, T, 3), c in gq()) {
        prop_assume!(!c.is_zero());
        let unit = u.add(&Jet2::constant(c, T));
        prop_assert_eq!(f.mul(&unit).divide_by_unit(&unit).unwrap(), f);
    }

    #[test]
    fn chart_substitution_is_multiplicative(f in jet(0, T, T, 4), g in jet(0, T, T, 4)) {
        for chart in [Chart::U1, Chart::U2] {
            let lhs = f.mul(&g).substitute_chart(chart);
            let rhs = f.substitute_chart(chart).mul(&g.substitute_chart(chart));
            prop_assert!(exact_eq(&lhs, &rhs));
        }
    }

    #[test]
    fn parser_round_trip(f in jet(0, T, T, 6)) {
        let text = f.to_text(("x", "y"));
        let parsed = parse_poly::<G>(&text, ("x", "y"), T).unwrap();
        prop_assert_eq!(parsed.jet, f);
        prop_assert!(parsed.warnings.is_empty());
    }

    #[test]
    fn float_classification_of_rationals(p in -10_000i64..=10_000, q in 1i64..=10_000) {
        let cfg = ClassifyConfig::default();
        let exact = classify_index(&IndexValue::Exact(G::from_ratio(p, q)), &cfg);
        let float = classify_index(&IndexValue::Float(ComplexFloat(Complex64::new(p as f64 / q as f64, 0.0))), &cfg);
        prop_assert_eq!(exact, float);
    }

    #[test]
    fn divisor_indices_sum_to_minus_one(a in jet(2, 2, T, 3), b in jet(2, 2, T, 3)) {
        prop_assume!(!(a.is_zero() && b.is_zero()));
        let x = VectorFieldGerm::new(a, b);
        let exact = divisor_index_report(&x, &ClassifyConfig::default()).unwrap();
        prop_assume!(!exact.dicritical && !exact.entries.is_empty());
        if let Some(IndexValue::Exact(s)) = &exact.sum {
            prop_assert_eq!(s.clone(), G::from_integer(-1));
        }
        let xf: VectorFieldGerm<ComplexFloat> = x.convert();
        let float = divisor_index_report(&xf, &ClassifyConfig::default()).unwrap();
        // clustered roots of the tangent polynomial lose precision
        prop_assume!(float.entries.iter().all(|e| matches!(e, IndexEntry::Point { multiplicity: 1, .. })));
        let s = float.sum.unwrap().to_complex();
        prop_assert!((s + 1.0).norm() < 1e-6, "sum {}", s);
    }

    #[test]
    fn blowup_commutes_with_exp((x, _c) in field_with_direction(T)) {
        let f = exp_vf(&x).unwrap();
        for p in characteristic_points(&f).unwrap() {
            let ft = blowup_diffeo(&f, &p).unwrap();
            prop_assert_eq!(&ft, &exp_vf(&blowup_vf(&x, &p).unwrap()).unwrap());
            prop_assert!(order_of(&ft) >= order_of(&f));
            prop_assert!(ft.p.restrict_zero(Var::X).is_zero());
            prop_assert!(ft.q.restrict_zero(Var::X).is_zero());
        }
    }

    #[test]
    fn charts_agree((x, c) in field_with_direction(T)) {
        prop_assume!(!c.is_zero());
        let in_u1 = DivisorPoint::u1(c.clone());
        let in_u2 = DivisorPoint::u2(c.inv().unwrap());
        let i1 = cs_index(&blowup_vf(&x, &in_u1).unwrap(), &G::zero()).unwrap();
        let i2 = cs_index(&blowup_vf(&x, &in_u2).unwrap(), &G::zero()).unwrap();
        prop_assert_eq!(i1, i2);
        let f = exp_vf(&x).unwrap();
        let f1 = blowup_diffeo(&f, &in_u1).unwrap();
        let f2 = blowup_diffeo(&f, &in_u2).unwrap();
        prop_assert_eq!(order_of(&f1), order_of(&f2));
    }
}

#[test]
fn unipoly_recenter_fixes_constant() {
    let p = UniPoly::new(vec![G::from_integer(3)]);
    assert_eq!(p.recenter(&G::from_integer(5)), p);
}
