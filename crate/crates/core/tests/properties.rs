use std::sync::Arc;

use proptest::prelude::*;
use z3g::calculus::{apply_d, CalculusSpec};
use z3g::catalog::{get_presentation, AlgebraId};
use z3g::cli::parse::{parse, parse_element, render_ast};
use z3g::engine::{mul, normal_form};
use z3g::hopf::{coproduct, tensor_mul, SignRule, StructureMaps};
use z3g::{Element, Presentation, Scalar, Word};

fn scalar() -> impl Strategy<Value = Scalar> {
    prop::array::uniform4((-4i64..=4, 1i64..=3)).prop_map(|c| {
        let mut s = Scalar::zero();
        for (k, (n, d)) in c.into_iter().enumerate() {
            s += &(&Scalar::from_ratio(n, d).unwrap() * &Scalar::zeta().pow(k as u32));
        }
        s
    })
}

fn small_coef() -> impl Strategy<Value = Scalar> {
    (prop::sample::select(vec![-2i64, -1, 1, 2]), 0i64..3)
        .prop_map(|(n, k)| &Scalar::from_int(n) * &Scalar::q_pow(k))
}

/// Random sums of free words over the presentation's alphabet.
fn element(p: Arc<Presentation>, max_len: usize, n_terms: usize) -> impl Strategy<Value = Element> {
    let n = p.generators().len() as u8;
    prop::collection::vec(
        (prop::collection::vec(0..n, 0..=max_len), small_coef()),
        1..=n_terms,
    )
    .prop_map(|ts| Element::from_terms(ts.into_iter().map(|(l, c)| (Word::new(l), c))))
}

fn plane_word(p: Arc<Presentation>, max_len: usize) -> impl Strategy<Value = Word> {
    let n = p.generators().len() as u8;
    prop::collection::vec(0..n, 0..=max_len).prop_map(Word::new)
}

fn in_catalog(
    max_len: usize,
    n_terms: usize,
) -> impl Strategy<Value = (Arc<Presentation>, Element)> {
    (0..ALGEBRAS.len()).prop_flat_map(move |k| {
        let p = get_presentation(ALGEBRAS[k]);
        (Just(p.clone()), element(p, max_len, n_terms))
    })
}

const ALGEBRAS: [AlgebraId; 4] = [
    AlgebraId::ExteriorPlane,
    AlgebraId::Weyl,
    AlgebraId::CalcCovariant,
    AlgebraId::Mq2,
];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_axioms(a in scalar(), b in scalar(), c in scalar()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
        if !a.is_zero() {
            prop_assert!((&a * &a.inv().unwrap()).is_one());
        }
    }

    #[test]
    fn normal_form_is_idempotent((p, e) in in_catalog(5, 3)) {
        let once = normal_form(&e, &p).unwrap();
        prop_assert_eq!(normal_form(&once, &p).unwrap(), once.clone());
        prop_assert!(once.terms().all(|(w, _)| p.is_normal(w)));
    }

    #[test]
    fn normal_form_conserves_grade((p, e) in in_catalog(6, 1)) {
        let w = e.terms().next().map(|(w, _)| w.clone()).unwrap();
        let g = p.grade_of(&w).unwrap();
        let f = normal_form(&Element::from_word(w), &p).unwrap();
        prop_assert!(f.terms().all(|(v, _)| p.grade_of(v).unwrap() == g));
    }

    #[test]
    fn multiplication_is_associative((p, a, b, c) in (0..ALGEBRAS.len()).prop_flat_map(|k| {
        let p = get_presentation(ALGEBRAS[k]);
        (Just(p.clone()), element(p.clone(), 3, 2), element(p.clone(), 3, 2), element(p, 3, 2))
    })) {
        let left = mul(&mul(&a, &b, &p).unwrap(), &c, &p).unwrap();
        let right = mul(&a, &mul(&b, &c, &p).unwrap(), &p).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn render_then_parse_round_trips((p, e) in in_catalog(4, 4)) {
        let e = normal_form(&e, &p).unwrap();
        let text = p.render(&e);
        prop_assert_eq!(parse_element(&text, &p).unwrap(), e);
        let ast = parse(&text, &p).unwrap();
        prop_assert_eq!(parse(&render_ast(&ast), &p).unwrap(), ast);
    }

    #[test]
    fn graded_leibniz_rule(w1 in plane_word(get_presentation(AlgebraId::ExteriorPlane), 3),
                           w2 in plane_word(get_presentation(AlgebraId::ExteriorPlane), 3)) {
        let c = CalculusSpec::new(AlgebraId::CalcCovariant).unwrap();
        let p = c.presentation().clone();
        let (f, g) = (Element::from_word(c.from_plane(&w1)), Element::from_word(c.from_plane(&w2)));
        let rho = p.grade_of(&c.from_plane(&w1)).unwrap().value() as i64;
        let lhs = apply_d(&mul(&f, &g, &p).unwrap(), &c).unwrap();
        let rhs = &mul(&apply_d(&f, &c).unwrap(), &g, &p).unwrap()
            + &mul(&f, &apply_d(&g, &c).unwrap(), &p).unwrap().scale(&Scalar::q_pow(rho));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn line_coproduct_is_multiplicative(a in element(get_presentation(AlgebraId::Z3Line), 2, 3),
                                        b in element(get_presentation(AlgebraId::Z3Line), 2, 3)) {
        let maps = StructureMaps::for_algebra(AlgebraId::Z3Line).unwrap();
        let p = maps.algebra().clone();
        let ab = mul(&a, &b, &p).unwrap();
        let lhs = coproduct(&ab, &maps).unwrap();
        let rhs = tensor_mul(&coproduct(&a, &maps).unwrap(), &coproduct(&b, &maps).unwrap(), SignRule::Braided)
            .unwrap()
            .normalize()
            .unwrap();
        prop_assert!(lhs.sub(&rhs).unwrap().is_zero());
    }
}
