use std::collections::BTreeMap;

use proptest::prelude::*;

use reductor_core::field::{BaseField, FieldElement, ValuedField};
use reductor_core::freealg::{parse_presentation, AlgebraElement, FiltrationMode, Presentation, Strategy as Redex};
use reductor_core::group::GroupElement;
use reductor_core::lattice::Lattice;
use reductor_core::reductor::{build_reductor, Reductor};

fn q3() -> ValuedField {
    ValuedField::p_adic(3).unwrap()
}

fn f5x() -> ValuedField {
    ValuedField::x_adic(BaseField::Prime(5)).unwrap()
}

fn lex() -> ValuedField {
    ValuedField::lex_monomial(BaseField::Rationals).unwrap()
}

fn rational() -> impl Strategy<Value = (i64, i64)> {
    (-300i64..300, 1i64..300)
}

fn poly_str(vars: &[&str], coeffs: &[i64]) -> String {
    let mut terms = vec![];
    for (i, c) in coeffs.iter().enumerate() {
        let mono = match (vars.len(), i) {
            (_, 0) => String::new(),
            (1, k) => format!("*{}^{k}", vars[0]),
            (_, k) => format!("*{}^{}*{}^{}", vars[0], k % 2, vars[1], k / 2),
        };
        terms.push(format!("({c}){mono}"));
    }
    terms.join(" + ")
}

fn function_element(field: &ValuedField, vars: &[&str], num: &[i64], den: &[i64]) -> FieldElement {
    let d = field.parse(&poly_str(vars, den)).unwrap();
    let n = field.parse(&poly_str(vars, num)).unwrap();
    if d.is_zero() {
        n
    } else {
        n.div(&d).unwrap()
    }
}

fn check_axioms(field: &ValuedField, x: &FieldElement, y: &FieldElement) {
    let (vx, vy) = (field.value(x), field.value(y));
    if !x.is_zero() && !y.is_zero() {
        assert_eq!(field.value(&(x * y)), vx.add(&vy).unwrap());
    }
    assert!(field.value(&(x + y)).ge(vx.min(&vy)));
    assert_eq!(field.value(x).is_infinite(), x.is_zero());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn p_adic_axioms(a in rational(), b in rational()) {
        let f = q3();
        let x = f.ratio(a.0, a.1).unwrap();
        let y = f.ratio(b.0, b.1).unwrap();
        check_axioms(&f, &x, &y);
        if f.is_integral(&x) {
            let back = f.lift(&f.residue(&x).unwrap());
            prop_assert!(f.value(&(&x - &back)).ge(&GroupElement::new(&[1])));
        }
    }

    #[test]
    fn x_adic_axioms(n1 in prop::collection::vec(-4i64..5, 1..4), d1 in prop::collection::vec(-4i64..5, 1..3),
                     n2 in prop::collection::vec(-4i64..5, 1..4), d2 in prop::collection::vec(-4i64..5, 1..3)) {
        let f = f5x();
        let x = function_element(&f, &["X"], &n1, &d1);
        let y = function_element(&f, &["X"], &n2, &d2);
        check_axioms(&f, &x, &y);
    }

    #[test]
    fn lex_axioms(n1 in prop::collection::vec(-3i64..4, 1..5), n2 in prop::collection::vec(-3i64..4, 1..5), d in prop::collection::vec(-3i64..4, 1..3)) {
        let f = lex();
        let x = function_element(&f, &["X", "Y"], &n1, &d);
        let y = function_element(&f, &["X", "Y"], &n2, &[1]);
        check_axioms(&f, &x, &y);
    }

    #[test]
    fn uniformizers_have_their_value(a in -6i64..6, b in -6i64..6) {
        let f = lex();
        let g = GroupElement::new(&[a, b]);
        prop_assert_eq!(f.value(&f.uniformizer_for(&g).unwrap()), g);
        let f = q3();
        let g = GroupElement::new(&[a]);
        prop_assert_eq!(f.value(&f.uniformizer_for(&g).unwrap()), g);
    }

    #[test]
    fn lex_order_is_translation_invariant(a in prop::array::uniform2(-9i64..9), b in prop::array::uniform2(-9i64..9), c in prop::array::uniform2(-9i64..9)) {
        let (x, y, z) = (GroupElement::new(&a), GroupElement::new(&b), GroupElement::new(&c));
        let before = x.lex_compare(&y).unwrap();
        prop_assert_eq!(x.add(&z).unwrap().lex_compare(&y.add(&z).unwrap()).unwrap(), before);
        prop_assert_eq!(before, a.cmp(&b));
        prop_assert!(!x.ge(&GroupElement::Infinity) && GroupElement::Infinity.ge(&x));
    }
}

fn presentations() -> Vec<Presentation> {
    let f = q3();
    vec![
        parse_presentation(&f, &[("Y", 1), ("X", 1)], &[("q", "2")], &["X*Y = q*Y*X"], FiltrationMode::Graded).unwrap(),
        parse_presentation(&f, &[("X", 1), ("D", 1)], &[], &["D*X = X*D + 1"], FiltrationMode::GeneratorFiltered).unwrap(),
        parse_presentation(
            &f,
            &[("f", 1), ("h", 1), ("e", 1)],
            &[],
            &["e*f = f*e + h", "h*f = f*h - 2*f", "e*h = h*e - 2*e"],
            FiltrationMode::GeneratorFiltered,
        )
        .unwrap(),
        parse_presentation(&f5x(), &[("xi", 1)], &[], &["xi^2 = (1 - X)*xi - X"], FiltrationMode::GeneratorFiltered).unwrap(),
    ]
}

fn element(p: &Presentation, terms: &[(Vec<u8>, i64)]) -> AlgebraElement {
    let g = p.generators().len() as u8;
    let mut a = AlgebraElement::zero();
    for (letters, c) in terms {
        let letters: Vec<u8> = letters.iter().map(|l| l % g).collect();
        a = a.add(&p.normal_form(BTreeMap::from([(p.word(&letters), p.field().from_i64(*c))])).unwrap());
    }
    a
}

fn element_spec() -> impl Strategy<Value = Vec<(Vec<u8>, i64)>> {
    prop::collection::vec((prop::collection::vec(0u8..6, 0..3), -9i64..10), 1..4)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn rewriting_is_strategy_independent(which in 0usize..4, letters in prop::collection::vec(0u8..6, 0..6)) {
        let p = &presentations()[which];
        let g = p.generators().len() as u8;
        let w = p.word(&letters.iter().map(|l| l % g).collect::<Vec<_>>());
        let raw = BTreeMap::from([(w, p.field().one())]);
        let left = p.normal_form_with(raw.clone(), Redex::Leftmost).unwrap();
        let right = p.normal_form_with(raw, Redex::Rightmost).unwrap();
        prop_assert_eq!(&left, &right);
        let again = p.normal_form(left.terms().map(|(w, c)| (w.clone(), c.clone())).collect()).unwrap();
        prop_assert_eq!(again, left);
    }

    #[test]
    fn multiplication_is_associative(which in 0usize..4, a in element_spec(), b in element_spec(), c in element_spec()) {
        let p = &presentations()[which];
        let (a, b, c) = (element(p, &a), element(p, &b), element(p, &c));
        let left = p.multiply(&p.multiply(&a, &b).unwrap(), &c).unwrap();
        let right = p.multiply(&a, &p.multiply(&b, &c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn triangularize_preserves_the_module(rows in prop::collection::vec(prop::collection::vec(-30i64..30, 3), 1..6)) {
        let f = q3();
        let gens: Vec<Vec<FieldElement>> = rows.iter().map(|r| r.iter().map(|&x| f.from_i64(x)).collect()).collect();
        let l = Lattice::fg(&f, 3, "M", gens.clone()).unwrap();
        prop_assert!(l.mutual_membership().unwrap());
        let tri = Lattice::fg(&f, 3, "T", l.triangularize().unwrap()).unwrap();
        prop_assert!(tri.same_module(&l).unwrap());
        prop_assert_eq!(l.rank().unwrap(), l.span_dim());
        let basis = l.basis().unwrap();
        for (i, r) in basis.rows().iter().enumerate() {
            let p = basis.pivots()[i];
            prop_assert_eq!(&r[p], &f.uniformizer_for(&f.value(&r[p])).unwrap());
            for q in &basis.pivots()[..i] {
                prop_assert_ne!(p, *q);
            }
        }
    }
}

fn weyl_reductor() -> (Presentation, Reductor) {
    let p = presentations()[1].clone();
    let r = build_reductor(&p, 4).unwrap();
    (p, r)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn value_function_is_a_valuation_on_weyl(a in prop::collection::vec((prop::collection::vec(0u8..2, 0..3), -27i64..28), 1..4),
                                            b in prop::collection::vec((prop::collection::vec(0u8..2, 0..3), -27i64..28), 1..4)) {
        let (p, r) = weyl_reductor();
        let (a, b) = (element(&p, &a), element(&p, &b));
        prop_assume!(!a.is_zero() && !b.is_zero());
        let (va, vb) = (r.value_function(&a).unwrap(), r.value_function(&b).unwrap());
        let ab = p.multiply(&a, &b).unwrap();
        prop_assert_eq!(r.value_function(&ab).unwrap(), va.add(&vb).unwrap());
        prop_assert!(r.value_function(&a.add(&b)).unwrap().ge(va.min(&vb)));
        let three = p.field().from_i64(3);
        prop_assert_eq!(r.value_function(&a.scale(&three)).unwrap(), va.add(&GroupElement::new(&[1])).unwrap());
        prop_assert_eq!(r.contains(&a).unwrap(), va.ge(&GroupElement::new(&[0])));
    }
}
