use super::*;
use crate::field::{q, BaseField};
use crate::freealg::{parse_presentation, FiltrationMode};

fn q3() -> ValuedField {
    ValuedField::p_adic(3).unwrap()
}

fn g(x: i64) -> GroupElement {
    GroupElement::new(&[x])
}

fn qplane(qv: &str) -> Presentation {
    parse_presentation(&q3(), &[("Y", 1), ("X", 1)], &[("q", qv)], &["X*Y = q*Y*X"], FiltrationMode::Graded).unwrap()
}

fn weyl() -> Presentation {
    parse_presentation(&q3(), &[("X", 1), ("D", 1)], &[], &["D*X = X*D + 1"], FiltrationMode::GeneratorFiltered).unwrap()
}

fn qweyl() -> Presentation {
    parse_presentation(&q3(), &[("Y", 1), ("X", 1)], &[("q", "2")], &["X*Y = q*Y*X + 1"], FiltrationMode::GeneratorFiltered).unwrap()
}

fn usl2() -> Presentation {
    parse_presentation(&q3(), &[("f", 1), ("h", 1), ("e", 1)], &[], &["e*f = f*e + h", "h*f = f*h - 2*f", "e*h = h*e - 2*e"], FiltrationMode::GeneratorFiltered)
        .unwrap()
}

fn quadratic(rel: &str) -> Presentation {
    let f5 = ValuedField::x_adic(BaseField::Prime(5)).unwrap();
    parse_presentation(&f5, &[("xi", 1)], &[], &[rel], FiltrationMode::GeneratorFiltered).unwrap()
}

fn binom(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

#[test]
fn ranks_follow_pbw_counts() {
    let r = build_reductor(&qplane("2"), 6).unwrap();
    for c in r.components() {
        assert_eq!(c.gr_rank, c.degree as usize + 1);
        assert_eq!(c.graded_dim, c.degree as usize + 1);
        assert!(c.is_lattice && c.torsion_free);
    }
    let r = build_reductor(&weyl(), 6).unwrap();
    for c in r.components() {
        let n = c.degree as usize;
        assert_eq!((c.rank, c.dim), ((n + 1) * (n + 2) / 2, (n + 1) * (n + 2) / 2));
    }
    assert!(r.is_standard());
    let r = build_reductor(&usl2(), 5).unwrap();
    for c in r.components() {
        assert_eq!(c.dim, binom(c.degree as usize + 3, 3));
    }
}

#[test]
fn nested_bases_and_degree_zero() {
    let r = build_reductor(&weyl(), 4).unwrap();
    let rows = r.basis().rows();
    assert_eq!(rows[0], linalg::unit_vec(r.field(), rows[0].len(), 0));
    assert_eq!(r.rank(0), 1);
    for n in 1..=4 {
        let prev = build_reductor(&weyl(), n - 1).unwrap();
        for (a, b) in prev.basis().rows().iter().zip(rows) {
            assert_eq!(a[..], b[..a.len()]);
        }
    }
}

#[test]
fn coefficient_escape_at_degree_two() {
    let err = build_reductor(&qplane("1/3"), 6).unwrap_err();
    assert_eq!(err, ReductorError::CoefficientEscape { degree: 2, word: "X*Y".into() });
}

#[test]
fn unramified_examples() {
    for p in [weyl(), qplane("2"), qweyl(), usl2()] {
        let r = build_reductor(&p, 4).unwrap();
        for row in r.check_unramified().unwrap() {
            assert!(row.filtered.unramified && row.graded.unramified);
            assert_eq!(row.filtered.rank, Some(row.filtered.dim));
        }
    }
    let r = build_reductor(&quadratic("xi^2 = (1 - X)*xi - X"), 3).unwrap();
    assert!(r.check_unramified().unwrap().iter().all(|row| row.filtered.unramified));
    assert_eq!(r.dim(3), 2);
}

#[test]
fn reductions() {
    let r = build_reductor(&quadratic("xi^2 = (1 - X)*xi - X"), 2).unwrap();
    let red = r.reduction().unwrap();
    assert!(red.passed());
    assert_eq!(red.basis, ["1", "xi"]);
    assert!(red.table.contains(&"(xi)*(xi) = xi".to_string()), "{:?}", red.table);
    assert_eq!(red.reduced().fmt_rule(&red.reduced().rules()[0]), "xi^2 -> xi");
    assert!(red.domain_certificate.is_none());

    let r = build_reductor(&usl2(), 3).unwrap();
    let red = r.reduction().unwrap();
    assert!(red.passed(), "{:?}", red.dual_route_mismatches);
    let rules: Vec<String> = red.reduced().rules().iter().map(|x| red.reduced().fmt_rule(x)).collect();
    assert_eq!(rules, ["e*f -> f*e + h", "h*f -> f*h + f", "e*h -> h*e + e"]);
    assert!(red.domain_certificate.is_some());

    let red = build_reductor(&qplane("2"), 4).unwrap().reduction().unwrap();
    assert!(red.passed());
    assert_eq!(red.presentation, "F3, trivial<Y < X>; X*Y -> 2*Y*X");
}

#[test]
fn value_functions_and_symbols() {
    let p = qplane("2");
    let r = build_reductor(&p, 4).unwrap();
    let red = r.residue_presentation().unwrap();
    let a = p.parse_element("3*X + Y").unwrap();
    assert_eq!(r.value_function(&a).unwrap(), g(0));
    assert_eq!(r.value_function(&p.parse_element("9").unwrap()).unwrap(), g(2));
    assert_eq!(r.value_function(&AlgebraElement::zero()).unwrap(), GroupElement::Infinity);
    let s = r.principal_symbol(&a, &red).unwrap();
    assert_eq!(s.degree, g(0));
    assert_eq!(s.representative, p.parse_element("Y").unwrap());
    assert_eq!(r.principal_symbol(&AlgebraElement::zero(), &red), Err(ReductorError::ZeroSymbol));
    let c = p.parse_element("-2").unwrap();
    assert_eq!(red.fmt_element(&r.principal_symbol(&c, &red).unwrap().residue), "1");
    let (x, y) = (p.parse_element("X").unwrap(), p.parse_element("Y").unwrap());
    assert!(r.symbols_multiply(&x, &y, &red).unwrap());
    assert_eq!(r.value_function(&p.parse_element("X^5").unwrap()), Err(ReductorError::DegreeOverflow { degree: 5, bound: 4 }));

    let p = quadratic("xi^2 = (1 - X)*xi - X");
    let r = build_reductor(&p, 2).unwrap();
    let xi = p.parse_element("xi").unwrap();
    let xi1 = p.parse_element("xi - 1").unwrap();
    let prod = p.multiply(&xi, &xi1).unwrap();
    assert_eq!(prod, p.parse_element("-X*xi - X").unwrap());
    assert_eq!(r.value_function(&prod).unwrap(), g(1));
    assert_eq!((r.value_function(&xi).unwrap(), r.value_function(&xi1).unwrap()), (g(0), g(0)));
    let red = r.residue_presentation().unwrap();
    assert!(r.symbols_multiply(&xi, &xi1, &red).unwrap());
    let piece = r.assoc_graded_piece(&g(2)).unwrap();
    assert_eq!(piece.dim, 2);
}

#[test]
fn valuation_axioms() {
    let r = build_reductor(&weyl(), 6).unwrap();
    let rep = r.valuation_axioms_check(&r.element_pool(None)).unwrap();
    assert!(rep.passed());
    assert_eq!(rep.pool_size, 1 + 5 * 6 + 25 * 15);

    let p = quadratic("xi^2 = (1 - X)*xi - X");
    let r = build_reductor(&p, 6).unwrap();
    let rep = r.valuation_axioms_check(&r.element_pool(None)).unwrap();
    assert_eq!(rep.verdict, AxiomsVerdict::Counterexample { a: "xi".into(), b: "xi + 4".into(), value_a: g(0), value_b: g(0), value: g(1), product: true });
    let scalars: Vec<AlgebraElement> = r.field().coefficient_pool().into_iter().map(AlgebraElement::scalar).collect();
    assert!(r.valuation_axioms_check(&scalars).unwrap().passed());
    assert!(matches!(r.fraction_value(&p.one(), &p.one(), &rep), Err(ReductorError::Precondition(_))));
}

#[test]
fn fraction_values() {
    let p = weyl();
    let r = build_reductor(&p, 6).unwrap();
    let pool = r.element_pool(None);
    let ok = r.valuation_axioms_check(&pool).unwrap();
    let (xd, x) = (p.parse_element("X*D").unwrap(), p.parse_element("X").unwrap());
    assert_eq!(r.fraction_value(&xd, &x, &ok).unwrap(), g(0));
    assert_eq!(r.fraction_value(&x, &x, &ok).unwrap(), g(0));
    assert_eq!(r.fraction_value(&x.scale(&q(3, 1)), &x, &ok).unwrap(), g(1));
    assert_eq!(r.fraction_value(&x, &AlgebraElement::zero(), &ok), Err(ReductorError::DivisionByZero));
    for a in pool.iter().take(40).filter(|a| !a.is_zero()) {
        for b in pool.iter().skip(40).take(20) {
            let c = p.parse_element("D + 3").unwrap();
            let (ac, bc) = (p.multiply(a, &c).unwrap(), p.multiply(b, &c).unwrap());
            assert_eq!(r.fraction_value(&ac, &bc, &ok).unwrap(), r.fraction_value(a, b, &ok).unwrap());
        }
    }
}

#[test]
fn strong_filtration() {
    let r = build_reductor(&qplane("2"), 4).unwrap();
    let rep = r.strong_filtration_check(&[(g(1), g(-1)), (g(0), g(0))]).unwrap();
    assert!(rep.passed, "{:?}", rep.failures);
    let r = build_reductor(&usl2(), 3).unwrap();
    assert!(r.strong_filtration_check(&[(g(2), g(1))]).unwrap().passed);
}

#[test]
fn lemma_identities() {
    let gammas: Vec<_> = (-2..=2).map(g).collect();
    let r = build_reductor(&qplane("2"), 4).unwrap();
    let rep = r.lemma_identities_check(4, &gammas, 4).unwrap();
    assert!(rep.passed);
    assert_eq!(rep.maximal_ideal.len(), 15);
    let r = build_reductor(&weyl(), 4).unwrap();
    assert!(r.lemma_identities_check(4, &gammas, 4).unwrap().passed);
}

#[test]
fn crossed_products() {
    let gammas: Vec<_> = (-2..=2).map(g).collect();
    let r = build_reductor(&qplane("2"), 4).unwrap();
    let rep = r.crossed_product_check(&gammas, 2).unwrap();
    assert!(rep.passed, "{:?}", rep.failures);
    assert_eq!(rep.pairs_checked, 25 * 36);
    assert!(r.crossed_product_check(&[g(0)], 1).unwrap().passed);
    let r = build_reductor(&usl2(), 4).unwrap();
    assert!(r.crossed_product_check(&gammas, 2).unwrap().passed);
}

#[test]
fn connection_and_symbols() {
    let r = build_reductor(&usl2(), 4).unwrap();
    let rep = r.connection_check().unwrap();
    assert!(rep.passed && rep.verdicts_agree);
    let sc = r.symbols_commute_check().unwrap();
    assert!(sc.passed, "{sc:?}");
    let r = build_reductor(&weyl(), 4).unwrap();
    assert!(r.connection_check().unwrap().passed);
    assert!(r.symbols_commute_check().unwrap().passed);
    let r = build_reductor(&qplane("2"), 5).unwrap();
    assert!(r.connection_check().unwrap().passed);
    assert!(!r.symbols_commute_check().unwrap().passed);
}

#[test]
fn connected_graded() {
    let r = build_reductor(&qplane("2"), 4).unwrap();
    let rep = r.connected_graded_check().unwrap();
    assert!(rep.passed);
    assert_eq!((rep.degree_one_residue_dim, rep.degree_one_dim), (2, 2));
    assert!(rep.dimension_gaps.is_empty());
    let free = parse_presentation(&q3(), &[("X", 1), ("Y", 1)], &[], &[], FiltrationMode::Graded).unwrap();
    let r = build_reductor(&free, 3).unwrap();
    assert!(r.connected_graded_check().unwrap().passed);
    assert_eq!(r.components()[3].graded_dim, 8);
    let r = build_reductor(&weyl(), 2).unwrap();
    assert!(matches!(r.connected_graded_check(), Err(ReductorError::Precondition(_))));
}

#[test]
fn subalgebras() {
    let p = usl2();
    let r = build_reductor(&p, 4).unwrap();
    let sub = r.subalgebra_reductor(&[p.parse_element("h").unwrap()], 12).unwrap();
    let ranks: Vec<_> = sub.rows.iter().map(|row| row.rank.unwrap()).collect();
    assert_eq!(ranks, [1, 2, 3, 4, 5]);
    assert!(sub.passed);
    assert_eq!(sub.bases[2], ["1", "h", "h^2"]);
    let all: Vec<_> = (0..3).map(|i| p.generator_element(i)).collect();
    let sub = r.subalgebra_reductor(&all, 12).unwrap();
    for (n, l) in sub.lattices.iter().enumerate() {
        assert!(l.same_module(&r.filtered_lattice(n as u32).unwrap()).unwrap());
    }
    let p = qplane("2");
    let r = build_reductor(&p, 4).unwrap();
    let sub = r.subalgebra_reductor(&[p.parse_element("X^2").unwrap()], 12).unwrap();
    let ranks: Vec<_> = sub.rows.iter().map(|row| row.rank.unwrap()).collect();
    assert_eq!(ranks, [1, 1, 2, 2, 3]);
    assert!(sub.passed);
    assert!(matches!(r.subalgebra_reductor(&[p.parse_element("X").unwrap()], 2), Err(ReductorError::Inconclusive(_))));
}

#[test]
fn tensors() {
    let a = build_reductor(&qplane("2"), 4).unwrap();
    let t = a.tensor_reductor(&a, 4).unwrap();
    assert!(t.passed && t.unramified);
    let conv: Vec<usize> = (0..=4).map(|n| (0..=n).map(|i| (i + 1) * (n - i + 1)).sum()).collect();
    assert_eq!(t.graded_dims, conv);
    assert_eq!(t.graded_dims[2], 10);
    let k = construct::ground_reductor(&q3(), FiltrationMode::Graded, 4).unwrap();
    let t = a.tensor_reductor(&k, 4).unwrap();
    let ranks: Vec<_> = t.reductor.components().iter().map(|c| c.rank).collect();
    assert_eq!(ranks, a.components().iter().map(|c| c.rank).collect::<Vec<_>>());
    let w = build_reductor(&weyl(), 3).unwrap();
    let t = w.tensor_reductor(&a, 3).unwrap();
    assert!(t.passed && t.unramified);
    let fdims = [1usize, 3, 6, 10];
    let expect: Vec<usize> = (0..=3).map(|n| (0..=n).map(|i| fdims[i] * (n - i + 1)).sum()).collect();
    assert_eq!(t.dims, expect);
}

#[test]
fn valuation_rings() {
    let r = build_reductor(&quadratic("xi^2 = (1 - X)*xi - X"), 2).unwrap();
    let rep = r.valuation_ring_check().unwrap();
    assert!(!rep.is_valuation_ring && rep.pool_consistent);
    assert!(rep.factor.is_some() && rep.pool_witness.is_some());
    let r = build_reductor(&quadratic("xi^2 = X + 2"), 2).unwrap();
    let rep = r.valuation_ring_check().unwrap();
    assert!(rep.is_valuation_ring && rep.pool_consistent, "{rep:?}");
    let f5 = ValuedField::x_adic(BaseField::Prime(5)).unwrap();
    let k = construct::ground_reductor(&f5, FiltrationMode::GeneratorFiltered, 2).unwrap();
    assert!(k.valuation_ring_check().unwrap().is_valuation_ring);
    assert!(matches!(build_reductor(&weyl(), 2).unwrap().valuation_ring_check(), Err(ReductorError::Unsupported(_))));
}
