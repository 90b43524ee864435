use super::*;
use crate::scalar::GaussRational;

type Q = GaussRational;

const N: usize = 4;

fn mono(e: &[u32]) -> Monomial {
    Monomial::from_exponents(e)
}

fn one_jet(order: Order) -> Jet<Q> {
    Jet::scalar(N, N, Q::one(), order)
}

fn x(i: usize, order: Order) -> Jet<Q> {
    Jet::coordinate(N, N, i, order)
}

fn norm(k: i32) -> Symbol<Q> {
    Symbol::norm_power(N, N, k)
}

#[test]
fn xi_derivatives() {
    let xi1sq = Symbol::term(mono(&[2]), 0, &one_jet(EXACT));
    assert!(symbol_partial_xi(&xi1sq, 0)
        .agrees_with(&Symbol::term(mono(&[1]), 0, &one_jet(EXACT)).scale(&Q::from_i64(2))));
    let d = symbol_partial_xi(&norm(-2), 2);
    let expected = Symbol::term(mono(&[0, 0, 1]), -3, &one_jet(EXACT)).scale(&Q::from_i64(-4));
    assert!(d.agrees_with(&expected));
    let s = Symbol::term(mono(&[1]), 1, &one_jet(EXACT));
    let expected = Symbol::term(mono(&[1, 1]), 0, &one_jet(EXACT)).scale(&Q::from_i64(2));
    assert!(symbol_partial_xi(&s, 1).agrees_with(&expected));
}

#[test]
fn canonical_equality_uses_norm_identity() {
    let lhs = norm(1);
    let mut rhs = Symbol::zero(N, N);
    for i in 0..N {
        rhs = rhs.add(&Symbol::term(
            Monomial::unit(i).raise(i),
            0,
            &one_jet(EXACT),
        ));
    }
    assert!(lhs.agrees_with(&rhs));
    assert!(!lhs.agrees_with(&rhs.scale(&Q::from_i64(2))));
}

#[test]
fn flat_composition_is_identity() {
    let c = symbol_compose(&norm(1), &norm(-1), -4).unwrap();
    assert!(c.agrees_with(&norm(0)));
}

#[test]
fn composition_differentiates_right_factor() {
    // ξ_1 ∘ x_1 = x_1 ξ_1 - i
    let p = Symbol::term(mono(&[1]), 0, &one_jet(EXACT));
    let q = Symbol::term(Monomial::ONE, 0, &x(0, EXACT));
    let c = symbol_compose(&p, &q, -5).unwrap();
    let expected = Symbol::term(mono(&[1]), 0, &x(0, EXACT)).sub(&norm(0).scale(&Q::imag_unit()));
    assert!(c.agrees_with(&expected));
    // x_1 ∘ ξ_1 = x_1 ξ_1
    let c = symbol_compose(&q, &p, -5).unwrap();
    assert!(c.agrees_with(&Symbol::term(mono(&[1]), 0, &x(0, EXACT))));
}

#[test]
fn composition_rejects_unknown_degrees() {
    let q = norm(-1).with_known_from(-2);
    assert!(matches!(
        symbol_compose(&norm(1), &q, -1),
        Err(SymbolError::UnknownDegree { .. })
    ));
    assert!(symbol_compose(&norm(1), &q, 0).is_ok());
}

#[test]
fn flat_inverse() {
    let (q2, q3) = symbol_invert_order2(&norm(1)).unwrap();
    assert!(q2.agrees_with(&norm(-1)));
    assert!(q3.is_zero());
}

fn variable_laplace_like() -> Symbol<Q> {
    // p_2 = (2 + x_1 - 3x_2)‖ξ‖², p_1 = c(e_1)ξ_2 + x_3 ξ_1, known to orders 1 and 0
    let f = one_jet(1)
        .scale(&Q::from_i64(2))
        .add(&x(0, 1))
        .sub(&x(1, 1).scale(&Q::from_i64(3)));
    let p2 = Symbol::term(Monomial::ONE, 1, &f);
    let e1 = Jet::constant(N, CliffordElement::generator(N, 0), 0);
    let p1 = Symbol::term(mono(&[0, 1]), 0, &e1).add(&Symbol::term(mono(&[1]), 0, &x(2, 0)));
    p2.add(&p1)
}

#[test]
fn inverse_is_left_and_right_inverse() {
    let p = variable_laplace_like();
    let (q2, q3) = symbol_invert_order2(&p).unwrap();
    let q = q2.add(&q3).with_known_from(-3);
    for prod in [
        symbol_compose(&p, &q, -1).unwrap(),
        symbol_compose(&q, &p, -1).unwrap(),
    ] {
        let at0 = prod.at_origin().unwrap();
        assert!(at0.degree_part(0).agrees_with(&norm(0)), "{at0:?}");
        assert!(at0.degree_part(-1).is_zero(), "{at0:?}");
    }
}

#[test]
fn inverse_rejects_non_scalar_leading_part() {
    let e1 = Jet::constant(N, CliffordElement::<Q>::generator(N, 0), EXACT);
    let p = Symbol::term(Monomial::ONE, 1, &e1);
    assert!(matches!(
        symbol_invert_order2(&p),
        Err(SymbolError::NotInvertible(_))
    ));
    let exact = Symbol::term(Monomial::ONE, 1, &one_jet(EXACT).add(&x(0, EXACT)));
    assert_eq!(
        symbol_invert_order2(&exact),
        Err(SymbolError::InfiniteSeries)
    );
}

#[test]
fn power_formula_flat_case() {
    let (s, s1) = inverse_power_symbols(&norm(-1), &Symbol::zero(N, N), 3).unwrap();
    assert!(s.agrees_with(&norm(-3)));
    assert!(s1.is_zero());
    assert_eq!(
        inverse_power_symbols(&norm(-1), &Symbol::zero(N, N), 1),
        Err(SymbolError::PowerTooSmall(1))
    );
}

#[test]
fn power_formula_matches_iterated_composition() {
    let p = variable_laplace_like();
    let (q2, q3) = symbol_invert_order2(&p).unwrap();
    for m in [2u32, 3] {
        let (s, s1) = inverse_power_symbols(&q2, &q3, m).unwrap();
        let oracle = iterated_power_oracle(&q2.add(&q3), m).unwrap();
        let d = -2 * m as i32;
        assert!(s.agrees_with(&oracle.degree_part(d)), "m={m}");
        assert!(s1.agrees_with(&oracle.degree_part(d - 1)), "m={m}");
        assert!(s1.order_of(d - 1) >= 0);
    }
}

#[test]
fn sphere_integration_of_terms() {
    let a = CliffordElement::<Q>::generator(N, 1);
    let odd = integrate_symbol_term_over_sphere(&XiKey::new(mono(&[1, 1]), -3), &a, N).unwrap();
    assert!(odd.is_zero());
    assert_eq!(
        integrate_symbol_term_over_sphere(&XiKey::new(Monomial::ONE, -2), &a, N).unwrap(),
        a
    );
    let quarter = integrate_symbol_term_over_sphere(&XiKey::new(mono(&[2]), -3), &a, N).unwrap();
    assert_eq!(quarter, a.scale(&Q::from_frac(1, 4)));
    assert!(matches!(
        integrate_symbol_term_over_sphere(&XiKey::new(Monomial::ONE, -1), &a, N),
        Err(SymbolError::WrongDegree { .. })
    ));
}

#[test]
fn composition_at_origin_matches_full_composition() {
    let p = variable_laplace_like();
    let (q2, q3) = symbol_invert_order2(&p).unwrap();
    let q = q2.add(&q3).with_known_from(-3);
    let full = symbol_compose(&q, &p, -1).unwrap().at_origin().unwrap();
    let at0 = symbol_compose_at_origin(&q.at_origin().unwrap(), &p, -1).unwrap();
    assert!(full.agrees_with(&at0));
    for m in [2u32, 3] {
        let oracle = iterated_power_oracle(&q2.add(&q3), m)
            .unwrap()
            .at_origin()
            .unwrap();
        let cheap = iterated_power_at_origin(&q2.add(&q3), m).unwrap();
        assert!(oracle.agrees_with(&cheap), "m={m}");
    }
}
