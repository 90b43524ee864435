use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::scalar::GaussRational;
use num_complex::Complex64;

type Q = GaussRational;

fn ratio(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

#[test]
fn orbit_completion_and_ricci() {
    let curv = CurvatureData::from_components(2, &[([0, 1, 0, 1], ratio(1))]).unwrap();
    assert_eq!(*curv.get(1, 0, 1, 0), ratio(1));
    assert_eq!(*curv.get(1, 0, 0, 1), ratio(-1));
    assert_eq!(
        curv.ricci(),
        vec![vec![ratio(1), ratio(0)], vec![ratio(0), ratio(1)]]
    );
    assert_eq!(curv.nonzero_components().len(), 4);
}

#[test]
fn curvature_rejects_inconsistent_input() {
    let conflict =
        CurvatureData::from_components(2, &[([0, 1, 0, 1], ratio(1)), ([1, 0, 1, 0], ratio(2))]);
    assert!(matches!(
        conflict,
        Err(GeometryError::CurvatureConflict { .. })
    ));
    let diagonal = CurvatureData::from_components(2, &[([0, 0, 0, 1], ratio(1))]);
    assert!(matches!(
        diagonal,
        Err(GeometryError::CurvatureConflict { .. })
    ));
    let bianchi = CurvatureData::from_components(4, &[([0, 1, 2, 3], ratio(1))]);
    assert!(matches!(bianchi, Err(GeometryError::Bianchi { .. })));
    let range = CurvatureData::from_components(2, &[([0, 2, 0, 1], ratio(1))]);
    assert!(matches!(
        range,
        Err(GeometryError::CurvatureIndex { index: 2, n: 2 })
    ));
}

#[test]
fn random_curvature_has_all_symmetries() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for n in [2, 4] {
        let curv = CurvatureData::random(n, &mut rng);
        curv.validate().unwrap();
        let rebuilt = CurvatureData::from_components(n, &curv.nonzero_components()).unwrap();
        assert_eq!(rebuilt, curv);
    }
}

#[test]
fn flat_laplacian_is_norm_squared() {
    let jets = build_metric_jets::<Q>(&CurvatureData::flat(4));
    let sigma = laplacian_symbol(&jets).unwrap();
    assert!(sigma.agrees_with(&Symbol::norm_power(4, 4, 1)));
    assert_eq!(sigma.order_of(2), 2);
}

#[test]
fn laplacian_parametrix_on_round_metric() {
    let curv = CurvatureData::from_components(2, &[([0, 1, 0, 1], ratio(1))]).unwrap();
    let (q2, q3) = laplacian_inverse_check::<Q>(&curv).unwrap();
    assert_eq!(q2.order_of(-2), 2);
    assert!(q3.order_of(-3) >= 1);
}

#[test]
fn laplacian_parametrix_on_random_curvature() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for n in [2, 4] {
        let curv = CurvatureData::random(n, &mut rng);
        laplacian_inverse_check::<Q>(&curv).unwrap();
        laplacian_inverse_check::<Complex64>(&curv).unwrap();
    }
}

#[test]
fn square_and_inverse_match_closed_forms() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for m in [1, 2] {
        for _ in 0..2 {
            let s = Scenario::<Q>::random(m, &mut rng);
            check_square_and_inverse(&s).unwrap();
        }
    }
    let s = Scenario::<Complex64>::random(2, &mut rng);
    check_square_and_inverse(&s).unwrap();
}

#[test]
fn constant_unit_field_gives_plain_square() {
    let n = 4;
    let s = Scenario::<Q> {
        m: 2,
        v_field: VectorFieldJet::constant(FrameVector::basis(n, 0)),
        x_field: FrameVector::zero(n),
        u: FrameVector::basis(n, 1),
        v: FrameVector::basis(n, 2),
        w: FrameVector::basis(n, 3),
        curvature: None,
        seed: None,
    };
    let sq = rescaled_dirac_square_symbols(&s).unwrap();
    assert!(sq.degree_part(2).agrees_with(&Symbol::norm_power(n, n, 1)));
    assert!(sq.degree_part(1).is_zero());
    assert!(sq.order_of(1) >= 0);
}

#[test]
fn scenario_validation() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut s = Scenario::<Q>::random(2, &mut rng);
    s.validate().unwrap();
    s.u = FrameVector::zero(3);
    assert!(matches!(s.validate(), Err(GeometryError::Dimension { .. })));
    let mut s = Scenario::<Q>::random(2, &mut rng);
    s.v_field.value = FrameVector::zero(4);
    assert_eq!(s.validate(), Err(GeometryError::ZeroField));
    s.m = 5;
    assert_eq!(s.validate(), Err(GeometryError::Rank(5)));
}

#[test]
fn field_helpers() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let s = Scenario::<Q>::random(2, &mut rng);
    let dn = s.d_norm_sq();
    for j in 0..4 {
        let mut expected = Q::zero();
        for a in 0..4 {
            expected +=
                Q::from_i64(2) * s.v_field.value.get(a).clone() * s.v_field.jacobian[a][j].clone();
        }
        assert_eq!(*dn.get(j), expected);
    }
    let lambda = Q::from_frac(3, 2);
    let scaled = s.scaled_field(&lambda);
    assert_eq!(scaled.norm_sq(), s.norm_sq() * Q::from_frac(9, 4));
    assert_eq!(
        s.v_field.covariant(&FrameVector::basis(4, 1)),
        s.v_field.derivative(1)
    );
}
