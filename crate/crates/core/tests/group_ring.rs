use homlab_core::group_ring::{
    boundary_t2, boundary_t3, psi_image, verify_case3_cancellation, verify_case4_telescoping,
    GroupRingElement,
};
use homlab_core::lattice::enumerate_iso_uni_pairs;
use homlab_core::linalg::Rational;
use homlab_core::verifier::verify_cancellations;
use homlab_core::{LatticeParams, ZlVector};
use num_traits::Zero;
use proptest::prelude::*;

fn p(g: usize, l: u64) -> LatticeParams {
    LatticeParams::new(g, l).unwrap()
}

fn q(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

fn rho(v: &ZlVector) -> GroupRingElement {
    GroupRingElement::rho(v)
}

fn combo(terms: &[(i64, &ZlVector)]) -> GroupRingElement {
    let params = terms[0].1.params();
    let mut acc = GroupRingElement::zero(params);
    for (c, v) in terms {
        acc = &acc + &rho(v).scale(&q(*c));
    }
    acc
}

#[test]
fn augmentation_examples() {
    let params = p(2, 3);
    assert_eq!(GroupRingElement::theta(params).augmentation(), q(81));
    assert_eq!(rho(&ZlVector::a(params, 1)).augmentation(), q(1));
    let (a1, a2) = (ZlVector::a(params, 0), ZlVector::a(params, 1));
    let zero = ZlVector::zero(params);
    assert!(psi_image(&zero, &a1, &a2).unwrap().augmentation().is_zero());
}

#[test]
fn decompose_examples() {
    let params = p(2, 2);
    let theta = GroupRingElement::theta(params);
    let d = theta.decompose();
    assert_eq!(d.trivial(), theta);
    assert!(d.ideal.is_zero());

    let zero = ZlVector::zero(params);
    let d = rho(&zero).decompose();
    let expect_trivial = theta.scale(&Rational::new(1.into(), 16.into()));
    assert_eq!(d.trivial(), expect_trivial);
    assert_eq!(d.ideal, &rho(&zero) - &expect_trivial);

    let diff = &rho(&ZlVector::a(params, 0)) - &rho(&ZlVector::b(params, 1));
    let d = diff.decompose();
    assert!(d.theta_coeff.is_zero());
    assert_eq!(d.ideal, diff);
}

#[test]
fn psi_examples() {
    let params = p(2, 2);
    let zero = ZlVector::zero(params);
    let (a1, a2) = (ZlVector::a(params, 0), ZlVector::a(params, 1));
    let want = combo(&[(1, &zero), (-1, &a1), (-1, &a2), (1, &(&a1 + &a2))]);
    assert_eq!(psi_image(&zero, &a1, &a2).unwrap(), want);
    assert_eq!(psi_image(&zero, &a2, &a1).unwrap(), want);
    let b1 = ZlVector::b(params, 0);
    assert!(psi_image(&zero, &a1, &b1).is_err());
    assert!(psi_image(&zero, &a1, &a1).is_err());
}

#[test]
fn psi_sums_to_zero_over_translates() {
    let params = p(2, 2);
    for (w1, w2) in enumerate_iso_uni_pairs(params, 1 << 10).unwrap() {
        let mut acc = GroupRingElement::zero(params);
        for i in 0..params.order() {
            acc = &acc + &psi_image(&ZlVector::from_index(params, i), &w1, &w2).unwrap();
        }
        assert!(acc.is_zero());
    }
}

#[test]
fn boundary_t2_examples() {
    let params = p(2, 2);
    let zero = ZlVector::zero(params);
    let (a1, b2) = (ZlVector::a(params, 0), ZlVector::b(params, 1));
    let want = combo(&[(1, &zero), (-1, &a1), (-1, &b2), (1, &(&a1 + &b2))]);
    assert_eq!(boundary_t2(&zero, &a1, &b2), want);
    assert!(want.augmentation().is_zero());
    // With 2y = 0 the repeated argument doubles rather than cancels; the pairwise
    // cancellation happens between the translates by 0 and y.
    let doubled = combo(&[(2, &a1), (-2, &(&a1 + &b2))]);
    assert_eq!(boundary_t2(&a1, &b2, &b2), doubled);
    assert!((&boundary_t2(&a1, &b2, &ZlVector::a(params, 1))
        + &boundary_t2(&(&a1 + &b2), &b2, &ZlVector::a(params, 1)))
        .is_zero());
}

#[test]
fn boundary_t3_examples() {
    let params = p(2, 2);
    let zero = ZlVector::zero(params);
    let (a1, a2, b1) = (
        ZlVector::a(params, 0),
        ZlVector::a(params, 1),
        ZlVector::b(params, 0),
    );
    let want = combo(&[
        (1, &a2),
        (-1, &(&a2 + &b1)),
        (1, &(&a1 + &a2)),
        (-1, &(&(&a1 + &a2) + &b1)),
    ]);
    let t3 = boundary_t3(&zero, &a1, &a2, &b1);
    assert_eq!(t3, want);
    assert_eq!(boundary_t3(&a1, &a1, &a2, &b1), t3);
    assert!(t3.augmentation().is_zero());
}

#[test]
fn cancellation_examples() {
    let params = p(2, 2);
    let zero = ZlVector::zero(params);
    let (a1, a2, b2) = (
        ZlVector::a(params, 0),
        ZlVector::a(params, 1),
        ZlVector::b(params, 1),
    );
    assert!(verify_case3_cancellation(&zero, &a1, &a2));
    assert!(verify_case4_telescoping(&zero, &a1, &a2, &b2));
}

#[test]
fn cancellations_exhaustive_in_genus_one() {
    let params = p(1, 2);
    let n = params.order();
    let v = |i| ZlVector::from_index(params, i);
    let mut triples = 0;
    let mut quads = 0;
    for f in 0..n {
        for y in 0..n {
            for z in 0..n {
                assert!(verify_case3_cancellation(&v(f), &v(y), &v(z)));
                triples += 1;
                for x in 0..n {
                    assert!(verify_case4_telescoping(&v(f), &v(x), &v(y), &v(z)));
                    quads += 1;
                }
            }
        }
    }
    assert_eq!((triples, quads), (64, 256));
    let checks = verify_cancellations(params, 0, 1);
    assert!(checks.iter().all(|c| c.passed()));
    assert_eq!(checks[0].actual, "64 instances hold");
    assert_eq!(checks[1].actual, "256 instances hold");
}

#[test]
fn cancellations_sampled() {
    for (g, l) in [(2, 3), (3, 2)] {
        let checks = verify_cancellations(p(g, l), 1000, 9);
        assert!(checks.iter().all(|c| c.passed()), "{checks:?}");
        assert_eq!(checks[1].actual, "1000 instances hold");
    }
}

#[test]
fn triplet_roundtrip() {
    let params = p(2, 3);
    let e = &rho(&ZlVector::a(params, 1)).scale(&Rational::new((-3).into(), 7.into()))
        + &GroupRingElement::theta(params);
    let mut buf = Vec::new();
    e.write_triplets(&mut buf).unwrap();
    let back = GroupRingElement::read_triplets(params, buf.as_slice()).unwrap();
    assert_eq!(back, e);
}

fn element(params: LatticeParams) -> impl Strategy<Value = GroupRingElement> {
    proptest::collection::vec((0..params.order(), -4i64..=4, 1i64..=3), 0..6).prop_map(
        move |terms| {
            GroupRingElement::from_terms(
                params,
                terms
                    .into_iter()
                    .map(|(i, n, d)| (i, Rational::new(n.into(), d.into()))),
            )
            .unwrap()
        },
    )
}

fn vector(params: LatticeParams) -> impl Strategy<Value = ZlVector> {
    (0..params.order()).prop_map(move |i| ZlVector::from_index(params, i))
}

const P22: fn() -> LatticeParams = || p(2, 2);
const P23: fn() -> LatticeParams = || p(2, 3);

proptest! {
    #[test]
    fn product_is_associative(a in element(P23()), b in element(P23()), c in element(P23())) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
    }

    #[test]
    fn product_distributes(a in element(P23()), b in element(P23()), c in element(P23())) {
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
    }

    #[test]
    fn group_elements_are_units(v in vector(P23())) {
        let one = rho(&ZlVector::zero(P23()));
        prop_assert_eq!(&rho(&v) * &rho(&-&v), one);
    }

    #[test]
    fn augmentation_is_multiplicative(a in element(P22()), b in element(P22())) {
        prop_assert_eq!((&a * &b).augmentation(), a.augmentation() * b.augmentation());
    }

    #[test]
    fn theta_absorbs(a in element(P23())) {
        let theta = GroupRingElement::theta(P23());
        prop_assert_eq!(&theta * &a, theta.scale(&a.augmentation()));
    }

    #[test]
    fn decomposition_splits(a in element(P23())) {
        let d = a.decompose();
        prop_assert_eq!(&d.trivial() + &d.ideal, a);
        prop_assert!(d.ideal.augmentation().is_zero());
        prop_assert!(d.ideal.decompose().theta_coeff.is_zero());
    }

    #[test]
    fn boundaries_lie_in_augmentation_ideal(f in vector(P23()), x in vector(P23()), y in vector(P23()), z in vector(P23())) {
        prop_assert!(boundary_t2(&f, &y, &z).augmentation().is_zero());
        prop_assert!(boundary_t3(&f, &x, &y, &z).augmentation().is_zero());
        prop_assert_eq!(boundary_t2(&f, &y, &z), boundary_t2(&f, &z, &y));
    }

    #[test]
    fn case3_holds_everywhere(f in vector(P23()), y in vector(P23()), z in vector(P23())) {
        prop_assert!(verify_case3_cancellation(&f, &y, &z));
    }

    #[test]
    fn case4_holds_everywhere(f in vector(P23()), x in vector(P23()), y in vector(P23()), z in vector(P23())) {
        prop_assert!(verify_case4_telescoping(&f, &x, &y, &z));
    }
}
