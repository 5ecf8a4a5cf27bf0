use homlab_core::lattice::{
    content, enumerate_iso_uni_pairs, enumerate_vectors, is_isotropic, is_unimodular, pairing,
    sp_orbit_count_bfs, sp_orbit_labels, tau, IndexArith, TransvectionGenerator,
};
use homlab_core::{LatticeParams, ZlVector};
use proptest::prelude::*;

const CAP: usize = 1 << 16;

fn p(g: usize, l: u64) -> LatticeParams {
    LatticeParams::new(g, l).unwrap()
}

fn v(params: LatticeParams, coords: &[i64]) -> ZlVector {
    ZlVector::from_coords(params, coords).unwrap()
}

#[test]
fn params_validation() {
    assert!(LatticeParams::new(0, 2).is_err());
    assert!(LatticeParams::new(1, 1).is_err());
    assert!(LatticeParams::new(40, 1000).is_err());
    assert_eq!(p(2, 3).order(), 81);
}

#[test]
fn pairing_examples() {
    let params = p(2, 3);
    let (a1, b1) = (ZlVector::a(params, 0), ZlVector::b(params, 0));
    let (a2, b2) = (ZlVector::a(params, 1), ZlVector::b(params, 1));
    assert_eq!(pairing(&a1, &b1).unwrap(), 1);
    assert_eq!(pairing(&b1, &a1).unwrap(), 2);
    assert_eq!(pairing(&(&a1 + &b2), &(&b1 + &a2)).unwrap(), 0);
    assert!(pairing(&a1, &ZlVector::a(p(2, 2), 0)).is_err());
}

#[test]
fn isotropy_examples() {
    let params = p(2, 2);
    let (a1, b1, a2) = (
        ZlVector::a(params, 0),
        ZlVector::b(params, 0),
        ZlVector::a(params, 1),
    );
    assert!(is_isotropic(&[a1.clone(), a2]).unwrap());
    assert!(!is_isotropic(&[a1.clone(), b1]).unwrap());
    assert!(is_isotropic(&[a1]).unwrap());
    assert!(is_isotropic(&[]).unwrap());
}

#[test]
fn unimodularity_examples() {
    let q = p(1, 4);
    assert!(is_unimodular(&[ZlVector::a(q, 0)]).unwrap());
    assert!(!is_unimodular(&[ZlVector::a(q, 0).scale(2)]).unwrap());
    let params = p(2, 2);
    let s = [v(params, &[1, 1, 0, 0]), ZlVector::a(params, 1)];
    assert!(is_unimodular(&s).unwrap());
    let dup = [ZlVector::a(params, 0), ZlVector::a(params, 0)];
    assert!(is_unimodular(&dup).is_err());
    let too_many: Vec<_> = (0..5)
        .map(|i| ZlVector::from_index(params, i + 1))
        .collect();
    assert!(!is_unimodular(&too_many).unwrap());
}

#[test]
fn content_examples() {
    let params = p(1, 6);
    assert_eq!(content(&ZlVector::zero(params)), 6);
    assert_eq!(content(&v(params, &[2, 4])), 2);
    assert_eq!(content(&ZlVector::a(params, 0)), 1);
}

#[test]
fn enumeration_examples() {
    let vs = enumerate_vectors(p(1, 2), CAP).unwrap();
    assert_eq!(vs.len(), 4);
    assert_eq!(v(p(1, 2), &[1, 1]).index(), 3);
    assert_eq!(enumerate_vectors(p(2, 2), CAP).unwrap().len(), 16);
    assert_eq!(enumerate_vectors(p(2, 3), CAP).unwrap().len(), 81);
    for (i, x) in enumerate_vectors(p(2, 3), CAP).unwrap().iter().enumerate() {
        assert_eq!(x.index(), i);
    }
    assert!(enumerate_vectors(p(3, 3), 100).unwrap_err().is_budget());
}

#[test]
fn pair_enumeration() {
    for l in 2..=5 {
        assert!(enumerate_iso_uni_pairs(p(1, l), CAP).unwrap().is_empty());
    }
    let pairs = enumerate_iso_uni_pairs(p(2, 2), CAP).unwrap();
    assert_eq!(pairs.len(), 90);
    for (a, b) in &pairs {
        let s = [a.clone(), b.clone()];
        assert!(a != b && is_isotropic(&s).unwrap() && is_unimodular(&s).unwrap());
    }
    assert_eq!(enumerate_iso_uni_pairs(p(2, 3), CAP).unwrap().len(), 1920);
    assert_eq!(enumerate_iso_uni_pairs(p(3, 2), CAP).unwrap().len(), 1890);
}

#[test]
fn pair_enumeration_matches_brute_force() {
    // Brute force: a 2 x 2g matrix over Z/L is unimodular iff some pair of columns
    // gives a unit determinant combination, i.e. the gcd of all 2x2 minors with L is 1.
    let params = p(2, 2);
    let vs = enumerate_vectors(params, CAP).unwrap();
    let mut count = 0;
    for x in &vs {
        for y in &vs {
            if x == y || x.pairing(y).unwrap() != 0 {
                continue;
            }
            let (cx, cy) = (x.coords(), y.coords());
            let mut g = 2u64;
            for i in 0..4 {
                for j in i + 1..4 {
                    let m = (cx[i] * cy[j]) as i64 - (cx[j] * cy[i]) as i64;
                    g = num_gcd(g, m.unsigned_abs());
                }
            }
            if g == 1 {
                count += 1;
            }
        }
    }
    assert_eq!(count, 90);
}

fn num_gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        num_gcd(b, a % b)
    }
}

#[test]
fn orbit_counts() {
    for (l, want) in [(2, 2), (3, 2), (4, 3), (5, 2), (6, 4)] {
        assert_eq!(sp_orbit_count_bfs(p(1, l), CAP).unwrap(), want);
        assert_eq!(tau(l), want as u64);
    }
    assert_eq!(sp_orbit_count_bfs(p(2, 2), CAP).unwrap(), 2);
}

#[test]
fn orbits_are_content_classes() {
    for l in 2..=6 {
        let params = p(1, l);
        let labels = sp_orbit_labels(params, CAP).unwrap();
        for i in 0..params.order() {
            for j in 0..params.order() {
                let (x, y) = (
                    ZlVector::from_index(params, i),
                    ZlVector::from_index(params, j),
                );
                assert_eq!(
                    labels[i] == labels[j],
                    x.content() == y.content(),
                    "{x} {y}"
                );
            }
        }
    }
}

#[test]
fn tau_examples() {
    assert_eq!(tau(2), 2);
    assert_eq!(tau(12), 6);
    assert_eq!(tau(7), 2);
    assert_eq!(tau(1), 1);
}

#[test]
fn transvection_rejects_bad_input() {
    let params = p(1, 4);
    assert!(TransvectionGenerator::new(ZlVector::a(params, 0).scale(2), 1).is_err());
    assert!(TransvectionGenerator::new(ZlVector::a(params, 0), 2).is_err());
}

fn params_strategy() -> impl Strategy<Value = LatticeParams> {
    (1usize..=3, 2u64..=7).prop_filter_map("fits", |(g, l)| {
        let p = LatticeParams::new(g, l).ok()?;
        (p.order() <= 1 << 14).then_some(p)
    })
}

fn with_vectors(k: usize) -> impl Strategy<Value = (LatticeParams, Vec<ZlVector>)> {
    params_strategy().prop_flat_map(move |params| {
        proptest::collection::vec(0..params.order(), k).prop_map(move |ix| {
            (
                params,
                ix.into_iter()
                    .map(|i| ZlVector::from_index(params, i))
                    .collect(),
            )
        })
    })
}

proptest! {
    #[test]
    fn pairing_is_antisymmetric((params, xs) in with_vectors(2)) {
        let l = params.level();
        prop_assert_eq!((xs[0].pairing(&xs[1]).unwrap() + xs[1].pairing(&xs[0]).unwrap()) % l, 0);
    }

    #[test]
    fn pairing_is_bilinear((params, xs) in with_vectors(3)) {
        let l = params.level();
        let lhs = (&xs[0] + &xs[1]).pairing(&xs[2]).unwrap();
        let rhs = (xs[0].pairing(&xs[2]).unwrap() + xs[1].pairing(&xs[2]).unwrap()) % l;
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn addition_inverts((_params, xs) in with_vectors(2)) {
        prop_assert_eq!(&(&xs[0] + &xs[1]) - &xs[1], xs[0].clone());
    }

    #[test]
    fn content_one_iff_unimodular((_params, xs) in with_vectors(1)) {
        prop_assume!(!xs[0].is_zero());
        prop_assert_eq!(xs[0].content() == 1, is_unimodular(&xs).unwrap());
    }

    #[test]
    fn content_divides_level((params, xs) in with_vectors(1)) {
        let c = xs[0].content();
        prop_assert_eq!(params.level() % c, 0);
        let prim_scale = xs[0].coords().iter().all(|&x| x % c == 0);
        prop_assert!(prim_scale);
    }

    #[test]
    fn transvections_preserve_pairing((_params, xs) in with_vectors(3), sign in prop_oneof![Just(1i64), Just(-1i64)]) {
        prop_assume!(xs[2].is_primitive());
        let t = TransvectionGenerator::new(xs[2].clone(), sign).unwrap();
        let before = xs[0].pairing(&xs[1]).unwrap();
        let after = t.apply(&xs[0]).unwrap().pairing(&t.apply(&xs[1]).unwrap()).unwrap();
        prop_assert_eq!(before, after);
    }

    #[test]
    fn index_arith_agrees_with_vectors((params, xs) in with_vectors(2), k in -5i64..5) {
        let ar = IndexArith::new(params);
        let (i, j) = (xs[0].index(), xs[1].index());
        prop_assert_eq!(ar.add(i, j), (&xs[0] + &xs[1]).index());
        prop_assert_eq!(ar.sub(i, j), (&xs[0] - &xs[1]).index());
        prop_assert_eq!(ar.scale(i, k), xs[0].scale(k).index());
        prop_assert_eq!(ar.pairing(i, j), xs[0].pairing(&xs[1]).unwrap());
    }
}
