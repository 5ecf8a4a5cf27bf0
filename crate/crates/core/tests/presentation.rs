use std::collections::HashSet;

use homlab_core::lattice::{enumerate_iso_uni_pairs, is_isotropic, is_unimodular, IndexArith};
use homlab_core::linalg::{Linalg, Mode, SparseRationalMatrix};
use homlab_core::presentation::catalog::{b_dims, pruned_counts};
use homlab_core::presentation::verify::{
    verify_catalog, verify_claims, verify_counting_identities, verify_eliminatev3,
    verify_newrelation1, verify_newrelation2, verify_psiinjective, verify_relations,
    verify_v1injective, verify_v1injective_image, Workbench,
};
use homlab_core::presentation::{Presentation, RelationFamily};
use homlab_core::report::Check;
use homlab_core::LatticeParams;
use proptest::prelude::*;

fn p(g: usize, l: u64) -> LatticeParams {
    LatticeParams::new(g, l).unwrap()
}

fn bench(g: usize, l: u64) -> Workbench {
    Workbench::new(
        Presentation::new(p(g, l)).unwrap(),
        Linalg::new(Mode::Exact),
    )
    .unwrap()
}

fn find<'a>(checks: &'a [Check], name: &str) -> &'a Check {
    checks
        .iter()
        .find(|c| c.name == name)
        .unwrap_or_else(|| panic!("no check {name}"))
}

fn all_pass(checks: &[Check]) {
    let bad: Vec<_> = checks.iter().filter(|c| !c.passed()).collect();
    assert!(bad.is_empty(), "{bad:#?}");
}

fn rank(m: &SparseRationalMatrix) -> usize {
    Linalg::new(Mode::Exact).rank(m).unwrap().rank
}

#[test]
fn generator_counts() {
    assert_eq!(Presentation::new(p(1, 2)).unwrap().generator_count(), 0);
    assert_eq!(Presentation::new(p(1, 5)).unwrap().generator_count(), 0);
    let pres = Presentation::new(p(2, 2)).unwrap();
    assert_eq!((pres.pair_count(), pres.generator_count()), (90, 1440));
    let pres = Presentation::new(p(2, 3)).unwrap();
    assert_eq!((pres.pair_count(), pres.generator_count()), (1920, 155_520));
}

#[test]
fn generators_in_lexicographic_order() {
    let pres = Presentation::new(p(2, 2)).unwrap();
    let gens: Vec<_> = pres.enumerate_generators().collect();
    assert_eq!(gens.len(), 1440);
    let keys: Vec<_> = gens
        .iter()
        .map(|x| (x.v.index(), x.w1.index(), x.w2.index()))
        .collect();
    assert!(keys.windows(2).all(|w| w[0] < w[1]));
    for (i, x) in gens.iter().enumerate() {
        assert_eq!(x.index, i);
        assert_eq!(pres.index(x.v.index(), x.w1.index(), x.w2.index()), Some(i));
        assert_eq!(pres.parts(i), (x.v.index(), x.w1.index(), x.w2.index()));
        let s = [x.w1.clone(), x.w2.clone()];
        assert!(x.w1 != x.w2 && is_isotropic(&s).unwrap() && is_unimodular(&s).unwrap());
    }
    assert_eq!(pres.index(0, 0, 1), None);
}

#[test]
fn relation_tables() {
    let pres = Presentation::new(p(2, 2)).unwrap();
    let tables = pres.relations().unwrap();
    let counts = pres.relation_counts().unwrap();
    for (t, n) in tables.iter().zip(counts) {
        assert_eq!(t.rows.len(), n, "{}", t.family);
    }
    assert_eq!(tables[2].family, RelationFamily::R3);
    assert_eq!(tables[2].rows.len(), 1440);
    for t in &tables {
        for row in &t.rows {
            assert!(pres.psi_of(row).is_empty(), "{} row {row:?}", t.family);
            let mut coeffs: Vec<i64> = row.iter().map(|&(_, c)| c).collect();
            coeffs.sort_unstable();
            match t.family {
                RelationFamily::R1 => assert!(coeffs.is_empty() || coeffs == [-1, 1]),
                // At L = 2 the first argument of R2 equals its negation, so the row
                // is a sum of two generators.
                RelationFamily::R2 => assert!(coeffs == [1, 1] || coeffs == [2]),
                // L = 2 entries, possibly merged.
                RelationFamily::R3 => assert_eq!(coeffs.iter().sum::<i64>(), 2),
                RelationFamily::R4 => assert_eq!(coeffs.iter().sum::<i64>(), -1),
            }
        }
    }
}

#[test]
fn relations_are_killed_by_psi_at_level_three() {
    let pres = Presentation::new(p(2, 3)).unwrap();
    let rows = pres.relation_vectors().unwrap();
    assert_eq!(
        rows.len(),
        pres.relation_counts().unwrap().iter().sum::<usize>()
    );
    assert!(rows.iter().all(|r| pres.psi_of(r).is_empty()));
}

#[test]
fn catalog_counts() {
    for (g, l) in [(2, 2), (2, 3), (3, 2)] {
        let wb = bench(g, l);
        let (a3, b3) = pruned_counts(g as u64, l);
        assert_eq!(wb.catalog.v1_a3.len() as u64, a3);
        assert_eq!(wb.catalog.v1_b3.len() as u64, b3);
        let (d1, d2, d3) = b_dims(g as u64, l);
        assert_eq!(wb.bspaces.b1.len() as u64, d1);
        assert_eq!(wb.bspaces.b2.len() as u64, d2);
        assert_eq!(wb.bspaces.b3.len() as u64, d3);
        let v1: HashSet<_> = wb.catalog.v1.iter().collect();
        let v2: HashSet<_> = wb.catalog.v2.iter().collect();
        assert!(wb
            .catalog
            .v3
            .iter()
            .all(|x| !v1.contains(x) && !v2.contains(x)));
        all_pass(&verify_catalog(&wb).unwrap());
    }
    assert_eq!(pruned_counts(2, 2), (6, 3));
    assert_eq!(b_dims(2, 3), (17, 81, 33));
}

#[test]
fn catalog_in_genus_one() {
    let wb = bench(1, 3);
    assert!(wb.catalog.v1.is_empty() && wb.catalog.v2.is_empty() && wb.catalog.v3.is_empty());
    assert_eq!(wb.bspaces.b1.len(), 9);
    let m = wb.pres.psi_matrix(&wb.catalog.v1);
    assert_eq!((m.ncols(), rank(&m)), (0, 0));
}

#[test]
fn psi_rank_over_v1() {
    for (g, l, want) in [(2, 2, 9), (3, 2, 54), (2, 3, 64)] {
        let wb = bench(g, l);
        let m = wb.pres.psi_matrix(&wb.catalog.v1);
        assert_eq!(m.nrows(), p(g, l).order());
        for col in m.transpose().row_vectors() {
            assert!(col.len() <= 4);
        }
        assert_eq!(rank(&m), want, "g={g} L={l}");
    }
}

#[test]
fn v1_injective() {
    let wb = bench(2, 2);
    let checks = verify_v1injective(&wb).unwrap();
    all_pass(&checks);
    assert_eq!(find(&checks, "lemma.v1injective.rank").actual, "9");
    assert_eq!(
        find(&checks, "lemma.v1injective.direct-sum").actual,
        "16 = 9 + 7"
    );
    assert_eq!(find(&checks, "lemma.v1injective.quotient").actual, "9");
    assert!(checks.iter().all(|c| c.certification == "exact"));

    let wb = bench(1, 2);
    all_pass(&verify_v1injective(&wb).unwrap());
}

#[test]
fn v1_injective_larger() {
    for (g, l, direct) in [(3, 2, "64 = 54 + 10"), (2, 3, "81 = 64 + 17")] {
        let wb = bench(g, l);
        let checks = verify_v1injective_image(&wb).unwrap();
        all_pass(&checks);
        assert_eq!(find(&checks, "lemma.v1injective.direct-sum").actual, direct);
    }
}

#[test]
fn new_relation_one() {
    let wb = bench(2, 2);
    let checks = verify_newrelation1(&wb, 20, 3).unwrap();
    all_pass(&checks);
    assert!(
        checks
            .iter()
            .filter(|c| c.name.starts_with("lemma.newrelation1.basis-"))
            .count()
            > 0
    );
    assert_eq!(
        checks
            .iter()
            .filter(|c| c.name.starts_with("lemma.newrelation1.sample-"))
            .count(),
        20
    );
    assert!(find(&checks, "lemma.newrelation1.substitution").passed());
}

#[test]
fn eliminate_v3() {
    let wb = bench(2, 2);
    let checks = verify_eliminatev3(&wb).unwrap();
    all_pass(&checks);
    let n = wb.catalog.v3.len();
    assert_eq!(
        find(&checks, "lemma.eliminatev3.members").actual,
        format!("{n} of {n}")
    );
}

#[test]
fn new_relation_two() {
    let wb = bench(2, 2);
    let checks = verify_newrelation2(&wb, 2, 5).unwrap();
    all_pass(&checks);
    assert_eq!(
        find(&checks, "lemma.newrelation2.standard").actual,
        "16 of 16"
    );
    assert!(find(&checks, "lemma.newrelation2.standard.psi-equal").passed());
    assert!(checks
        .iter()
        .any(|c| c.name.starts_with("lemma.newrelation2.transvected-")));
}

#[test]
fn psi_injective() {
    let wb = bench(2, 2);
    let checks = verify_psiinjective(&wb).unwrap();
    all_pass(&checks);
    let got: Vec<_> = checks.iter().map(|c| c.actual.as_str()).collect();
    assert_eq!(got, ["15", "15", "16"]);
}

#[test]
fn claims() {
    let wb = bench(2, 2);
    let checks = verify_claims(&wb).unwrap();
    all_pass(&checks);
    for k in 1..=7 {
        assert!(
            checks.iter().any(|c| c.name == format!("claim.{k}")),
            "claim.{k}"
        );
    }
    assert!(find(&checks, "claim.z-formula").passed());
    assert_eq!(find(&checks, "claim.6.count").actual, "6");
    assert_eq!(find(&checks, "claim.7").actual, "16");
}

#[test]
fn genus_one_is_vacuous() {
    let wb = bench(1, 2);
    for checks in [
        verify_newrelation1(&wb, 5, 0).unwrap(),
        verify_newrelation2(&wb, 5, 0).unwrap(),
        verify_psiinjective(&wb).unwrap(),
        verify_claims(&wb).unwrap(),
    ] {
        assert_eq!(checks.len(), 1);
        assert!(checks[0].passed());
        assert_eq!(checks[0].expected, "vacuous");
    }
    all_pass(&verify_relations(&wb).unwrap());
}

#[test]
fn counting_identities() {
    let checks = verify_counting_identities(6, 12);
    all_pass(&checks);
    for g in 1..=6u64 {
        for l in 2..=12u64 {
            let (d1, d2, d3) = b_dims(g, l);
            let (a3, b3) = pruned_counts(g, l);
            assert_eq!(d2 - d3, a3);
            assert_eq!(d3 - d1, b3);
            assert_eq!(d1 - 1, g * (l * l - 1));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn generator_index_roundtrip(i in 0usize..155_520) {
        let pres = Presentation::new(p(2, 3)).unwrap();
        let (v, w1, w2) = pres.parts(i);
        prop_assert_eq!(pres.index(v, w1, w2), Some(i));
        let x = pres.generator(i);
        prop_assert_eq!((x.v.index(), x.w1.index(), x.w2.index()), (v, w1, w2));
    }

    #[test]
    fn psi_column_is_four_term(i in 0usize..1440) {
        let params = p(2, 2);
        let pres = Presentation::new(params).unwrap();
        let ar = IndexArith::new(params);
        let (v, w1, w2) = pres.parts(i);
        let mut want = std::collections::BTreeMap::new();
        for (k, c) in [(v, 1i64), (ar.add(v, w1), -1), (ar.add(v, w2), -1), (ar.add(ar.add(v, w1), w2), 1)] {
            *want.entry(k).or_insert(0) += c;
        }
        want.retain(|_, c| *c != 0);
        let got: std::collections::BTreeMap<_, _> = pres.psi_column(i).into_iter().collect();
        prop_assert_eq!(got, want);
    }

    #[test]
    fn pairs_are_listed_once(w in 0usize..81, x in 0usize..81) {
        let params = p(2, 3);
        let pres = Presentation::new(params).unwrap();
        let pairs = enumerate_iso_uni_pairs(params, 1 << 16).unwrap();
        let listed = pairs.iter().any(|(a, b)| a.index() == w && b.index() == x);
        prop_assert_eq!(listed, pres.pair_position(w, x).is_some());
    }
}
