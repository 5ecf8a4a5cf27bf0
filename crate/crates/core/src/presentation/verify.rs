//! Machine checks of the relations, lemmas and claims about `A_g` and `psi`.
//!
//! Every statement is reduced to exact rank or membership questions in the free
//! space on the generators (modulo relation rows) or in `B_g`.

use std::sync::OnceLock;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::lattice::IndexArith;
use crate::linalg::{
    normalize_int, Certification, IntVec, Linalg, Span, SparseRationalMatrix, VecRef, Vectors,
};
use crate::report::Check;

use super::catalog::{b_dims, pruned_counts};
use super::{BSpaces, Presentation, RelationFamily, VCatalog};

/// Largest generator count for which relation spans are built.
pub const DEFAULT_RELATION_CAP: usize = 200_000;

fn units(xs: &[usize]) -> Vec<IntVec> {
    xs.iter().map(|&x| vec![(x, 1)]).collect()
}

fn union(parts: &[&[usize]]) -> Vec<usize> {
    let mut out: Vec<usize> = parts.iter().flat_map(|p| p.iter().copied()).collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// Presentation data for one `(g, L)` plus lazily built spans in the free space.
pub struct Workbench {
    pub pres: Presentation,
    pub catalog: VCatalog,
    pub bspaces: BSpaces,
    linalg: Linalg,
    relation_cap: usize,
    relations: OnceLock<Box<dyn Span>>,
    m1: OnceLock<Box<dyn Span>>,
    m12: OnceLock<Box<dyn Span>>,
}

impl Workbench {
    pub fn new(pres: Presentation, linalg: Linalg) -> Result<Self> {
        let catalog = VCatalog::new(&pres)?;
        let bspaces = BSpaces::new(pres.arith());
        Ok(Self {
            pres,
            catalog,
            bspaces,
            linalg,
            relation_cap: DEFAULT_RELATION_CAP,
            relations: OnceLock::new(),
            m1: OnceLock::new(),
            m12: OnceLock::new(),
        })
    }

    pub fn with_relation_cap(mut self, cap: usize) -> Self {
        self.relation_cap = cap;
        self
    }

    pub fn linalg(&self) -> &Linalg {
        &self.linalg
    }

    fn ar(&self) -> &IndexArith {
        self.pres.arith()
    }

    fn order(&self) -> usize {
        self.pres.params().order()
    }

    fn genus(&self) -> usize {
        self.pres.params().genus()
    }

    fn level(&self) -> i64 {
        self.pres.params().level() as i64
    }

    fn cached(
        cell: &OnceLock<Box<dyn Span>>,
        build: impl FnOnce() -> Result<Box<dyn Span>>,
    ) -> Result<&dyn Span> {
        if cell.get().is_none() {
            let span = build()?;
            let _ = cell.set(span);
        }
        Ok(cell.get().expect("just set").as_ref())
    }

    /// Span of all relation rows.
    pub fn relation_span(&self) -> Result<&dyn Span> {
        Self::cached(&self.relations, || {
            let n = self.pres.generator_count();
            if n > self.relation_cap {
                return Err(Error::budget(
                    "relation span",
                    n as u128,
                    self.relation_cap as u128,
                ));
            }
            let rows = self.pres.relation_vectors()?;
            log::info!(
                "eliminating {} relation rows over {} generators",
                rows.len(),
                n
            );
            self.linalg.span(n, Vectors::Int(&rows), true)
        })
    }

    /// `M1`, the span of `V1` and the relation rows.
    pub fn m1_span(&self) -> Result<&dyn Span> {
        Self::cached(&self.m1, || {
            self.relation_span()?
                .extended(Vectors::Int(&units(&self.catalog.v1)))
        })
    }

    /// The span of `V1`, `V2` and the relation rows.
    pub fn m12_span(&self) -> Result<&dyn Span> {
        Self::cached(&self.m12, || {
            self.m1_span()?
                .extended(Vectors::Int(&units(&self.catalog.v2)))
        })
    }

    /// Dimension of the image of `span(xs)` in `A_g`.
    pub fn quotient_dim(&self, xs: &[usize]) -> Result<(usize, Certification)> {
        let span = self.relation_span()?;
        Ok((
            span.quotient_rank(Vectors::Int(&units(xs)))?,
            span.certification(),
        ))
    }

    /// Rank of a family of vectors in `B_g`; exact results are checked against a
    /// nonsingular minor.
    pub fn b_rank(&self, vectors: &[IntVec], seed: u64) -> Result<(usize, Certification)> {
        let m = SparseRationalMatrix::from_columns_int(self.order(), vectors)?.transpose();
        let cert = self.linalg.rank(&m)?;
        if cert.certification == Certification::Exact && !cert.verify_witness(&m, 2, seed) {
            return Err(Error::Inconsistent(
                "rank witness failed verification".into(),
            ));
        }
        Ok((cert.rank, cert.certification))
    }

    fn psi_rank(&self, cols: &[usize], extra: &[IntVec]) -> Result<(usize, Certification)> {
        let mut vs = self.pres.psi_columns(cols);
        vs.extend(extra.iter().cloned());
        self.b_rank(&vs, cols.len() as u64)
    }

    fn basis(&self) -> Vec<usize> {
        (0..2 * self.genus()).map(|k| self.ar().basis(k)).collect()
    }

    fn signs(&self) -> Vec<i64> {
        let l = self.level();
        if l == 2 {
            vec![1]
        } else {
            vec![1, l - 1]
        }
    }

    /// The chosen lift of `Y(v, s)`: `X(v, s, s + s'')` with `s''` the first basis
    /// vector different from `s` and orthogonal to it.
    pub fn y_lift(&self, v: usize, s: usize) -> Result<usize> {
        let ar = self.ar();
        let s2 = self
            .basis()
            .into_iter()
            .find(|&t| t != s && ar.pairing(s, t) == 0)
            .ok_or_else(|| Error::Precondition("no basis vector orthogonal to s".into()))?;
        self.pres.x(v, s, ar.add(s, s2))
    }

    /// `Z(v, s) = sum_{k=1}^{L} k Y(v + (k-1)s, s)` in terms of lifts.
    pub fn z_lift(&self, v: usize, s: usize) -> Result<IntVec> {
        let ar = self.ar();
        let mut out = Vec::new();
        for k in 1..=self.level() {
            out.push((self.y_lift(ar.add(v, ar.scale(s, k - 1)), s)?, k));
        }
        Ok(normalize_int(out))
    }

    /// The part of `v` along the handle `(a_i, b_i)`.
    fn handle_part(&self, v: usize, i: usize) -> usize {
        let ar = self.ar();
        ar.add(
            ar.scale(ar.basis(2 * i), ar.digit(v, 2 * i) as i64),
            ar.scale(ar.basis(2 * i + 1), ar.digit(v, 2 * i + 1) as i64),
        )
    }

    fn handle_vectors(&self, i: usize) -> Vec<usize> {
        let ar = self.ar();
        let l = self.level();
        let mut out = Vec::new();
        for c in 0..l {
            for d in 0..l {
                out.push(ar.add(
                    ar.scale(ar.basis(2 * i), c),
                    ar.scale(ar.basis(2 * i + 1), d),
                ));
            }
        }
        out
    }
}

fn scaled(v: &IntVec, k: i64) -> IntVec {
    v.iter().map(|&(i, c)| (i, c * k)).collect()
}

fn combine(parts: &[(i64, &IntVec)]) -> IntVec {
    let mut out = Vec::new();
    for (k, v) in parts {
        out.extend(scaled(v, *k));
    }
    normalize_int(out)
}

/// Membership of each labelled vector in `span`, as one tallied check.
fn tally(name: &str, span: &dyn Span, items: &[(String, IntVec)]) -> Result<Check> {
    let mut hits = 0;
    let mut witness = None;
    for (label, v) in items {
        let m = span.contains(VecRef::Int(v))?;
        if m.member && m.certification == Certification::Exact && m.certificate.is_none() {
            return Err(Error::Inconsistent(format!(
                "{name}: exact membership without certificate"
            )));
        }
        if m.member {
            hits += 1;
        } else if witness.is_none() {
            witness = Some(label.clone());
        }
    }
    let n = items.len();
    let mut actual = format!("{hits} of {n}");
    if let Some(w) = witness {
        actual.push_str(&format!("; first failure {w}"));
    }
    Ok(Check::new(name, format!("{n} of {n}"), actual, hits == n)
        .with_certification(&span.certification()))
}

fn vacuous(name: &str, why: &str) -> Check {
    Check::new(name, "vacuous", why, true)
}

/// Relation tables: `psi` kills every row, and row counts per family.
pub fn verify_relations(wb: &Workbench) -> Result<Vec<Check>> {
    let pres = &wb.pres;
    let mut checks = Vec::new();
    let gens = pres.generator_count();
    checks.push(Check::eq(
        "presentation.generators.count",
        wb.order() * pres.pair_count(),
        gens,
    ));
    if gens > wb.relation_cap {
        checks.push(Check::skipped(
            "presentation.relations.psi-annihilates",
            format!("{gens} generators exceed cap {}", wb.relation_cap),
        ));
        return Ok(checks);
    }
    for table in pres.relations()? {
        let bad = table.rows.iter().position(|r| !pres.psi_of(r).is_empty());
        let actual = match bad {
            None => format!("{} rows", table.rows.len()),
            Some(k) => format!("row {k} has nonzero image"),
        };
        checks.push(Check::new(
            format!("presentation.relations.psi-annihilates.{}", table.family),
            format!("{} rows", table.rows.len()),
            actual,
            bad.is_none(),
        ));
        if table.family == RelationFamily::R3 {
            checks.push(Check::eq(
                "presentation.relations.count.R3",
                gens,
                table.rows.len(),
            ));
        }
    }
    Ok(checks)
}

/// Decompositions `w = s1 + e s2` with `s1 != s2` basis vectors and `e` a unit sign.
fn decompositions(wb: &Workbench, w: usize) -> Vec<(usize, usize)> {
    let ar = wb.ar();
    let basis = wb.basis();
    let mut out = Vec::new();
    for &s1 in &basis {
        for &s2 in &basis {
            if s1 != s2 && wb.signs().iter().any(|&e| ar.add(s1, ar.scale(s2, e)) == w) {
                out.push((s1, s2));
            }
        }
    }
    out
}

/// The V families re-derived by filtering every generator, the subfamily counts,
/// and the `B` subspace dimensions.
pub fn verify_catalog(wb: &Workbench) -> Result<Vec<Check>> {
    let ar = wb.ar();
    let cat = &wb.catalog;
    let basis = wb.basis();
    let n = wb.order();
    let mut v = [Vec::new(), Vec::new(), Vec::new()];
    let decomp: Vec<Vec<(usize, usize)>> = (0..n).map(|w| decompositions(wb, w)).collect();
    for (p, &(w1, w2)) in wb.pres.pairs().iter().enumerate() {
        let (in1, in2) = (basis.contains(&w1), basis.contains(&w2));
        let class = if in1 && in2 {
            Some(0)
        } else if in1
            && decomp[w2]
                .iter()
                .any(|&(s1, s2)| s1 == w1 && ar.pairing(w1, s2) == 0)
        {
            Some(1)
        } else if decomp[w1].iter().any(|&(s1, s2)| {
            decomp[w2].iter().any(|&(s3, s4)| {
                let all = [s1, s2, s3, s4];
                (0..4).all(|i| !all[i + 1..].contains(&all[i])) && ar.pairing(s1, s3) == 1
            })
        }) {
            Some(2)
        } else {
            None
        };
        if let Some(c) = class {
            v[c].extend((0..n).map(|x| x * wb.pres.pair_count() + p));
        }
    }
    for list in &mut v {
        list.sort_unstable();
    }
    let mut checks = Vec::new();
    for (k, (filtered, built)) in v.iter().zip([&cat.v1, &cat.v2, &cat.v3]).enumerate() {
        checks.push(Check::new(
            format!("presentation.catalog.v{}", k + 1),
            format!("{} generators", filtered.len()),
            format!("{} generators", built.len()),
            filtered == built,
        ));
    }
    let (g, l) = (wb.genus() as u64, wb.level() as u64);
    let (a3, b3) = pruned_counts(g, l);
    checks.push(Check::eq(
        "presentation.catalog.v1-a3-count",
        a3 as usize,
        cat.v1_a3.len(),
    ));
    checks.push(Check::eq(
        "presentation.catalog.v1-b3-count",
        b3 as usize,
        cat.v1_b3.len(),
    ));
    let (d1, d2, d3) = b_dims(g, l);
    let dims = |b: &BSpaces| format!("{} {} {}", b.b1.len(), b.b2.len(), b.b3.len());
    checks.push(Check::eq(
        "presentation.catalog.b-dims",
        format!("{d1} {d2} {d3}"),
        dims(&wb.bspaces),
    ));
    Ok(checks)
}

fn first_relation(wb: &Workbench, v: usize, s: [usize; 3]) -> Result<IntVec> {
    let ar = wb.ar();
    let x = |v, a, b| wb.pres.x(v, a, b);
    let [s1, s2, s3] = s;
    Ok(normalize_int(vec![
        (x(v, s2, s3)?, 1),
        (x(ar.add(v, s1), s2, s3)?, -1),
        (x(v, s1, s3)?, -1),
        (x(ar.add(v, s2), s1, s3)?, 1),
    ]))
}

fn second_relation(wb: &Workbench, v: usize, s: [usize; 3]) -> Result<IntVec> {
    let ar = wb.ar();
    let x = |v, a, b| wb.pres.x(v, a, b);
    let [s1, s2, s3] = s;
    let w = ar.sub(v, s1);
    Ok(normalize_int(vec![
        (x(w, s2, s3)?, 1),
        (x(v, s2, s3)?, -1),
        (x(w, s1, s3)?, -1),
        (x(ar.add(w, s2), s1, s3)?, 1),
    ]))
}

fn admissible_triple(wb: &Workbench, s: [usize; 3]) -> Result<bool> {
    let ar = wb.ar();
    let l = wb.level() as u64;
    let [s1, s2, s3] = s;
    if s1 == s2 || s1 == s3 || s2 == s3 || ar.pairing(s1, s3) != 0 || ar.pairing(s2, s3) != 0 {
        return Ok(false);
    }
    let p = ar.pairing(s1, s2);
    if p != 0 && p != 1 && p != l - 1 {
        return Ok(false);
    }
    crate::lattice::is_unimodular(&[ar.vector(s1), ar.vector(s2), ar.vector(s3)])
}

/// The first relation of the lemma, for every basis triple and `v`, and for
/// `samples` random admissible triples. Each instance is its own check.
pub fn verify_newrelation1(wb: &Workbench, samples: usize, seed: u64) -> Result<Vec<Check>> {
    if 2 * wb.genus() < 3 {
        return Ok(vec![vacuous(
            "lemma.newrelation1",
            "no unimodular triples when g = 1",
        )]);
    }
    let mut checks = Vec::new();
    let span = wb.relation_span()?;
    let basis = wb.basis();
    let mut instances = Vec::new();
    for &s1 in &basis {
        for &s2 in &basis {
            for &s3 in &basis {
                if admissible_triple(wb, [s1, s2, s3])? {
                    for v in 0..wb.order() {
                        instances.push(("basis", v, [s1, s2, s3]));
                    }
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = wb.order();
    let mut drawn = 0;
    let mut attempts = 0usize;
    while drawn < samples && attempts < 1_000_000 {
        attempts += 1;
        let s = [
            rng.gen_range(1..n),
            rng.gen_range(1..n),
            rng.gen_range(1..n),
        ];
        if admissible_triple(wb, s)? {
            instances.push(("sample", rng.gen_range(0..n), s));
            drawn += 1;
        }
    }
    if drawn < samples {
        return Err(Error::Construction(format!(
            "drew only {drawn} admissible triples"
        )));
    }
    let mut counters = [0usize; 2];
    for (kind, v, s) in instances {
        let k = &mut counters[(kind == "sample") as usize];
        let name = format!("lemma.newrelation1.{kind}-{k}");
        *k += 1;
        let vec = first_relation(wb, v, s)?;
        let label = format!(
            "v={} s={:?}",
            wb.ar().vector(v).label(),
            s.map(|x| wb.ar().vector(x).label())
        );
        checks.push(tally(&name, span, &[(label, vec)])?);
    }
    // The second relation is the first one at v - s1.
    let mut same = 0;
    let mut total = 0;
    for &s1 in &basis {
        for &s2 in &basis {
            for &s3 in &basis {
                if admissible_triple(wb, [s1, s2, s3])? {
                    for v in 0..n {
                        total += 1;
                        let shifted = first_relation(wb, wb.ar().sub(v, s1), [s1, s2, s3])?;
                        same += (second_relation(wb, v, [s1, s2, s3])? == shifted) as usize;
                    }
                }
            }
        }
    }
    checks.push(Check::new(
        "lemma.newrelation1.substitution",
        format!("{total} of {total}"),
        format!("{same} of {total}"),
        same == total,
    ));
    Ok(checks)
}

/// Every `V3` generator lies in the span of `V1`, `V2` and the relations.
pub fn verify_eliminatev3(wb: &Workbench) -> Result<Vec<Check>> {
    let span = wb.m12_span()?;
    let items: Vec<(String, IntVec)> = wb
        .catalog
        .v3
        .iter()
        .map(|&x| (wb.pres.label(x), vec![(x, 1)]))
        .collect();
    let mut checks = vec![tally("lemma.eliminatev3.members", span, &items)?];
    let (all, c1) = wb.quotient_dim(&wb.catalog.all())?;
    let (v12, c2) = wb.quotient_dim(&wb.catalog.v12())?;
    checks.push(
        Check::eq("lemma.eliminatev3.quotient-dims", all, v12).with_certification(&c1.combine(&c2)),
    );
    Ok(checks)
}

/// The `B_g` side of the injectivity lemma for `V1`, including the three pruning steps.
pub fn verify_v1injective_image(wb: &Workbench) -> Result<Vec<Check>> {
    let n = wb.order();
    let (g, l) = (wb.genus() as u64, wb.level() as u64);
    let cat = &wb.catalog;
    let bs = &wb.bspaces;
    let (d1, d2, d3) = b_dims(g, l);
    let (d1, d2, d3) = (d1 as usize, d2 as usize, d3 as usize);
    let mut checks = Vec::new();

    let (r1, c) = wb.psi_rank(&cat.v1, &[])?;
    checks.push(Check::eq("lemma.v1injective.rank", n - d1, r1).with_certification(&c));
    let (r, c) = wb.psi_rank(&cat.v1, &units(&bs.b1))?;
    checks.push(
        Check::new(
            "lemma.v1injective.direct-sum",
            format!("{n} = {} + {d1}", n - d1),
            format!("{r} = {r1} + {}", bs.b1.len()),
            r == n && r1 + bs.b1.len() == n,
        )
        .with_certification(&c),
    );

    let (ri, c) = wb.psi_rank(&cat.v1_i, &[])?;
    let (r, c2) = wb.psi_rank(&cat.v1_i, &units(&bs.b2))?;
    checks.push(
        Check::new(
            "lemma.v1injective.step1",
            format!("{n} = {} + {d2}", n - d2),
            format!("{r} = {ri} + {}", bs.b2.len()),
            r == n && ri + bs.b2.len() == n,
        )
        .with_certification(&c.combine(&c2)),
    );

    let steps = [
        (
            "step2",
            &cat.v1_a,
            &cat.v1_a3,
            &bs.b2,
            &bs.b3,
            d2 - d3,
            union(&[&cat.v1_i, &cat.v1_a]),
        ),
        (
            "step3",
            &cat.v1_b,
            &cat.v1_b3,
            &bs.b3,
            &bs.b1,
            d3 - d1,
            union(&[&cat.v1_i, &cat.v1_a, &cat.v1_b]),
        ),
    ];
    for (step, whole, pruned, outer, inner, expected_count, cumulative) in steps {
        checks.push(Check::eq(
            format!("lemma.v1injective.{step}.count"),
            expected_count,
            pruned.len(),
        ));
        let inside = pruned.iter().all(|&x| {
            wb.pres
                .psi_column(x)
                .iter()
                .all(|(i, _)| outer.binary_search(i).is_ok())
        });
        checks.push(Check::new(
            format!("lemma.v1injective.{step}.support"),
            "inside",
            if inside { "inside" } else { "outside" },
            inside,
        ));
        let (rp, c1) = wb.psi_rank(pruned, &[])?;
        let (ro, c2) = wb.psi_rank(pruned, &units(inner))?;
        checks.push(
            Check::new(
                format!("lemma.v1injective.{step}.direct-sum"),
                format!("{} = {} + {}", outer.len(), pruned.len(), inner.len()),
                format!("{ro} = {rp} + {}", inner.len()),
                rp == pruned.len() && ro == outer.len() && rp + inner.len() == outer.len(),
            )
            .with_certification(&c1.combine(&c2)),
        );
        // Pruning does not change the image, and the cumulative image complements `inner`.
        let mut smaller: Vec<usize> = cumulative
            .iter()
            .copied()
            .filter(|x| !whole.contains(x))
            .collect();
        smaller.extend(pruned.iter().copied());
        let (rs, c3) = wb.psi_rank(&smaller, &[])?;
        let (rc, c4) = wb.psi_rank(&cumulative, &[])?;
        let (rci, c5) = wb.psi_rank(&cumulative, &units(inner))?;
        checks.push(
            Check::new(
                format!("lemma.v1injective.{step}.cumulative"),
                format!("{} {} {n}", n - inner.len(), n - inner.len()),
                format!("{rs} {rc} {rci}"),
                rs == n - inner.len() && rc == rs && rci == n,
            )
            .with_certification(&c3.combine(&c4).combine(&c5)),
        );
    }
    Ok(checks)
}

/// The full injectivity lemma for `V1`: the `B_g` side plus injectivity in `A_g`
/// and the pruning steps as span equalities in `A_g`.
pub fn verify_v1injective(wb: &Workbench) -> Result<Vec<Check>> {
    let mut checks = verify_v1injective_image(wb)?;
    let cat = &wb.catalog;
    let (q, c) = wb.quotient_dim(&cat.v1)?;
    let (r, c2) = wb.psi_rank(&cat.v1, &[])?;
    checks.push(Check::eq("lemma.v1injective.quotient", r, q).with_certification(&c.combine(&c2)));
    let pairs = [
        (
            "lemma.v1injective.first-slot",
            cat.v1.clone(),
            union(&[&cat.v1_i, &cat.v1_a, &cat.v1_b]),
        ),
        (
            "lemma.v1injective.prune-a",
            union(&[&cat.v1_i, &cat.v1_a]),
            union(&[&cat.v1_i, &cat.v1_a3]),
        ),
        (
            "lemma.v1injective.prune-b",
            union(&[&cat.v1_i, &cat.v1_a, &cat.v1_b]),
            union(&[&cat.v1_i, &cat.v1_a, &cat.v1_b3]),
        ),
    ];
    for (name, big, small) in pairs {
        let (qb, c1) = wb.quotient_dim(&big)?;
        let (qs, c2) = wb.quotient_dim(&small)?;
        checks.push(Check::eq(name, qb, qs).with_certification(&c1.combine(&c2)));
    }
    Ok(checks)
}

/// Standard quadruple `(a_1, b_1, a_2, b_2)`.
fn standard_quadruple(ar: &IndexArith) -> [usize; 4] {
    [ar.basis(0), ar.basis(1), ar.basis(2), ar.basis(3)]
}

fn transvect(ar: &IndexArith, x: usize, d: usize, sign: i64) -> usize {
    ar.add(x, ar.scale(d, sign * ar.pairing(x, d) as i64))
}

/// Left minus right side of the eight-term relation.
fn eight_term(wb: &Workbench, v: usize, q: [usize; 4]) -> Result<IntVec> {
    let ar = wb.ar();
    let x = |v, a, b| wb.pres.x(v, a, b);
    let [a1, b1, a2, b2] = q;
    Ok(normalize_int(vec![
        (x(v, a1, a2)?, 1),
        (x(ar.add(v, b1), a1, a2)?, -1),
        (x(ar.add(v, b2), a1, a2)?, -1),
        (x(ar.add(ar.add(v, b1), b2), a1, a2)?, 1),
        (x(v, b1, b2)?, -1),
        (x(ar.add(v, a1), b1, b2)?, 1),
        (x(ar.add(v, a2), b1, b2)?, 1),
        (x(ar.add(ar.add(v, a1), a2), b1, b2)?, -1),
    ]))
}

fn check_quadruple(wb: &Workbench, q: [usize; 4]) -> Result<()> {
    let ar = wb.ar();
    let [a1, b1, a2, b2] = q;
    let ok = ar.pairing(a1, b1) == 1
        && ar.pairing(a2, b2) == 1
        && [(a1, a2), (a1, b2), (b1, a2), (b1, b2)]
            .iter()
            .all(|&(x, y)| ar.pairing(x, y) == 0)
        && crate::lattice::is_unimodular(&q.map(|x| ar.vector(x)))?;
    if !ok {
        return Err(Error::Construction(
            "quadruple is not a symplectic unimodular set".into(),
        ));
    }
    Ok(())
}

/// The eight-term relation for the standard quadruple and `samples` transvected
/// ones, for every `v`, together with equality of the `psi` images.
pub fn verify_newrelation2(wb: &Workbench, samples: usize, seed: u64) -> Result<Vec<Check>> {
    if wb.genus() < 2 {
        return Ok(vec![vacuous("lemma.newrelation2", "needs g >= 2")]);
    }
    let ar = wb.ar();
    let n = wb.order();
    let mut quads = vec![("standard".to_string(), standard_quadruple(ar))];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let primitive: Vec<usize> = (1..n).filter(|&d| ar.vector(d).is_primitive()).collect();
    for k in 0..samples {
        let mut q = standard_quadruple(ar);
        for _ in 0..4 {
            let d = primitive[rng.gen_range(0..primitive.len())];
            let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
            q = q.map(|x| transvect(ar, x, d, sign));
        }
        quads.push((format!("transvected-{k}"), q));
    }
    let span = wb.relation_span()?;
    let mut checks = Vec::new();
    for (label, q) in quads {
        check_quadruple(wb, q)?;
        let mut items = Vec::with_capacity(n);
        let mut psi_equal = 0;
        for v in 0..n {
            let diff = eight_term(wb, v, q)?;
            psi_equal += wb.pres.psi_of(&diff).is_empty() as usize;
            items.push((format!("v={}", ar.vector(v).label()), diff));
        }
        checks.push(tally(&format!("lemma.newrelation2.{label}"), span, &items)?);
        checks.push(Check::new(
            format!("lemma.newrelation2.{label}.psi-equal"),
            format!("{n} of {n}"),
            format!("{psi_equal} of {n}"),
            psi_equal == n,
        ));
    }
    Ok(checks)
}

/// Injectivity of `psi` on `span(V)` and `B_g = psi(span V) + span(rho[0])`.
pub fn verify_psiinjective(wb: &Workbench) -> Result<Vec<Check>> {
    if wb.genus() < 2 {
        return Ok(vec![vacuous("lemma.psiinjective", "needs g >= 2")]);
    }
    let n = wb.order();
    let all = wb.catalog.all();
    let (q, c) = wb.quotient_dim(&all)?;
    let (r, c2) = wb.psi_rank(&all, &[])?;
    let (r0, c3) = wb.psi_rank(&all, &[vec![(0, 1)]])?;
    Ok(vec![
        Check::eq("lemma.psiinjective.quotient-dim", n - 1, q).with_certification(&c),
        Check::eq("lemma.psiinjective.rank-psi", n - 1, r).with_certification(&c2),
        Check::eq("lemma.psiinjective.rank-with-rho0", n, r0).with_certification(&c3),
    ])
}

/// The seven claims of the injectivity proof and the formula for `psi(Z)`, each as
/// a membership or rank statement modulo `M1` or `psi(span V1)`.
pub fn verify_claims(wb: &Workbench) -> Result<Vec<Check>> {
    if wb.genus() < 2 {
        return Ok(vec![vacuous("claim", "needs g >= 2")]);
    }
    let ar = wb.ar();
    let n = wb.order();
    let g = wb.genus();
    let l = wb.level();
    let basis = wb.basis();
    let signs = wb.signs();
    let m1 = wb.m1_span()?;
    let x = |v, a, b| wb.pres.x(v, a, b);
    let label =
        |v: usize, s: usize| format!("v={} s={}", ar.vector(v).label(), ar.vector(s).label());
    let mut checks = Vec::new();

    // Claim 1: the choice of second vector does not matter modulo M1.
    let mut items = Vec::new();
    for &s in &basis {
        let others: Vec<usize> = basis
            .iter()
            .copied()
            .filter(|&t| t != s && ar.pairing(s, t) == 0)
            .collect();
        for &s1 in &others {
            for &s2 in &others {
                for &e1 in &signs {
                    for &e2 in &signs {
                        for v in 0..n {
                            let a = x(v, s, ar.add(s, ar.scale(s1, e1)))?;
                            let b = x(v, s, ar.add(s, ar.scale(s2, e2)))?;
                            if a != b {
                                items.push((label(v, s), normalize_int(vec![(a, 1), (b, -1)])));
                            }
                        }
                    }
                }
            }
        }
    }
    checks.push(tally("claim.1", m1, &items)?);

    // Claim 2: only the handle part of v matters.
    let mut items = Vec::new();
    for (k, &s) in basis.iter().enumerate() {
        for v in 0..n {
            let v1 = wb.handle_part(v, k / 2);
            if v1 != v {
                items.push((
                    label(v, s),
                    normalize_int(vec![(wb.y_lift(v, s)?, 1), (wb.y_lift(v1, s)?, -1)]),
                ));
            }
        }
    }
    checks.push(tally("claim.2", m1, &items)?);

    // Claim 3: the six-term Y relation on each handle.
    let y = |v, s| -> Result<IntVec> { Ok(vec![(wb.y_lift(v, s)?, 1)]) };
    let mut items = Vec::new();
    for i in 0..g {
        let (ai, bi) = (ar.basis(2 * i), ar.basis(2 * i + 1));
        for v in wb.handle_vectors(i) {
            let terms = [
                (1, y(v, ai)?),
                (-2, y(ar.add(v, bi), ai)?),
                (1, y(ar.add(v, ar.scale(bi, 2)), ai)?),
                (-1, y(v, bi)?),
                (2, y(ar.add(v, ai), bi)?),
                (-1, y(ar.add(v, ar.scale(ai, 2)), bi)?),
            ];
            let refs: Vec<(i64, &IntVec)> = terms.iter().map(|(k, v)| (*k, v)).collect();
            items.push((
                format!("i={} v={}", i + 1, ar.vector(v).label()),
                combine(&refs),
            ));
        }
    }
    checks.push(tally("claim.3", m1, &items)?);

    // Claim 4 and the Z formula live in B_g modulo psi(span V1).
    let psi_v1 = wb
        .linalg
        .span(n, Vectors::Int(&wb.pres.psi_columns(&wb.catalog.v1)), true)?;
    let mut items4 = Vec::new();
    let mut items_z = Vec::new();
    for (k, &s) in basis.iter().enumerate() {
        for v in wb.handle_vectors(k / 2) {
            let lift = vec![(wb.y_lift(v, s)?, 1)];
            let target = vec![(v, 1), (ar.add(v, s), -2), (ar.add(v, ar.scale(s, 2)), 1)];
            let mut diff = wb.pres.psi_of(&lift);
            diff.extend(scaled(&target, -1));
            items4.push((label(v, s), normalize_int(diff)));
            let z = wb.z_lift(v, s)?;
            let mut diff = wb.pres.psi_of(&z);
            diff.extend([(ar.add(v, s), -l), (v, l)]);
            items_z.push((label(v, s), normalize_int(diff)));
        }
    }
    checks.push(tally("claim.4", psi_v1.as_ref(), &items4)?);
    checks.push(tally("claim.z-formula", psi_v1.as_ref(), &items_z)?);

    // Claim 5: the Z relation.
    let mut items = Vec::new();
    for i in 0..g {
        let (ai, bi) = (ar.basis(2 * i), ar.basis(2 * i + 1));
        for v in wb.handle_vectors(i) {
            let terms = [
                (1, wb.z_lift(v, ai)?),
                (-2, wb.z_lift(ar.add(v, bi), ai)?),
                (1, wb.z_lift(ar.add(v, ar.scale(bi, 2)), ai)?),
                (-l, y(ar.add(v, ai), bi)?),
                (l, y(v, bi)?),
            ];
            let refs: Vec<(i64, &IntVec)> = terms.iter().map(|(k, v)| (*k, v)).collect();
            items.push((
                format!("i={} v={}", i + 1, ar.vector(v).label()),
                combine(&refs),
            ));
        }
    }
    checks.push(tally("claim.5", m1, &items)?);

    // Claim 6: the small generating set for V2 modulo M1.
    let mut gens = Vec::new();
    for i in 0..g {
        let (ai, bi) = (ar.basis(2 * i), ar.basis(2 * i + 1));
        for c in 0..l {
            for d in 0..l {
                if c != l - 1 {
                    gens.push(wb.y_lift(ar.add(ar.scale(ai, c), ar.scale(bi, d)), ai)?);
                }
            }
            if c != l - 1 {
                gens.push(wb.y_lift(ar.scale(bi, c), bi)?);
            }
        }
    }
    let expected = g * (l * l - 1) as usize;
    checks.push(Check::eq("claim.6.count", expected, gens.len()));
    let q_gens = m1.quotient_rank(Vectors::Int(&units(&gens)))?;
    let q_v2 = m1.quotient_rank(Vectors::Int(&units(&wb.catalog.v2)))?;
    let q_both = m1.quotient_rank(Vectors::Int(&units(&union(&[&gens, &wb.catalog.v2]))))?;
    checks.push(
        Check::new(
            "claim.6",
            format!("{expected} {expected} {expected}"),
            format!("{q_gens} {q_v2} {q_both}"),
            q_gens == expected && q_v2 == q_gens && q_both == q_gens,
        )
        .with_certification(&m1.certification()),
    );

    // Claim 7: psi(V2), psi(V1) and rho[0] span B_g.
    let v12 = wb.catalog.v12();
    let (r, c) = wb.psi_rank(&v12, &[vec![(0, 1)]])?;
    checks.push(Check::eq("claim.7", n, r).with_certification(&c));
    Ok(checks)
}

/// The closed-form dimension identities for every `g <= max_g`, `2 <= L <= max_l`.
pub fn verify_counting_identities(max_g: u64, max_l: u64) -> Vec<Check> {
    let mut failures = Vec::new();
    let mut total = 0;
    for g in 1..=max_g {
        for l in 2..=max_l {
            let (d1, d2, d3) = b_dims(g, l);
            let (a3, b3) = pruned_counts(g, l);
            total += 1;
            if a3 != d2 - d3 || b3 != d3 - d1 || g * (l * l - 1) != d1 - 1 {
                failures.push(format!("({g}, {l})"));
            }
        }
    }
    vec![Check::new(
        "count.identities",
        format!("{total} of {total}"),
        format!(
            "{} of {total}{}",
            total - failures.len(),
            if failures.is_empty() {
                String::new()
            } else {
                format!("; failing {}", failures.join(" "))
            }
        ),
        failures.is_empty(),
    )]
}

/// The set sizes of `B^1`, `B^2`, `B^3` enumerated for small lattices, against the
/// closed forms.
pub fn verify_b_dims_enumerated(params: &[(usize, u64)]) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for &(g, l) in params {
        let p = crate::lattice::LatticeParams::new(g, l)?;
        let bs = BSpaces::new(&IndexArith::new(p));
        let (d1, d2, d3) = b_dims(g as u64, l);
        checks.push(Check::eq(
            format!("count.b-dims.g{g}-L{l}"),
            format!("{d1} {d2} {d3}"),
            format!("{} {} {}", bs.b1.len(), bs.b2.len(), bs.b3.len()),
        ));
    }
    Ok(checks)
}
