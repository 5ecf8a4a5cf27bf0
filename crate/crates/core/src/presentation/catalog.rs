//! The generator families `V1`, `V2`, `V3` built from the standard symplectic
//! basis, the subfamilies used to prune `V1`, and the subspaces `B^1`, `B^2`, `B^3`
//! of `B_g`.

use std::collections::BTreeSet;

use crate::error::Result;
use crate::lattice::IndexArith;

use super::Presentation;

/// Generator index lists, each sorted and free of repeats.
#[derive(Clone, Debug, Default)]
pub struct VCatalog {
    pub v1: Vec<usize>,
    pub v2: Vec<usize>,
    pub v3: Vec<usize>,
    /// `V1` with neither slot in `{a_g, b_g}`.
    pub v1_i: Vec<usize>,
    /// `V1` with first slot `a_g`.
    pub v1_a: Vec<usize>,
    /// `V1` with first slot `b_g`.
    pub v1_b: Vec<usize>,
    pub v1_a1: Vec<usize>,
    pub v1_a2: Vec<usize>,
    pub v1_a3: Vec<usize>,
    pub v1_b1: Vec<usize>,
    pub v1_b2: Vec<usize>,
    pub v1_b3: Vec<usize>,
}

/// Basis index sets of `B^1`, `B^2`, `B^3` inside `B_g`.
#[derive(Clone, Debug, Default)]
pub struct BSpaces {
    pub b1: Vec<usize>,
    pub b2: Vec<usize>,
    pub b3: Vec<usize>,
}

fn sorted(set: BTreeSet<usize>) -> Vec<usize> {
    set.into_iter().collect()
}

/// Closed-form dimensions `(dim B^1, dim B^2, dim B^3)`.
pub fn b_dims(g: u64, l: u64) -> (u64, u64, u64) {
    let s = l * l - 1;
    (
        g * s + 1,
        (g - 1) * s * l * l + l * l,
        (g - 1) * s * l + l * l,
    )
}

/// Closed-form sizes `(|V1^{A,3}|, |V1^{B,3}|)`.
pub fn pruned_counts(g: u64, l: u64) -> (u64, u64) {
    let m = (l - 1) * (l - 1);
    ((g - 1) * (l * l * m + l * m), (g - 1) * (m * l + m))
}

impl BSpaces {
    pub fn new(ar: &IndexArith) -> Self {
        let g = ar.params().genus();
        let l = ar.params().level() as i64;
        let (a, b) = (|i: usize| ar.basis(2 * i), |i: usize| ar.basis(2 * i + 1));
        let comb = |terms: &[(i64, usize)]| {
            terms
                .iter()
                .fold(0, |acc, &(k, x)| ar.add(acc, ar.scale(x, k)))
        };
        let (ag, bg) = (a(g - 1), b(g - 1));
        let mut b1 = BTreeSet::new();
        let mut b2 = BTreeSet::new();
        let mut b3 = BTreeSet::new();
        for c in 0..l {
            for d in 0..l {
                for i in 0..g {
                    b1.insert(comb(&[(c, a(i)), (d, b(i))]));
                }
                b2.insert(comb(&[(c, ag), (d, bg)]));
                b3.insert(comb(&[(c, ag), (d, bg)]));
                for e in 0..l {
                    for i in 0..g - 1 {
                        b3.insert(comb(&[(c, a(i)), (d, b(i)), (e, bg)]));
                        for f in 0..l {
                            b2.insert(comb(&[(c, a(i)), (d, b(i)), (e, ag), (f, bg)]));
                        }
                    }
                }
            }
        }
        Self {
            b1: sorted(b1),
            b2: sorted(b2),
            b3: sorted(b3),
        }
    }
}

impl VCatalog {
    pub fn new(pres: &Presentation) -> Result<Self> {
        let ar = pres.arith();
        let params = pres.params();
        let g = params.genus();
        let n = params.order();
        let l = params.level() as i64;
        let basis: Vec<usize> = (0..2 * g).map(|k| ar.basis(k)).collect();
        let signs: Vec<i64> = if l == 2 { vec![1] } else { vec![1, l - 1] };

        let mut cat = VCatalog::default();
        let mut v1 = BTreeSet::new();
        let mut v2 = BTreeSet::new();
        let mut v3 = BTreeSet::new();
        for &s1 in &basis {
            for &s2 in &basis {
                if s1 == s2 || ar.pairing(s1, s2) != 0 {
                    continue;
                }
                for v in 0..n {
                    v1.insert(pres.x(v, s1, s2)?);
                    for &e in &signs {
                        v2.insert(pres.x(v, s1, ar.add(s1, ar.scale(s2, e)))?);
                    }
                }
            }
        }
        for &s1 in &basis {
            for &s2 in &basis {
                for &s3 in &basis {
                    for &s4 in &basis {
                        let distinct = [s1, s2, s3, s4];
                        if (0..4).any(|i| distinct[i + 1..].contains(&distinct[i]))
                            || ar.pairing(s1, s3) != 1
                        {
                            continue;
                        }
                        for &e in &signs {
                            for &f in &signs {
                                let w1 = ar.add(s1, ar.scale(s2, e));
                                let w2 = ar.add(s3, ar.scale(s4, f));
                                if ar.pairing(w1, w2) != 0 {
                                    continue;
                                }
                                for v in 0..n {
                                    v3.insert(pres.x(v, w1, w2)?);
                                }
                            }
                        }
                    }
                }
            }
        }
        cat.v1 = sorted(v1);
        cat.v2 = sorted(v2);
        cat.v3 = sorted(v3);

        let (ag, bg) = (ar.basis(2 * g - 2), ar.basis(2 * g - 1));
        for &x in &cat.v1 {
            let (_, s1, s2) = pres.parts(x);
            if ![s1, s2].iter().any(|s| *s == ag || *s == bg) {
                cat.v1_i.push(x);
            }
            if s1 == ag {
                cat.v1_a.push(x);
            }
            if s1 == bg {
                cat.v1_b.push(x);
            }
        }

        // Index of a_g, b_g coordinates, and of a_i, b_i, in the coordinate list.
        let (ca_g, cb_g) = (2 * g - 2, 2 * g - 1);
        let comb = |terms: &[(i64, usize)]| {
            terms
                .iter()
                .fold(0, |acc, &(k, x)| ar.add(acc, ar.scale(x, k)))
        };
        let top = (l - 1) as usize;
        let mut a1 = BTreeSet::new();
        let mut a2 = BTreeSet::new();
        let mut b1 = BTreeSet::new();
        let mut b2 = BTreeSet::new();
        for i in 0..g - 1 {
            let (ai, bi) = (ar.basis(2 * i), ar.basis(2 * i + 1));
            for c in 0..l {
                for d in 0..l {
                    for f in 0..l {
                        let w = comb(&[(c, ai), (d, bi), (f, bg)]);
                        for s in [ai, bi] {
                            b1.insert(pres.x(w, bg, s)?);
                        }
                        b2.insert(pres.x(w, bg, ai)?);
                        if c == 0 {
                            b2.insert(pres.x(w, bg, bi)?);
                        }
                        for e in 0..l {
                            let w = comb(&[(c, ai), (d, bi), (e, ag), (f, bg)]);
                            for s in [ai, bi] {
                                a1.insert(pres.x(w, ag, s)?);
                            }
                            a2.insert(pres.x(w, ag, ai)?);
                            if c == 0 {
                                a2.insert(pres.x(w, ag, bi)?);
                            }
                        }
                    }
                }
            }
        }
        // The coordinate of `v` along `s`, and along the first slot.
        let restricted = |x: usize, first_coord: usize| {
            let (v, _, s) = pres.parts(x);
            let s_coord = (0..2 * g)
                .find(|&k| ar.basis(k) == s)
                .expect("basis vector");
            ar.digit(v, s_coord) != top && ar.digit(v, first_coord) != top
        };
        cat.v1_a1 = sorted(a1);
        cat.v1_a2 = sorted(a2);
        cat.v1_a3 = cat
            .v1_a2
            .iter()
            .copied()
            .filter(|&x| restricted(x, ca_g))
            .collect();
        cat.v1_b1 = sorted(b1);
        cat.v1_b2 = sorted(b2);
        cat.v1_b3 = cat
            .v1_b2
            .iter()
            .copied()
            .filter(|&x| restricted(x, cb_g))
            .collect();
        Ok(cat)
    }

    /// `V1 ∪ V2 ∪ V3`, sorted.
    pub fn all(&self) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .v1
            .iter()
            .chain(&self.v2)
            .chain(&self.v3)
            .copied()
            .collect();
        out.sort_unstable();
        out
    }

    pub fn v12(&self) -> Vec<usize> {
        let mut out: Vec<usize> = self.v1.iter().chain(&self.v2).copied().collect();
        out.sort_unstable();
        out
    }
}
