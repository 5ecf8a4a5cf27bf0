//! The presented space `A_g`, its generators `X(v, w1, w2)`, the four relation
//! families and the map `psi` into `B_g`.
//!
//! Generators are indexed by `index(v) * P + p`, where `p` is the position of the
//! ordered pair `(w1, w2)` in the lexicographic pair list of length `P`. This is the
//! lexicographic order on `(index(v), index(w1), index(w2))`.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::group_ring::four_term;
use crate::lattice::{enumerate_iso_uni_pairs, is_unimodular, IndexArith, LatticeParams, ZlVector};
use crate::linalg::{normalize_int, IntVec, SparseRationalMatrix};

pub mod catalog;
pub mod verify;

pub use catalog::{BSpaces, VCatalog};

/// Cap on the number of generators `L^{2g} * P`.
pub const DEFAULT_GENERATOR_CAP: usize = 4_000_000;

#[derive(Clone, PartialEq, Eq)]
pub struct XGenerator {
    pub v: ZlVector,
    pub w1: ZlVector,
    pub w2: ZlVector,
    pub index: usize,
}

impl fmt::Debug for XGenerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "X({}, {}, {})",
            self.v.label(),
            self.w1.label(),
            self.w2.label()
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RelationFamily {
    R1,
    R2,
    R3,
    R4,
}

impl RelationFamily {
    pub const ALL: [RelationFamily; 4] = [Self::R1, Self::R2, Self::R3, Self::R4];
}

impl fmt::Display for RelationFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// Rows of one relation family in the free space on the generators.
#[derive(Clone, Debug)]
pub struct RelationTable {
    pub family: RelationFamily,
    pub rows: Vec<IntVec>,
}

/// The admissible `w3` of the fourth relation for one pair, with the pair
/// positions of `(w1 + w3, w2)` and `(w3, w2)`.
#[derive(Clone, Debug)]
struct R4Move {
    sum_pair: u32,
    w3_pair: u32,
}

/// Generator indexing for one `(g, L)`.
pub struct Presentation {
    ar: IndexArith,
    pairs: Vec<(usize, usize)>,
    lookup: HashMap<(usize, usize), u32>,
}

impl Presentation {
    pub fn new(params: LatticeParams) -> Result<Self> {
        Self::with_cap(params, DEFAULT_GENERATOR_CAP)
    }

    pub fn with_cap(params: LatticeParams, cap: usize) -> Result<Self> {
        let n = params.order();
        if n > cap {
            return Err(Error::budget(
                "generator enumeration",
                n as u128,
                cap as u128,
            ));
        }
        let pairs: Vec<(usize, usize)> = enumerate_iso_uni_pairs(params, n)?
            .into_iter()
            .map(|(a, b)| (a.index(), b.index()))
            .collect();
        let total = n as u128 * pairs.len() as u128;
        if total > cap as u128 {
            return Err(Error::budget("generator enumeration", total, cap as u128));
        }
        let lookup = pairs
            .iter()
            .enumerate()
            .map(|(i, p)| (*p, i as u32))
            .collect();
        Ok(Self {
            ar: IndexArith::new(params),
            pairs,
            lookup,
        })
    }

    pub fn params(&self) -> LatticeParams {
        self.ar.params()
    }

    pub fn arith(&self) -> &IndexArith {
        &self.ar
    }

    /// Ordered isotropic unimodular pairs as vector indices.
    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn pair_count(&self) -> usize {
        self.pairs.len()
    }

    pub fn generator_count(&self) -> usize {
        self.params().order() * self.pairs.len()
    }

    pub fn pair_position(&self, w1: usize, w2: usize) -> Option<usize> {
        self.lookup.get(&(w1, w2)).map(|&p| p as usize)
    }

    /// Index of `X(v, w1, w2)` given vector indices, if the pair is admissible.
    pub fn index(&self, v: usize, w1: usize, w2: usize) -> Option<usize> {
        self.pair_position(w1, w2).map(|p| v * self.pairs.len() + p)
    }

    /// Like `index` but an inadmissible pair is a construction error.
    pub fn x(&self, v: usize, w1: usize, w2: usize) -> Result<usize> {
        self.index(v, w1, w2).ok_or_else(|| {
            Error::Construction(format!(
                "X({}, {}, {}) is not a generator",
                self.ar.vector(v).label(),
                self.ar.vector(w1).label(),
                self.ar.vector(w2).label()
            ))
        })
    }

    /// `(v, w1, w2)` vector indices of a generator.
    pub fn parts(&self, index: usize) -> (usize, usize, usize) {
        let (v, p) = (index / self.pairs.len(), index % self.pairs.len());
        let (w1, w2) = self.pairs[p];
        (v, w1, w2)
    }

    pub fn generator(&self, index: usize) -> XGenerator {
        let (v, w1, w2) = self.parts(index);
        XGenerator {
            v: self.ar.vector(v),
            w1: self.ar.vector(w1),
            w2: self.ar.vector(w2),
            index,
        }
    }

    pub fn enumerate_generators(&self) -> impl Iterator<Item = XGenerator> + '_ {
        (0..self.generator_count()).map(|i| self.generator(i))
    }

    pub fn label(&self, index: usize) -> String {
        format!("{:?}", self.generator(index))
    }

    /// `psi(X)` as a vector in `B_g`.
    pub fn psi_column(&self, index: usize) -> IntVec {
        let (v, w1, w2) = self.parts(index);
        normalize_int(four_term(&self.ar, v, w1, w2).to_vec())
    }

    /// `psi` applied to an arbitrary vector in the free space.
    pub fn psi_of(&self, x: &IntVec) -> IntVec {
        let mut out = Vec::with_capacity(4 * x.len());
        for &(g, c) in x {
            out.extend(self.psi_column(g).into_iter().map(|(i, d)| (i, c * d)));
        }
        normalize_int(out)
    }

    pub fn psi_columns(&self, columns: &[usize]) -> Vec<IntVec> {
        columns.iter().map(|&c| self.psi_column(c)).collect()
    }

    /// The matrix whose `j`-th column is `psi` of generator `columns[j]`.
    pub fn psi_matrix(&self, columns: &[usize]) -> SparseRationalMatrix {
        SparseRationalMatrix::from_columns_int(self.params().order(), &self.psi_columns(columns))
            .expect("psi columns lie in B_g")
    }

    fn r4_moves(&self) -> Result<Vec<Vec<R4Move>>> {
        let params = self.params();
        let ar = &self.ar;
        let n = params.order();
        let unit = |x: u64| x == 0 || x == 1 || x == params.level() - 1;
        let mut out = Vec::with_capacity(self.pairs.len());
        for &(w1, w2) in &self.pairs {
            let (v1, v2) = (ar.vector(w1), ar.vector(w2));
            let mut moves = Vec::new();
            for w3 in 0..n {
                if ar.pairing(w2, w3) != 0 || !unit(ar.pairing(w1, w3)) || w3 == w1 || w3 == w2 {
                    continue;
                }
                if !is_unimodular(&[v1.clone(), v2.clone(), ar.vector(w3)])? {
                    continue;
                }
                let sum = ar.add(w1, w3);
                let sum_pair = self.pair_position(sum, w2);
                let w3_pair = self.pair_position(w3, w2);
                match (sum_pair, w3_pair) {
                    (Some(s), Some(t)) => moves.push(R4Move {
                        sum_pair: s as u32,
                        w3_pair: t as u32,
                    }),
                    _ => {
                        return Err(Error::Construction(format!(
                        "fourth relation for ({}, {}) with w3 = {} references an invalid generator",
                        v1.label(),
                        v2.label(),
                        ar.vector(w3).label()
                    )))
                    }
                }
            }
            out.push(moves);
        }
        Ok(out)
    }

    /// Number of rows in each family, without building them.
    pub fn relation_counts(&self) -> Result<[usize; 4]> {
        let n = self.params().order();
        let per_v: usize = self.r4_moves()?.iter().map(|m| m.len()).sum();
        let g = self.generator_count();
        Ok([g, g, g, n * per_v])
    }

    /// All relation rows, family by family.
    pub fn relations(&self) -> Result<Vec<RelationTable>> {
        Ok(RelationFamily::ALL
            .iter()
            .zip(self.relation_rows()?)
            .map(|(&family, rows)| RelationTable { family, rows })
            .collect())
    }

    fn relation_rows(&self) -> Result<[Vec<IntVec>; 4]> {
        let ar = &self.ar;
        let n = self.params().order();
        let np = self.pairs.len();
        let level = self.params().level() as i64;
        let moves = self.r4_moves()?;
        let swapped: Vec<usize> = self
            .pairs
            .iter()
            .map(|&(a, b)| self.x(0, b, a))
            .collect::<Result<_>>()?;
        let neg_first: Vec<usize> = self
            .pairs
            .iter()
            .map(|&(a, b)| self.x(0, ar.neg(a), b))
            .collect::<Result<_>>()?;
        let mut r = [Vec::new(), Vec::new(), Vec::new(), Vec::new()];
        for v in 0..n {
            for (p, &(w1, _)) in self.pairs.iter().enumerate() {
                let here = v * np + p;
                r[0].push(normalize_int(vec![(here, 1), (v * np + swapped[p], -1)]));
                let back = ar.sub(v, w1) * np + p;
                r[1].push(normalize_int(vec![(v * np + neg_first[p], 1), (back, 1)]));
                let orbit = (0..level)
                    .map(|i| (ar.add(v, ar.scale(w1, i)) * np + p, 1))
                    .collect();
                r[2].push(normalize_int(orbit));
                for m in &moves[p] {
                    let row = vec![
                        (v * np + m.sum_pair as usize, 1),
                        (here, -1),
                        (ar.add(v, w1) * np + m.w3_pair as usize, -1),
                    ];
                    r[3].push(normalize_int(row));
                }
            }
        }
        Ok(r)
    }

    /// All relation rows in one list (families concatenated in order).
    pub fn relation_vectors(&self) -> Result<Vec<IntVec>> {
        Ok(self.relation_rows()?.into_iter().flatten().collect())
    }
}
