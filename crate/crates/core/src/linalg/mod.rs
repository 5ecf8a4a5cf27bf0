//! Exact sparse linear algebra: rank, span membership, kernels and quotient dimensions.

pub mod backend;
pub mod dense;
pub mod echelon;
pub mod field;
pub mod matrix;

use num_bigint::BigInt;

use crate::error::{Error, Result};
pub use backend::{
    BackendRegistry, Certification, Linalg, Membership, Minor, Mode, QuotientDim, RankBackend,
    RankCertificate, Span, DEFAULT_EXACT_COL_CAP,
};
use field::Field;
pub use field::Rational;
pub use matrix::{MatrixCache, SparseRationalMatrix};

/// Sparse integer vector as `(index, coefficient)` pairs.
pub type IntVec = Vec<(usize, i64)>;
/// Sparse rational vector as `(index, coefficient)` pairs.
pub type RatVec = Vec<(usize, Rational)>;

/// A borrowed family of sparse vectors, integer or rational.
#[derive(Clone, Copy, Debug)]
pub enum Vectors<'a> {
    Int(&'a [IntVec]),
    Rat(&'a [RatVec]),
}

/// A single borrowed sparse vector.
#[derive(Clone, Copy, Debug)]
pub enum VecRef<'a> {
    Int(&'a [(usize, i64)]),
    Rat(&'a [(usize, Rational)]),
}

impl<'a> Vectors<'a> {
    pub fn len(&self) -> usize {
        match self {
            Vectors::Int(v) => v.len(),
            Vectors::Rat(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn get(&self, i: usize) -> VecRef<'a> {
        match *self {
            Vectors::Int(v) => VecRef::Int(&v[i]),
            Vectors::Rat(v) => VecRef::Rat(&v[i]),
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = VecRef<'a>> + '_ {
        (0..self.len()).map(move |i| self.get(i))
    }

    pub(crate) fn check_dim(&self, dim: usize) -> Result<()> {
        for (i, v) in self.iter().enumerate() {
            if let Some(c) = v.indices().find(|&c| c >= dim) {
                return Err(Error::Input(format!(
                    "vector {i} has index {c} outside dimension {dim}"
                )));
            }
        }
        Ok(())
    }
}

impl<'a> VecRef<'a> {
    pub fn indices(&self) -> Box<dyn Iterator<Item = usize> + 'a> {
        match *self {
            VecRef::Int(v) => Box::new(v.iter().map(|(c, _)| *c)),
            VecRef::Rat(v) => Box::new(v.iter().map(|(c, _)| *c)),
        }
    }

    /// Image in a field; `None` if some denominator vanishes there.
    pub fn to_field<F: Field>(&self, f: &F) -> Option<Vec<(usize, F::Elem)>> {
        match self {
            VecRef::Int(v) => Some(v.iter().map(|(c, x)| (*c, f.from_i64(*x))).collect()),
            VecRef::Rat(v) => v
                .iter()
                .map(|(c, x)| f.from_rational(x).map(|e| (*c, e)))
                .collect(),
        }
    }

    pub fn to_rational(&self) -> RatVec {
        match self {
            VecRef::Int(v) => v
                .iter()
                .map(|(c, x)| (*c, Rational::from_integer(BigInt::from(*x))))
                .collect(),
            VecRef::Rat(v) => v.to_vec(),
        }
    }
}

/// Sums duplicate indices, drops zeros and sorts by index.
pub fn normalize_rat(mut v: RatVec) -> RatVec {
    use num_traits::Zero;
    v.sort_by_key(|(c, _)| *c);
    let mut out: RatVec = Vec::with_capacity(v.len());
    for (c, x) in v {
        match out.last_mut() {
            Some((lc, lx)) if *lc == c => *lx += x,
            _ => out.push((c, x)),
        }
    }
    out.retain(|(_, x)| !x.is_zero());
    out
}

/// Integer analogue of [`normalize_rat`].
pub fn normalize_int(mut v: IntVec) -> IntVec {
    v.sort_by_key(|(c, _)| *c);
    let mut out: IntVec = Vec::with_capacity(v.len());
    for (c, x) in v {
        match out.last_mut() {
            Some((lc, lx)) if *lc == c => *lx += x,
            _ => out.push((c, x)),
        }
    }
    out.retain(|(_, x)| *x != 0);
    out
}

/// Unit vector `e_i`.
pub fn unit(i: usize) -> IntVec {
    vec![(i, 1)]
}
