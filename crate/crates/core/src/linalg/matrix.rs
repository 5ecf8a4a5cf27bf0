//! Sparse rational matrices and their on-disk triplet cache.

use std::fs;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use num_bigint::BigInt;
use num_traits::Zero;

use super::field::Rational;
use super::{normalize_rat, IntVec, RatVec};
use crate::error::{Error, Result};

/// Exact sparse matrix; entries sorted by `(row, col)`, no duplicates, no zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseRationalMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<(usize, usize, Rational)>,
}

impl SparseRationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: Vec::new(),
        }
    }

    pub fn identity(n: usize) -> Self {
        let entries = (0..n)
            .map(|i| (i, i, Rational::from_integer(1.into())))
            .collect();
        Self {
            rows: n,
            cols: n,
            entries,
        }
    }

    /// Builds a matrix, rejecting duplicates, stored zeros and out-of-range positions.
    pub fn from_triplets(
        rows: usize,
        cols: usize,
        mut entries: Vec<(usize, usize, Rational)>,
    ) -> Result<Self> {
        entries.sort_by_key(|(r, c, _)| (*r, *c));
        for w in entries.windows(2) {
            if (w[0].0, w[0].1) == (w[1].0, w[1].1) {
                return Err(Error::Input(format!(
                    "duplicate entry at ({}, {})",
                    w[0].0, w[0].1
                )));
            }
        }
        for (r, c, x) in &entries {
            if *r >= rows || *c >= cols {
                return Err(Error::Input(format!(
                    "entry ({r}, {c}) outside {rows}x{cols}"
                )));
            }
            if x.is_zero() {
                return Err(Error::Input(format!("stored zero at ({r}, {c})")));
            }
        }
        Ok(Self {
            rows,
            cols,
            entries,
        })
    }

    pub fn from_dense_i64(rows: &[&[i64]]) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        let entries = rows
            .iter()
            .enumerate()
            .flat_map(|(r, row)| {
                row.iter()
                    .enumerate()
                    .filter(|(_, x)| **x != 0)
                    .map(move |(c, x)| (r, c, Rational::from_integer(BigInt::from(*x))))
            })
            .collect();
        Self {
            rows: nrows,
            cols: ncols,
            entries,
        }
    }

    /// Matrix whose columns are the given sparse vectors of length `rows`.
    pub fn from_columns_int(rows: usize, columns: &[IntVec]) -> Result<Self> {
        let entries = columns
            .iter()
            .enumerate()
            .flat_map(|(c, col)| {
                col.iter()
                    .filter(|(_, x)| *x != 0)
                    .map(move |(r, x)| (*r, c, Rational::from_integer(BigInt::from(*x))))
            })
            .collect();
        Self::from_triplets(rows, columns.len(), entries)
    }

    pub fn from_columns(rows: usize, columns: &[RatVec]) -> Result<Self> {
        let entries = columns
            .iter()
            .enumerate()
            .flat_map(|(c, col)| {
                col.iter()
                    .filter(|(_, x)| !x.is_zero())
                    .map(move |(r, x)| (*r, c, x.clone()))
            })
            .collect();
        Self::from_triplets(rows, columns.len(), entries)
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[(usize, usize, Rational)] {
        &self.entries
    }

    pub fn row_vectors(&self) -> Vec<RatVec> {
        let mut out = vec![Vec::new(); self.rows];
        for (r, c, x) in &self.entries {
            out[*r].push((*c, x.clone()));
        }
        out
    }

    pub fn column_vectors(&self) -> Vec<RatVec> {
        let mut out = vec![Vec::new(); self.cols];
        for (r, c, x) in &self.entries {
            out[*c].push((*r, x.clone()));
        }
        out
    }

    pub fn transpose(&self) -> Self {
        let mut entries: Vec<_> = self
            .entries
            .iter()
            .map(|(r, c, x)| (*c, *r, x.clone()))
            .collect();
        entries.sort_by_key(|(r, c, _)| (*r, *c));
        Self {
            rows: self.cols,
            cols: self.rows,
            entries,
        }
    }

    /// Applies row and column permutations: entry `(r, c)` moves to `(row_perm[r], col_perm[c])`.
    pub fn permute(&self, row_perm: &[usize], col_perm: &[usize]) -> Self {
        let mut entries: Vec<_> = self
            .entries
            .iter()
            .map(|(r, c, x)| (row_perm[*r], col_perm[*c], x.clone()))
            .collect();
        entries.sort_by_key(|(r, c, _)| (*r, *c));
        Self {
            rows: self.rows,
            cols: self.cols,
            entries,
        }
    }

    /// `M x` for a sparse vector `x` of length `cols`.
    pub fn mul_vec(&self, x: &[(usize, Rational)]) -> RatVec {
        let mut dense = vec![Rational::zero(); self.cols];
        for (c, v) in x {
            dense[*c] += v;
        }
        let out = self
            .entries
            .iter()
            .filter(|(_, c, _)| !dense[*c].is_zero())
            .map(|(r, c, v)| (*r, v * &dense[*c]))
            .collect();
        normalize_rat(out)
    }

    /// Dense rows restricted to the given row and column indices.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Vec<Vec<Rational>> {
        let mut rpos = vec![usize::MAX; self.rows];
        for (i, r) in rows.iter().enumerate() {
            rpos[*r] = i;
        }
        let mut cpos = vec![usize::MAX; self.cols];
        for (j, c) in cols.iter().enumerate() {
            cpos[*c] = j;
        }
        let mut out = vec![vec![Rational::zero(); cols.len()]; rows.len()];
        for (r, c, x) in &self.entries {
            if rpos[*r] != usize::MAX && cpos[*c] != usize::MAX {
                out[rpos[*r]][cpos[*c]] = x.clone();
            }
        }
        out
    }

    /// Writes the triplet text format: header `rows cols nnz`, then `row col num/den` lines.
    pub fn write_triplets<W: Write>(&self, out: W) -> Result<()> {
        let mut out = BufWriter::new(out);
        writeln!(out, "{} {} {}", self.rows, self.cols, self.entries.len())?;
        for (r, c, x) in &self.entries {
            writeln!(out, "{} {} {}/{}", r, c, x.numer(), x.denom())?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn read_triplets<R: BufRead>(input: R) -> Result<Self> {
        let mut lines = input.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::Cache("empty triplet file".into()))??;
        let dims: Vec<usize> = header
            .split_whitespace()
            .map(|t| {
                t.parse()
                    .map_err(|_| Error::Cache(format!("bad header {header:?}")))
            })
            .collect::<Result<_>>()?;
        let [rows, cols, nnz] = dims[..] else {
            return Err(Error::Cache(format!("bad header {header:?}")));
        };
        let mut entries = Vec::with_capacity(nnz);
        for line in lines {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            entries.push(parse_triplet(&line)?);
        }
        if entries.len() != nnz {
            return Err(Error::Cache(format!(
                "expected {nnz} entries, found {}",
                entries.len()
            )));
        }
        Self::from_triplets(rows, cols, entries).map_err(|e| Error::Cache(e.to_string()))
    }
}

fn parse_triplet(line: &str) -> Result<(usize, usize, Rational)> {
    let bad = || Error::Cache(format!("bad triplet line {line:?}"));
    let mut parts = line.split_whitespace();
    let r = parts.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
    let c = parts.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
    let q = parts.next().ok_or_else(bad)?;
    if parts.next().is_some() {
        return Err(bad());
    }
    let (n, d) = q.split_once('/').ok_or_else(bad)?;
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok((r, c, Rational::new(n, d)))
}

const FORMAT_VERSION: &str = "v1";

/// Directory of cached matrices keyed by `(g, L, object)`.
#[derive(Clone, Debug)]
pub struct MatrixCache {
    root: PathBuf,
}

impl MatrixCache {
    pub fn new(root: impl Into<PathBuf>) -> Self {
        Self { root: root.into() }
    }

    pub fn path(&self, genus: usize, level: u64, object: &str) -> PathBuf {
        self.root
            .join(format!("g{genus}_L{level}"))
            .join(format!("{object}.{FORMAT_VERSION}.triplets"))
    }

    pub fn load(
        &self,
        genus: usize,
        level: u64,
        object: &str,
    ) -> Result<Option<SparseRationalMatrix>> {
        let path = self.path(genus, level, object);
        if !path.exists() {
            return Ok(None);
        }
        let file = fs::File::open(&path)?;
        SparseRationalMatrix::read_triplets(BufReader::new(file)).map(Some)
    }

    /// Atomically stores a matrix (temporary file, then rename).
    pub fn store(
        &self,
        genus: usize,
        level: u64,
        object: &str,
        m: &SparseRationalMatrix,
    ) -> Result<()> {
        let path = self.path(genus, level, object);
        let dir = path.parent().expect("cache path has a parent");
        fs::create_dir_all(dir)?;
        let tmp = dir.join(format!(".{object}.{}.tmp", std::process::id()));
        m.write_triplets(fs::File::create(&tmp)?)?;
        fs::rename(&tmp, &path)?;
        Ok(())
    }

    /// Loads a cached matrix or builds and stores it; a corrupt entry is rebuilt with a warning.
    pub fn get_or_build(
        &self,
        genus: usize,
        level: u64,
        object: &str,
        build: impl FnOnce() -> Result<SparseRationalMatrix>,
    ) -> Result<SparseRationalMatrix> {
        match self.load(genus, level, object) {
            Ok(Some(m)) => return Ok(m),
            Ok(None) => {}
            Err(e) => log::warn!(
                "rebuilding corrupt cache entry {}: {e}",
                self.path(genus, level, object).display()
            ),
        }
        let m = build()?;
        if let Err(e) = self.store(genus, level, object, &m) {
            log::warn!("could not write cache entry for {object}: {e}");
        }
        Ok(m)
    }

    pub fn root(&self) -> &Path {
        &self.root
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triplet_roundtrip() {
        let q = Rational::new(BigInt::from(-3), BigInt::from(4));
        let m = SparseRationalMatrix::from_triplets(
            2,
            3,
            vec![(1, 2, q), (0, 0, Rational::from_integer(5.into()))],
        )
        .unwrap();
        let mut buf = Vec::new();
        m.write_triplets(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("2 3 2\n0 0 5/1\n1 2 -3/4\n"));
        let back = SparseRationalMatrix::read_triplets(&buf[..]).unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn rejects_bad_entries() {
        let one = Rational::from_integer(1.into());
        assert!(SparseRationalMatrix::from_triplets(1, 1, vec![(0, 1, one.clone())]).is_err());
        assert!(SparseRationalMatrix::from_triplets(1, 1, vec![(0, 0, Rational::zero())]).is_err());
        assert!(
            SparseRationalMatrix::from_triplets(1, 1, vec![(0, 0, one.clone()), (0, 0, one)])
                .is_err()
        );
    }

    #[test]
    fn mul_and_transpose() {
        let m = SparseRationalMatrix::from_dense_i64(&[&[1, 2], &[0, 3]]);
        let x = vec![
            (0, Rational::from_integer(1.into())),
            (1, Rational::from_integer(1.into())),
        ];
        let y = m.mul_vec(&x);
        assert_eq!(
            y,
            vec![
                (0, Rational::from_integer(3.into())),
                (1, Rational::from_integer(3.into()))
            ]
        );
        assert_eq!(m.transpose().transpose(), m);
    }
}
