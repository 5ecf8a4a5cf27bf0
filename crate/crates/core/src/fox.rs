//! Homology of the universal abelian `Z/L`-cover of a surface via Fox calculus.
//!
//! The surface is the standard CW complex with one 0-cell, 1-cells
//! `alpha_1, beta_1, ..., alpha_g, beta_g` and, when closed, one 2-cell attached
//! along `r = [alpha_1, beta_1] ... [alpha_g, beta_g]` with `[x, y] = x^-1 y^-1 x y`.
//! The bounded surface drops the 2-cell; its boundary loop is `r`.
//!
//! Cells of the cover are indexed by `(j, h)` with `h` in `H_L`: the lifted
//! edge `(j, h)` runs from `h` to `h + x_j`, and has column `j * |H_L| + h`.
//! The chain of a word is the vector of its Fox derivatives, so the chain of
//! `f^-1 a f` is the chain of `a` translated by `-f`.

use std::fmt;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::group_ring::GroupRingElement;
use crate::lattice::{IndexArith, LatticeParams, ZlVector};
use crate::linalg::echelon::{markowitz_priority, Echelon};
use crate::linalg::field::RationalField;
use crate::linalg::{Linalg, MatrixCache, Mode, RatVec, Rational, SparseRationalMatrix};
use crate::report::Check;

/// Freely reduced word in the generators; letter `+(j+1)` is generator `j`, `-(j+1)` its inverse.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FreeWord {
    params: LatticeParams,
    letters: Vec<i32>,
}

impl FreeWord {
    pub fn identity(params: LatticeParams) -> Self {
        Self {
            params,
            letters: Vec::new(),
        }
    }

    pub fn new(params: LatticeParams, letters: &[i32]) -> Result<Self> {
        let n = params.rank() as i32;
        if let Some(l) = letters.iter().find(|&&l| l == 0 || l.abs() > n) {
            return Err(Error::Input(format!("letter {l} outside the alphabet")));
        }
        Ok(Self::from_letters(params, letters.iter().copied()))
    }

    fn from_letters(params: LatticeParams, letters: impl IntoIterator<Item = i32>) -> Self {
        let mut out: Vec<i32> = Vec::new();
        for l in letters {
            if out.last() == Some(&-l) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Self {
            params,
            letters: out,
        }
    }

    /// Generator `j` in the order `alpha_1, beta_1, alpha_2, ...`.
    pub fn generator(params: LatticeParams, j: usize) -> Self {
        assert!(j < params.rank());
        Self {
            params,
            letters: vec![j as i32 + 1],
        }
    }

    pub fn alpha(params: LatticeParams, i: usize) -> Self {
        Self::generator(params, 2 * i)
    }

    pub fn beta(params: LatticeParams, i: usize) -> Self {
        Self::generator(params, 2 * i + 1)
    }

    /// Parses the compact syntax `"a1 B1 a2"`: lowercase is a generator, uppercase its inverse.
    pub fn parse(params: LatticeParams, text: &str) -> Result<Self> {
        let mut letters = Vec::new();
        for tok in text.split_whitespace() {
            if tok == "1" {
                continue;
            }
            let bad = || Error::Input(format!("bad letter {tok:?}"));
            let mut chars = tok.chars();
            let head = chars.next().ok_or_else(bad)?;
            let i: usize = chars.as_str().parse().map_err(|_| bad())?;
            if i == 0 || i > params.genus() {
                return Err(bad());
            }
            let (offset, sign) = match head {
                'a' => (0, 1),
                'A' => (0, -1),
                'b' => (1, 1),
                'B' => (1, -1),
                _ => return Err(bad()),
            };
            letters.push(sign * (2 * (i as i32 - 1) + offset + 1));
        }
        Ok(Self::from_letters(params, letters))
    }

    /// The surface relator `[alpha_1, beta_1] ... [alpha_g, beta_g]`.
    pub fn relator(params: LatticeParams) -> Self {
        (0..params.genus()).fold(Self::identity(params), |acc, i| {
            acc.mul(&Self::commutator(
                &Self::alpha(params, i),
                &Self::beta(params, i),
            ))
        })
    }

    pub fn params(&self) -> LatticeParams {
        self.params
    }

    pub fn letters(&self) -> &[i32] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn inverse(&self) -> Self {
        Self {
            params: self.params,
            letters: self.letters.iter().rev().map(|l| -l).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.params, other.params);
        Self::from_letters(
            self.params,
            self.letters.iter().chain(&other.letters).copied(),
        )
    }

    pub fn pow(&self, n: i64) -> Self {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        (0..n.unsigned_abs()).fold(Self::identity(self.params), |acc, _| acc.mul(&base))
    }

    /// `[x, y] = x^-1 y^-1 x y`.
    pub fn commutator(x: &Self, y: &Self) -> Self {
        x.inverse().mul(&y.inverse()).mul(x).mul(y)
    }

    /// `a^f = f^-1 a f`.
    pub fn conjugate(a: &Self, f: &Self) -> Self {
        f.inverse().mul(a).mul(f)
    }

    /// Exponent sums per generator.
    pub fn exponent_sums(&self) -> Vec<i64> {
        let mut e = vec![0i64; self.params.rank()];
        for &l in &self.letters {
            e[l.unsigned_abs() as usize - 1] += l.signum() as i64;
        }
        e
    }

    /// Integral abelianization and its reduction mod `L`.
    pub fn abelianize(&self) -> (Vec<i64>, ZlVector) {
        let e = self.exponent_sums();
        let v = ZlVector::from_coords(self.params, &e).expect("rank matches");
        (e, v)
    }

    /// True when the word lies in the kernel of the map to `H_L`.
    pub fn in_kernel(&self) -> bool {
        let l = self.params.level() as i64;
        self.exponent_sums().iter().all(|e| e.rem_euclid(l) == 0)
    }

    /// Uniform random freely reduced word of length `len`.
    pub fn random<R: Rng>(params: LatticeParams, len: usize, rng: &mut R) -> Self {
        let n = params.rank() as i32;
        let mut letters: Vec<i32> = Vec::with_capacity(len);
        while letters.len() < len {
            let mut l = rng.gen_range(1..=n);
            if rng.gen_bool(0.5) {
                l = -l;
            }
            if letters.last() != Some(&-l) {
                letters.push(l);
            }
        }
        Self { params, letters }
    }

    /// Appends powers of generators so that the word lands in the kernel subgroup.
    pub fn close_to_kernel(&self) -> Self {
        let l = self.params.level() as i64;
        let mut w = self.clone();
        for (j, e) in self.exponent_sums().into_iter().enumerate() {
            let fix = (-e).rem_euclid(l);
            if fix != 0 {
                w = w.mul(&Self::generator(self.params, j).pow(fix));
            }
        }
        w
    }

    /// All freely reduced words of length at most `max_len`, shortest first.
    pub fn all_up_to(params: LatticeParams, max_len: usize) -> Vec<Self> {
        let n = params.rank() as i32;
        let alphabet: Vec<i32> = (1..=n).flat_map(|l| [l, -l]).collect();
        let mut out = vec![Self::identity(params)];
        let mut frontier = vec![Self::identity(params)];
        for _ in 0..max_len {
            let mut next = Vec::new();
            for w in &frontier {
                for &l in &alphabet {
                    if w.letters.last() != Some(&-l) {
                        let mut letters = w.letters.clone();
                        letters.push(l);
                        next.push(Self { params, letters });
                    }
                }
            }
            out.extend(next.iter().cloned());
            frontier = next;
        }
        out
    }
}

impl fmt::Display for FreeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("1");
        }
        let parts: Vec<String> = self
            .letters
            .iter()
            .map(|&l| {
                let j = l.unsigned_abs() as usize - 1;
                let c = match (j % 2, l > 0) {
                    (0, true) => 'a',
                    (0, false) => 'A',
                    (_, true) => 'b',
                    (_, false) => 'B',
                };
                format!("{c}{}", j / 2 + 1)
            })
            .collect();
        f.write_str(&parts.join(" "))
    }
}

impl fmt::Debug for FreeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FreeWord({self})")
    }
}

/// Adds `sign * (chain of the word, translated by shift)` into a dense integer cell vector.
fn accumulate_chain(ar: &IndexArith, letters: &[i32], shift: usize, sign: i64, out: &mut [i64]) {
    let n = ar.order();
    let mut pos = shift;
    for &l in letters {
        let j = l.unsigned_abs() as usize - 1;
        let step = ar.basis(j);
        if l > 0 {
            out[j * n + pos] += sign;
            pos = ar.add(pos, step);
        } else {
            pos = ar.sub(pos, step);
            out[j * n + pos] -= sign;
        }
    }
}

/// `d w / d x_j` projected to `Q[H_L]`.
pub fn fox_derivative(w: &FreeWord, j: usize) -> GroupRingElement {
    FoxChain::of(w).components[j].clone()
}

/// The Fox derivatives of a word: a 1-chain of the cover.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FoxChain {
    params: LatticeParams,
    components: Vec<GroupRingElement>,
}

impl FoxChain {
    pub fn of(w: &FreeWord) -> Self {
        let params = w.params;
        let ar = IndexArith::new(params);
        let n = params.order();
        let mut dense = vec![0i64; params.rank() * n];
        accumulate_chain(&ar, &w.letters, 0, 1, &mut dense);
        let components = (0..params.rank())
            .map(|j| {
                let terms = (0..n)
                    .filter(|h| dense[j * n + h] != 0)
                    .map(|h| (h, Rational::from_integer(dense[j * n + h].into())));
                GroupRingElement::from_terms(params, terms).expect("indices in range")
            })
            .collect();
        Self { params, components }
    }

    pub fn components(&self) -> &[GroupRingElement] {
        &self.components
    }

    /// Cell coordinates `j * |H_L| + h`.
    pub fn to_cells(&self) -> RatVec {
        let n = self.params.order();
        self.components
            .iter()
            .enumerate()
            .flat_map(|(j, c)| {
                c.terms()
                    .map(move |(h, q)| (j * n + h, q.clone()))
                    .collect::<Vec<_>>()
            })
            .collect()
    }

    /// `d1` of the chain: `sum_j (dw/dx_j) (x_j - 1)`.
    pub fn boundary(&self) -> GroupRingElement {
        let mut acc = GroupRingElement::zero(self.params);
        for (j, c) in self.components.iter().enumerate() {
            let xj = ZlVector::basis(self.params, j);
            acc = &acc + &(&c.translate(&xj) - c);
        }
        acc
    }
}

/// Dimensions read off a cover complex.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct H1Dims {
    pub h1: usize,
    pub c_dim: usize,
    pub i_dim: usize,
}

/// Cellular chain complex of the universal abelian `Z/L`-cover.
pub struct CoverComplex {
    params: LatticeParams,
    closed: bool,
    arith: IndexArith,
    d1: SparseRationalMatrix,
    d2: Option<SparseRationalMatrix>,
    /// Relator translates `h . chain(r)` as columns; the 2-cell boundaries when closed.
    relator_translates: SparseRationalMatrix,
    projection: SparseRationalMatrix,
    boundaries: Option<Echelon<RationalField>>,
}

/// Cap on `2g |H_L|` for building a cover complex.
pub const COVER_CELL_CAP: usize = 200_000;

fn q(x: i64) -> Rational {
    Rational::from_integer(x.into())
}

impl CoverComplex {
    pub fn build(params: LatticeParams, closed: bool) -> Result<Self> {
        Self::build_cached(params, closed, None)
    }

    /// Like `build`, reading `d1` and the relator translates from `cache` when present.
    pub fn build_cached(
        params: LatticeParams,
        closed: bool,
        cache: Option<&MatrixCache>,
    ) -> Result<Self> {
        let n = params.order();
        let cells = params.rank() * n;
        if cells > COVER_CELL_CAP {
            return Err(Error::budget(
                "cover complex cells",
                cells as u128,
                COVER_CELL_CAP as u128,
            ));
        }
        let ar = IndexArith::new(params);
        let (g, l) = (params.genus(), params.level());
        let d1 = match cache {
            Some(c) => c.get_or_build(g, l, "d1", || Self::build_d1(&ar))?,
            None => Self::build_d1(&ar)?,
        };
        let relator_translates = match cache {
            Some(c) => {
                c.get_or_build(g, l, "relator-translates", || Self::build_translates(&ar))?
            }
            None => Self::build_translates(&ar)?,
        };
        if d1.nrows() != n
            || d1.ncols() != cells
            || relator_translates.nrows() != cells
            || relator_translates.ncols() != n
        {
            return Err(Error::Cache(format!(
                "cached complex for {params} has the wrong shape"
            )));
        }
        let projection = SparseRationalMatrix::from_triplets(
            params.rank(),
            cells,
            (0..cells).map(|c| (c / n, c, q(1))).collect(),
        )?;
        let (d2, boundaries) = if closed {
            let cols = relator_translates.column_vectors();
            let priority = markowitz_priority(cells, cols.iter().map(|v| v.as_slice()));
            let mut ech = Echelon::with_priority(RationalField, priority, false);
            let mut ws = ech.workspace();
            for (i, c) in cols.iter().enumerate() {
                ech.insert(&mut ws, i, c);
            }
            (Some(relator_translates.clone()), Some(ech))
        } else {
            (None, None)
        };
        Ok(Self {
            params,
            closed,
            arith: ar,
            d1,
            d2,
            relator_translates,
            projection,
            boundaries,
        })
    }

    fn build_d1(ar: &IndexArith) -> Result<SparseRationalMatrix> {
        let params = ar.params();
        let n = params.order();
        let cells = params.rank() * n;
        let mut d1 = Vec::with_capacity(2 * cells);
        for j in 0..params.rank() {
            for h in 0..n {
                let col = j * n + h;
                d1.push((ar.add(h, ar.basis(j)), col, q(1)));
                d1.push((h, col, q(-1)));
            }
        }
        SparseRationalMatrix::from_triplets(n, cells, d1)
    }

    fn build_translates(ar: &IndexArith) -> Result<SparseRationalMatrix> {
        let params = ar.params();
        let n = params.order();
        let cells = params.rank() * n;
        let r = FreeWord::relator(params);
        let mut translates = Vec::new();
        for h in 0..n {
            let mut dense = vec![0i64; cells];
            accumulate_chain(ar, &r.letters, h, 1, &mut dense);
            translates.extend(
                dense
                    .iter()
                    .enumerate()
                    .filter(|(_, x)| **x != 0)
                    .map(|(c, x)| (c, h, q(*x))),
            );
        }
        SparseRationalMatrix::from_triplets(cells, n, translates)
    }

    pub fn params(&self) -> LatticeParams {
        self.params
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn d1(&self) -> &SparseRationalMatrix {
        &self.d1
    }

    pub fn d2(&self) -> Option<&SparseRationalMatrix> {
        self.d2.as_ref()
    }

    pub fn projection(&self) -> &SparseRationalMatrix {
        &self.projection
    }

    /// Columns `h . chain(r)` for all `h`, in both the closed and the bounded complex.
    pub fn relator_translates(&self) -> &SparseRationalMatrix {
        &self.relator_translates
    }

    pub fn cell_count(&self) -> usize {
        self.params.rank() * self.params.order()
    }

    /// Dense integer chain of a word.
    pub fn chain(&self, w: &FreeWord) -> Vec<i64> {
        let mut out = vec![0i64; self.cell_count()];
        accumulate_chain(&self.arith, &w.letters, 0, 1, &mut out);
        out
    }

    /// Canonical representative of a dense chain modulo the 2-cell boundaries.
    fn reduce_dense(&self, dense: &[i64]) -> RatVec {
        let v: RatVec = dense
            .iter()
            .enumerate()
            .filter(|(_, x)| **x != 0)
            .map(|(c, x)| (c, q(*x)))
            .collect();
        match &self.boundaries {
            None => v,
            Some(ech) => {
                let mut ws = ech.workspace();
                let mut r = ech.reduce(&mut ws, &v, false).residue;
                r.sort_by_key(|(c, _)| *c);
                r
            }
        }
    }

    /// `H_1` class of a word in the kernel subgroup, as a canonical reduced cycle.
    pub fn cycle_class(&self, w: &FreeWord) -> Result<RatVec> {
        if w.params != self.params {
            return Err(Error::Params(
                "word and complex use different lattices".into(),
            ));
        }
        if !w.in_kernel() {
            return Err(Error::Precondition(format!(
                "{w} does not lie in the kernel subgroup"
            )));
        }
        Ok(self.reduce_dense(&self.chain(w)))
    }

    /// Class of `f^-1 [x, y] f`.
    pub fn bracket_class(&self, x: &FreeWord, y: &FreeWord, f: &FreeWord) -> Result<RatVec> {
        self.cycle_class(&FreeWord::conjugate(&FreeWord::commutator(x, y), f))
    }

    /// True when `sum_k sign_k chain(w_k)` is zero in `H_1`.
    pub fn vanishes(&self, terms: &[(i64, &FreeWord)]) -> bool {
        let mut dense = vec![0i64; self.cell_count()];
        for (s, w) in terms {
            accumulate_chain(&self.arith, &w.letters, 0, *s, &mut dense);
        }
        dense.iter().all(|x| *x == 0) || self.reduce_dense(&dense).is_empty()
    }

    /// `h1`, `c_dim` and, via the relator translates, `i_dim`.
    pub fn h1_dims(&self, la: &Linalg) -> Result<H1Dims> {
        let cells = self.cell_count();
        let rank_d1 = la.rank(&self.d1)?.rank;
        let rank_rel = la.rank(&self.relator_translates)?.rank;
        let cycles = cells - rank_d1;
        let h1 = if self.closed {
            cycles - rank_rel
        } else {
            cycles
        };
        let rank = self.params.rank();
        if h1 < rank || !self.projection_is_onto() {
            return Err(Error::Construction(
                "projection to the base homology is not onto".into(),
            ));
        }
        Ok(H1Dims {
            h1,
            c_dim: h1 - rank,
            i_dim: rank_rel,
        })
    }

    /// The cycles `x_j^L` project to `L e_j`, and relator translates project to zero.
    fn projection_is_onto(&self) -> bool {
        let l = self.params.level() as i64;
        let hits = (0..self.params.rank()).all(|j| {
            let w = FreeWord::generator(self.params, j).pow(l);
            let img = self.projection.mul_vec(&FoxChain::of(&w).to_cells());
            img == vec![(j, q(l))]
        });
        let kills = self
            .relator_translates
            .column_vectors()
            .iter()
            .all(|c| self.projection.mul_vec(c).is_empty());
        hits && kills
    }
}

/// How words are drawn for identity checks.
#[derive(Clone, Copy, Debug)]
pub enum WordSampling {
    /// Every reduced word up to this length.
    Exhaustive { max_len: usize },
    /// Seeded random words of length at most `max_len`.
    Random {
        count: usize,
        max_len: usize,
        seed: u64,
    },
}

struct Tally {
    name: &'static str,
    checked: usize,
    witness: Option<String>,
}

impl Tally {
    fn new(name: &'static str) -> Self {
        Self {
            name,
            checked: 0,
            witness: None,
        }
    }

    fn record(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok && self.witness.is_none() {
            self.witness = Some(describe());
        }
    }

    fn into_check(self, prefix: &str) -> Check {
        let passed = self.witness.is_none() && self.checked > 0;
        let actual = match self.witness {
            None => format!("{} instances hold", self.checked),
            Some(w) => format!("fails at {w}"),
        };
        Check::new(
            format!("{prefix}.{}", self.name),
            "all instances hold",
            actual,
            passed,
        )
    }
}

/// Checks the commutator-calculus identities on the given complex.
///
/// For words `x, y, z`, kernel words `a, k`, and conjugators `f`:
/// `<[a,x]> = <a>_x - <a>`, `<x,y> = -<y,x>`, `<xy,z> = <x,z>_y + <y,z>`,
/// `<y^-1,z> = -<y,z>_{-y}`, `<a>_f = <a>_{kf}`, and `<[a,k]> = 0`.
pub fn verify_commutator_identities(
    c: &CoverComplex,
    sampling: WordSampling,
    prefix: &str,
) -> Vec<Check> {
    let params = c.params();
    let mut conj = Tally::new("conjugation");
    let mut anti = Tally::new("antisymmetry");
    let mut product = Tally::new("product-rule");
    let mut inverse = Tally::new("inverse-rule");
    let mut coset = Tally::new("conjugator-coset");
    let mut kernel = Tally::new("kernel-commutator");

    let mut pair = |x: &FreeWord, y: &FreeWord| {
        let xy = FreeWord::commutator(x, y);
        let yx = FreeWord::commutator(y, x);
        anti.record(c.vanishes(&[(1, &xy), (1, &yx)]), || {
            format!("x={x}, y={y}")
        });
        let a = x.close_to_kernel();
        let ay = FreeWord::commutator(&a, y);
        let a_conj = FreeWord::conjugate(&a, y);
        conj.record(c.vanishes(&[(1, &ay), (-1, &a_conj), (1, &a)]), || {
            format!("a={a}, x={y}")
        });
        let k = y.close_to_kernel();
        let kf = k.mul(x);
        coset.record(
            c.vanishes(&[
                (1, &FreeWord::conjugate(&a, x)),
                (-1, &FreeWord::conjugate(&a, &kf)),
            ]),
            || format!("a={a}, f={x}, k={k}"),
        );
        kernel.record(c.vanishes(&[(1, &FreeWord::commutator(&a, &k))]), || {
            format!("a={a}, k={k}")
        });
    };
    let mut triple = |x: &FreeWord, y: &FreeWord, z: &FreeWord| {
        let lhs = FreeWord::commutator(&x.mul(y), z);
        let t1 = FreeWord::conjugate(&FreeWord::commutator(x, z), y);
        let t2 = FreeWord::commutator(y, z);
        product.record(c.vanishes(&[(1, &lhs), (-1, &t1), (-1, &t2)]), || {
            format!("x={x}, y={y}, z={z}")
        });
        let inv = FreeWord::commutator(&y.inverse(), z);
        let shifted = FreeWord::conjugate(&t2, &y.inverse());
        inverse.record(c.vanishes(&[(1, &inv), (1, &shifted)]), || {
            format!("y={y}, z={z}")
        });
    };

    match sampling {
        WordSampling::Exhaustive { max_len } => {
            let words = FreeWord::all_up_to(params, max_len);
            for x in &words {
                for y in &words {
                    pair(x, y);
                    for z in &words {
                        triple(x, y, z);
                    }
                }
            }
        }
        WordSampling::Random {
            count,
            max_len,
            seed,
        } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..count {
                let mut draw = || {
                    let len = rng.gen_range(0..=max_len);
                    FreeWord::random(params, len, &mut rng)
                };
                let (x, y, z) = (draw(), draw(), draw());
                pair(&x, &y);
                triple(&x, &y, &z);
            }
        }
    }
    [conj, anti, product, inverse, coset, kernel]
        .into_iter()
        .map(|t| t.into_check(prefix))
        .collect()
}

/// Outcome of the boundary-class structure check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IStructure {
    pub dim: usize,
    pub kernel: Vec<RatVec>,
    /// Translation by each nonzero `v` permutes the classes without fixed points.
    pub free_action: bool,
}

impl IStructure {
    /// The kernel is exactly the line through the all-ones vector.
    pub fn kernel_is_theta(&self, order: usize) -> bool {
        match &self.kernel[..] {
            [k] => {
                k.len() == order && {
                    let first = &k[0].1;
                    !first.is_zero()
                        && k.iter()
                            .enumerate()
                            .all(|(i, (c, x))| *c == i && x == first)
                }
            }
            _ => false,
        }
    }
}

/// Rank and kernel of the relator-translate matrix in the bounded complex, and the
/// freeness of the deck action on the boundary classes `kappa(w) = (-w) . chain(r)`.
pub fn verify_i_structure(params: LatticeParams) -> Result<IStructure> {
    let c = CoverComplex::build(params, false)?;
    let la = Linalg::new(Mode::Exact);
    let m = c.relator_translates();
    let dim = la.rank(m)?.rank;
    let kernel = la.kernel_basis(m)?;
    let ar = IndexArith::new(params);
    let r = FreeWord::relator(params);
    let kappa: Vec<Vec<i64>> = (0..params.order())
        .map(|w| {
            let mut out = vec![0i64; c.cell_count()];
            accumulate_chain(&ar, &r.letters, ar.neg(w), 1, &mut out);
            out
        })
        .collect();
    // Deck action of v is translation by -v; it should send kappa(w) to kappa(v + w).
    let mut free_action = true;
    for v in 1..params.order() {
        for w in 0..params.order() {
            let mut moved = vec![0i64; c.cell_count()];
            accumulate_chain(&ar, &r.letters, ar.sub(ar.neg(w), v), 1, &mut moved);
            let target = ar.add(v, w);
            if moved != kappa[target] || target == w || kappa[target] == kappa[w] {
                free_action = false;
            }
        }
    }
    Ok(IStructure {
        dim,
        kernel,
        free_action,
    })
}

/// Checks `d1(chain(w)) = rho[w] - rho[0]` for seeded random words.
pub fn verify_fundamental_identity(params: LatticeParams, count: usize, seed: u64) -> bool {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).all(|_| {
        let len = rng.gen_range(0..12);
        let w = FreeWord::random(params, len, &mut rng);
        let lhs = FoxChain::of(&w).boundary();
        let rhs = &GroupRingElement::rho(&w.abelianize().1)
            - &GroupRingElement::rho(&ZlVector::zero(params));
        lhs == rhs
    })
}

/// `d1 . d2 = 0`, exactly.
pub fn chain_complex_holds(c: &CoverComplex) -> bool {
    let Some(d2) = c.d2() else {
        return true;
    };
    d2.column_vectors()
        .iter()
        .all(|col| c.d1().mul_vec(col).is_empty())
}

/// Integer chain of a word as exact rationals, for callers outside the crate.
pub fn chain_of(w: &FreeWord) -> RatVec {
    FoxChain::of(w).to_cells()
}
