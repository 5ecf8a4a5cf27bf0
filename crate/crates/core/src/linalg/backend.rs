//! Rank backends behind a common trait, chosen by name at runtime.
//!
//! The `exact` backend eliminates over the rationals and can produce coefficient
//! certificates; the `modular` backend eliminates over several word-sized prime
//! fields and cross-checks their answers. [`Linalg`] picks one per call
//! according to its [`Mode`].

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::dense;
use super::echelon::{markowitz_priority, Echelon};
use super::field::{is_prime_u64, Field, PrimeField, Rational, RationalField};
use super::matrix::SparseRationalMatrix;
use super::{normalize_rat, RatVec, VecRef, Vectors};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Modular,
    Hybrid,
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Mode::Exact),
            "modular" => Ok(Mode::Modular),
            "hybrid" => Ok(Mode::Hybrid),
            other => Err(Error::Params(format!("unknown mode {other:?}"))),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Exact => "exact",
            Mode::Modular => "modular",
            Mode::Hybrid => "hybrid",
        })
    }
}

/// How a result was obtained.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Certification {
    Exact,
    /// All listed primes produced the same answer.
    Modular {
        primes: Vec<u64>,
    },
}

impl Certification {
    pub fn label(&self) -> &'static str {
        match self {
            Certification::Exact => "exact",
            Certification::Modular { .. } => "modular",
        }
    }

    pub fn primes(&self) -> &[u64] {
        match self {
            Certification::Exact => &[],
            Certification::Modular { primes } => primes,
        }
    }

    /// The weaker of two certifications.
    pub fn combine(&self, other: &Certification) -> Certification {
        match (self, other) {
            (Certification::Exact, Certification::Exact) => Certification::Exact,
            (Certification::Modular { primes }, _) | (_, Certification::Modular { primes }) => {
                Certification::Modular {
                    primes: primes.clone(),
                }
            }
        }
    }
}

/// Positions of a square minor: rows are source vector indices, columns are coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Minor {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankCertificate {
    pub rank: usize,
    pub certification: Certification,
    pub witness: Option<Minor>,
}

impl RankCertificate {
    /// Checks that the witness minor of `m` is nonsingular and that `extensions` random
    /// one-larger minors are singular.
    pub fn verify_witness(&self, m: &SparseRationalMatrix, extensions: usize, seed: u64) -> bool {
        let Some(w) = &self.witness else {
            return false;
        };
        if w.rows.len() != self.rank || w.cols.len() != self.rank {
            return false;
        }
        if !dense::is_nonsingular(&m.submatrix(&w.rows, &w.cols)) {
            return false;
        }
        let spare_rows: Vec<usize> = (0..m.nrows()).filter(|r| !w.rows.contains(r)).collect();
        let spare_cols: Vec<usize> = (0..m.ncols()).filter(|c| !w.cols.contains(c)).collect();
        if spare_rows.is_empty() || spare_cols.is_empty() {
            return true;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..extensions).all(|_| {
            let mut rows = w.rows.clone();
            rows.push(spare_rows[rng.gen_range(0..spare_rows.len())]);
            let mut cols = w.cols.clone();
            cols.push(spare_cols[rng.gen_range(0..spare_cols.len())]);
            !dense::is_nonsingular(&m.submatrix(&rows, &cols))
        })
    }
}

/// Result of a span membership query.
#[derive(Clone, Debug)]
pub struct Membership {
    pub member: bool,
    /// `(source index, coefficient)` pairs reproducing the vector; already re-verified exactly.
    pub certificate: Option<RatVec>,
    pub certification: Certification,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientDim {
    pub dim: usize,
    pub certification: Certification,
}

/// The span of a fixed family of vectors, ready for queries.
pub trait Span: Send + Sync {
    fn dim(&self) -> usize;
    fn rank(&self) -> usize;
    fn certification(&self) -> Certification;
    /// Nonsingular minor certifying the rank, when the backend can supply one.
    fn witness(&self) -> Option<Minor>;
    fn contains(&self, v: VecRef<'_>) -> Result<Membership>;
    /// Dimension of the image of `span(vs)` in the quotient by this span.
    fn quotient_rank(&self, vs: Vectors<'_>) -> Result<usize>;
    /// A copy of this span enlarged by `vs`. The new vectors are numbered after the
    /// existing ones in certificates.
    fn extended(&self, vs: Vectors<'_>) -> Result<Box<dyn Span>>;
}

#[derive(Clone, Debug, Default)]
pub struct SpanOptions {
    /// Record elimination steps so memberships come with certificates.
    pub track: bool,
    pub primes: Vec<u64>,
}

pub trait RankBackend: Send + Sync {
    fn name(&self) -> &'static str;
    fn span(&self, dim: usize, vectors: Vectors<'_>, opts: &SpanOptions) -> Result<Box<dyn Span>>;
}

fn convert<F: Field>(field: &F, vectors: Vectors<'_>) -> Result<Vec<Vec<(usize, F::Elem)>>> {
    vectors
        .iter()
        .map(|v| {
            v.to_field(field)
                .ok_or_else(|| Error::Inconsistent("denominator vanishes modulo a prime".into()))
        })
        .collect()
}

fn build_echelon<F: Field>(
    field: F,
    dim: usize,
    vectors: Vectors<'_>,
    track: bool,
) -> Result<Echelon<F>> {
    let converted = convert(&field, vectors)?;
    let priority = markowitz_priority(dim, converted.iter().map(|v| v.as_slice()));
    let mut ech = Echelon::with_priority(field, priority, track);
    let mut ws = ech.workspace();
    for (i, v) in converted.iter().enumerate() {
        ech.insert(&mut ws, i, v);
    }
    Ok(ech)
}

/// Inserts `vectors` into a copy of `ech`, numbering them from `first_source`.
fn extend_echelon<F: Field>(
    ech: &Echelon<F>,
    vectors: Vectors<'_>,
    first_source: usize,
) -> Result<Echelon<F>> {
    vectors.check_dim(ech.dim())?;
    let converted = convert(ech.field(), vectors)?;
    let mut out = ech.clone();
    let mut ws = out.workspace();
    for (i, v) in converted.iter().enumerate() {
        out.insert(&mut ws, first_source + i, v);
    }
    Ok(out)
}

fn residue_rank<F: Field>(ech: &Echelon<F>, vs: Vectors<'_>) -> Result<usize> {
    let f = ech.field().clone();
    let mut ws = ech.workspace();
    let mut residues = Vec::with_capacity(vs.len());
    for v in vs.iter() {
        let v = v
            .to_field(&f)
            .ok_or_else(|| Error::Inconsistent("denominator vanishes modulo a prime".into()))?;
        let r = ech.reduce(&mut ws, &v, false).residue;
        if !r.is_empty() {
            residues.push(r);
        }
    }
    let priority = markowitz_priority(ech.dim(), residues.iter().map(|v| v.as_slice()));
    let mut quot = Echelon::with_priority(f, priority, false);
    for (i, r) in residues.iter().enumerate() {
        quot.insert(&mut ws, i, r);
    }
    Ok(quot.rank())
}

pub struct ExactBackend;

#[derive(Clone)]
struct ExactSpan {
    echelon: Echelon<RationalField>,
    count: usize,
    /// Rational copies of the sources, kept when certificates are requested.
    sources: Option<Vec<RatVec>>,
}

impl RankBackend for ExactBackend {
    fn name(&self) -> &'static str {
        "exact"
    }

    fn span(&self, dim: usize, vectors: Vectors<'_>, opts: &SpanOptions) -> Result<Box<dyn Span>> {
        vectors.check_dim(dim)?;
        let echelon = build_echelon(RationalField, dim, vectors, opts.track)?;
        let sources = opts
            .track
            .then(|| vectors.iter().map(|v| v.to_rational()).collect());
        Ok(Box::new(ExactSpan {
            echelon,
            count: vectors.len(),
            sources,
        }))
    }
}

impl ExactSpan {
    fn verify(&self, cert: &RatVec, target: &RatVec) -> bool {
        let sources = self.sources.as_ref().expect("tracked span");
        let mut combo = Vec::new();
        for (s, c) in cert {
            combo.extend(sources[*s].iter().map(|(i, x)| (*i, x * c)));
        }
        normalize_rat(combo) == normalize_rat(target.clone())
    }
}

impl Span for ExactSpan {
    fn dim(&self) -> usize {
        self.echelon.dim()
    }

    fn rank(&self) -> usize {
        self.echelon.rank()
    }

    fn certification(&self) -> Certification {
        Certification::Exact
    }

    fn witness(&self) -> Option<Minor> {
        let rows = self.echelon.rows();
        Some(Minor {
            rows: rows.iter().map(|r| r.source).collect(),
            cols: rows.iter().map(|r| r.pivot).collect(),
        })
    }

    fn contains(&self, v: VecRef<'_>) -> Result<Membership> {
        let target = v.to_rational();
        if let Some(c) = target.iter().map(|(c, _)| *c).find(|&c| c >= self.dim()) {
            return Err(Error::Input(format!(
                "index {c} outside dimension {}",
                self.dim()
            )));
        }
        let mut ws = self.echelon.workspace();
        let tracked = self.sources.is_some();
        let red = self.echelon.reduce(&mut ws, &target, tracked);
        if !red.residue.is_empty() {
            return Ok(Membership {
                member: false,
                certificate: None,
                certification: Certification::Exact,
            });
        }
        let certificate = if tracked {
            let cert = self.echelon.expand_steps(&red.steps);
            if !self.verify(&cert, &target) {
                return Err(Error::Inconsistent(
                    "membership certificate failed exact re-verification".into(),
                ));
            }
            Some(cert)
        } else {
            None
        };
        Ok(Membership {
            member: true,
            certificate,
            certification: Certification::Exact,
        })
    }

    fn quotient_rank(&self, vs: Vectors<'_>) -> Result<usize> {
        vs.check_dim(self.dim())?;
        residue_rank(&self.echelon, vs)
    }

    fn extended(&self, vs: Vectors<'_>) -> Result<Box<dyn Span>> {
        let echelon = extend_echelon(&self.echelon, vs, self.count)?;
        let sources = self.sources.as_ref().map(|s| {
            let mut s = s.clone();
            s.extend(vs.iter().map(|v| v.to_rational()));
            s
        });
        Ok(Box::new(ExactSpan {
            echelon,
            count: self.count + vs.len(),
            sources,
        }))
    }
}

pub struct ModularBackend;

struct ModularSpan {
    echelons: Vec<Echelon<PrimeField>>,
    count: usize,
}

impl ModularSpan {
    fn primes(&self) -> Vec<u64> {
        self.echelons.iter().map(|e| e.field().modulus()).collect()
    }

    fn agree(&self, what: &str, values: &[usize]) -> Result<usize> {
        if values.windows(2).any(|w| w[0] != w[1]) {
            return Err(Error::Inconsistent(format!(
                "{what} differs across primes {:?}: {values:?}",
                self.primes()
            )));
        }
        Ok(values[0])
    }
}

impl RankBackend for ModularBackend {
    fn name(&self) -> &'static str {
        "modular"
    }

    fn span(&self, dim: usize, vectors: Vectors<'_>, opts: &SpanOptions) -> Result<Box<dyn Span>> {
        vectors.check_dim(dim)?;
        if opts.primes.len() < 2 {
            return Err(Error::Params(
                "modular elimination needs at least two primes".into(),
            ));
        }
        let echelons = opts
            .primes
            .iter()
            .map(|&p| build_echelon(PrimeField::new(p), dim, vectors, false))
            .collect::<Result<Vec<_>>>()?;
        let span = ModularSpan {
            echelons,
            count: vectors.len(),
        };
        let ranks: Vec<usize> = span.echelons.iter().map(|e| e.rank()).collect();
        span.agree("rank", &ranks)?;
        Ok(Box::new(span))
    }
}

impl Span for ModularSpan {
    fn dim(&self) -> usize {
        self.echelons[0].dim()
    }

    fn rank(&self) -> usize {
        self.echelons[0].rank()
    }

    fn certification(&self) -> Certification {
        Certification::Modular {
            primes: self.primes(),
        }
    }

    fn witness(&self) -> Option<Minor> {
        None
    }

    fn contains(&self, v: VecRef<'_>) -> Result<Membership> {
        if let Some(c) = v.indices().find(|&c| c >= self.dim()) {
            return Err(Error::Input(format!(
                "index {c} outside dimension {}",
                self.dim()
            )));
        }
        let mut answers = Vec::new();
        for ech in &self.echelons {
            let x = v
                .to_field(ech.field())
                .ok_or_else(|| Error::Inconsistent("denominator vanishes modulo a prime".into()))?;
            let mut ws = ech.workspace();
            answers.push(ech.reduce(&mut ws, &x, false).residue.is_empty() as usize);
        }
        let member = self.agree("membership", &answers)? == 1;
        Ok(Membership {
            member,
            certificate: None,
            certification: self.certification(),
        })
    }

    fn quotient_rank(&self, vs: Vectors<'_>) -> Result<usize> {
        vs.check_dim(self.dim())?;
        let ranks = self
            .echelons
            .iter()
            .map(|e| residue_rank(e, vs))
            .collect::<Result<Vec<_>>>()?;
        self.agree("quotient rank", &ranks)
    }

    fn extended(&self, vs: Vectors<'_>) -> Result<Box<dyn Span>> {
        let echelons = self
            .echelons
            .iter()
            .map(|e| extend_echelon(e, vs, self.count))
            .collect::<Result<Vec<_>>>()?;
        let span = ModularSpan {
            echelons,
            count: self.count + vs.len(),
        };
        let ranks: Vec<usize> = span.echelons.iter().map(|e| e.rank()).collect();
        span.agree("rank", &ranks)?;
        Ok(Box::new(span))
    }
}

/// Named rank backends.
pub struct BackendRegistry {
    backends: BTreeMap<&'static str, Box<dyn RankBackend>>,
}

impl BackendRegistry {
    pub fn empty() -> Self {
        Self {
            backends: BTreeMap::new(),
        }
    }

    pub fn register(&mut self, backend: Box<dyn RankBackend>) {
        self.backends.insert(backend.name(), backend);
    }

    pub fn get(&self, name: &str) -> Option<&dyn RankBackend> {
        self.backends.get(name).map(|b| b.as_ref())
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.backends.keys().copied().collect()
    }
}

impl Default for BackendRegistry {
    fn default() -> Self {
        let mut r = Self::empty();
        r.register(Box::new(ExactBackend));
        r.register(Box::new(ModularBackend));
        r
    }
}

pub const DEFAULT_EXACT_COL_CAP: usize = 20_000;

/// Deterministic primes in `(2^30, 2^31)` drawn from `seed`.
pub fn select_primes(seed: u64, count: usize) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut primes = Vec::with_capacity(count);
    while primes.len() < count {
        let p = rng.gen_range((1u64 << 30) + 1..1u64 << 31) | 1;
        if is_prime_u64(p) && !primes.contains(&p) {
            primes.push(p);
        }
    }
    primes
}

/// Linear algebra front end: dispatches each problem to a backend by mode and size.
#[derive(Clone)]
pub struct Linalg {
    mode: Mode,
    exact_col_cap: usize,
    prime_count: usize,
    seed: u64,
    registry: Arc<BackendRegistry>,
}

impl Linalg {
    pub fn new(mode: Mode) -> Self {
        Self {
            mode,
            exact_col_cap: DEFAULT_EXACT_COL_CAP,
            prime_count: 2,
            seed: 0,
            registry: Arc::new(BackendRegistry::default()),
        }
    }

    pub fn with_exact_col_cap(mut self, cap: usize) -> Self {
        self.exact_col_cap = cap;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_prime_count(mut self, count: usize) -> Self {
        self.prime_count = count.max(2);
        self
    }

    pub fn with_registry(mut self, registry: BackendRegistry) -> Self {
        self.registry = Arc::new(registry);
        self
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    /// Whether a problem of ambient dimension `dim` is handled exactly.
    pub fn is_exact_for(&self, dim: usize) -> bool {
        match self.mode {
            Mode::Exact => true,
            Mode::Modular => false,
            Mode::Hybrid => dim <= self.exact_col_cap,
        }
    }

    fn backend(&self, name: &str) -> Result<&dyn RankBackend> {
        self.registry
            .get(name)
            .ok_or_else(|| Error::Params(format!("no rank backend named {name:?}")))
    }

    /// Runs `job`, retrying once with fresh primes if the modular answers disagree.
    fn with_retry<T>(
        &self,
        dim: usize,
        mut job: impl FnMut(&dyn RankBackend, &SpanOptions) -> Result<T>,
        track: bool,
    ) -> Result<T> {
        if self.is_exact_for(dim) {
            let opts = SpanOptions {
                track,
                primes: Vec::new(),
            };
            return job(self.backend("exact")?, &opts);
        }
        let backend = self.backend("modular")?;
        let mut last = None;
        for attempt in 0..2u64 {
            let opts = SpanOptions {
                track: false,
                primes: select_primes(
                    self.seed.wrapping_add(attempt.wrapping_mul(0x9e37_79b9)),
                    self.prime_count,
                ),
            };
            match job(backend, &opts) {
                Err(Error::Inconsistent(msg)) => {
                    log::warn!("modular disagreement, retrying with new primes: {msg}");
                    last = Some(Error::Inconsistent(msg));
                }
                other => return other,
            }
        }
        Err(last.expect("retry loop ran"))
    }

    /// Span of `vectors` in a space of dimension `dim`.
    pub fn span(&self, dim: usize, vectors: Vectors<'_>, track: bool) -> Result<Box<dyn Span>> {
        self.with_retry(dim, |b, o| b.span(dim, vectors, o), track)
    }

    /// Rank of a matrix (row rank); exact runs carry a nonsingular minor as witness.
    pub fn rank(&self, m: &SparseRationalMatrix) -> Result<RankCertificate> {
        let rows = m.row_vectors();
        let span = self.span(m.ncols(), Vectors::Rat(&rows), false)?;
        Ok(RankCertificate {
            rank: span.rank(),
            certification: span.certification(),
            witness: span.witness(),
        })
    }

    /// Whether `v` lies in the column span of `m`.
    pub fn membership(&self, v: &RatVec, m: &SparseRationalMatrix) -> Result<Membership> {
        let cols = m.column_vectors();
        self.with_retry(
            m.nrows(),
            |b, o| {
                b.span(m.nrows(), Vectors::Rat(&cols), o)?
                    .contains(VecRef::Rat(v))
            },
            true,
        )
    }

    /// `rank(V ∪ R) - rank(R)`.
    pub fn quotient_dim(&self, dim: usize, v: Vectors<'_>, r: Vectors<'_>) -> Result<QuotientDim> {
        self.with_retry(
            dim,
            |b, o| {
                let span = b.span(dim, r, o)?;
                Ok(QuotientDim {
                    dim: span.quotient_rank(v)?,
                    certification: span.certification(),
                })
            },
            false,
        )
    }

    /// Right null space of `m` over the rationals, each vector checked by multiplication.
    pub fn kernel_basis(&self, m: &SparseRationalMatrix) -> Result<Vec<RatVec>> {
        let rows = m.row_vectors();
        let ech = build_echelon(RationalField, m.ncols(), Vectors::Rat(&rows), false)?;
        kernel_from_echelon(&ech, m)
    }
}

fn kernel_from_echelon(
    ech: &Echelon<RationalField>,
    m: &SparseRationalMatrix,
) -> Result<Vec<RatVec>> {
    let n = m.ncols();
    let mut order: Vec<usize> = (0..ech.rank()).collect();
    order.sort_by_key(|&k| std::cmp::Reverse(ech.priority(ech.rows()[k].pivot)));
    let mut basis = Vec::new();
    for free in (0..n).filter(|&c| !ech.is_pivot(c)) {
        let mut x = vec![Rational::zero(); n];
        x[free] = Rational::from_integer(1.into());
        for &k in &order {
            let row = &ech.rows()[k];
            let mut acc = Rational::zero();
            for (c, e) in &row.entries {
                if *c != row.pivot && !x[*c].is_zero() {
                    acc -= e * &x[*c];
                }
            }
            x[row.pivot] = acc;
        }
        let v: RatVec = x
            .into_iter()
            .enumerate()
            .filter(|(_, q)| !q.is_zero())
            .collect();
        if !m.mul_vec(&v).is_empty() {
            return Err(Error::Inconsistent(
                "kernel vector failed verification".into(),
            ));
        }
        basis.push(v);
    }
    Ok(basis)
}
