//! Check suites, the batch runner and the dimension table.
//!
//! A suite turns a configuration into a list of independent jobs; the runner
//! executes the jobs of every selected suite on a worker pool and assembles the
//! checks in a fixed order, so a report depends only on the configuration.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fox::{self, CoverComplex, FreeWord, WordSampling};
use crate::group_ring::{self, GroupRingElement};
use crate::lattice::{self, LatticeParams, TransvectionGenerator, ZlVector};
use crate::linalg::{Linalg, MatrixCache, Mode, Rational, DEFAULT_EXACT_COL_CAP};
use crate::presentation::verify::{self as pv, Workbench};
use crate::presentation::{catalog, Presentation};
use crate::report::{timed, Check, Report};

/// Largest `|H_L|` for the orbit search and exhaustive lattice checks.
pub const LATTICE_CAP: usize = 1 << 16;

/// Largest number of argument tuples checked exhaustively by the ring suite.
pub const EXHAUSTIVE_TUPLE_CAP: usize = 10_000;

/// Minimum sample size for sampled ring identities.
pub const MIN_RING_SAMPLES: usize = 1_000;

pub const SUITE_NAMES: [&str; 4] = ["lattice", "ring", "fox", "presentation"];

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteConfig {
    pub g: usize,
    #[serde(rename = "L")]
    pub l: u64,
    pub suites: Vec<String>,
    pub mode: Mode,
    pub sample_count: usize,
    pub seed: u64,
    pub cache_dir: Option<PathBuf>,
    pub report_path: Option<PathBuf>,
    pub worker_count: usize,
    pub exact_col_cap: usize,
}

impl SuiteConfig {
    pub fn new(g: usize, l: u64) -> Self {
        Self {
            g,
            l,
            suites: vec!["all".into()],
            mode: Mode::Hybrid,
            sample_count: 100,
            seed: 0,
            cache_dir: None,
            report_path: None,
            worker_count: 1,
            exact_col_cap: DEFAULT_EXACT_COL_CAP,
        }
    }

    pub fn params(&self) -> Result<LatticeParams> {
        LatticeParams::new(self.g, self.l)
    }

    pub fn linalg(&self) -> Linalg {
        Linalg::new(self.mode)
            .with_exact_col_cap(self.exact_col_cap)
            .with_seed(self.seed)
    }

    /// Selected suite names in registry order; `all` selects every suite.
    pub fn selected(&self) -> Result<Vec<&'static str>> {
        for s in &self.suites {
            if s != "all" && !SUITE_NAMES.contains(&s.as_str()) {
                return Err(Error::Params(format!("unknown suite {s:?}")));
            }
        }
        let all = self.suites.iter().any(|s| s == "all");
        Ok(SUITE_NAMES
            .iter()
            .copied()
            .filter(|n| all || self.suites.iter().any(|s| s == n))
            .collect())
    }
}

/// Shared inputs of one run.
pub struct Context<'a> {
    pub config: &'a SuiteConfig,
    pub params: LatticeParams,
    pub linalg: Linalg,
    pub cache: Option<MatrixCache>,
}

impl Context<'_> {
    fn rng(&self, stream: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.config.seed ^ stream.wrapping_mul(0x9e37_79b9_7f4a_7c15))
    }

    fn random_vector(&self, rng: &mut ChaCha8Rng) -> ZlVector {
        ZlVector::from_index(self.params, rng.gen_range(0..self.params.order()))
    }
}

type JobFn<'a> = Box<dyn FnOnce() -> Result<Vec<Check>> + Send + 'a>;

/// A named unit of work; an error becomes a single failed (or skipped) check under `name`.
pub struct Job<'a> {
    pub name: String,
    pub run: JobFn<'a>,
}

impl<'a> Job<'a> {
    pub fn new(
        name: impl Into<String>,
        run: impl FnOnce() -> Result<Vec<Check>> + Send + 'a,
    ) -> Self {
        Self {
            name: name.into(),
            run: Box::new(run),
        }
    }
}

pub trait Suite: Send + Sync {
    fn name(&self) -> &'static str;
    fn jobs<'a>(&self, ctx: &'a Context<'a>) -> Vec<Job<'a>>;
}

/// Suites by name.
pub struct SuiteRegistry {
    suites: Vec<Box<dyn Suite>>,
}

impl SuiteRegistry {
    pub fn empty() -> Self {
        Self { suites: Vec::new() }
    }

    pub fn register(&mut self, suite: Box<dyn Suite>) {
        self.suites.retain(|s| s.name() != suite.name());
        self.suites.push(suite);
    }

    pub fn get(&self, name: &str) -> Option<&dyn Suite> {
        self.suites
            .iter()
            .find(|s| s.name() == name)
            .map(|s| s.as_ref())
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.suites.iter().map(|s| s.name()).collect()
    }
}

impl Default for SuiteRegistry {
    fn default() -> Self {
        let mut r = Self::empty();
        r.register(Box::new(LatticeSuite));
        r.register(Box::new(RingSuite));
        r.register(Box::new(FoxSuite));
        r.register(Box::new(PresentationSuite));
        r
    }
}

/// Runs the selected suites with the default registry and writes the report if asked.
pub fn run_suite(config: &SuiteConfig) -> Result<Report<SuiteConfig>> {
    run_with(&SuiteRegistry::default(), config)
}

pub fn run_with(registry: &SuiteRegistry, config: &SuiteConfig) -> Result<Report<SuiteConfig>> {
    let params = config.params()?;
    let ctx = Context {
        config,
        params,
        linalg: config.linalg(),
        cache: config.cache_dir.as_ref().map(MatrixCache::new),
    };
    let mut jobs = Vec::new();
    for name in config.selected()? {
        let suite = registry
            .get(name)
            .ok_or_else(|| Error::Params(format!("suite {name:?} is not registered")))?;
        jobs.extend(suite.jobs(&ctx));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.worker_count.max(1))
        .build()
        .map_err(|e| Error::Params(format!("worker pool: {e}")))?;
    let results: Vec<Vec<Check>> = pool.install(|| {
        jobs.into_par_iter()
            .map(|job| {
                log::info!("running {}", job.name);
                timed(&job.name, job.run)
            })
            .collect()
    });
    let checks: Vec<Check> = results.into_iter().flatten().collect();
    let mut seen = std::collections::HashSet::new();
    if let Some(dup) = checks.iter().find(|c| !seen.insert(c.name.as_str())) {
        return Err(Error::Construction(format!(
            "check {} appears twice",
            dup.name
        )));
    }
    let report = Report::new(config.clone(), checks);
    if let Some(path) = &config.report_path {
        write_json(path, &report)?;
    }
    Ok(report)
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

/// Turns a sequence of per-instance outcomes into one check.
struct Tally {
    name: String,
    total: usize,
    witness: Option<String>,
}

impl Tally {
    fn new(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            total: 0,
            witness: None,
        }
    }

    fn record(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.total += 1;
        if !ok && self.witness.is_none() {
            self.witness = Some(describe());
        }
    }

    fn check(self) -> Check {
        let actual = match &self.witness {
            None => format!("{} instances hold", self.total),
            Some(w) => format!("fails at {w}"),
        };
        Check::new(
            self.name,
            "all instances hold",
            actual,
            self.witness.is_none() && self.total > 0,
        )
    }
}

/// Either every index tuple in `0..n` of length `arity`, or `count` seeded random ones.
fn tuples(n: usize, arity: u32, count: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<usize>> {
    let total = n.checked_pow(arity).filter(|&t| t <= EXHAUSTIVE_TUPLE_CAP);
    match total {
        Some(t) => (0..t)
            .map(|mut i| {
                (0..arity)
                    .map(|_| {
                        let d = i % n;
                        i /= n;
                        d
                    })
                    .collect()
            })
            .collect(),
        None => (0..count.max(MIN_RING_SAMPLES))
            .map(|_| (0..arity).map(|_| rng.gen_range(0..n)).collect())
            .collect(),
    }
}

fn labels(vs: &[&ZlVector]) -> String {
    vs.iter().map(|v| v.label()).collect::<Vec<_>>().join(", ")
}

pub struct LatticeSuite;

impl Suite for LatticeSuite {
    fn name(&self) -> &'static str {
        "lattice"
    }

    fn jobs<'a>(&self, ctx: &'a Context<'a>) -> Vec<Job<'a>> {
        let params = ctx.params;
        vec![
            Job::new("lattice.pairing.normalization", move || {
                let (a, b) = (ZlVector::a(params, 0), ZlVector::b(params, 0));
                Ok(vec![
                    Check::eq("lattice.pairing.normalization", 1, a.pairing(&b)?),
                    Check::eq(
                        "lattice.pairing.reversed",
                        params.level() - 1,
                        b.pairing(&a)?,
                    ),
                ])
            }),
            Job::new("lattice.pairing", move || {
                let mut rng = ctx.rng(1);
                let n = params.order();
                let l = params.level();
                let mut anti = Tally::new("lattice.pairing.antisymmetry");
                let mut bilinear = Tally::new("lattice.pairing.bilinearity");
                let mut transvect = Tally::new("lattice.transvections.preserve-pairing");
                let directions: Vec<ZlVector> = (0..n)
                    .map(|i| ZlVector::from_index(params, i))
                    .filter(|v| v.is_primitive())
                    .collect();
                for t in tuples(n, 3, ctx.config.sample_count, &mut rng) {
                    let [x, y, z] = [t[0], t[1], t[2]].map(|i| ZlVector::from_index(params, i));
                    let (xy, yx) = (x.pairing(&y)?, y.pairing(&x)?);
                    anti.record((xy + yx) % l == 0, || labels(&[&x, &y]));
                    let lhs = (&x + &y).pairing(&z)?;
                    bilinear.record(lhs == (x.pairing(&z)? + y.pairing(&z)?) % l, || {
                        labels(&[&x, &y, &z])
                    });
                    let d = &directions[rng.gen_range(0..directions.len())];
                    let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
                    let tv = TransvectionGenerator::new(d.clone(), sign)?;
                    let moved = tv.apply(&x)?.pairing(&tv.apply(&y)?)?;
                    transvect.record(moved == xy, || {
                        format!("{}, direction {}", labels(&[&x, &y]), d.label())
                    });
                }
                Ok(vec![anti.check(), bilinear.check(), transvect.check()])
            }),
            Job::new("lattice.content", move || {
                let vectors = lattice::enumerate_vectors(params, LATTICE_CAP)?;
                let mut t = Tally::new("lattice.content.unimodular");
                for v in vectors.iter().filter(|v| !v.is_zero()) {
                    let uni = lattice::is_unimodular(std::slice::from_ref(v))?;
                    t.record((v.content() == 1) == uni, || v.label());
                }
                let zero = ZlVector::zero(params).content();
                Ok(vec![
                    t.check(),
                    Check::eq("lattice.content.zero", params.level(), zero),
                ])
            }),
            Job::new("lattice.orbits", move || {
                let labels = lattice::sp_orbit_labels(params, LATTICE_CAP)?;
                let count = labels.iter().copied().max().map_or(0, |m| m + 1);
                let mut by_content = std::collections::BTreeMap::new();
                let mut consistent = true;
                for (i, &label) in labels.iter().enumerate() {
                    let c = ZlVector::from_index(params, i).content();
                    consistent &= *by_content.entry(c).or_insert(label) == label;
                }
                consistent &= by_content.len() == count;
                Ok(vec![
                    Check::eq(
                        "lattice.orbits.count",
                        lattice::tau(params.level()) as usize,
                        count,
                    ),
                    Check::new(
                        "lattice.orbits.content",
                        "orbits are the content classes",
                        format!("{} contents, {} orbits", by_content.len(), count),
                        consistent,
                    ),
                ])
            }),
            Job::new("lattice.pairs", move || {
                let pairs = lattice::enumerate_iso_uni_pairs(params, LATTICE_CAP)?;
                let mut t = Tally::new("lattice.pairs.predicates");
                for (a, b) in &pairs {
                    let set = [a.clone(), b.clone()];
                    let ok =
                        a != b && lattice::is_isotropic(&set)? && lattice::is_unimodular(&set)?;
                    t.record(ok, || labels(&[a, b]));
                }
                let mut checks = if pairs.is_empty() {
                    vec![Check::eq(
                        "lattice.pairs.predicates",
                        2 <= params.genus(),
                        false,
                    )]
                } else {
                    vec![t.check()]
                };
                let set: std::collections::HashSet<_> = pairs.iter().collect();
                let swapped = pairs
                    .iter()
                    .all(|(a, b)| set.contains(&(b.clone(), a.clone())));
                checks.push(Check::new(
                    "lattice.pairs.symmetric",
                    "closed under swapping",
                    format!("{} pairs, swap-closed: {swapped}", pairs.len()),
                    swapped,
                ));
                Ok(checks)
            }),
        ]
    }
}

/// Case 3 and case 4 cancellation checks: exhaustive when small, otherwise at least
/// `MIN_RING_SAMPLES` seeded random tuples.
pub fn verify_cancellations(params: LatticeParams, sample_count: usize, seed: u64) -> Vec<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = params.order();
    let v = |i: usize| ZlVector::from_index(params, i);
    let mut case3 = Tally::new("ring.case3-cancellation");
    for t in tuples(n, 3, sample_count, &mut rng) {
        let (f, y, z) = (v(t[0]), v(t[1]), v(t[2]));
        case3.record(group_ring::verify_case3_cancellation(&f, &y, &z), || {
            labels(&[&f, &y, &z])
        });
    }
    let mut case4 = Tally::new("ring.case4-telescoping");
    for t in tuples(n, 4, sample_count, &mut rng) {
        let (f, x, y, z) = (v(t[0]), v(t[1]), v(t[2]), v(t[3]));
        case4.record(group_ring::verify_case4_telescoping(&f, &x, &y, &z), || {
            labels(&[&f, &x, &y, &z])
        });
    }
    vec![case3.check(), case4.check()]
}

fn random_element(params: LatticeParams, rng: &mut ChaCha8Rng) -> Result<GroupRingElement> {
    let n = params.order();
    let support = rng.gen_range(1..=n.min(6));
    let terms: Vec<(usize, Rational)> = (0..support)
        .map(|_| {
            let num = rng.gen_range(-5i64..=5);
            let den = rng.gen_range(1i64..=3);
            (rng.gen_range(0..n), Rational::new(num.into(), den.into()))
        })
        .collect();
    GroupRingElement::from_terms(params, terms)
}

pub struct RingSuite;

impl Suite for RingSuite {
    fn name(&self) -> &'static str {
        "ring"
    }

    fn jobs<'a>(&self, ctx: &'a Context<'a>) -> Vec<Job<'a>> {
        let params = ctx.params;
        let samples = ctx.config.sample_count;
        vec![
            Job::new("ring.algebra", move || {
                let mut rng = ctx.rng(2);
                let theta = GroupRingElement::theta(params);
                let mut invariant = Tally::new("ring.theta.invariant");
                let mut mult = Tally::new("ring.augmentation.multiplicative");
                let mut split = Tally::new("ring.decompose.splitting");
                let mut assoc = Tally::new("ring.product.associative");
                for _ in 0..samples.max(1) {
                    let (a, b, c) = (
                        random_element(params, &mut rng)?,
                        random_element(params, &mut rng)?,
                        random_element(params, &mut rng)?,
                    );
                    invariant.record(&theta * &a == theta.scale(&a.augmentation()), || {
                        format!("{a:?}")
                    });
                    mult.record(
                        (&a * &b).augmentation() == a.augmentation() * b.augmentation(),
                        || format!("{a:?}, {b:?}"),
                    );
                    let d = a.decompose();
                    let ok = &d.trivial() + &d.ideal == a
                        && d.ideal.augmentation().is_zero()
                        && d.ideal.decompose().trivial().is_zero();
                    split.record(ok, || format!("{a:?}"));
                    assoc.record(&(&a * &b) * &c == &a * &(&b * &c), || {
                        format!("{a:?}, {b:?}, {c:?}")
                    });
                }
                Ok(vec![
                    invariant.check(),
                    mult.check(),
                    split.check(),
                    assoc.check(),
                ])
            }),
            Job::new("ring.psi", move || {
                let mut rng = ctx.rng(3);
                let pairs = lattice::enumerate_iso_uni_pairs(params, LATTICE_CAP)?;
                let mut names = [
                    "ring.psi.symmetric",
                    "ring.psi.augmentation",
                    "ring.psi.translation-sum",
                ];
                if pairs.is_empty() {
                    return Ok(names
                        .iter_mut()
                        .map(|n| {
                            Check::new(
                                *n,
                                "no isotropic unimodular pairs",
                                "no isotropic unimodular pairs",
                                true,
                            )
                        })
                        .collect());
                }
                let mut sym = Tally::new(names[0]);
                let mut aug = Tally::new(names[1]);
                let mut total = Tally::new(names[2]);
                for _ in 0..samples.max(1) {
                    let (w1, w2) = &pairs[rng.gen_range(0..pairs.len())];
                    let v = ctx.random_vector(&mut rng);
                    let p = group_ring::psi_image(&v, w1, w2)?;
                    sym.record(p == group_ring::psi_image(&v, w2, w1)?, || {
                        labels(&[&v, w1, w2])
                    });
                    aug.record(p.augmentation().is_zero(), || labels(&[&v, w1, w2]));
                }
                for (w1, w2) in pairs.iter().take(samples.clamp(1, 16)) {
                    let mut acc = GroupRingElement::zero(params);
                    for i in 0..params.order() {
                        acc = &acc
                            + &group_ring::psi_image(&ZlVector::from_index(params, i), w1, w2)?;
                    }
                    total.record(acc.is_zero(), || labels(&[w1, w2]));
                }
                Ok(vec![sym.check(), aug.check(), total.check()])
            }),
            Job::new("ring.boundary", move || {
                let mut rng = ctx.rng(4);
                let mut aug = Tally::new("ring.boundary.augmentation");
                let mut reindex = Tally::new("ring.boundary-t3.reindexing");
                let mut sym = Tally::new("ring.boundary-t2.symmetric");
                for _ in 0..samples.max(1) {
                    let [f, x, y, z] = [0; 4].map(|_| ctx.random_vector(&mut rng));
                    let t2 = group_ring::boundary_t2(&f, &y, &z);
                    let t3 = group_ring::boundary_t3(&f, &x, &y, &z);
                    aug.record(
                        t2.augmentation().is_zero() && t3.augmentation().is_zero(),
                        || labels(&[&f, &x, &y, &z]),
                    );
                    reindex.record(
                        group_ring::boundary_t3(&(&f + &x), &x, &y, &z) == t3,
                        || labels(&[&f, &x, &y, &z]),
                    );
                    sym.record(group_ring::boundary_t2(&f, &z, &y) == t2, || {
                        labels(&[&f, &y, &z])
                    });
                }
                Ok(vec![aug.check(), reindex.check(), sym.check()])
            }),
            Job::new("ring.cancellation", move || {
                Ok(verify_cancellations(params, samples, ctx.config.seed ^ 5))
            }),
        ]
    }
}

/// Word sampling used by the fox suite: exhaustive to length 4 in genus 1.
pub fn fox_word_sampling(params: LatticeParams, sample_count: usize, seed: u64) -> WordSampling {
    if params.genus() == 1 {
        WordSampling::Exhaustive { max_len: 4 }
    } else {
        WordSampling::Random {
            count: sample_count,
            max_len: 8,
            seed,
        }
    }
}

pub struct FoxSuite;

impl Suite for FoxSuite {
    fn name(&self) -> &'static str {
        "fox"
    }

    fn jobs<'a>(&self, ctx: &'a Context<'a>) -> Vec<Job<'a>> {
        let params = ctx.params;
        let samples = ctx.config.sample_count;
        let n = params.order();
        vec![
            Job::new("fox.complex", move || {
                let exact = Linalg::new(Mode::Exact);
                let closed = CoverComplex::build_cached(params, true, ctx.cache.as_ref())?;
                let bounded = CoverComplex::build_cached(params, false, ctx.cache.as_ref())?;
                let dc = closed.h1_dims(&exact)?;
                let db = bounded.h1_dims(&exact)?;
                let (n_i, g_i) = (n as i64, params.genus() as i64);
                let r = FreeWord::relator(params);
                let relator_bounds = closed.cycle_class(&r)?.is_empty();
                let relator_chain = bounded.cycle_class(&r)? == fox::chain_of(&r);
                Ok(vec![
                    Check::eq("fox.chain-complex", true, fox::chain_complex_holds(&closed)),
                    Check::eq("fox.rank-d1", n - 1, exact.rank(closed.d1())?.rank),
                    Check::eq("fox.h1.closed", 2 - n_i * (2 - 2 * g_i), dc.h1 as i64),
                    Check::eq("fox.h1.bounded", 1 - n_i * (1 - 2 * g_i), db.h1 as i64),
                    Check::eq("fox.c.closed", dc.h1 - params.rank(), dc.c_dim),
                    Check::eq("fox.i-dim", n - 1, db.i_dim),
                    Check::eq(
                        "fox.c-sequence",
                        db.i_dim as i64,
                        db.c_dim as i64 - dc.c_dim as i64,
                    ),
                    Check::eq("fox.relator.closed-class-vanishes", true, relator_bounds),
                    Check::eq("fox.relator.bounded-class", true, relator_chain),
                ])
            }),
            Job::new("fox.i-structure", move || {
                let s = fox::verify_i_structure(params)?;
                Ok(vec![
                    Check::eq("fox.i-structure.dim", n - 1, s.dim),
                    Check::eq(
                        "fox.i-structure.kernel-is-theta",
                        true,
                        s.kernel_is_theta(n),
                    ),
                    Check::eq("fox.i-structure.free-action", true, s.free_action),
                ])
            }),
            Job::new("fox.fundamental-identity", move || {
                let ok =
                    fox::verify_fundamental_identity(params, samples.max(1), ctx.config.seed ^ 6);
                Ok(vec![Check::eq("fox.fundamental-identity", true, ok)])
            }),
            Job::new("fox.identities", move || {
                let closed = CoverComplex::build_cached(params, true, ctx.cache.as_ref())?;
                let sampling = fox_word_sampling(params, samples, ctx.config.seed ^ 7);
                let mut checks =
                    fox::verify_commutator_identities(&closed, sampling, "fox.identities");
                // Conjugating by the relator does nothing in homology.
                let mut rng = ctx.rng(8);
                let r = FreeWord::relator(params);
                let mut t = Tally::new("fox.identities.boundary-conjugation");
                for _ in 0..samples.max(1) {
                    let len = rng.gen_range(0..=8);
                    let a = FreeWord::random(params, len, &mut rng).close_to_kernel();
                    t.record(
                        closed.vanishes(&[(1, &FreeWord::conjugate(&a, &r)), (-1, &a)]),
                        || a.to_string(),
                    );
                }
                checks.push(t.check());
                Ok(checks)
            }),
        ]
    }
}

pub struct PresentationSuite;

impl Suite for PresentationSuite {
    fn name(&self) -> &'static str {
        "presentation"
    }

    fn jobs<'a>(&self, ctx: &'a Context<'a>) -> Vec<Job<'a>> {
        let params = ctx.params;
        let samples = ctx.config.sample_count;
        let seed = ctx.config.seed;
        vec![
            Job::new("count", move || {
                let mut checks = pv::verify_counting_identities(6, 12);
                checks.extend(pv::verify_b_dims_enumerated(&[(
                    params.genus(),
                    params.level(),
                )])?);
                Ok(checks)
            }),
            // The lemma checks share lazily built spans, so they run as one job.
            Job::new("presentation", move || {
                let pres = Presentation::new(params)?;
                let wb = Workbench::new(pres, ctx.linalg.clone())?;
                let mut checks = Vec::new();
                type Step<'w> = (&'static str, Box<dyn FnOnce() -> Result<Vec<Check>> + 'w>);
                let steps: Vec<Step<'_>> = vec![
                    ("relations", Box::new(|| pv::verify_relations(&wb))),
                    ("catalog", Box::new(|| pv::verify_catalog(&wb))),
                    (
                        "lemma.v1injective",
                        Box::new(|| pv::verify_v1injective(&wb)),
                    ),
                    (
                        "lemma.newrelation1",
                        Box::new(|| pv::verify_newrelation1(&wb, samples, seed)),
                    ),
                    (
                        "lemma.eliminatev3",
                        Box::new(|| pv::verify_eliminatev3(&wb)),
                    ),
                    (
                        "lemma.newrelation2",
                        Box::new(|| pv::verify_newrelation2(&wb, samples.min(8), seed)),
                    ),
                    (
                        "lemma.psiinjective",
                        Box::new(|| pv::verify_psiinjective(&wb)),
                    ),
                    ("claim", Box::new(|| pv::verify_claims(&wb))),
                ];
                for (name, step) in steps {
                    checks.extend(timed(name, step));
                }
                Ok(checks)
            }),
        ]
    }
}

pub const DIMS_HEADER: &str = "g,L,h1_closed,c_closed,h1_bounded,c_bounded,i_dim,tau,orbits,rank_psi_v1,dim_b1,quotient_dim_v";

const SKIPPED: &str = "skipped-budget";

fn cell<T: ToString>(r: Result<T>) -> Result<String> {
    match r {
        Ok(x) => Ok(x.to_string()),
        Err(e) if e.is_budget() => Ok(SKIPPED.into()),
        Err(e) => Err(e),
    }
}

/// One CSV row (without newline) of exact dimensions for `(g, L)`.
pub fn dims_row(
    params: LatticeParams,
    exact_col_cap: usize,
    cache: Option<&MatrixCache>,
) -> Result<String> {
    let exact = Linalg::new(Mode::Exact);
    let (g, l) = (params.genus(), params.level());
    let mut row = vec![g.to_string(), l.to_string()];
    let cover = |closed| -> Result<fox::H1Dims> {
        CoverComplex::build_cached(params, closed, cache)?.h1_dims(&exact)
    };
    match (cover(true), cover(false)) {
        (Ok(c), Ok(b)) => {
            row.extend([c.h1, c.c_dim, b.h1, b.c_dim, b.i_dim].map(|x| x.to_string()))
        }
        (Err(e), _) | (_, Err(e)) if e.is_budget() => row.extend([SKIPPED; 5].map(String::from)),
        (Err(e), _) | (_, Err(e)) => return Err(e),
    }
    row.push(lattice::tau(l).to_string());
    row.push(cell(lattice::sp_orbit_count_bfs(params, LATTICE_CAP))?);
    let within = |needed: usize| {
        if needed > exact_col_cap {
            Err(Error::budget(
                "exact elimination",
                needed as u128,
                exact_col_cap as u128,
            ))
        } else {
            Ok(())
        }
    };
    let pres = Presentation::new(params).map(|p| (p.generator_count(), p));
    let (rank_v1, quotient_v) = match pres {
        Ok((count, pres)) => {
            let wb = Workbench::new(pres, exact.clone())?;
            let rank_v1 = (|| {
                within(wb.catalog.v1.len())?;
                let m = match cache {
                    Some(c) => {
                        c.get_or_build(g, l, "psi-v1", || Ok(wb.pres.psi_matrix(&wb.catalog.v1)))?
                    }
                    None => wb.pres.psi_matrix(&wb.catalog.v1),
                };
                Ok(exact.rank(&m)?.rank)
            })();
            let quotient_v = (|| {
                within(count)?;
                Ok(wb.quotient_dim(&wb.catalog.all())?.0)
            })();
            (cell(rank_v1)?, cell(quotient_v)?)
        }
        Err(e) if e.is_budget() => (SKIPPED.into(), SKIPPED.into()),
        Err(e) => return Err(e),
    };
    row.push(rank_v1);
    row.push(catalog::b_dims(g as u64, l).0.to_string());
    row.push(quotient_v);
    Ok(row.join(","))
}

/// The dimension table over the cross product of `gs` and `ls`, written to `output` if given.
pub fn dims_table(
    gs: &[usize],
    ls: &[u64],
    output: Option<&Path>,
    exact_col_cap: usize,
    cache: Option<&MatrixCache>,
) -> Result<String> {
    let mut out = String::new();
    writeln!(out, "{DIMS_HEADER}").expect("writing to a string");
    for &g in gs {
        for &l in ls {
            let row = dims_row(LatticeParams::new(g, l)?, exact_col_cap, cache)?;
            writeln!(out, "{row}").expect("writing to a string");
        }
    }
    if let Some(path) = output {
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            fs::create_dir_all(dir)?;
        }
        fs::write(path, &out)?;
    }
    Ok(out)
}
