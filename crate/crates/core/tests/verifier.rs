use homlab_core::linalg::{MatrixCache, Mode};
use homlab_core::report::{Check, Report, Status};
use homlab_core::verifier::{
    dims_row, dims_table, fox_word_sampling, run_suite, run_with, Context, Job, Suite, SuiteConfig,
    SuiteRegistry, DIMS_HEADER, SUITE_NAMES,
};
use homlab_core::LatticeParams;

fn config(g: usize, l: u64, suites: &[&str]) -> SuiteConfig {
    let mut c = SuiteConfig::new(g, l);
    c.suites = suites.iter().map(|s| s.to_string()).collect();
    c.sample_count = 20;
    c
}

fn failures(r: &Report<SuiteConfig>) -> Vec<&Check> {
    r.checks.iter().filter(|c| !c.passed()).collect()
}

#[test]
fn default_registry() {
    let r = SuiteRegistry::default();
    assert_eq!(r.names(), SUITE_NAMES.to_vec());
    assert!(r.get("ring").is_some());
    assert!(r.get("nope").is_none());
}

#[test]
fn unknown_suite_rejected() {
    assert!(run_suite(&config(1, 2, &["lattice", "bogus"])).is_err());
    assert!(run_suite(&config(0, 2, &["lattice"])).is_err());
}

#[test]
fn selection_order() {
    let c = config(1, 2, &["presentation", "lattice"]);
    assert_eq!(c.selected().unwrap(), ["lattice", "presentation"]);
    assert_eq!(
        config(1, 2, &["all"]).selected().unwrap(),
        SUITE_NAMES.to_vec()
    );
}

#[test]
fn genus_one_level_two_passes() {
    for suite in ["lattice", "ring", "presentation"] {
        let r = run_suite(&config(1, 2, &[suite])).unwrap();
        assert!(failures(&r).is_empty(), "{suite}: {:#?}", failures(&r));
        assert!(r.checks.iter().all(|c| c.name.starts_with(match suite {
            "lattice" => "lattice.",
            "ring" => "ring.",
            _ => "",
        })));
        assert_eq!(r.summary.total, r.checks.len());
        assert_eq!(r.summary.passed, r.checks.len());
    }
}

#[test]
fn genus_two_lattice_and_ring() {
    let r = run_suite(&config(2, 2, &["lattice", "ring"])).unwrap();
    assert!(failures(&r).is_empty(), "{:#?}", failures(&r));
    let orbits = r
        .checks
        .iter()
        .find(|c| c.name == "lattice.orbits.count")
        .unwrap();
    assert_eq!(orbits.actual, "2");
}

#[test]
fn report_json_shape() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("nested/report.json");
    let mut c = config(1, 3, &["lattice"]);
    c.report_path = Some(path.clone());
    let r = run_suite(&c).unwrap();
    let text = std::fs::read_to_string(&path).unwrap();
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["schema_version"], "1");
    assert_eq!(v["config"]["L"], 3);
    assert_eq!(v["config"]["mode"], "hybrid");
    let keys: Vec<_> = v["summary"].as_object().unwrap().keys().cloned().collect();
    assert_eq!(keys.len(), 4);
    for k in ["total", "passed", "failed", "skipped"] {
        assert!(keys.iter().any(|x| x == k));
    }
    for check in v["checks"].as_array().unwrap() {
        assert!(["pass", "fail", "skipped-budget"].contains(&check["status"].as_str().unwrap()));
        assert!(check["millis"].is_u64());
        assert_eq!(check["certification"], "exact");
    }
    let back: Report<SuiteConfig> = serde_json::from_str(&text).unwrap();
    assert_eq!(back, r);
}

#[test]
fn config_rejects_unknown_fields() {
    let c = SuiteConfig::new(2, 2);
    let mut v = serde_json::to_value(&c).unwrap();
    assert_eq!(serde_json::from_value::<SuiteConfig>(v.clone()).unwrap(), c);
    v["extra"] = serde_json::json!(1);
    assert!(serde_json::from_value::<SuiteConfig>(v).is_err());
}

#[test]
fn same_seed_same_report() {
    let c = config(2, 2, &["ring", "presentation"]);
    let a = run_suite(&c).unwrap().without_timing();
    let b = run_suite(&c).unwrap().without_timing();
    assert_eq!(a, b);
    let mut threaded = c.clone();
    threaded.worker_count = 2;
    let t = run_suite(&threaded).unwrap().without_timing();
    assert_eq!(a.checks, t.checks);
}

#[test]
fn modular_mode_records_primes() {
    let mut c = config(2, 2, &["presentation"]);
    c.mode = Mode::Modular;
    let r = run_suite(&c).unwrap();
    assert!(failures(&r).is_empty(), "{:#?}", failures(&r));
    let modular: Vec<_> = r
        .checks
        .iter()
        .filter(|c| c.certification == "modular")
        .collect();
    assert!(!modular.is_empty());
    for c in modular {
        assert!(
            c.primes.len() >= 2 && c.primes.iter().all(|&p| p > 1 << 30),
            "{c:?}"
        );
    }
}

#[test]
fn hybrid_switches_on_column_cap() {
    let mut c = config(2, 2, &["presentation"]);
    c.exact_col_cap = 100;
    let r = run_suite(&c).unwrap();
    assert!(failures(&r).is_empty());
    let q = r
        .checks
        .iter()
        .find(|c| c.name == "lemma.psiinjective.quotient-dim")
        .unwrap();
    assert_eq!(q.certification, "modular");
    let rank = r
        .checks
        .iter()
        .find(|c| c.name == "lemma.psiinjective.rank-psi")
        .unwrap();
    assert_eq!(rank.certification, "exact");
}

struct Broken;

impl Suite for Broken {
    fn name(&self) -> &'static str {
        "ring"
    }

    fn jobs<'a>(&self, _ctx: &'a Context<'a>) -> Vec<Job<'a>> {
        vec![
            Job::new("broken.ok", || Ok(vec![Check::eq("broken.ok", 1, 1)])),
            Job::new("broken.err", || {
                Err(homlab_core::Error::Construction("boom".into()))
            }),
            Job::new("broken.fail", || Ok(vec![Check::eq("broken.fail", 1, 2)])),
        ]
    }
}

#[test]
fn registered_suite_replaces_builtin() {
    let mut registry = SuiteRegistry::default();
    registry.register(Box::new(Broken));
    assert_eq!(registry.names().len(), 4);
    let r = run_with(&registry, &config(1, 2, &["ring"])).unwrap();
    let names: Vec<_> = r.checks.iter().map(|c| c.name.as_str()).collect();
    assert_eq!(names, ["broken.ok", "broken.err", "broken.fail"]);
    assert_eq!(r.checks[1].status, Status::Fail);
    assert_eq!((r.summary.passed, r.summary.failed), (1, 2));
}

struct Twice;

impl Suite for Twice {
    fn name(&self) -> &'static str {
        "lattice"
    }

    fn jobs<'a>(&self, _ctx: &'a Context<'a>) -> Vec<Job<'a>> {
        (0..2)
            .map(|_| Job::new("same", || Ok(vec![Check::eq("same", 1, 1)])))
            .collect()
    }
}

#[test]
fn duplicate_check_names_rejected() {
    let mut registry = SuiteRegistry::empty();
    registry.register(Box::new(Twice));
    assert!(run_with(&registry, &config(1, 2, &["lattice"])).is_err());
}

#[test]
fn unregistered_suite_is_an_error() {
    let registry = SuiteRegistry::empty();
    assert!(run_with(&registry, &config(1, 2, &["fox"])).is_err());
}

#[test]
fn dims_rows() {
    let p = |g, l| LatticeParams::new(g, l).unwrap();
    assert_eq!(
        dims_row(p(1, 2), 20_000, None).unwrap(),
        "1,2,2,0,5,3,3,2,2,0,4,0"
    );
    assert_eq!(
        dims_row(p(2, 2), 20_000, None).unwrap(),
        "2,2,34,30,49,45,15,2,2,9,7,15"
    );
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("dims.csv");
    let cache = MatrixCache::new(dir.path().join("cache"));
    let table = dims_table(&[1, 2], &[2], Some(&out), 20_000, Some(&cache)).unwrap();
    let lines: Vec<_> = table.lines().collect();
    assert_eq!(lines[0], DIMS_HEADER);
    assert_eq!(lines.len(), 3);
    assert_eq!(std::fs::read_to_string(&out).unwrap(), table);
    let again = dims_table(&[1, 2], &[2], None, 20_000, Some(&cache)).unwrap();
    assert_eq!(again, table);
}

#[test]
fn dims_row_over_budget() {
    let p = LatticeParams::new(2, 2).unwrap();
    let row = dims_row(p, 10, None).unwrap();
    assert!(row.ends_with(",skipped-budget"), "{row}");
}

#[test]
fn fox_sampling_policy() {
    let p = |g, l| LatticeParams::new(g, l).unwrap();
    assert_eq!(
        format!("{:?}", fox_word_sampling(p(1, 2), 5, 0)),
        "Exhaustive { max_len: 4 }"
    );
    assert!(format!("{:?}", fox_word_sampling(p(2, 2), 5, 0)).starts_with("Random"));
}
