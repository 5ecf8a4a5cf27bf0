use std::path::PathBuf;
use std::process::{Command, Output};

fn homlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_homlab"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn run_writes_report() {
    let dir = scratch("run");
    let report = dir.join("report.json");
    let o = homlab(&[
        "run",
        "--g",
        "1",
        "--L",
        "3",
        "--suite",
        "lattice",
        "--report",
        report.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("g=1 L=3:"));
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(v["schema_version"], "1");
    assert_eq!(v["summary"]["failed"], 0);
}

#[test]
fn grid_gets_one_report_per_configuration() {
    let dir = scratch("grid");
    let report = dir.join("r.json");
    let o = homlab(&[
        "run",
        "--g",
        "1",
        "--L",
        "2",
        "--L",
        "4",
        "--suite",
        "lattice",
        "--report",
        report.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    assert!(dir.join("r_g1_L2.json").exists());
    assert!(dir.join("r_g1_L4.json").exists());
    assert_eq!(
        stdout(&o)
            .lines()
            .filter(|l| l.contains("0 failed"))
            .count(),
        2
    );
}

#[test]
fn bad_arguments_exit_with_two() {
    let o = homlab(&["run", "--g", "1", "--L", "2", "--suite", "bogus"]);
    assert_eq!(o.status.code(), Some(2));
    let o = homlab(&["run", "--g", "1", "--L", "1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn dims_to_stdout_and_file() {
    let o = homlab(&["dims", "--g", "1", "--L", "2"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let lines: Vec<_> = text.lines().collect();
    assert!(lines[0].starts_with("g,L,h1_closed"));
    assert_eq!(lines[1], "1,2,2,0,5,3,3,2,2,0,4,0");

    let dir = scratch("dims");
    let out = dir.join("dims.csv");
    let cache = dir.join("cache");
    let o = homlab(&[
        "dims",
        "--g",
        "1",
        "--L",
        "2",
        "--out",
        out.to_str().unwrap(),
        "--cache-dir",
        cache.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    assert_eq!(std::fs::read_to_string(&out).unwrap(), text);
    assert!(cache.exists());
}

#[test]
fn class_of_a_word() {
    let o = homlab(&["class", "--g", "1", "--L", "2", "--word", "a1 a1"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("exponent sums: [2, 0]"));

    let o = homlab(&["class", "--g", "1", "--L", "2", "--word", "a1 b1 A1 B1"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("class: 0"));

    let o = homlab(&["class", "--g", "1", "--L", "2", "--word", "a1"]);
    assert_eq!(o.status.code(), Some(2));
}
