use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context as _, Result};
use clap::{Args, Parser, Subcommand};
use homlab_core::fox::{CoverComplex, FreeWord};
use homlab_core::linalg::{MatrixCache, Mode, DEFAULT_EXACT_COL_CAP};
use homlab_core::verifier::{dims_table, run_suite, SuiteConfig};
use homlab_core::{LatticeParams, ZlVector};

#[derive(Parser)]
#[command(
    name = "homlab",
    version,
    about = "Exact checks for abelian Z/L-covers of surfaces"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run check suites and write JSON reports.
    Run(RunArgs),
    /// Write the dimension table as CSV.
    Dims(DimsArgs),
    /// Print the homology class of a word in the cover.
    Class(ClassArgs),
}

#[derive(Args)]
struct Grid {
    /// Genus; repeat for several values.
    #[arg(long = "g", required = true)]
    g: Vec<usize>,
    /// Level; repeat for several values.
    #[arg(long = "L", required = true)]
    l: Vec<u64>,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    grid: Grid,
    /// lattice, ring, fox, presentation or all; repeatable.
    #[arg(long = "suite", default_value = "all")]
    suite: Vec<String>,
    #[arg(long, default_value = "hybrid")]
    mode: Mode,
    /// Samples per randomized check.
    #[arg(long = "sample", default_value_t = 100)]
    sample: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Report path; with several configurations `_g{g}_L{L}` is added before the extension.
    #[arg(long)]
    report: Option<PathBuf>,
    #[arg(long = "cache-dir")]
    cache_dir: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    threads: usize,
    /// Largest ambient dimension eliminated exactly in hybrid mode.
    #[arg(long = "exact-col-cap", default_value_t = DEFAULT_EXACT_COL_CAP)]
    exact_col_cap: usize,
}

#[derive(Args)]
struct DimsArgs {
    #[command(flatten)]
    grid: Grid,
    /// CSV output path; printed to stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long = "cache-dir")]
    cache_dir: Option<PathBuf>,
    #[arg(long = "exact-col-cap", default_value_t = DEFAULT_EXACT_COL_CAP)]
    exact_col_cap: usize,
}

#[derive(Args)]
struct ClassArgs {
    #[arg(long = "g")]
    g: usize,
    #[arg(long = "L")]
    l: u64,
    /// Word such as "a1 b1 A1 B1" (uppercase letters are inverses).
    #[arg(long)]
    word: String,
    /// Use the surface with one boundary component.
    #[arg(long)]
    bounded: bool,
}

fn report_path(base: &Option<PathBuf>, g: usize, l: u64, many: bool) -> Option<PathBuf> {
    let base = base.as_ref()?;
    if !many {
        return Some(base.clone());
    }
    let stem = base
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let name = match base.extension() {
        Some(ext) => format!("{stem}_g{g}_L{l}.{}", ext.to_string_lossy()),
        None => format!("{stem}_g{g}_L{l}"),
    };
    Some(base.with_file_name(name))
}

fn run(args: RunArgs) -> Result<bool> {
    let many = args.grid.g.len() * args.grid.l.len() > 1;
    let mut ok = true;
    for &g in &args.grid.g {
        for &l in &args.grid.l {
            let config = SuiteConfig {
                g,
                l,
                suites: args.suite.clone(),
                mode: args.mode,
                sample_count: args.sample,
                seed: args.seed,
                cache_dir: args.cache_dir.clone(),
                report_path: report_path(&args.report, g, l, many),
                worker_count: args.threads,
                exact_col_cap: args.exact_col_cap,
            };
            let report = run_suite(&config).with_context(|| format!("running g={g} L={l}"))?;
            for c in report.checks.iter().filter(|c| !c.passed()) {
                println!(
                    "{:?} {}: expected {}, got {}",
                    c.status, c.name, c.expected, c.actual
                );
            }
            let s = &report.summary;
            println!(
                "g={g} L={l}: {} checks, {} passed, {} failed, {} skipped",
                s.total, s.passed, s.failed, s.skipped
            );
            ok &= s.failed == 0;
        }
    }
    Ok(ok)
}

fn dims(args: DimsArgs) -> Result<bool> {
    let cache = args.cache_dir.map(MatrixCache::new);
    let table = dims_table(
        &args.grid.g,
        &args.grid.l,
        args.out.as_deref(),
        args.exact_col_cap,
        cache.as_ref(),
    )?;
    if args.out.is_none() {
        print!("{table}");
    }
    Ok(true)
}

fn class(args: ClassArgs) -> Result<bool> {
    let params = LatticeParams::new(args.g, args.l)?;
    let word = FreeWord::parse(params, &args.word)?;
    let complex = CoverComplex::build(params, !args.bounded)?;
    let (sums, image) = word.abelianize();
    if !word.in_kernel() {
        bail!(
            "{word} has abelianization {} mod {}, not zero",
            image.label(),
            args.l
        );
    }
    let class = complex.cycle_class(&word)?;
    println!("word: {word}");
    println!("exponent sums: {sums:?}");
    let n = params.order();
    if class.is_empty() {
        println!("class: 0");
    }
    for (cell, q) in class {
        let (j, h) = (cell / n, cell % n);
        let letter = if j % 2 == 0 { 'a' } else { 'b' };
        println!(
            "{letter}{} @ {}: {q}",
            j / 2 + 1,
            ZlVector::from_index(params, h).label()
        );
    }
    Ok(true)
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Run(a) => run(a),
        Command::Dims(a) => dims(a),
        Command::Class(a) => class(a),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
