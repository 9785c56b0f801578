//! File-based front end: JSON descriptions of forms and pencils in,
//! JSON reports out, plus the seeded verification suites.
//!
//! Exit codes: 0 success, 1 usage or parse problems, 2 input that
//! parses but fails validation, 3 verification suite failure. Output
//! is assembled in full before anything is written, so error paths
//! never leave partial JSON behind.

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use quadrics::forms::QuadraticForm;
use quadrics::geometry::{
    extend_form_to_fq, extension_field, isotropic_subspace_fq, reduce_form_mod_p,
};
use quadrics::local::{
    local_point_search_intersection, rational_point_search, witt_index_local, LocalPlace,
    LocalPointSearch,
};
use quadrics::pencil::Pencil;
use quadrics::report::{
    analyze, default_places, default_places_form, residue_report, FormInput, PencilInput,
    VerdictJson, WittRow,
};
use quadrics::residues::{plane_criterion, ResidueContext};
use quadrics::scalars::{Fp, Rationals};
use quadrics::verify::{run_all, VerifyReport, SUITES};
use serde::de::DeserializeOwned;
use std::fs;
use std::path::{Path, PathBuf};

#[derive(Parser)]
#[command(name = "quadrics", version, about = "Exact analysis of pencils of quadratic forms")]
struct Cli {
    /// Master seed for every randomized suite.
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,

    /// Upper bound on worker threads (needs the parallel feature).
    #[arg(long, global = true)]
    jobs: Option<usize>,

    /// Write the JSON output to this file instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    json_out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Full report for a pencil: chi, members, class, local data,
    /// sweep, decomposition, residues, and the plane criterion.
    Analyze {
        input: PathBuf,
        /// Primes to compute Witt data at (default: primes dividing
        /// the diagonalized coefficients).
        #[arg(long, value_delimiter = ',')]
        primes: Vec<u64>,
        /// Leave out the real place.
        #[arg(long)]
        skip_real: bool,
    },
    /// Witt data of a single form at several places.
    Local {
        input: PathBuf,
        #[arg(long, value_delimiter = ',')]
        primes: Vec<u64>,
        #[arg(long)]
        skip_real: bool,
    },
    /// Witt data of a single form at one place.
    Witt {
        input: PathBuf,
        /// "real" or a prime.
        #[arg(long)]
        place: String,
    },
    /// Search a quadric over a finite field for a projective m-plane
    /// avoiding the singular locus.
    Planes {
        input: PathBuf,
        /// Field as "p" or "p^k".
        #[arg(long)]
        fq: String,
        /// Projective dimension of the sought subspace.
        #[arg(long)]
        m: usize,
    },
    /// Residue classes of a pencil at the singular closed points.
    Residues { input: PathBuf },
    /// Verdict of the residue criterion for containing a plane over
    /// almost all completions.
    PlaneCriterion { input: PathBuf },
    /// Point search on F = G = 0: rational by height, or p-adic by
    /// reduction and Hensel lifting when --p is given.
    Search {
        input: PathBuf,
        /// Bound on the coordinates of the rational search.
        #[arg(long, conflicts_with_all = ["p", "precision"])]
        height: Option<u32>,
        /// Search over Q_p instead of Q.
        #[arg(long)]
        p: Option<u64>,
        /// p-adic digits to certify (default 8 for p = 2, else 4).
        #[arg(long, requires = "p")]
        precision: Option<u32>,
    },
    /// Seeded verification suites cross-checking the closed forms
    /// against brute-force oracles.
    Verify {
        /// Suites to run (default: all).
        #[arg(long = "suite")]
        suites: Vec<String>,
        /// Multiplier on every randomized case count.
        #[arg(long, default_value_t = 1)]
        size: u32,
        /// Directory for replayable counterexample fixtures.
        #[arg(long, value_name = "DIR", default_value = "counterexamples")]
        counterexamples: PathBuf,
    },
}

/// Failure with the exit code it maps to.
enum Failure {
    Usage(String),
    Validation(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Validation(_) => 2,
        }
    }
    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Validation(m) => m,
        }
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn validation(e: quadrics::Error) -> Failure {
    Failure::Validation(e.to_string())
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    let json_out = cli.json_out.clone();
    match run(cli) {
        Ok((json, code)) => {
            if let Err(f) = emit(&json, json_out.as_deref()) {
                eprintln!("error: {}", f.message());
                std::process::exit(f.code());
            }
            std::process::exit(code);
        }
        Err(f) => {
            eprintln!("error: {}", f.message());
            std::process::exit(f.code());
        }
    }
}

fn emit(json: &str, out: Option<&Path>) -> Result<(), Failure> {
    match out {
        None => {
            println!("{}", json);
            Ok(())
        }
        Some(path) => fs::write(path, format!("{}\n", json))
            .map_err(|e| usage(format!("cannot write {}: {}", path.display(), e))),
    }
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| usage(format!("cannot read {}: {}", path.display(), e)))?;
    // serde_json errors carry line and column.
    serde_json::from_str(&text).map_err(|e| usage(format!("{}: {}", path.display(), e)))
}

fn load_pencil(path: &Path) -> Result<Pencil, Failure> {
    read_json::<PencilInput>(path)?.to_pencil().map_err(validation)
}

fn load_form(path: &Path) -> Result<QuadraticForm<Rationals>, Failure> {
    read_json::<FormInput>(path)?.to_form().map_err(validation)
}

fn pretty<T: serde::Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("report types serialize")
}

/// Places from the flags; None means the caller should use defaults.
fn places_from_flags(primes: &[u64], skip_real: bool) -> Result<Option<Vec<LocalPlace>>, Failure> {
    if primes.is_empty() && !skip_real {
        return Ok(None);
    }
    let mut out = Vec::new();
    if !skip_real {
        out.push(LocalPlace::Real);
    }
    let mut sorted = primes.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    for p in sorted {
        out.push(LocalPlace::prime(p).map_err(|e| usage(e.to_string()))?);
    }
    Ok(Some(out))
}

fn parse_place(s: &str) -> Result<LocalPlace, Failure> {
    if s == "real" {
        return Ok(LocalPlace::Real);
    }
    let p: u64 = s
        .parse()
        .map_err(|_| usage(format!("place must be \"real\" or a prime, got {:?}", s)))?;
    LocalPlace::prime(p).map_err(|e| usage(e.to_string()))
}

fn parse_fq(s: &str) -> Result<(u64, usize), Failure> {
    let (p, k) = match s.split_once('^') {
        None => (s, "1"),
        Some((p, k)) => (p, k),
    };
    let p: u64 = p
        .parse()
        .map_err(|_| usage(format!("field must be \"p\" or \"p^k\", got {:?}", s)))?;
    let k: usize = k
        .parse()
        .map_err(|_| usage(format!("field must be \"p\" or \"p^k\", got {:?}", s)))?;
    if k == 0 {
        return Err(usage("extension degree must be at least 1"));
    }
    Ok((p, k))
}

#[cfg(feature = "parallel")]
fn with_jobs<T: Send>(jobs: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T, Failure> {
    match jobs {
        None => Ok(f()),
        Some(0) => Err(usage("--jobs must be at least 1")),
        Some(j) => rayon::ThreadPoolBuilder::new()
            .num_threads(j)
            .build()
            .map(|pool| pool.install(f))
            .map_err(|e| usage(format!("cannot build thread pool: {}", e))),
    }
}

#[cfg(not(feature = "parallel"))]
fn with_jobs<T: Send>(jobs: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T, Failure> {
    match jobs {
        Some(0) => Err(usage("--jobs must be at least 1")),
        _ => Ok(f()),
    }
}

/// Runs the command, returning the full JSON output and the exit code.
fn run(cli: Cli) -> Result<(String, i32), Failure> {
    match cli.command {
        Command::Analyze {
            input,
            primes,
            skip_real,
        } => {
            let x = load_pencil(&input)?;
            let places = match places_from_flags(&primes, skip_real)? {
                Some(p) => p,
                None => default_places(&x).map_err(validation)?,
            };
            let report = analyze(&x, &places).map_err(validation)?;
            Ok((pretty(&report), 0))
        }

        Command::Local {
            input,
            primes,
            skip_real,
        } => {
            let q = load_form(&input)?;
            let places = match places_from_flags(&primes, skip_real)? {
                Some(p) => p,
                None => default_places_form(&q).map_err(validation)?,
            };
            let mut rows = Vec::new();
            for v in places {
                rows.push(WittRow::from_witt(
                    &witt_index_local(&q, v).map_err(validation)?,
                ));
            }
            Ok((pretty(&rows), 0))
        }

        Command::Witt { input, place } => {
            let q = load_form(&input)?;
            let v = parse_place(&place)?;
            let row = WittRow::from_witt(&witt_index_local(&q, v).map_err(validation)?);
            Ok((pretty(&row), 0))
        }

        Command::Planes { input, fq, m } => {
            let q = load_form(&input)?;
            let (p, k) = parse_fq(&fq)?;
            LocalPlace::prime(p).map_err(|e| usage(e.to_string()))?;
            let fp = Fp::new(p);
            let reduced = reduce_form_mod_p(&q, &fp).map_err(validation)?;
            let value = if k == 1 {
                let found = isotropic_subspace_fq(&reduced, m).map_err(validation)?;
                serde_json::json!({
                    "field": format!("{}", p),
                    "m": m,
                    "found": found.is_some(),
                    "basis": found.map(|s| s.basis_rows()),
                })
            } else {
                let field = extension_field(p, k).map_err(validation)?;
                let extended = extend_form_to_fq(&reduced, &field);
                let found = isotropic_subspace_fq(&extended, m).map_err(validation)?;
                serde_json::json!({
                    "field": format!("{}^{}", p, k),
                    "modulus": &*field.modulus,
                    "m": m,
                    "found": found.is_some(),
                    "basis": found.map(|s| s.basis_rows()),
                })
            };
            Ok((pretty(&value), 0))
        }

        Command::Residues { input } => {
            let x = load_pencil(&input)?;
            let section = residue_report(&x).map_err(validation)?;
            Ok((pretty(&section), 0))
        }

        Command::PlaneCriterion { input } => {
            let x = load_pencil(&input)?;
            let ctx = ResidueContext::new(x).map_err(validation)?;
            let verdict = plane_criterion(&ctx).map_err(validation)?;
            Ok((pretty(&VerdictJson::from_verdict(&verdict)), 0))
        }

        Command::Search {
            input,
            height,
            p,
            precision,
        } => {
            let x = load_pencil(&input)?;
            let value = match p {
                Some(p) => {
                    let precision = precision.unwrap_or(if p == 2 { 8 } else { 4 });
                    match local_point_search_intersection(&x, p, precision)
                        .map_err(validation)?
                    {
                        LocalPointSearch::FoundSmoothLift { point, modulus } => {
                            serde_json::json!({
                                "mode": "local",
                                "p": p,
                                "found": true,
                                "point": dec(&point),
                                "modulus": modulus.to_string(),
                            })
                        }
                        LocalPointSearch::NotFoundUpTo { precision } => serde_json::json!({
                            "mode": "local",
                            "p": p,
                            "found": false,
                            "searchedPrecision": precision,
                        }),
                    }
                }
                None => {
                    let height = height.unwrap_or(20);
                    if height == 0 {
                        return Err(usage("--height must be at least 1"));
                    }
                    match rational_point_search(&x, height) {
                        Some(point) => serde_json::json!({
                            "mode": "rational",
                            "height": height,
                            "found": true,
                            "point": dec(&point),
                        }),
                        None => serde_json::json!({
                            "mode": "rational",
                            "height": height,
                            "found": false,
                        }),
                    }
                }
            };
            Ok((pretty(&value), 0))
        }

        Command::Verify {
            suites,
            size,
            counterexamples,
        } => {
            for s in &suites {
                if !SUITES.contains(&s.as_str()) {
                    return Err(usage(format!(
                        "unknown suite {:?}; known suites: {}",
                        s,
                        SUITES.join(", ")
                    )));
                }
            }
            let names = if suites.is_empty() { None } else { Some(suites) };
            let seed = cli.seed;
            let report = with_jobs(cli.jobs, move || run_all(seed, size, names.as_deref()))?
                .map_err(validation)?;
            let code = if report.passed {
                0
            } else {
                dump_counterexamples(&report, &counterexamples)?;
                3
            };
            Ok((pretty(&report), code))
        }
    }
}

fn dec<T: ToString>(point: &[T]) -> Vec<String> {
    point.iter().map(|c| c.to_string()).collect()
}

fn dump_counterexamples(report: &VerifyReport, dir: &Path) -> Result<(), Failure> {
    fs::create_dir_all(dir)
        .map_err(|e| usage(format!("cannot create {}: {}", dir.display(), e)))?;
    for suite in &report.suites {
        for (i, failure) in suite.failures.iter().enumerate() {
            let path = dir.join(format!("{}-{:02}.json", suite.suite, i));
            let body = match &failure.fixture {
                Some(fixture) => pretty(fixture),
                None => pretty(&serde_json::json!({ "description": failure.description })),
            };
            fs::write(&path, format!("{}\n", body))
                .map_err(|e| usage(format!("cannot write {}: {}", path.display(), e)))?;
            eprintln!("counterexample: {} ({})", path.display(), failure.description);
        }
    }
    Ok(())
}
