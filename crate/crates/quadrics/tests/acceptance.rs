//! The acceptance gate: ten criteria, one test per criterion, each
//! printed as its own pass/fail line by the harness. Seeds, case
//! counts, and time budgets are pinned here.

use quadrics::verify::{run_all, run_suite, SuiteConfig, SuiteOutcome};
use std::time::{Duration, Instant};

const SEED: u64 = 42;
const HILBERT_BUDGET: Duration = Duration::from_secs(10);
const WITT_BUDGET: Duration = Duration::from_secs(30);
// The determinism check runs every suite twice; its ceiling keeps the
// whole gate inside the two-minute envelope.
const DETERMINISM_BUDGET: Duration = Duration::from_secs(60);

fn run(suite: &str) -> SuiteOutcome {
    run_suite(&SuiteConfig {
        seed: SEED,
        suite: suite.into(),
        size: 1,
    })
    .unwrap()
}

fn assert_clean(out: &SuiteOutcome, cases: usize) {
    assert_eq!(
        out.cases, cases,
        "{} ran {} cases, pinned count is {}",
        out.suite, out.cases, cases
    );
    assert!(
        out.passed(),
        "{}: {} of {} cases failed; first: {}",
        out.suite,
        out.failures.len(),
        out.cases,
        out.failures[0].description
    );
}

#[test]
fn criterion_01_hilbert_reciprocity() {
    let t = Instant::now();
    assert_clean(&run("hilbert-reciprocity"), 500);
    assert!(t.elapsed() <= HILBERT_BUDGET, "took {:?}", t.elapsed());
}

#[test]
fn criterion_02_witt_oracle_equivalence() {
    let t = Instant::now();
    // 1286 diagonal multisets over eight entries in dims 1..=5, times
    // four primes.
    assert_clean(&run("witt-oracle"), 5144);
    assert!(t.elapsed() <= WITT_BUDGET, "took {:?}", t.elapsed());
}

#[test]
fn criterion_03_singular_member_multiplicity_bound() {
    assert_clean(&run("lemma-rank-multiplicity"), 100);
}

#[test]
fn criterion_04_dual_quadric_correspondence() {
    assert_clean(&run("dual-quadric"), 20);
}

#[test]
fn criterion_05_hyperbolic_splitting_equivalence() {
    // 164 diagonal multisets over F_3 in dims 1..=8, times three
    // plane dimensions.
    assert_clean(&run("hyperbolic-splitting"), 492);
}

#[test]
fn criterion_06_taxonomy_fixtures() {
    // Seven classifications plus the two four-rank-6 orthogonality
    // identities.
    assert_clean(&run("taxonomy"), 9);
}

#[test]
fn criterion_07_worked_example_reproduction() {
    assert_clean(&run("example-a6"), 4);
}

#[test]
fn criterion_08_mordell_sweep() {
    assert_clean(&run("mordell-sweep"), 50);
}

#[test]
fn criterion_09_amer_brumer_over_f3() {
    assert_clean(&run("amer-brumer"), 50);
}

#[test]
fn criterion_10_verify_is_deterministic() {
    let t = Instant::now();
    let first = run_all(SEED, 1, None).unwrap();
    let second = run_all(SEED, 1, None).unwrap();
    let a = serde_json::to_vec_pretty(&first).unwrap();
    let b = serde_json::to_vec_pretty(&second).unwrap();
    assert_eq!(a, b, "reports differ between runs");
    assert!(first.passed, "verify reported failures");
    assert!(t.elapsed() <= DETERMINISM_BUDGET, "took {:?}", t.elapsed());
}
