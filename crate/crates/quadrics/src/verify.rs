//! Seeded verification suites pitting the closed-form invariants against
//! brute-force oracles and exhaustive searches.
//!
//! Each suite draws its randomness from a stream named after the suite,
//! split off a single master seed, so any suite can be replayed alone.
//! Outcomes carry no timing or machine data: a fixed config produces a
//! byte-identical report. Failing cases are serialized as replayable
//! input fixtures.

use crate::forms::{Mat, QuadraticForm, Subspace};
use crate::geometry::{
    dual_quadric, enumerate_points_fq, extend_form_to_fq, f27, isotropic_subspace_fq,
    witt_index_fq,
};
use crate::local::oracle::witt_index_oracle;
use crate::local::{checking_places, hilbert_symbol, witt_index_local, LocalPlace};
use crate::pencil::{MemberLocus, Pencil, PencilTag};
use crate::report::{FormInput, PencilInput};
use crate::residues::{
    plane_criterion, residue_of_clifford, ClosedPoint, PlaneCriterionVerdict, ResidueContext,
    ResidueValue,
};
use crate::scalars::{rat_int, Field, Fp, NumberField, Poly, Rat, Rationals};
use crate::scalars::squares::square_class;
use crate::{par, Error, Result};
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Canonical suite order; `run_all` reports in this order regardless of
/// execution schedule.
pub const SUITES: [&str; 9] = [
    "hilbert-reciprocity",
    "witt-oracle",
    "lemma-rank-multiplicity",
    "dual-quadric",
    "hyperbolic-splitting",
    "taxonomy",
    "example-a6",
    "mordell-sweep",
    "amer-brumer",
];

/// What to run and how: the master seed, the suite, and a multiplier
/// applied to every randomized case count.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SuiteConfig {
    pub seed: u64,
    pub suite: String,
    pub size: u32,
}

/// One failing case, with enough data to replay it.
#[derive(Serialize, Deserialize, Clone, PartialEq, Debug)]
#[serde(deny_unknown_fields)]
pub struct Failure {
    pub description: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fixture: Option<serde_json::Value>,
}

/// Result of one suite: how many cases ran and which failed.
#[derive(Serialize, Deserialize, Clone, PartialEq, Debug)]
#[serde(deny_unknown_fields)]
pub struct SuiteOutcome {
    pub suite: String,
    pub cases: usize,
    pub failures: Vec<Failure>,
}

impl SuiteOutcome {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Aggregated verification report; serializes deterministically.
#[derive(Serialize, Deserialize, Clone, PartialEq, Debug)]
#[serde(deny_unknown_fields)]
pub struct VerifyReport {
    pub schema: u32,
    pub seed: u64,
    pub size: u32,
    pub suites: Vec<SuiteOutcome>,
    pub passed: bool,
}

/// The named-stream splitter: FNV-1a over the suite name, folded into
/// the master seed.
pub fn suite_rng(seed: u64, suite: &str) -> ChaCha8Rng {
    let mut h: u64 = 0xcbf29ce484222325;
    for b in suite.bytes() {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x100000001b3);
    }
    ChaCha8Rng::seed_from_u64(h ^ seed)
}

/// Runs one suite by name.
pub fn run_suite(config: &SuiteConfig) -> Result<SuiteOutcome> {
    let rng = suite_rng(config.seed, &config.suite);
    let size = config.size.max(1) as usize;
    let (cases, failures) = match config.suite.as_str() {
        "hilbert-reciprocity" => hilbert_reciprocity(rng, 500 * size)?,
        "witt-oracle" => witt_oracle()?,
        "lemma-rank-multiplicity" => lemma_rank_multiplicity(rng, 100 * size)?,
        "dual-quadric" => dual_quadric_suite(rng, 20 * size)?,
        "hyperbolic-splitting" => hyperbolic_splitting()?,
        "taxonomy" => taxonomy()?,
        "example-a6" => example_a6()?,
        "mordell-sweep" => mordell_sweep_suite(rng, 50 * size)?,
        "amer-brumer" => amer_brumer(rng, 50 * size)?,
        other => {
            return Err(Error::Precondition(format!(
                "unknown suite {:?}; known suites: {}",
                other,
                SUITES.join(", ")
            )))
        }
    };
    Ok(SuiteOutcome {
        suite: config.suite.clone(),
        cases,
        failures,
    })
}

/// Runs the named suites (all of them by default) and assembles the
/// report in canonical order. Suites are independent and may execute
/// concurrently; assembly is sequential.
pub fn run_all(seed: u64, size: u32, names: Option<&[String]>) -> Result<VerifyReport> {
    let selected: Vec<String> = match names {
        None => SUITES.iter().map(|s| s.to_string()).collect(),
        Some(ns) => {
            for n in ns {
                if !SUITES.contains(&n.as_str()) {
                    return Err(Error::Precondition(format!(
                        "unknown suite {:?}; known suites: {}",
                        n,
                        SUITES.join(", ")
                    )));
                }
            }
            ns.to_vec()
        }
    };
    let outcomes = par::map_range(selected.len(), |i| {
        run_suite(&SuiteConfig {
            seed,
            suite: selected[i].clone(),
            size,
        })
    });
    let mut suites = Vec::with_capacity(outcomes.len());
    for o in outcomes {
        suites.push(o?);
    }
    let passed = suites.iter().all(|s| s.passed());
    Ok(VerifyReport {
        schema: crate::report::SCHEMA_VERSION,
        seed,
        size,
        suites,
        passed,
    })
}

type SuiteBody = (usize, Vec<Failure>);

fn pencil_fixture(x: &Pencil) -> Option<serde_json::Value> {
    serde_json::to_value(PencilInput::from_pencil(x)).ok()
}

/// Product formula: over the real place and the primes dividing 2ab,
/// the Hilbert symbols of (a, b) multiply to 1.
fn hilbert_reciprocity(mut rng: ChaCha8Rng, count: usize) -> Result<SuiteBody> {
    let mut failures = Vec::new();
    for _ in 0..count {
        let mut draw = || loop {
            let v = rng.gen_range(-10_000i64..=10_000);
            if v != 0 {
                return v;
            }
        };
        let a = draw();
        let b = draw();
        let ar = rat_int(a);
        let br = rat_int(b);
        let mut product = 1i32;
        for v in checking_places(&[ar.clone(), br.clone()])? {
            product *= hilbert_symbol(&ar, &br, v);
        }
        if product != 1 {
            failures.push(Failure {
                description: format!("product of local symbols for ({}, {}) is {}", a, b, product),
                fixture: Some(serde_json::json!({ "a": a, "b": b })),
            });
        }
    }
    Ok((count, failures))
}

fn for_each_multiset(choices: usize, len: usize, f: &mut impl FnMut(&[usize])) {
    let mut idx = vec![0usize; len];
    loop {
        f(&idx);
        let mut k = len;
        loop {
            if k == 0 {
                return;
            }
            k -= 1;
            if idx[k] + 1 < choices {
                let v = idx[k] + 1;
                for slot in idx.iter_mut().skip(k) {
                    *slot = v;
                }
                break;
            }
        }
    }
}

/// Closed-form local Witt index against the mod-p^k brute-force oracle,
/// exhaustively over small diagonal forms. Both sides are invariant
/// under reordering the diagonal, so one ordered representative per
/// multiset covers every form in the stated family.
fn witt_oracle() -> Result<SuiteBody> {
    let entries = [1i64, -1, 2, -2, 3, -3, 5, -5];
    let primes = [2u64, 3, 5, 7];
    let mut cases = 0usize;
    let mut failures = Vec::new();
    for dim in 1..=5usize {
        for_each_multiset(entries.len(), dim, &mut |picks| {
            let diag: Vec<Rat> = picks.iter().map(|&i| rat_int(entries[i])).collect();
            let q = QuadraticForm::from_diag(Rationals, &diag);
            for p in primes {
                cases += 1;
                let formula = match witt_index_local(&q, LocalPlace::Prime(p)) {
                    Ok(w) => w.witt_index,
                    Err(e) => {
                        failures.push(Failure {
                            description: format!("witt formula failed at p={}: {}", p, e),
                            fixture: form_fixture(&q),
                        });
                        return;
                    }
                };
                let oracle = witt_index_oracle(&q, p);
                if formula != oracle {
                    failures.push(Failure {
                        description: format!(
                            "witt index at p={} disagrees: formula {}, oracle {}",
                            p, formula, oracle
                        ),
                        fixture: form_fixture(&q),
                    });
                }
            }
        });
    }
    Ok((cases, failures))
}

fn form_fixture(q: &QuadraticForm<Rationals>) -> Option<serde_json::Value> {
    serde_json::to_value(FormInput::from_form(q)).ok()
}

fn random_symmetric(rng: &mut ChaCha8Rng, dim: usize, bound: i64) -> Mat<Rationals> {
    let mut m = Mat::zeros(Rationals, dim, dim);
    for i in 0..dim {
        for j in i..dim {
            let v = rat_int(rng.gen_range(-bound..=bound));
            m.set(i, j, v.clone());
            m.set(j, i, v);
        }
    }
    m
}

fn random_pencil(rng: &mut ChaCha8Rng, dim: usize, bound: i64) -> Pencil {
    loop {
        let f = match QuadraticForm::new(random_symmetric(rng, dim, bound)) {
            Ok(q) => q,
            Err(_) => continue,
        };
        let g = match QuadraticForm::new(random_symmetric(rng, dim, bound)) {
            Ok(q) => q,
            Err(_) => continue,
        };
        if let Ok(x) = Pencil::new(f, g) {
            return x;
        }
    }
}

/// Every singular member of a pencil in n variables is a root of chi of
/// order at least n minus its rank.
fn lemma_rank_multiplicity(mut rng: ChaCha8Rng, count: usize) -> Result<SuiteBody> {
    let mut failures = Vec::new();
    let mut cases = 0usize;
    while cases < count {
        let dim = rng.gen_range(4..=8usize);
        let x = random_pencil(&mut rng, dim, 10);
        let members = match x.singular_members() {
            Ok(m) => m,
            Err(Error::DegeneratePencil) => continue,
            Err(e) => return Err(e),
        };
        cases += 1;
        for m in &members {
            if (m.multiplicity as usize) < dim - m.rank_at_root {
                failures.push(Failure {
                    description: format!(
                        "member of rank {} has multiplicity {} < {}",
                        m.rank_at_root,
                        m.multiplicity,
                        dim - m.rank_at_root
                    ),
                    fixture: pencil_fixture(&x),
                });
            }
        }
    }
    Ok((cases, failures))
}

fn random_symmetric_fp(rng: &mut ChaCha8Rng, fp: &Fp, dim: usize) -> Mat<Fp> {
    let p = fp.reduce_i64(-1) + 1;
    let mut m = Mat::zeros(*fp, dim, dim);
    for i in 0..dim {
        for j in i..dim {
            let v = rng.gen_range(0..p);
            m.set(i, j, v);
            m.set(j, i, v);
        }
    }
    m
}

/// The dual quadric A B^{-1} A cuts Q_A exactly in the points whose
/// tangent hyperplane is tangent to Q_B, checked pointwise over the
/// whole projective space.
fn dual_quadric_suite(mut rng: ChaCha8Rng, count: usize) -> Result<SuiteBody> {
    let combos = [(3u64, 3usize), (3, 4), (5, 3), (5, 4)];
    let mut failures = Vec::new();
    for case in 0..count {
        let (p, dim) = combos[case % combos.len()];
        let fp = Fp::new(p);
        let (qa, qb) = loop {
            let a = random_symmetric_fp(&mut rng, &fp, dim);
            let b = random_symmetric_fp(&mut rng, &fp, dim);
            if a.rank() == dim && b.rank() == dim && a != b {
                break (
                    QuadraticForm::new(a).unwrap(),
                    QuadraticForm::new(b).unwrap(),
                );
            }
        };
        let dual = dual_quadric(&qa, &qb)?;
        for pt in enumerate_points_fq(&[&qa])? {
            let grad = qa.gram().mul_vec(pt.coords());
            let hyperplane = Subspace::kernel_of(&Mat::from_rows(fp, vec![grad]));
            let tangent_to_b = qb.restrict(&hyperplane.basis_rows()).rank() < dim - 1;
            let on_dual = fp.is_zero(&dual.eval(pt.coords()));
            if tangent_to_b != on_dual {
                failures.push(Failure {
                    description: format!(
                        "dual locus mismatch at {:?} over F_{} in {} variables",
                        pt.coords(),
                        p,
                        dim
                    ),
                    fixture: Some(serde_json::json!({
                        "p": p,
                        "A": fp_rows(&qa),
                        "B": fp_rows(&qb),
                    })),
                });
            }
        }
    }
    Ok((count, failures))
}

fn fp_rows(q: &QuadraticForm<Fp>) -> Vec<Vec<u64>> {
    (0..q.dim()).map(|i| q.gram().row(i).to_vec()).collect()
}

/// A quadric over F_3 carries a projective m-plane clear of its vertex
/// iff the nondegenerate quotient splits m+1 hyperbolic planes, checked
/// exhaustively for diagonal forms.
fn hyperbolic_splitting() -> Result<SuiteBody> {
    let fp = Fp::new(3);
    let mut cases = 0usize;
    let mut failures = Vec::new();
    let mut err: Option<Error> = None;
    for dim in 1..=8usize {
        for_each_multiset(3, dim, &mut |picks| {
            if err.is_some() {
                return;
            }
            let diag: Vec<u64> = picks.iter().map(|&v| v as u64).collect();
            let q = QuadraticForm::from_diag(fp, &diag);
            for m in 0..=2usize {
                cases += 1;
                let found = match isotropic_subspace_fq(&q, m) {
                    Ok(s) => s.is_some(),
                    Err(e) => {
                        err = Some(e);
                        return;
                    }
                };
                let witt = match witt_index_fq(&q) {
                    Ok(w) => w,
                    Err(e) => {
                        err = Some(e);
                        return;
                    }
                };
                if found != (witt >= m + 1) {
                    failures.push(Failure {
                        description: format!(
                            "diag {:?} over F_3: search {} but witt index {} for m = {}",
                            diag,
                            if found { "succeeds" } else { "fails" },
                            witt,
                            m
                        ),
                        fixture: Some(serde_json::json!({ "p": 3, "diag": diag, "m": m })),
                    });
                }
            }
        });
    }
    if let Some(e) = err {
        return Err(e);
    }
    Ok((cases, failures))
}

fn diag_form(entries: &[i64]) -> QuadraticForm<Rationals> {
    let v: Vec<Rat> = entries.iter().map(|&x| rat_int(x)).collect();
    QuadraticForm::from_diag(Rationals, &v)
}

fn taxonomy_fixtures() -> Vec<(&'static str, Pencil, PencilTag)> {
    let mut out: Vec<(&'static str, Pencil, PencilTag)> = Vec::new();

    out.push((
        "degenerate",
        Pencil::new(
            diag_form(&[1, 2, 3, 4, 5, 6, 7, 0]),
            diag_form(&[2, 1, 4, 3, 6, 5, 8, 0]),
        )
        .unwrap(),
        PencilTag::DegeneratePencil,
    ));

    out.push((
        "rank-at-most-5",
        Pencil::new(diag_form(&[1, 1, 1, 1, 1, 0, 0, 0]), diag_form(&[1; 8])).unwrap(),
        PencilTag::RankAtMost5,
    ));

    out.push((
        "rank-6-over-base",
        Pencil::new(
            diag_form(&[0, 0, 1, 1, 1, 1, 1, 1]),
            diag_form(&[1, 1, 2, 3, 4, 5, 6, 7]),
        )
        .unwrap(),
        PencilTag::Rank6OverBase,
    ));

    let mut gm = Mat::zeros(Rationals, 8, 8);
    for blk in 0..2 {
        let o = 2 * blk;
        gm.set(o, o, rat_int(1));
        gm.set(o, o + 1, rat_int(1));
        gm.set(o + 1, o, rat_int(1));
        gm.set(o + 1, o + 1, rat_int(-1));
    }
    for (i, v) in [1i64, 2, 3, 4].iter().enumerate() {
        gm.set(4 + i, 4 + i, rat_int(*v));
    }
    out.push((
        "conjugate-rank-6-pair",
        Pencil::new(QuadraticForm::new(gm).unwrap(), diag_form(&[1; 8])).unwrap(),
        PencilTag::ConjugateRank6Pair,
    ));

    let mut gm = Mat::zeros(Rationals, 8, 8);
    let block: [[i64; 3]; 3] = [[0, 1, 0], [1, 1, 1], [0, 1, -1]];
    for blk in 0..2 {
        let o = 3 * blk;
        for i in 0..3 {
            for j in 0..3 {
                gm.set(o + i, o + j, rat_int(block[i][j]));
            }
        }
    }
    gm.set(6, 6, rat_int(1));
    gm.set(7, 7, rat_int(5));
    out.push((
        "three-rank-6-cubic",
        Pencil::new(QuadraticForm::new(gm).unwrap(), diag_form(&[1; 8])).unwrap(),
        PencilTag::ThreeRank6Cubic,
    ));

    out.push(("four-rank-6", four_rank6_normal_form(), PencilTag::FourRank6));

    out.push((
        "regular",
        Pencil::new(diag_form(&[1; 8]), diag_form(&[1, 2, 3, 4, 5, 6, 7, 8])).unwrap(),
        PencilTag::Regular,
    ));

    out
}

fn four_rank6_normal_form() -> Pencil {
    let mut fg = Mat::zeros(Rationals, 8, 8);
    let mut gg = Mat::zeros(Rationals, 8, 8);
    for i in 0..4 {
        let o = 2 * i;
        fg.set(o, o + 1, rat_int(1));
        fg.set(o + 1, o, rat_int(1));
        gg.set(o, o + 1, rat_int(i as i64 + 1));
        gg.set(o + 1, o, rat_int(i as i64 + 1));
    }
    Pencil::new(
        QuadraticForm::new(fg).unwrap(),
        QuadraticForm::new(gg).unwrap(),
    )
    .unwrap()
}

/// The hand-built fixture per taxonomy case classifies as intended, and
/// the four-rank-6 decomposition is orthogonal for both forms exactly.
fn taxonomy() -> Result<SuiteBody> {
    let mut cases = 0usize;
    let mut failures = Vec::new();
    for (label, x, want) in taxonomy_fixtures() {
        cases += 1;
        let got = x.classify()?.tag;
        if got != want {
            failures.push(Failure {
                description: format!(
                    "{} fixture classified as {}, expected {}",
                    label,
                    got.as_str(),
                    want.as_str()
                ),
                fixture: pencil_fixture(&x),
            });
        }
        if want != PencilTag::FourRank6 {
            continue;
        }
        let dec = x.four_rank6_decompose()?;
        let k = dec.field.clone();
        let lift =
            |m: &Mat<Rationals>| -> Mat<NumberField> { m.map(k.clone(), |r| k.from_rat(r.clone())) };
        for (gram_name, gram) in [("F", lift(x.f().gram())), ("G", lift(x.g().gram()))] {
            cases += 1;
            let mut clean = true;
            for i in 0..dec.eigenspaces.len() {
                for j in (i + 1)..dec.eigenspaces.len() {
                    for u in &dec.eigenspaces[i] {
                        for v in &dec.eigenspaces[j] {
                            let mut s = k.zero();
                            let gv = gram.mul_vec(v);
                            for (a, b) in u.iter().zip(gv.iter()) {
                                s = k.add(&s, &k.mul(a, b));
                            }
                            if !k.is_zero(&s) {
                                clean = false;
                            }
                        }
                    }
                }
            }
            if !clean {
                failures.push(Failure {
                    description: format!(
                        "eigenspace pairing under {} is not orthogonal",
                        gram_name
                    ),
                    fixture: pencil_fixture(&x),
                });
            }
        }
    }
    Ok((cases, failures))
}

/// The worked singular family: chi gains the factor t twice, the
/// residue there is the class of -1, and the criterion reports the
/// obstruction; a regular pencil reports none.
fn example_a6() -> Result<SuiteBody> {
    let mut cases = 0usize;
    let mut failures = Vec::new();
    let x = Pencil::new(
        diag_form(&[0, 0, 1, 1, 1, 1, 1, 1]),
        diag_form(&[1, 1, 2, 3, 4, 5, 6, 7]),
    )?;
    let t = Poly::from_i64(Rationals, &[0, 1]);

    cases += 1;
    let members = x.singular_members()?;
    let at_zero = members.iter().find(
        |m| matches!(&m.locus, MemberLocus::Factor { poly, .. } if poly == &t),
    );
    match at_zero {
        Some(m) if m.multiplicity == 2 && m.rank_at_root == 6 => {}
        other => failures.push(Failure {
            description: format!("factor t should carry multiplicity 2 at rank 6, got {:?}", other),
            fixture: pencil_fixture(&x),
        }),
    }

    cases += 1;
    let ctx = ResidueContext::new(x.clone())?;
    let residue = residue_of_clifford(&ctx, &ClosedPoint::finite(t.clone())?)?;
    let minus_one = match &residue.class {
        ResidueValue::Rational(q) => square_class(q)? == BigInt::from(-1),
        ResidueValue::Algebraic { .. } => false,
    };
    if !minus_one {
        failures.push(Failure {
            description: format!("residue at t = 0 is {:?}, expected the class of -1", residue.class),
            fixture: pencil_fixture(&x),
        });
    }

    cases += 1;
    match plane_criterion(&ctx)? {
        PlaneCriterionVerdict::ObstructionAt { point, .. }
            if point == ClosedPoint::finite(t.clone())? => {}
        other => failures.push(Failure {
            description: format!("plane criterion returned {:?}, expected the obstruction at t", other),
            fixture: pencil_fixture(&x),
        }),
    }

    cases += 1;
    let regular = Pencil::new(diag_form(&[1; 8]), diag_form(&[1, 2, 3, 4, 5, 6, 7, 8]))?;
    match plane_criterion(&ResidueContext::new(regular.clone())?)? {
        PlaneCriterionVerdict::ResiduesAllTrivial => {}
        other => failures.push(Failure {
            description: format!("regular pencil returned {:?}, expected all residues trivial", other),
            fixture: pencil_fixture(&regular),
        }),
    }

    Ok((cases, failures))
}

/// Random pencils with every member of rank at least 6 admit a member
/// of real signature within 2 of balanced.
fn mordell_sweep_suite(mut rng: ChaCha8Rng, count: usize) -> Result<SuiteBody> {
    let mut cases = 0usize;
    let mut failures = Vec::new();
    while cases < count {
        let x = random_pencil(&mut rng, 8, 5);
        let members = match x.singular_members() {
            Ok(m) => m,
            Err(Error::DegeneratePencil) => continue,
            Err(e) => return Err(e),
        };
        if members.iter().any(|m| m.rank_at_root < 6) {
            continue;
        }
        cases += 1;
        match x.mordell_sweep() {
            Ok(s) => {
                let (pos, neg) = s.signature;
                if pos.abs_diff(neg) > 2 {
                    failures.push(Failure {
                        description: format!(
                            "sweep found signature ({}, {}) at {:?}",
                            pos, neg, s.point
                        ),
                        fixture: pencil_fixture(&x),
                    });
                }
            }
            Err(e) => failures.push(Failure {
                description: format!("sweep failed: {}", e),
                fixture: pencil_fixture(&x),
            }),
        }
    }
    Ok((cases, failures))
}

/// Amer-Brumer over F_3: a point over F_27 (odd degree) forces a point
/// over F_3 on an intersection of two quadrics in P^3.
fn amer_brumer(mut rng: ChaCha8Rng, count: usize) -> Result<SuiteBody> {
    let fp = Fp::new(3);
    let fq = f27();
    let mut cases = 0usize;
    let mut failures = Vec::new();
    while cases < count {
        // Rank >= 3 makes Q_A irreducible, so the intersection with any
        // non-proportional Q_B is a complete intersection curve.
        let a = random_symmetric_fp(&mut rng, &fp, 4);
        if QuadraticForm::new(a.clone()).unwrap().rank() < 3 {
            continue;
        }
        let b = random_symmetric_fp(&mut rng, &fp, 4);
        if b.rank() == 0 || proportional_fp(&fp, &a, &b) {
            continue;
        }
        cases += 1;
        let qa = QuadraticForm::new(a).unwrap();
        let qb = QuadraticForm::new(b).unwrap();
        if !enumerate_points_fq(&[&qa, &qb])?.is_empty() {
            continue;
        }
        let qa27 = extend_form_to_fq(&qa, &fq);
        let qb27 = extend_form_to_fq(&qb, &fq);
        let over_cubic = enumerate_points_fq(&[&qa27, &qb27])?;
        if !over_cubic.is_empty() {
            failures.push(Failure {
                description: format!(
                    "intersection has an F_27 point {:?} but no F_3 point",
                    over_cubic[0].coords()
                ),
                fixture: Some(serde_json::json!({
                    "p": 3,
                    "A": fp_rows(&qa),
                    "B": fp_rows(&qb),
                })),
            });
        }
    }
    Ok((cases, failures))
}

fn proportional_fp(fp: &Fp, a: &Mat<Fp>, b: &Mat<Fp>) -> bool {
    let n = a.rows();
    let mut ratio: Option<(u64, u64)> = None;
    for i in 0..n {
        for j in 0..n {
            let x = *a.get(i, j);
            let y = *b.get(i, j);
            match ratio {
                None if fp.is_zero(&x) && fp.is_zero(&y) => {}
                None => ratio = Some((x, y)),
                Some((rx, ry)) => {
                    // Cross-multiplication keeps the test division-free.
                    if !fp.is_zero(&fp.sub(&fp.mul(&x, &ry), &fp.mul(&y, &rx))) {
                        return false;
                    }
                }
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_streams_are_named_and_stable() {
        let mut a = suite_rng(42, "taxonomy");
        let mut b = suite_rng(42, "taxonomy");
        let mut c = suite_rng(42, "mordell-sweep");
        let x: u64 = a.gen();
        assert_eq!(x, b.gen::<u64>());
        assert_ne!(x, c.gen::<u64>());
    }

    #[test]
    fn unknown_suites_are_rejected() {
        let out = run_suite(&SuiteConfig {
            seed: 1,
            suite: "no-such-suite".into(),
            size: 1,
        });
        assert!(matches!(out, Err(Error::Precondition(_))));
    }

    #[test]
    fn taxonomy_and_example_suites_pass() {
        for suite in ["taxonomy", "example-a6"] {
            let out = run_suite(&SuiteConfig {
                seed: 42,
                suite: suite.into(),
                size: 1,
            })
            .unwrap();
            assert!(out.passed(), "{}: {:?}", suite, out.failures);
            assert!(out.cases > 0);
        }
    }

    #[test]
    fn small_randomized_suites_pass_and_are_deterministic() {
        // Size 0 clamps to 1; trimmed counts come from the acceptance
        // gate, this is the smoke check.
        let config = SuiteConfig {
            seed: 42,
            suite: "hilbert-reciprocity".into(),
            size: 1,
        };
        let first = run_suite(&config).unwrap();
        let second = run_suite(&config).unwrap();
        assert!(first.passed(), "{:?}", first.failures);
        assert_eq!(first, second);
        assert_eq!(first.cases, 500);
    }

    #[test]
    fn verify_report_serializes_deterministically() {
        let names = vec!["taxonomy".to_string(), "example-a6".to_string()];
        let a = run_all(42, 1, Some(&names)).unwrap();
        let b = run_all(42, 1, Some(&names)).unwrap();
        let ja = serde_json::to_string_pretty(&a).unwrap();
        let jb = serde_json::to_string_pretty(&b).unwrap();
        assert_eq!(ja, jb);
        assert!(a.passed);
        let back: VerifyReport = serde_json::from_str(&ja).unwrap();
        assert_eq!(a, back);
    }
}
